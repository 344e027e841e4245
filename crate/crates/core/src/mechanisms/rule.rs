use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{RoundRecord, ShootoutHistory, TeamId};
use crate::error::{Error, Result};

/// Maximum nesting depth of composite rules.
pub const MAX_COMPOSITE_DEPTH: usize = 4;

/// A shootout kicking-order rule.
///
/// The compact text form is `standard`, `abba`, `catchup`, `adj-catchup`
/// or `composite(<k>,<before>,<after>)`, where the `before` rule governs
/// rounds `1..k` and the `after` rule governs round `k` onwards.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Mechanism {
    /// ABAB: A opens every round.
    Standard,
    /// ABBA: A opens odd rounds, B opens even rounds, sudden death included.
    Alternating,
    /// Mirror the previous round unless its first kicker missed and its
    /// second kicker scored.
    CatchUp,
    /// Catch-Up in the regular phase; B opens the first sudden-death round,
    /// after which the opener alternates.
    AdjustedCatchUp,
    Composite {
        switch_round: u32,
        before: Box<Mechanism>,
        after: Box<Mechanism>,
    },
}

/// Whether recorded first kickers are validated against the rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Consistency {
    #[default]
    Strict,
    Unchecked,
}

/// The Catch-Up transition applied to a completed round.
fn catch_up_transition(prev: &RoundRecord) -> TeamId {
    if !prev.first_result.is_scored() && prev.second_result.is_scored() {
        prev.first_kicker
    } else {
        prev.first_kicker.other()
    }
}

impl Mechanism {
    pub fn composite(switch_round: u32, before: Mechanism, after: Mechanism) -> Result<Self> {
        let m = Mechanism::Composite {
            switch_round,
            before: Box::new(before),
            after: Box::new(after),
        };
        m.validate()?;
        Ok(m)
    }

    /// The three rules compared throughout the analysis, in report order.
    pub fn alternatives() -> [Mechanism; 3] {
        [
            Mechanism::CatchUp,
            Mechanism::AdjustedCatchUp,
            Mechanism::Alternating,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Mechanism::Standard => "standard",
            Mechanism::Alternating => "abba",
            Mechanism::CatchUp => "catchup",
            Mechanism::AdjustedCatchUp => "adj-catchup",
            Mechanism::Composite { .. } => "composite",
        }
    }

    /// Composite nesting depth; plain rules have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Mechanism::Composite { before, after, .. } => 1 + before.depth().max(after.depth()),
            _ => 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth() > MAX_COMPOSITE_DEPTH {
            return Err(Error::Domain(format!(
                "composite nesting depth {} exceeds {}",
                self.depth(),
                MAX_COMPOSITE_DEPTH
            )));
        }
        self.validate_switches()
    }

    fn validate_switches(&self) -> Result<()> {
        if let Mechanism::Composite {
            switch_round,
            before,
            after,
        } = self
        {
            if *switch_round < 2 {
                return Err(Error::Domain(format!(
                    "composite switch round must be at least 2, got {switch_round}"
                )));
            }
            before.validate_switches()?;
            after.validate_switches()?;
        }
        Ok(())
    }

    /// First kicker of `round` given only the previous round's record.
    ///
    /// `prev` must be `None` exactly when `round == 1`. No consistency
    /// checking happens here; see [`Mechanism::first_kicker`].
    pub fn next_first_kicker(
        &self,
        round: u32,
        prev: Option<&RoundRecord>,
        regular_rounds: u32,
    ) -> TeamId {
        self.kicker_at(round, round, prev, regular_rounds)
    }

    // `rel` is the round number as seen by this (possibly re-rooted) rule.
    fn kicker_at(
        &self,
        abs: u32,
        rel: u32,
        prev: Option<&RoundRecord>,
        regular_rounds: u32,
    ) -> TeamId {
        match self {
            Mechanism::Standard => TeamId::A,
            Mechanism::Alternating => {
                if rel % 2 == 1 {
                    TeamId::A
                } else {
                    TeamId::B
                }
            }
            Mechanism::CatchUp => prev.map_or(TeamId::A, catch_up_transition),
            Mechanism::AdjustedCatchUp => {
                if abs > regular_rounds {
                    if (abs - regular_rounds - 1).is_multiple_of(2) {
                        TeamId::B
                    } else {
                        TeamId::A
                    }
                } else {
                    prev.map_or(TeamId::A, catch_up_transition)
                }
            }
            Mechanism::Composite {
                switch_round,
                before,
                after,
            } => {
                if rel < *switch_round {
                    before.kicker_at(abs, rel, prev, regular_rounds)
                } else {
                    after.kicker_at(abs, rel - switch_round + 1, prev, regular_rounds)
                }
            }
        }
    }

    /// First kicker of `round` after the complete rounds in `history`.
    ///
    /// The history must hold exactly `round - 1` rounds. In strict mode every
    /// recorded first kicker is checked against this rule.
    pub fn first_kicker(
        &self,
        round: u32,
        history: &ShootoutHistory,
        consistency: Consistency,
    ) -> Result<TeamId> {
        if round == 0 {
            return Err(Error::Domain("rounds are numbered from 1".into()));
        }
        if history.len() as u64 != u64::from(round) - 1 {
            return Err(Error::Domain(format!(
                "round {round} needs a history of {} rounds, got {}",
                round - 1,
                history.len()
            )));
        }
        if consistency == Consistency::Strict {
            self.check_history(history)?;
        }
        Ok(self.next_first_kicker(round, history.rounds().last(), history.regular_rounds()))
    }

    /// Verifies that every recorded first kicker matches this rule.
    pub fn check_history(&self, history: &ShootoutHistory) -> Result<()> {
        let mut prev: Option<&RoundRecord> = None;
        for (i, rec) in history.rounds().iter().enumerate() {
            let round = i as u32 + 1;
            let expected = self.next_first_kicker(round, prev, history.regular_rounds());
            if expected != rec.first_kicker {
                return Err(Error::Inconsistent {
                    round,
                    expected,
                    found: rec.first_kicker,
                });
            }
            prev = Some(rec);
        }
        Ok(())
    }

    /// Absolute round from which every nested switch has happened.
    pub fn settled_from(&self) -> u32 {
        self.settled_at(1)
    }

    fn settled_at(&self, offset: u32) -> u32 {
        match self {
            Mechanism::Composite {
                switch_round,
                before,
                after,
            } => {
                let start_after = offset + switch_round - 1;
                before
                    .settled_at(offset)
                    .max(after.settled_at(start_after))
                    .max(start_after)
            }
            _ => offset,
        }
    }
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mechanism::Composite {
                switch_round,
                before,
                after,
            } => write!(f, "composite({switch_round},{before},{after})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for Mechanism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parser = Parser { src: s, pos: 0 };
        let mech = parser.mechanism(0)?;
        parser.skip_ws();
        if parser.pos != s.len() {
            return Err(Error::Parse(format!(
                "trailing input at byte {}: {:?}",
                parser.pos,
                &s[parser.pos..]
            )));
        }
        mech.validate()?;
        Ok(mech)
    }
}

impl Serialize for Mechanism {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Mechanism {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{c}' at byte {}", self.pos)))
        }
    }

    fn ident(&mut self) -> &str {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-' || c == '_'))
            .unwrap_or(self.rest().len());
        let start = self.pos;
        self.pos += len;
        &self.src[start..start + len]
    }

    fn mechanism(&mut self, depth: usize) -> Result<Mechanism> {
        if depth > MAX_COMPOSITE_DEPTH {
            return Err(Error::Parse(format!(
                "composite nesting deeper than {MAX_COMPOSITE_DEPTH}"
            )));
        }
        let start = self.pos;
        match self.ident() {
            "standard" => Ok(Mechanism::Standard),
            "abba" => Ok(Mechanism::Alternating),
            "catchup" => Ok(Mechanism::CatchUp),
            "adj-catchup" => Ok(Mechanism::AdjustedCatchUp),
            "composite" => {
                self.expect('(')?;
                let k = self.ident();
                let switch_round: u32 = k
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad switch round {k:?}")))?;
                self.expect(',')?;
                let before = self.mechanism(depth + 1)?;
                self.expect(',')?;
                let after = self.mechanism(depth + 1)?;
                self.expect(')')?;
                Ok(Mechanism::Composite {
                    switch_round,
                    before: Box::new(before),
                    after: Box::new(after),
                })
            }
            "" => Err(Error::Parse(format!(
                "expected a mechanism at byte {start}"
            ))),
            other => Err(Error::Parse(format!("unknown mechanism {other:?}"))),
        }
    }
}
