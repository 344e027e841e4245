use std::fmt;

use serde::{Deserialize, Serialize};

use super::{KickResult, TeamId};

/// One complete round: the opener's kick, then the other team's kick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RoundRecord {
    pub first_kicker: TeamId,
    pub first_result: KickResult,
    pub second_result: KickResult,
}

impl RoundRecord {
    pub fn new(first_kicker: TeamId, first_result: KickResult, second_result: KickResult) -> Self {
        Self {
            first_kicker,
            first_result,
            second_result,
        }
    }

    pub fn second_kicker(&self) -> TeamId {
        self.first_kicker.other()
    }

    pub fn result_of(&self, team: TeamId) -> KickResult {
        if team == self.first_kicker {
            self.first_result
        } else {
            self.second_result
        }
    }

    /// Goals scored in this round by (A, B).
    pub fn goals(&self) -> (u32, u32) {
        (
            self.result_of(TeamId::A).is_scored() as u32,
            self.result_of(TeamId::B).is_scored() as u32,
        )
    }
}

impl fmt::Display for RoundRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}{}",
            self.first_kicker,
            self.first_result.symbol(),
            self.second_result.symbol()
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Decision {
    Undecided,
    WonBy(TeamId),
}

/// Complete rounds played so far, plus the length of the regular phase.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShootoutHistory {
    rounds: Vec<RoundRecord>,
    regular_rounds: u32,
}

impl ShootoutHistory {
    pub fn new(regular_rounds: u32) -> Self {
        assert!(
            regular_rounds >= 1,
            "regular phase needs at least one round"
        );
        Self {
            rounds: Vec::new(),
            regular_rounds,
        }
    }

    pub fn from_rounds(regular_rounds: u32, rounds: Vec<RoundRecord>) -> Self {
        let mut h = Self::new(regular_rounds);
        h.rounds = rounds;
        h
    }

    pub fn push(&mut self, record: RoundRecord) {
        self.rounds.push(record);
    }

    pub fn pop(&mut self) -> Option<RoundRecord> {
        self.rounds.pop()
    }

    pub fn rounds(&self) -> &[RoundRecord] {
        &self.rounds
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    pub fn regular_rounds(&self) -> u32 {
        self.regular_rounds
    }

    pub fn last(&self) -> Option<&RoundRecord> {
        self.rounds.last()
    }

    /// (A, B) score after the first `k` rounds.
    pub fn score_after(&self, k: usize) -> (u32, u32) {
        self.rounds[..k].iter().fold((0, 0), |(a, b), r| {
            let (ga, gb) = r.goals();
            (a + ga, b + gb)
        })
    }

    pub fn score(&self) -> (u32, u32) {
        self.score_after(self.rounds.len())
    }
}

impl fmt::Display for ShootoutHistory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rounds.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Winner of the regular phase once it is out of reach, checked after any
/// single kick: a team wins when its score exceeds what the other side
/// could reach with its remaining regular kicks.
pub fn regular_phase_winner(
    score_a: u32,
    score_b: u32,
    kicks_a: u32,
    kicks_b: u32,
    regular_rounds: u32,
) -> Option<TeamId> {
    let left_a = regular_rounds.saturating_sub(kicks_a);
    let left_b = regular_rounds.saturating_sub(kicks_b);
    if score_a > score_b + left_b {
        Some(TeamId::A)
    } else if score_b > score_a + left_a {
        Some(TeamId::B)
    } else {
        None
    }
}

/// Status of the shootout after its complete rounds.
///
/// In the regular phase a team wins once its lead exceeds what the other
/// side can still score; in sudden death any completed round with unequal
/// results ends it. The first decisive round wins even if the history
/// carries on past it.
pub fn is_decided(history: &ShootoutHistory) -> Decision {
    let n = history.regular_rounds;
    let (mut a, mut b) = (0u32, 0u32);
    for (i, rec) in history.rounds.iter().enumerate() {
        let played = i as u32 + 1;
        let (ga, gb) = rec.goals();
        a += ga;
        b += gb;
        if played <= n {
            if let Some(t) = regular_phase_winner(a, b, played, played, n) {
                return Decision::WonBy(t);
            }
        } else if a != b {
            return Decision::WonBy(if a > b { TeamId::A } else { TeamId::B });
        }
    }
    Decision::Undecided
}
