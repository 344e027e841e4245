use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::probability::Probability;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Scoring probabilities of a round's first and second kicker.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KickPair {
    /// First kicker (advantaged).
    pub p: Probability,
    /// Second kicker.
    pub q: Probability,
}

impl KickPair {
    pub fn new(p: Probability, q: Probability) -> Self {
        Self { p, q }
    }

    pub fn from_ratios(p: (i64, i64), q: (i64, i64)) -> Result<Self> {
        Ok(Self::new(
            Probability::from_ratio(p.0, p.1)?,
            Probability::from_ratio(q.0, q.1)?,
        ))
    }

    pub fn scalars<S: Scalar>(&self) -> (S, S) {
        (self.p.to_scalar(), self.q.to_scalar())
    }

    fn check_order(&self, what: &str) -> Result<()> {
        if self.q > self.p {
            return Err(Error::InvalidModel(format!(
                "{what}: second-kicker probability {} exceeds first-kicker probability {}",
                self.q, self.p
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegularScoring {
    Uniform(KickPair),
    /// One pair per regular round.
    PerRound(Vec<KickPair>),
}

/// Order-dependent success probabilities for a whole shootout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoringModel {
    pub regular: RegularScoring,
    pub sudden_death: KickPair,
}

/// Preset names understood by [`ScoringModel::preset`].
pub const PRESETS: [&str; 2] = ["brams", "apesteguia2010"];

impl ScoringModel {
    /// Same (p, q) in every round, sudden death included.
    pub fn uniform(pair: KickPair) -> Result<Self> {
        Self::new(RegularScoring::Uniform(pair.clone()), pair)
    }

    pub fn new(regular: RegularScoring, sudden_death: KickPair) -> Result<Self> {
        let m = Self {
            regular,
            sudden_death,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match &self.regular {
            RegularScoring::Uniform(pair) => pair.check_order("regular phase")?,
            RegularScoring::PerRound(pairs) => {
                if pairs.is_empty() {
                    return Err(Error::InvalidModel("per_round list is empty".into()));
                }
                for (i, pair) in pairs.iter().enumerate() {
                    pair.check_order(&format!("round {}", i + 1))?;
                }
            }
        }
        self.sudden_death.check_order("sudden death")
    }

    /// p = 3/4, q = 2/3 everywhere.
    pub fn brams() -> Self {
        Self::uniform(KickPair::from_ratios((3, 4), (2, 3)).expect("valid")).expect("valid preset")
    }

    /// Empirical per-round rates for the five regular rounds; sudden death
    /// at (3/4, 2/3).
    pub fn apesteguia2010() -> Self {
        let rates = [(79, 72), (82, 77), (77, 64), (74, 68), (74, 67)];
        let pairs = rates
            .iter()
            .map(|&(p, q)| KickPair::from_ratios((p, 100), (q, 100)).expect("valid"))
            .collect();
        Self::new(
            RegularScoring::PerRound(pairs),
            KickPair::from_ratios((3, 4), (2, 3)).expect("valid"),
        )
        .expect("valid preset")
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "brams" => Some(Self::brams()),
            "apesteguia2010" => Some(Self::apesteguia2010()),
            _ => None,
        }
    }

    pub fn with_sudden_death(mut self, pair: KickPair) -> Result<Self> {
        pair.check_order("sudden death")?;
        self.sudden_death = pair;
        Ok(self)
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.regular, RegularScoring::Uniform(_))
    }

    /// Rounds this model fixes, if it is per-round.
    pub fn fixed_rounds(&self) -> Option<u32> {
        match &self.regular {
            RegularScoring::PerRound(p) => Some(p.len() as u32),
            RegularScoring::Uniform(_) => None,
        }
    }

    /// Errors unless the model can drive a regular phase of `rounds`.
    pub fn check_rounds(&self, rounds: u32) -> Result<()> {
        if rounds == 0 {
            return Err(Error::Domain("a shootout needs at least one round".into()));
        }
        match self.fixed_rounds() {
            Some(n) if n != rounds => Err(Error::InvalidModel(format!(
                "per-round model covers {n} rounds, {rounds} requested"
            ))),
            _ => Ok(()),
        }
    }

    /// Probabilities for regular round `round` (1-based).
    pub fn round_pair(&self, round: u32) -> &KickPair {
        match &self.regular {
            RegularScoring::Uniform(pair) => pair,
            RegularScoring::PerRound(pairs) => &pairs[round as usize - 1],
        }
    }

    /// Per-round scalars for a regular phase of `rounds`.
    pub fn round_scalars<S: Scalar>(&self, rounds: u32) -> Result<Vec<(S, S)>> {
        self.check_rounds(rounds)?;
        Ok((1..=rounds).map(|r| self.round_pair(r).scalars()).collect())
    }

    /// Parses the flat key-value config format.
    ///
    /// ```text
    /// mode = "uniform"            # or "per_round"
    /// p = "3/4"
    /// q = 0.6667
    /// per_round = [[0.79, 0.72], [0.82, 0.77]]
    /// sudden_death = ["3/4", "2/3"]
    /// ```
    pub fn from_config_str(text: &str) -> Result<Self> {
        let cfg: ModelConfig =
            toml::from_str(text).map_err(|e| Error::Parse(format!("model config: {e}")))?;
        cfg.into_model()
    }

    /// Canonical config text; parsing it gives back an equal model.
    pub fn to_config_string(&self) -> String {
        let pair = |k: &KickPair| format!("[\"{}\", \"{}\"]", k.p, k.q);
        let mut out = String::new();
        match &self.regular {
            RegularScoring::Uniform(k) => {
                let _ = writeln!(out, "mode = \"uniform\"");
                let _ = writeln!(out, "p = \"{}\"", k.p);
                let _ = writeln!(out, "q = \"{}\"", k.q);
            }
            RegularScoring::PerRound(pairs) => {
                let _ = writeln!(out, "mode = \"per_round\"");
                let list: Vec<String> = pairs.iter().map(pair).collect();
                let _ = writeln!(out, "per_round = [{}]", list.join(", "));
            }
        }
        let _ = writeln!(out, "sudden_death = {}", pair(&self.sudden_death));
        out
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelConfig {
    mode: String,
    p: Option<Probability>,
    q: Option<Probability>,
    per_round: Option<Vec<(Probability, Probability)>>,
    sudden_death: Option<(Probability, Probability)>,
}

impl ModelConfig {
    fn into_model(self) -> Result<ScoringModel> {
        let sd = self.sudden_death.map(|(p, q)| KickPair::new(p, q));
        match self.mode.as_str() {
            "uniform" => {
                if self.per_round.is_some() {
                    return Err(Error::InvalidModel(
                        "per_round is not allowed in uniform mode".into(),
                    ));
                }
                let (Some(p), Some(q)) = (self.p, self.q) else {
                    return Err(Error::InvalidModel("uniform mode needs p and q".into()));
                };
                let pair = KickPair::new(p, q);
                let sd = sd.unwrap_or_else(|| pair.clone());
                ScoringModel::new(RegularScoring::Uniform(pair), sd)
            }
            "per_round" => {
                if self.p.is_some() || self.q.is_some() {
                    return Err(Error::InvalidModel(
                        "p and q are not allowed in per_round mode".into(),
                    ));
                }
                let Some(list) = self.per_round else {
                    return Err(Error::InvalidModel("per_round mode needs per_round".into()));
                };
                let Some(sd) = sd else {
                    return Err(Error::InvalidModel(
                        "per_round mode needs sudden_death".into(),
                    ));
                };
                let pairs = list.into_iter().map(|(p, q)| KickPair::new(p, q)).collect();
                ScoringModel::new(RegularScoring::PerRound(pairs), sd)
            }
            other => Err(Error::InvalidModel(format!("unknown mode {other:?}"))),
        }
    }
}
