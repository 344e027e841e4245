//! Probability engine: exact enumeration of the regular phase, sudden-death
//! closures, expected length and a seeded simulator.

mod enumerate;
mod length;
mod model;
mod probability;
mod scalar;
mod simulate;
mod sudden_death;

pub use enumerate::{enumerate, OutcomeDistribution, MAX_ENUMERATION_ROUNDS};
pub use length::expected_total_kicks;
pub use model::{KickPair, RegularScoring, ScoringModel, PRESETS};
pub use probability::Probability;
pub use scalar::{format_decimal, format_ratio, ratio, Scalar, FLOAT_SLACK};
pub use simulate::{simulate, SimulationReport, Tally, CHUNK_TRIALS, RNG_ALGORITHM};
pub use sudden_death::{
    expected_sudden_death_rounds, overall_from_distribution, overall_win_prob,
    sudden_death_closure, sudden_death_win_prob, SuddenDeathSchedule,
};
