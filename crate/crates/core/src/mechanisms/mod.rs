//! Teams, kick outcomes, shootout histories and the kicking-order rules.
//!
//! Every rule is a pure first-mover function: given the round number and
//! the record of the previous round it names the team that kicks first.
//! None of the supported rules look further back than one round, which is
//! what lets the engine aggregate sequences by state.

mod history;
mod kicks;
mod rule;

pub use history::{is_decided, regular_phase_winner, Decision, RoundRecord, ShootoutHistory};
pub use kicks::{
    format_kick_string, parse_kick_string, replay_schedule, replay_team_results, ScheduledRound,
};
pub use rule::{Consistency, Mechanism, MAX_COMPOSITE_DEPTH};

use std::fmt;

use serde::{Deserialize, Serialize};

/// Default number of rounds before sudden death.
pub const DEFAULT_REGULAR_ROUNDS: u32 = 5;

/// `A` is the team that takes the very first kick of the shootout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TeamId {
    A,
    B,
}

impl TeamId {
    pub fn other(self) -> TeamId {
        match self {
            TeamId::A => TeamId::B,
            TeamId::B => TeamId::A,
        }
    }
}

impl fmt::Display for TeamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TeamId::A => "A",
            TeamId::B => "B",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum KickResult {
    Scored,
    Missed,
}

impl KickResult {
    pub fn from_scored(scored: bool) -> Self {
        if scored {
            KickResult::Scored
        } else {
            KickResult::Missed
        }
    }

    pub fn is_scored(self) -> bool {
        self == KickResult::Scored
    }

    pub fn symbol(self) -> char {
        match self {
            KickResult::Scored => 'S',
            KickResult::Missed => 'M',
        }
    }
}

impl From<bool> for KickResult {
    fn from(scored: bool) -> Self {
        KickResult::from_scored(scored)
    }
}
