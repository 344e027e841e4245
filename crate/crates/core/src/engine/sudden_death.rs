//! Closed forms for the sudden-death stage.
//!
//! A sudden-death round is tied with probability `t = pq + (1-p)(1-q)`,
//! whoever opens it. Tied rounds are either both-scored or both-missed, so
//! no rule ever takes its Catch-Up exception there and the sequence of
//! openers is fixed once the first one is known. That sequence becomes
//! periodic (period 1 or 2) after the last composite switch, which gives a
//! finite prefix plus a geometric tail.

use serde::Serialize;

use super::enumerate::{enumerate, OutcomeDistribution};
use super::model::{KickPair, ScoringModel};
use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::mechanisms::{KickResult, Mechanism, RoundRecord, TeamId};

fn resolution<S: Scalar>(p: &S, q: &S) -> S {
    let two = S::one() + S::one();
    p.clone() + q.clone() - two * p.clone() * q.clone()
}

fn degenerate<S: Scalar>(p: &S, q: &S) -> Error {
    Error::DegenerateSuddenDeath {
        p: format!("{p:?}"),
        q: format!("{q:?}"),
    }
}

fn check_resolves<S: Scalar>(p: &S, q: &S) -> Result<S> {
    let r = resolution(p, q);
    if r <= S::zero() {
        return Err(degenerate(p, q));
    }
    Ok(r)
}

/// Win probability of the team opening sudden death when openers alternate:
/// `(1 - q + pq) / (2 - p - q + 2pq)`.
pub fn sudden_death_win_prob<S: Scalar>(p: &S, q: &S) -> Result<S> {
    check_resolves(p, q)?;
    let one = S::one();
    let two = one.clone() + one.clone();
    let pq = p.clone() * q.clone();
    let num = one.clone() - q.clone() + pq.clone();
    let den = two.clone() - p.clone() - q.clone() + two * pq;
    Ok(num / den)
}

/// Expected number of sudden-death rounds: `1 / (p + q - 2pq)`.
pub fn expected_sudden_death_rounds<S: Scalar>(p: &S, q: &S) -> Result<S> {
    let r = check_resolves(p, q)?;
    Ok(S::one() / r)
}

/// Openers of sudden-death rounds 1, 2, ...: a prefix, then a repeating cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuddenDeathSchedule {
    pub prefix: Vec<TeamId>,
    pub cycle: Vec<TeamId>,
}

impl SuddenDeathSchedule {
    /// Schedule of `mech` when `opener` takes the first sudden-death kick
    /// after a regular phase of `regular_rounds`.
    pub fn for_mechanism(mech: &Mechanism, regular_rounds: u32, opener: TeamId) -> Self {
        let first_sd = regular_rounds + 1;
        let steady = mech.settled_from().max(first_sd);
        // Two extra rounds past the last switch so every rule is in its
        // stationary pattern, then two more to read the cycle off.
        let prefix_len = (steady - first_sd + 2) as usize;
        let mut kickers = vec![opener];
        let mut round = first_sd;
        while kickers.len() < prefix_len + 3 {
            let tied = RoundRecord::new(
                *kickers.last().unwrap(),
                KickResult::Scored,
                KickResult::Scored,
            );
            round += 1;
            kickers.push(mech.next_first_kicker(round, Some(&tied), regular_rounds));
        }
        let tail = &kickers[prefix_len..];
        let cycle = if tail[0] == tail[1] {
            vec![tail[0]]
        } else {
            vec![tail[0], tail[1]]
        };
        debug_assert_eq!(tail[2], tail[0]);
        Self {
            prefix: kickers[..prefix_len].to_vec(),
            cycle,
        }
    }

    pub fn kicker(&self, sd_round: usize) -> TeamId {
        assert!(sd_round >= 1);
        let i = sd_round - 1;
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// A's probability of winning sudden death under this schedule.
    pub fn win_prob_a<S: Scalar>(&self, p: &S, q: &S) -> Result<S> {
        let r = check_resolves(p, q)?;
        let one = S::one();
        let tie = one.clone() - r;
        let round_win = |opener: TeamId| match opener {
            TeamId::A => p.clone() * (one.clone() - q.clone()),
            TeamId::B => (one.clone() - p.clone()) * q.clone(),
        };
        let mut total = S::zero();
        let mut reach = one.clone();
        for &k in &self.prefix {
            total = total + reach.clone() * round_win(k);
            reach = reach * tie.clone();
        }
        let mut cycle_sum = S::zero();
        let mut cycle_reach = one.clone();
        for &k in &self.cycle {
            cycle_sum = cycle_sum + cycle_reach.clone() * round_win(k);
            cycle_reach = cycle_reach * tie.clone();
        }
        let denom = one - cycle_reach;
        if denom <= S::zero() {
            return Err(degenerate(p, q));
        }
        Ok(total + reach * cycle_sum / denom)
    }
}

/// A's sudden-death win probability for each possible opener, (if A opens,
/// if B opens).
pub fn sudden_death_closure<S: Scalar>(
    mech: &Mechanism,
    regular_rounds: u32,
    pair: &KickPair,
) -> Result<(S, S)> {
    let (p, q) = pair.scalars::<S>();
    let wa =
        SuddenDeathSchedule::for_mechanism(mech, regular_rounds, TeamId::A).win_prob_a(&p, &q)?;
    let wb =
        SuddenDeathSchedule::for_mechanism(mech, regular_rounds, TeamId::B).win_prob_a(&p, &q)?;
    Ok((wa, wb))
}

/// A's probability of winning the whole shootout, sudden death included.
pub fn overall_win_prob<S: Scalar>(
    mech: &Mechanism,
    rounds: u32,
    model: &ScoringModel,
) -> Result<S> {
    let dist = enumerate::<S>(mech, rounds, model)?;
    overall_from_distribution(mech, rounds, model, &dist)
}

pub fn overall_from_distribution<S: Scalar>(
    mech: &Mechanism,
    rounds: u32,
    model: &ScoringModel,
    dist: &OutcomeDistribution<S>,
) -> Result<S> {
    let (wa, wb) = sudden_death_closure::<S>(mech, rounds, &model.sudden_death)?;
    Ok(dist.a_win.clone() + dist.tie_a_first.clone() * wa + dist.tie_b_first.clone() * wb)
}
