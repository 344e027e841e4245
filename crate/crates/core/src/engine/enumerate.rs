use std::collections::BTreeMap;

use super::model::ScoringModel;
use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::mechanisms::{KickResult, Mechanism, RoundRecord, TeamId};

/// Largest regular phase `enumerate` accepts (2^24 kick sequences).
pub const MAX_ENUMERATION_ROUNDS: u32 = 12;

/// Outcome of the regular phase, with the tie mass split by who opens
/// sudden death.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution<S> {
    pub a_win: S,
    pub b_win: S,
    pub tie: S,
    pub tie_a_first: S,
    pub tie_b_first: S,
}

impl<S: Scalar> OutcomeDistribution<S> {
    pub fn total(&self) -> S {
        self.a_win.clone() + self.b_win.clone() + self.tie.clone()
    }

    /// Overall win probability of A when the sudden-death opener wins with
    /// probability `alpha`.
    pub fn win_prob_with_alpha(&self, alpha: &S) -> S {
        self.a_win.clone()
            + self.tie_a_first.clone() * alpha.clone()
            + self.tie_b_first.clone() * (S::one() - alpha.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct State {
    score_a: u32,
    score_b: u32,
    prev: Option<RoundRecord>,
}

const ROUND_OUTCOMES: [(KickResult, KickResult); 4] = [
    (KickResult::Scored, KickResult::Scored),
    (KickResult::Scored, KickResult::Missed),
    (KickResult::Missed, KickResult::Scored),
    (KickResult::Missed, KickResult::Missed),
];

/// Exact distribution over all `2^(2·rounds)` full-length kick sequences.
///
/// A sequence's weight is the product of its per-kick probabilities, the
/// opener of each round kicking with `p` and the other side with `q`.
/// Sequences are aggregated by (score, previous round), which is all the
/// mechanisms look at, so no sequence is dropped or truncated.
pub fn enumerate<S: Scalar>(
    mech: &Mechanism,
    rounds: u32,
    model: &ScoringModel,
) -> Result<OutcomeDistribution<S>> {
    if rounds > MAX_ENUMERATION_ROUNDS {
        return Err(Error::Resource {
            rounds,
            max: MAX_ENUMERATION_ROUNDS,
        });
    }
    let probs = model.round_scalars::<S>(rounds)?;

    let mut states: BTreeMap<State, S> = BTreeMap::new();
    states.insert(
        State {
            score_a: 0,
            score_b: 0,
            prev: None,
        },
        S::one(),
    );

    for (r, (p, q)) in (1..=rounds).zip(&probs) {
        let miss_p = S::one() - p.clone();
        let miss_q = S::one() - q.clone();
        let mut next: BTreeMap<State, S> = BTreeMap::new();
        for (state, weight) in &states {
            let first = mech.next_first_kicker(r, state.prev.as_ref(), rounds);
            for (x, y) in ROUND_OUTCOMES {
                let px = if x.is_scored() { p } else { &miss_p };
                let py = if y.is_scored() { q } else { &miss_q };
                let rec = RoundRecord::new(first, x, y);
                let (ga, gb) = rec.goals();
                let key = State {
                    score_a: state.score_a + ga,
                    score_b: state.score_b + gb,
                    prev: Some(rec),
                };
                let w = weight.clone() * px.clone() * py.clone();
                let slot = next.entry(key).or_insert_with(S::zero);
                *slot = slot.clone() + w;
            }
        }
        states = next;
    }

    let mut dist = OutcomeDistribution {
        a_win: S::zero(),
        b_win: S::zero(),
        tie: S::zero(),
        tie_a_first: S::zero(),
        tie_b_first: S::zero(),
    };
    for (state, w) in states {
        use std::cmp::Ordering::*;
        match state.score_a.cmp(&state.score_b) {
            Greater => dist.a_win = dist.a_win + w,
            Less => dist.b_win = dist.b_win + w,
            Equal => {
                match mech.next_first_kicker(rounds + 1, state.prev.as_ref(), rounds) {
                    TeamId::A => dist.tie_a_first = dist.tie_a_first + w.clone(),
                    TeamId::B => dist.tie_b_first = dist.tie_b_first + w.clone(),
                }
                dist.tie = dist.tie + w;
            }
        }
    }
    Ok(dist)
}
