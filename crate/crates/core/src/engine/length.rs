use std::collections::BTreeMap;

use super::model::ScoringModel;
use super::scalar::Scalar;
use super::sudden_death::expected_sudden_death_rounds;
use crate::error::Result;
use crate::mechanisms::{regular_phase_winner, KickResult, Mechanism, RoundRecord, TeamId};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Live {
    score_a: u32,
    score_b: u32,
    prev: Option<RoundRecord>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct MidRound {
    score_a: u32,
    score_b: u32,
    prev: Option<RoundRecord>,
    first: TeamId,
    first_result: KickResult,
}

fn add<K: Ord, S: Scalar>(map: &mut BTreeMap<K, S>, key: K, w: S) {
    let slot = map.entry(key).or_insert_with(S::zero);
    *slot = slot.clone() + w;
}

fn credit(team: TeamId, scored: bool, a: u32, b: u32) -> (u32, u32) {
    match (team, scored) {
        (TeamId::A, true) => (a + 1, b),
        (TeamId::B, true) => (a, b + 1),
        _ => (a, b),
    }
}

/// Expected number of kicks actually taken, sudden death included.
///
/// The regular phase stops after any kick that puts the result out of
/// reach; each sudden-death round always has both kicks.
pub fn expected_total_kicks<S: Scalar>(
    mech: &Mechanism,
    rounds: u32,
    model: &ScoringModel,
) -> Result<S> {
    let probs = model.round_scalars::<S>(rounds)?;
    let (sd_p, sd_q) = model.sudden_death.scalars::<S>();
    let sd_rounds = expected_sudden_death_rounds(&sd_p, &sd_q)?;

    let mut kicks = S::zero();
    let mut live: BTreeMap<Live, S> = BTreeMap::new();
    live.insert(
        Live {
            score_a: 0,
            score_b: 0,
            prev: None,
        },
        S::one(),
    );

    for (r, (p, q)) in (1..=rounds).zip(&probs) {
        let mut mid: BTreeMap<MidRound, S> = BTreeMap::new();
        for (state, w) in &live {
            kicks = kicks + w.clone();
            let first = mech.next_first_kicker(r, state.prev.as_ref(), rounds);
            for scored in [true, false] {
                let pw = if scored {
                    p.clone()
                } else {
                    S::one() - p.clone()
                };
                let (a, b) = credit(first, scored, state.score_a, state.score_b);
                let (ka, kb) = if first == TeamId::A {
                    (r, r - 1)
                } else {
                    (r - 1, r)
                };
                if regular_phase_winner(a, b, ka, kb, rounds).is_some() {
                    continue;
                }
                let key = MidRound {
                    score_a: a,
                    score_b: b,
                    prev: state.prev,
                    first,
                    first_result: scored.into(),
                };
                add(&mut mid, key, w.clone() * pw);
            }
        }

        let mut next: BTreeMap<Live, S> = BTreeMap::new();
        for (state, w) in &mid {
            kicks = kicks + w.clone();
            let second = state.first.other();
            for scored in [true, false] {
                let qw = if scored {
                    q.clone()
                } else {
                    S::one() - q.clone()
                };
                let (a, b) = credit(second, scored, state.score_a, state.score_b);
                if regular_phase_winner(a, b, r, r, rounds).is_some() {
                    continue;
                }
                let key = Live {
                    score_a: a,
                    score_b: b,
                    prev: Some(RoundRecord::new(
                        state.first,
                        state.first_result,
                        scored.into(),
                    )),
                };
                add(&mut next, key, w.clone() * qw);
            }
        }
        live = next;
    }

    // Whatever is still live after the last regular round is level.
    let tie = live.into_values().fold(S::zero(), |acc, w| acc + w);
    let two = S::one() + S::one();
    Ok(kicks + two * tie * sd_rounds)
}
