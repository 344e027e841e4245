//! Checks whether a team can ever gain by deliberately missing a
//! regular-phase kick, all other kicks taken honestly.
//!
//! Values come from backward induction over (round, score, previous round),
//! with per-kick early termination and the mechanism's own sudden-death
//! closure at a level score. Sudden-death kicks are not examined: a miss
//! there only lowers the kicker's own chance in that round.

use std::collections::HashMap;

use serde::Serialize;

use crate::analysis::ReportedValue;
use crate::engine::{sudden_death_closure, Scalar, ScoringModel};
use crate::error::{Error, Result};
use crate::mechanisms::{
    regular_phase_winner, KickResult, Mechanism, RoundRecord, ShootoutHistory, TeamId,
};

/// A regular-phase kick about to be taken.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecisionState {
    pub round: u32,
    pub kicks_taken_this_round: u8,
    pub score_a: u32,
    pub score_b: u32,
    /// Completed rounds, e.g. `ASS.BMS`: first kicker then both results.
    pub history: String,
    /// Result of this round's first kick when the second kicker is up.
    pub pending: Option<KickResult>,
    pub kicker: TeamId,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub state: DecisionState,
    /// Kicker's winning probability when trying to score.
    pub honest_value: ReportedValue,
    /// Kicker's winning probability after a certain miss.
    pub miss_value: ReportedValue,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ManipulationReport {
    pub mechanism: Mechanism,
    pub rounds: u32,
    pub model: ScoringModel,
    pub strategy_proof: bool,
    /// Reachable decision states examined.
    pub states_checked: usize,
    pub violations: Vec<Violation>,
}

type RoundStart = (u32, u32, u32, Option<RoundRecord>);

struct Solver<'a, S: Scalar> {
    mech: &'a Mechanism,
    n: u32,
    p: S,
    q: S,
    /// A's sudden-death win probability when A / B opens it.
    sd: (S, S),
    memo: HashMap<RoundStart, S>,
}

fn credit(team: TeamId, scored: bool, a: u32, b: u32) -> (u32, u32) {
    match (team, scored) {
        (TeamId::A, true) => (a + 1, b),
        (TeamId::B, true) => (a, b + 1),
        _ => (a, b),
    }
}

fn win_value<S: Scalar>(team: TeamId) -> S {
    match team {
        TeamId::A => S::one(),
        TeamId::B => S::zero(),
    }
}

fn for_kicker<S: Scalar>(team: TeamId, value_a: S) -> S {
    match team {
        TeamId::A => value_a,
        TeamId::B => S::one() - value_a,
    }
}

impl<S: Scalar> Solver<'_, S> {
    /// A's winning probability at the start of round `r`.
    fn round_start(&mut self, r: u32, a: u32, b: u32, prev: Option<RoundRecord>) -> S {
        let key = (r, a, b, prev);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let v = if r > self.n {
            match a.cmp(&b) {
                std::cmp::Ordering::Greater => S::one(),
                std::cmp::Ordering::Less => S::zero(),
                std::cmp::Ordering::Equal => {
                    match self.mech.next_first_kicker(r, prev.as_ref(), self.n) {
                        TeamId::A => self.sd.0.clone(),
                        TeamId::B => self.sd.1.clone(),
                    }
                }
            }
        } else {
            let first = self.mech.next_first_kicker(r, prev.as_ref(), self.n);
            let p = self.p.clone();
            p.clone() * self.after_first(r, a, b, first, true)
                + (S::one() - p) * self.after_first(r, a, b, first, false)
        };
        self.memo.insert(key, v.clone());
        v
    }

    /// A's winning probability once the first kick of round `r` is known.
    fn after_first(&mut self, r: u32, a: u32, b: u32, first: TeamId, scored: bool) -> S {
        let (a, b) = credit(first, scored, a, b);
        let (ka, kb) = if first == TeamId::A {
            (r, r - 1)
        } else {
            (r - 1, r)
        };
        if let Some(w) = regular_phase_winner(a, b, ka, kb, self.n) {
            return win_value(w);
        }
        let q = self.q.clone();
        q.clone() * self.after_second(r, a, b, first, scored.into(), true)
            + (S::one() - q) * self.after_second(r, a, b, first, scored.into(), false)
    }

    fn after_second(
        &mut self,
        r: u32,
        a: u32,
        b: u32,
        first: TeamId,
        first_result: KickResult,
        scored: bool,
    ) -> S {
        let (a, b) = credit(first.other(), scored, a, b);
        if let Some(w) = regular_phase_winner(a, b, r, r, self.n) {
            return win_value(w);
        }
        let rec = RoundRecord::new(first, first_result, scored.into());
        self.round_start(r + 1, a, b, Some(rec))
    }
}

struct Walk<'a, 'b, S: Scalar> {
    solver: &'b mut Solver<'a, S>,
    history: ShootoutHistory,
    states: usize,
    violations: Vec<Violation>,
}

impl<S: Scalar> Walk<'_, '_, S> {
    fn possible(prob: &S, scored: bool) -> bool {
        if scored {
            *prob > S::zero()
        } else {
            *prob < S::one()
        }
    }

    fn judge(&mut self, state: DecisionState, honest_a: S, miss_a: S) {
        self.states += 1;
        let honest = for_kicker(state.kicker, honest_a);
        let miss = for_kicker(state.kicker, miss_a);
        if miss.strictly_exceeds(&honest) {
            self.violations.push(Violation {
                state,
                honest_value: ReportedValue::from_scalar(&honest),
                miss_value: ReportedValue::from_scalar(&miss),
            });
        }
    }

    fn visit_round(&mut self, r: u32, a: u32, b: u32) {
        let n = self.solver.n;
        if r > n {
            return;
        }
        let prev = self.history.last().copied();
        let first = self.solver.mech.next_first_kicker(r, prev.as_ref(), n);
        let p = self.solver.p.clone();
        let hit = self.solver.after_first(r, a, b, first, true);
        let miss = self.solver.after_first(r, a, b, first, false);
        let honest = p.clone() * hit + (S::one() - p.clone()) * miss.clone();
        let state = DecisionState {
            round: r,
            kicks_taken_this_round: 0,
            score_a: a,
            score_b: b,
            history: self.history.to_string(),
            pending: None,
            kicker: first,
        };
        self.judge(state, honest, miss);

        for scored in [true, false] {
            if !Self::possible(&p, scored) {
                continue;
            }
            let (a2, b2) = credit(first, scored, a, b);
            let (ka, kb) = if first == TeamId::A {
                (r, r - 1)
            } else {
                (r - 1, r)
            };
            if regular_phase_winner(a2, b2, ka, kb, n).is_some() {
                continue;
            }
            self.visit_second(r, a2, b2, first, scored.into());
        }
    }

    fn visit_second(&mut self, r: u32, a: u32, b: u32, first: TeamId, first_result: KickResult) {
        let n = self.solver.n;
        let q = self.solver.q.clone();
        let second = first.other();
        let hit = self.solver.after_second(r, a, b, first, first_result, true);
        let miss = self
            .solver
            .after_second(r, a, b, first, first_result, false);
        let honest = q.clone() * hit + (S::one() - q.clone()) * miss.clone();
        let state = DecisionState {
            round: r,
            kicks_taken_this_round: 1,
            score_a: a,
            score_b: b,
            history: self.history.to_string(),
            pending: Some(first_result),
            kicker: second,
        };
        self.judge(state, honest, miss);

        for scored in [true, false] {
            if !Self::possible(&q, scored) {
                continue;
            }
            let (a2, b2) = credit(second, scored, a, b);
            if regular_phase_winner(a2, b2, r, r, n).is_some() {
                continue;
            }
            self.history
                .push(RoundRecord::new(first, first_result, scored.into()));
            self.visit_round(r + 1, a2, b2);
            self.history.pop();
        }
    }
}

/// Examines every regular-phase kick reachable under honest play.
///
/// A violation is a state where the kicker's winning probability after a
/// certain miss strictly exceeds that of an honest attempt (exact comparison
/// for rational scalars, 1e-12 slack for `f64`).
pub fn check_strategy_proofness<S: Scalar>(
    mech: &Mechanism,
    rounds: u32,
    model: &ScoringModel,
) -> Result<ManipulationReport> {
    let crate::engine::RegularScoring::Uniform(pair) = &model.regular else {
        return Err(Error::UnsupportedModel(
            "strategy-proofness is checked for uniform scoring only".into(),
        ));
    };
    if rounds == 0 {
        return Err(Error::Domain(
            "the regular phase needs at least one round".into(),
        ));
    }
    let (p, q) = pair.scalars::<S>();
    let sd = sudden_death_closure::<S>(mech, rounds, &model.sudden_death)?;
    let mut solver = Solver {
        mech,
        n: rounds,
        p,
        q,
        sd,
        memo: HashMap::new(),
    };
    let mut walk = Walk {
        solver: &mut solver,
        history: ShootoutHistory::new(rounds),
        states: 0,
        violations: Vec::new(),
    };
    walk.visit_round(1, 0, 0);
    let (states, violations) = (walk.states, walk.violations);
    Ok(ManipulationReport {
        mechanism: mech.clone(),
        rounds,
        model: model.clone(),
        strategy_proof: violations.is_empty(),
        states_checked: states,
        violations,
    })
}
