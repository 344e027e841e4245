//! How many yes/no questions about the history it takes to name the next
//! first kicker: the least worst-case depth of a decision tree over a fixed
//! library of questions, verified against every consistent history.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::mechanisms::{KickResult, Mechanism, RoundRecord, TeamId};

/// Longest horizon that is checked exhaustively (4^9 histories for the
/// last round).
pub const MAX_HORIZON: u32 = 10;
/// Deepest plan `min_depth` searches for.
pub const MAX_SEARCH_DEPTH: usize = 4;
/// Deepest plan accepted at all.
pub const MAX_PLAN_DEPTH: usize = 6;

type Eval = dyn Fn(u32, &[RoundRecord]) -> bool + Send + Sync;

/// A yes/no question about the next round number and the rounds so far.
#[derive(Clone)]
pub struct Predicate {
    name: String,
    eval: Arc<Eval>,
}

impl Predicate {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(u32, &[RoundRecord]) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Answer for the round `round` given the `round - 1` rounds before it.
    pub fn eval(&self, round: u32, history: &[RoundRecord]) -> bool {
        (self.eval)(round, history)
    }
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl PartialEq for Predicate {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

/// The questions used to argue the complexity of the standard rules:
/// round parity, whether sudden death has begun, who opened the previous
/// round, whether the previous round went (first missed, second scored),
/// and `round <= k` for `k = 1..=8`. Questions about the previous round
/// answer "no" before round 2.
pub fn default_library(regular_rounds: u32) -> Vec<Predicate> {
    let mut lib = vec![
        Predicate::new("round_even", |r, _| r % 2 == 0),
        Predicate::new("sudden_death", move |r, _| r > regular_rounds),
        Predicate::new("prev_first_a", |_, h| {
            h.last().is_some_and(|x| x.first_kicker == TeamId::A)
        }),
        Predicate::new("prev_first_missed_second_scored", |_, h| {
            h.last().is_some_and(|x| {
                x.first_result == KickResult::Missed && x.second_result == KickResult::Scored
            })
        }),
    ];
    for k in 1..=8 {
        lib.push(Predicate::new(format!("round_le_{k}"), move |r, _| r <= k));
    }
    lib
}

#[derive(Debug, Clone, PartialEq)]
pub enum QuestionPlan {
    Leaf(TeamId),
    Ask {
        predicate: Predicate,
        then: Box<QuestionPlan>,
        otherwise: Box<QuestionPlan>,
    },
}

impl QuestionPlan {
    pub fn ask(predicate: Predicate, then: QuestionPlan, otherwise: QuestionPlan) -> Self {
        QuestionPlan::Ask {
            predicate,
            then: Box::new(then),
            otherwise: Box::new(otherwise),
        }
    }

    pub fn decide(&self, round: u32, history: &[RoundRecord]) -> TeamId {
        match self {
            QuestionPlan::Leaf(t) => *t,
            QuestionPlan::Ask {
                predicate,
                then,
                otherwise,
            } => {
                if predicate.eval(round, history) {
                    then.decide(round, history)
                } else {
                    otherwise.decide(round, history)
                }
            }
        }
    }

    /// Questions asked on the longest path.
    pub fn depth(&self) -> usize {
        match self {
            QuestionPlan::Leaf(_) => 0,
            QuestionPlan::Ask {
                then, otherwise, ..
            } => 1 + then.depth().max(otherwise.depth()),
        }
    }

    /// Questions asked on the shortest path.
    pub fn shallowest_leaf(&self) -> usize {
        match self {
            QuestionPlan::Leaf(_) => 0,
            QuestionPlan::Ask {
                then, otherwise, ..
            } => 1 + then.shallowest_leaf().min(otherwise.shallowest_leaf()),
        }
    }

    /// Names of all questions the plan can ask, in first-use order.
    pub fn predicates(&self) -> Vec<String> {
        fn walk(p: &QuestionPlan, out: &mut Vec<String>) {
            if let QuestionPlan::Ask {
                predicate,
                then,
                otherwise,
            } = p
            {
                if !out.iter().any(|n| n == predicate.name()) {
                    out.push(predicate.name().to_string());
                }
                walk(then, out);
                walk(otherwise, out);
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn to_json(&self) -> Value {
        match self {
            QuestionPlan::Leaf(t) => json!(t.to_string()),
            QuestionPlan::Ask {
                predicate,
                then,
                otherwise,
            } => json!({
                "if": predicate.name(),
                "then": then.to_json(),
                "else": otherwise.to_json(),
            }),
        }
    }

    /// Reads the JSON form, resolving question names against `library`.
    /// Plans deeper than six or repeating a question on one path are rejected.
    pub fn from_json(text: &str, library: &[Predicate]) -> Result<Self> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("plan JSON: {e}")))?;
        let plan = Self::from_value(&v, library, &mut Vec::new())?;
        Ok(plan)
    }

    fn from_value(v: &Value, library: &[Predicate], path: &mut Vec<String>) -> Result<Self> {
        if path.len() > MAX_PLAN_DEPTH {
            return Err(Error::Domain(format!("plan deeper than {MAX_PLAN_DEPTH}")));
        }
        match v {
            Value::String(s) => match s.as_str() {
                "A" => Ok(QuestionPlan::Leaf(TeamId::A)),
                "B" => Ok(QuestionPlan::Leaf(TeamId::B)),
                _ => Err(Error::Parse(format!(
                    "leaf must be \"A\" or \"B\", got {s:?}"
                ))),
            },
            Value::Object(map) => {
                if map.len() != 3 {
                    return Err(Error::Parse(
                        "question node needs exactly if/then/else".into(),
                    ));
                }
                let (Some(Value::String(name)), Some(then), Some(otherwise)) =
                    (map.get("if"), map.get("then"), map.get("else"))
                else {
                    return Err(Error::Parse("question node needs if/then/else".into()));
                };
                let predicate = library
                    .iter()
                    .find(|p| p.name() == name)
                    .ok_or_else(|| Error::Parse(format!("unknown question {name:?}")))?
                    .clone();
                if path.contains(name) {
                    return Err(Error::Domain(format!(
                        "question {name:?} repeated on a path"
                    )));
                }
                path.push(name.clone());
                let then = Self::from_value(then, library, path)?;
                let otherwise = Self::from_value(otherwise, library, path)?;
                path.pop();
                Ok(QuestionPlan::ask(predicate, then, otherwise))
            }
            _ => Err(Error::Parse(
                "plan node must be a string or an object".into(),
            )),
        }
    }
}

impl fmt::Display for QuestionPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuestionPlan::Leaf(t) => write!(f, "{t}"),
            QuestionPlan::Ask {
                predicate,
                then,
                otherwise,
            } => {
                let part = |p: &QuestionPlan| match p {
                    QuestionPlan::Leaf(_) => p.to_string(),
                    _ => format!("({p})"),
                };
                write!(
                    f,
                    "if {} then {} else {}",
                    predicate.name(),
                    part(then),
                    part(otherwise)
                )
            }
        }
    }
}

impl Serialize for QuestionPlan {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Every consistent (round, history before it, first kicker) for rounds
/// `1..=horizon`, over all round-outcome patterns.
fn for_each_instance(
    mech: &Mechanism,
    regular_rounds: u32,
    horizon: u32,
    mut f: impl FnMut(u32, &[RoundRecord], TeamId),
) {
    fn go(
        mech: &Mechanism,
        n: u32,
        horizon: u32,
        history: &mut Vec<RoundRecord>,
        f: &mut dyn FnMut(u32, &[RoundRecord], TeamId),
    ) {
        let round = history.len() as u32 + 1;
        let first = mech.next_first_kicker(round, history.last(), n);
        f(round, history, first);
        if round == horizon {
            return;
        }
        for x in [KickResult::Scored, KickResult::Missed] {
            for y in [KickResult::Scored, KickResult::Missed] {
                history.push(RoundRecord::new(first, x, y));
                go(mech, n, horizon, history, f);
                history.pop();
            }
        }
    }
    if horizon >= 1 {
        go(mech, regular_rounds, horizon, &mut Vec::new(), &mut f);
    }
}

fn check_horizon(horizon: u32) -> Result<()> {
    if horizon == 0 || horizon > MAX_HORIZON {
        return Err(Error::Domain(format!(
            "horizon must be between 1 and {MAX_HORIZON}, got {horizon}"
        )));
    }
    Ok(())
}

/// Whether `plan` names the first kicker of every round up to `horizon`
/// after every consistent history.
pub fn verify_plan(
    plan: &QuestionPlan,
    mech: &Mechanism,
    regular_rounds: u32,
    horizon: u32,
) -> Result<bool> {
    check_horizon(horizon)?;
    let mut ok = true;
    for_each_instance(mech, regular_rounds, horizon, |r, h, first| {
        ok &= plan.decide(r, h) == first;
    });
    Ok(ok)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexityResult {
    pub mechanism: Mechanism,
    pub horizon: u32,
    pub worst_case_depth: usize,
    pub best_case_leaf_depth: usize,
    pub witness_plan: QuestionPlan,
    /// `witness_plan` in its text form.
    pub witness_text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Complexity {
    Found(ComplexityResult),
    /// No plan of depth at most `max_depth` exists over the library.
    ExceedsBudget {
        max_depth: usize,
    },
}

/// Distinct (answers to every library question, first kicker) pairs.
struct Instances {
    answers: Vec<u64>,
    kicker: Vec<TeamId>,
}

struct Search<'a> {
    library: &'a [Predicate],
    inst: &'a Instances,
    memo: HashMap<(Vec<u32>, usize), Option<QuestionPlan>>,
}

impl Search<'_> {
    /// A plan of depth at most `budget` for the instances in `set`; questions
    /// are tried in library order, skipping any that do not split the set.
    fn solve(&mut self, set: &[u32], budget: usize) -> Option<QuestionPlan> {
        let first = self.inst.kicker[set[0] as usize];
        if set.iter().all(|&i| self.inst.kicker[i as usize] == first) {
            return Some(QuestionPlan::Leaf(first));
        }
        if budget == 0 {
            return None;
        }
        let key = (set.to_vec(), budget);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let mut found = None;
        for (k, pred) in self.library.iter().enumerate() {
            let (yes, no): (Vec<u32>, Vec<u32>) = set
                .iter()
                .partition(|&&i| self.inst.answers[i as usize] >> k & 1 == 1);
            if yes.is_empty() || no.is_empty() {
                continue;
            }
            let Some(then) = self.solve(&yes, budget - 1) else {
                continue;
            };
            let Some(otherwise) = self.solve(&no, budget - 1) else {
                continue;
            };
            found = Some(QuestionPlan::ask(pred.clone(), then, otherwise));
            break;
        }
        self.memo.insert(key, found.clone());
        found
    }
}

/// Least worst-case number of library questions that names the next first
/// kicker after every consistent history up to `horizon`.
///
/// Depths `0, 1, ..., max_depth` are tried in turn, so the first plan found
/// is minimal; ties go to the earliest question in the library. The witness
/// is re-verified against the rule before it is returned.
pub fn min_depth(
    mech: &Mechanism,
    library: &[Predicate],
    regular_rounds: u32,
    horizon: u32,
    max_depth: usize,
) -> Result<Complexity> {
    if library.is_empty() {
        return Err(Error::Domain("question library is empty".into()));
    }
    if library.len() > 64 {
        return Err(Error::Domain(
            "question library holds at most 64 questions".into(),
        ));
    }
    if max_depth > MAX_SEARCH_DEPTH {
        return Err(Error::Domain(format!(
            "search depth is limited to {MAX_SEARCH_DEPTH}, got {max_depth}"
        )));
    }
    check_horizon(horizon)?;

    let mut seen = BTreeSet::new();
    for_each_instance(mech, regular_rounds, horizon, |r, h, first| {
        let answers = library
            .iter()
            .enumerate()
            .fold(0u64, |acc, (k, p)| acc | (u64::from(p.eval(r, h)) << k));
        seen.insert((answers, first));
    });
    let inst = Instances {
        answers: seen.iter().map(|&(a, _)| a).collect(),
        kicker: seen.iter().map(|&(_, t)| t).collect(),
    };
    let all: Vec<u32> = (0..inst.answers.len() as u32).collect();
    let mut search = Search {
        library,
        inst: &inst,
        memo: HashMap::new(),
    };
    for budget in 0..=max_depth {
        if let Some(plan) = search.solve(&all, budget) {
            if !verify_plan(&plan, mech, regular_rounds, horizon)? {
                return Err(Error::Domain(format!(
                    "witness for {mech} failed verification: {plan}"
                )));
            }
            return Ok(Complexity::Found(ComplexityResult {
                mechanism: mech.clone(),
                horizon,
                worst_case_depth: plan.depth(),
                best_case_leaf_depth: plan.shallowest_leaf(),
                witness_text: plan.to_string(),
                witness_plan: plan,
            }));
        }
    }
    Ok(Complexity::ExceedsBudget { max_depth })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lib() -> Vec<Predicate> {
        default_library(5)
    }

    fn by_name(name: &str) -> Predicate {
        lib().into_iter().find(|p| p.name() == name).unwrap()
    }

    #[test]
    fn constant_plan() {
        let a = QuestionPlan::Leaf(TeamId::A);
        assert!(verify_plan(&a, &Mechanism::Standard, 5, 8).unwrap());
        assert!(!verify_plan(&a, &Mechanism::Alternating, 5, 8).unwrap());
    }

    #[test]
    fn parity_plan_for_alternating() {
        let plan = QuestionPlan::ask(
            by_name("round_even"),
            QuestionPlan::Leaf(TeamId::B),
            QuestionPlan::Leaf(TeamId::A),
        );
        assert!(verify_plan(&plan, &Mechanism::Alternating, 5, 8).unwrap());
        assert_eq!(plan.to_string(), "if round_even then B else A");
    }

    #[test]
    fn json_round_trip() {
        let plan = QuestionPlan::ask(
            by_name("prev_first_a"),
            QuestionPlan::ask(
                by_name("prev_first_missed_second_scored"),
                QuestionPlan::Leaf(TeamId::A),
                QuestionPlan::Leaf(TeamId::B),
            ),
            QuestionPlan::Leaf(TeamId::A),
        );
        let text = plan.to_json().to_string();
        assert_eq!(QuestionPlan::from_json(&text, &lib()).unwrap(), plan);
    }

    #[test]
    fn json_rejects() {
        let l = lib();
        assert!(QuestionPlan::from_json("\"C\"", &l).is_err());
        assert!(QuestionPlan::from_json(r#"{"if":"nope","then":"A","else":"B"}"#, &l).is_err());
        let repeated =
            r#"{"if":"round_even","then":{"if":"round_even","then":"A","else":"B"},"else":"B"}"#;
        assert!(matches!(
            QuestionPlan::from_json(repeated, &l),
            Err(Error::Domain(_))
        ));
        assert!(QuestionPlan::from_json("[1]", &l).is_err());
    }

    #[test]
    fn search_finds_catch_up_in_two() {
        let Complexity::Found(r) = min_depth(&Mechanism::CatchUp, &lib(), 5, 8, 4).unwrap() else {
            panic!("no plan");
        };
        assert_eq!(r.worst_case_depth, 2);
    }

    #[test]
    fn tight_budget_is_reported() {
        assert_eq!(
            min_depth(&Mechanism::AdjustedCatchUp, &lib(), 5, 8, 2).unwrap(),
            Complexity::ExceedsBudget { max_depth: 2 }
        );
        assert!(min_depth(&Mechanism::Standard, &lib(), 5, 8, 5).is_err());
        assert!(min_depth(&Mechanism::Standard, &[], 5, 8, 2).is_err());
    }
}
