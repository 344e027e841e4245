use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use shootout::analysis::{region_boundary, tie_probability};
use shootout::complexity::{default_library, QuestionPlan};
use shootout::engine::{
    enumerate, overall_win_prob, ratio, sudden_death_win_prob, KickPair, Probability,
    RegularScoring, ScoringModel,
};
use shootout::mechanisms::{
    format_kick_string, parse_kick_string, replay_schedule, KickResult, Mechanism, TeamId,
};
use shootout::strategy::check_strategy_proofness;

fn base_rule() -> impl Strategy<Value = Mechanism> {
    prop_oneof![
        Just(Mechanism::Standard),
        Just(Mechanism::Alternating),
        Just(Mechanism::CatchUp),
        Just(Mechanism::AdjustedCatchUp),
    ]
}

fn mechanism() -> impl Strategy<Value = Mechanism> {
    base_rule().prop_recursive(3, 8, 2, |inner| {
        (2u32..10, inner.clone(), inner)
            .prop_map(|(k, before, after)| Mechanism::composite(k, before, after).unwrap())
    })
}

/// `num/den` strictly inside (0, 1).
fn open_unit() -> impl Strategy<Value = (i64, i64)> {
    (2i64..40).prop_flat_map(|den| (1..den, Just(den)))
}

/// `q <= p`, neither 0 nor 1 together so sudden death always ends.
fn kick_pair() -> impl Strategy<Value = KickPair> {
    (open_unit(), open_unit()).prop_map(|(a, b)| {
        let (x, y) = (ratio(a.0, a.1), ratio(b.0, b.1));
        let (p, q) = if x >= y { (x, y) } else { (y, x) };
        KickPair::new(Probability::new(p).unwrap(), Probability::new(q).unwrap())
    })
}

fn plan(depth: u32) -> BoxedStrategy<QuestionPlan> {
    let leaf = prop_oneof![Just(TeamId::A), Just(TeamId::B)].prop_map(QuestionPlan::Leaf);
    if depth == 0 {
        return leaf.boxed();
    }
    let lib = default_library(5);
    let n = lib.len();
    prop_oneof![
        leaf,
        (0..n, plan(depth - 1), plan(depth - 1))
            .prop_map(move |(i, t, e)| { QuestionPlan::ask(lib[i].clone(), t, e) })
    ]
    .boxed()
}

fn has_repeat(p: &QuestionPlan, path: &mut Vec<String>) -> bool {
    match p {
        QuestionPlan::Leaf(_) => false,
        QuestionPlan::Ask {
            predicate,
            then,
            otherwise,
        } => {
            if path.iter().any(|n| n == predicate.name()) {
                return true;
            }
            path.push(predicate.name().to_string());
            let r = has_repeat(then, path) || has_repeat(otherwise, path);
            path.pop();
            r
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mechanism_text_round_trips(m in mechanism()) {
        let text = m.to_string();
        prop_assert_eq!(text.parse::<Mechanism>().unwrap(), m);
    }

    #[test]
    fn equal_skills_are_fair(m in mechanism(), p in open_unit(), n in 1u32..=6) {
        let pr = Probability::from_ratio(p.0, p.1).unwrap();
        let model = ScoringModel::uniform(KickPair::new(pr.clone(), pr)).unwrap();
        prop_assert_eq!(overall_win_prob::<BigRational>(&m, n, &model).unwrap(), ratio(1, 2));
    }

    #[test]
    fn outcome_mass_is_one(m in mechanism(), pair in kick_pair(), n in 1u32..=6) {
        let model = ScoringModel::uniform(pair).unwrap();
        let d = enumerate::<BigRational>(&m, n, &model).unwrap();
        prop_assert_eq!(d.total(), BigRational::one());
        prop_assert_eq!(d.tie_a_first + d.tie_b_first, d.tie);
    }

    #[test]
    fn repeated_per_round_equals_uniform(m in mechanism(), pair in kick_pair(), n in 1u32..=5) {
        let uniform = ScoringModel::uniform(pair.clone()).unwrap();
        let per_round = ScoringModel::new(
            RegularScoring::PerRound(vec![pair.clone(); n as usize]),
            pair,
        ).unwrap();
        prop_assert_eq!(
            overall_win_prob::<BigRational>(&m, n, &uniform).unwrap(),
            overall_win_prob::<BigRational>(&m, n, &per_round).unwrap()
        );
    }

    #[test]
    fn catch_up_variants_tie_equally(pair in kick_pair(), n in 1u32..=6) {
        let model = ScoringModel::uniform(pair).unwrap();
        prop_assert_eq!(
            tie_probability::<BigRational>(&Mechanism::CatchUp, n, &model).unwrap(),
            tie_probability::<BigRational>(&Mechanism::AdjustedCatchUp, n, &model).unwrap()
        );
    }

    #[test]
    fn win_probability_is_a_probability(m in mechanism(), pair in kick_pair(), n in 1u32..=5) {
        let model = ScoringModel::uniform(pair).unwrap();
        let w = overall_win_prob::<BigRational>(&m, n, &model).unwrap();
        prop_assert!(w >= ratio(0, 1) && w <= ratio(1, 1));
    }

    #[test]
    fn first_mover_formula_is_symmetric(p in open_unit()) {
        let p = ratio(p.0, p.1);
        prop_assert_eq!(sudden_death_win_prob(&p, &p).unwrap(), ratio(1, 2));
    }

    #[test]
    fn boundary_round_trip(p in 50i64..=100, a in 500i64..1000) {
        let (p, alpha) = (ratio(p, 100), ratio(a, 1000));
        let q = region_boundary(&p, &alpha).unwrap();
        prop_assert_eq!(sudden_death_win_prob(&p, &q).unwrap(), alpha);
    }

    #[test]
    fn probability_text_round_trips(x in open_unit()) {
        let p = Probability::from_ratio(x.0, x.1).unwrap();
        prop_assert_eq!(p.to_string().parse::<Probability>().unwrap(), p);
    }

    #[test]
    fn model_config_round_trips(pairs in prop::collection::vec(kick_pair(), 1..6), sd in kick_pair()) {
        let m = ScoringModel::new(RegularScoring::PerRound(pairs), sd).unwrap();
        prop_assert_eq!(ScoringModel::from_config_str(&m.to_config_string()).unwrap(), m);
    }

    #[test]
    fn kick_strings_round_trip(bits in prop::collection::vec(any::<bool>(), 0..12)) {
        let mut kicks: Vec<KickResult> = bits.into_iter().map(KickResult::from).collect();
        if kicks.len() % 2 == 1 {
            kicks.pop();
        }
        let text = format_kick_string(&kicks);
        prop_assert_eq!(parse_kick_string(&text).unwrap(), kicks.clone());
        let sched = replay_schedule(&Mechanism::CatchUp, &kicks, 5).unwrap();
        prop_assert_eq!(sched.len(), kicks.len() / 2);
    }

    #[test]
    fn plan_json_round_trips(p in plan(3)) {
        let lib = default_library(5);
        let parsed = QuestionPlan::from_json(&p.to_json().to_string(), &lib);
        if has_repeat(&p, &mut Vec::new()) {
            prop_assert!(parsed.is_err());
        } else {
            prop_assert_eq!(parsed.unwrap(), p);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Rules that ignore results cannot be steered, so a miss never helps.
    #[test]
    fn order_independent_rules_are_strategy_proof(pair in kick_pair(), n in 1u32..=5) {
        let model = ScoringModel::uniform(pair).unwrap();
        for m in [Mechanism::Standard, Mechanism::Alternating] {
            let r = check_strategy_proofness::<BigRational>(&m, n, &model).unwrap();
            prop_assert!(r.strategy_proof, "{}", m);
        }
    }
}
