//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test -p shootout-verification --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rayon::prelude::*;

use shootout::analysis::{
    alpha_threshold, fairness_bias, region_boundary, sweep_q, table3, tie_probability, Comparison,
    SuddenDeathMode, Threshold,
};
use shootout::complexity::{default_library, min_depth, verify_plan, Complexity};
use shootout::engine::{
    enumerate, overall_win_prob, ratio, simulate, sudden_death_win_prob, KickPair, Probability,
    ScoringModel,
};
use shootout::mechanisms::{
    is_decided, regular_phase_winner, replay_team_results, Decision, KickResult, Mechanism,
    RoundRecord, ShootoutHistory, TeamId,
};
use shootout::reference;
use shootout::strategy::check_strategy_proofness;

struct Suite {
    failed: Vec<String>,
}

impl Suite {
    fn record(&mut self, id: &str, title: &str, ok: bool, detail: String) {
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("{tag}  {id:<4} {title}: {detail}");
        if !ok {
            self.failed.push(id.to_string());
        }
    }
}

fn baseline() -> ScoringModel {
    ScoringModel::brams()
}

fn uniform(p: &str, q: &str) -> ScoringModel {
    ScoringModel::uniform(KickPair::new(p.parse().unwrap(), q.parse().unwrap())).unwrap()
}

fn pair(r: ((i64, i64), (i64, i64))) -> KickPair {
    KickPair::from_ratios(r.0, r.1).unwrap()
}

fn f(x: &BigRational) -> f64 {
    shootout::engine::Scalar::to_f64(x)
}

fn exact_two_rounds(s: &mut Suite) {
    use reference::two_rounds::*;
    let start = Instant::now();
    let m = baseline();
    let d = enumerate::<BigRational>(&Mechanism::CatchUp, 2, &m).unwrap();
    let overall: Vec<BigRational> = Mechanism::alternatives()
        .iter()
        .map(|mech| overall_win_prob::<BigRational>(mech, 2, &m).unwrap())
        .collect();
    let elapsed = start.elapsed();
    let r = |x: (i64, i64)| ratio(x.0, x.1);
    let fractions = d.a_win == r(A_WIN)
        && d.b_win == r(B_WIN)
        && d.tie == r(TIE)
        && d.tie_a_first == r(TIE_A_FIRST)
        && d.tie_b_first == r(TIE_B_FIRST);
    let totals = overall.iter().zip(OVERALL).all(|(x, e)| *x == r(e));
    s.record(
        "1",
        "exact two-round fractions",
        fractions && totals && elapsed < Duration::from_millis(1),
        format!(
            "Catch-Up A {}, B {}, tie {} = {} + {}; overall CU {}, Adj {}, ABBA {}; {:?}",
            d.a_win,
            d.b_win,
            d.tie,
            d.tie_a_first,
            d.tie_b_first,
            overall[0],
            overall[1],
            overall[2],
            elapsed
        ),
    );
}

fn first_mover_formula(s: &mut Suite) {
    let w = sudden_death_win_prob(&ratio(3, 4), &ratio(2, 3)).unwrap();
    let symmetric = (1..=20).all(|k| {
        let q = ratio(k, 21);
        sudden_death_win_prob(&q, &q).unwrap() == ratio(1, 2)
    });
    s.record(
        "2",
        "sudden-death first-mover formula",
        w == ratio(10, 19) && symmetric,
        format!("W(3/4, 2/3) = {w}; W(q, q) = 1/2 for 20 q: {symmetric}"),
    );
}

fn table_three(s: &mut Suite) {
    let start = Instant::now();
    let t = table3::<BigRational>(&baseline()).unwrap();
    let elapsed = start.elapsed();
    let mut worst: f64 = 0.0;
    for (row, expected) in t.rows.iter().zip(reference::TABLE3) {
        for (rep, e) in row.reports.iter().zip(expected) {
            worst = worst.max((rep.win_prob_a.value - e).abs());
        }
    }
    let five: Vec<String> = t.rows[4]
        .reports
        .iter()
        .map(|r| format!("{:.4}", r.win_prob_a.value))
        .collect();
    s.record(
        "3",
        "24-cell table at (3/4, 2/3)",
        t.rows.len() == 8
            && worst <= reference::TABLE_TOLERANCE
            && elapsed < Duration::from_secs(5),
        format!("max deviation {worst:.2e}; 5 rounds {five:?}; {elapsed:?}"),
    );
}

fn sweep_spots(s: &mut Suite) {
    let mechs = Mechanism::alternatives();
    let mut worst: f64 = 0.0;
    for (col, p, q, expected) in reference::SWEEP_SPOTS {
        let p = Probability::from_f64(p).unwrap();
        let q = Probability::from_f64(q).unwrap();
        let pts =
            sweep_q::<BigRational>(&mechs[col], 5, &p, &[q], &SuddenDeathMode::FollowsRegular)
                .unwrap();
        worst = worst.max((pts[0].win_prob_a.value - expected).abs());
    }
    s.record(
        "4",
        "five-round q sweeps, 12 spot points",
        worst <= reference::FIGURE_TOLERANCE,
        format!("max deviation {worst:.2e}"),
    );
}

fn empirical(s: &mut Suite) {
    let m = ScoringModel::apesteguia2010();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (sd, expected) in reference::SUDDEN_DEATH_PAIRS
        .iter()
        .zip(reference::EMPIRICAL)
    {
        let model = m.clone().with_sudden_death(pair(*sd)).unwrap();
        for (mech, e) in Mechanism::alternatives().iter().zip(expected) {
            let w = overall_win_prob::<BigRational>(mech, 5, &model).unwrap();
            worst = worst.max((f(&w) - e).abs());
            count += 1;
        }
    }
    s.record(
        "5",
        "per-round empirical rates, nine bars",
        count == 9 && worst <= reference::FIGURE_TOLERANCE,
        format!("{count} bars, max deviation {worst:.2e}"),
    );
}

fn ties(s: &mut Suite) {
    let mut models: Vec<ScoringModel> = reference::SUDDEN_DEATH_PAIRS
        .iter()
        .map(|p| ScoringModel::uniform(pair(*p)).unwrap())
        .collect();
    models.push(ScoringModel::apesteguia2010());
    let mut worst: f64 = 0.0;
    let mut same = true;
    for (m, expected) in models.iter().zip(reference::TIES) {
        let cu = tie_probability::<BigRational>(&Mechanism::CatchUp, 5, m).unwrap();
        let adj = tie_probability::<BigRational>(&Mechanism::AdjustedCatchUp, 5, m).unwrap();
        let abba = tie_probability::<BigRational>(&Mechanism::Alternating, 5, m).unwrap();
        same &= cu.exact == adj.exact;
        worst = worst
            .max((cu.value - expected[0]).abs())
            .max((abba.value - expected[1]).abs());
    }
    s.record(
        "6",
        "probability of reaching sudden death, 4 x 2 bars",
        same && worst <= reference::FIGURE_TOLERANCE,
        format!("max deviation {worst:.2e}; Catch-Up and Adjusted identical: {same}"),
    );
}

fn thresholds(s: &mut Suite) {
    let m = ScoringModel::apesteguia2010();
    let alpha = |c| match alpha_threshold(c, 5, &m).unwrap() {
        Threshold::Found(r) => Some(r.alpha_star.value),
        Threshold::NoThreshold => None,
    };
    let cu = alpha(Comparison::VsCatchUp);
    let ab = alpha(Comparison::VsAlternating);
    let near =
        |x: Option<f64>, e: f64| x.is_some_and(|x| (x - e).abs() <= reference::ALPHA_TOLERANCE);
    s.record(
        "7a",
        "critical alpha against Catch-Up",
        near(cu, reference::ALPHA_VS_CATCH_UP),
        format!(
            "computed {cu:?}, published {}",
            reference::ALPHA_VS_CATCH_UP
        ),
    );
    s.record(
        "7b",
        "critical alpha against Alternating",
        near(ab, reference::ALPHA_VS_ALTERNATING),
        format!(
            "computed {ab:?}, published {}",
            reference::ALPHA_VS_ALTERNATING
        ),
    );

    let (e_cu, e_ab) = reference::BOUNDARY_AT_075;
    let close =
        |x: Option<f64>, e: f64| x.is_some_and(|x| (x - e).abs() <= reference::BOUNDARY_TOLERANCE);
    let q_cu = cu.map(|a| region_boundary(&0.75, &a).unwrap());
    s.record(
        "7c",
        "region boundary at p = 0.75, Catch-Up",
        close(q_cu, e_cu),
        format!("computed {q_cu:?}, published {e_cu}"),
    );
    let q_ab = ab.map(|a| region_boundary(&0.75, &a).unwrap());
    let at_published = region_boundary(&0.75, &reference::ALPHA_VS_ALTERNATING).unwrap();
    s.record(
        "7d",
        "region boundary at p = 0.75, Alternating",
        close(q_ab, e_ab),
        format!(
            "computed {q_ab:?}, published {e_ab} (formula at the published alpha gives {at_published:.6})"
        ),
    );

    let mut worst: f64 = 0.0;
    for a in [cu, ab].into_iter().flatten() {
        for k in 0..=50 {
            let p = 0.5 + k as f64 / 100.0;
            let q = region_boundary(&p, &a).unwrap();
            let w = sudden_death_win_prob(&p, &q).unwrap();
            worst = worst.max((w - a).abs());
        }
    }
    s.record(
        "7e",
        "boundary round trip W(p, q_min) = alpha",
        cu.is_some() && ab.is_some() && worst <= 1e-12,
        format!("max deviation {worst:.2e} over p = 0.50..1.00"),
    );
}

fn complexity(s: &mut Suite) {
    let start = Instant::now();
    let lib = default_library(5);
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, worst, best) in reference::COMPLEXITY {
        let mech: Mechanism = name.parse().unwrap();
        match min_depth(&mech, &lib, 5, 8, 4).unwrap() {
            Complexity::Found(r) => {
                let verified = verify_plan(&r.witness_plan, &mech, 5, 8).unwrap();
                ok &= verified
                    && r.worst_case_depth == worst
                    && best.is_none_or(|b| r.best_case_leaf_depth == b);
                parts.push(format!(
                    "{name} {}/{}",
                    r.worst_case_depth, r.best_case_leaf_depth
                ));
            }
            Complexity::ExceedsBudget { .. } => {
                ok = false;
                parts.push(format!("{name} none"));
            }
        }
    }
    let elapsed = start.elapsed();
    s.record(
        "8",
        "question complexity at horizon 8 (worst/best)",
        ok && elapsed < Duration::from_secs(10),
        format!("{}; {elapsed:?}", parts.join(", ")),
    );
}

fn strategy(s: &mut Suite) {
    let mut grid = Vec::new();
    for pi in (55..=95).step_by(5) {
        for qi in (50..=pi).step_by(5) {
            grid.push((pi, qi));
        }
    }
    let mechs = [
        Mechanism::Alternating,
        Mechanism::CatchUp,
        Mechanism::AdjustedCatchUp,
    ];
    let bad: Vec<String> = grid
        .par_iter()
        .flat_map_iter(|&(pi, qi)| {
            let m = ScoringModel::uniform(KickPair::from_ratios((pi, 100), (qi, 100)).unwrap())
                .unwrap();
            mechs
                .iter()
                .filter(|mech| {
                    !check_strategy_proofness::<BigRational>(mech, 5, &m)
                        .unwrap()
                        .strategy_proof
                })
                .map(|mech| format!("{mech}@({pi},{qi})"))
                .collect::<Vec<_>>()
        })
        .collect();
    s.record(
        "9",
        "no profitable deliberate miss, p - q <= 1/2",
        grid.len() >= 50 && bad.is_empty(),
        format!("{} grid points x 3 rules; violations {bad:?}", grid.len()),
    );
}

fn equal_skill_is_fair() -> bool {
    let mechs: Vec<Mechanism> = [
        "standard",
        "abba",
        "catchup",
        "adj-catchup",
        "composite(3,abba,catchup)",
    ]
    .iter()
    .map(|m| m.parse().unwrap())
    .collect();
    ["1/2", "3/4", "0.8"].iter().all(|p| {
        let m = uniform(p, p);
        mechs.iter().all(|mech| {
            (1..=6).all(|n| {
                let r = fairness_bias::<BigRational>(mech, n, &m).unwrap();
                r.win_prob_a.exact == Some(ratio(1, 2))
            })
        })
    })
}

/// Classifies a full-length sequence two ways: by the final score, and by
/// stopping at the first kick after which the result is out of reach.
fn early_stop_agrees(mech: &Mechanism, n: u32) -> bool {
    (0u32..1 << (2 * n)).all(|bits| {
        let kick = |i: u32| KickResult::from_scored(bits >> i & 1 == 1);
        let mut history = ShootoutHistory::new(n);
        let (mut a, mut b) = (0, 0);
        let mut early = None;
        for r in 1..=n {
            let first = mech.next_first_kicker(r, history.last(), n);
            let (x, y) = (kick(2 * (r - 1)), kick(2 * (r - 1) + 1));
            let goal = |t: TeamId, k: KickResult, a: &mut u32, b: &mut u32| {
                if k.is_scored() {
                    match t {
                        TeamId::A => *a += 1,
                        TeamId::B => *b += 1,
                    }
                }
            };
            goal(first, x, &mut a, &mut b);
            let (ka, kb) = if first == TeamId::A {
                (r, r - 1)
            } else {
                (r - 1, r)
            };
            if early.is_none() {
                early = regular_phase_winner(a, b, ka, kb, n);
            }
            goal(first.other(), y, &mut a, &mut b);
            if early.is_none() {
                early = regular_phase_winner(a, b, r, r, n);
            }
            history.push(RoundRecord::new(first, x, y));
        }
        let full = match a.cmp(&b) {
            std::cmp::Ordering::Greater => Some(TeamId::A),
            std::cmp::Ordering::Less => Some(TeamId::B),
            std::cmp::Ordering::Equal => None,
        };
        let by_rounds = match is_decided(&history) {
            Decision::WonBy(t) => Some(t),
            Decision::Undecided => None,
        };
        early == full && by_rounds == full
    })
}

fn properties(s: &mut Suite) {
    let a = equal_skill_is_fair();
    s.record(
        "10a",
        "equal skills give exactly 1/2",
        a,
        "5 rules x rounds 1..6 x p in {1/2, 3/4, 0.8}".into(),
    );

    let rules = [
        Mechanism::Standard,
        Mechanism::Alternating,
        Mechanism::CatchUp,
        Mechanism::AdjustedCatchUp,
    ];
    let b = rules
        .iter()
        .all(|m| (1..=4).all(|n| early_stop_agrees(m, n)));
    s.record(
        "10b",
        "full enumeration agrees with stopping when decided",
        b,
        "all 2^(2n) sequences, n = 1..4, 4 rules".into(),
    );

    let configs: [(&str, ScoringModel); 5] = [
        ("catchup", baseline()),
        ("adj-catchup", baseline()),
        ("abba", ScoringModel::apesteguia2010()),
        ("standard", uniform("0.8", "0.65")),
        ("composite(4,abba,catchup)", uniform("0.7", "0.6")),
    ];
    let mut worst_z: f64 = 0.0;
    for (i, (name, m)) in configs.iter().enumerate() {
        let mech: Mechanism = name.parse().unwrap();
        let sim = simulate(&mech, 5, m, 20_240 + i as u64, 1_000_000).unwrap();
        let w = f(&overall_win_prob::<BigRational>(&mech, 5, m).unwrap());
        let t = f(&enumerate::<BigRational>(&mech, 5, m).unwrap().tie);
        worst_z = worst_z
            .max((sim.p_a_win - w).abs() / sim.std_error(w))
            .max((sim.p_tie - t).abs() / sim.std_error(t));
    }
    s.record(
        "10c",
        "Monte Carlo within 3 standard errors",
        worst_z <= 3.0,
        format!("5 configurations x 1e6 trials; largest |z| = {worst_z:.2}"),
    );

    let mut d = true;
    for (name, expected) in reference::EXAMPLE_SCHEDULES {
        let mech: Mechanism = name.parse().unwrap();
        let got: Vec<TeamId> = replay_team_results(&mech, &reference::EXAMPLE_RESULTS, 5)
            .iter()
            .map(|r| r.first_kicker)
            .collect();
        d &= got == expected;
    }
    s.record(
        "10d",
        "worked example schedules",
        d,
        "4 rules x 7 rounds".into(),
    );
}

fn ordering(s: &mut Suite) {
    let t = table3::<BigRational>(&baseline()).unwrap();
    let mut bad = Vec::new();
    for row in t.rows.iter().filter(|r| r.rounds >= 2) {
        let u: Vec<f64> = row.reports.iter().map(|r| r.unfairness()).collect();
        if !(u[1] < u[0] && u[1] < u[2]) {
            bad.push(row.rounds);
        }
    }
    s.record(
        "11",
        "Adjusted Catch-Up strictly fairest for 2..8 rounds",
        bad.is_empty(),
        format!("rows failing: {bad:?}"),
    );
}

fn main() -> ExitCode {
    let mut s = Suite { failed: Vec::new() };
    exact_two_rounds(&mut s);
    first_mover_formula(&mut s);
    table_three(&mut s);
    sweep_spots(&mut s);
    empirical(&mut s);
    ties(&mut s);
    thresholds(&mut s);
    complexity(&mut s);
    strategy(&mut s);
    properties(&mut s);
    ordering(&mut s);
    if s.failed.is_empty() {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed {}", s.failed.join(", "));
        ExitCode::FAILURE
    }
}
