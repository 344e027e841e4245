use std::path::Path;

use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use shootout::analysis::{
    alpha_threshold, empirical_bars, q_grid, region_boundary, region_curve, sweep_q, table3,
    tie_probability, Comparison, ReportedValue, SuddenDeathMode, Threshold,
};
use shootout::complexity::{default_library, min_depth, Complexity};
use shootout::engine::{
    enumerate, expected_total_kicks, format_decimal, overall_win_prob, simulate, KickPair,
    Probability, Scalar, ScoringModel,
};
use shootout::mechanisms::{
    parse_kick_string, replay_schedule, Mechanism, TeamId, DEFAULT_REGULAR_ROUNDS,
};
use shootout::reference;
use shootout::strategy::check_strategy_proofness;

use crate::check::Checker;
use crate::error::CliError;
use crate::output::Dataset;

/// Everything a command hands back for writing and checking.
pub struct Outcome {
    pub datasets: Vec<Dataset>,
    pub model: Option<ScoringModel>,
    pub seeds: Vec<u64>,
    pub check: Checker,
    /// Short human-readable lines for stderr.
    pub notes: Vec<String>,
}

impl Outcome {
    fn new(datasets: Vec<Dataset>, model: Option<ScoringModel>, check: Checker) -> Self {
        Self {
            datasets,
            model,
            seeds: Vec::new(),
            check,
            notes: Vec::new(),
        }
    }
}

fn to_json(v: &impl Serialize) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Internal(format!("json: {e}")))
}

/// A preset name, or a path to a config file.
pub fn load_model(arg: Option<&str>, default: &str) -> Result<ScoringModel, CliError> {
    let name = arg.unwrap_or(default);
    if let Some(m) = ScoringModel::preset(name) {
        return Ok(m);
    }
    let path = Path::new(name);
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(ScoringModel::from_config_str(&text)?)
}

/// `p,q` with each side a decimal or `num/den`.
pub fn parse_pair(s: &str) -> Result<KickPair, String> {
    let (p, q) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `p,q`, got {s:?}"))?;
    let p: Probability = p.parse().map_err(|e| format!("{e}"))?;
    let q: Probability = q.parse().map_err(|e| format!("{e}"))?;
    Ok(KickPair::new(p, q))
}

fn default_rounds(model: &ScoringModel, rounds: Option<u32>) -> u32 {
    rounds.unwrap_or_else(|| model.fixed_rounds().unwrap_or(DEFAULT_REGULAR_ROUNDS))
}

fn cells(v: &ReportedValue) -> [String; 2] {
    [v.decimal(), v.rational()]
}

fn reference_pairs() -> Vec<KickPair> {
    reference::SUDDEN_DEATH_PAIRS
        .iter()
        .map(|&(p, q)| KickPair::from_ratios(p, q).expect("valid reference pair"))
        .collect()
}

fn column_of(mech: &Mechanism) -> Option<usize> {
    Mechanism::alternatives().iter().position(|m| m == mech)
}

pub fn cmd_table3<S: Scalar>(model: ScoringModel) -> Result<Outcome, CliError> {
    let t = table3::<S>(&model)?;
    let mut d = Dataset::new(
        "table3",
        vec![
            "rounds",
            "mechanism",
            "win_prob_a",
            "win_prob_a_exact",
            "bias",
            "bias_exact",
        ],
        to_json(&t)?,
    );
    let mut check = Checker::default();
    let is_reference = model == ScoringModel::brams();
    for row in &t.rows {
        for (col, r) in row.reports.iter().enumerate() {
            let [w, we] = cells(&r.win_prob_a);
            let [b, be] = cells(&r.bias);
            d.row(vec![
                row.rounds.to_string(),
                r.mechanism.to_string(),
                w,
                we,
                b,
                be,
            ]);
            if is_reference {
                check.near(
                    format!("rounds {} {}", row.rounds, r.mechanism),
                    r.win_prob_a.value,
                    reference::TABLE3[row.rounds as usize - 1][col],
                    reference::TABLE_TOLERANCE,
                );
            }
        }
    }
    Ok(Outcome::new(vec![d], Some(model), check))
}

pub struct SweepArgs {
    pub p: Probability,
    pub q_from: Probability,
    pub q_to: Option<Probability>,
    pub q_step: Probability,
    pub mechanisms: Vec<Mechanism>,
    pub rounds: u32,
}

/// One curve per mechanism. Sudden death follows `(p, q)` unless a model
/// is given, whose sudden-death pair is then held fixed.
pub fn cmd_sweep<S: Scalar>(
    a: SweepArgs,
    model: Option<ScoringModel>,
) -> Result<Outcome, CliError> {
    let to = a.q_to.clone().unwrap_or_else(|| a.p.clone());
    let grid = q_grid(&a.q_from, &to, &a.q_step)?;
    let mode = match &model {
        Some(m) => SuddenDeathMode::Fixed(m.sudden_death.clone()),
        None => SuddenDeathMode::FollowsRegular,
    };
    let mechs = if a.mechanisms.is_empty() {
        Mechanism::alternatives().to_vec()
    } else {
        a.mechanisms
    };
    let panel = reference::SWEEPS
        .iter()
        .find(|s| (s.p - a.p.to_f64()).abs() < 1e-12)
        .filter(|_| a.rounds == 5 && model.is_none());

    let mut check = Checker::default();
    let mut datasets = Vec::new();
    for mech in &mechs {
        let points = sweep_q::<S>(mech, a.rounds, &a.p, &grid, &mode)?;
        let mut d = Dataset::new(
            format!("sweep_{mech}"),
            vec!["q", "q_exact", "win_prob_a", "win_prob_a_exact"],
            json!({ "mechanism": mech, "rounds": a.rounds, "p": a.p, "points": to_json(&points)? }),
        );
        let curve = panel.zip(column_of(mech)).map(|(s, c)| s.curves[c]);
        for pt in &points {
            let q = pt.q.to_f64();
            let [w, we] = cells(&pt.win_prob_a);
            d.row(vec![format_decimal(q), pt.q.to_string(), w, we]);
            if let Some(&(_, y)) = curve.and_then(|c| c.iter().find(|(x, _)| (x - q).abs() < 1e-9))
            {
                check.near(
                    format!("{mech} q={}", format_decimal(q)),
                    pt.win_prob_a.value,
                    y,
                    reference::FIGURE_TOLERANCE,
                );
            }
        }
        datasets.push(d);
    }
    Ok(Outcome::new(datasets, model, check))
}

pub fn cmd_empirical<S: Scalar>(
    model: ScoringModel,
    rounds: Option<u32>,
    sd: Vec<KickPair>,
) -> Result<Outcome, CliError> {
    let rounds = default_rounds(&model, rounds);
    let refs = reference_pairs();
    let pairs = if sd.is_empty() { refs.clone() } else { sd };
    let bars = empirical_bars::<S>(&model, rounds, &pairs)?;
    let mut d = Dataset::new(
        "empirical",
        vec![
            "sd_p",
            "sd_q",
            "mechanism",
            "win_prob_a",
            "win_prob_a_exact",
        ],
        json!({ "rounds": rounds, "bars": to_json(&bars)? }),
    );
    let mut check = Checker::default();
    let is_reference = model == ScoringModel::apesteguia2010() && rounds == 5;
    for bar in &bars {
        let row = refs.iter().position(|r| *r == bar.sudden_death);
        for (mech, w) in Mechanism::alternatives().iter().zip(&bar.win_prob_a) {
            let [x, xe] = cells(w);
            d.row(vec![
                bar.sudden_death.p.to_string(),
                bar.sudden_death.q.to_string(),
                mech.to_string(),
                x,
                xe,
            ]);
            if let (true, Some(i)) = (is_reference, row) {
                let col = column_of(mech).expect("alternatives");
                check.near(
                    format!("sd ({}, {}) {mech}", bar.sudden_death.p, bar.sudden_death.q),
                    w.value,
                    reference::EMPIRICAL[i][col],
                    reference::FIGURE_TOLERANCE,
                );
            }
        }
    }
    Ok(Outcome::new(vec![d], Some(model), check))
}

pub fn cmd_region(model: ScoringModel, rounds: Option<u32>) -> Result<Outcome, CliError> {
    let rounds = default_rounds(&model, rounds);
    let is_reference = model == ScoringModel::apesteguia2010() && rounds == 5;
    let ps: Vec<f64> = (0..=50).map(|k| (50 + k) as f64 / 100.0).collect();
    let mut check = Checker::default();

    let mut thresholds = Dataset::new(
        "thresholds",
        vec![
            "comparison",
            "alpha",
            "alpha_exact",
            "bracket_low",
            "bracket_high",
        ],
        Value::Null,
    );
    let mut region = Dataset::new(
        "region",
        vec!["p", "q_min_vs_catchup", "q_min_vs_abba"],
        Value::Null,
    );
    let mut found = Vec::new();
    let mut curves = Vec::new();
    let published = [
        (
            Comparison::VsCatchUp,
            reference::ALPHA_VS_CATCH_UP,
            reference::BOUNDARY_AT_075.0,
            &reference::REGION_CATCH_UP,
        ),
        (
            Comparison::VsAlternating,
            reference::ALPHA_VS_ALTERNATING,
            reference::BOUNDARY_AT_075.1,
            &reference::REGION_ALTERNATING,
        ),
    ];
    for (cmp, alpha_ref, q075_ref, curve_ref) in published {
        let label = cmp.rival().to_string();
        match alpha_threshold(cmp, rounds, &model)? {
            Threshold::Found(r) => {
                let [x, xe] = cells(&r.alpha_star);
                thresholds.row(vec![
                    label.clone(),
                    x,
                    xe,
                    format_decimal(r.bracket.0),
                    format_decimal(r.bracket.1),
                ]);
                let curve = region_curve(r.alpha_star.value, &ps)?;
                if is_reference {
                    check.near(
                        format!("alpha vs {label}"),
                        r.alpha_star.value,
                        alpha_ref,
                        reference::ALPHA_TOLERANCE,
                    );
                    check.near(
                        format!("boundary at p=0.75 vs {label}"),
                        region_boundary(&0.75, &r.alpha_star.value)?,
                        q075_ref,
                        reference::BOUNDARY_TOLERANCE,
                    );
                    for (pt, &(x, y)) in curve.iter().zip(curve_ref.iter()) {
                        debug_assert!((pt.p - x).abs() < 1e-12);
                        check.near(
                            format!("boundary vs {label} at p={}", format_decimal(x)),
                            pt.q_min,
                            y,
                            reference::FIGURE_TOLERANCE,
                        );
                    }
                }
                found.push(json!({ "comparison": label, "threshold": to_json(&r)? }));
                curves.push(Some(curve));
            }
            Threshold::NoThreshold => {
                thresholds.row(vec![
                    label.clone(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                ]);
                found.push(json!({ "comparison": label, "threshold": Value::Null }));
                curves.push(None);
            }
        }
    }
    for (i, p) in ps.iter().enumerate() {
        let q = |c: &Option<Vec<_>>| {
            c.as_ref()
                .map(|c: &Vec<shootout::analysis::RegionPoint>| format_decimal(c[i].q_min))
                .unwrap_or_default()
        };
        region.row(vec![format_decimal(*p), q(&curves[0]), q(&curves[1])]);
    }
    thresholds.json = json!({ "rounds": rounds, "thresholds": found });
    let q_min = |c: &Option<Vec<shootout::analysis::RegionPoint>>| {
        c.as_ref()
            .map(|c| c.iter().map(|pt| pt.q_min).collect::<Vec<_>>())
    };
    region.json = json!({
        "rounds": rounds,
        "p": ps,
        "q_min_vs_catchup": q_min(&curves[0]),
        "q_min_vs_abba": q_min(&curves[1]),
    });
    Ok(Outcome::new(vec![thresholds, region], Some(model), check))
}

pub fn cmd_ties<S: Scalar>(
    model: ScoringModel,
    rounds: Option<u32>,
    pairs: Vec<KickPair>,
) -> Result<Outcome, CliError> {
    let rounds = default_rounds(&model, rounds);
    let refs = reference_pairs();
    let defaulted = pairs.is_empty();
    let pairs = if defaulted { refs } else { pairs };
    let is_reference = defaulted && model == ScoringModel::apesteguia2010() && rounds == 5;

    let mut cases: Vec<(String, ScoringModel)> = pairs
        .iter()
        .map(|k| {
            Ok((
                format!("uniform({},{})", k.p, k.q),
                ScoringModel::uniform(k.clone())?,
            ))
        })
        .collect::<Result<_, shootout::Error>>()?;
    cases.push(("model".into(), model.clone()));

    let mut d = Dataset::new(
        "ties",
        vec![
            "scoring",
            "mechanism",
            "tie_prob",
            "tie_prob_exact",
            "expected_kicks",
            "expected_kicks_exact",
        ],
        Value::Null,
    );
    let mut check = Checker::default();
    let mut records = Vec::new();
    for (i, (label, m)) in cases.iter().enumerate() {
        for mech in Mechanism::alternatives() {
            let tie = tie_probability::<S>(&mech, rounds, m)?;
            let kicks: S = expected_total_kicks(&mech, rounds, m)?;
            let kicks = ReportedValue::from_scalar(&kicks);
            let [t, te] = cells(&tie);
            let [k, ke] = cells(&kicks);
            d.row(vec![label.clone(), mech.to_string(), t, te, k, ke]);
            if is_reference {
                let col = usize::from(mech == Mechanism::Alternating);
                check.near(
                    format!("{label} {mech}"),
                    tie.value,
                    reference::TIES[i][col],
                    reference::FIGURE_TOLERANCE,
                );
            }
            records.push(json!({
                "scoring": label,
                "mechanism": mech,
                "tie_prob": tie,
                "expected_kicks": kicks,
            }));
        }
    }
    d.json = json!({ "rounds": rounds, "bars": records });
    Ok(Outcome::new(vec![d], Some(model), check))
}

pub struct ComplexityArgs {
    pub mechanisms: Vec<Mechanism>,
    pub rounds: u32,
    pub horizon: u32,
    pub max_depth: usize,
}

pub fn cmd_complexity(a: ComplexityArgs) -> Result<Outcome, CliError> {
    let refs: Vec<(Mechanism, usize, Option<usize>)> = reference::COMPLEXITY
        .iter()
        .map(|&(name, w, b)| (name.parse().expect("reference rule"), w, b))
        .collect();
    let mechs = if a.mechanisms.is_empty() {
        refs.iter().map(|(m, _, _)| m.clone()).collect()
    } else {
        a.mechanisms
    };
    let library = default_library(a.rounds);
    let mut d = Dataset::new(
        "complexity",
        vec![
            "mechanism",
            "horizon",
            "worst_case_depth",
            "best_case_leaf_depth",
            "witness",
        ],
        Value::Null,
    );
    let mut check = Checker::default();
    let mut results = Vec::new();
    for mech in &mechs {
        let c = min_depth(mech, &library, a.rounds, a.horizon, a.max_depth)?;
        match &c {
            Complexity::Found(r) => {
                d.row(vec![
                    mech.to_string(),
                    r.horizon.to_string(),
                    r.worst_case_depth.to_string(),
                    r.best_case_leaf_depth.to_string(),
                    r.witness_text.clone(),
                ]);
                let reference = refs.iter().find(|(m, _, _)| m == mech);
                if let (Some((_, worst, best)), 5, 8) = (reference, a.rounds, a.horizon) {
                    check.equal(format!("{mech} worst case"), r.worst_case_depth, *worst);
                    if let Some(b) = best {
                        check.equal(format!("{mech} best case"), r.best_case_leaf_depth, *b);
                    }
                }
            }
            Complexity::ExceedsBudget { max_depth } => {
                d.row(vec![
                    mech.to_string(),
                    a.horizon.to_string(),
                    format!(">{max_depth}"),
                    String::new(),
                    String::new(),
                ]);
            }
        }
        results.push(to_json(&c)?);
    }
    d.json = Value::Array(results);
    Ok(Outcome::new(vec![d], None, check))
}

pub fn cmd_strategy<S: Scalar>(
    mech: Mechanism,
    model: ScoringModel,
    rounds: u32,
) -> Result<Outcome, CliError> {
    let r = check_strategy_proofness::<S>(&mech, rounds, &model)?;
    let mut d = Dataset::new(
        "strategy",
        vec![
            "round",
            "kicks_taken_this_round",
            "score_a",
            "score_b",
            "history",
            "pending",
            "kicker",
            "honest_value",
            "honest_value_exact",
            "miss_value",
            "miss_value_exact",
        ],
        to_json(&r)?,
    );
    for v in &r.violations {
        let s = &v.state;
        let [h, he] = cells(&v.honest_value);
        let [m, me] = cells(&v.miss_value);
        d.row(vec![
            s.round.to_string(),
            s.kicks_taken_this_round.to_string(),
            s.score_a.to_string(),
            s.score_b.to_string(),
            s.history.clone(),
            s.pending
                .map(|k| k.symbol().to_string())
                .unwrap_or_default(),
            s.kicker.to_string(),
            h,
            he,
            m,
            me,
        ]);
    }

    // Alternating and both Catch-Up rules leave nothing to gain while the
    // first kicker's edge is at most one half.
    let mut check = Checker::default();
    if let shootout::engine::RegularScoring::Uniform(pair) = &model.regular {
        let gap = pair.p.value() - pair.q.value();
        let covered = column_of(&mech).is_some()
            && gap <= shootout::engine::ratio(1, 2)
            && model.sudden_death == *pair;
        if covered {
            check.equal(format!("{mech} strategy-proof"), r.strategy_proof, true);
        }
    }
    let mut out = Outcome::new(vec![d], Some(model), check);
    out.notes.push(format!(
        "{mech}: {} over {} decision states, {} violations",
        if r.strategy_proof {
            "strategy-proof"
        } else {
            "manipulable"
        },
        r.states_checked,
        r.violations.len()
    ));
    Ok(out)
}

pub fn cmd_simulate(
    mech: Mechanism,
    model: ScoringModel,
    rounds: Option<u32>,
    seed: u64,
    trials: u64,
) -> Result<Outcome, CliError> {
    let rounds = default_rounds(&model, rounds);
    let r = simulate(&mech, rounds, &model, seed, trials)?;
    let mut d = Dataset::new(
        "simulate",
        vec![
            "mechanism",
            "rounds",
            "seed",
            "trials",
            "a_wins",
            "b_wins",
            "ties",
            "tie_a_first",
            "tie_b_first",
            "kicks",
            "p_a_win",
            "se_a_win",
            "p_tie",
            "se_tie",
            "mean_kicks",
        ],
        to_json(&r)?,
    );
    let t = &r.tally;
    d.row(vec![
        mech.to_string(),
        rounds.to_string(),
        seed.to_string(),
        trials.to_string(),
        t.a_wins.to_string(),
        t.b_wins.to_string(),
        t.ties.to_string(),
        t.tie_a_first.to_string(),
        t.tie_b_first.to_string(),
        t.kicks.to_string(),
        format_decimal(r.p_a_win),
        format_decimal(r.std_error(r.p_a_win)),
        format_decimal(r.p_tie),
        format_decimal(r.std_error(r.p_tie)),
        format_decimal(r.mean_kicks),
    ]);

    // Four standard errors from the exact values.
    let mut check = Checker::default();
    let exact_win: BigRational = overall_win_prob(&mech, rounds, &model)?;
    let exact_tie = enumerate::<BigRational>(&mech, rounds, &model)?.tie;
    for (label, got, exact) in [
        ("A wins", r.p_a_win, exact_win.to_f64()),
        ("sudden death reached", r.p_tie, exact_tie.to_f64()),
    ] {
        check.near(label, got, exact, 4.0 * r.std_error(exact) + 1e-12);
    }
    let mut out = Outcome::new(vec![d], Some(model), check);
    out.seeds.push(seed);
    Ok(out)
}

pub fn cmd_replay(mech: Mechanism, kicks: &str, rounds: u32) -> Result<Outcome, CliError> {
    let kicks = parse_kick_string(kicks)?;
    let schedule = replay_schedule(&mech, &kicks, rounds)?;
    let mut d = Dataset::new(
        "replay",
        vec![
            "round",
            "first_kicker",
            "first_result",
            "second_result",
            "score_a",
            "score_b",
        ],
        json!({ "mechanism": mech, "rounds": rounds, "schedule": to_json(&schedule)? }),
    );
    for s in &schedule {
        d.row(vec![
            s.round.to_string(),
            s.first_kicker.to_string(),
            s.first_result.symbol().to_string(),
            s.second_result.symbol().to_string(),
            s.score_a.to_string(),
            s.score_b.to_string(),
        ]);
    }

    let mut check = Checker::default();
    let team_results: Vec<_> = schedule
        .iter()
        .map(|s| {
            (
                s.record().result_of(TeamId::A),
                s.record().result_of(TeamId::B),
            )
        })
        .collect();
    let matches_example = rounds == 5
        && team_results.len() <= reference::EXAMPLE_RESULTS.len()
        && reference::EXAMPLE_RESULTS.starts_with(&team_results);
    let expected = reference::EXAMPLE_SCHEDULES
        .iter()
        .find(|(name, _)| name.parse::<Mechanism>().ok().as_ref() == Some(&mech));
    if let (true, Some((_, firsts))) = (matches_example, expected) {
        for (s, want) in schedule.iter().zip(firsts) {
            check.equal(
                format!("round {} first kicker", s.round),
                s.first_kicker,
                *want,
            );
        }
    }
    Ok(Outcome::new(vec![d], None, check))
}
