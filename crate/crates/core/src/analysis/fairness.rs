use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::ReportedValue;
use crate::engine::{enumerate, overall_win_prob, KickPair, Probability, Scalar, ScoringModel};
use crate::error::{Error, Result};
use crate::mechanisms::Mechanism;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FairnessReport {
    pub mechanism: Mechanism,
    pub rounds: u32,
    pub model: ScoringModel,
    pub win_prob_a: ReportedValue,
    /// `win_prob_a - 1/2`.
    pub bias: ReportedValue,
}

impl FairnessReport {
    /// Distance from a fair coin toss; smaller is fairer.
    pub fn unfairness(&self) -> f64 {
        self.bias.value.abs()
    }
}

pub fn fairness_bias<S: Scalar>(
    mech: &Mechanism,
    rounds: u32,
    model: &ScoringModel,
) -> Result<FairnessReport> {
    let w: S = overall_win_prob(mech, rounds, model)?;
    let bias = w.clone() - S::half();
    Ok(FairnessReport {
        mechanism: mech.clone(),
        rounds,
        model: model.clone(),
        win_prob_a: ReportedValue::from_scalar(&w),
        bias: ReportedValue::from_scalar(&bias),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table3Row {
    pub rounds: u32,
    /// Catch-Up, Adjusted Catch-Up, Alternating.
    pub reports: Vec<FairnessReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table3 {
    pub mechanisms: Vec<Mechanism>,
    pub rows: Vec<Table3Row>,
}

/// Overall win probability of A for regular phases of 1 to 8 rounds under
/// each alternative rule.
pub fn table3<S: Scalar>(model: &ScoringModel) -> Result<Table3> {
    let mechs = Mechanism::alternatives();
    let cells: Vec<(u32, Mechanism)> = (1..=8)
        .flat_map(|n| mechs.iter().map(move |m| (n, m.clone())))
        .collect();
    let reports = cells
        .par_iter()
        .map(|(n, m)| fairness_bias::<S>(m, *n, model))
        .collect::<Result<Vec<_>>>()?;
    let rows = reports
        .chunks(mechs.len())
        .zip(1..)
        .map(|(chunk, rounds)| Table3Row {
            rounds,
            reports: chunk.to_vec(),
        })
        .collect();
    Ok(Table3 {
        mechanisms: mechs.to_vec(),
        rows,
    })
}

/// Scoring in sudden death while `q` is swept.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SuddenDeathMode {
    /// Same `(p, q)` as the regular phase.
    FollowsRegular,
    Fixed(KickPair),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub q: Probability,
    pub win_prob_a: ReportedValue,
}

/// `from, from + step, ...` up to and including `to`; empty when `from > to`.
pub fn q_grid(
    from: &Probability,
    to: &Probability,
    step: &Probability,
) -> Result<Vec<Probability>> {
    if step.value().is_zero() {
        return Err(Error::Domain("grid step must be positive".into()));
    }
    let mut out = Vec::new();
    let mut x: BigRational = from.value().clone();
    while &x <= to.value() {
        out.push(Probability::new(x.clone())?);
        x += step.value();
    }
    Ok(out)
}

/// Win probability of A with uniform regular-phase scoring `(p, q)` for
/// every `q` in the grid.
pub fn sweep_q<S: Scalar>(
    mech: &Mechanism,
    rounds: u32,
    p: &Probability,
    q_grid: &[Probability],
    sudden_death: &SuddenDeathMode,
) -> Result<Vec<SweepPoint>> {
    if let Some(w) = q_grid.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::Domain(format!(
            "q grid must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    q_grid
        .par_iter()
        .map(|q| {
            if q > p {
                return Err(Error::Domain(format!("q = {q} exceeds p = {p}")));
            }
            let pair = KickPair::new(p.clone(), q.clone());
            let sd = match sudden_death {
                SuddenDeathMode::FollowsRegular => pair.clone(),
                SuddenDeathMode::Fixed(k) => k.clone(),
            };
            let model = ScoringModel::uniform(pair)?.with_sudden_death(sd)?;
            let w: S = overall_win_prob(mech, rounds, &model)?;
            Ok(SweepPoint {
                q: q.clone(),
                win_prob_a: ReportedValue::from_scalar(&w),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalBar {
    pub sudden_death: KickPair,
    /// Catch-Up, Adjusted Catch-Up, Alternating.
    pub win_prob_a: Vec<ReportedValue>,
}

/// Win probability of A under each alternative rule, the regular phase
/// scored by `model` and sudden death by each of `sd_pairs` in turn.
pub fn empirical_bars<S: Scalar>(
    model: &ScoringModel,
    rounds: u32,
    sd_pairs: &[KickPair],
) -> Result<Vec<EmpiricalBar>> {
    sd_pairs
        .par_iter()
        .map(|sd| {
            let m = model.clone().with_sudden_death(sd.clone())?;
            let win_prob_a = Mechanism::alternatives()
                .iter()
                .map(|mech| {
                    overall_win_prob::<S>(mech, rounds, &m).map(|w| ReportedValue::from_scalar(&w))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(EmpiricalBar {
                sudden_death: sd.clone(),
                win_prob_a,
            })
        })
        .collect()
}

/// Probability that the regular phase ends level.
pub fn tie_probability<S: Scalar>(
    mech: &Mechanism,
    rounds: u32,
    model: &ScoringModel,
) -> Result<ReportedValue> {
    let d = enumerate::<S>(mech, rounds, model)?;
    Ok(ReportedValue::from_scalar(&d.tie))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::ratio;

    fn prob(s: &str) -> Probability {
        s.parse().unwrap()
    }

    #[test]
    fn equal_skills_have_no_bias() {
        let m = ScoringModel::uniform(KickPair::from_ratios((7, 10), (7, 10)).unwrap()).unwrap();
        for mech in Mechanism::alternatives() {
            let r = fairness_bias::<BigRational>(&mech, 3, &m).unwrap();
            assert_eq!(r.bias.exact, Some(ratio(0, 1)));
        }
    }

    #[test]
    fn grid_is_inclusive_and_exact() {
        let g = q_grid(&prob("0.5"), &prob("0.55"), &prob("0.01")).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g[5], prob("0.55"));
        assert!(q_grid(&prob("0.6"), &prob("0.5"), &prob("0.01"))
            .unwrap()
            .is_empty());
        assert!(q_grid(&prob("0.5"), &prob("0.6"), &prob("0")).is_err());
    }

    #[test]
    fn sweep_rejects_q_above_p() {
        let r = sweep_q::<f64>(
            &Mechanism::CatchUp,
            5,
            &prob("0.7"),
            &[prob("0.8")],
            &SuddenDeathMode::FollowsRegular,
        );
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn sweep_endpoint_is_fair() {
        let pts = sweep_q::<BigRational>(
            &Mechanism::AdjustedCatchUp,
            5,
            &prob("0.7"),
            &[prob("0.69"), prob("0.7")],
            &SuddenDeathMode::FollowsRegular,
        )
        .unwrap();
        assert_eq!(pts[1].win_prob_a.exact, Some(ratio(1, 2)));
        assert!(pts[0].win_prob_a.value > 0.5);
    }

    #[test]
    fn certain_scoring_always_reaches_sudden_death() {
        let m = ScoringModel::uniform(KickPair::from_ratios((1, 1), (1, 1)).unwrap()).unwrap();
        let t = tie_probability::<BigRational>(&Mechanism::CatchUp, 1, &m).unwrap();
        assert_eq!(t.exact, Some(ratio(1, 1)));
    }
}
