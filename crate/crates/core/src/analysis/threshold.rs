use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::ReportedValue;
use crate::engine::{enumerate, ratio, OutcomeDistribution, Scalar, ScoringModel};
use crate::error::{Error, Result};
use crate::mechanisms::Mechanism;

/// Rule the Adjusted Catch-Up rule is compared with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparison {
    VsCatchUp,
    VsAlternating,
}

impl Comparison {
    pub fn rival(self) -> Mechanism {
        match self {
            Comparison::VsCatchUp => Mechanism::CatchUp,
            Comparison::VsAlternating => Mechanism::Alternating,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub comparison: Comparison,
    /// Critical win probability of the sudden-death opener, to within 1e-9.
    pub alpha_star: ReportedValue,
    /// Final bisection bracket.
    pub bracket: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Threshold {
    Found(ThresholdResult),
    /// The fairness ordering never changes on `[1/2, 1]`.
    NoThreshold,
}

const SCAN_STEPS: i64 = 1000;
const BISECTION_TOLERANCE: f64 = 1e-9;

/// `Q(alpha) = c + d * alpha`, the rule's overall win probability of A when
/// the sudden-death opener wins with probability `alpha`.
struct Affine {
    c: BigRational,
    d: BigRational,
}

impl Affine {
    fn of(dist: &OutcomeDistribution<BigRational>) -> Self {
        Self {
            c: &dist.a_win + &dist.tie_b_first,
            d: &dist.tie_a_first - &dist.tie_b_first,
        }
    }

    fn offset(&self, alpha: &BigRational) -> BigRational {
        &self.c + &self.d * alpha - ratio(1, 2)
    }
}

/// The sudden-death opener's win probability at which Adjusted Catch-Up
/// stops being at least as fair as the rival rule.
///
/// `g(a) = |Q_adj(a) - 1/2| - |Q_rival(a) - 1/2|` is piecewise affine. Starting
/// from `a = 1/2` the scan looks for the first change of sign of `g`, then
/// bisects to 1e-9. The exact root of the affine branch at the crossing is
/// reported alongside.
pub fn alpha_threshold(
    comparison: Comparison,
    rounds: u32,
    model: &ScoringModel,
) -> Result<Threshold> {
    let adj = Affine::of(&enumerate::<BigRational>(
        &Mechanism::AdjustedCatchUp,
        rounds,
        model,
    )?);
    let rival = Affine::of(&enumerate::<BigRational>(
        &comparison.rival(),
        rounds,
        model,
    )?);
    let g = |a: &BigRational| adj.offset(a).abs() - rival.offset(a).abs();

    let half = ratio(1, 2);
    let start_fairer = !g(&half).is_positive();
    let flipped = |a: &BigRational| {
        let v = g(a);
        if start_fairer {
            v.is_positive()
        } else {
            !v.is_positive()
        }
    };

    let step = ratio(1, 2 * SCAN_STEPS);
    let mut lo = half.clone();
    let mut hi = None;
    for i in 1..=SCAN_STEPS {
        let a = &half + &step * BigRational::from_integer(i.into());
        if flipped(&a) {
            hi = Some(a);
            break;
        }
        lo = a;
    }
    let Some(mut hi) = hi else {
        return Ok(Threshold::NoThreshold);
    };

    while (&hi - &lo).to_f64() > BISECTION_TOLERANCE {
        let mid = (&lo + &hi) / ratio(2, 1);
        if flipped(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let mid = (&lo + &hi) / ratio(2, 1);
    let exact = exact_root(&adj, &rival, &mid).filter(|r| *r >= lo && *r <= hi);
    let value = match &exact {
        Some(r) => r.to_f64(),
        None => mid.to_f64(),
    };
    Ok(Threshold::Found(ThresholdResult {
        comparison,
        alpha_star: ReportedValue { value, exact },
        bracket: (lo.to_f64(), hi.to_f64()),
    }))
}

/// Root of `s1 * adj(a) = s2 * rival(a)` with the signs both offsets have
/// near `near`.
fn exact_root(adj: &Affine, rival: &Affine, near: &BigRational) -> Option<BigRational> {
    let sign = |x: BigRational| {
        if x.is_negative() {
            -BigRational::one()
        } else {
            BigRational::one()
        }
    };
    let s1 = sign(adj.offset(near));
    let s2 = sign(rival.offset(near));
    let half = ratio(1, 2);
    let den = &s1 * &adj.d - &s2 * &rival.d;
    if den.is_zero() {
        return None;
    }
    Some((&s2 * (&rival.c - &half) - &s1 * (&adj.c - &half)) / den)
}

/// Smallest sudden-death `q` for which the opener's win probability at
/// first-kicker probability `p` is at most `alpha`:
/// `(1 - 2a + a p) / (1 - a - p + 2 a p)`.
pub fn region_boundary<S: Scalar>(p: &S, alpha: &S) -> Result<S> {
    let one = S::one();
    let two = one.clone() + one.clone();
    if *alpha < S::half() || *alpha >= one {
        return Err(Error::Domain(format!("alpha {alpha:?} outside [1/2, 1)")));
    }
    let num = one.clone() - two.clone() * alpha.clone() + alpha.clone() * p.clone();
    let den = one - alpha.clone() - p.clone() + two * alpha.clone() * p.clone();
    if den.is_zero() {
        return Err(Error::Singularity(format!(
            "boundary denominator vanishes at p = {p:?}, alpha = {alpha:?}"
        )));
    }
    Ok(num / den)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionPoint {
    pub p: f64,
    pub q_min: f64,
}

/// Boundary of the region `q_min(p) <= q <= p` at each `p`.
pub fn region_curve(alpha: f64, ps: &[f64]) -> Result<Vec<RegionPoint>> {
    ps.iter()
        .map(|&p| {
            Ok(RegionPoint {
                p,
                q_min: region_boundary(&p, &alpha)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{sudden_death_win_prob, KickPair};

    #[test]
    fn boundary_inverts_first_mover_formula() {
        let alpha = ratio(13, 20);
        for k in 0..=10 {
            let p = ratio(50 + 5 * k, 100);
            let q = region_boundary(&p, &alpha).unwrap();
            assert_eq!(sudden_death_win_prob(&p, &q).unwrap(), alpha);
        }
    }

    #[test]
    fn boundary_domain() {
        assert!(matches!(region_boundary(&0.7, &0.4), Err(Error::Domain(_))));
        assert!(matches!(region_boundary(&0.7, &1.0), Err(Error::Domain(_))));
        // The denominator only vanishes for p outside [0, 1].
        assert!(matches!(
            region_boundary(&ratio(-1, 2), &ratio(3, 4)),
            Err(Error::Singularity(_))
        ));
    }

    #[test]
    fn decisive_regular_phase_has_no_threshold() {
        let m = ScoringModel::uniform(KickPair::from_ratios((1, 1), (0, 1)).unwrap()).unwrap();
        for c in [Comparison::VsCatchUp, Comparison::VsAlternating] {
            assert_eq!(alpha_threshold(c, 5, &m).unwrap(), Threshold::NoThreshold);
        }
    }
}
