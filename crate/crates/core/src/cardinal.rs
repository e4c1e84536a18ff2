//! Cardinal probability.
//!
//! States with different integer norms `m` cannot in general be rescaled
//! by integers to a common norm (`2 x^2 = 3 y^2` has no solution), so each
//! state gets an integer weight `x_m` built from approximate square roots and
//! its own scale `mu_m = m x_m^2`. A realization assigns every outcome the
//! integer `x_m^2 |alpha_i|^2`; it is valid when comparing those integers
//! never reverses a strict inequality between the exact probabilities.

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gfield::{center_lift, GaussianElem};
use crate::linalg::StateVector;
use crate::numtheory::{ceil_sqrt, lcm, squarefree_decompose, Prime};
use crate::ordered::{in_region, integer_norm_sq, ordered_range, AmplitudeRegion};

/// `s = ceil(sqrt(m * 100^t))`: a square root of `m` carrying `t` extra
/// decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ApproxSqrt {
    pub m: u64,
    pub t: u32,
    pub s: u64,
}

impl ApproxSqrt {
    pub fn radicand(&self) -> u64 {
        self.m * 100u64.pow(self.t)
    }

    /// The perfect square standing in for the radicand.
    pub fn square(&self) -> u64 {
        self.s * self.s
    }
}

fn scaled_radicand(m: u64, t: u32) -> Result<u64> {
    100u64
        .checked_pow(t)
        .and_then(|f| f.checked_mul(m))
        .ok_or(Error::Overflow("approximate square root radicand"))
}

/// Approximate square root of `m` at precision `t`. With a range bound `k`,
/// the square must fit the ordered range: `s^2 <= (k-1)/2`.
pub fn approx_sqrt(m: u64, t: u32, k: Option<u64>) -> Result<ApproxSqrt> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "approximate square root needs m >= 1".into(),
        ));
    }
    let s = ceil_sqrt(scaled_radicand(m, t)?);
    if let Some(k) = k {
        let sq = s as u128 * s as u128;
        if 2 * sq > k.saturating_sub(1) as u128 {
            return Err(Error::RangeOverflow {
                needed_k: u64::try_from(2 * sq + 1).unwrap_or(u64::MAX),
                available_k: k,
            });
        }
    }
    Ok(ApproxSqrt { m, t, s })
}

/// Integer weight approximating `sqrt(target / m)` scaled by `10^t`.
///
/// `target / m = c^2 r` with `r` squarefree; the exact factor `c` is kept
/// and only `sqrt(r)` is approximated, so `sqrt(24)` becomes `2 sqrt'(6)`.
pub fn weight_for(m: u64, target: u64, t: u32) -> Result<u64> {
    if m == 0 || !target.is_multiple_of(m) {
        return Err(Error::InvalidArgument(format!(
            "target {target} is not a multiple of norm {m}"
        )));
    }
    let (c, r) = squarefree_decompose(target / m);
    let root = if r > 1 {
        approx_sqrt(r, t, None)?.s
    } else {
        10u64.pow(t)
    };
    c.checked_mul(root).ok_or(Error::Overflow("weight"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledState {
    pub base: StateVector<GaussianElem>,
    /// `m`, the integer norm-squared of `base`.
    pub norm: u64,
    /// `x_m`.
    pub weight: u64,
    /// `mu = m * x_m^2`.
    pub mu: u64,
}

impl ScaledState {
    pub fn new(base: StateVector<GaussianElem>, weight: u64) -> Result<Self> {
        let norm = u64::try_from(integer_norm_sq(&base)).map_err(|_| Error::Overflow("norm"))?;
        if norm == 0 {
            return Err(Error::NonPhysicalState);
        }
        if weight == 0 {
            return Err(Error::InvalidArgument("weight must be positive".into()));
        }
        let mu = weight
            .checked_mul(weight)
            .and_then(|w2| w2.checked_mul(norm))
            .ok_or(Error::Overflow("scale mu"))?;
        Ok(ScaledState {
            base,
            norm,
            weight,
            mu,
        })
    }
}

/// Re-weights each state toward the common norm `target` (default: lcm of
/// the norms) using approximate square roots at precision `t`.
pub fn rescale_states(
    states: &[StateVector<GaussianElem>],
    target: Option<u64>,
    t: u32,
) -> Result<Vec<ScaledState>> {
    let norms = states
        .iter()
        .map(|s| u64::try_from(integer_norm_sq(s)).map_err(|_| Error::Overflow("norm")))
        .collect::<Result<Vec<_>>>()?;
    if norms.contains(&0) {
        return Err(Error::NonPhysicalState);
    }
    let target = match target {
        Some(t) => t,
        None => norms
            .iter()
            .try_fold(1u64, |acc, &m| lcm(acc, m))
            .ok_or(Error::Overflow("lcm of norms"))?,
    };
    states
        .iter()
        .zip(&norms)
        .map(|(s, &m)| ScaledState::new(s.clone(), weight_for(m, target, t)?))
        .collect()
}

/// Applies explicit weights, one per state.
pub fn scale_with_weights(
    states: &[StateVector<GaussianElem>],
    weights: &[u64],
) -> Result<Vec<ScaledState>> {
    if states.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: states.len(),
            found: weights.len(),
        });
    }
    states
        .iter()
        .zip(weights)
        .map(|(s, &w)| ScaledState::new(s.clone(), w))
        .collect()
}

/// `x_m^2 |alpha_i|^2` for each outcome; sums to `mu`. The base state must lie
/// in the amplitude region of its field for its own dimension.
pub fn scaled_probabilities(s: &ScaledState) -> Result<Vec<u64>> {
    let range = ordered_range(Prime::new(s.base.ctx().p())?)?;
    let region = AmplitudeRegion::new(s.base.dim() as u64, range)?;
    let report = in_region(&s.base, &region)?;
    if let Some(v) = report.first_violation {
        return Err(Error::RangeOverflow {
            needed_k: u64::try_from(2 * v.weighted_norm + 1).unwrap_or(u64::MAX),
            available_k: range.k(),
        });
    }
    let w2 = s.weight * s.weight;
    s.base
        .amps()
        .iter()
        .map(|&a| {
            let (x, y) = center_lift(a);
            let n = (x * x + y * y) as u64;
            w2.checked_mul(n)
                .ok_or(Error::Overflow("scaled probability"))
        })
        .collect()
}

/// Cardinal probabilities of several states together with their scales.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CardinalRealization {
    /// `probs[state][outcome]`.
    pub probs: Vec<Vec<u64>>,
    /// `mu` of each state.
    pub scales: Vec<u64>,
}

impl CardinalRealization {
    pub fn new(probs: Vec<Vec<u64>>, scales: Vec<u64>) -> Result<Self> {
        if probs.len() != scales.len() {
            return Err(Error::DimensionMismatch {
                expected: probs.len(),
                found: scales.len(),
            });
        }
        for (row, &mu) in probs.iter().zip(&scales) {
            if row.iter().any(|&p| p > mu) {
                return Err(Error::InvalidArgument(format!(
                    "cardinal probability exceeds its scale {mu}"
                )));
            }
        }
        Ok(CardinalRealization { probs, scales })
    }

    pub fn from_states(states: &[ScaledState]) -> Result<Self> {
        let probs = states
            .iter()
            .map(scaled_probabilities)
            .collect::<Result<Vec<_>>>()?;
        Self::new(probs, states.iter().map(|s| s.mu).collect())
    }
}

/// Exact probabilities `|alpha_i|^2 / m` of each state.
pub fn reference_probabilities(
    states: &[StateVector<GaussianElem>],
) -> Result<Vec<Vec<Ratio<u64>>>> {
    states
        .iter()
        .map(|s| {
            let m = u64::try_from(integer_norm_sq(s)).map_err(|_| Error::Overflow("norm"))?;
            if m == 0 {
                return Err(Error::NonPhysicalState);
            }
            Ok(s.amps()
                .iter()
                .map(|&a| {
                    let (x, y) = center_lift(a);
                    Ratio::new((x * x + y * y) as u64, m)
                })
                .collect())
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairClass {
    Preserved,
    Collapsed,
    Reversed,
}

/// One `(state, outcome)` entry of a realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub state: usize,
    pub outcome: usize,
    pub cardinal: u64,
    #[serde(serialize_with = "ratio_str")]
    pub reference: Ratio<u64>,
}

fn ratio_str<S: Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// A pair whose exact probabilities satisfy `lower.reference < upper.reference`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairComparison {
    pub lower: Entry,
    pub upper: Entry,
    pub class: PairClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealizationReport {
    pub preserved: usize,
    pub collapsed: Vec<PairComparison>,
    pub reversed: Vec<PairComparison>,
    /// Pairs whose exact probabilities are equal; any cardinal order is allowed.
    pub ties: usize,
    /// No strict inequality was reversed.
    pub valid: bool,
    /// Valid, and no strict inequality collapsed to equality.
    pub strict: bool,
}

/// Classifies every pair of entries whose exact probabilities differ.
///
/// Cardinal values are compared directly as integers; the reference
/// probabilities are exact rationals.
pub fn validate_realization(
    real: &CardinalRealization,
    reference: &[Vec<Ratio<u64>>],
) -> Result<RealizationReport> {
    if real.probs.len() != reference.len() {
        return Err(Error::DimensionMismatch {
            expected: real.probs.len(),
            found: reference.len(),
        });
    }
    let mut entries = Vec::new();
    for (state, (row, refs)) in real.probs.iter().zip(reference).enumerate() {
        if row.len() != refs.len() {
            return Err(Error::DimensionMismatch {
                expected: row.len(),
                found: refs.len(),
            });
        }
        for (outcome, (&cardinal, &r)) in row.iter().zip(refs).enumerate() {
            entries.push(Entry {
                state,
                outcome,
                cardinal,
                reference: r,
            });
        }
    }
    let mut preserved = 0;
    let mut ties = 0;
    let mut collapsed = Vec::new();
    let mut reversed = Vec::new();
    for (i, &a) in entries.iter().enumerate() {
        for &b in &entries[i + 1..] {
            let (lower, upper) = match a.reference.cmp(&b.reference) {
                std::cmp::Ordering::Equal => {
                    ties += 1;
                    continue;
                }
                std::cmp::Ordering::Less => (a, b),
                std::cmp::Ordering::Greater => (b, a),
            };
            let class = match lower.cardinal.cmp(&upper.cardinal) {
                std::cmp::Ordering::Less => PairClass::Preserved,
                std::cmp::Ordering::Equal => PairClass::Collapsed,
                std::cmp::Ordering::Greater => PairClass::Reversed,
            };
            let cmp = PairComparison {
                lower,
                upper,
                class,
            };
            match class {
                PairClass::Preserved => preserved += 1,
                PairClass::Collapsed => collapsed.push(cmp),
                PairClass::Reversed => reversed.push(cmp),
            }
        }
    }
    Ok(RealizationReport {
        preserved,
        valid: reversed.is_empty(),
        strict: reversed.is_empty() && collapsed.is_empty(),
        collapsed,
        reversed,
        ties,
    })
}

/// Least integer weights `w_l` with `norms[l] * w_l^2` all equal, when they
/// exist (all norms share a squarefree part). Returns `(mu, weights)`.
pub fn equalize_norms(norms: &[u64]) -> Option<(u64, Vec<u64>)> {
    let parts: Vec<(u64, u64)> = norms
        .iter()
        .map(|&n| (n > 0).then(|| squarefree_decompose(n)))
        .collect::<Option<_>>()?;
    let r = parts.first()?.1;
    if parts.iter().any(|&(_, ri)| ri != r) {
        return None;
    }
    let l = parts.iter().try_fold(1u64, |acc, &(c, _)| lcm(acc, c))?;
    let mu = l.checked_mul(l)?.checked_mul(r)?;
    Some((mu, parts.iter().map(|&(c, _)| l / c).collect()))
}

/// Brute-force search for `m1 x1^2 = m2 x2^2` with `1 <= x1, x2 <= limit`.
pub fn common_norm_solution(m1: u64, m2: u64, limit: u64) -> Option<(u64, u64)> {
    (1..=limit).find_map(|x1| {
        let lhs = m1 as u128 * x1 as u128 * x1 as u128;
        if !lhs.is_multiple_of(m2 as u128) {
            return None;
        }
        let q = lhs / m2 as u128;
        let x2 = (q as f64).sqrt() as u128;
        (x2.saturating_sub(1)..=x2 + 1)
            .find(|&c| c * c == q && c >= 1 && c <= limit as u128)
            .map(|c| (x1, c as u64))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfield::make_field;

    fn four_states() -> Vec<StateVector<GaussianElem>> {
        let f = make_field(311).unwrap();
        let s = |a: (i64, i64), b: (i64, i64)| {
            StateVector::new(
                f,
                vec![f.elem(a.0, a.1).unwrap(), f.elem(b.0, b.1).unwrap()],
            )
            .unwrap()
        };
        vec![
            s((1, 0), (0, 0)),
            s((1, 0), (1, 0)),
            s((1, 0), (1, 1)),
            s((1, -1), (1, 1)),
        ]
    }

    #[test]
    fn approx_sqrt_examples() {
        let s = |m, t| approx_sqrt(m, t, None).unwrap().s;
        assert_eq!(s(2, 0), 2);
        assert_eq!(s(3, 0), 2);
        assert_eq!(s(6, 0), 3);
        assert_eq!(s(6, 1), 25);
        assert_eq!(s(2, 1), 15);
        assert_eq!(s(3, 1), 18);
        assert_eq!(s(4, 0), 2);
        assert_eq!(approx_sqrt(6, 1, None).unwrap().radicand(), 600);
        assert!(approx_sqrt(0, 0, None).is_err());
        assert!(matches!(approx_sqrt(1, 10, None), Err(Error::Overflow(_))));
    }

    #[test]
    fn approx_sqrt_range_bound() {
        // s^2 = 9 needs (k-1)/2 >= 9, i.e. k >= 19
        assert!(approx_sqrt(6, 0, Some(19)).is_ok());
        assert_eq!(
            approx_sqrt(6, 0, Some(17)),
            Err(Error::RangeOverflow {
                needed_k: 19,
                available_k: 17
            })
        );
        assert!(approx_sqrt(6, 1, Some(1251)).is_ok());
        assert!(approx_sqrt(6, 1, Some(1250)).is_err());
    }

    #[test]
    fn approx_sqrt_converges() {
        for m in 1..=100u64 {
            let mut prev: Option<f64> = None;
            let mut prev_err = f64::INFINITY;
            for t in 0..=4 {
                let a = approx_sqrt(m, t, None).unwrap();
                let scale = 10f64.powi(t as i32);
                let v = a.s as f64 / scale;
                // exact: s^2 >= m 100^t
                assert!(a.s as u128 * a.s as u128 >= m as u128 * 100u128.pow(t));
                if let Some(p) = prev {
                    assert!(v <= p + 1e-12);
                }
                let err = v * v - m as f64;
                assert!(err >= -1e-9 && err <= prev_err + 1e-9);
                prev = Some(v);
                prev_err = err;
            }
            assert!(prev_err < 2.0 * (m as f64).sqrt() * 1e-4 + 1e-6);
        }
    }

    #[test]
    fn rescale_examples() {
        let states = four_states();
        let r0 = rescale_states(&states, Some(24), 0).unwrap();
        assert_eq!(
            r0.iter().map(|s| s.weight).collect::<Vec<_>>(),
            [6, 4, 4, 3]
        );
        assert_eq!(
            r0.iter().map(|s| s.mu).collect::<Vec<_>>(),
            [36, 32, 48, 36]
        );
        let r1 = rescale_states(&states, Some(24), 1).unwrap();
        assert_eq!(
            r1.iter().map(|s| s.weight).collect::<Vec<_>>(),
            [50, 36, 30, 25]
        );
        assert_eq!(
            r1.iter().map(|s| s.mu).collect::<Vec<_>>(),
            [2500, 2592, 2700, 2500]
        );
        for t in 0..4 {
            let one = rescale_states(&states[..1], Some(1), t).unwrap();
            assert_eq!((one[0].weight, one[0].mu), (10u64.pow(t), 100u64.pow(t)));
        }
        assert!(matches!(
            rescale_states(&states, Some(10), 0),
            Err(Error::InvalidArgument(_))
        ));
        // default target is lcm(1, 2, 3, 4) = 12
        let d = rescale_states(&states, None, 0).unwrap();
        assert_eq!(d.iter().map(|s| s.weight).collect::<Vec<_>>(), [4, 3, 2, 2]);
    }

    #[test]
    fn probabilities_examples() {
        let states = four_states();
        let p = |i: usize, w: u64| {
            scaled_probabilities(&ScaledState::new(states[i].clone(), w).unwrap()).unwrap()
        };
        assert_eq!(p(2, 4), [16, 32]);
        assert_eq!(p(0, 6), [36, 0]);
        assert_eq!(p(3, 25), [1250, 1250]);
        for (i, w) in [(0, 7), (1, 11), (2, 13), (3, 17)] {
            let s = ScaledState::new(states[i].clone(), w).unwrap();
            assert_eq!(scaled_probabilities(&s).unwrap().iter().sum::<u64>(), s.mu);
        }
    }

    #[test]
    fn probabilities_reject_region_violations() {
        let f = make_field(311).unwrap();
        let big = StateVector::new(f, vec![f.elem(2, 2).unwrap(), f.real(0).unwrap()]).unwrap();
        let s = ScaledState::new(big, 1).unwrap();
        assert!(matches!(
            scaled_probabilities(&s),
            Err(Error::RangeOverflow { .. })
        ));
    }

    #[test]
    fn reference_is_exact() {
        let r = reference_probabilities(&four_states()).unwrap();
        let q = |a, b| Ratio::new(a, b);
        assert_eq!(r[0], [q(1, 1), q(0, 1)]);
        assert_eq!(r[1], [q(1, 2), q(1, 2)]);
        assert_eq!(r[2], [q(1, 3), q(2, 3)]);
        assert_eq!(r[3], [q(1, 2), q(1, 2)]);
    }

    fn report_for(weights: &[u64]) -> RealizationReport {
        let states = four_states();
        let scaled = scale_with_weights(&states, weights).unwrap();
        let real = CardinalRealization::from_states(&scaled).unwrap();
        validate_realization(&real, &reference_probabilities(&states).unwrap()).unwrap()
    }

    #[test]
    fn failing_and_successful_choices() {
        let fail = report_for(&[4, 3, 2, 2]);
        assert!(!fail.valid);
        assert!(fail.reversed.iter().any(|c| {
            (c.lower.state, c.lower.outcome, c.lower.cardinal) == (1, 1, 9)
                && (c.upper.state, c.upper.outcome, c.upper.cardinal) == (2, 1, 8)
        }));
        let ok = report_for(&[16, 12, 9, 8]);
        assert!(ok.valid && ok.strict);
        assert!(ok.reversed.is_empty());
    }

    #[test]
    fn precision_resolves_collapse() {
        let states = four_states();
        let reference = reference_probabilities(&states).unwrap();
        let rep = |t| {
            let scaled = rescale_states(&states, Some(24), t).unwrap();
            validate_realization(
                &CardinalRealization::from_states(&scaled).unwrap(),
                &reference,
            )
            .unwrap()
        };
        let r0 = rep(0);
        assert!(r0.valid && !r0.strict);
        // 1/3 of the third state against both halves of the second, all at 16
        assert_eq!(r0.collapsed.len(), 2);
        for c in &r0.collapsed {
            assert_eq!(
                (c.lower.state, c.lower.outcome, c.lower.cardinal),
                (2, 0, 16)
            );
            assert_eq!((c.upper.state, c.upper.cardinal), (1, 16));
        }
        let r1 = rep(1);
        assert!(r1.valid && r1.strict);
    }

    #[test]
    fn realization_invariants() {
        assert!(CardinalRealization::new(vec![vec![5]], vec![4]).is_err());
        assert!(CardinalRealization::new(vec![vec![4]], vec![4, 4]).is_err());
        let real = CardinalRealization::new(vec![vec![1, 2]], vec![3]).unwrap();
        assert!(validate_realization(&real, &[vec![Ratio::new(1, 3)]]).is_err());
    }

    #[test]
    fn equalize_examples() {
        assert_eq!(
            equalize_norms(&[8, 128, 2048]),
            Some((2048, vec![16, 4, 1]))
        );
        assert_eq!(equalize_norms(&[4, 16]), Some((16, vec![2, 1])));
        assert_eq!(equalize_norms(&[2, 3]), None);
        assert_eq!(equalize_norms(&[]), None);
        assert_eq!(equalize_norms(&[0, 1]), None);
    }

    #[test]
    fn no_common_norm_for_two_and_three() {
        assert_eq!(common_norm_solution(2, 3, 1_000_000), None);
        assert_eq!(common_norm_solution(2, 8, 100), Some((2, 1)));
        assert_eq!(common_norm_solution(3, 12, 100), Some((2, 1)));
        // existence agrees with equal squarefree parts
        for m1 in 1..30u64 {
            for m2 in 1..30u64 {
                let same = squarefree_decompose(m1).1 == squarefree_decompose(m2).1;
                assert_eq!(
                    common_norm_solution(m1, m2, 200).is_some(),
                    same,
                    "{m1} {m2}"
                );
            }
        }
    }
}
