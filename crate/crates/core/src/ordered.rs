//! Locally ordered ranges of F_p.
//!
//! When `0, 1, .., k-1` are all quadratic residues mod `p` (with `k` the
//! least non-residue), any window of `k` consecutive elements is
//! transitively ordered by "`b - a` is a residue". Amplitudes whose centered
//! lifts stay inside the region `d (a^2 + b^2) <= (k-1)/2` never wrap
//! around, so the Hermitian form behaves like an inner product there.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gfield::{center_lift, GaussianElem};
use crate::linalg::StateVector;
use crate::numtheory::{is_qr, least_qnr, reduce_signed, Prime};

/// The run of residues `1..k-1` of an odd prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrderedRange {
    p: Prime,
    k: u64,
}

pub fn ordered_range(p: Prime) -> Result<OrderedRange> {
    let r = least_qnr(p)?;
    Ok(OrderedRange { p, k: r.k })
}

impl OrderedRange {
    pub fn p(&self) -> u64 {
        self.p.get()
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Offset of the window start below its center. For the degenerate
    /// `k = 2` (p = 3) the window is `{x, x+1}`.
    fn below(&self) -> i64 {
        ((self.k - 1) / 2) as i64
    }

    /// `S_x(k)` as signed integers centered on `x`.
    pub fn window_signed(&self, x: i64) -> Vec<i64> {
        let lo = x - self.below();
        (lo..lo + self.k as i64).collect()
    }

    /// `S_0(k)`.
    pub fn centered_window(&self) -> Vec<i64> {
        self.window_signed(0)
    }

    /// `S_x(k)` as residues in `0..p`.
    pub fn window(&self, x: u64) -> Vec<u64> {
        self.window_signed(x as i64)
            .into_iter()
            .map(|v| reduce_signed(v, self.p()))
            .collect()
    }

    /// `S_x(k)` followed by the next element, a window of length `k + 1`.
    pub fn extended_window(&self, x: u64) -> Vec<u64> {
        let mut w = self.window(x);
        w.push((w[w.len() - 1] + 1) % self.p());
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QrOrder {
    Less,
    Greater,
    Equal,
    Incomparable,
}

/// Compares two residues under the local order: `a < b` when `b - a` is a
/// quadratic residue lying in the guaranteed run `1..k-1`.
pub fn qr_less(a: u64, b: u64, r: &OrderedRange) -> QrOrder {
    let p = r.p();
    let d = (b % p + p - a % p) % p;
    if d == 0 {
        return QrOrder::Equal;
    }
    let forward = d < r.k && is_qr(d, p);
    let backward = p - d < r.k && is_qr(p - d, p);
    match (forward, backward) {
        (true, false) => QrOrder::Less,
        (false, true) => QrOrder::Greater,
        _ => QrOrder::Incomparable,
    }
}

/// `true` iff every forward difference `seq[j] - seq[i]`, `i < j`, is a
/// quadratic residue mod `p`.
pub fn check_transitive(seq: &[u64], r: &OrderedRange) -> bool {
    let p = r.p();
    seq.iter().enumerate().all(|(i, &a)| {
        seq[i + 1..]
            .iter()
            .all(|&b| is_qr((b % p + p - a % p) % p, p))
    })
}

/// Amplitudes allowed in dimension `d` for a run of length `k`: centered
/// Gaussian integers `a + bi` with `a, b` in `S_0(k)` and
/// `d (a^2 + b^2) <= (k-1)/2`, sorted.
pub fn allowed_amplitudes_for(k: u64, d: u64) -> Vec<(i64, i64)> {
    let below = ((k.max(1) - 1) / 2) as i64;
    let window: Vec<i64> = (-below..-below + k as i64).collect();
    let mut out = Vec::new();
    for &a in &window {
        for &b in &window {
            if fits(d, a, b, k) {
                out.push((a, b));
            }
        }
    }
    out.sort_unstable();
    out
}

/// `d (a^2 + b^2) <= (k-1)/2`, kept in integers as `2d(a^2+b^2) <= k-1`.
#[inline]
fn fits(d: u64, a: i64, b: i64, k: u64) -> bool {
    let n = (a * a + b * b) as u128;
    2 * d as u128 * n <= (k - 1) as u128
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AmplitudeRegion {
    d: u64,
    range: OrderedRange,
}

impl AmplitudeRegion {
    pub fn new(d: u64, range: OrderedRange) -> Result<Self> {
        let half = (range.k - 1) / 2;
        if d == 0 || d + half >= range.p() {
            return Err(Error::InvalidArgument(format!(
                "dimension {d} outside 1 <= d < p - (k-1)/2 = {}",
                range.p() - half
            )));
        }
        Ok(AmplitudeRegion { d, range })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn range(&self) -> &OrderedRange {
        &self.range
    }
}

/// `F^d(k)` for the region.
pub fn allowed_amplitudes(region: &AmplitudeRegion) -> Vec<(i64, i64)> {
    allowed_amplitudes_for(region.range.k, region.d)
}

/// First coordinate that leaves the region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegionViolation {
    pub index: usize,
    pub amplitude: (i64, i64),
    /// `d (a^2 + b^2)` for the offending amplitude.
    pub weighted_norm: u128,
    pub limit: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegionReport {
    pub inside: bool,
    pub first_violation: Option<RegionViolation>,
}

/// Checks every centered amplitude of `psi` against the region bound.
pub fn in_region(
    psi: &StateVector<GaussianElem>,
    region: &AmplitudeRegion,
) -> Result<RegionReport> {
    if psi.dim() as u64 != region.d {
        return Err(Error::DimensionMismatch {
            expected: region.d as usize,
            found: psi.dim(),
        });
    }
    if psi.ctx().p() != region.range.p() {
        return Err(Error::ContextMismatch);
    }
    let k = region.range.k;
    for (index, &amp) in psi.amps().iter().enumerate() {
        let (a, b) = center_lift(amp);
        if !fits(region.d, a, b, k) {
            let n = (a as i128 * a as i128 + b as i128 * b as i128) as u128;
            return Ok(RegionReport {
                inside: false,
                first_violation: Some(RegionViolation {
                    index,
                    amplitude: (a, b),
                    weighted_norm: region.d as u128 * n,
                    limit: (k - 1) / 2,
                }),
            });
        }
    }
    Ok(RegionReport {
        inside: true,
        first_violation: None,
    })
}

/// `sum (a_i^2 + b_i^2)` over centered lifts, with no modular wrap.
pub fn integer_norm_sq(psi: &StateVector<GaussianElem>) -> u128 {
    psi.amps()
        .iter()
        .map(|&x| {
            let (a, b) = center_lift(x);
            (a as i128 * a as i128 + b as i128 * b as i128) as u128
        })
        .sum()
}
