//! Deutsch-Jozsa, Grover and the UNIQUE-SAT variant of DQC-I over finite
//! fields, with the field sizes each one needs.
//!
//! Every Hadamard is the integer matrix `[[1, 1], [1, -1]]`; the dropped
//! `1/sqrt(2)` factors only rescale the state, which changes neither the
//! measurement support nor any ratio of cardinal probabilities.

use serde::Serialize;

use crate::cardinal::{equalize_norms, weight_for};
use crate::error::{Error, Result};
use crate::gfield::{FieldCtx, Int, Scalar};
use crate::linalg::{apply, apply_1q_each, Matrix, StateVector};
use crate::modal::Oracle;
use crate::numtheory::{
    lcm, least_qnr, next_prime, prime_pi, resolve_a000229, Prime, SearchBudget,
};

/// `prime_pi` is only evaluated up to this bound.
pub const PRIME_PI_MAX: u64 = 1 << 32;

/// Integer-scaled Hadamard.
pub fn hadamard<S: Scalar>(ctx: S::Ctx) -> Matrix<S> {
    Matrix::from_ints(ctx, 2, 2, &[1, 1, 1, -1]).expect("2x2 entries")
}

fn oracle_dim(f: &Oracle) -> usize {
    2 << f.n()
}

/// Deutsch-Jozsa: scaled H on all qubits of `|1>|0..0>`, then `U_f`, then
/// scaled H on the input register.
pub fn dj_final_state<S: Scalar>(f: &Oracle, ctx: S::Ctx) -> Result<StateVector<S>> {
    let n = f.n();
    let h = hadamard::<S>(ctx);
    let psi = StateVector::basis(ctx, oracle_dim(f), 1 << n);
    let psi = apply_1q_each(&h, 0..=n, &psi)?;
    let psi = crate::modal::apply_oracle(f, &psi)?;
    apply_1q_each(&h, 1..=n, &psi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DjVerdict {
    Constant,
    Balanced,
}

/// Reads the verdict off the final state: weight on `|y>|0..0>` means
/// constant, none means balanced. Weight both there and elsewhere breaks the
/// promise.
pub fn dj_decide<S: Scalar>(f: &Oracle, ctx: S::Ctx) -> Result<DjVerdict> {
    let psi = dj_final_state::<S>(f, ctx)?;
    let half = psi.dim() / 2;
    let at_zero = !psi.get(0).is_zero() || !psi.get(half).is_zero();
    let elsewhere = psi.support().into_iter().any(|i| i != 0 && i != half);
    match (at_zero, elsewhere) {
        (true, false) => Ok(DjVerdict::Constant),
        (false, _) => Ok(DjVerdict::Balanced),
        (true, true) => Err(Error::Precondition(
            "oracle is neither constant nor balanced".into(),
        )),
    }
}

/// Field size needed to run an algorithm inside the ordered region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResourceEstimate {
    /// Input bits.
    pub n: u32,
    /// State dimension.
    pub d: u64,
    /// Largest `|amplitude|^2` the algorithm produces.
    pub amplitude_bound: u64,
    /// `2 d amplitude_bound + 1`.
    pub k_bound: u64,
    /// Least prime `>= k_bound`.
    pub k: u64,
    /// Number of primes `<= k`; absent above [`PRIME_PI_MAX`].
    pub pi_k: Option<u64>,
    /// Least prime whose least non-residue is `k`, if resolved.
    pub p: Option<Prime>,
}

fn estimate(
    n: u32,
    d: u64,
    amplitude_bound: u64,
    budget: SearchBudget,
) -> Result<ResourceEstimate> {
    let k_bound = d
        .checked_mul(amplitude_bound)
        .and_then(|x| x.checked_mul(2))
        .and_then(|x| x.checked_add(1))
        .ok_or(Error::Overflow("k bound"))?;
    let k = next_prime(k_bound).ok_or(Error::Overflow("least prime above k bound"))?;
    let pi_k = (k <= PRIME_PI_MAX).then(|| prime_pi(k));
    let p = resolve_a000229(k, budget)?.found();
    Ok(ResourceEstimate {
        n,
        d,
        amplitude_bound,
        k_bound,
        k,
        pi_k,
        p,
    })
}

/// Deutsch-Jozsa on `n` input bits: amplitudes stay within `2^n` in a space
/// of dimension `2^(n+1)`, so `k_bound = 2^(3n+2) + 1`.
pub fn dj_resources(n: u32, budget: SearchBudget) -> Result<ResourceEstimate> {
    if n == 0 || 3 * n + 2 >= 64 {
        return Err(Error::InvalidArgument(format!(
            "input bits must be in 1..=20, got {n}"
        )));
    }
    estimate(n, 2 << n, 1 << (2 * n), budget)
}

/// `N = 2^n` with `N >= 4`; returns `n`.
fn grover_bits(size: u64) -> Result<u32> {
    if size < 4 || !size.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "database size must be a power of two >= 4, got {size}"
        )));
    }
    Ok(size.trailing_zeros())
}

/// Number of Grover iterations, `round(pi / (4 arccos sqrt(1 - 1/N)) - 1/2)`.
pub fn grover_iterations(size: u64) -> Result<u32> {
    grover_bits(size)?;
    let theta = (1.0 - 1.0 / size as f64).sqrt().acos();
    Ok((std::f64::consts::PI / (4.0 * theta) - 0.5).round() as u32)
}

/// Diffusion with the `2/N` factor removed: `1 - N/2` on the diagonal, `1`
/// elsewhere.
pub fn diffusion(size: u64) -> Result<Matrix<Int>> {
    grover_bits(size)?;
    let n = usize::try_from(size).map_err(|_| Error::Overflow("database size"))?;
    let diag = 1 - (size / 2) as i128;
    let values: Vec<i128> = (0..n * n)
        .map(|i| if i / n == i % n { diag } else { 1 })
        .collect();
    Matrix::from_ints((), n, n, &values)
}

/// Phase rotation flipping the sign of `target`.
pub fn phase_rotation(size: u64, target: usize) -> Result<Matrix<Int>> {
    grover_bits(size)?;
    let n = size as usize;
    if target >= n {
        return Err(Error::InvalidArgument(format!(
            "target {target} out of range for N = {size}"
        )));
    }
    let values: Vec<i128> = (0..n * n)
        .map(|i| match (i / n, i % n) {
            (r, c) if r != c => 0,
            (r, _) if r == target => -1,
            _ => 1,
        })
        .collect();
    Matrix::from_ints((), n, n, &values)
}

/// `(D, R, j)` for a database of size `N`, marking entry 0.
pub fn grover_build(size: u64) -> Result<(Matrix<Int>, Matrix<Int>, u32)> {
    Ok((
        diffusion(size)?,
        phase_rotation(size, 0)?,
        grover_iterations(size)?,
    ))
}

/// Largest `N` whose recurrence is cross-checked against dense matrices.
const GROVER_DENSE_MAX: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroverTrace {
    #[serde(rename = "N")]
    pub size: u64,
    pub target: usize,
    pub j: u32,
    /// `(a_l, b_l)`: the target amplitude and every other amplitude.
    pub raw: Vec<(i128, i128)>,
    /// Integer weight applied to each step.
    pub weights: Vec<u64>,
    /// `(a_l, b_l)` after weighting.
    pub scaled: Vec<(i128, i128)>,
    /// Norm-squared of each scaled state.
    pub scales: Vec<u64>,
    /// Cardinal probability of the target at each step.
    pub target_probs: Vec<u64>,
    /// Cardinal probability of each non-target entry at each step.
    pub other_probs: Vec<u64>,
    /// Least `k` whose ordered region holds every raw and scaled state.
    pub needed_k: u64,
}

impl GroverTrace {
    /// The common scale, when every step was equalized exactly.
    pub fn mu(&self) -> Option<u64> {
        let first = *self.scales.first()?;
        self.scales.iter().all(|&m| m == first).then_some(first)
    }

    pub fn scaled_state(&self, step: usize) -> StateVector<Int> {
        let (a, b) = self.scaled[step];
        let amps = (0..self.size as usize)
            .map(|i| Int(if i == self.target { a } else { b }))
            .collect();
        StateVector::new((), amps).expect("non-empty")
    }
}

fn sq(x: i128) -> Result<u64> {
    x.checked_mul(x)
        .and_then(|v| u64::try_from(v).ok())
        .ok_or(Error::Overflow("Grover amplitude"))
}

/// Runs `j` Grover iterations from the uniform state via the two-coefficient
/// recurrence, checks them against dense `D R` products, and re-weights the
/// steps to a common norm. With a field, also checks that every amplitude
/// fits its ordered region.
pub fn grover_trace(size: u64, target: usize, field: Option<FieldCtx>) -> Result<GroverTrace> {
    let j = grover_iterations(size)?;
    if target as u64 >= size {
        return Err(Error::InvalidArgument(format!(
            "target {target} out of range for N = {size}"
        )));
    }
    let half = (size / 2) as i128;
    let others = size as i128 - 1;
    let mut raw = vec![(1i128, 1i128)];
    for _ in 0..j {
        let (a, b) = *raw.last().unwrap();
        let next = (|| {
            let a1 = (half - 1)
                .checked_mul(a)?
                .checked_add(others.checked_mul(b)?)?;
            let b1 = (half - 1).checked_mul(b)?.checked_sub(a)?;
            Some((a1, b1))
        })()
        .ok_or(Error::Overflow("Grover recurrence"))?;
        raw.push(next);
    }

    if size <= GROVER_DENSE_MAX {
        let step = diffusion(size)?.matmul(&phase_rotation(size, target)?)?;
        let mut psi = StateVector::from_ints((), &vec![1; size as usize])?;
        for (l, &(a, b)) in raw.iter().enumerate() {
            if l > 0 {
                psi = apply(&step, &psi)?;
            }
            let expect =
                (0..size as usize).all(|i| psi.get(i).0 == if i == target { a } else { b });
            if !expect {
                return Err(Error::Internal(format!(
                    "recurrence disagrees with D R at step {l}"
                )));
            }
        }
    }

    let norms = raw
        .iter()
        .map(|&(a, b)| {
            sq(a)?
                .checked_add(
                    sq(b)?
                        .checked_mul(size - 1)
                        .ok_or(Error::Overflow("norm"))?,
                )
                .ok_or(Error::Overflow("norm"))
        })
        .collect::<Result<Vec<u64>>>()?;
    let weights = match equalize_norms(&norms) {
        Some((_, w)) => w,
        None => {
            let target_norm = norms
                .iter()
                .try_fold(1u64, |acc, &m| lcm(acc, m))
                .ok_or(Error::Overflow("lcm of norms"))?;
            norms
                .iter()
                .map(|&m| weight_for(m, target_norm, 1))
                .collect::<Result<Vec<_>>>()?
        }
    };
    let scaled = raw
        .iter()
        .zip(&weights)
        .map(|(&(a, b), &w)| {
            let w = w as i128;
            Ok((
                a.checked_mul(w)
                    .ok_or(Error::Overflow("scaled amplitude"))?,
                b.checked_mul(w)
                    .ok_or(Error::Overflow("scaled amplitude"))?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let target_probs = scaled
        .iter()
        .map(|&(a, _)| sq(a))
        .collect::<Result<Vec<_>>>()?;
    let other_probs = scaled
        .iter()
        .map(|&(_, b)| sq(b))
        .collect::<Result<Vec<_>>>()?;
    let scales = target_probs
        .iter()
        .zip(&other_probs)
        .map(|(&t, &o)| t.checked_add(o.checked_mul(size - 1)?))
        .collect::<Option<Vec<_>>>()
        .ok_or(Error::Overflow("scale"))?;

    let max_sq = raw
        .iter()
        .chain(&scaled)
        .map(|&(a, b)| Ok(sq(a)?.max(sq(b)?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    let needed_k = max_sq
        .checked_mul(2 * size)
        .and_then(|v| v.checked_add(1))
        .ok_or(Error::Overflow("needed k"))?;
    if let Some(ctx) = field {
        let available = least_qnr(ctx.prime())?.k;
        if needed_k > available {
            return Err(Error::RangeOverflow {
                needed_k,
                available_k: available,
            });
        }
    }

    Ok(GroverTrace {
        size,
        target,
        j,
        raw,
        weights,
        scaled,
        scales,
        target_probs,
        other_probs,
        needed_k,
    })
}

/// Grover on `N` entries: `|a_j|^2 <= 2 (N/2)^(2j+1)`, so
/// `k_bound = 8 (N/2)^(2j+2) + 1`.
pub fn grover_resources(size: u64, budget: SearchBudget) -> Result<ResourceEstimate> {
    let n = grover_bits(size)?;
    let j = grover_iterations(size)?;
    let amplitude_bound = (size / 2)
        .checked_pow(2 * j + 1)
        .and_then(|v| v.checked_mul(2))
        .ok_or(Error::Overflow("Grover amplitude bound"))?;
    estimate(n, size, amplitude_bound, budget)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dqc1Run<S: Scalar> {
    pub state: StateVector<S>,
    /// Amplitude of `|0>|0..0>`: `2^n` minus the number of satisfying inputs.
    pub amplitude_00: S,
    /// A satisfiable oracle whose `|0>|0..0>` amplitude vanishes in the field.
    pub supernatural: bool,
}

/// UNIQUE-SAT with deterministic measurement: scaled H on every input
/// qubit, `U_f`, scaled H on every input qubit again.
pub fn dqc1_usat_run<S: Scalar>(f: &Oracle, ctx: S::Ctx) -> Result<Dqc1Run<S>> {
    if f.sat_count() > 1 {
        return Err(Error::Precondition(format!(
            "UNIQUE-SAT needs at most one satisfying input, oracle has {}",
            f.sat_count()
        )));
    }
    let n = f.n();
    let h = hadamard::<S>(ctx);
    let psi = StateVector::basis(ctx, oracle_dim(f), 0);
    let psi = apply_1q_each(&h, 1..=n, &psi)?;
    let psi = crate::modal::apply_oracle(f, &psi)?;
    let state = apply_1q_each(&h, 1..=n, &psi)?;
    let amplitude_00 = state.get(0);
    Ok(Dqc1Run {
        supernatural: f.sat_count() == 1 && amplitude_00.is_zero(),
        amplitude_00,
        state,
    })
}

/// Whether characteristic `p` makes a unique solution vanish from
/// `|0>|0..0>`: `p | 2^n - 1`.
pub fn dqc1_divisibility(p: u64, n: u32) -> bool {
    n < 64 && p > 1 && ((1u128 << n) - 1).is_multiple_of(p as u128)
}
