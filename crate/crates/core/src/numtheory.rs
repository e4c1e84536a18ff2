//! Integer and modular number theory: primality, quadratic residues, least
//! quadratic non-residues, the OEIS A000229 search, and prime counting.
//!
//! All modular products go through 128-bit intermediates, so every routine
//! here is exact for moduli up to 2^63.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// A value that passed the deterministic primality test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    pub fn new(n: u64) -> Result<Self> {
        if is_prime(n) {
            Ok(Prime(n))
        } else {
            Err(Error::InvalidArgument(format!("{n} is not prime")))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }
}

impl std::fmt::Display for Prime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp != 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed integer into `0..m`.
#[inline]
pub fn reduce_signed(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

// The first twelve primes are a complete Miller-Rabin witness set below
// 3.3 * 10^24, which covers every u64.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Least prime `>= n`, or `None` if it would not fit in 63 bits.
pub fn next_prime(n: u64) -> Option<u64> {
    let mut c = n.max(2);
    while c < (1 << 63) {
        if is_prime(c) {
            return Some(c);
        }
        c += 1;
    }
    None
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// Euler's criterion for an already validated odd prime `p`.
#[inline]
fn euler_criterion(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Legendre symbol `(a | p)` for an odd prime `p`.
pub fn legendre_symbol(a: i64, p: u64) -> Result<i8> {
    require_odd_prime(p)?;
    Ok(euler_criterion(reduce_signed(a, p), p))
}

/// `true` iff `a` is a non-zero square modulo the odd prime `p`.
pub(crate) fn is_qr(a: u64, p: u64) -> bool {
    euler_criterion(a, p) == 1
}

/// The least quadratic non-residue `k` of an odd prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QnrReport {
    pub p: Prime,
    pub k: u64,
}

pub fn least_qnr(p: Prime) -> Result<QnrReport> {
    require_odd_prime(p.get())?;
    let p_val = p.get();
    // Half of 1..p-1 are non-residues, so this terminates well before p.
    let k = (2..p_val)
        .find(|&a| euler_criterion(a, p_val) == -1)
        .expect("an odd prime has a quadratic non-residue");
    // The Legendre symbol is completely multiplicative, so the least
    // non-residue cannot factor into residues.
    assert!(is_prime(k), "least non-residue {k} of {p_val} is composite");
    Ok(QnrReport { p, k })
}

/// Upper bound on the candidate primes examined by [`a000229_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget(pub u64);

impl SearchBudget {
    pub const DEFAULT: SearchBudget = SearchBudget(1 << 22);
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Prime),
    /// Every prime up to `budget` was examined without a hit.
    Exhausted {
        budget: u64,
    },
}

impl SearchOutcome {
    pub fn found(self) -> Option<Prime> {
        match self {
            SearchOutcome::Found(p) => Some(p),
            SearchOutcome::Exhausted { .. } => None,
        }
    }
}

/// Tests whether `k` is the least non-residue of `p`, given the primes below `k`.
/// Checking prime arguments suffices because the symbol is multiplicative.
#[inline]
fn has_least_qnr(p: u64, k: u64, smaller_primes: &[u64]) -> bool {
    p > k && smaller_primes.iter().all(|&q| is_qr(q, p)) && euler_criterion(k, p) == -1
}

/// The primes below `k`, or `None` when no candidate `p > k` fits the budget.
fn search_prologue(k: u64, budget: SearchBudget) -> Result<Option<Vec<u64>>> {
    if !is_prime(k) {
        return Err(Error::InvalidArgument(format!("{k} is not prime")));
    }
    Ok((k < budget.0).then(|| primes_up_to(k - 1)))
}

/// Least prime whose least quadratic non-residue is the prime `k`
/// (OEIS A000229 indexed by `k`), scanning candidates up to the budget.
pub fn a000229_search(k: u64, budget: SearchBudget) -> Result<SearchOutcome> {
    let Some(smaller) = search_prologue(k, budget)? else {
        return Ok(SearchOutcome::Exhausted { budget: budget.0 });
    };
    let mut hit = None;
    for_each_prime_in(k + 1, budget.0.saturating_add(1), |p| {
        if has_least_qnr(p, k, &smaller) {
            hit = Some(p);
            false
        } else {
            true
        }
    });
    Ok(match hit {
        Some(p) => SearchOutcome::Found(Prime(p)),
        None => SearchOutcome::Exhausted { budget: budget.0 },
    })
}

const SEARCH_BLOCK: u64 = 1 << 16;

/// Parallel variant of [`a000229_search`]. Candidate blocks are scanned
/// concurrently and the first hit in block order wins, so the result does
/// not depend on the thread count.
pub fn a000229_search_par(k: u64, budget: SearchBudget) -> Result<SearchOutcome> {
    let Some(smaller) = search_prologue(k, budget)? else {
        return Ok(SearchOutcome::Exhausted { budget: budget.0 });
    };
    let lo = k + 1;
    let hi = budget.0.saturating_add(1);
    let blocks = (hi - lo).div_ceil(SEARCH_BLOCK);
    let hit = (0..blocks).into_par_iter().find_map_first(|b| {
        let start = lo + b * SEARCH_BLOCK;
        let end = (start + SEARCH_BLOCK).min(hi);
        primes_in_range(start, end)
            .into_iter()
            .find(|&p| has_least_qnr(p, k, &smaller))
    });
    Ok(match hit {
        Some(p) => SearchOutcome::Found(Prime(p)),
        None => SearchOutcome::Exhausted { budget: budget.0 },
    })
}

/// `true` iff `p` is prime and its least quadratic non-residue is `k`.
///
/// Runs `k` Euler-criterion evaluations at most, regardless of the size of `p`.
pub fn a000229_verify(p: u64, k: u64) -> bool {
    if p < 3 || k < 2 || k >= p || !is_prime(p) {
        return false;
    }
    (2..k).all(|a| is_qr(a, p)) && euler_criterion(k, p) == -1
}

/// Published entries beyond the default search budget, keyed by `k`.
const KNOWN_A000229: &[(u64, u64)] = &[(131, 196_265_095_009)];

/// Resolves the A000229 entry for `k`: a table lookup first (each table
/// entry is re-verified before it is returned), then a bounded search.
pub fn resolve_a000229(k: u64, budget: SearchBudget) -> Result<SearchOutcome> {
    match known_a000229(k)? {
        Some(p) => Ok(SearchOutcome::Found(p)),
        None => a000229_search(k, budget),
    }
}

/// [`resolve_a000229`] with the parallel search.
pub fn resolve_a000229_par(k: u64, budget: SearchBudget) -> Result<SearchOutcome> {
    match known_a000229(k)? {
        Some(p) => Ok(SearchOutcome::Found(p)),
        None => a000229_search_par(k, budget),
    }
}

fn known_a000229(k: u64) -> Result<Option<Prime>> {
    match KNOWN_A000229.iter().find(|&&(kk, _)| kk == k) {
        Some(&(_, p)) if a000229_verify(p, k) => Ok(Some(Prime(p))),
        Some(&(_, p)) => Err(Error::Internal(format!(
            "table entry ({p}, {k}) fails verification"
        ))),
        None => Ok(None),
    }
}

/// Least odd prime whose least quadratic non-residue is at least `min_k`,
/// optionally restricted to `p = 3 mod 4`, scanning candidates up to the
/// budget. Unlike the A000229 entry for the next prime above `min_k`, this is
/// minimal: that sequence is not monotone.
pub fn least_prime_with_range(
    min_k: u64,
    three_mod_four: bool,
    budget: SearchBudget,
) -> SearchOutcome {
    let mut hit = None;
    for_each_prime_in(3, budget.0.saturating_add(1), |p| {
        if three_mod_four && p % 4 != 3 {
            return true;
        }
        let mut k = 2;
        while k < min_k && is_qr(k, p) {
            k += 1;
        }
        if k >= min_k {
            hit = Some(p);
            false
        } else {
            true
        }
    });
    match hit {
        Some(p) => SearchOutcome::Found(Prime(p)),
        None => SearchOutcome::Exhausted { budget: budget.0 },
    }
}

/// Number of primes `<= k`.
pub fn prime_pi(k: u64) -> u64 {
    let mut count = 0;
    for_each_prime_in(2, k.saturating_add(1), |_| {
        count += 1;
        true
    });
    count
}

pub const NTH_PRIME_MAX: u64 = 10_000_000;

/// The `n`-th prime, 1-indexed (`nth_prime(1) == 2`).
pub fn nth_prime(n: u64) -> Result<Prime> {
    if n == 0 || n > NTH_PRIME_MAX {
        return Err(Error::Capacity(format!(
            "nth_prime supports 1 <= n <= {NTH_PRIME_MAX}, got {n}"
        )));
    }
    // Rosser: p_n < n (ln n + ln ln n) for n >= 6.
    let bound = if n < 6 {
        14
    } else {
        let x = n as f64;
        (x * (x.ln() + x.ln().ln())).ceil() as u64 + 1
    };
    let mut seen = 0;
    let mut out = 0;
    for_each_prime_in(2, bound + 1, |p| {
        seen += 1;
        if seen == n {
            out = p;
            false
        } else {
            true
        }
    });
    debug_assert!(out != 0);
    Ok(Prime(out))
}

/// Least `s` with `s * s >= m`.
pub fn ceil_sqrt(m: u64) -> u64 {
    let s = m.isqrt();
    if s * s < m {
        s + 1
    } else {
        s
    }
}

/// Writes `n = c^2 * r` with `r` squarefree; returns `(c, r)`.
pub fn squarefree_decompose(n: u64) -> (u64, u64) {
    assert!(n > 0);
    let mut rest = n;
    let mut c = 1u64;
    let mut r = 1u64;
    let mut q = 2u64;
    while q * q <= rest {
        let mut e = 0;
        while rest.is_multiple_of(q) {
            rest /= q;
            e += 1;
        }
        c *= q.pow(e / 2);
        if e % 2 == 1 {
            r *= q;
        }
        q += if q == 2 { 1 } else { 2 };
    }
    (c, r * rest)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd(a, b)).checked_mul(b)
}

/// Plain sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

const SEGMENT: u64 = 1 << 18;

/// Primes in `lo..hi`, via one sieve segment.
fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if hi <= lo {
        return out;
    }
    let base = primes_up_to(ceil_sqrt(hi));
    sieve_segment(lo, hi, &base, |p| {
        out.push(p);
        true
    });
    out
}

/// Sieves `lo..hi` with the given base primes (which must cover `sqrt(hi)`),
/// feeding primes to `f` in increasing order. Returns `false` if `f` stopped.
fn sieve_segment(lo: u64, hi: u64, base: &[u64], mut f: impl FnMut(u64) -> bool) -> bool {
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    for &q in base {
        if q * q >= hi {
            break;
        }
        let start = (q * q).max(lo.div_ceil(q) * q);
        let mut j = start;
        while j < hi {
            composite[(j - lo) as usize] = true;
            j += q;
        }
    }
    for (i, &c) in composite.iter().enumerate() {
        let n = lo + i as u64;
        if !c && n >= 2 && !f(n) {
            return false;
        }
    }
    true
}

/// Calls `f` on every prime in `lo..hi` in increasing order until it returns `false`.
pub fn for_each_prime_in(lo: u64, hi: u64, mut f: impl FnMut(u64) -> bool) {
    if hi <= lo {
        return;
    }
    let base = primes_up_to(ceil_sqrt(hi));
    let mut start = lo;
    while start < hi {
        let end = start.saturating_add(SEGMENT).min(hi);
        if !sieve_segment(start, end, &base, &mut f) {
            return;
        }
        start = end;
    }
}
