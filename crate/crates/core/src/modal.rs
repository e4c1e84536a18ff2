//! Modal quantum theory over F_2.
//!
//! States are non-zero bit vectors, evolution is any invertible linear map,
//! and a standard-basis measurement yields the *set* of possible outcomes
//! with no probabilities attached.
//!
//! Registers are laid out as `|y>|x_1 .. x_n>` with `y` as qubit 0, so the
//! basis index of `|y>|x>` is `y * 2^n + x` and `x_1` is the most
//! significant bit of `x`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gfield::{Gf2, Scalar};
use crate::linalg::{apply_1q, apply_1q_each, apply_cnot, Matrix, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ModalMapName {
    X0,
    X1,
    S,
    Sdag,
    D1,
    D2,
}

impl fmt::Display for ModalMapName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ModalMapName::X0 => "X0",
            ModalMapName::X1 => "X1",
            ModalMapName::S => "S",
            ModalMapName::Sdag => "S†",
            ModalMapName::D1 => "D1",
            ModalMapName::D2 => "D2",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModalMap {
    pub name: ModalMapName,
    pub matrix: Matrix<Gf2>,
}

fn map2(entries: [i128; 4]) -> Matrix<Gf2> {
    Matrix::from_ints((), 2, 2, &entries).expect("2x2 literal")
}

pub fn s_gate() -> Matrix<Gf2> {
    map2([1, 0, 1, 1])
}

pub fn s_dag_gate() -> Matrix<Gf2> {
    map2([1, 1, 0, 1])
}

/// The six invertible 2x2 matrices over F_2: X0, X1, S, S†, D1, D2.
pub fn modal_maps() -> Vec<ModalMap> {
    use ModalMapName::*;
    [
        (X0, [1, 0, 0, 1]),
        (X1, [0, 1, 1, 0]),
        (S, [1, 0, 1, 1]),
        (Sdag, [1, 1, 0, 1]),
        (D1, [0, 1, 1, 1]),
        (D2, [1, 1, 1, 0]),
    ]
    .into_iter()
    .map(|(name, m)| ModalMap {
        name,
        matrix: map2(m),
    })
    .collect()
}

/// The possible outcomes of a standard-basis measurement.
pub fn measure_outcomes(psi: &StateVector<Gf2>) -> Result<BTreeSet<usize>> {
    if !psi.is_physical() {
        return Err(Error::NonPhysicalState);
    }
    Ok(psi.support().into_iter().collect())
}

pub const MAX_ORACLE_BITS: usize = 20;

/// A classical function `f : B^n -> B` given by its truth table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Oracle {
    n: usize,
    table: Vec<bool>,
    sat_count: usize,
}

/// On-disk oracle description: `{"n": 3, "ones": ["101"]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSpec {
    pub n: usize,
    pub ones: Vec<String>,
}

impl Oracle {
    pub fn new(n: usize, table: Vec<bool>) -> Result<Self> {
        if n == 0 || n > MAX_ORACLE_BITS {
            return Err(Error::InvalidArgument(format!(
                "oracle width must be in 1..={MAX_ORACLE_BITS}, got {n}"
            )));
        }
        if table.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: table.len(),
            });
        }
        let sat_count = table.iter().filter(|&&b| b).count();
        Ok(Oracle {
            n,
            table,
            sat_count,
        })
    }

    /// The unsatisfiable function on `n` bits.
    pub fn zero(n: usize) -> Result<Self> {
        Self::from_ones(n, &[])
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        if n == 0 || n > MAX_ORACLE_BITS {
            return Self::new(n, Vec::new());
        }
        Self::new(n, vec![value; 1 << n])
    }

    pub fn from_ones(n: usize, ones: &[usize]) -> Result<Self> {
        if n == 0 || n > MAX_ORACLE_BITS {
            return Self::new(n, Vec::new());
        }
        let mut table = vec![false; 1 << n];
        for &x in ones {
            if x >= table.len() {
                return Err(Error::InvalidArgument(format!(
                    "input {x} out of range for n = {n}"
                )));
            }
            table[x] = true;
        }
        Self::new(n, table)
    }

    pub fn from_spec(spec: &OracleSpec) -> Result<Self> {
        let ones = spec
            .ones
            .iter()
            .map(|s| parse_bits(s, spec.n))
            .collect::<Result<Vec<_>>>()?;
        Self::from_ones(spec.n, &ones)
    }

    pub fn to_spec(&self) -> OracleSpec {
        OracleSpec {
            n: self.n,
            ones: self.ones().map(|x| format_bits(x, self.n)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sat_count(&self) -> usize {
        self.sat_count
    }

    #[inline]
    pub fn eval(&self, x: usize) -> bool {
        self.table[x]
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.table
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
    }

    pub fn is_constant(&self) -> bool {
        self.sat_count == 0 || self.sat_count == self.table.len()
    }

    pub fn is_balanced(&self) -> bool {
        2 * self.sat_count == self.table.len()
    }

    /// `f` restricted to inputs in `lo..hi` (false elsewhere).
    pub fn restrict(&self, lo: usize, hi: usize) -> Oracle {
        let table = self
            .table
            .iter()
            .enumerate()
            .map(|(i, &b)| b && (lo..hi).contains(&i))
            .collect();
        Oracle::new(self.n, table).expect("same shape")
    }
}

/// Parses `"x_1 .. x_n"` with `x_1` as the most significant bit.
pub fn parse_bits(s: &str, n: usize) -> Result<usize> {
    if s.len() != n || !s.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::InvalidArgument(format!(
            "{s:?} is not a {n}-bit string"
        )));
    }
    Ok(s.bytes().fold(0, |acc, b| (acc << 1) | (b - b'0') as usize))
}

pub fn format_bits(x: usize, n: usize) -> String {
    format!("{x:0n$b}")
}

/// The zero table plus every one-hot table on `n` bits.
pub fn admissible_oracles(n: usize) -> impl Iterator<Item = Oracle> {
    std::iter::once(Vec::new())
        .chain((0..1usize << n).map(|x| vec![x]))
        .map(move |ones| Oracle::from_ones(n, &ones).expect("valid width"))
}

/// `U_f |y>|x> = |y + f(x)>|x>`, realised as an amplitude permutation.
pub fn apply_oracle<S: Scalar>(f: &Oracle, psi: &StateVector<S>) -> Result<StateVector<S>> {
    let half = 1usize << f.n;
    if psi.dim() != 2 * half {
        return Err(Error::DimensionMismatch {
            expected: 2 * half,
            found: psi.dim(),
        });
    }
    let mut amps = psi.amps().to_vec();
    for x in f.ones() {
        amps.swap(x, half + x);
    }
    StateVector::new(psi.ctx(), amps)
}

fn require_unique(f: &Oracle) -> Result<()> {
    if f.sat_count > 1 {
        return Err(Error::Precondition(format!(
            "UNIQUE-SAT needs at most one satisfying input, oracle has {}",
            f.sat_count
        )));
    }
    Ok(())
}

/// Runs the modal UNIQUE-SAT circuit and returns the pre-measurement state:
/// S on every x qubit, U_f, S on every x qubit, S† on y, CNOT from y to each
/// x qubit, S† on y.
pub fn usat_run(f: &Oracle) -> Result<StateVector<Gf2>> {
    require_unique(f)?;
    usat_circuit(f)
}

/// The same circuit without the at-most-one-solution check. Outcomes for
/// oracles with several solutions carry no decision guarantee.
pub fn usat_circuit(f: &Oracle) -> Result<StateVector<Gf2>> {
    let n = f.n;
    let s = s_gate();
    let sd = s_dag_gate();
    let mut psi = StateVector::basis((), 2 << n, 0);
    psi = apply_1q_each(&s, 1..=n, &psi)?;
    psi = apply_oracle(f, &psi)?;
    psi = apply_1q_each(&s, 1..=n, &psi)?;
    psi = apply_1q(&sd, 0, &psi)?;
    for q in 1..=n {
        psi = apply_cnot(0, q, &psi)?;
    }
    apply_1q(&sd, 0, &psi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Satisfiability {
    Satisfiable,
    Unsatisfiable,
}

/// Decides satisfiability from the outcome set alone: `{|0>|0..0>}` means
/// unsatisfiable, and absence of `|0>|0..0>` means satisfiable.
pub fn usat_decide(f: &Oracle) -> Result<Satisfiability> {
    let outcomes = measure_outcomes(&usat_run(f)?)?;
    if outcomes.len() == 1 && outcomes.contains(&0) {
        Ok(Satisfiability::Unsatisfiable)
    } else if !outcomes.contains(&0) {
        Ok(Satisfiability::Satisfiable)
    } else {
        Err(Error::Internal(format!(
            "outcome set {outcomes:?} matches neither decision pattern"
        )))
    }
}

/// Demo: locates the unique marked input with `O(n)` UNIQUE-SAT decisions by
/// bisecting the input range.
pub fn search_unique(f: &Oracle) -> Result<Option<usize>> {
    require_unique(f)?;
    if usat_decide(f)? == Satisfiability::Unsatisfiable {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0usize, 1usize << f.n);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if usat_decide(&f.restrict(lo, mid))? == Satisfiability::Satisfiable {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(lo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{apply, is_invertible, tensor};

    fn v(bits: &[i128]) -> StateVector<Gf2> {
        StateVector::from_ints((), bits).unwrap()
    }

    #[test]
    fn six_maps_in_order() {
        let maps = modal_maps();
        assert_eq!(maps.len(), 6);
        assert_eq!(maps[0].matrix, Matrix::identity((), 2));
        assert_eq!(maps[2].name, ModalMapName::S);
        assert_eq!(maps[2].matrix, map2([1, 0, 1, 1]));
        assert!(maps.iter().all(|m| is_invertible(&m.matrix).unwrap()));
    }

    #[test]
    fn six_maps_are_all_invertible_2x2() {
        // enumerate all 16 matrices over F_2
        let invertible: Vec<Matrix<Gf2>> = (0..16i128)
            .map(|b| map2([b >> 3 & 1, b >> 2 & 1, b >> 1 & 1, b & 1]))
            .filter(|m| is_invertible(m).unwrap())
            .collect();
        assert_eq!(invertible.len(), 6);
        for m in modal_maps() {
            assert!(invertible.contains(&m.matrix));
        }
    }

    #[test]
    fn six_maps_form_a_nonabelian_group() {
        let maps: Vec<_> = modal_maps().into_iter().map(|m| m.matrix).collect();
        let index = |m: &Matrix<Gf2>| maps.iter().position(|x| x == m);
        let mut commute = true;
        for a in &maps {
            for b in &maps {
                let ab = a.matmul(b).unwrap();
                assert!(index(&ab).is_some());
                commute &= ab == b.matmul(a).unwrap();
            }
        }
        assert!(!commute);
        // S is an involution; S† is its transpose, not its inverse
        assert_eq!(s_gate().matmul(&s_gate()).unwrap(), maps[0]);
        assert_ne!(s_gate().matmul(&s_dag_gate()).unwrap(), maps[0]);
        for m in &maps {
            assert!(maps.iter().any(|x| m.matmul(x).unwrap() == maps[0]));
        }
    }

    #[test]
    fn measurement_examples() {
        assert_eq!(
            measure_outcomes(&v(&[1, 1])).unwrap(),
            BTreeSet::from([0, 1])
        );
        assert_eq!(measure_outcomes(&v(&[1, 0])).unwrap(), BTreeSet::from([0]));
        assert_eq!(
            measure_outcomes(&v(&[1, 0, 1, 0])).unwrap(),
            BTreeSet::from([0, 2])
        );
        assert_eq!(measure_outcomes(&v(&[0, 0])), Err(Error::NonPhysicalState));
        let psi = v(&[0, 1, 1, 0]);
        assert_eq!(
            measure_outcomes(&psi.scale(Gf2::ONE)).unwrap(),
            measure_outcomes(&psi).unwrap()
        );
    }

    #[test]
    fn oracle_examples() {
        let psi = v(&[1, 0, 1, 1, 0, 1, 0, 0]);
        assert_eq!(apply_oracle(&Oracle::zero(2).unwrap(), &psi).unwrap(), psi);

        let f = Oracle::from_ones(1, &[1]).unwrap();
        // |0>|1> is index 1, |1>|1> is index 3
        assert_eq!(
            apply_oracle(&f, &v(&[0, 1, 0, 0])).unwrap(),
            v(&[0, 0, 0, 1])
        );
        assert_eq!(
            apply_oracle(&f, &v(&[0, 0, 0, 1])).unwrap(),
            v(&[0, 1, 0, 0])
        );

        let f = Oracle::from_spec(&OracleSpec {
            n: 2,
            ones: vec!["11".into()],
        })
        .unwrap();
        let moved = apply_oracle(&f, &StateVector::<Gf2>::basis((), 8, 3)).unwrap();
        assert_eq!(moved, StateVector::basis((), 8, 7));
        assert!(apply_oracle(&f, &v(&[1, 0])).is_err());
    }

    #[test]
    fn oracle_validation() {
        assert!(Oracle::zero(0).is_err());
        assert!(Oracle::zero(21).is_err());
        assert!(Oracle::from_ones(2, &[4]).is_err());
        assert!(parse_bits("10", 3).is_err());
        assert!(parse_bits("1a1", 3).is_err());
        assert_eq!(parse_bits("101", 3).unwrap(), 5);
        assert_eq!(format_bits(5, 4), "0101");
        let f = Oracle::from_ones(3, &[1, 6]).unwrap();
        assert_eq!(Oracle::from_spec(&f.to_spec()).unwrap(), f);
        assert_eq!(admissible_oracles(3).count(), 9);
    }

    #[test]
    fn usat_case_one_returns_to_ground_state() {
        let psi = usat_run(&Oracle::zero(2).unwrap()).unwrap();
        assert_eq!(psi, StateVector::basis((), 8, 0));
    }

    #[test]
    fn usat_case_two_examples() {
        let psi = usat_run(&Oracle::from_ones(1, &[0]).unwrap()).unwrap();
        assert!(!psi.support().contains(&0));
        assert_eq!(psi, v(&[0, 1, 1, 1]));
        let psi = usat_run(&Oracle::from_ones(2, &[0b10]).unwrap()).unwrap();
        assert!(!psi.support().contains(&0));
        assert!(psi.is_physical());
    }

    #[test]
    fn usat_matches_dense_circuit() {
        let s = s_gate();
        let sd = s_dag_gate();
        let id = Matrix::<Gf2>::identity((), 2);
        for n in 1..=3usize {
            let mut s_x = id.clone();
            for _ in 0..n {
                s_x = tensor(&s_x, &s).unwrap();
            }
            let mut sd_y = sd.clone();
            for _ in 0..n {
                sd_y = tensor(&sd_y, &id).unwrap();
            }
            for f in admissible_oracles(n) {
                let mut psi = StateVector::basis((), 2 << n, 0);
                psi = apply(&s_x, &psi).unwrap();
                psi = apply_oracle(&f, &psi).unwrap();
                psi = apply(&s_x, &psi).unwrap();
                psi = apply(&sd_y, &psi).unwrap();
                for q in 1..=n {
                    let c = crate::linalg::cnot_matrix::<Gf2>((), 0, q, n + 1).unwrap();
                    psi = apply(&c, &psi).unwrap();
                }
                psi = apply(&sd_y, &psi).unwrap();
                assert_eq!(usat_run(&f).unwrap(), psi);
            }
        }
    }

    #[test]
    fn usat_decide_examples() {
        assert_eq!(
            usat_decide(&Oracle::zero(3).unwrap()).unwrap(),
            Satisfiability::Unsatisfiable
        );
        assert_eq!(
            usat_decide(&Oracle::from_ones(3, &[0b101]).unwrap()).unwrap(),
            Satisfiability::Satisfiable
        );
        let mut count = 0;
        for f in admissible_oracles(4) {
            let expect = if f.sat_count() == 1 {
                Satisfiability::Satisfiable
            } else {
                Satisfiability::Unsatisfiable
            };
            assert_eq!(usat_decide(&f).unwrap(), expect);
            count += 1;
        }
        assert_eq!(count, 17);
    }

    #[test]
    fn usat_rejects_ambiguous_oracles() {
        let f = Oracle::from_ones(2, &[0, 1]).unwrap();
        assert!(matches!(usat_run(&f), Err(Error::Precondition(_))));
        assert!(matches!(usat_decide(&f), Err(Error::Precondition(_))));
        assert!(usat_circuit(&f).is_ok());
    }

    #[test]
    fn satisfiable_cancels_ground_amplitude() {
        for n in 1..=6 {
            for f in admissible_oracles(n).filter(|f| f.sat_count() == 1) {
                assert!(usat_run(&f).unwrap().get(0).is_zero());
            }
        }
    }

    #[test]
    fn bisection_finds_marked_input() {
        for n in 1..=5 {
            for f in admissible_oracles(n) {
                assert_eq!(search_unique(&f).unwrap(), f.ones().next());
            }
        }
    }
}
