//! Dense exact vectors and matrices, the Hermitian dot product, and
//! Kronecker products.
//!
//! Multi-qubit indices put qubit 0 in the most significant bit, so for an
//! `n`-qubit register qubit `j` is bit `n - 1 - j` of the basis index.

use crate::error::{Error, Result};
use crate::gfield::{FieldCtx, FieldScalar, GaussianElem, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateVector<S: Scalar> {
    ctx: S::Ctx,
    amps: Vec<S>,
}

impl<S: Scalar> StateVector<S> {
    pub fn new(ctx: S::Ctx, amps: Vec<S>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidArgument(
                "state vector must have dim >= 1".into(),
            ));
        }
        if amps.iter().any(|a| a.ctx() != ctx) {
            return Err(Error::ContextMismatch);
        }
        Ok(StateVector { ctx, amps })
    }

    pub fn from_ints(ctx: S::Ctx, values: &[i128]) -> Result<Self> {
        Self::new(ctx, values.iter().map(|&v| S::from_int(ctx, v)).collect())
    }

    pub fn zeros(ctx: S::Ctx, dim: usize) -> Self {
        assert!(dim >= 1);
        StateVector {
            ctx,
            amps: vec![S::zero(ctx); dim],
        }
    }

    /// The computational basis vector `|index>`.
    pub fn basis(ctx: S::Ctx, dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut v = Self::zeros(ctx, dim);
        v.amps[index] = S::one(ctx);
        v
    }

    pub fn ctx(&self) -> S::Ctx {
        self.ctx
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[S] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<S> {
        self.amps
    }

    pub fn get(&self, i: usize) -> S {
        self.amps[i]
    }

    pub fn set(&mut self, i: usize, v: S) {
        assert_eq!(v.ctx(), self.ctx, "mixed field contexts");
        self.amps[i] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.amps.iter().all(Scalar::is_zero)
    }

    /// Non-zero vectors are physical; intermediate algebra may pass through zero.
    pub fn is_physical(&self) -> bool {
        !self.is_zero()
    }

    /// Indices with non-zero amplitude, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn scale(&self, s: S) -> Self {
        assert_eq!(s.ctx(), self.ctx, "mixed field contexts");
        StateVector {
            ctx: self.ctx,
            amps: self.amps.iter().map(|&a| s * a).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(StateVector {
            ctx: self.ctx,
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    /// Re-expresses the amplitudes in another scalar type.
    pub fn map<T: Scalar>(&self, ctx: T::Ctx, f: impl Fn(S) -> T) -> Result<StateVector<T>> {
        StateVector::new(ctx, self.amps.iter().map(|&a| f(a)).collect())
    }

    pub fn render(&self, centered: bool) -> Vec<String> {
        self.amps.iter().map(|a| a.render(centered)).collect()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<S: Scalar> {
    rows: usize,
    cols: usize,
    ctx: S::Ctx,
    entries: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn new(ctx: S::Ctx, rows: usize, cols: usize, entries: Vec<S>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(
                "matrix dimensions must be positive".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        if entries.iter().any(|e| e.ctx() != ctx) {
            return Err(Error::ContextMismatch);
        }
        Ok(Matrix {
            rows,
            cols,
            ctx,
            entries,
        })
    }

    pub fn from_ints(ctx: S::Ctx, rows: usize, cols: usize, values: &[i128]) -> Result<Self> {
        Self::new(
            ctx,
            rows,
            cols,
            values.iter().map(|&v| S::from_int(ctx, v)).collect(),
        )
    }

    pub fn identity(ctx: S::Ctx, n: usize) -> Self {
        let mut entries = vec![S::zero(ctx); n * n];
        for i in 0..n {
            entries[i * n + i] = S::one(ctx);
        }
        Matrix {
            rows: n,
            cols: n,
            ctx,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> S::Ctx {
        self.ctx
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> S {
        self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn conj_transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).conj());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            ctx: self.ctx,
            entries,
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let zero = S::zero(self.ctx);
        let mut entries = vec![zero; self.rows * other.cols];
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let e = &mut entries[r * other.cols + c];
                    *e = *e + a * other.get(k, c);
                }
            }
        }
        Matrix::new(self.ctx, self.rows, other.cols, entries)
    }

    pub fn map<T: Scalar>(&self, ctx: T::Ctx, f: impl Fn(S) -> T) -> Result<Matrix<T>> {
        Matrix::new(
            ctx,
            self.rows,
            self.cols,
            self.entries.iter().map(|&a| f(a)).collect(),
        )
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            })
        }
    }
}

/// `<phi|psi> = sum conj(phi_i) * psi_i`. Over F_2 conjugation is trivial.
pub fn herm_dot<S: Scalar>(phi: &StateVector<S>, psi: &StateVector<S>) -> Result<S> {
    phi.check_compatible(psi)?;
    Ok(phi
        .amps
        .iter()
        .zip(&psi.amps)
        .fold(S::zero(phi.ctx), |acc, (&b, &a)| acc + b.conj() * a))
}

/// `true` iff `M^dagger M = I`.
pub fn is_unitary<S: Scalar>(m: &Matrix<S>) -> Result<bool> {
    m.require_square()?;
    Ok(m.conj_transpose().matmul(m)? == Matrix::identity(m.ctx, m.rows))
}

/// Determinant by Gaussian elimination.
pub fn determinant<S: FieldScalar>(m: &Matrix<S>) -> Result<S> {
    m.require_square()?;
    let n = m.rows;
    let mut a = m.entries.clone();
    let mut det = S::one(m.ctx);
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
            return Ok(S::zero(m.ctx));
        };
        if pivot != col {
            for c in 0..n {
                a.swap(pivot * n + c, col * n + c);
            }
            det = -det;
        }
        let pv = a[col * n + col];
        det = det * pv;
        let pinv = pv.inv().expect("non-zero pivot is invertible");
        for r in col + 1..n {
            let f = a[r * n + col] * pinv;
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                a[r * n + c] = a[r * n + c] - f * a[col * n + c];
            }
        }
    }
    Ok(det)
}

pub fn is_invertible<S: FieldScalar>(m: &Matrix<S>) -> Result<bool> {
    Ok(!determinant(m)?.is_zero())
}

/// Kronecker product; the left factor indexes the most significant position.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Result<Self>;
}

impl<S: Scalar> Tensor for StateVector<S> {
    fn tensor(&self, other: &Self) -> Result<Self> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        let amps = self
            .amps
            .iter()
            .flat_map(|&a| other.amps.iter().map(move |&b| a * b))
            .collect();
        StateVector::new(self.ctx, amps)
    }
}

impl<S: Scalar> Tensor for Matrix<S> {
    fn tensor(&self, other: &Self) -> Result<Self> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut entries = Vec::with_capacity(rows * cols);
        for r1 in 0..self.rows {
            for r2 in 0..other.rows {
                for c1 in 0..self.cols {
                    let a = self.get(r1, c1);
                    for c2 in 0..other.cols {
                        entries.push(a * other.get(r2, c2));
                    }
                }
            }
        }
        Matrix::new(self.ctx, rows, cols, entries)
    }
}

pub fn tensor<T: Tensor>(x: &T, y: &T) -> Result<T> {
    x.tensor(y)
}

/// Exact matrix-vector product.
pub fn apply<S: Scalar>(m: &Matrix<S>, psi: &StateVector<S>) -> Result<StateVector<S>> {
    if m.ctx != psi.ctx {
        return Err(Error::ContextMismatch);
    }
    if m.cols != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.cols,
            found: psi.dim(),
        });
    }
    let amps = (0..m.rows)
        .map(|r| {
            m.entries[r * m.cols..(r + 1) * m.cols]
                .iter()
                .zip(&psi.amps)
                .fold(S::zero(m.ctx), |acc, (&e, &a)| acc + e * a)
        })
        .collect();
    StateVector::new(m.ctx, amps)
}

/// Number of qubits for a power-of-two dimension.
pub fn qubit_count(dim: usize) -> Result<usize> {
    if dim.is_power_of_two() {
        Ok(dim.trailing_zeros() as usize)
    } else {
        Err(Error::InvalidArgument(format!(
            "dimension {dim} is not a power of two"
        )))
    }
}

/// `I ⊗ .. ⊗ gate ⊗ .. ⊗ I` with `gate` on qubit `qubit` of `n`.
pub fn gate_on<S: Scalar>(gate: &Matrix<S>, qubit: usize, n: usize) -> Result<Matrix<S>> {
    if gate.rows != 2 || gate.cols != 2 {
        return Err(Error::InvalidArgument(
            "single-qubit gate must be 2x2".into(),
        ));
    }
    if qubit >= n {
        return Err(Error::InvalidArgument(format!(
            "qubit {qubit} out of range for {n} qubits"
        )));
    }
    let id = Matrix::identity(gate.ctx, 2);
    let mut out = if qubit == 0 { gate.clone() } else { id.clone() };
    for j in 1..n {
        out = out.tensor(if j == qubit { gate } else { &id })?;
    }
    Ok(out)
}

/// Applies a 2x2 gate to one qubit without materializing the full operator.
/// Agrees exactly with `apply(&gate_on(gate, qubit, n)?, psi)`.
pub fn apply_1q<S: Scalar>(
    gate: &Matrix<S>,
    qubit: usize,
    psi: &StateVector<S>,
) -> Result<StateVector<S>> {
    let n = qubit_count(psi.dim())?;
    if gate.rows != 2 || gate.cols != 2 {
        return Err(Error::InvalidArgument(
            "single-qubit gate must be 2x2".into(),
        ));
    }
    if gate.ctx != psi.ctx {
        return Err(Error::ContextMismatch);
    }
    if qubit >= n {
        return Err(Error::InvalidArgument(format!(
            "qubit {qubit} out of range for {n} qubits"
        )));
    }
    let bit = 1usize << (n - 1 - qubit);
    let (g00, g01, g10, g11) = (
        gate.get(0, 0),
        gate.get(0, 1),
        gate.get(1, 0),
        gate.get(1, 1),
    );
    let mut amps = psi.amps.clone();
    for i0 in (0..psi.dim()).filter(|i| i & bit == 0) {
        let i1 = i0 | bit;
        let (a0, a1) = (psi.amps[i0], psi.amps[i1]);
        amps[i0] = g00 * a0 + g01 * a1;
        amps[i1] = g10 * a0 + g11 * a1;
    }
    StateVector::new(psi.ctx, amps)
}

/// Applies `gate` to every qubit in `qubits`.
pub fn apply_1q_each<S: Scalar>(
    gate: &Matrix<S>,
    qubits: impl IntoIterator<Item = usize>,
    psi: &StateVector<S>,
) -> Result<StateVector<S>> {
    qubits
        .into_iter()
        .try_fold(psi.clone(), |acc, q| apply_1q(gate, q, &acc))
}

/// Controlled NOT as a basis permutation.
pub fn apply_cnot<S: Scalar>(
    control: usize,
    target: usize,
    psi: &StateVector<S>,
) -> Result<StateVector<S>> {
    let n = qubit_count(psi.dim())?;
    if control >= n || target >= n || control == target {
        return Err(Error::InvalidArgument(format!(
            "bad CNOT qubits (control {control}, target {target}) for {n} qubits"
        )));
    }
    let cbit = 1usize << (n - 1 - control);
    let tbit = 1usize << (n - 1 - target);
    let amps = (0..psi.dim())
        .map(|i| psi.amps[if i & cbit != 0 { i ^ tbit } else { i }])
        .collect();
    StateVector::new(psi.ctx, amps)
}

/// Dense CNOT operator, for cross-checking [`apply_cnot`].
pub fn cnot_matrix<S: Scalar>(
    ctx: S::Ctx,
    control: usize,
    target: usize,
    n: usize,
) -> Result<Matrix<S>> {
    if control >= n || target >= n || control == target {
        return Err(Error::InvalidArgument(format!(
            "bad CNOT qubits (control {control}, target {target}) for {n} qubits"
        )));
    }
    let dim = 1usize << n;
    let cbit = 1usize << (n - 1 - control);
    let tbit = 1usize << (n - 1 - target);
    let mut entries = vec![S::zero(ctx); dim * dim];
    for col in 0..dim {
        let row = if col & cbit != 0 { col ^ tbit } else { col };
        entries[row * dim + col] = S::one(ctx);
    }
    Matrix::new(ctx, dim, dim, entries)
}

/// A non-zero vector `(1, a)` with `<psi|psi> = 0`, showing that the
/// Hermitian form is not positive definite on F_{p^2}.
pub fn isotropic_witness(ctx: FieldCtx) -> Result<StateVector<GaussianElem>> {
    let p = ctx.p() as i64;
    for x in 0..p {
        for y in 0..p {
            let a = ctx.elem(x, y)?;
            if (GaussianElem::one(ctx) + a.conj() * a).is_zero() {
                return StateVector::new(ctx, vec![GaussianElem::one(ctx), a]);
            }
        }
    }
    Err(Error::Internal(format!(
        "no isotropic vector found over F_{{{p}^2}}"
    )))
}
