//! Dense complex linear algebra sized for this crate's needs: matrices up to
//! 20x20, Kronecker products, pivoted elimination (determinant, inverse,
//! linear solve, rank), matrix exponential, characteristic and minimal
//! polynomials, and restriction of an operator to an invariant subspace.
//!
//! Everything is double-precision [`Complex64`] with value semantics; there
//! is no sparse storage and no attempt at BLAS-grade performance.

mod eigen;
mod expm;
mod poly;

pub use eigen::{characteristic_polynomial, eigenvalues, eigenvector, minimal_polynomial};
pub use expm::matrix_exp;
pub use num_complex::Complex64;
pub use poly::{cluster_roots, Polynomial};

use crate::error::{Error, Result};
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

/// Shorthand constructor for a complex scalar.
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Euclidean distance between two complex vectors of equal length.
pub fn vec_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// Default scale factor for identity-style checks: residuals are compared
/// against this times the largest operand entry.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Pivot magnitudes below this fraction of the largest entry are treated as
/// structural zeros when computing ranks and selecting subspace bases.
pub const RANK_REL_TOL: f64 = 1e-8;

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix shape must be positive");
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build a matrix entrywise from a closure.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from nested row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        assert!(!rows.is_empty(), "need at least one row");
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// Square diagonal matrix from the given entries.
    pub fn diag(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &v) in entries.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Transpose without conjugation.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].conj())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Multiply every entry by a scalar.
    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * s)
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius distance to another matrix of the same shape.
    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).frobenius_norm()
    }

    /// Frobenius distance to the identity.
    pub fn identity_residual(&self) -> f64 {
        self.distance(&Self::identity(self.rows))
    }

    /// || A - A^+ ||, zero for Hermitian matrices.
    pub fn hermiticity_residual(&self) -> f64 {
        self.distance(&self.adjoint())
    }

    /// || A + A^+ ||, zero for anti-Hermitian matrices.
    pub fn anti_hermiticity_residual(&self) -> f64 {
        (self + &self.adjoint()).frobenius_norm()
    }

    /// Number of entries with magnitude above `tol`.
    pub fn nonzero_count(&self, tol: f64) -> usize {
        self.data.iter().filter(|z| z.norm() > tol).count()
    }

    /// Copy of the `nr` x `nc` block with top-left corner (`r0`, `c0`).
    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        assert!(r0 + nr <= self.rows && c0 + nc <= self.cols, "block out of range");
        Self::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Kronecker product: block (i, j) of the result is `self[i,j] * other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = (self.rows, self.cols);
        let (r, s) = (other.rows, other.cols);
        let mut m = Self::zeros(p * r, q * s);
        for i in 0..p {
            for j in 0..q {
                let a = self[(i, j)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..r {
                    for l in 0..s {
                        m[(i * r + k, j * s + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        m
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// [A, B] = AB - BA.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// {A, B} = AB + BA.
    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    /// Determinant via LU elimination with partial pivoting.
    pub fn det(&self) -> Complex64 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut w = self.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let (imax, pmax) = (k..n)
                .map(|i| (i, w[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if imax != k {
                w.swap_rows(imax, k);
                det = -det;
            }
            det *= w[(k, k)];
            for i in k + 1..n {
                let f = w[(i, k)] / w[(k, k)];
                for j in k..n {
                    let sub = f * w[(k, j)];
                    w[(i, j)] -= sub;
                }
            }
        }
        det
    }

    /// Solve `A X = B` for matrix right-hand side by Gaussian elimination
    /// with partial pivoting.
    pub fn solve_mat(&self, b: &Self) -> Result<Self> {
        assert!(self.is_square(), "solve needs a square matrix");
        assert_eq!(self.rows, b.rows, "right-hand side row mismatch");
        let n = self.rows;
        let pivot_floor = self.max_abs() * (n as f64) * f64::EPSILON;
        let mut w = self.clone();
        let mut x = b.clone();
        for k in 0..n {
            let (imax, pmax) = (k..n)
                .map(|i| (i, w[(i, k)].norm()))
                .fold((k, -1.0), |acc, t| if t.1 > acc.1 { t } else { acc });
            if pmax <= pivot_floor {
                return Err(Error::SingularMatrix { pivot: pmax, step: k });
            }
            if imax != k {
                w.swap_rows(imax, k);
                x.swap_rows(imax, k);
            }
            for i in k + 1..n {
                let f = w[(i, k)] / w[(k, k)];
                for j in k..n {
                    let sub = f * w[(k, j)];
                    w[(i, j)] -= sub;
                }
                for j in 0..x.cols {
                    let sub = f * x[(k, j)];
                    x[(i, j)] -= sub;
                }
            }
        }
        for k in (0..n).rev() {
            for j in 0..x.cols {
                let mut s = x[(k, j)];
                for l in k + 1..n {
                    s -= w[(k, l)] * x[(l, j)];
                }
                x[(k, j)] = s / w[(k, k)];
            }
        }
        Ok(x)
    }

    /// Solve `A x = b` for a single right-hand side.
    pub fn solve_vec(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let rhs = Self::from_fn(b.len(), 1, |i, _| b[i]);
        let x = self.solve_mat(&rhs)?;
        Ok((0..x.rows).map(|i| x[(i, 0)]).collect())
    }

    /// Matrix inverse; fails with the offending pivot when singular.
    pub fn inverse(&self) -> Result<Self> {
        self.solve_mat(&Self::identity(self.rows))
    }

    /// Rank with the default structural-zero threshold
    /// [`RANK_REL_TOL`] times the largest entry.
    pub fn rank(&self) -> usize {
        self.rank_with_tol(RANK_REL_TOL * self.max_abs())
    }

    /// Rank, counting pivots above the given absolute threshold.
    pub fn rank_with_tol(&self, tol_abs: f64) -> usize {
        self.echelon_pivots(tol_abs).len()
    }

    /// Dimension of the kernel (columns minus rank).
    pub fn kernel_dimension(&self) -> usize {
        self.cols - self.rank()
    }

    /// Complete-pivoting elimination; returns the pivot positions
    /// (original row, column) in elimination order. The submatrix on these
    /// rows and columns is invertible.
    fn echelon_pivots(&self, tol_abs: f64) -> Vec<(usize, usize)> {
        let mut w = self.clone();
        let mut row_of = (0..self.rows).collect::<Vec<_>>();
        let mut col_used = vec![false; self.cols];
        let mut pivots = Vec::new();
        for k in 0..self.rows.min(self.cols) {
            let mut best = (k, 0usize, -1.0f64);
            for i in k..self.rows {
                for j in 0..self.cols {
                    if !col_used[j] && w[(i, j)].norm() > best.2 {
                        best = (i, j, w[(i, j)].norm());
                    }
                }
            }
            let (imax, jmax, pmax) = best;
            if pmax <= tol_abs {
                break;
            }
            if imax != k {
                w.swap_rows(imax, k);
                row_of.swap(imax, k);
            }
            col_used[jmax] = true;
            pivots.push((row_of[k], jmax));
            for i in k + 1..self.rows {
                let f = w[(i, jmax)] / w[(k, jmax)];
                for j in 0..self.cols {
                    let sub = f * w[(k, j)];
                    w[(i, j)] -= sub;
                }
            }
        }
        pivots
    }

    /// Matrix of `A` acting on range(`P`) for an idempotent `P` commuting
    /// with `A`. The basis is the set of pivot columns of `P`; the
    /// restriction `M` solves `V M = A V` on the pivot rows of `V`.
    ///
    /// `tol` scales both precondition checks (idempotency, commutation) and
    /// the final consistency residual.
    pub fn restrict(&self, p: &Self, tol: f64) -> Result<Self> {
        assert!(self.is_square() && p.is_square() && self.rows == p.rows);
        let scale = p.max_abs().max(1.0);
        let idem = (&(p * p) - p).frobenius_norm();
        if idem > tol * scale {
            return Err(Error::ContractViolation {
                context: "restrict: projector not idempotent",
                residual: idem,
            });
        }
        let comm = self.commutator(p).frobenius_norm();
        if comm > tol * scale * self.max_abs().max(1.0) {
            return Err(Error::ContractViolation {
                context: "restrict: operator does not commute with projector",
                residual: comm,
            });
        }
        let pivots = p.echelon_pivots(RANK_REL_TOL * p.max_abs());
        let r = pivots.len();
        if r == 0 {
            return Err(Error::ContractViolation {
                context: "restrict: projector has rank zero",
                residual: 0.0,
            });
        }
        let v = Self::from_fn(self.rows, r, |i, j| p[(i, pivots[j].1)]);
        let av = self * &v;
        // Square subsystem on the pivot rows of V.
        let vr = Self::from_fn(r, r, |i, j| v[(pivots[i].0, j)]);
        let avr = Self::from_fn(r, r, |i, j| av[(pivots[i].0, j)]);
        let m = vr.solve_mat(&avr)?;
        let resid = (&(&v * &m) - &av).frobenius_norm();
        if resid > tol * scale * self.max_abs().max(1.0) * (self.rows as f64) {
            return Err(Error::ContractViolation {
                context: "restrict: subspace not invariant",
                residual: resid,
            });
        }
        Ok(m)
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(i * self.cols + j, k * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch in add");
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + rhs[(i, j)])
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch in sub");
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - rhs[(i, j)])
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        let mut m = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    m[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        m
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.3}{:+.3}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
