//! Dense complex linear algebra for small dimensions.
//!
//! Matrices are stored row-major. The eigensolver is a cyclic complex Jacobi
//! method and the SVD is a one-sided (Hestenes) Jacobi method; both are
//! backward stable and more than fast enough for the 4×4 and 16×16 problems
//! that show up in two-qubit verification.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{tol, Error, Result};

pub type CScalar = Complex64;

#[inline]
pub const fn c64(re: f64, im: f64) -> CScalar {
    Complex64::new(re, im)
}

const ZERO: CScalar = c64(0.0, 0.0);
const ONE: CScalar = c64(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<CScalar>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl TryFrom<MatrixRepr> for CMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        let data = r.data.iter().map(|[re, im]| c64(*re, *im)).collect();
        CMatrix::from_vec(r.rows, r.cols, data)
    }
}

impl From<CMatrix> for MatrixRepr {
    fn from(m: CMatrix) -> Self {
        MatrixRepr {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<CScalar>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("matrix"));
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        CMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> CScalar) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from nested rows. Panics on ragged input; meant for literals.
    pub fn from_rows<R: AsRef<[CScalar]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows[0].as_ref().len();
        assert!(rows.iter().all(|row| row.as_ref().len() == c), "ragged rows");
        CMatrix::from_fn(r, c, |i, j| rows[i].as_ref()[j])
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows[0].as_ref().len();
        assert!(rows.iter().all(|row| row.as_ref().len() == c), "ragged rows");
        CMatrix::from_fn(r, c, |i, j| c64(rows[i].as_ref()[j], 0.0))
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        CMatrix::from_fn(n, n, |i, j| if i == j { c64(values[i], 0.0) } else { ZERO })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[CVector]) -> Result<Self> {
        let Some(first) = cols.first() else {
            return Err(Error::DimensionMismatch("no columns".into()));
        };
        let rows = first.dim();
        if cols.iter().any(|c| c.dim() != rows) {
            return Err(Error::DimensionMismatch("columns of unequal length".into()));
        }
        Ok(CMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i]))
    }

    /// Outer product `|a⟩⟨b|`.
    pub fn outer(a: &CVector, b: &CVector) -> Self {
        CMatrix::from_fn(a.dim(), b.dim(), |i, j| a[i] * b[j].conj())
    }

    /// Rank-one projector `|a⟩⟨a|`.
    pub fn projector(a: &CVector) -> Self {
        CMatrix::outer(a, a)
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

    pub fn data(&self) -> &[CScalar] {
        &self.data
    }

    pub fn column(&self, j: usize) -> CVector {
        CVector::from_vec((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn columns(&self) -> Vec<CVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(CScalar) -> CScalar) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: CScalar) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> CScalar {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &CVector) -> CVector {
        assert_eq!(self.cols, v.dim(), "matrix-vector dimension mismatch");
        CVector::from_vec(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
                .collect(),
        )
    }

    /// `⟨a|M|b⟩`.
    pub fn sandwich(&self, a: &CVector, b: &CVector) -> CScalar {
        a.inner(&self.mul_vec(b))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise distance; infinite when shapes differ.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `‖M†M − I‖_max`, infinite for non-square input.
    pub fn unitary_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.adjoint().matmul(self).max_abs_diff(&CMatrix::identity(self.rows))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitary_deviation() <= tol
    }

    pub fn ensure_unitary(&self, tol: f64) -> Result<()> {
        let dev = self.unitary_deviation();
        if dev <= tol {
            Ok(())
        } else {
            Err(Error::NotUnitary(dev))
        }
    }

    /// Equality up to a global phase, measured after aligning the largest entry.
    pub fn phase_aligned_diff(&self, other: &CMatrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        let (k, _) = self
            .data
            .iter()
            .enumerate()
            .fold((0, 0.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc });
        if self.data[k].norm() == 0.0 || other.data[k].norm() == 0.0 {
            return self.max_abs_diff(other);
        }
        let phase = self.data[k] / other.data[k];
        let phase = phase / phase.norm();
        self.max_abs_diff(&other.scale(phase))
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = CScalar;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &CScalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut CScalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "add shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "sub shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Dense complex column vector.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VectorRepr", into = "VectorRepr")]
pub struct CVector {
    data: Vec<CScalar>,
}

#[derive(Serialize, Deserialize)]
struct VectorRepr {
    dim: usize,
    data: Vec<[f64; 2]>,
}

impl TryFrom<VectorRepr> for CVector {
    type Error = Error;

    fn try_from(r: VectorRepr) -> Result<Self> {
        if r.dim == 0 || r.data.len() != r.dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of dim {} has {} entries",
                r.dim,
                r.data.len()
            )));
        }
        if r.data.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("vector"));
        }
        Ok(CVector {
            data: r.data.iter().map(|[re, im]| c64(*re, *im)).collect(),
        })
    }
}

impl From<CVector> for VectorRepr {
    fn from(v: CVector) -> Self {
        VectorRepr {
            dim: v.dim(),
            data: v.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl fmt::Debug for CVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CVector[")?;
        for z in &self.data {
            write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
        }
        write!(f, " ]")
    }
}

impl CVector {
    pub fn from_vec(data: Vec<CScalar>) -> Self {
        assert!(!data.is_empty(), "vectors must be non-empty");
        CVector { data }
    }

    pub fn from_real(values: &[f64]) -> Self {
        CVector::from_vec(values.iter().map(|&x| c64(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        CVector::from_vec(vec![ZERO; dim])
    }

    /// Standard basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v.data[index] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn data(&self) -> &[CScalar] {
        &self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = &CScalar> {
        self.data.iter()
    }

    /// Conjugate-linear in `self`: `⟨self|other⟩`.
    pub fn inner(&self, other: &CVector) -> CScalar {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Returns `None` for the zero vector.
    pub fn normalized(&self) -> Option<CVector> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return None;
        }
        Some(self.scale_real(1.0 / n))
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn scale(&self, s: CScalar) -> CVector {
        CVector::from_vec(self.data.iter().map(|z| z * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> CVector {
        CVector::from_vec(self.data.iter().map(|z| z * s).collect())
    }

    pub fn conj(&self) -> CVector {
        CVector::from_vec(self.data.iter().map(|z| z.conj()).collect())
    }

    pub fn kron(&self, other: &CVector) -> CVector {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.data {
            for b in &other.data {
                out.push(a * b);
            }
        }
        CVector::from_vec(out)
    }

    pub fn max_abs_diff(&self, other: &CVector) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `1 − |⟨self|other⟩|` for unit vectors; zero iff they are equal up to phase.
    pub fn ray_distance(&self, other: &CVector) -> f64 {
        (1.0 - self.inner(other).norm()).abs()
    }
}

impl Index<usize> for CVector {
    type Output = CScalar;

    #[inline]
    fn index(&self, i: usize) -> &CScalar {
        &self.data[i]
    }
}

impl IndexMut<usize> for CVector {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut CScalar {
        &mut self.data[i]
    }
}

impl Add for &CVector {
    type Output = CVector;

    fn add(self, rhs: &CVector) -> CVector {
        assert_eq!(self.dim(), rhs.dim());
        CVector::from_vec(self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &CVector {
    type Output = CVector;

    fn sub(self, rhs: &CVector) -> CVector {
        assert_eq!(self.dim(), rhs.dim());
        CVector::from_vec(self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &CVector {
    type Output = CVector;

    fn neg(self) -> CVector {
        self.scale_real(-1.0)
    }
}

/// Kronecker product.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    CMatrix::from_fn(rows, cols, |i, j| {
        a[(i / b.rows, j / b.cols)] * b[(i % b.rows, j % b.cols)]
    })
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Eigh {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, ordered like `values`.
    pub vectors: CMatrix,
}

/// 2×2 Jacobi rotation zeroing the off-diagonal entry `g` of the Hermitian block
/// `[[a, g], [g*, b]]`. Returns the column transform `J` as
/// `(j_pp, j_pq, j_qp, j_qq)` so that `J† B J` is diagonal.
fn jacobi_rotation(a: f64, b: f64, g: CScalar) -> (CScalar, CScalar, CScalar, CScalar) {
    let r = g.norm();
    let phase = g / r;
    let tau = (b - a) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let pc = phase.conj();
    (c64(c, 0.0), c64(s, 0.0), -pc * s, pc * c)
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
pub fn hermitian_eig(h: &CMatrix) -> Result<Eigh> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch("eigendecomposition needs a square matrix".into()));
    }
    let dev = h.hermitian_deviation();
    if dev > tol::HERMITIAN {
        return Err(Error::NotHermitian(dev));
    }
    let n = h.rows;
    // symmetrize so that rounding in the input cannot bias the result
    let mut a = CMatrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm();

    let mut converged = false;
    for _ in 0..tol::MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale || off < f64::MIN_POSITIVE {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let g = a[(p, q)];
                if g.norm() < f64::MIN_POSITIVE {
                    continue;
                }
                let (jpp, jpq, jqp, jqq) = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, g);
                // A <- A J
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * jpp + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * jqq;
                }
                // A <- J† A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = c64(a[(p, p)].re, 0.0);
                a[(q, q)] = c64(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence(tol::MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(Eigh { values, vectors })
}

/// Thin singular value decomposition `m = u · diag(s) · v†`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// `rows × k` with orthonormal columns, `k = min(rows, cols)`.
    pub u: CMatrix,
    /// Nonincreasing singular values, length `k`.
    pub s: Vec<f64>,
    /// `cols × k` with orthonormal columns.
    pub v: CMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> CMatrix {
        let k = self.s.len();
        let us = CMatrix::from_fn(self.u.rows, k, |i, j| self.u[(i, j)] * self.s[j]);
        us.matmul(&self.v.adjoint())
    }

    /// Number of singular values above `rel_tol · s_max`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let smax = self.s.first().copied().unwrap_or(0.0);
        if smax == 0.0 {
            return 0;
        }
        self.s.iter().filter(|&&x| x > rel_tol * smax).count()
    }
}

/// One-sided Jacobi SVD.
pub fn svd(m: &CMatrix) -> Result<Svd> {
    if m.rows < m.cols {
        let t = svd(&m.adjoint())?;
        return Ok(Svd { u: t.v, s: t.s, v: t.u });
    }
    let (rows, n) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut v = CMatrix::identity(n);

    let mut converged = n == 1;
    for _ in 0..tol::MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for k in 0..rows {
                    let x = a[(k, p)];
                    let y = a[(k, q)];
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() || gamma.norm() < f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let (jpp, jpq, jqp, jqq) = jacobi_rotation(alpha, beta, gamma);
                for k in 0..rows {
                    let x = a[(k, p)];
                    let y = a[(k, q)];
                    a[(k, p)] = x * jpp + y * jqp;
                    a[(k, q)] = x * jpq + y * jqq;
                }
                for k in 0..n {
                    let x = v[(k, p)];
                    let y = v[(k, q)];
                    v[(k, p)] = x * jpp + y * jqp;
                    v[(k, q)] = x * jpq + y * jqq;
                }
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(tol::MAX_SWEEPS));
    }

    let norms: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let smax = norms[order[0]];

    let mut s = Vec::with_capacity(n);
    let mut ucols: Vec<Option<CVector>> = Vec::with_capacity(n);
    for &j in &order {
        let sigma = norms[j];
        if sigma <= tol::ZERO * smax || sigma == 0.0 {
            s.push(0.0);
            ucols.push(None);
        } else {
            s.push(sigma);
            ucols.push(Some(a.column(j).scale_real(1.0 / sigma)));
        }
    }
    let u_cols = fill_orthonormal(ucols, rows);
    let u = CMatrix::from_columns(&u_cols)?;
    let v = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(Svd { u, s, v })
}

/// Replaces missing columns with unit vectors orthogonal to all others.
fn fill_orthonormal(cols: Vec<Option<CVector>>, dim: usize) -> Vec<CVector> {
    let mut fixed: Vec<CVector> = cols.iter().flatten().cloned().collect();
    let mut out = Vec::with_capacity(cols.len());
    let mut candidates = (0..dim).map(|i| CVector::basis(dim, i));
    for c in cols {
        match c {
            Some(v) => out.push(v),
            None => loop {
                let cand = candidates
                    .next()
                    .expect("standard basis always completes an orthonormal set");
                if let Some(v) = orthogonalize(&cand, &fixed) {
                    fixed.push(v.clone());
                    out.push(v);
                    break;
                }
            },
        }
    }
    out
}

/// Gram–Schmidt step (applied twice for stability); `None` if `v` lies in the span.
fn orthogonalize(v: &CVector, basis: &[CVector]) -> Option<CVector> {
    let mut w = v.clone();
    for _ in 0..2 {
        for b in basis {
            let c = b.inner(&w);
            w = &w - &b.scale(c);
        }
    }
    if w.norm() < 1e-8 {
        None
    } else {
        w.normalized()
    }
}

/// Extends orthonormal `vectors` to an orthonormal basis of the `dim`-dimensional space.
pub fn complete_basis(vectors: &[CVector], dim: usize) -> Vec<CVector> {
    let mut cols: Vec<Option<CVector>> = vectors.iter().cloned().map(Some).collect();
    cols.resize(dim, None);
    fill_orthonormal(cols, dim)
}

/// Numerical rank of a family of vectors (relative threshold on singular values).
pub fn numerical_rank(vectors: &[CVector], rel_tol: f64) -> Result<usize> {
    if vectors.is_empty() {
        return Ok(0);
    }
    let m = CMatrix::from_columns(vectors)?;
    Ok(svd(&m)?.rank(rel_tol))
}

/// `exp(−i·t·h)` for Hermitian `h`.
pub fn unitary_exp(h: &CMatrix, t: f64) -> Result<CMatrix> {
    let eig = hermitian_eig(h)?;
    let n = h.rows;
    let phases: Vec<CScalar> = eig.values.iter().map(|&l| CScalar::from_polar(1.0, -t * l)).collect();
    let vd = CMatrix::from_fn(n, n, |i, j| eig.vectors[(i, j)] * phases[j]);
    Ok(vd.matmul(&eig.vectors.adjoint()))
}
