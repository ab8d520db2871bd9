//! Dense complex matrices and the handful of kernels the rest of the crate
//! needs: hermitian eigendecomposition, Schatten norms, tensor products and
//! partial traces.
//!
//! Storage is row-major. Sizes stay small (a few hundred rows at most), so
//! everything here is plain `Vec` arithmetic.

mod eig;

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{invalid, Result};

pub use eig::HermEig;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Relative tolerance used to accept a matrix as hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenvalues above `-PSD_TOL * spectral_norm` count as zero.
pub const PSD_TOL: f64 = 1e-10;

/// Which tensor factor of `C^{d1} ⊗ C^{d2}` an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(invalid(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(invalid("ragged rows"));
        }
        Ok(Self {
            rows: n,
            cols: m,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = C64::new(v, 0.0);
        }
        m
    }

    /// Rank-one operator `|v⟩⟨w|`.
    pub fn outer(v: &[C64], w: &[C64]) -> Self {
        Self::from_fn(v.len(), w.len(), |r, c| v[r] * w[c].conj())
    }

    /// Projector `|v⟩⟨v|`.
    pub fn projector(v: &[C64]) -> Self {
        Self::outer(v, v)
    }

    /// Matrix unit `|r⟩⟨c|` of size `n`.
    pub fn unit(n: usize, r: usize, c: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.data[r * n + c] = ONE;
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

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        self.scale_c(C64::new(s, 0.0))
    }

    pub fn scale_c(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Hilbert-Schmidt inner product `tr(A* B)`.
    pub fn hs_inner(&self, other: &Self) -> C64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `⟨v|M|v⟩`, real part only.
    pub fn expectation(&self, v: &[C64]) -> f64 {
        let mv = self.mul_vec(v);
        v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum::<C64>().re
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                let orow = &mut out.data[r * other.cols..(r + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Largest deviation from hermiticity, `max |M_ij - conj(M_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() <= HERMITIAN_TOL * (1.0 + self.max_abs())
    }

    /// `(M + M*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| {
            (self[(r, c)] + self[(c, r)].conj()) * 0.5
        })
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = (other.rows, other.cols);
        Self::from_fn(self.rows * r2, self.cols * c2, |r, c| {
            self[(r / r2, c / c2)] * other[(r % r2, c % c2)]
        })
    }

    /// Partial trace over one factor of a square matrix on `C^{d1} ⊗ C^{d2}`.
    pub fn partial_trace(&self, d1: usize, d2: usize, traced: Factor) -> Result<Self> {
        if !self.is_square() || self.rows != d1 * d2 {
            return Err(invalid(format!(
                "{}x{} matrix does not act on C^{d1} ⊗ C^{d2}",
                self.rows, self.cols
            )));
        }
        Ok(match traced {
            Factor::First => Self::from_fn(d2, d2, |i, j| {
                (0..d1).map(|a| self[(a * d2 + i, a * d2 + j)]).sum()
            }),
            Factor::Second => Self::from_fn(d1, d1, |a, b| {
                (0..d2).map(|i| self[(a * d2 + i, b * d2 + i)]).sum()
            }),
        })
    }

    /// Eigendecomposition of a hermitian matrix; eigenvalues descending.
    pub fn herm_eig(&self) -> Result<HermEig> {
        if !self.is_square() {
            return Err(invalid("eigendecomposition needs a square matrix"));
        }
        if !self.is_hermitian() {
            return Err(invalid(format!(
                "matrix is not hermitian (defect {:.3e})",
                self.hermitian_defect()
            )));
        }
        Ok(eig::jacobi(self))
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.herm_eig().map(|e| e.values)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(*self.eigenvalues()?.last().unwrap_or(&0.0))
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        Ok(*self.eigenvalues()?.first().unwrap_or(&0.0))
    }

    /// Singular values, descending. Uses the hermitian dilation
    /// `[[0, M], [M*, 0]]`, whose spectrum is `±σ_i` plus zeros.
    pub fn singular_values(&self) -> Vec<f64> {
        let (n, m) = (self.rows, self.cols);
        let dilation = Self::from_fn(n + m, n + m, |r, c| match (r < n, c < n) {
            (true, false) => self[(r, c - n)],
            (false, true) => self[(c, r - n)].conj(),
            _ => ZERO,
        });
        let mut values = eig::jacobi(&dilation).values;
        values.truncate(n.min(m));
        values.iter_mut().for_each(|v| *v = v.max(0.0));
        values
    }

    /// Schatten 1-norm.
    pub fn trace_norm(&self) -> f64 {
        if self.is_square() && self.is_hermitian() {
            eig::jacobi(self).values.iter().map(|v| v.abs()).sum()
        } else {
            self.singular_values().iter().sum()
        }
    }

    /// Operator norm (largest singular value).
    pub fn spectral_norm(&self) -> f64 {
        if self.is_square() && self.is_hermitian() {
            eig::jacobi(self)
                .values
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs()))
        } else {
            self.singular_values().first().copied().unwrap_or(0.0)
        }
    }

    /// Square root of a positive semidefinite matrix. Eigenvalues down to
    /// `-PSD_TOL * ‖M‖` are clamped to zero.
    pub fn mat_sqrt_psd(&self) -> Result<Self> {
        let eig = self.herm_eig()?;
        let scale = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if let Some(&lo) = eig.values.last() {
            if lo < -PSD_TOL * scale.max(1.0) {
                return Err(invalid(format!(
                    "matrix is not positive semidefinite (eigenvalue {lo:.3e})"
                )));
            }
        }
        Ok(eig.map_values(|v| v.max(0.0).sqrt()))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

fn assert_same_shape(a: &ComplexMatrix, b: &ComplexMatrix) {
    assert!(
        a.rows == b.rows && a.cols == b.cols,
        "shape mismatch: {}x{} vs {}x{}",
        a.rows,
        a.cols,
        b.rows,
        b.cols
    );
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_same_shape(self, rhs);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_same_shape(self, rhs);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_mul(rhs).expect("matrix product dimension mismatch")
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale(-1.0)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_same_shape(self, rhs);
        self.data.iter_mut().zip(&rhs.data).for_each(|(a, b)| *a += b);
    }
}

impl SubAssign<&ComplexMatrix> for ComplexMatrix {
    fn sub_assign(&mut self, rhs: &ComplexMatrix) {
        assert_same_shape(self, rhs);
        self.data.iter_mut().zip(&rhs.data).for_each(|(a, b)| *a -= b);
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨a|b⟩`.
pub fn vec_inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn normalize(v: &mut [C64]) {
    let n = vec_norm(v);
    if n > 0.0 {
        v.iter_mut().for_each(|z| *z /= n);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn eig_of_diagonal() {
        let e = ComplexMatrix::diag(&[1.0, -2.0]).herm_eig().unwrap();
        assert_eq!(e.values, vec![1.0, -2.0]);
        let v = &e.vectors;
        assert!((v[(0, 0)].norm() - 1.0).abs() < 1e-14);
        assert!((v[(1, 1)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_of_pauli_x() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let vals = x.eigenvalues().unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14 && (vals[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(m.herm_eig().is_err());
    }

    #[test]
    fn trace_norm_examples() {
        assert!((ComplexMatrix::diag(&[1.0, -2.0]).trace_norm() - 3.0).abs() < 1e-14);
        assert_eq!(ComplexMatrix::zeros(3, 3).trace_norm(), 0.0);
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 0.5], &[0.5, 0.0]]).unwrap();
        assert!((m.trace_norm() - 1.0).abs() < 1e-14);
        // non-square: singular values of [[3, 0, 0], [0, 0, 4]] are 4, 3
        let r = ComplexMatrix::from_real_rows(&[&[3.0, 0.0, 0.0], &[0.0, 0.0, 4.0]]).unwrap();
        assert!((r.trace_norm() - 7.0).abs() < 1e-12);
        assert!((r.spectral_norm() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_of_product() {
        let rho = ComplexMatrix::from_rows(vec![
            vec![c(0.7), C64::new(0.1, 0.2)],
            vec![C64::new(0.1, -0.2), c(0.3)],
        ])
        .unwrap();
        let m = ComplexMatrix::identity(2).kron(&rho);
        let pt = m.partial_trace(2, 2, Factor::First).unwrap();
        assert!((&pt - &rho.scale(2.0)).max_abs() < 1e-15);
        let pt2 = m.partial_trace(2, 2, Factor::Second).unwrap();
        assert!((&pt2 - &ComplexMatrix::identity(2)).max_abs() < 1e-15);
        assert!(m.partial_trace(3, 2, Factor::First).is_err());
    }

    #[test]
    fn sqrt_and_spectral_norm() {
        let s = ComplexMatrix::diag(&[4.0, 9.0]).mat_sqrt_psd().unwrap();
        assert!((&s - &ComplexMatrix::diag(&[2.0, 3.0])).max_abs() < 1e-14);
        assert!((ComplexMatrix::diag(&[0.5, -0.75]).spectral_norm() - 0.75).abs() < 1e-15);
        assert!(ComplexMatrix::diag(&[1.0, -0.5]).mat_sqrt_psd().is_err());
        // tiny negative roundoff is clamped
        assert!(ComplexMatrix::diag(&[1.0, -1e-13]).mat_sqrt_psd().is_ok());
    }

    #[test]
    fn kron_mixed_product() {
        let a = ComplexMatrix::from_rows(vec![vec![c(1.0), I], vec![c(2.0), c(0.5)]]).unwrap();
        let b = ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 2.0], &[1.0, -1.0, 0.0]]).unwrap();
        let cm = ComplexMatrix::from_rows(vec![vec![c(0.3), -I], vec![c(1.0), c(1.0)]]).unwrap();
        let d = ComplexMatrix::from_real_rows(&[&[1.0], &[2.0], &[-1.0]]).unwrap();
        let lhs = &a.kron(&b) * &cm.kron(&d);
        let rhs = (&a * &cm).kron(&(&b * &d));
        assert!((&lhs - &rhs).max_abs() < 1e-14);
    }

    #[test]
    fn new_checks_entry_count() {
        assert!(ComplexMatrix::new(2, 2, vec![ZERO; 3]).is_err());
    }
}
