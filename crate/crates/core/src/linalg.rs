//! Dense square complex matrices.
//!
//! Everything in the crate is expressed over [`ComplexMatrix`]: gates, Pauli
//! operators, projectors and the cumulative unitary of a network. Storage is
//! row-major. When matrices are combined with [`ComplexMatrix::tensor`], the
//! left operand occupies the most significant factor, so qubit 0 is always the
//! leftmost slot of a Kronecker chain.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Index;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default Frobenius-norm tolerance for matrix comparisons.
pub const DEFAULT_TOL: f64 = 1e-10;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from a row-major buffer of `dim * dim` finite entries.
    pub fn from_row_major(entries: Vec<Complex64>) -> Result<Self> {
        let len = entries.len();
        if len == 0 {
            return Err(Error::ZeroDimension);
        }
        let dim = isqrt(len);
        if dim * dim != len {
            return Err(Error::NotSquare { len });
        }
        if let Some(pos) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: pos / dim, col: pos % dim });
        }
        Ok(Self { dim, entries })
    }

    /// Convenience constructor from nested rows of `(re, im)` pairs.
    pub fn from_rows<const N: usize>(rows: [[(f64, f64); N]; N]) -> Result<Self> {
        let entries = rows.iter().flat_map(|row| row.iter().map(|&(re, im)| Complex64::new(re, im))).collect();
        Self::from_row_major(entries)
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self { dim, entries: vec![ZERO; dim * dim] })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.entries[i * dim + i] = ONE;
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Matrix product `self · rhs`.
    ///
    /// Exact zeros of the left operand are skipped, which keeps products with
    /// embedded gates and permutation-like unitaries cheap at large dimension.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_dim(rhs)?;
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for i in 0..d {
            let out_row = &mut out[i * d..(i + 1) * d];
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &rhs.entries[k * d..(k + 1) * d];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self { dim: d, entries: out })
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: v.len() });
        }
        let d = self.dim;
        Ok((0..d)
            .map(|i| {
                self.entries[i * d..(i + 1) * d].iter().zip(v).filter(|(a, _)| **a != ZERO).map(|(a, x)| a * x).sum()
            })
            .collect())
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                out[j * d + i] = self.entries[i * d + j].conj();
            }
        }
        Self { dim: d, entries: out }
    }

    /// Kronecker product `self ⊗ rhs`; `self` is the more significant factor.
    pub fn tensor(&self, rhs: &Self) -> Self {
        let (da, db) = (self.dim, rhs.dim);
        let d = da * db;
        let mut out = vec![ZERO; d * d];
        for ar in 0..da {
            for ac in 0..da {
                let a = self.entries[ar * da + ac];
                if a == ZERO {
                    continue;
                }
                for br in 0..db {
                    let row = (ar * db + br) * d + ac * db;
                    let src = &rhs.entries[br * db..(br + 1) * db];
                    for (o, b) in out[row..row + db].iter_mut().zip(src) {
                        *o = a * b;
                    }
                }
            }
        }
        Self { dim: d, entries: out }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_dim(rhs)?;
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect();
        Ok(Self { dim: self.dim, entries })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same_dim(rhs)?;
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect();
        Ok(Self { dim: self.dim, entries })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|z| z * factor).collect() }
    }

    /// Frobenius norm of `self - rhs`.
    pub fn frobenius_distance(&self, rhs: &Self) -> Result<f64> {
        self.check_same_dim(rhs)?;
        let sq: f64 = self.entries.iter().zip(&rhs.entries).map(|(a, b)| (a - b).norm_sqr()).sum();
        Ok(libm::sqrt(sq))
    }

    pub fn is_unitary(&self, tol: f64) -> Result<bool> {
        check_tol(tol)?;
        let product = self.dagger().matmul(self)?;
        Ok(product.frobenius_distance(&Self::identity(self.dim)?)? <= tol)
    }

    pub fn is_hermitian(&self, tol: f64) -> Result<bool> {
        check_tol(tol)?;
        Ok(self.frobenius_distance(&self.dagger())? <= tol)
    }

    /// `true` when every entry has the same bit pattern as in `rhs`.
    pub fn bitwise_eq(&self, rhs: &Self) -> bool {
        self.dim == rhs.dim
            && self
                .entries
                .iter()
                .zip(&rhs.entries)
                .all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits())
    }

    fn check_same_dim(&self, rhs: &Self) -> Result<()> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: rhs.dim });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (row, col): (usize, usize)) -> &Complex64 {
        assert!(row < self.dim && col < self.dim, "index ({row}, {col}) out of bounds");
        &self.entries[row * self.dim + col]
    }
}

/// Kronecker product of a sequence of factors, first factor most significant.
pub fn tensor_chain<'a, It>(factors: It) -> ComplexMatrix
where
    It: IntoIterator<Item = &'a ComplexMatrix>,
{
    factors.into_iter().fold(ComplexMatrix { dim: 1, entries: vec![ONE] }, |acc, f| acc.tensor(f))
}

fn check_tol(tol: f64) -> Result<()> {
    if tol < 0.0 || tol.is_nan() {
        return Err(Error::NegativeTolerance(tol));
    }
    Ok(())
}

fn isqrt(n: usize) -> usize {
    let mut r = libm::sqrt(n as f64) as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}
