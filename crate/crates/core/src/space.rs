//! Finite-truncation numerics for the sequence spaces `ℓ^p`.
//!
//! A [`SeqVector`] stores finitely many coefficients together with the
//! exponent `p >= 1` of the ambient norm. Trailing zeros are permitted and
//! never observable: two vectors are equal iff they agree coordinate-wise
//! after zero-padding and live in the same ambient space.

use alloc::vec;
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float as _;

use crate::{Error, Result};

/// A finitely supported element of `ℓ^p`.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SeqVector {
    coeffs: Vec<f64>,
    p: f64,
}

impl SeqVector {
    /// Builds a vector, validating that every coefficient is finite and
    /// that `p >= 1`.
    pub fn new(coeffs: Vec<f64>, p: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::InvalidExponent { p });
        }
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_finite() {
                return Err(Error::NonFinite { index: i + 1 });
            }
        }
        Ok(Self { coeffs, p })
    }

    /// The zero vector of `ℓ^p`.
    pub fn zero(p: f64) -> Result<Self> {
        Self::new(Vec::new(), p)
    }

    /// The canonical basis vector `e_n` (1-based index).
    pub fn basis(n: usize, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("basis index must be >= 1".into()));
        }
        let mut coeffs = vec![0.0; n];
        coeffs[n - 1] = 1.0;
        Self::new(coeffs, p)
    }

    /// Ambient norm exponent.
    pub fn exponent(&self) -> f64 {
        self.p
    }

    /// Stored coefficients, trailing zeros included.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient at the 1-based coordinate `index`; 0 beyond the support.
    pub fn coeff(&self, index: usize) -> f64 {
        if index == 0 {
            return 0.0;
        }
        self.coeffs.get(index - 1).copied().unwrap_or(0.0)
    }

    /// Length of the stored coefficient list (an upper bound on the support).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest coordinate with a nonzero coefficient (0 for the zero vector).
    pub fn support(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| *c != 0.0)
            .map_or(0, |i| i + 1)
    }

    /// The `ℓ^p` norm `(Σ |x_j|^p)^{1/p}`.
    pub fn norm(&self) -> f64 {
        norm_slice(&self.coeffs, self.p)
    }

    /// Coordinate-wise sum; the shorter support is zero-padded.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    /// Coordinate-wise difference; the shorter support is zero-padded.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Scalar multiple `c · x`.
    pub fn scale(&self, c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::NonFinite { index: 0 });
        }
        Ok(Self {
            coeffs: self.coeffs.iter().map(|x| c * x).collect(),
            p: self.p,
        })
    }

    /// Distance `‖x − y‖_p` in the common ambient space.
    pub fn dist(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    /// True if every coefficient matches `other` within `tol` (after
    /// zero-padding) and the exponents agree exactly.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.p != other.p {
            return false;
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        (1..=n).all(|i| (self.coeff(i) - other.coeff(i)).abs() <= tol)
    }

    /// Copy truncated to the first `dim` coordinates.
    pub fn truncate(&self, dim: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(dim);
        Self { coeffs, p: self.p }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::ExponentMismatch {
                left: self.p,
                right: other.p,
            });
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (1..=n).map(|i| f(self.coeff(i), other.coeff(i))).collect();
        Ok(Self { coeffs, p: self.p })
    }
}

impl PartialEq for SeqVector {
    fn eq(&self, other: &Self) -> bool {
        if self.p != other.p {
            return false;
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        (1..=n).all(|i| self.coeff(i) == other.coeff(i))
    }
}

/// `ℓ^p` norm of a raw coefficient slice.
///
/// Scaled by the largest magnitude so that `norm > 0` for every nonzero
/// input: raw power sums underflow already at `|x| ~ 1e-300` for `p = 2`.
pub fn norm_slice(coeffs: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        return coeffs.iter().map(|x| x.abs()).sum();
    }
    let m = coeffs.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if m == 0.0 {
        return 0.0;
    }
    if p == 2.0 {
        let sum: f64 = coeffs.iter().map(|x| (x / m) * (x / m)).sum();
        m * sum.sqrt()
    } else {
        let sum: f64 = coeffs.iter().map(|x| (x.abs() / m).powf(p)).sum();
        m * sum.powf(1.0 / p)
    }
}

/// `v^p`, avoiding `powf` for the common exponents so that exact cases
/// stay exact.
pub fn pow_p(v: f64, p: f64) -> f64 {
    if p == 1.0 {
        v
    } else if p == 2.0 {
        v * v
    } else {
        v.powf(p)
    }
}

/// The evaluation functional `x ↦ x_index` (1-based), which realizes
/// coordinate-wise weak-convergence tests on bounded sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoordinateFunctional {
    index: usize,
}

impl CoordinateFunctional {
    pub fn new(index: usize) -> Result<Self> {
        if index == 0 {
            return Err(Error::Precondition(
                "coordinate functional index must be >= 1".into(),
            ));
        }
        Ok(Self { index })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn eval(&self, x: &SeqVector) -> f64 {
        x.coeff(self.index)
    }
}
