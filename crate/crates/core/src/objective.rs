//! Residual objectives of a rank-one approximation `M ~ u v^T`.
//!
//! Real-valued sums go through a compensated accumulator, which keeps the
//! relative error near one ulp for the matrix sizes handled here.

use crate::error::Result;
use crate::matrix::{DenseMatrix, RankOneFactors};

/// Neumaier compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of an iterator of reals.
pub fn accurate_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().collect::<CompensatedSum>().value()
}

fn residuals<'a>(m: &'a DenseMatrix, f: &'a RankOneFactors) -> impl Iterator<Item = f64> + 'a {
    let n = m.cols();
    m.as_slice()
        .iter()
        .enumerate()
        .map(move |(k, &x)| x - f.u()[k / n] * f.v()[k % n])
}

/// Number of entries where `M` and `u v^T` differ (exact comparison).
pub fn l0_error(m: &DenseMatrix, f: &RankOneFactors) -> Result<usize> {
    l0_error_tol(m, f, 0.0)
}

/// Like [`l0_error`], but treats `|M_ij - u_i v_j| <= tol` as a match.
pub fn l0_error_tol(m: &DenseMatrix, f: &RankOneFactors, tol: f64) -> Result<usize> {
    m.check_shape(f.m(), f.n())?;
    Ok(residuals(m, f).filter(|r| r.abs() > tol).count())
}

/// `sum_ij |M_ij - u_i v_j|`.
pub fn l1_error(m: &DenseMatrix, f: &RankOneFactors) -> Result<f64> {
    m.check_shape(f.m(), f.n())?;
    Ok(accurate_sum(residuals(m, f).map(f64::abs)))
}

/// `||M - u v^T||_F^2`.
pub fn frobenius_error_sq(m: &DenseMatrix, f: &RankOneFactors) -> Result<f64> {
    m.check_shape(f.m(), f.n())?;
    Ok(accurate_sum(residuals(m, f).map(|r| r * r)))
}

/// The bilinear form `u^T A v`.
pub fn bilinear(a: &DenseMatrix, u: &[f64], v: &[f64]) -> Result<f64> {
    a.check_shape(u.len(), v.len())?;
    let n = a.cols();
    Ok(accurate_sum(
        a.as_slice()
            .iter()
            .enumerate()
            .map(|(k, &x)| u[k / n] * x * v[k % n]),
    ))
}

/// `||M||_F^2`.
pub fn frobenius_norm_sq(m: &DenseMatrix) -> f64 {
    accurate_sum(m.as_slice().iter().map(|x| x * x))
}
