//! Dense matrices, constrained ({-1,+1} and {0,1}) matrices and rank-one factor pairs.
//!
//! Storage is row-major and indices are 0-based; everything user facing
//! (diagnostics, text formats) is 1-based.

use std::fmt;
use std::ops::Deref;

use crate::error::{dims, Error, Result};

/// A real `rows x cols` matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        if let Some(k) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: k / cols + 1,
                col: k % cols + 1,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(m * n);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: format!("{n} entries in row {}", i + 1),
                    found: format!("{}", r.len()),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(m, n, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::filled(rows, cols, 0.0)
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Result<Self> {
        Self::new(rows, cols, vec![value; rows * cols])
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::new(rows, cols, data)
    }

    /// Outer product `u v^T`.
    pub fn outer(u: &[f64], v: &[f64]) -> Result<Self> {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j])
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn is_sign(&self) -> bool {
        self.data.iter().all(|&x| x == 1.0 || x == -1.0)
    }

    pub fn is_binary(&self) -> bool {
        self.data.iter().all(|&x| x == 0.0 || x == 1.0)
    }

    /// True when every entry is an integer small enough that sums of up to
    /// `rows * cols` terms stay exact in `f64`.
    pub fn is_small_integer(&self) -> bool {
        let bound = (1u64 << 52) as f64 / (self.data.len() as f64);
        self.data
            .iter()
            .all(|&x| x.fract() == 0.0 && x.abs() <= bound)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.cols];
        for i in 0..self.rows {
            for (acc, x) in s.iter_mut().zip(self.row(i)) {
                *acc += x;
            }
        }
        s
    }

    /// `u^T A` for a vector `u` of length `rows`.
    pub fn left_mul(&self, u: &[f64]) -> Vec<f64> {
        assert_eq!(u.len(), self.rows);
        let mut s = vec![0.0; self.cols];
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0.0 {
                continue;
            }
            for (acc, a) in s.iter_mut().zip(self.row(i)) {
                *acc += ui * a;
            }
        }
        s
    }

    /// `A v` for a vector `v` of length `cols`.
    pub fn right_mul(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub(crate) fn check_shape(&self, rows: usize, cols: usize) -> Result<()> {
        if self.rows != rows || self.cols != cols {
            return Err(Error::DimensionMismatch {
                expected: dims(self.rows, self.cols),
                found: dims(rows, cols),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// A matrix whose entries are exactly -1 or +1.
#[derive(Clone, PartialEq, Debug)]
pub struct SignMatrix(DenseMatrix);

impl SignMatrix {
    pub fn new(m: DenseMatrix) -> Result<Self> {
        check_domain(&m, |x| x == 1.0 || x == -1.0, "{-1,+1}")?;
        Ok(Self(m))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(DenseMatrix::from_rows(rows)?)
    }

    pub fn as_dense(&self) -> &DenseMatrix {
        &self.0
    }

    pub fn into_dense(self) -> DenseMatrix {
        self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    /// `M = (A + 1) / 2`, the inverse of [`BinaryMatrix::to_sign`].
    pub fn to_binary(&self) -> BinaryMatrix {
        let data = self
            .0
            .data
            .iter()
            .map(|&a| if a > 0.0 { 1.0 } else { 0.0 })
            .collect();
        BinaryMatrix(DenseMatrix {
            data,
            ..self.0.clone()
        })
    }
}

impl Deref for SignMatrix {
    type Target = DenseMatrix;
    fn deref(&self) -> &DenseMatrix {
        &self.0
    }
}

/// A matrix whose entries are exactly 0 or 1.
#[derive(Clone, PartialEq, Debug)]
pub struct BinaryMatrix(DenseMatrix);

impl BinaryMatrix {
    pub fn new(m: DenseMatrix) -> Result<Self> {
        check_domain(&m, |x| x == 0.0 || x == 1.0, "{0,1}")?;
        Ok(Self(m))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(DenseMatrix::from_rows(rows)?)
    }

    pub fn as_dense(&self) -> &DenseMatrix {
        &self.0
    }

    pub fn into_dense(self) -> DenseMatrix {
        self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    /// `A = 2M - 1`.
    pub fn to_sign(&self) -> SignMatrix {
        let data = self.0.data.iter().map(|&x| 2.0 * x - 1.0).collect();
        SignMatrix(DenseMatrix {
            data,
            ..self.0.clone()
        })
    }

    pub fn count_ones(&self) -> usize {
        self.0.data.iter().filter(|&&x| x == 1.0).count()
    }
}

impl Deref for BinaryMatrix {
    type Target = DenseMatrix;
    fn deref(&self) -> &DenseMatrix {
        &self.0
    }
}

fn check_domain(m: &DenseMatrix, ok: impl Fn(f64) -> bool, domain: &'static str) -> Result<()> {
    match m.data.iter().position(|&x| !ok(x)) {
        None => Ok(()),
        Some(k) => Err(Error::Domain {
            row: k / m.cols + 1,
            col: k % m.cols + 1,
            value: m.data[k],
            domain,
        }),
    }
}

/// A pair `(u, v)` standing for the rank-one matrix `u v^T`.
#[derive(Clone, PartialEq, Debug)]
pub struct RankOneFactors {
    u: Vec<f64>,
    v: Vec<f64>,
}

impl RankOneFactors {
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if u.is_empty() || v.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: "non-empty factors".into(),
                found: format!("|u|={}, |v|={}", u.len(), v.len()),
            });
        }
        for (k, x) in u.iter().chain(&v).enumerate() {
            if !x.is_finite() {
                return Err(Error::FactorDomain {
                    index: k + 1,
                    value: *x,
                    domain: "finite reals",
                });
            }
        }
        Ok(Self { u, v })
    }

    pub fn zeros(m: usize, n: usize) -> Self {
        Self {
            u: vec![0.0; m],
            v: vec![0.0; n],
        }
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn m(&self) -> usize {
        self.u.len()
    }

    pub fn n(&self) -> usize {
        self.v.len()
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.u, self.v)
    }

    pub fn outer(&self) -> DenseMatrix {
        DenseMatrix {
            rows: self.u.len(),
            cols: self.v.len(),
            data: self
                .u
                .iter()
                .flat_map(|&a| self.v.iter().map(move |&b| a * b))
                .collect(),
        }
    }

    /// Swaps the roles of `u` and `v` (factors of the transposed matrix).
    pub fn swapped(&self) -> Self {
        Self {
            u: self.v.clone(),
            v: self.u.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.u.iter().all(|&x| x == 0.0) || self.v.iter().all(|&x| x == 0.0)
    }

    pub fn is_sign(&self) -> bool {
        self.u.iter().chain(&self.v).all(|&x| x == 1.0 || x == -1.0)
    }

    pub fn is_binary(&self) -> bool {
        self.u.iter().chain(&self.v).all(|&x| x == 0.0 || x == 1.0)
    }
}

/// Factors with every component in {-1,+1}.
#[derive(Clone, PartialEq, Debug)]
pub struct SignFactors(RankOneFactors);

impl SignFactors {
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        Self::try_from(RankOneFactors::new(u, v)?)
    }

    /// Componentwise sign with `sign(0) = +1`.
    pub fn rounded(f: &RankOneFactors) -> Self {
        Self(RankOneFactors {
            u: f.u.iter().map(|&x| sign(x)).collect(),
            v: f.v.iter().map(|&x| sign(x)).collect(),
        })
    }

    pub fn factors(&self) -> &RankOneFactors {
        &self.0
    }

    pub fn into_factors(self) -> RankOneFactors {
        self.0
    }
}

impl TryFrom<RankOneFactors> for SignFactors {
    type Error = Error;
    fn try_from(f: RankOneFactors) -> Result<Self> {
        check_factor_domain(&f, |x| x == 1.0 || x == -1.0, "{-1,+1}")?;
        Ok(Self(f))
    }
}

impl Deref for SignFactors {
    type Target = RankOneFactors;
    fn deref(&self) -> &RankOneFactors {
        &self.0
    }
}

/// Factors with every component in {0,1}.
#[derive(Clone, PartialEq, Debug)]
pub struct BinaryFactors(RankOneFactors);

impl BinaryFactors {
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        Self::try_from(RankOneFactors::new(u, v)?)
    }

    pub fn zeros(m: usize, n: usize) -> Self {
        Self(RankOneFactors::zeros(m, n))
    }

    pub fn factors(&self) -> &RankOneFactors {
        &self.0
    }

    pub fn into_factors(self) -> RankOneFactors {
        self.0
    }

    /// 0-based indices where `u` is 1.
    pub fn left_support(&self) -> Vec<usize> {
        support(&self.0.u)
    }

    /// 0-based indices where `v` is 1.
    pub fn right_support(&self) -> Vec<usize> {
        support(&self.0.v)
    }

    /// Indicator factors of a pair of index sets.
    pub fn indicator(m: usize, n: usize, rows: &[usize], cols: &[usize]) -> Result<Self> {
        let mut f = RankOneFactors::zeros(m, n);
        for &i in rows {
            *f.u.get_mut(i).ok_or_else(|| out_of_range(i, m))? = 1.0;
        }
        for &j in cols {
            *f.v.get_mut(j).ok_or_else(|| out_of_range(j, n))? = 1.0;
        }
        Ok(Self(f))
    }
}

fn out_of_range(i: usize, len: usize) -> Error {
    Error::DimensionMismatch {
        expected: format!("index in 1..={len}"),
        found: format!("{}", i + 1),
    }
}

fn support(x: &[f64]) -> Vec<usize> {
    x.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0.0)
        .map(|(i, _)| i)
        .collect()
}

impl TryFrom<RankOneFactors> for BinaryFactors {
    type Error = Error;
    fn try_from(f: RankOneFactors) -> Result<Self> {
        check_factor_domain(&f, |x| x == 0.0 || x == 1.0, "{0,1}")?;
        Ok(Self(f))
    }
}

impl Deref for BinaryFactors {
    type Target = RankOneFactors;
    fn deref(&self) -> &RankOneFactors {
        &self.0
    }
}

fn check_factor_domain(
    f: &RankOneFactors,
    ok: impl Fn(f64) -> bool,
    domain: &'static str,
) -> Result<()> {
    match f.u.iter().chain(&f.v).position(|&x| !ok(x)) {
        None => Ok(()),
        Some(k) => Err(Error::FactorDomain {
            index: k + 1,
            value: if k < f.u.len() {
                f.u[k]
            } else {
                f.v[k - f.u.len()]
            },
            domain,
        }),
    }
}

/// Sign with the tie `sign(0) = +1`.
#[inline]
pub fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}
