//! Exhaustive exact solvers for desk-scale instances.
//!
//! Every solver enumerates one side of a bilinear problem (always the shorter
//! dimension; the matrix is transposed when `cols < rows`) and fills in the
//! other side in closed form. The candidate space is split into disjoint
//! prefix ranges that are scored in parallel; ties are broken toward the
//! lexicographically smallest enumerated vector under `-1 < 0 < +1`, so the
//! result does not depend on the partition or on the number of workers.
//!
//! The reported `value` is always the stated objective re-evaluated at the
//! returned certificate.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{sign, BinaryMatrix, DenseMatrix, RankOneFactors, SignMatrix};
use crate::objective::{bilinear, l0_error, l1_error};
use crate::reductions::Graph;

/// Default limit on the enumerated dimension.
pub const DEFAULT_CAP: usize = 25;
/// Limit on the number of vertices for [`maxcut_exact`].
pub const MAXCUT_CAP: usize = 24;
/// Limit on `min(m, n) * r` for [`bmf_rank_r_exact`].
pub const RANK_R_CAP: usize = 20;

const PREFIX_BITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest enumerated dimension accepted.
    pub cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { cap: DEFAULT_CAP }
    }
}

/// An optimal value with its certificate `(u_star, v_star)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub u_star: Vec<f64>,
    pub v_star: Vec<f64>,
    /// Number of candidates scored.
    pub enumerated: u64,
}

impl OracleResult {
    pub fn factors(&self) -> RankOneFactors {
        RankOneFactors::new(self.u_star.clone(), self.v_star.clone())
            .expect("certificates are finite")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Alphabet {
    /// bit 0 -> -1, bit 1 -> +1
    Sign,
    /// bit 0 -> 0, bit 1 -> 1
    Binary,
}

impl Alphabet {
    #[inline]
    fn value(self, bit: bool) -> f64 {
        match (self, bit) {
            (_, true) => 1.0,
            (Alphabet::Sign, false) => -1.0,
            (Alphabet::Binary, false) => 0.0,
        }
    }
}

/// Running best of a maximization; ties go to the smaller code.
#[derive(Debug, Clone, Copy)]
struct Best {
    score: f64,
    code: u64,
    count: u64,
}

impl Best {
    const NONE: Best = Best {
        score: f64::NEG_INFINITY,
        code: u64::MAX,
        count: 0,
    };

    #[inline]
    fn offer(&mut self, score: f64, code: u64) {
        self.count += 1;
        if score > self.score || (score == self.score && code < self.code) {
            self.score = score;
            self.code = code;
        }
    }

    fn merge(self, other: Best) -> Best {
        let count = self.count + other.count;
        let mut best =
            if other.score > self.score || (other.score == self.score && other.code < self.code) {
                other
            } else {
                self
            };
        best.count = count;
        best
    }
}

/// Row `i` of an `m`-row enumeration lives in bit `m - 1 - i`, so numeric
/// order on codes is lexicographic order on vectors.
fn decode(code: u64, m: usize, alphabet: Alphabet) -> Vec<f64> {
    (0..m)
        .map(|i| alphabet.value((code >> (m - 1 - i)) & 1 == 1))
        .collect()
}

fn column_state(a: &DenseMatrix, code: u64, alphabet: Alphabet, out: &mut [f64]) {
    let m = a.rows();
    out.iter_mut().for_each(|x| *x = 0.0);
    for i in 0..m {
        let w = alphabet.value((code >> (m - 1 - i)) & 1 == 1);
        if w == 0.0 {
            continue;
        }
        for (acc, x) in out.iter_mut().zip(a.row(i)) {
            *acc += w * x;
        }
    }
}

/// Scores every code in `[0, 2^free_bits)` (the top bit is fixed to 0 when
/// `free_bits < rows`), handing `score` the column sums `s = u^T A`.
fn sweep<F>(
    a: &DenseMatrix,
    alphabet: Alphabet,
    free_bits: usize,
    prefix_bits: usize,
    score: F,
) -> Best
where
    F: Fn(u64, &[f64]) -> f64 + Sync,
{
    let prefix_bits = prefix_bits.min(free_bits);
    let low_bits = free_bits - prefix_bits;
    let m = a.rows();
    let incremental = a.is_small_integer();
    let step = match alphabet {
        Alphabet::Sign => 2.0,
        Alphabet::Binary => 1.0,
    };

    (0..1u64 << prefix_bits)
        .into_par_iter()
        .map(|prefix| {
            let mut best = Best::NONE;
            let mut s = vec![0.0; a.cols()];
            let base = prefix << low_bits;
            column_state(a, base, alphabet, &mut s);
            best.offer(score(base, &s), base);
            for k in 1u64..(1u64 << low_bits) {
                let gray = k ^ (k >> 1);
                let code = base | gray;
                if incremental {
                    let bit = k.trailing_zeros() as usize;
                    let row = a.row(m - 1 - bit);
                    let delta = if (gray >> bit) & 1 == 1 { step } else { -step };
                    for (acc, x) in s.iter_mut().zip(row) {
                        *acc += delta * x;
                    }
                } else {
                    column_state(a, code, alphabet, &mut s);
                }
                best.offer(score(code, &s), code);
            }
            best
        })
        .reduce(|| Best::NONE, Best::merge)
}

/// Picks the orientation that enumerates the shorter side and checks the cap.
fn oriented(a: &DenseMatrix, cap: usize, what: &'static str) -> Result<(DenseMatrix, bool)> {
    let size = a.rows().min(a.cols());
    if size > cap || size >= 63 {
        return Err(Error::CapExceeded { what, size, cap });
    }
    if a.cols() < a.rows() {
        Ok((a.transpose(), true))
    } else {
        Ok((a.clone(), false))
    }
}

fn unorient(u: Vec<f64>, v: Vec<f64>, transposed: bool) -> (Vec<f64>, Vec<f64>) {
    if transposed {
        (v, u)
    } else {
        (u, v)
    }
}

/// `max u^T A v` over sign vectors `u`, `v`.
pub fn inf1_norm_exact(a: &DenseMatrix, cfg: &OracleConfig) -> Result<OracleResult> {
    let (b, transposed) = oriented(a, cfg.cap, "inf1_norm_exact")?;
    let m = b.rows();
    // u and -u give the same value; fix the first component to -1.
    let best = sweep(&b, Alphabet::Sign, m - 1, PREFIX_BITS, |_, s| {
        s.iter().map(|x| x.abs()).sum()
    });
    let u = decode(best.code, m, Alphabet::Sign);
    let v: Vec<f64> = b.left_mul(&u).into_iter().map(sign).collect();
    let (u, v) = unorient(u, v, transposed);
    Ok(OracleResult {
        value: bilinear(a, &u, &v)?,
        u_star: u,
        v_star: v,
        enumerated: best.count,
    })
}

/// `max |u^T A v|` over binary vectors `u`, `v`.
pub fn cut_norm_exact(a: &DenseMatrix, cfg: &OracleConfig) -> Result<OracleResult> {
    let (b, transposed) = oriented(a, cfg.cap, "cut_norm_exact")?;
    let m = b.rows();
    let best = sweep(&b, Alphabet::Binary, m, PREFIX_BITS, |_, s| {
        let (pos, neg) = split_parts(s);
        pos.max(neg)
    });
    let u = decode(best.code, m, Alphabet::Binary);
    let s = b.left_mul(&u);
    let (pos, neg) = split_parts(&s);
    let v: Vec<f64> = if pos >= neg {
        s.iter().map(|&x| if x > 0.0 { 1.0 } else { 0.0 }).collect()
    } else {
        s.iter().map(|&x| if x < 0.0 { 1.0 } else { 0.0 }).collect()
    };
    let (u, v) = unorient(u, v, transposed);
    Ok(OracleResult {
        value: bilinear(a, &u, &v)?.abs(),
        u_star: u,
        v_star: v,
        enumerated: best.count,
    })
}

fn split_parts(s: &[f64]) -> (f64, f64) {
    s.iter().fold(
        (0.0, 0.0),
        |(p, n), &x| {
            if x > 0.0 {
                (p + x, n)
            } else {
                (p, n - x)
            }
        },
    )
}

/// Rank-one binary matrix factorization: `min ||M - u v^T||_0` over binary
/// `u`, `v`. For each `u`, `v_j = 1` iff that strictly lowers column `j`'s
/// mismatches (ties keep `v_j = 0`).
pub fn bmf_rank1_exact(m: &BinaryMatrix, cfg: &OracleConfig) -> Result<OracleResult> {
    let (b, transposed) = oriented(m, cfg.cap, "bmf_rank1_exact")?;
    let rows = b.rows();
    let col_ones = b.col_sums();
    let best = sweep(&b, Alphabet::Binary, rows, PREFIX_BITS, |code, t| {
        let weight = code.count_ones() as f64;
        let cost: f64 = t
            .iter()
            .zip(&col_ones)
            .map(|(&tj, &cj)| (weight + cj - 2.0 * tj).min(cj))
            .sum();
        -cost
    });
    let u = decode(best.code, rows, Alphabet::Binary);
    let weight: f64 = u.iter().sum();
    let v: Vec<f64> = b
        .left_mul(&u)
        .iter()
        .zip(&col_ones)
        .map(|(&tj, &cj)| {
            if weight + cj - 2.0 * tj < cj {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    let (u, v) = unorient(u, v, transposed);
    let f = RankOneFactors::new(u, v)?;
    let value = l0_error(m, &f)? as f64;
    let (u, v) = f.into_parts();
    Ok(OracleResult {
        value,
        u_star: u,
        v_star: v,
        enumerated: best.count,
    })
}

/// Rank-one l0 low-rank approximation of a binary matrix.
///
/// Binarizing real factors by their support never increases the number of
/// mismatches against a binary matrix, so the binary optimum from
/// [`bmf_rank1_exact`] is also optimal over real factors.
pub fn l0_lra_rank1_exact(m: &BinaryMatrix, cfg: &OracleConfig) -> Result<OracleResult> {
    bmf_rank1_exact(m, cfg)
}

/// Rank-one l1 low-rank approximation of a sign matrix.
///
/// For `{-1,+1}` inputs some optimal real pair is a sign pair, so it is enough
/// to enumerate sign `x` and pick `y_j = sign((x^T A)_j)` (ties +1). Each
/// column then costs `2 min(c_j, m - c_j)` where `c_j` counts sign mismatches
/// with `x`.
pub fn l1_lra_rank1_exact_sign(a: &SignMatrix, cfg: &OracleConfig) -> Result<OracleResult> {
    let (b, transposed) = oriented(a, cfg.cap, "l1_lra_rank1_exact_sign")?;
    let m = b.rows();
    let mf = m as f64;
    let best = sweep(&b, Alphabet::Sign, m - 1, PREFIX_BITS, |_, s| {
        let cost: f64 = s
            .iter()
            .map(|&sj| {
                let mismatches = (mf - sj) / 2.0;
                2.0 * mismatches.min(mf - mismatches)
            })
            .sum();
        -cost
    });
    let x = decode(best.code, m, Alphabet::Sign);
    let y: Vec<f64> = b.left_mul(&x).into_iter().map(sign).collect();
    let (x, y) = unorient(x, y, transposed);
    let f = RankOneFactors::new(x, y)?;
    let value = l1_error(a, &f)?;
    let (u, v) = f.into_parts();
    Ok(OracleResult {
        value,
        u_star: u,
        v_star: v,
        enumerated: best.count,
    })
}

/// A maximum cut: `side[i]` is true when vertex `i` is in `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxCut {
    pub size: usize,
    pub side: Vec<bool>,
}

/// Number of edges crossing the bipartition `side`.
pub fn cut_size(g: &Graph, side: &[bool]) -> usize {
    g.edges()
        .iter()
        .filter(|&&(i, j)| side[i] != side[j])
        .count()
}

/// Maximum cut by enumeration of all bipartitions (vertex 1 pinned to `S-bar`).
pub fn maxcut_exact(g: &Graph) -> Result<MaxCut> {
    maxcut_with_prefix(g, PREFIX_BITS)
}

fn maxcut_with_prefix(g: &Graph, prefix_bits: usize) -> Result<MaxCut> {
    let nv = g.num_vertices();
    if nv > MAXCUT_CAP {
        return Err(Error::CapExceeded {
            what: "maxcut_exact",
            size: nv,
            cap: MAXCUT_CAP,
        });
    }
    let masks: Vec<u64> = g
        .edges()
        .iter()
        .map(|&(i, j)| (1u64 << (nv - 1 - i)) | (1u64 << (nv - 1 - j)))
        .collect();
    let free = nv - 1;
    let prefix_bits = prefix_bits.min(free);
    let low = free - prefix_bits;
    let best = (0..1u64 << prefix_bits)
        .into_par_iter()
        .map(|prefix| {
            let mut best = Best::NONE;
            for k in 0..1u64 << low {
                let code = (prefix << low) | k;
                let cut = masks
                    .iter()
                    .filter(|&&mk| (code & mk).count_ones() == 1)
                    .count();
                best.offer(cut as f64, code);
            }
            best
        })
        .reduce(|| Best::NONE, Best::merge);
    let side: Vec<bool> = (0..nv)
        .map(|i| (best.code >> (nv - 1 - i)) & 1 == 1)
        .collect();
    Ok(MaxCut {
        size: cut_size(g, &side),
        side,
    })
}

/// Result of [`bmf_rank_r_exact`]: `U` is `m x r`, `V` is `r x n`, both binary.
#[derive(Debug, Clone, PartialEq)]
pub struct RankRResult {
    pub value: usize,
    pub u: DenseMatrix,
    pub v: DenseMatrix,
    pub enumerated: u64,
}

/// Integer product `U V` of two matrices.
pub fn matmul(u: &DenseMatrix, v: &DenseMatrix) -> Result<DenseMatrix> {
    if u.cols() != v.rows() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} inner rows", u.cols()),
            found: format!("{}", v.rows()),
        });
    }
    DenseMatrix::from_fn(u.rows(), v.cols(), |i, j| {
        (0..u.cols()).map(|k| u.get(i, k) * v.get(k, j)).sum()
    })
}

/// `min ||M - U V||_0` over binary `U` (`m x r`) and `V` (`r x n`), with `U V`
/// the ordinary integer product. Toy scale only: `min(m, n) * r <= 20`.
pub fn bmf_rank_r_exact(m: &BinaryMatrix, r: usize) -> Result<RankRResult> {
    if r == 0 {
        return Err(Error::Config("rank must be positive".into()));
    }
    let transposed = m.cols() < m.rows();
    let b = if transposed { m.transpose() } else { m.clone() };
    let (rows, cols) = b.shape();
    let bits = rows * r;
    if bits > RANK_R_CAP {
        return Err(Error::CapExceeded {
            what: "bmf_rank_r_exact",
            size: bits,
            cap: RANK_R_CAP,
        });
    }

    let decode_u = |code: u64| -> Vec<u8> {
        (0..bits)
            .map(|k| ((code >> (bits - 1 - k)) & 1) as u8)
            .collect()
    };
    // For a given U: every 0/1 combination c of its columns, as an integer vector U c.
    let combos = |u: &[u8]| -> Vec<Vec<u32>> {
        (0..1usize << r)
            .map(|c| {
                (0..rows)
                    .map(|i| {
                        (0..r)
                            .filter(|&k| (c >> (r - 1 - k)) & 1 == 1)
                            .map(|k| u[i * r + k] as u32)
                            .sum()
                    })
                    .collect()
            })
            .collect()
    };
    let column_choice = |w: &[Vec<u32>], j: usize| -> (usize, usize) {
        w.iter()
            .enumerate()
            .map(|(c, wc)| {
                let cost = (0..rows).filter(|&i| b.get(i, j) != wc[i] as f64).count();
                (cost, c)
            })
            .min()
            .expect("at least one combination")
    };

    let best = (0..1u64 << bits)
        .into_par_iter()
        .map(|code| {
            let w = combos(&decode_u(code));
            let cost: usize = (0..cols).map(|j| column_choice(&w, j).0).sum();
            let mut best = Best::NONE;
            best.offer(-(cost as f64), code);
            best
        })
        .reduce(|| Best::NONE, Best::merge);

    let u_bits = decode_u(best.code);
    let w = combos(&u_bits);
    let u = DenseMatrix::from_fn(rows, r, |i, k| u_bits[i * r + k] as f64)?;
    let choices: Vec<usize> = (0..cols).map(|j| column_choice(&w, j).1).collect();
    let v = DenseMatrix::from_fn(r, cols, |k, j| ((choices[j] >> (r - 1 - k)) & 1) as f64)?;
    let (u, v) = if transposed {
        (v.transpose(), u.transpose())
    } else {
        (u, v)
    };
    let prod = matmul(&u, &v)?;
    let value = m
        .as_slice()
        .iter()
        .zip(prod.as_slice())
        .filter(|(a, b)| a != b)
        .count();
    Ok(RankRResult {
        value,
        u,
        v,
        enumerated: best.count,
    })
}
