//! Bipartite graphs viewed through their biadjacency matrix. A community is a
//! pair of vertex subsets `(S', T')`; its indicator factors give a rank-one
//! binary approximation whose mismatches are the edges outside `S' x T'` plus
//! the non-edges inside it.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::heuristics::{bmf_alternating, power_iteration_rank1, SolverConfig};
use crate::matrix::{BinaryFactors, BinaryMatrix, DenseMatrix};
use crate::oracle::{bmf_rank1_exact, OracleConfig};

/// Bipartite graph on left vertices `0..left_size` and right vertices `0..right_size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left_size: usize,
    right_size: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl BipartiteGraph {
    pub fn new(
        left_size: usize,
        right_size: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if left_size == 0 || right_size == 0 {
            return Err(Error::InvalidGraph(format!(
                "both sides need vertices (got {left_size} and {right_size})"
            )));
        }
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            if i >= left_size || j >= right_size {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) outside {left_size}x{right_size}",
                    i + 1,
                    j + 1
                )));
            }
            if !set.insert((i, j)) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
        Ok(Self {
            left_size,
            right_size,
            edges: set,
        })
    }

    pub fn left_size(&self) -> usize {
        self.left_size
    }

    pub fn right_size(&self) -> usize {
        self.right_size
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = &(usize, usize)> + '_ {
        self.edges.iter()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }

    /// `M_ij = 1` exactly when `(i, j)` is an edge.
    pub fn biadjacency(&self) -> BinaryMatrix {
        let m = DenseMatrix::from_fn(self.left_size, self.right_size, |i, j| {
            if self.has_edge(i, j) {
                1.0
            } else {
                0.0
            }
        })
        .expect("positive dimensions");
        BinaryMatrix::new(m).expect("0/1 entries")
    }

    pub fn from_biadjacency(m: &BinaryMatrix) -> Self {
        let (rows, cols) = m.shape();
        let edges = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| m.get(i, j) == 1.0)
            .collect();
        Self {
            left_size: rows,
            right_size: cols,
            edges,
        }
    }

    /// `E(S', T')`, the number of edges inside `S' x T'`.
    pub fn edges_within(&self, left: &[bool], right: &[bool]) -> Result<usize> {
        self.check_masks(left, right)?;
        Ok(self
            .edges
            .iter()
            .filter(|&&(i, j)| left[i] && right[j])
            .count())
    }

    fn check_masks(&self, left: &[bool], right: &[bool]) -> Result<()> {
        if left.len() != self.left_size || right.len() != self.right_size {
            return Err(Error::DimensionMismatch {
                expected: format!("masks of length {} and {}", self.left_size, self.right_size),
                found: format!("{} and {}", left.len(), right.len()),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CommunityScore {
    /// `|E| + |S'||T'| - 2 E(S', T')`.
    pub mismatches: usize,
    /// `3 E(S', T') - |S'||T'| - |E|`, reported for comparison only.
    pub alt_score: i64,
}

/// Scores the community `(S', T')` given as membership masks.
pub fn community_score(
    g: &BipartiteGraph,
    left: &[bool],
    right: &[bool],
) -> Result<CommunityScore> {
    let inside = g.edges_within(left, right)?;
    let s = left.iter().filter(|&&b| b).count();
    let t = right.iter().filter(|&&b| b).count();
    let e = g.num_edges();
    Ok(CommunityScore {
        mismatches: e + s * t - 2 * inside,
        alt_score: 3 * inside as i64 - (s * t) as i64 - e as i64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtractMode {
    Exact,
    Heuristic,
}

/// An extracted community; indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Community {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub mismatches: usize,
}

impl Community {
    fn from_factors(f: &BinaryFactors, m: &BinaryMatrix) -> Self {
        let mismatches = crate::objective::l0_error(m, f).expect("factor shapes match the matrix");
        Self {
            left: f.left_support(),
            right: f.right_support(),
            mismatches,
        }
    }
}

/// Finds the community minimizing mismatches, either exactly (enumeration,
/// subject to `oracle.cap`) or with power-iteration initialization followed by
/// alternating binary updates.
pub fn extract_community(
    m: &BinaryMatrix,
    cfg: &SolverConfig,
    oracle: &OracleConfig,
    mode: ExtractMode,
) -> Result<Community> {
    let f = match mode {
        ExtractMode::Exact => {
            let r = bmf_rank1_exact(m, oracle)?;
            BinaryFactors::new(r.u_star, r.v_star)?
        }
        ExtractMode::Heuristic => community_heuristic(m, cfg)?,
    };
    Ok(Community::from_factors(&f, m))
}

/// Thresholds the dominant singular pair at half its largest magnitude.
pub fn threshold_init(m: &DenseMatrix, cfg: &SolverConfig) -> Result<BinaryFactors> {
    let power = power_iteration_rank1(m, cfg)?;
    let cut = |x: &[f64]| -> Vec<f64> {
        let top = x.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        x.iter()
            .map(|&y| {
                if top > 0.0 && y.abs() >= 0.5 * top {
                    1.0
                } else {
                    0.0
                }
            })
            .collect()
    };
    BinaryFactors::new(cut(power.factors.u()), cut(power.factors.v()))
}

fn community_heuristic(m: &BinaryMatrix, cfg: &SolverConfig) -> Result<BinaryFactors> {
    let init = threshold_init(m, cfg)?;
    Ok(bmf_alternating(m, &init, cfg)?.factors)
}
