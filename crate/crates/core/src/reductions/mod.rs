//! Constructions linking the problems: support binarization, the cut-norm
//! doubling matrix, block-diagonal lifting, Sylvester Hadamard matrices and
//! the MAX CUT gadget.

mod gadget;
mod hadamard;

pub use gadget::{
    edge_block_contribution, edge_block_formula, embed_cut, maxcut_gadget, verify_gadget_threshold,
    BlockKind, Certification, GadgetInstance, GadgetReport, PChoice, DEFAULT_GADGET_ENTRY_CAP,
};
pub use hadamard::hadamard;

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::matrix::{BinaryFactors, DenseMatrix, RankOneFactors};

/// Simple undirected graph. Vertices are `0..num_vertices`; edges are stored
/// with `i < j` in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if num_vertices == 0 {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut normalized = Vec::with_capacity(edges.len());
        for (i, j) in edges {
            if i >= num_vertices || j >= num_vertices {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) has a vertex outside 1..={num_vertices}",
                    i + 1,
                    j + 1
                )));
            }
            if i == j {
                return Err(Error::InvalidGraph(format!(
                    "self-loop at vertex {}",
                    i + 1
                )));
            }
            let e = (i.min(j), i.max(j));
            if !seen.insert(e) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({}, {})",
                    e.0 + 1,
                    e.1 + 1
                )));
            }
            normalized.push(e);
        }
        Ok(Self {
            num_vertices,
            edges: normalized,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// Support indicator: 0 where `x_i == 0`, 1 elsewhere.
pub fn binarize_phi(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&xi| if xi == 0.0 { 0.0 } else { 1.0 })
        .collect()
}

/// Applies [`binarize_phi`] to both factors.
pub fn binarize_pair(f: &RankOneFactors) -> BinaryFactors {
    BinaryFactors::new(binarize_phi(f.u()), binarize_phi(f.v())).expect("indicators are binary")
}

/// The `2m x 2n` block matrix `[A, -A; -A, A]`.
pub fn cutnorm_doubling(a: &DenseMatrix) -> DenseMatrix {
    let (m, n) = a.shape();
    DenseMatrix::from_fn(2 * m, 2 * n, |i, j| {
        let x = a.get(i % m, j % n);
        if (i < m) == (j < n) {
            x
        } else {
            -x
        }
    })
    .expect("finite input gives finite output")
}

/// Block-diagonal matrix with `r` copies of `m` on the diagonal.
pub fn diag_lift(m: &DenseMatrix, r: usize) -> Result<DenseMatrix> {
    if r == 0 {
        return Err(Error::Config("lift count must be positive".into()));
    }
    let (p, q) = m.shape();
    DenseMatrix::from_fn(p * r, q * r, |i, j| {
        if i / p == j / q {
            m.get(i % p, j % q)
        } else {
            0.0
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::BinaryMatrix;
    use crate::objective::l0_error;
    use crate::oracle::{cut_norm_exact, inf1_norm_exact, OracleConfig};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn phi_definition() {
        assert_eq!(binarize_phi(&[0.0, 2.5, -3.0]), vec![0.0, 1.0, 1.0]);
        assert_eq!(binarize_phi(&[1.0, 0.0, 1.0]), vec![1.0, 0.0, 1.0]);
        assert_eq!(binarize_phi(&[-0.0]), vec![0.0]);
    }

    #[test]
    fn phi_never_increases_l0() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..500 {
            let m = BinaryMatrix::new(
                DenseMatrix::from_fn(5, 5, |_, _| rng.random_range(0..2) as f64).unwrap(),
            )
            .unwrap();
            let mut draw = || match rng.random_range(0..4) {
                0 => 0.0,
                1 => 1.0,
                _ => rng.random_range(-2.0..2.0),
            };
            let f = RankOneFactors::new(
                (0..5).map(|_| draw()).collect(),
                (0..5).map(|_| draw()).collect(),
            )
            .unwrap();
            let phi = binarize_pair(&f);
            assert!(l0_error(&m, &phi).unwrap() <= l0_error(&m, &f).unwrap());
        }
    }

    #[test]
    fn doubling_shapes_and_sums() {
        let one = DenseMatrix::from_rows(&[[1.0]]).unwrap();
        let d = cutnorm_doubling(&one);
        assert_eq!(d.as_slice(), &[1.0, -1.0, -1.0, 1.0]);
        let cfg = OracleConfig::default();
        assert_eq!(cut_norm_exact(&d, &cfg).unwrap().value, 1.0);
        assert_eq!(inf1_norm_exact(&one, &cfg).unwrap().value, 1.0);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = DenseMatrix::from_fn(3, 5, |_, _| rng.random_range(-2i32..3) as f64).unwrap();
        let d = cutnorm_doubling(&a);
        assert_eq!(d.shape(), (6, 10));
        assert!(d.row_sums().iter().all(|&s| s == 0.0));
        assert!(d.col_sums().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn doubling_links_the_norms() {
        let cfg = OracleConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..10 {
            let a = DenseMatrix::from_fn(4, 4, |_, _| rng.random_range(-3i32..4) as f64).unwrap();
            let d = cutnorm_doubling(&a);
            let inf1 = inf1_norm_exact(&a, &cfg).unwrap().value;
            assert_eq!(cut_norm_exact(&d, &cfg).unwrap().value, inf1);
        }
        for _ in 0..10 {
            let a = DenseMatrix::from_fn(3, 5, |_, _| rng.random_range(-3i32..4) as f64).unwrap();
            let inf1 = inf1_norm_exact(&a, &cfg).unwrap().value;
            assert_eq!(
                inf1_norm_exact(&cutnorm_doubling(&a), &cfg).unwrap().value,
                4.0 * inf1
            );
        }
    }

    #[test]
    fn lift() {
        let m = DenseMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert_eq!(diag_lift(&m, 1).unwrap(), m);
        let one = DenseMatrix::from_rows(&[[1.0]]).unwrap();
        let eye = diag_lift(&one, 3).unwrap();
        assert_eq!(eye.as_slice(), &[1., 0., 0., 0., 1., 0., 0., 0., 1.]);
        let l = diag_lift(&m, 2).unwrap();
        assert_eq!(l.shape(), (4, 4));
        assert_eq!(l.get(2, 3), 2.0);
        assert_eq!(l.get(0, 3), 0.0);
        assert!(diag_lift(&m, 0).is_err());
    }

    #[test]
    fn graph_validation() {
        let g = Graph::new(3, vec![(1, 0), (2, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert!(Graph::new(3, vec![(0, 0)]).is_err());
        assert!(Graph::new(3, vec![(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(2, vec![(0, 2)]).is_err());
        assert!(Graph::new(0, vec![]).is_err());
    }
}
