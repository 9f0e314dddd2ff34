//! Rank-one robust low-rank approximation of matrices: exact brute-force
//! solvers for l0, l1 and binary factorization, the cut norm and the
//! infinity-to-one norm; iterative heuristics; the constructions linking these
//! problems (support binarization, doubling, the MAX CUT gadget, block
//! lifting); and bipartite community extraction.

pub mod community;
pub mod error;
pub mod fixtures;
pub mod heuristics;
pub mod io;
pub mod matrix;
pub mod objective;
pub mod oracle;
pub mod reductions;
pub mod suites;

pub use community::BipartiteGraph;
pub use error::{Error, ParseErrorKind, Result};
pub use heuristics::SolverConfig;
pub use matrix::{
    BinaryFactors, BinaryMatrix, DenseMatrix, RankOneFactors, SignFactors, SignMatrix,
};
pub use oracle::{OracleConfig, OracleResult};
pub use reductions::{GadgetInstance, Graph};
