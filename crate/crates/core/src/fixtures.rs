//! Small reference instances: the single-community matrices and the 6x6 sign
//! matrix with a non-sign local minimum of the l1 objective.

use crate::matrix::{BinaryMatrix, DenseMatrix, RankOneFactors, SignMatrix};

/// Three movies watched by the first four users.
pub fn community_clean() -> BinaryMatrix {
    BinaryMatrix::from_rows(&[
        [1., 1., 1., 1., 0.],
        [1., 1., 1., 1., 0.],
        [1., 1., 1., 1., 0.],
        [0., 0., 0., 0., 0.],
    ])
    .expect("fixture")
}

/// [`community_clean`] with three extra edges.
pub fn community_perturbed() -> BinaryMatrix {
    BinaryMatrix::from_rows(&[
        [1., 1., 1., 1., 0.],
        [1., 1., 1., 1., 1.],
        [1., 1., 1., 1., 0.],
        [1., 0., 0., 0., 1.],
    ])
    .expect("fixture")
}

/// Published two-decimal rendering of the best rank-one Frobenius
/// approximation of [`community_perturbed`].
pub fn community_l2_display() -> DenseMatrix {
    DenseMatrix::from_rows(&[
        [1.03, 0.92, 0.92, 0.92, 0.44],
        [1.15, 1.02, 1.02, 1.02, 0.50],
        [1.03, 0.92, 0.92, 0.92, 0.44],
        [0.40, 0.36, 0.36, 0.36, 0.17],
    ])
    .expect("fixture")
}

/// Community factors `u = (1,1,1,0)`, `v = (1,1,1,1,0)`.
pub fn community_factors() -> RankOneFactors {
    RankOneFactors::new(vec![1., 1., 1., 0.], vec![1., 1., 1., 1., 0.]).expect("fixture")
}

pub fn trap_matrix() -> SignMatrix {
    SignMatrix::from_rows(&[
        [1., 1., 1., 1., 1., 1.],
        [1., 1., 1., 1., 1., 1.],
        [1., -1., -1., -1., 1., 1.],
        [-1., 1., -1., -1., 1., 1.],
        [-1., -1., 1., -1., 1., 1.],
        [-1., -1., -1., 1., 1., 1.],
    ])
    .expect("fixture")
}

/// `u = (1,1,x,x,x,x)`, `v = (1,1,1,1,1/x,1/x)`: coordinatewise stationary
/// for `0.5 < x < 1`, a local minimum at `x = sqrt(2)/2`.
pub fn trap_stationary(x: f64) -> RankOneFactors {
    RankOneFactors::new(
        vec![1., 1., x, x, x, x],
        vec![1., 1., 1., 1., 1. / x, 1. / x],
    )
    .expect("fixture")
}

/// The local-minimum parameter `sqrt(2)/2`.
pub const TRAP_LOCAL_MIN_X: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Optimal sign pair for [`trap_matrix`], objective 16.
pub fn trap_optimum() -> RankOneFactors {
    RankOneFactors::new(
        vec![1., 1., -1., -1., -1., -1.],
        vec![1., 1., 1., 1., -1., -1.],
    )
    .expect("fixture")
}
