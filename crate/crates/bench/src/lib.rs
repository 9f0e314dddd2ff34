//! Seeded benchmark instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rankone_core::{BinaryMatrix, DenseMatrix, Graph, SignMatrix};

pub fn sign_matrix(seed: u64, m: usize, n: usize) -> SignMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rankone_core::suites::random_sign(&mut rng, m, n)
}

pub fn binary_matrix(seed: u64, m: usize, n: usize, density: f64) -> BinaryMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = DenseMatrix::from_fn(
        m,
        n,
        |_, _| if rng.random_bool(density) { 1.0 } else { 0.0 },
    )
    .expect("positive dimensions");
    BinaryMatrix::new(d).expect("binary entries")
}

pub fn real_matrix(seed: u64, m: usize, n: usize) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseMatrix::from_fn(m, n, |_, _| rng.random_range(-1.0..1.0)).expect("positive dimensions")
}

/// The cycle on `n >= 3` vertices.
pub fn cycle(n: usize) -> Graph {
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).expect("valid cycle")
}
