use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, SignMatrix};

/// Sylvester Hadamard matrix of order `p` (a power of two): `H(1) = [1]` and
/// `H(p) = [H0, H0; -H0, H0]` with `H0 = H(p/2)`.
pub fn hadamard(p: usize) -> Result<SignMatrix> {
    if p == 0 || !p.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(p));
    }
    let mut h = vec![1.0f64];
    let mut size = 1;
    while size < p {
        let next = 2 * size;
        let mut g = vec![0.0; next * next];
        for i in 0..size {
            for j in 0..size {
                let x = h[i * size + j];
                g[i * next + j] = x;
                g[i * next + j + size] = x;
                g[(i + size) * next + j] = -x;
                g[(i + size) * next + j + size] = x;
            }
        }
        h = g;
        size = next;
    }
    SignMatrix::new(DenseMatrix::new(p, p, h)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::bilinear;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn base_cases() {
        assert_eq!(hadamard(1).unwrap().as_slice(), &[1.0]);
        assert_eq!(hadamard(2).unwrap().as_slice(), &[1.0, 1.0, -1.0, 1.0]);
        assert!(matches!(hadamard(6), Err(Error::NotPowerOfTwo(6))));
        assert!(hadamard(0).is_err());
    }

    #[test]
    fn orthogonal_columns() {
        for k in 0..=6 {
            let p = 1 << k;
            let h = hadamard(p).unwrap();
            for a in 0..p {
                for b in 0..p {
                    let dot: f64 = (0..p).map(|i| h.get(i, a) * h.get(i, b)).sum();
                    assert_eq!(dot, if a == b { p as f64 } else { 0.0 });
                }
            }
        }
    }

    #[test]
    fn bilinear_bound_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let h = hadamard(8).unwrap();
        let bound = 8f64.powf(1.5);
        for _ in 0..200 {
            let u: Vec<f64> = (0..8)
                .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
                .collect();
            let v: Vec<f64> = (0..8)
                .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
                .collect();
            assert!(bilinear(&h, &u, &v).unwrap().abs() <= bound);
        }
    }
}
