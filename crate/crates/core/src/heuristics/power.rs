use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SolverConfig;
use crate::error::Result;
use crate::matrix::{DenseMatrix, RankOneFactors};

/// Relative change of the singular value estimate that ends the iteration.
pub const POWER_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PowerIteration {
    /// `sqrt(sigma)` times the left and right singular vectors.
    pub factors: RankOneFactors,
    pub sigma: f64,
    pub iterations: usize,
    /// Set when the input is the zero matrix; the factors are then zero.
    pub zero_input: bool,
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn normalize(x: &mut [f64]) -> bool {
    let n = norm(x);
    if n == 0.0 || !n.is_finite() {
        return false;
    }
    x.iter_mut().for_each(|a| *a /= n);
    true
}

fn random_unit(len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let mut x: Vec<f64> = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
        if normalize(&mut x) {
            return x;
        }
    }
}

/// Alternating multiplication by `M` and `M^T` starting from the all-ones
/// right vector. A start vector annihilated by `M` is replaced by a random
/// one drawn from `cfg.rng_seed`. The sign is fixed so that `sum(u) >= 0`.
pub fn power_iteration_rank1(m: &DenseMatrix, cfg: &SolverConfig) -> Result<PowerIteration> {
    cfg.validate()?;
    let (rows, cols) = m.shape();
    if m.as_slice().iter().all(|&x| x == 0.0) {
        return Ok(PowerIteration {
            factors: RankOneFactors::zeros(rows, cols),
            sigma: 0.0,
            iterations: 0,
            zero_input: true,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut v = vec![1.0; cols];
    normalize(&mut v);
    let mut u = vec![0.0; rows];
    let mut sigma = 0.0;
    let mut previous: Option<f64> = None;
    let mut iterations = 0;
    while iterations < cfg.max_sweeps {
        iterations += 1;
        u = m.right_mul(&v);
        if !normalize(&mut u) {
            v = random_unit(cols, &mut rng);
            previous = None;
            continue;
        }
        let mut w = m.left_mul(&u);
        sigma = norm(&w);
        if sigma == 0.0 {
            v = random_unit(cols, &mut rng);
            previous = None;
            continue;
        }
        w.iter_mut().for_each(|a| *a /= sigma);
        v = w;
        if let Some(prev) = previous {
            if (sigma - prev).abs() < POWER_TOLERANCE * sigma {
                break;
            }
        }
        previous = Some(sigma);
    }
    if u.iter().sum::<f64>() < 0.0 {
        u.iter_mut().for_each(|a| *a = -*a);
        v.iter_mut().for_each(|a| *a = -*a);
    }
    let root = sigma.sqrt();
    let factors = RankOneFactors::new(
        u.iter().map(|a| a * root).collect(),
        v.iter().map(|a| a * root).collect(),
    )?;
    Ok(PowerIteration {
        factors,
        sigma,
        iterations,
        zero_input: false,
    })
}
