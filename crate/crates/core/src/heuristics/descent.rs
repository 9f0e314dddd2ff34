use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{power_iteration_rank1, InitMode, SolverConfig};
use crate::error::{dims, Error, Result};
use crate::matrix::{DenseMatrix, RankOneFactors};
use crate::objective::{l1_error, CompensatedSum};

/// Relative margin a coordinate update must beat before it is accepted.
const ACCEPT_MARGIN: f64 = 1e-12;

/// Lower endpoint of the minimizers of `sum_k w_k |x - p_k|` over the
/// `(p_k, w_k)` pairs. Pairs with zero weight are ignored; `None` when no
/// positive weight remains.
pub fn weighted_median(points: &[(f64, f64)]) -> Option<f64> {
    let mut pts: Vec<(f64, f64)> = points.iter().copied().filter(|&(_, w)| w > 0.0).collect();
    if pts.is_empty() {
        return None;
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let half = pts.iter().map(|p| p.1).sum::<f64>() / 2.0;
    let mut cumulative = 0.0;
    for &(p, w) in &pts {
        cumulative += w;
        if cumulative >= half {
            return Some(p);
        }
    }
    pts.last().map(|p| p.0)
}

/// `sum_k |target_k - x * other_k|`.
pub(crate) fn line_cost(target: &[f64], other: &[f64], x: f64) -> f64 {
    target
        .iter()
        .zip(other)
        .map(|(&t, &o)| (t - x * o).abs())
        .collect::<CompensatedSum>()
        .value()
}

/// Weighted median of the break points `target_k / other_k`.
pub(crate) fn best_coordinate(target: &[f64], other: &[f64]) -> Option<f64> {
    let points: Vec<(f64, f64)> = target
        .iter()
        .zip(other)
        .filter(|&(_, &o)| o != 0.0)
        .map(|(&t, &o)| (t / o, o.abs()))
        .collect();
    weighted_median(&points)
}

/// Moves `x` to the weighted median when that strictly lowers the line cost.
fn update_coordinate(target: &[f64], other: &[f64], x: &mut f64) -> bool {
    let Some(candidate) = best_coordinate(target, other) else {
        return false;
    };
    if candidate == *x {
        return false;
    }
    let old = line_cost(target, other, *x);
    let new = line_cost(target, other, candidate);
    if new < old - ACCEPT_MARGIN * (1.0 + old) {
        *x = candidate;
        true
    } else {
        false
    }
}

/// Components uniform on {-1,+1}, scaled by the row (for `u`) and column (for
/// `v`) norms divided by the square root of the opposite dimension.
pub fn random_init<R: Rng>(m: &DenseMatrix, rng: &mut R) -> RankOneFactors {
    let (rows, cols) = m.shape();
    let row_scale: Vec<f64> = (0..rows)
        .map(|i| (m.row(i).iter().map(|x| x * x).sum::<f64>() / cols as f64).sqrt())
        .collect();
    let col_scale: Vec<f64> = (0..cols)
        .map(|j| (m.column(j).iter().map(|x| x * x).sum::<f64>() / rows as f64).sqrt())
        .collect();
    let mut draw = |s: f64| if rng.random_bool(0.5) { s } else { -s };
    let u = row_scale.into_iter().map(&mut draw).collect();
    let v = col_scale.into_iter().map(&mut draw).collect();
    RankOneFactors::new(u, v).expect("finite scales")
}

fn reseed<R: Rng>(m: &DenseMatrix, rng: &mut R, left: bool) -> Vec<f64> {
    let f = random_init(m, rng);
    let (u, v) = f.into_parts();
    if left {
        u
    } else {
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescentRun {
    pub factors: RankOneFactors,
    pub objective: f64,
    /// Objective before the first sweep and after each completed sweep.
    pub trace: Vec<f64>,
    pub sweeps: usize,
    /// Times an all-zero factor had to be redrawn.
    pub restart_events: usize,
}

/// Cyclic coordinate descent for `min ||M - u v^T||_1`: each sweep updates
/// `u_1..u_m` and then `v_1..v_n` to the weighted median of their break
/// points, keeping only strict improvements.
pub fn l1_coordinate_descent(
    m: &DenseMatrix,
    init: &RankOneFactors,
    cfg: &SolverConfig,
) -> Result<DescentRun> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    descend(m, init, cfg, &mut rng)
}

pub(crate) fn descend<R: Rng>(
    m: &DenseMatrix,
    init: &RankOneFactors,
    cfg: &SolverConfig,
    rng: &mut R,
) -> Result<DescentRun> {
    cfg.validate()?;
    let (rows, cols) = m.shape();
    if init.m() != rows || init.n() != cols {
        return Err(Error::DimensionMismatch {
            expected: format!("factors for a {} matrix", dims(rows, cols)),
            found: format!("|u|={}, |v|={}", init.m(), init.n()),
        });
    }
    let (mut u, mut v) = init.clone().into_parts();
    let columns: Vec<Vec<f64>> = (0..cols).map(|j| m.column(j)).collect();
    let objective = |u: &[f64], v: &[f64]| {
        l1_error(
            m,
            &RankOneFactors::new(u.to_vec(), v.to_vec()).expect("finite"),
        )
    };
    let mut current = objective(&u, &v)?;
    let mut trace = vec![current];
    let mut sweeps = 0;
    let mut restart_events = 0;
    while sweeps < cfg.max_sweeps && current > 0.0 {
        sweeps += 1;
        let saved = (u.clone(), v.clone());
        let mut reseeded = false;
        let mut changed = false;
        if v.iter().all(|&x| x == 0.0) {
            v = reseed(m, rng, false);
            restart_events += 1;
            reseeded = true;
        }
        for (i, ui) in u.iter_mut().enumerate() {
            changed |= update_coordinate(m.row(i), &v, ui);
        }
        if u.iter().all(|&x| x == 0.0) {
            u = reseed(m, rng, true);
            restart_events += 1;
            reseeded = true;
        }
        for (j, vj) in v.iter_mut().enumerate() {
            changed |= update_coordinate(&columns[j], &u, vj);
        }
        let next = objective(&u, &v)?;
        if reseeded && next > current {
            (u, v) = saved;
            break;
        }
        let improvement = current - next;
        current = next;
        trace.push(current);
        if !changed || improvement <= cfg.objective_tolerance {
            break;
        }
    }
    Ok(DescentRun {
        factors: RankOneFactors::new(u, v)?,
        objective: current,
        trace,
        sweeps,
        restart_events,
    })
}

/// Total order used to pick among restarts: objective, then `u`, then `v`.
pub(crate) fn certificate_order(a: (f64, &RankOneFactors), b: (f64, &RankOneFactors)) -> Ordering {
    let lex = |x: &[f64], y: &[f64]| {
        x.iter()
            .zip(y)
            .map(|(p, q)| p.total_cmp(q))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    };
    a.0.total_cmp(&b.0)
        .then_with(|| lex(a.1.u(), b.1.u()))
        .then_with(|| lex(a.1.v(), b.1.v()))
}

/// Random stream for restart `r`.
pub(crate) fn restart_rng(seed: u64, r: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r as u64);
    rng
}

/// Initial factors for restart `r`: the configured mode for `r = 0`, random
/// factors afterwards.
pub(crate) fn initial_factors(
    m: &DenseMatrix,
    cfg: &SolverConfig,
    given: Option<&RankOneFactors>,
    r: usize,
    rng: &mut ChaCha8Rng,
) -> Result<RankOneFactors> {
    match (r, cfg.init_mode) {
        (0, InitMode::Svd) => Ok(power_iteration_rank1(m, cfg)?.factors),
        (0, InitMode::Given) => given
            .cloned()
            .ok_or_else(|| Error::Config("init mode 'given' needs initial factors".into())),
        _ => Ok(random_init(m, rng)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestartOutcome {
    pub best: DescentRun,
    pub best_index: usize,
    /// Final objective of every restart, in restart order.
    pub objectives: Vec<f64>,
}

/// Runs `cfg.restarts` independent descents in parallel and keeps the best.
pub fn l1_restarts(
    m: &DenseMatrix,
    cfg: &SolverConfig,
    given: Option<&RankOneFactors>,
) -> Result<RestartOutcome> {
    cfg.validate()?;
    let runs: Vec<DescentRun> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = restart_rng(cfg.rng_seed, r);
            let init = initial_factors(m, cfg, given, r, &mut rng)?;
            descend(m, &init, cfg, &mut rng)
        })
        .collect::<Result<_>>()?;
    let objectives = runs.iter().map(|r| r.objective).collect();
    let best_index = (0..runs.len())
        .min_by(|&a, &b| {
            certificate_order(
                (runs[a].objective, &runs[a].factors),
                (runs[b].objective, &runs[b].factors),
            )
        })
        .expect("at least one restart");
    Ok(RestartOutcome {
        best: runs.into_iter().nth(best_index).expect("index in range"),
        best_index,
        objectives,
    })
}
