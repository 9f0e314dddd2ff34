//! Certified lower bounds on the cut norm and the infinity-to-one norm, and
//! the restart driver that pairs coordinate descent with sign rounding.

use rand::Rng;
use rayon::prelude::*;

use super::descent::{certificate_order, descend, initial_factors, restart_rng};
use super::{l1_restarts, sign_round, DescentRun, SignRound, SolverConfig};
use crate::error::Result;
use crate::matrix::{sign, DenseMatrix, RankOneFactors, SignFactors, SignMatrix};
use crate::objective::bilinear;

#[derive(Debug, Clone, PartialEq)]
pub struct SignRestartOutcome {
    /// Descent run of the winning restart, before rounding.
    pub descent: DescentRun,
    pub rounded: SignRound,
    pub best_index: usize,
    /// Rounded objective of every restart, in restart order.
    pub objectives: Vec<f64>,
}

/// Coordinate descent followed by [`sign_round`] for each restart; the best
/// rounded pair wins, ties broken by the certificate.
pub fn l1_sign_restarts(
    a: &SignMatrix,
    cfg: &SolverConfig,
    given: Option<&RankOneFactors>,
) -> Result<SignRestartOutcome> {
    cfg.validate()?;
    let runs: Vec<(DescentRun, SignRound)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = restart_rng(cfg.rng_seed, r);
            let init = initial_factors(a, cfg, given, r, &mut rng)?;
            let run = descend(a, &init, cfg, &mut rng)?;
            let rounded = if run.factors.is_zero() {
                zero_fallback(a)?
            } else {
                sign_round(a, &run.factors)?
            };
            Ok((run, rounded))
        })
        .collect::<Result<_>>()?;
    let objectives = runs.iter().map(|r| r.1.objective).collect();
    let best_index = (0..runs.len())
        .min_by(|&x, &y| {
            certificate_order(
                (runs[x].1.objective, runs[x].1.factors.factors()),
                (runs[y].1.objective, runs[y].1.factors.factors()),
            )
        })
        .expect("at least one restart");
    let (descent, rounded) = runs.into_iter().nth(best_index).expect("index in range");
    Ok(SignRestartOutcome {
        descent,
        rounded,
        best_index,
        objectives,
    })
}

/// All-ones pair, used when descent collapses to zero.
fn zero_fallback(a: &SignMatrix) -> Result<SignRound> {
    let ones = RankOneFactors::new(vec![1.0; a.rows()], vec![1.0; a.cols()])?;
    sign_round(a, &ones)
}

/// A feasible point of a norm's maximization and its objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct NormLowerBound {
    pub value: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

/// Alternates `v = sign(A^T u)` and `u = sign(A v)` while `u` changes and
/// `u^T A v` strictly grows.
pub fn sign_ascent(a: &DenseMatrix, start: &SignFactors) -> NormLowerBound {
    let mut u = start.u().to_vec();
    let mut v: Vec<f64>;
    let mut value;
    loop {
        let s = a.left_mul(&u);
        v = s.iter().map(|&x| sign(x)).collect();
        value = s.iter().map(|x| x.abs()).sum::<f64>();
        let t = a.right_mul(&v);
        let next = t.iter().map(|x| x.abs()).sum::<f64>();
        let next_u: Vec<f64> = t.iter().map(|&x| sign(x)).collect();
        if next <= value || next_u == u {
            break;
        }
        u = next_u;
    }
    let value = bilinear(a, &u, &v).expect("shapes agree");
    NormLowerBound { value, u, v }
}

/// Lower bound on `||A||_{inf->1}`. For sign matrices this is
/// `mn - l1(x, y)` at the rounded restart winner (equal to `x^T A y`); other
/// matrices use the signs of the descent winner polished by [`sign_ascent`].
pub fn inf1_norm_heuristic(a: &DenseMatrix, cfg: &SolverConfig) -> Result<NormLowerBound> {
    if let Ok(s) = SignMatrix::new(a.clone()) {
        let out = l1_sign_restarts(&s, cfg, None)?;
        let (u, v) = out.rounded.factors.factors().clone().into_parts();
        let value = (a.rows() * a.cols()) as f64 - out.rounded.objective;
        return Ok(NormLowerBound { value, u, v });
    }
    let out = l1_restarts(a, cfg, None)?;
    Ok(sign_ascent(a, &SignFactors::rounded(&out.best.factors)))
}

fn cut_ascent(a: &DenseMatrix, mut u: Vec<f64>) -> NormLowerBound {
    let positive_part = |s: &[f64], orient: f64| -> (Vec<f64>, f64) {
        let pick: Vec<f64> = s
            .iter()
            .map(|&x| if orient * x > 0.0 { 1.0 } else { 0.0 })
            .collect();
        let total = s.iter().map(|&x| (orient * x).max(0.0)).sum();
        (pick, total)
    };
    let mut v;
    loop {
        let s = a.left_mul(&u);
        let (pos, pos_val) = positive_part(&s, 1.0);
        let (neg, neg_val) = positive_part(&s, -1.0);
        let (orient, value);
        (v, orient, value) = if pos_val >= neg_val {
            (pos, 1.0, pos_val)
        } else {
            (neg, -1.0, neg_val)
        };
        let t = a.right_mul(&v);
        let (next_u, next) = positive_part(&t, orient);
        if next <= value || next_u == u {
            break;
        }
        u = next_u;
    }
    let value = bilinear(a, &u, &v).expect("shapes agree").abs();
    NormLowerBound { value, u, v }
}

/// Lower bound on the cut norm by alternating exact binary updates from the
/// all-ones start (restart 0) and random binary starts.
pub fn cut_norm_heuristic(a: &DenseMatrix, cfg: &SolverConfig) -> Result<NormLowerBound> {
    cfg.validate()?;
    let runs: Vec<NormLowerBound> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let u = if r == 0 {
                vec![1.0; a.rows()]
            } else {
                let mut rng = restart_rng(cfg.rng_seed, r);
                (0..a.rows())
                    .map(|_| if rng.random_bool(0.5) { 1.0 } else { 0.0 })
                    .collect()
            };
            cut_ascent(a, u)
        })
        .collect();
    let key = |b: &NormLowerBound| RankOneFactors::new(b.u.clone(), b.v.clone()).expect("finite");
    Ok(runs
        .into_iter()
        .min_by(|x, y| certificate_order((-x.value, &key(x)), (-y.value, &key(y))))
        .expect("at least one restart"))
}
