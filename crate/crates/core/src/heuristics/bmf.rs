use super::SolverConfig;
use crate::error::{dims, Error, Result};
use crate::matrix::{BinaryFactors, BinaryMatrix};
use crate::objective::l0_error;

#[derive(Debug, Clone, PartialEq)]
pub struct BmfRun {
    pub factors: BinaryFactors,
    pub objective: usize,
    /// Objective before the first sweep and after each sweep.
    pub trace: Vec<usize>,
    pub sweeps: usize,
}

/// Sets each `y_j` to its optimal binary value for fixed `x`: one iff
/// `|x| + c_j - 2 t_j < c_j`, where `c_j` counts the ones in column `j` and
/// `t_j` those also selected by `x`. Returns whether anything changed.
fn best_response(m: &BinaryMatrix, x: &[f64], y: &mut [f64], transposed: bool) -> bool {
    let support: Vec<usize> = (0..x.len()).filter(|&k| x[k] == 1.0).collect();
    let mut changed = false;
    for (j, yj) in y.iter_mut().enumerate() {
        let entry = |k: usize| if transposed { m.get(j, k) } else { m.get(k, j) };
        let ones = (0..x.len()).filter(|&k| entry(k) == 1.0).count();
        let hits = support.iter().filter(|&&k| entry(k) == 1.0).count();
        let want = if support.len() + ones < ones + 2 * hits {
            1.0
        } else {
            0.0
        };
        if *yj != want {
            *yj = want;
            changed = true;
        }
    }
    changed
}

/// Alternating exact updates of `v` given `u` and `u` given `v` until a full
/// sweep changes nothing.
pub fn bmf_alternating(
    m: &BinaryMatrix,
    init: &BinaryFactors,
    cfg: &SolverConfig,
) -> Result<BmfRun> {
    cfg.validate()?;
    let (rows, cols) = m.shape();
    if init.m() != rows || init.n() != cols {
        return Err(Error::DimensionMismatch {
            expected: format!("factors for a {} matrix", dims(rows, cols)),
            found: format!("|u|={}, |v|={}", init.m(), init.n()),
        });
    }
    let (mut u, mut v) = init.factors().clone().into_parts();
    let eval = |u: &[f64], v: &[f64]| -> Result<usize> {
        l0_error(m, BinaryFactors::new(u.to_vec(), v.to_vec())?.factors())
    };
    let mut trace = vec![eval(&u, &v)?];
    let mut sweeps = 0;
    while sweeps < cfg.max_sweeps {
        sweeps += 1;
        let changed_v = best_response(m, &u, &mut v, false);
        let changed_u = best_response(m, &v, &mut u, true);
        trace.push(eval(&u, &v)?);
        if !(changed_u || changed_v) {
            break;
        }
    }
    let objective = *trace.last().expect("trace starts non-empty");
    Ok(BmfRun {
        factors: BinaryFactors::new(u, v)?,
        objective,
        trace,
        sweeps,
    })
}
