//! Level structure of a rank-one pair with nonzero components, the two
//! level-collapsing moves, and rounding of a real pair to a sign pair.
//!
//! Magnitudes are read as levels through `|u_i|` and `1 / |v_j|`; the pair is
//! rescaled so the largest level is 1. A move rescales every component off
//! the top level (dividing `u` and multiplying `v` by `beta` or `-beta`, where
//! `beta` is the second-highest level), which merges the second level into the
//! top one and changes only the blocks pairing a lower level with the top.

use super::descent::best_coordinate;
use crate::error::{dims, Error, Result};
use crate::matrix::{DenseMatrix, RankOneFactors, SignFactors, SignMatrix};
use crate::objective::l1_error;

/// Relative gap below which two magnitudes share a level.
pub const LEVEL_TOLERANCE: f64 = 1e-9;

/// Slack allowed when deciding that a move does not increase the objective.
const MOVE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct LevelDecomposition {
    levels: Vec<f64>,
    u_level: Vec<usize>,
    v_level: Vec<usize>,
    u_sign: Vec<f64>,
    v_sign: Vec<f64>,
    scale: f64,
}

impl LevelDecomposition {
    /// Distinct magnitudes `alpha_1 < ... < alpha_k = 1`.
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn k(&self) -> usize {
        self.levels.len()
    }

    /// Second-highest level, when there is one.
    pub fn beta(&self) -> Option<f64> {
        (self.k() >= 2).then(|| self.levels[self.k() - 2])
    }

    /// 0-based level of each `u_i`.
    pub fn u_level(&self) -> &[usize] {
        &self.u_level
    }

    /// 0-based level of each `v_j` (its magnitude is the reciprocal level).
    pub fn v_level(&self) -> &[usize] {
        &self.v_level
    }

    pub fn u_signs(&self) -> &[f64] {
        &self.u_sign
    }

    pub fn v_signs(&self) -> &[f64] {
        &self.v_sign
    }

    /// Factor `s` with `u_normalized = s u` and `v_normalized = v / s`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `u_i = sign * alpha`, `v_j = sign / alpha`.
    pub fn reconstruct(&self) -> RankOneFactors {
        let u = self
            .u_level
            .iter()
            .zip(&self.u_sign)
            .map(|(&l, &s)| s * self.levels[l])
            .collect();
        let v = self
            .v_level
            .iter()
            .zip(&self.v_sign)
            .map(|(&l, &s)| s / self.levels[l])
            .collect();
        RankOneFactors::new(u, v).expect("levels are positive")
    }
}

/// Groups the magnitudes of a pair with no zero components into levels.
pub fn level_decompose(f: &RankOneFactors) -> Result<LevelDecomposition> {
    if f.u().iter().chain(f.v()).any(|&x| x == 0.0) {
        return Err(Error::ZeroFactor(
            "level decomposition needs nonzero components; repair zeros first",
        ));
    }
    let raw: Vec<f64> = f
        .u()
        .iter()
        .map(|x| x.abs())
        .chain(f.v().iter().map(|y| 1.0 / y.abs()))
        .collect();
    let top = raw.iter().copied().fold(0.0, f64::max);
    let scale = 1.0 / top;
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]));

    let mut levels: Vec<f64> = Vec::new();
    let mut assigned = vec![0usize; raw.len()];
    let mut previous = f64::NAN;
    for &idx in &order {
        let x = raw[idx] * scale;
        if levels.is_empty() || x - previous > LEVEL_TOLERANCE * x {
            levels.push(x);
        } else {
            *levels.last_mut().expect("non-empty") = x;
        }
        assigned[idx] = levels.len() - 1;
        previous = x;
    }
    *levels.last_mut().expect("non-empty") = 1.0;

    let m = f.m();
    Ok(LevelDecomposition {
        levels,
        u_level: assigned[..m].to_vec(),
        v_level: assigned[m..].to_vec(),
        u_sign: f.u().iter().map(|&x| x.signum()).collect(),
        v_sign: f.v().iter().map(|&y| y.signum()).collect(),
        scale,
    })
}

/// Replaces each zero `u_i` (then each zero `v_j`) by the break point that
/// minimizes its row (column) cost. The objective does not increase.
pub fn repair_zeros(a: &DenseMatrix, f: &RankOneFactors) -> Result<RankOneFactors> {
    check_shape(a, f)?;
    if f.is_zero() {
        return Err(Error::ZeroFactor("cannot repair an all-zero factor"));
    }
    let (mut u, mut v) = f.clone().into_parts();
    for (i, ui) in u.iter_mut().enumerate() {
        if *ui == 0.0 {
            *ui = best_coordinate(a.row(i), &v).unwrap_or(0.0);
        }
    }
    for (j, vj) in v.iter_mut().enumerate() {
        if *vj == 0.0 {
            *vj = best_coordinate(&a.column(j), &u).unwrap_or(0.0);
        }
    }
    RankOneFactors::new(u, v)
}

fn check_shape(a: &DenseMatrix, f: &RankOneFactors) -> Result<()> {
    if (f.m(), f.n()) != a.shape() {
        return Err(Error::DimensionMismatch {
            expected: format!("factors for a {} matrix", dims(a.rows(), a.cols())),
            found: format!("|u|={}, |v|={}", f.m(), f.n()),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    /// Off-top components divided (u) or multiplied (v) by `beta`.
    One,
    /// As [`Move::One`] with `-beta`.
    Two,
}

/// Objective changes of both moves, measured directly, together with the
/// per-level sign-agreement counts that determine them in closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct MoveDeltas {
    /// `l1(after Move 1) - l1(before)`.
    pub delta1: f64,
    /// `l1(after Move 2) - l1(before)`.
    pub delta2: f64,
    /// Levels `alpha_1..alpha_{k-1}`.
    pub alphas: Vec<f64>,
    pub beta: f64,
    /// Agreements between `sign(A)` and `sign(u v^T)` in block (p, top).
    pub a: Vec<usize>,
    /// Disagreements in block (p, top).
    pub b: Vec<usize>,
    /// Agreements in block (top, p).
    pub c: Vec<usize>,
    /// Disagreements in block (top, p).
    pub d: Vec<usize>,
}

impl MoveDeltas {
    fn per_level(&self) -> impl Iterator<Item = (f64, f64, f64, f64, f64)> + '_ {
        (0..self.alphas.len()).map(|p| {
            (
                self.alphas[p],
                self.a[p] as f64,
                self.b[p] as f64,
                self.c[p] as f64,
                self.d[p] as f64,
            )
        })
    }

    pub fn delta1_closed_form(&self) -> f64 {
        let beta = self.beta;
        self.per_level()
            .map(|(al, a, b, c, d)| {
                (1.0 - beta) * (-(al / beta) * a + (al / beta) * b - c / al - d / al)
            })
            .sum()
    }

    pub fn delta2_closed_form(&self) -> f64 {
        let beta = self.beta;
        self.per_level()
            .map(|(al, a, b, c, d)| {
                let g = al * (1.0 + beta) / beta;
                g * a - g * b + (2.0 + beta / al - 1.0 / al) * c - (2.0 + 1.0 / al - beta / al) * d
            })
            .sum()
    }

    /// `(1 + beta) / (1 - beta) * delta1 + delta2`, the combination in which
    /// the `a` and `b` terms cancel.
    pub fn combined(&self) -> f64 {
        (1.0 + self.beta) / (1.0 - self.beta) * self.delta1 + self.delta2
    }

    /// Closed form of [`MoveDeltas::combined`]; it involves only `c` and `d`.
    pub fn combined_closed_form(&self) -> f64 {
        -self
            .per_level()
            .map(|(al, _, _, c, d)| 2.0 * (1.0 - al) / al * c + 2.0 * (1.0 + al) / al * d)
            .sum::<f64>()
    }

    /// True when every block pairing the top `u` level with a lower `v` level is empty.
    pub fn lower_blocks_empty(&self) -> bool {
        self.c.iter().chain(&self.d).all(|&x| x == 0)
    }
}

/// Rescales the off-top components by `factor` (`beta` or `-beta`). The
/// `beta` level lands exactly on magnitude 1.
fn apply_move(d: &LevelDecomposition, factor: f64) -> RankOneFactors {
    let top = d.k() - 1;
    let flip = factor.signum();
    let base = d.reconstruct();
    let u = base
        .u()
        .iter()
        .zip(&d.u_level)
        .zip(&d.u_sign)
        .map(|((&x, &l), &s)| match l {
            l if l == top => x,
            l if l + 1 == top => s * flip,
            _ => x / factor,
        })
        .collect();
    let v = base
        .v()
        .iter()
        .zip(&d.v_level)
        .zip(&d.v_sign)
        .map(|((&y, &l), &s)| match l {
            l if l == top => y,
            l if l + 1 == top => s * flip,
            _ => y * factor,
        })
        .collect();
    RankOneFactors::new(u, v).expect("finite")
}

/// Both deltas and the block counts for the pair described by `d`.
pub fn move_deltas(a: &SignMatrix, d: &LevelDecomposition) -> Result<MoveDeltas> {
    let k = d.k();
    if k < 2 {
        return Err(Error::NoOp("the pair already has a single level"));
    }
    let base = d.reconstruct();
    check_shape(a, &base)?;
    let top = k - 1;
    let beta = d.levels[k - 2];
    let (mut ca, mut cb, mut cc, mut cd) = (vec![0; top], vec![0; top], vec![0; top], vec![0; top]);
    for (i, &li) in d.u_level.iter().enumerate() {
        for (j, &lj) in d.v_level.iter().enumerate() {
            let agree = a.get(i, j) == d.u_sign[i] * d.v_sign[j];
            if li < top && lj == top {
                if agree {
                    ca[li] += 1
                } else {
                    cb[li] += 1
                }
            } else if li == top && lj < top {
                if agree {
                    cc[lj] += 1
                } else {
                    cd[lj] += 1
                }
            }
        }
    }
    let before = l1_error(a, &base)?;
    let delta1 = l1_error(a, &apply_move(d, beta))? - before;
    let delta2 = l1_error(a, &apply_move(d, -beta))? - before;
    Ok(MoveDeltas {
        delta1,
        delta2,
        alphas: d.levels[..top].to_vec(),
        beta,
        a: ca,
        b: cb,
        c: cc,
        d: cd,
    })
}

/// Applies Move 1 to the pair described by `d`.
pub fn move1(a: &SignMatrix, d: &LevelDecomposition) -> Result<(RankOneFactors, MoveDeltas)> {
    let deltas = move_deltas(a, d)?;
    Ok((apply_move(d, deltas.beta), deltas))
}

/// Applies Move 2 to the pair described by `d`.
pub fn move2(a: &SignMatrix, d: &LevelDecomposition) -> Result<(RankOneFactors, MoveDeltas)> {
    let deltas = move_deltas(a, d)?;
    Ok((apply_move(d, -deltas.beta), deltas))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundStep {
    pub applied: Move,
    /// Number of levels before the move.
    pub levels_before: usize,
    pub deltas: MoveDeltas,
    /// Objective after the move.
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignRound {
    pub factors: SignFactors,
    pub objective: f64,
    /// Objective of the input pair.
    pub start_objective: f64,
    /// Objective after zero repair, where the moves start.
    pub repaired_objective: f64,
    pub steps: Vec<RoundStep>,
    /// The moves reached a single level.
    pub path_completed: bool,
    /// The result came from direct sign rounding rather than the move path.
    pub fell_back: bool,
}

/// Rounds `f` to a sign pair. Zero components are repaired first; then
/// whichever move does not increase the objective (the smaller delta, Move 1
/// on ties) is applied until one level remains. If both moves would increase
/// the objective the path stops. The result is the best of the completed path
/// and the componentwise signs of the input and of the last pair on the path.
pub fn sign_round(a: &SignMatrix, f: &RankOneFactors) -> Result<SignRound> {
    check_shape(a, f)?;
    if f.is_zero() {
        return Err(Error::ZeroFactor("cannot round an all-zero factor"));
    }
    let start_objective = l1_error(a, f)?;
    let repaired = repair_zeros(a, f)?;
    let repaired_objective = l1_error(a, &repaired)?;
    let mut d = level_decompose(&repaired)?;
    let mut current = repaired_objective;
    let mut steps = Vec::new();
    while d.k() >= 2 {
        let deltas = move_deltas(a, &d)?;
        let slack = MOVE_SLACK * (1.0 + current.abs());
        let choice = if deltas.delta1 <= slack && deltas.delta1 <= deltas.delta2 {
            Move::One
        } else if deltas.delta2 <= slack {
            Move::Two
        } else {
            break;
        };
        let factor = match choice {
            Move::One => deltas.beta,
            Move::Two => -deltas.beta,
        };
        let moved = apply_move(&d, factor);
        current = l1_error(a, &moved)?;
        steps.push(RoundStep {
            applied: choice,
            levels_before: d.k(),
            deltas,
            objective: current,
        });
        d = level_decompose(&moved)?;
    }
    let path_completed = d.k() == 1;
    let last = d.reconstruct();

    let mut candidates: Vec<SignFactors> = Vec::with_capacity(3);
    if path_completed {
        candidates.push(SignFactors::rounded(&last));
    }
    candidates.push(SignFactors::rounded(f));
    candidates.push(SignFactors::rounded(&last));
    let mut best: Option<(f64, usize)> = None;
    for (idx, c) in candidates.iter().enumerate() {
        let obj = l1_error(a, c)?;
        if best.is_none_or(|(b, _)| obj < b) {
            best = Some((obj, idx));
        }
    }
    let (objective, idx) = best.expect("at least one candidate");
    Ok(SignRound {
        factors: candidates.swap_remove(idx),
        objective,
        start_objective,
        repaired_objective,
        steps,
        path_completed,
        fell_back: !(path_completed && idx == 0),
    })
}
