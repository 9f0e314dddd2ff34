//! Seeded randomized property suites. Each returns a report listing every
//! violated check with the instance that produced it.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::heuristics::{level_decompose, move_deltas};
use crate::io::serialize_matrix;
use crate::matrix::{DenseMatrix, RankOneFactors, SignMatrix};
use crate::objective::l1_error;
use crate::oracle::{cut_norm_exact, inf1_norm_exact, l1_lra_rank1_exact_sign, OracleConfig};
use crate::reductions::cutnorm_doubling;

/// Absolute tolerance for comparing closed-form and directly evaluated deltas.
pub const DELTA_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub trials: usize,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str, trials: usize) -> Self {
        Self {
            name,
            trials,
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(describe());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn random_sign(rng: &mut impl Rng, m: usize, n: usize) -> SignMatrix {
    let d = DenseMatrix::from_fn(m, n, |_, _| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
        .expect("positive dimensions");
    SignMatrix::new(d).expect("sign entries")
}

fn dump(a: &DenseMatrix) -> String {
    serialize_matrix(a).trim_end().replace('\n', " / ")
}

/// `min l1 = mn - ||A||_{inf->1}` and the parity of `||A||_{inf->1}` on
/// random sign matrices with up to `max_rows x max_cols` entries.
pub fn sign_identity_suite(
    trials: usize,
    seed: u64,
    max_rows: usize,
    max_cols: usize,
) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = OracleConfig::default();
    let mut report = SuiteReport::new("sign-identity", trials);
    for _ in 0..trials {
        let (m, n) = (
            rng.random_range(1..=max_rows),
            rng.random_range(1..=max_cols),
        );
        let a = random_sign(&mut rng, m, n);
        let l1 = l1_lra_rank1_exact_sign(&a, &cfg)?.value;
        let inf1 = inf1_norm_exact(&a, &cfg)?.value;
        let mn = (m * n) as f64;
        report.check(l1 == mn - inf1, || {
            format!("l1={l1}, mn-inf1={} for {}", mn - inf1, dump(&a))
        });
        report.check((inf1 as i64 - (m * n) as i64) % 2 == 0, || {
            format!("inf1={inf1} has the wrong parity for {}", dump(&a))
        });
    }
    Ok(report)
}

/// Doubling identities on random sign matrices up to `max_dim x max_dim`.
pub fn doubling_suite(trials: usize, seed: u64, max_dim: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = OracleConfig::default();
    let mut report = SuiteReport::new("doubling", trials);
    for _ in 0..trials {
        let (m, n) = (rng.random_range(1..=max_dim), rng.random_range(1..=max_dim));
        let a = random_sign(&mut rng, m, n);
        let b = cutnorm_doubling(&a);
        let inf1 = inf1_norm_exact(&a, &cfg)?.value;
        let cut_b = cut_norm_exact(&b, &cfg)?.value;
        let inf1_b = inf1_norm_exact(&b, &cfg)?.value;
        report.check(cut_b == inf1, || {
            format!("cut(B)={cut_b} != inf1(A)={inf1} for {}", dump(&a))
        });
        report.check(inf1_b == 4.0 * inf1, || {
            format!(
                "inf1(B)={inf1_b} != 4*inf1(A)={} for {}",
                4.0 * inf1,
                dump(&a)
            )
        });
        let zero = b.row_sums().iter().chain(&b.col_sums()).all(|&s| s == 0.0);
        report.check(zero, || {
            format!("nonzero row or column sum in doubling of {}", dump(&a))
        });
    }
    Ok(report)
}

/// Counters gathered by [`sign_optimum_suite`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SignOptimumStats {
    pub perturbations: usize,
    /// Perturbed pairs that were themselves optimal.
    pub optimal_perturbations: usize,
}

/// Structure of optimal l1 pairs of random `size x size` sign matrices.
///
/// For each matrix the oracle's optimum `(x, y)` must be a sign pair. A
/// two-level perturbation picks row and column subsets `P`, `Q` and a level
/// `0 < alpha < 1`, and forms `u = alpha x` on `P` and `v = y / alpha` on `Q`
/// (the pair that Move 1 maps back to `(x, y)`), and the same with `-alpha`
/// (undone by Move 2). Each matrix gets `per_matrix` random perturbations;
/// in addition every proper subset pair at `alpha = 1/2` is scanned and the
/// ones that stay optimal are checked as well. Checked for each:
/// - the perturbation is no better than the optimum;
/// - the measured deltas agree with their closed forms and with the
///   combined identity within [`DELTA_TOLERANCE`];
/// - neither move lands below the optimum;
/// - if the perturbed pair is itself optimal, both deltas are nonnegative,
///   the combination is nonpositive and the (top, p) blocks are empty.
///
/// A perturbation keeps the objective only if each perturbed full row or
/// column is balanced between matches and mismatches, so optimal two-level
/// pairs need an even side length. The subset scan is skipped above
/// `size = 6`.
pub fn sign_optimum_suite(
    trials: usize,
    seed: u64,
    size: usize,
    per_matrix: usize,
) -> Result<(SuiteReport, SignOptimumStats)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = OracleConfig::default();
    let mut report = SuiteReport::new("sign-optimum", trials);
    let mut stats = SignOptimumStats::default();
    for _ in 0..trials {
        let a = random_sign(&mut rng, size, size);
        let exact = l1_lra_rank1_exact_sign(&a, &cfg)?;
        let opt = exact.factors();
        report.check(opt.is_sign() && l1_error(&a, &opt)? == exact.value, || {
            format!("optimum not certified by a sign pair for {}", dump(&a))
        });
        let mut subsets: Vec<(Vec<bool>, Vec<bool>, f64)> = Vec::new();
        for _ in 0..per_matrix {
            let (rows, cols) = loop {
                let rows: Vec<bool> = (0..size).map(|_| rng.random_bool(0.5)).collect();
                let cols: Vec<bool> = (0..size).map(|_| rng.random_bool(0.5)).collect();
                // Perturbing nothing, or everything, leaves a single level.
                let touched = rows.iter().chain(&cols).filter(|&&b| b).count();
                if touched > 0 && touched < 2 * size {
                    break (rows, cols);
                }
            };
            subsets.push((rows, cols, rng.random_range(0.05..0.95)));
        }
        for (rows, cols, alpha) in &subsets {
            for signed in [*alpha, -*alpha] {
                check_perturbation(
                    &a,
                    &opt,
                    exact.value,
                    rows,
                    cols,
                    signed,
                    &mut report,
                    &mut stats,
                )?;
            }
        }
        if size <= 6 {
            let full = (1u32 << (2 * size)) - 1;
            for mask in 1..full {
                let rows: Vec<bool> = (0..size).map(|i| mask >> i & 1 == 1).collect();
                let cols: Vec<bool> = (0..size).map(|j| mask >> (size + j) & 1 == 1).collect();
                for signed in [0.5, -0.5] {
                    if l1_error(&a, &perturb(&opt, &rows, &cols, signed)?)?
                        <= exact.value + DELTA_TOLERANCE
                    {
                        check_perturbation(
                            &a,
                            &opt,
                            exact.value,
                            &rows,
                            &cols,
                            signed,
                            &mut report,
                            &mut stats,
                        )?;
                    }
                }
            }
        }
    }
    Ok((report, stats))
}

/// `alpha x` on `rows`, `y / alpha` on `cols`.
fn perturb(
    opt: &RankOneFactors,
    rows: &[bool],
    cols: &[bool],
    alpha: f64,
) -> Result<RankOneFactors> {
    let u = opt
        .u()
        .iter()
        .zip(rows)
        .map(|(&x, &p)| if p { x * alpha } else { x })
        .collect();
    let v = opt
        .v()
        .iter()
        .zip(cols)
        .map(|(&y, &q)| if q { y / alpha } else { y })
        .collect();
    RankOneFactors::new(u, v)
}

#[allow(clippy::too_many_arguments)]
fn check_perturbation(
    a: &SignMatrix,
    opt: &RankOneFactors,
    best: f64,
    rows: &[bool],
    cols: &[bool],
    signed: f64,
    report: &mut SuiteReport,
    stats: &mut SignOptimumStats,
) -> Result<()> {
    let tol = DELTA_TOLERANCE;
    stats.perturbations += 1;
    let f = perturb(opt, rows, cols, signed)?;
    let value = l1_error(a, &f)?;
    let ctx = || format!("alpha={signed} rows={rows:?} cols={cols:?} for {}", dump(a));
    report.check(value >= best - tol, || {
        format!(
            "perturbation beats the optimum ({value} < {best}); {}",
            ctx()
        )
    });
    let d = level_decompose(&f)?;
    report.check(d.k() == 2, || {
        format!("expected two levels, found {}; {}", d.k(), ctx())
    });
    if d.k() != 2 {
        return Ok(());
    }
    let deltas = move_deltas(a, &d)?;
    report.check(
        (deltas.delta1 - deltas.delta1_closed_form()).abs() <= tol,
        || {
            format!(
                "delta1 {} vs closed form {}; {}",
                deltas.delta1,
                deltas.delta1_closed_form(),
                ctx()
            )
        },
    );
    report.check(
        (deltas.delta2 - deltas.delta2_closed_form()).abs() <= tol,
        || {
            format!(
                "delta2 {} vs closed form {}; {}",
                deltas.delta2,
                deltas.delta2_closed_form(),
                ctx()
            )
        },
    );
    report.check(
        (deltas.combined() - deltas.combined_closed_form()).abs() <= tol,
        || {
            format!(
                "combination {} vs closed form {}; {}",
                deltas.combined(),
                deltas.combined_closed_form(),
                ctx()
            )
        },
    );
    let value = l1_error(a, &d.reconstruct())?;
    report.check(
        value + deltas.delta1 >= best - tol && value + deltas.delta2 >= best - tol,
        || format!("a move lands below the optimum; {}", ctx()),
    );
    if value <= best + tol {
        stats.optimal_perturbations += 1;
        report.check(
            deltas.delta1 >= -tol
                && deltas.delta2 >= -tol
                && deltas.combined() <= tol
                && deltas.lower_blocks_empty(),
            || {
                let mut s = String::new();
                let _ = write!(
                    s,
                    "optimal two-level pair violates the move conditions: {deltas:?}; {}",
                    ctx()
                );
                s
            },
        );
    }
    Ok(())
}
