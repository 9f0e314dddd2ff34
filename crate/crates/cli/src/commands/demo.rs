use rankone_core::fixtures;
use rankone_core::heuristics::{
    l1_coordinate_descent, power_iteration_rank1, sign_round, InitMode,
};
use rankone_core::io::serialize_matrix;
use rankone_core::objective::{l0_error, l1_error};
use rankone_core::oracle::{bmf_rank1_exact, inf1_norm_exact, l1_lra_rank1_exact_sign};
use rankone_core::{DenseMatrix, OracleConfig, SolverConfig};

use super::{describe_step, self_check};
use crate::report::fmt_vec;
use crate::{CliResult, DemoArgs, DemoName, Report};

/// Largest allowed gap between the computed Frobenius approximation and its
/// two-decimal reference rendering.
const DISPLAY_TOLERANCE: f64 = 0.005;

pub fn run(args: &DemoArgs, echo: &str) -> CliResult<Report> {
    let r = Report::new(echo);
    match args.name {
        DemoName::Community => community_demo(r),
        DemoName::Trap => trap_demo(r),
    }
}

/// Matrix rows without the dimension header.
fn body(m: &DenseMatrix) -> String {
    serialize_matrix(m)
        .lines()
        .skip(1)
        .collect::<Vec<_>>()
        .join("\n")
}

fn body_2dp(m: &DenseMatrix) -> String {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| format!("{x:.2}"))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn community_demo(mut r: Report) -> CliResult<Report> {
    let clean = fixtures::community_clean();
    let noisy = fixtures::community_perturbed();
    r.block("community matrix M", &body(clean.as_dense()));
    r.block("perturbed matrix M~", &body(noisy.as_dense()));

    let power = power_iteration_rank1(noisy.as_dense(), &SolverConfig::default())?;
    let l2 = power.factors.outer();
    let display = fixtures::community_l2_display();
    let deviation = l2
        .as_slice()
        .iter()
        .zip(display.as_slice())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    r.block(
        "best rank-one Frobenius approximation of M~",
        &body_2dp(&l2),
    );
    r.field("sigma_1", format!("{:.6}", power.sigma));
    r.field(
        "max deviation from the reference rendering",
        format!("{deviation:.6}"),
    );

    let exact = bmf_rank1_exact(&noisy, &OracleConfig::default())?;
    let f = exact.factors();
    r.field("l0 optimum (mismatches)", exact.value);
    r.field("u", fmt_vec(f.u()));
    r.field("v", fmt_vec(f.v()));
    r.field(
        "recovers the community of M",
        f == fixtures::community_factors(),
    );
    let ok = deviation <= DISPLAY_TOLERANCE
        && exact.value == 3.0
        && l0_error(&noisy, &f)? == 3
        && f == fixtures::community_factors();
    self_check(r, ok, "community demo values differ from the reference")
}

fn trap_demo(mut r: Report) -> CliResult<Report> {
    let a = fixtures::trap_matrix();
    r.block("sign matrix A", &body(a.as_dense()));
    let x = fixtures::TRAP_LOCAL_MIN_X;
    let trap = fixtures::trap_stationary(x);
    let trap_objective = l1_error(&a, &trap)?;
    r.field("stationary pair x", x);
    r.field("stationary u", fmt_vec(trap.u()));
    r.field("stationary v", fmt_vec(trap.v()));
    r.field("stationary objective", trap_objective);

    let cfg = SolverConfig::default().with_init(InitMode::Given);
    let cd = l1_coordinate_descent(&a, &trap, &cfg)?;
    let stalled = cd.factors == trap;
    r.field("coordinate descent sweeps", cd.sweeps);
    r.field("coordinate descent objective", cd.objective);
    r.field("coordinate descent moved", !stalled);

    let rounded = sign_round(&a, &cd.factors)?;
    for (k, step) in rounded.steps.iter().enumerate() {
        r.field(&format!("rounding step {}", k + 1), describe_step(step));
    }
    r.field("rounded objective", rounded.objective);
    r.field("rounded u", fmt_vec(rounded.factors.u()));
    r.field("rounded v", fmt_vec(rounded.factors.v()));

    let oracle = OracleConfig::default();
    let exact = l1_lra_rank1_exact_sign(&a, &oracle)?;
    let inf1 = inf1_norm_exact(&a, &oracle)?;
    r.field("l1 optimum", exact.value);
    r.field("inf1 norm", inf1.value);
    r.field("mn - inf1 norm", 36.0 - inf1.value);
    let ok = stalled
        && (trap_objective - 23.3).abs() <= 0.05
        && rounded.objective == 16.0
        && exact.value == 16.0
        && inf1.value == 20.0;
    self_check(r, ok, "trap demo values differ from the reference")
}
