use rankone_core::community::threshold_init;
use rankone_core::heuristics::{bmf_alternating, l1_restarts, l1_sign_restarts, InitMode};
use rankone_core::io::parse_factors;
use rankone_core::objective::{l0_error, l1_error};
use rankone_core::oracle::{bmf_rank1_exact, l1_lra_rank1_exact_sign};
use rankone_core::{
    BinaryMatrix, DenseMatrix, OracleConfig, RankOneFactors, SignMatrix, SolverConfig,
};

use super::{close, describe_step, digest, read_matrix, read_text, self_check, with_path};
use crate::report::fmt_vec;
use crate::{CliError, CliResult, LraArgs, Report};

pub fn run(args: &LraArgs, echo: &str) -> CliResult<Report> {
    let a = read_matrix(&args.input)?;
    let mut r = Report::new(echo);
    r.field("input", digest(&a));
    match args.p {
        0 => l0(args, a, r),
        _ => l1(args, a, r),
    }
}

fn l0(args: &LraArgs, a: DenseMatrix, mut r: Report) -> CliResult<Report> {
    r.field("objective kind", "l0 (number of mismatched entries)");
    let m = BinaryMatrix::new(a).map_err(|e| {
        CliError::Usage(format!(
            "--p 0 needs a 0/1 matrix; exact l0 over real factors reduces to binary factors only for binary inputs ({e})"
        ))
    })?;
    let (value, f) = if args.mode.exact {
        let res = bmf_rank1_exact(
            &m,
            &OracleConfig {
                cap: args.search.cap,
            },
        )?;
        r.field(
            "method",
            format!("exact enumeration ({} candidates)", res.enumerated),
        );
        (res.value, res.factors())
    } else {
        let cfg = SolverConfig::default().with_seed(args.search.seed);
        let init = threshold_init(&m, &cfg)?;
        let run = bmf_alternating(&m, &init, &cfg)?;
        r.field(
            "method",
            format!(
                "thresholded power iteration + alternating updates ({} sweeps)",
                run.sweeps
            ),
        );
        (run.objective as f64, run.factors.into_factors())
    };
    r.field("objective", value);
    r.field("u", fmt_vec(f.u()));
    r.field("v", fmt_vec(f.v()));
    let recheck = l0_error(&m, &f)? as f64;
    self_check(r, recheck == value, "l0 error at the certificate differs")
}

fn parse_init(args: &LraArgs) -> CliResult<(InitMode, Option<RankOneFactors>)> {
    match args.init.as_str() {
        "svd" => Ok((InitMode::Svd, None)),
        "random" => Ok((InitMode::Random, None)),
        other => match other.strip_prefix("file:") {
            Some(path) => {
                let path = std::path::Path::new(path);
                let f = with_path(path, parse_factors(&read_text(path)?))?;
                Ok((InitMode::Given, Some(f)))
            }
            None => Err(CliError::Usage(format!(
                "--init expects svd, random or file:PATH, got '{other}'"
            ))),
        },
    }
}

fn l1(args: &LraArgs, a: DenseMatrix, mut r: Report) -> CliResult<Report> {
    r.field("objective kind", "l1 (sum of absolute errors)");
    if args.mode.exact {
        let s = SignMatrix::new(a).map_err(|e| {
            CliError::Usage(format!(
                "--p 1 --exact needs a -1/+1 matrix; restricting to sign factors is exact only for sign inputs ({e})"
            ))
        })?;
        let res = l1_lra_rank1_exact_sign(
            &s,
            &OracleConfig {
                cap: args.search.cap,
            },
        )?;
        let f = res.factors();
        r.field(
            "method",
            format!(
                "exact enumeration over sign factors ({} candidates)",
                res.enumerated
            ),
        );
        r.field("objective", res.value);
        r.field("mismatches", res.value / 2.0);
        r.field("u", fmt_vec(f.u()));
        r.field("v", fmt_vec(f.v()));
        let recheck = l1_error(&s, &f)?;
        return self_check(
            r,
            recheck == res.value,
            "l1 error at the certificate differs",
        );
    }

    let (init_mode, given) = parse_init(args)?;
    if given.as_ref().is_some_and(|f| (f.m(), f.n()) != a.shape()) {
        return Err(CliError::Usage(format!(
            "initial factors do not match the {}x{} input",
            a.rows(),
            a.cols()
        )));
    }
    let cfg = SolverConfig::default()
        .with_restarts(args.search.restarts)
        .with_seed(args.search.seed)
        .with_init(init_mode);
    let init_name = if given.is_some() {
        "file"
    } else {
        args.init.as_str()
    };
    r.field(
        "method",
        format!(
            "coordinate descent (init {init_name}, restarts {}, seed {})",
            args.search.restarts, args.search.seed
        ),
    );

    if let Ok(s) = SignMatrix::new(a.clone()) {
        let out = l1_sign_restarts(&s, &cfg, given.as_ref())?;
        r.field("best restart", out.best_index + 1);
        r.field("descent objective", out.descent.objective);
        r.field("descent sweeps", out.descent.sweeps);
        r.field("descent restart events", out.descent.restart_events);
        r.field("descent u", fmt_vec(out.descent.factors.u()));
        r.field("descent v", fmt_vec(out.descent.factors.v()));
        let rounded = &out.rounded;
        if rounded.repaired_objective != rounded.start_objective {
            r.field("zero repair objective", rounded.repaired_objective);
        }
        for (k, step) in rounded.steps.iter().enumerate() {
            r.field(&format!("rounding step {}", k + 1), describe_step(step));
        }
        r.field(
            "rounding",
            if rounded.fell_back {
                "direct sign rounding (moves did not finish lower)"
            } else {
                "moves"
            },
        );
        r.field("objective", rounded.objective);
        r.field("mismatches", rounded.objective / 2.0);
        r.field("u", fmt_vec(rounded.factors.u()));
        r.field("v", fmt_vec(rounded.factors.v()));
        let recheck = l1_error(&s, rounded.factors.factors())?;
        let descent_check = l1_error(&s, &out.descent.factors)?;
        return self_check(
            r,
            recheck == rounded.objective && close(descent_check, out.descent.objective),
            "l1 error at a certificate differs",
        );
    }

    let out = l1_restarts(&a, &cfg, given.as_ref())?;
    r.field("best restart", out.best_index + 1);
    r.field("sweeps", out.best.sweeps);
    r.field("restart events", out.best.restart_events);
    r.field("objective", out.best.objective);
    r.field("u", fmt_vec(out.best.factors.u()));
    r.field("v", fmt_vec(out.best.factors.v()));
    let recheck = l1_error(&a, &out.best.factors)?;
    self_check(
        r,
        close(recheck, out.best.objective),
        "l1 error at the certificate differs",
    )
}
