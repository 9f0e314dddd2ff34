use rankone_core::heuristics::{cut_norm_heuristic, inf1_norm_heuristic};
use rankone_core::objective::bilinear;
use rankone_core::oracle::{cut_norm_exact, inf1_norm_exact};
use rankone_core::{OracleConfig, SolverConfig};

use super::{close, digest, read_matrix, self_check};
use crate::report::fmt_vec;
use crate::{CliResult, NormArgs, NormKind, Report};

pub fn run(args: &NormArgs, echo: &str) -> CliResult<Report> {
    let a = read_matrix(&args.input)?;
    let mut r = Report::new(echo);
    r.field("input", digest(&a));
    r.field(
        "norm",
        match args.kind {
            NormKind::Inf1 => "inf1 (max u^T A v over sign vectors)",
            NormKind::Cut => "cut (max |u^T A v| over 0/1 vectors)",
        },
    );
    let (value, u, v) = if args.mode.exact {
        let cfg = OracleConfig {
            cap: args.search.cap,
        };
        let res = match args.kind {
            NormKind::Inf1 => inf1_norm_exact(&a, &cfg)?,
            NormKind::Cut => cut_norm_exact(&a, &cfg)?,
        };
        r.field(
            "method",
            format!("exact enumeration ({} candidates)", res.enumerated),
        );
        r.field("value", res.value);
        (res.value, res.u_star, res.v_star)
    } else {
        let cfg = SolverConfig::default()
            .with_restarts(args.search.restarts)
            .with_seed(args.search.seed);
        let (method, b) = match args.kind {
            NormKind::Inf1 if a.is_sign() => (
                "coordinate descent + sign rounding; value = mn - l1",
                inf1_norm_heuristic(&a, &cfg)?,
            ),
            NormKind::Inf1 => (
                "coordinate descent + sign ascent",
                inf1_norm_heuristic(&a, &cfg)?,
            ),
            NormKind::Cut => ("alternating binary ascent", cut_norm_heuristic(&a, &cfg)?),
        };
        r.field(
            "method",
            format!(
                "{method} (restarts {}, seed {})",
                args.search.restarts, args.search.seed
            ),
        );
        r.field("value (lower bound)", b.value);
        (b.value, b.u, b.v)
    };
    r.field("u", fmt_vec(&u));
    r.field("v", fmt_vec(&v));
    let at = bilinear(&a, &u, &v)?;
    let at = if args.kind == NormKind::Cut {
        at.abs()
    } else {
        at
    };
    self_check(
        r,
        close(at, value),
        "certificate value differs from the reported value",
    )
}
