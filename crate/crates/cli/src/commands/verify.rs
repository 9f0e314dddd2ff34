use rankone_core::io::parse_graph;
use rankone_core::reductions::{
    maxcut_gadget, verify_gadget_threshold, Certification, DEFAULT_GADGET_ENTRY_CAP,
};
use rankone_core::suites::{doubling_suite, sign_identity_suite, sign_optimum_suite, SuiteReport};
use rankone_core::OracleConfig;

use super::{parse_p, read_text, with_path};
use crate::{CliError, CliResult, Property, Report, VerifyArgs};

/// Counterexamples printed per failing suite.
const MAX_DUMPS: usize = 10;

pub fn run(args: &VerifyArgs, echo: &str) -> CliResult<Report> {
    let mut r = Report::new(echo);
    if args.what != Property::Gadget && args.size == 0 {
        return Err(CliError::Usage("--size must be positive".into()));
    }
    let passed = match args.what {
        Property::Gadget => gadget(args, &mut r)?,
        Property::SignIdentity => {
            r.field("property", "min l1 = mn - inf1 norm, with matching parity");
            suite(
                &mut r,
                args,
                true,
                sign_identity_suite(args.trials, args.seed, args.size, args.size)?,
            )
        }
        Property::Doubling => {
            r.field(
                "property",
                "cut(B) = inf1(A), inf1(B) = 4 inf1(A), zero row/column sums of B",
            );
            suite(
                &mut r,
                args,
                true,
                doubling_suite(args.trials, args.seed, args.size)?,
            )
        }
        Property::SignOptimum => {
            r.field(
                "property",
                "sign optimum, move deltas, closed forms at two-level perturbations",
            );
            let (rep, stats) = sign_optimum_suite(args.trials, args.seed, args.size, 10)?;
            r.field("perturbations", stats.perturbations);
            r.field("optimal perturbations", stats.optimal_perturbations);
            suite(&mut r, args, false, rep)
        }
    };
    r.field("result", if passed { "PASS" } else { "FAIL" });
    if passed {
        Ok(r)
    } else {
        Err(CliError::Verify(r))
    }
}

fn suite(r: &mut Report, args: &VerifyArgs, up_to: bool, rep: SuiteReport) -> bool {
    r.field("trials", rep.trials);
    r.field("seed", args.seed);
    let size = format!("{0}x{0}", args.size);
    r.field("size", if up_to { format!("up to {size}") } else { size });
    r.field("checks", rep.checks);
    r.field("failures", rep.failures.len());
    for (k, f) in rep.failures.iter().take(MAX_DUMPS).enumerate() {
        r.field(&format!("counterexample {}", k + 1), f);
    }
    rep.passed()
}

fn gadget(args: &VerifyArgs, r: &mut Report) -> CliResult<bool> {
    let path = args
        .input
        .as_ref()
        .ok_or_else(|| CliError::Usage("--what gadget needs --in GRAPH".into()))?;
    let c_star = args
        .cstar
        .ok_or_else(|| CliError::Usage("--what gadget needs --cstar N".into()))?;
    let g = with_path(path, parse_graph(&read_text(path)?))?;
    let inst = maxcut_gadget(&g, parse_p(&args.p)?, DEFAULT_GADGET_ENTRY_CAP)?;
    let rep = verify_gadget_threshold(&inst, c_star, &OracleConfig::default())?;
    let side = |s: &[bool]| {
        let members: Vec<String> = (0..s.len())
            .filter(|&i| s[i])
            .map(|i| (i + 1).to_string())
            .collect();
        if members.is_empty() {
            "{}".to_string()
        } else {
            format!("{{{}}}", members.join(", "))
        }
    };
    r.field(
        "property",
        "max cut >= c* exactly when an embedded cut reaches d*(c*)",
    );
    r.field(
        "graph",
        format!(
            "{} vertices, {} edges",
            inst.num_vertices(),
            inst.num_edges()
        ),
    );
    r.field("p", rep.p);
    r.field("sound", rep.sound);
    r.field("c_star", rep.c_star);
    r.field("d_star", rep.d_star);
    r.field(
        "max cut",
        format!("{} with S = {}", rep.max_cut.size, side(&rep.max_cut.side)),
    );
    r.field("best embedded value", rep.best_embedded_value);
    r.field(
        "best embedded cut",
        format!(
            "{} with S = {}",
            rep.best_embedded_cut,
            side(&rep.best_embedded_side)
        ),
    );
    r.field("yes-instance", rep.yes_instance);
    r.field("embedded value reaches d_star", rep.embedded_reaches);
    r.field(
        "every embedded cut of size c reaches d*(c)",
        rep.lower_bound_holds,
    );
    match rep.certification {
        Certification::EmbeddingOnly => r.field("certification", "embedding-only"),
        Certification::Full { inf1, reaches } => r.field(
            "certification",
            format!("full (inf1 norm {inf1}, reaches d_star: {reaches})"),
        ),
    };
    if !rep.sound {
        r.field(
            "note",
            "p is below the soundness bound; only the forward direction is required",
        );
    }
    Ok(rep.passed())
}
