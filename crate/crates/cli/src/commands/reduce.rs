use rankone_core::io::{
    parse_factors, parse_graph, serialize_factors, serialize_matrix, serialize_matrix_with_comments,
};
use rankone_core::reductions::{
    binarize_pair, cutnorm_doubling, diag_lift, maxcut_gadget, DEFAULT_GADGET_ENTRY_CAP,
};

use super::{digest, parse_p, read_matrix, read_text, with_path, Output};
use crate::{CliError, CliResult, Construction, ReduceArgs, Report};

pub fn run(args: &ReduceArgs, echo: &str) -> CliResult<Output> {
    let mut r = Report::new(echo);
    let text = match args.what {
        Construction::Phi => {
            let f = with_path(&args.input, parse_factors(&read_text(&args.input)?))?;
            let b = binarize_pair(&f);
            r.field("construction", "support indicators of u and v");
            r.field("output", format!("factors {}x{}", b.m(), b.n()));
            serialize_factors(b.factors())
        }
        Construction::Double => {
            let a = read_matrix(&args.input)?;
            let d = cutnorm_doubling(&a);
            r.field("input", digest(&a));
            r.field("construction", "[A, -A; -A, A]");
            r.field("output", digest(&d));
            serialize_matrix(&d)
        }
        Construction::Lift => {
            let a = read_matrix(&args.input)?;
            let l = diag_lift(&a, args.r)?;
            r.field("input", digest(&a));
            r.field(
                "construction",
                format!("block diagonal with {} copies", args.r),
            );
            r.field("output", digest(&l));
            serialize_matrix(&l)
        }
        Construction::Gadget => {
            let g = with_path(&args.input, parse_graph(&read_text(&args.input)?))?;
            let inst = maxcut_gadget(&g, parse_p(&args.p)?, DEFAULT_GADGET_ENTRY_CAP)?;
            let meta = vec![
                format!("p={} sound={}", inst.p(), inst.sound()),
                format!(
                    "vertices={} edges={}",
                    inst.num_vertices(),
                    inst.num_edges()
                ),
                format!(
                    "d_star(c) = {} * c - {}",
                    inst.d_star_slope(),
                    inst.d_star_offset()
                ),
            ];
            r.field("construction", "MAX CUT gadget");
            r.field(
                "graph",
                format!(
                    "{} vertices, {} edges",
                    inst.num_vertices(),
                    inst.num_edges()
                ),
            );
            r.field("p", inst.p());
            r.field("sound", inst.sound());
            r.field("d_star slope", inst.d_star_slope());
            r.field("d_star offset", inst.d_star_offset());
            r.field("output", digest(inst.matrix()));
            serialize_matrix_with_comments(inst.matrix(), &meta)
        }
    };
    match &args.out {
        None => Ok(Output::Raw(text)),
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            r.field("written", path.display());
            Ok(Output::Report(r))
        }
    }
}
