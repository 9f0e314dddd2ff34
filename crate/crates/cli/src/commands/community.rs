use rankone_core::community::{community_score, extract_community, BipartiteGraph, ExtractMode};
use rankone_core::io::parse_bipartite_or_matrix;
use rankone_core::{OracleConfig, SolverConfig};

use super::{read_text, self_check, with_path};
use crate::report::fmt_indices;
use crate::{CliResult, CommunityArgs, Report};

pub fn run(args: &CommunityArgs, echo: &str) -> CliResult<Report> {
    let g: BipartiteGraph = with_path(
        &args.input,
        parse_bipartite_or_matrix(&read_text(&args.input)?),
    )?;
    let mut r = Report::new(echo);
    r.field(
        "input",
        format!(
            "bipartite {}x{}, {} edges",
            g.left_size(),
            g.right_size(),
            g.num_edges()
        ),
    );
    let mode = if args.mode.exact {
        ExtractMode::Exact
    } else {
        ExtractMode::Heuristic
    };
    let cfg = SolverConfig::default().with_seed(args.search.seed);
    let c = extract_community(
        &g.biadjacency(),
        &cfg,
        &OracleConfig {
            cap: args.search.cap,
        },
        mode,
    )?;
    r.field(
        "method",
        match mode {
            ExtractMode::Exact => "exact enumeration",
            ExtractMode::Heuristic => "thresholded power iteration + alternating updates",
        },
    );
    r.field("left community", fmt_indices(&c.left));
    r.field("right community", fmt_indices(&c.right));
    r.field("mismatches", c.mismatches);
    let left: Vec<bool> = (0..g.left_size()).map(|i| c.left.contains(&i)).collect();
    let right: Vec<bool> = (0..g.right_size()).map(|j| c.right.contains(&j)).collect();
    let score = community_score(&g, &left, &right)?;
    r.field("3E - |S'||T'| - |E|", score.alt_score);
    self_check(
        r,
        score.mismatches == c.mismatches,
        "mismatch count differs from the edge count",
    )
}
