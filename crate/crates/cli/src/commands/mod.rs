mod community;
mod demo;
mod lra;
mod norm;
mod reduce;
mod verify;

use std::path::Path;

use rankone_core::heuristics::{Move, RoundStep};
use rankone_core::io::parse_matrix;
use rankone_core::reductions::PChoice;
use rankone_core::DenseMatrix;

use crate::{CliError, CliResult, Command, Report};

pub enum Output {
    Report(Report),
    /// Constructed file content written verbatim.
    Raw(String),
}

pub fn dispatch(command: &Command, echo: &str) -> CliResult<Output> {
    match command {
        Command::Norm(a) => norm::run(a, echo).map(Output::Report),
        Command::Lra(a) => lra::run(a, echo).map(Output::Report),
        Command::Reduce(a) => reduce::run(a, echo),
        Command::Verify(a) => verify::run(a, echo).map(Output::Report),
        Command::Community(a) => community::run(a, echo).map(Output::Report),
        Command::Demo(a) => demo::run(a, echo).map(Output::Report),
    }
}

pub(crate) fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

/// Reads a matrix file, prefixing parse errors with the file name.
pub(crate) fn read_matrix(path: &Path) -> CliResult<DenseMatrix> {
    parse_matrix(&read_text(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub(crate) fn with_path<T>(path: &Path, r: rankone_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| match e {
        e @ rankone_core::Error::Parse { .. } => {
            CliError::Usage(format!("{}: {e}", path.display()))
        }
        other => other.into(),
    })
}

/// `6x6 sign`, `4x5 binary` or `3x3 real`.
pub(crate) fn digest(m: &DenseMatrix) -> String {
    let domain = if m.is_sign() {
        "sign"
    } else if m.is_binary() {
        "binary"
    } else {
        "real"
    };
    format!("{}x{} {domain}", m.rows(), m.cols())
}

pub(crate) fn parse_p(text: &str) -> CliResult<PChoice> {
    if text == "auto" {
        return Ok(PChoice::Auto);
    }
    text.parse::<usize>().map(PChoice::Explicit).map_err(|_| {
        CliError::Usage(format!(
            "--p expects a power of two or 'auto', got '{text}'"
        ))
    })
}

/// Records the outcome of re-evaluating a certificate; a mismatch fails the command.
pub(crate) fn self_check(mut report: Report, ok: bool, what: &str) -> CliResult<Report> {
    if ok {
        report.field("self-check", "ok");
        Ok(report)
    } else {
        report.field("self-check", format!("FAILED ({what})"));
        Err(CliError::Verify(report))
    }
}

/// Equality up to a relative rounding margin.
pub(crate) fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

/// One rounding move with both deltas and the resulting objective.
pub(crate) fn describe_step(step: &RoundStep) -> String {
    let name = match step.applied {
        Move::One => "move 1",
        Move::Two => "move 2",
    };
    format!(
        "{name}, levels {} -> {}, delta1 {}, delta2 {}, objective {}",
        step.levels_before,
        step.levels_before - 1,
        step.deltas.delta1,
        step.deltas.delta2,
        step.objective
    )
}
