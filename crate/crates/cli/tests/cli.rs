use std::path::PathBuf;

use rankone_cli::{run, EXIT_CAP, EXIT_OK, EXIT_USAGE};
use rankone_core::io::{parse_matrix, serialize_matrix};
use rankone_core::DenseMatrix;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn rankone(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("rankone").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

/// Value of the first `key: value` line.
fn field<'a>(o: &'a Outcome, key: &str) -> &'a str {
    let prefix = format!("{key}: ");
    o.stdout
        .lines()
        .find_map(|l| l.strip_prefix(prefix.as_str()))
        .unwrap_or_else(|| panic!("no '{key}' in:\n{}", o.stdout))
}

fn num(o: &Outcome, key: &str) -> f64 {
    field(o, key).parse().unwrap()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn norm_exact_values() {
    let o = rankone(&[
        "norm",
        "--kind",
        "inf1",
        "--exact",
        "--in",
        &fixture("trap6.txt"),
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(num(&o, "value"), 20.0);
    assert_eq!(field(&o, "self-check"), "ok");
    assert!(o.stdout.starts_with("command: rankone norm --kind inf1"));

    let o = rankone(&[
        "norm",
        "--kind",
        "cut",
        "--exact",
        "--in",
        &fixture("ones3.txt"),
    ]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(num(&o, "value"), 9.0);
}

#[test]
fn norm_heuristic_is_a_lower_bound() {
    for (kind, file) in [
        ("inf1", "trap6.txt"),
        ("inf1", "community.txt"),
        ("cut", "trap6.txt"),
    ] {
        let exact = rankone(&["norm", "--kind", kind, "--exact", "--in", &fixture(file)]);
        let heur = rankone(&[
            "norm",
            "--kind",
            kind,
            "--heur",
            "--in",
            &fixture(file),
            "--restarts",
            "3",
        ]);
        assert_eq!(heur.code, EXIT_OK, "{}", heur.stderr);
        assert!(num(&heur, "value (lower bound)") <= num(&exact, "value"));
    }
}

#[test]
fn exact_above_cap_exits_2() {
    let o = rankone(&[
        "norm",
        "--kind",
        "inf1",
        "--exact",
        "--in",
        &fixture("trap6.txt"),
        "--cap",
        "3",
    ]);
    assert_eq!(o.code, EXIT_CAP);
    assert!(o.stderr.contains("--cap 6"), "{}", o.stderr);
    assert!(o.stdout.is_empty());
}

#[test]
fn lra_examples() {
    let o = rankone(&[
        "lra",
        "--p",
        "0",
        "--exact",
        "--in",
        &fixture("community.txt"),
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(num(&o, "objective"), 3.0);
    assert_eq!(field(&o, "u"), "1 1 1 0");

    let o = rankone(&[
        "lra",
        "--p",
        "0",
        "--heur",
        "--in",
        &fixture("community.txt"),
    ]);
    assert_eq!(num(&o, "objective"), 3.0);

    let o = rankone(&["lra", "--p", "1", "--exact", "--in", &fixture("trap6.txt")]);
    assert_eq!(num(&o, "objective"), 16.0);
    assert_eq!(num(&o, "mismatches"), 8.0);
}

#[test]
fn lra_trap_and_escape() {
    let init = format!("file:{}", fixture("trap6_stationary.txt"));
    let o = rankone(&[
        "lra",
        "--p",
        "1",
        "--heur",
        "--in",
        &fixture("trap6.txt"),
        "--init",
        &init,
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!((num(&o, "descent objective") - 23.3).abs() <= 0.05);
    assert_eq!(num(&o, "objective"), 16.0);
    assert!(field(&o, "rounding step 1").starts_with("move 2, levels 2 -> 1"));
}

#[test]
fn lra_domain_errors() {
    let o = rankone(&["lra", "--p", "0", "--exact", "--in", &fixture("trap6.txt")]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("0/1 matrix"));
    let o = rankone(&[
        "lra",
        "--p",
        "1",
        "--exact",
        "--in",
        &fixture("community.txt"),
    ]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("-1/+1"));
    let o = rankone(&["lra", "--p", "2", "--exact", "--in", &fixture("trap6.txt")]);
    assert_eq!(o.code, EXIT_USAGE);
    let o = rankone(&[
        "lra",
        "--p",
        "1",
        "--heur",
        "--in",
        &fixture("trap6.txt"),
        "--init",
        "bogus",
    ]);
    assert_eq!(o.code, EXIT_USAGE);
    let init = format!("file:{}", fixture("trap6_stationary.txt"));
    let o = rankone(&[
        "lra",
        "--p",
        "1",
        "--heur",
        "--in",
        &fixture("community.txt"),
        "--init",
        &init,
    ]);
    assert_eq!(o.code, EXIT_USAGE);
}

#[test]
fn lra_real_input_uses_plain_descent() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "real.txt", "2 3\n1.5 -2 0.25\n3 -4 0.5\n");
    let o = rankone(&[
        "lra",
        "--p",
        "1",
        "--heur",
        "--in",
        &path,
        "--restarts",
        "3",
        "--seed",
        "4",
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!(num(&o, "objective") < 1e-9);
}

#[test]
fn reduce_gadget_header() {
    let o = rankone(&[
        "reduce",
        "--what",
        "gadget",
        "--in",
        &fixture("triangle.graph"),
        "--p",
        "4",
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!(
        o.stdout.lines().any(|l| l == "# p=4 sound=false"),
        "{}",
        o.stdout
    );
    let m = parse_matrix(&o.stdout).unwrap();
    assert_eq!(m.shape(), (12, 12));
    assert!(m.is_sign());
}

#[test]
fn reduce_double_and_lift_to_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_temp(&dir, "a.txt", "2 3\n1 -2 0\n3 1 -1\n");
    let out = dir.path().join("d.txt").display().to_string();
    let o = rankone(&["reduce", "--what", "double", "--in", &a, "--out", &out]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let d = parse_matrix(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(d.shape(), (4, 6));
    assert!(d.row_sums().iter().chain(&d.col_sums()).all(|&s| s == 0.0));

    let o = rankone(&["reduce", "--what", "lift", "--in", &a, "--r", "2"]);
    let l = parse_matrix(&o.stdout).unwrap();
    assert_eq!(l.shape(), (4, 6));
    assert_eq!(l.get(2, 3), 1.0);
    assert_eq!(l.get(0, 3), 0.0);
}

#[test]
fn reduce_phi() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_temp(&dir, "f.txt", "3 2\n0 2.5 -1\n0.5 0\n");
    let o = rankone(&["reduce", "--what", "phi", "--in", &f]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let body: Vec<&str> = o.stdout.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body, ["3 2", "0 1 1", "1 0"]);
}

#[test]
fn verify_suites_pass() {
    for what in ["lemma3", "doubling", "theorem2"] {
        let o = rankone(&["verify", "--what", what, "--trials", "20", "--seed", "1"]);
        assert_eq!(o.code, EXIT_OK, "{what}: {}", o.stdout);
        assert_eq!(field(&o, "result"), "PASS");
        assert_eq!(field(&o, "failures"), "0");
    }
}

#[test]
fn verify_gadget() {
    let o = rankone(&[
        "verify",
        "--what",
        "gadget",
        "--in",
        &fixture("edge.graph"),
        "--cstar",
        "1",
        "--p",
        "4",
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stdout);
    assert_eq!(field(&o, "best embedded value"), "32");
    assert_eq!(field(&o, "result"), "PASS");

    let o = rankone(&[
        "verify",
        "--what",
        "gadget",
        "--in",
        &fixture("triangle.graph"),
        "--cstar",
        "3",
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stdout);
    assert_eq!(field(&o, "p"), "128");
    assert_eq!(field(&o, "embedded value reaches d_star"), "false");

    let o = rankone(&["verify", "--what", "gadget", "--cstar", "1"]);
    assert_eq!(o.code, EXIT_USAGE);
}

#[test]
fn community_command() {
    for mode in ["--exact", "--heur"] {
        let o = rankone(&["community", mode, "--in", &fixture("community.txt")]);
        assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
        assert_eq!(field(&o, "left community"), "1 2 3");
        assert_eq!(field(&o, "right community"), "1 2 3 4");
        assert_eq!(num(&o, "mismatches"), 3.0);
    }
    let dir = tempfile::tempdir().unwrap();
    let g = write_temp(&dir, "g.txt", "2 2 3\n1 1\n1 2\n2 1\n");
    let o = rankone(&["community", "--exact", "--in", &g]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(num(&o, "mismatches"), 1.0);
}

#[test]
fn demos() {
    let o = rankone(&["demo", "example1"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stdout);
    assert_eq!(num(&o, "l0 optimum (mismatches)"), 3.0);
    assert!(num(&o, "max deviation from the reference rendering") <= 0.005);

    let o = rankone(&["demo", "remark2"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stdout);
    assert!((num(&o, "stationary objective") - 23.3).abs() <= 0.05);
    assert_eq!(num(&o, "rounded objective"), 16.0);
    assert_eq!(field(&o, "coordinate descent moved"), "false");

    let o = rankone(&["demo", "bogus"]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_errors() {
    assert_eq!(rankone(&[]).code, EXIT_USAGE);
    assert_eq!(
        rankone(&["norm", "--kind", "inf1", "--in", &fixture("trap6.txt")]).code,
        EXIT_USAGE
    );
    assert_eq!(
        rankone(&[
            "norm",
            "--kind",
            "inf1",
            "--exact",
            "--heur",
            "--in",
            &fixture("trap6.txt")
        ])
        .code,
        EXIT_USAGE
    );
    let missing = rankone(&[
        "norm",
        "--kind",
        "inf1",
        "--exact",
        "--in",
        "/nonexistent/m.txt",
    ]);
    assert_eq!(missing.code, EXIT_USAGE);
    assert!(missing.stderr.contains("cannot read"));
    assert_eq!(
        rankone(&["--threads", "0", "demo", "remark2"]).code,
        EXIT_USAGE
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = write_temp(&dir, "bad.txt", "2 2\n1 x\n1 1\n");
    let o = rankone(&["norm", "--kind", "cut", "--exact", "--in", &bad]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(
        o.stderr.contains("bad.txt") && o.stderr.contains("line 2"),
        "{}",
        o.stderr
    );

    let help = rankone(&["--help"]);
    assert_eq!(help.code, EXIT_OK);
    assert!(help.stdout.contains("Usage"));
}

#[test]
fn threads_and_timing() {
    let base = rankone(&[
        "norm",
        "--kind",
        "inf1",
        "--exact",
        "--in",
        &fixture("trap6.txt"),
    ]);
    let threaded = rankone(&[
        "--threads",
        "2",
        "norm",
        "--kind",
        "inf1",
        "--exact",
        "--in",
        &fixture("trap6.txt"),
    ]);
    assert_eq!(field(&base, "value"), field(&threaded, "value"));
    assert!(!base.stdout.contains("wall time"));
    let timed = rankone(&["--timing", "demo", "example1"]);
    assert!(field(&timed, "wall time").ends_with(" s"));
}

#[test]
fn seeded_reports_repeat() {
    let args = [
        "lra",
        "--p",
        "1",
        "--heur",
        "--init",
        "random",
        "--restarts",
        "4",
        "--seed",
        "9",
    ];
    let file = fixture("trap6.txt");
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--in", file.as_str()]);
    assert_eq!(rankone(&full).stdout, rankone(&full).stdout);
}

#[test]
fn reduce_output_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let a = DenseMatrix::from_rows(&[[1.0, -1.0], [-1.0, -1.0]]).unwrap();
    let path = write_temp(&dir, "a.txt", &serialize_matrix(&a));
    let o = rankone(&["reduce", "--what", "double", "--in", &path]);
    assert_eq!(parse_matrix(&o.stdout).unwrap().get(0, 2), -1.0);
}
