//! Acceptance gate. Each test covers one criterion and writes a single
//! `criterion N: PASS|FAIL ...` line to standard error (bypassing the test
//! harness capture) before asserting.

use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rankone_core::fixtures;
use rankone_core::heuristics::{
    l1_coordinate_descent, l1_sign_restarts, level_decompose, move2, power_iteration_rank1,
    sign_round, InitMode,
};
use rankone_core::objective::{bilinear, l0_error, l1_error};
use rankone_core::oracle::{
    bmf_rank1_exact, bmf_rank_r_exact, cut_norm_exact, inf1_norm_exact, l0_lra_rank1_exact,
    l1_lra_rank1_exact_sign,
};
use rankone_core::reductions::{
    binarize_pair, diag_lift, embed_cut, hadamard, maxcut_gadget, verify_gadget_threshold, PChoice,
    DEFAULT_GADGET_ENTRY_CAP,
};
use rankone_core::suites::{doubling_suite, random_sign, sign_identity_suite, sign_optimum_suite};
use rankone_core::{BinaryMatrix, DenseMatrix, Graph, OracleConfig, RankOneFactors, SolverConfig};

/// Allowed gap between the computed trap objective and 23.3.
const TRAP_TOLERANCE: f64 = 0.05;
/// Entrywise tolerance against the two-decimal Frobenius reference.
const DISPLAY_TOLERANCE: f64 = 0.005;
/// Relative slack for floating-point norm comparisons on real matrices.
const REAL_TOLERANCE: f64 = 1e-9;
/// Closed-form versus measured move deltas.
const DELTA_TOLERANCE: f64 = 1e-9;
/// Required share of heuristic runs that reach the exact optimum.
const HEURISTIC_TARGET: f64 = 0.80;

fn verdict(n: u32, ok: bool, detail: &str) {
    let line = format!(
        "criterion {n}: {} {detail}\n",
        if ok { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "criterion {n} failed: {detail}");
}

fn oracle() -> OracleConfig {
    OracleConfig::default()
}

fn random_binary(rng: &mut ChaCha8Rng, m: usize, n: usize) -> BinaryMatrix {
    BinaryMatrix::new(DenseMatrix::from_fn(m, n, |_, _| rng.random_range(0..2) as f64).unwrap())
        .unwrap()
}

#[test]
fn criterion_01_sign_trap() {
    let start = Instant::now();
    let a = fixtures::trap_matrix();
    let exact = l1_lra_rank1_exact_sign(&a, &oracle()).unwrap();
    let inf1 = inf1_norm_exact(&a, &oracle()).unwrap().value;

    let trap = fixtures::trap_stationary(fixtures::TRAP_LOCAL_MIN_X);
    let cfg = SolverConfig::default().with_init(InitMode::Given);
    let cd = l1_coordinate_descent(&a, &trap, &cfg).unwrap();
    let stalled = cd.factors == trap && cd.trace.iter().all(|&t| t == cd.trace[0]);

    let (escaped, _) = move2(&a, &level_decompose(&cd.factors).unwrap()).unwrap();
    let escaped_value = l1_error(&a, &escaped).unwrap();
    let rounded = sign_round(&a, &cd.factors).unwrap();
    let elapsed = start.elapsed();

    let ok = exact.value == 16.0
        && exact.value / 2.0 == 8.0
        && inf1 == 20.0
        && stalled
        && (cd.objective - 23.3).abs() <= TRAP_TOLERANCE
        && escaped_value == 16.0
        && rounded.objective == 16.0
        && elapsed < Duration::from_secs(1);
    verdict(
        1,
        ok,
        &format!(
            "l1 optimum {} ({} mismatches), inf1 {inf1}, descent stalls at {} (stalled={stalled}), move 2 gives {escaped_value}, rounding gives {}, {:?}",
            exact.value,
            exact.value / 2.0,
            cd.objective,
            rounded.objective,
            elapsed
        ),
    );
}

#[test]
fn criterion_02_single_community() {
    let start = Instant::now();
    let noisy = fixtures::community_perturbed();
    let bmf = bmf_rank1_exact(&noisy, &oracle()).unwrap();
    let l0 = l0_lra_rank1_exact(&noisy, &oracle()).unwrap();
    let f = bmf.factors();
    let expected = RankOneFactors::new(vec![1., 1., 1., 0.], vec![1., 1., 1., 1., 0.]).unwrap();

    let power = power_iteration_rank1(noisy.as_dense(), &SolverConfig::default()).unwrap();
    let l2 = power.factors.outer();
    let display = fixtures::community_l2_display();
    let deviation = l2
        .as_slice()
        .iter()
        .zip(display.as_slice())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let elapsed = start.elapsed();

    let ok = bmf.value == 3.0
        && l0.value == 3.0
        && f == expected
        && l0_error(&noisy, &expected).unwrap() == 3
        && expected.outer() == *fixtures::community_clean().as_dense()
        && deviation <= DISPLAY_TOLERANCE
        && elapsed < Duration::from_secs(1);
    verdict(
        2,
        ok,
        &format!(
            "bmf optimum {}, l0 optimum {}, u={:?} v={:?}, max Frobenius display deviation {deviation:.6}, {:?}",
            bmf.value,
            l0.value,
            f.u(),
            f.v(),
            elapsed
        ),
    );
}

#[test]
fn criterion_03_gadget() {
    let start = Instant::now();
    let edge = Graph::new(2, vec![(0, 1)]).unwrap();
    let small = maxcut_gadget(&edge, PChoice::Explicit(4), DEFAULT_GADGET_ENTRY_CAP).unwrap();
    let cut = embed_cut(&small, &[true, false]).unwrap();
    let edge_value = bilinear(small.matrix(), cut.u(), cut.v()).unwrap();
    let edge_threshold = 32.0 - 2.0 * 4f64.powf(1.5);
    let edge_ok =
        edge_value == 32.0 && small.d_star(1) == edge_threshold && edge_value >= edge_threshold;

    let triangle = Graph::new(3, vec![(0, 1), (0, 2), (1, 2)]).unwrap();
    let big = maxcut_gadget(&triangle, PChoice::Auto, DEFAULT_GADGET_ENTRY_CAP).unwrap();
    let p = big.p() as f64;
    let cut2 = embed_cut(&big, &[true, false, false]).unwrap();
    let value2 = bilinear(big.matrix(), cut2.u(), cut2.v()).unwrap();
    let bound2 = 2.0 * p * p * 2.0 - 9.0 * p.powf(1.5);
    let report = verify_gadget_threshold(&big, 3, &oracle()).unwrap();
    let elapsed = start.elapsed();

    let tri_ok = big.p() == 128
        && big.sound()
        && value2 >= bound2
        && !report.yes_instance
        && !report.embedded_reaches
        && report.passed();
    let ok = edge_ok && tri_ok && elapsed < Duration::from_secs(10);
    verdict(
        3,
        ok,
        &format!(
            "edge p=4: {edge_value} >= {edge_threshold}; triangle p={}: size-2 cut {value2} >= {bound2}, c*=3 embedded reaches d*: {}, {:?}",
            big.p(),
            report.embedded_reaches,
            elapsed
        ),
    );
}

#[test]
fn criterion_04_sign_identity() {
    let r = sign_identity_suite(200, 4, 6, 7).unwrap();
    verdict(
        4,
        r.passed() && r.trials >= 200,
        &format!(
            "{} matrices up to 6x7, {} checks, failures {:?}",
            r.trials, r.checks, r.failures
        ),
    );
}

#[test]
fn criterion_05_sandwich() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfg = oracle();
    let mut failures = Vec::new();
    let trials = 200;
    for t in 0..trials {
        let (m, n) = (rng.random_range(1..=6), rng.random_range(1..=6));
        let a = if t % 2 == 0 {
            random_sign(&mut rng, m, n).into_dense()
        } else {
            DenseMatrix::from_fn(m, n, |_, _| rng.random_range(-1.0..1.0)).unwrap()
        };
        let cut = cut_norm_exact(&a, &cfg).unwrap().value;
        let inf1 = inf1_norm_exact(&a, &cfg).unwrap().value;
        let slack = REAL_TOLERANCE * (1.0 + inf1.abs());
        if !(cut <= inf1 + slack && inf1 <= 4.0 * cut + slack) {
            failures.push(format!("trial {t}: cut {cut}, inf1 {inf1}"));
        }
    }
    verdict(
        5,
        failures.is_empty(),
        &format!("{trials} sign and real matrices up to 6x6, failures {failures:?}"),
    );
}

#[test]
fn criterion_06_doubling() {
    let r = doubling_suite(100, 6, 5).unwrap();
    verdict(
        6,
        r.passed() && r.trials >= 100,
        &format!(
            "{} sign matrices up to 5x5, {} checks, failures {:?}",
            r.trials, r.checks, r.failures
        ),
    );
}

#[test]
fn criterion_07_support_binarization() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let trials = 500;
    let mut failures = Vec::new();
    for t in 0..trials {
        let (m, n) = (rng.random_range(1..=6), rng.random_range(1..=6));
        let b = random_binary(&mut rng, m, n);
        let mut draw = |k: usize| -> Vec<f64> {
            (0..k)
                .map(|_| match rng.random_range(0..4) {
                    0 => 0.0,
                    1 => 1.0,
                    _ => rng.random_range(-3.0..3.0),
                })
                .collect()
        };
        let f = RankOneFactors::new(draw(m), draw(n)).unwrap();
        let before = l0_error(&b, &f).unwrap();
        let after = l0_error(&b, &binarize_pair(&f)).unwrap();
        if after > before {
            failures.push(format!("trial {t}: {before} -> {after}"));
        }
    }
    verdict(
        7,
        failures.is_empty(),
        &format!("{trials} real factor pairs up to 6x6, failures {failures:?}"),
    );
}

#[test]
fn criterion_08_sign_optimum_structure() {
    assert_eq!(rankone_core::suites::DELTA_TOLERANCE, DELTA_TOLERANCE);
    let (r, stats) = sign_optimum_suite(100, 8, 5, 10).unwrap();
    // Odd sides admit no optimal two-level pair, so the at-optimum move
    // conditions are also exercised on 6x6 instances.
    let (even, even_stats) = sign_optimum_suite(30, 18, 6, 10).unwrap();
    verdict(
        8,
        r.passed() && r.trials >= 100 && even.passed() && even_stats.optimal_perturbations > 0,
        &format!(
            "{} sign 5x5 matrices: {} two-level perturbations, {} checks, failures {:?}; {} sign 6x6 matrices: {} perturbations ({} optimal), failures {:?}",
            r.trials,
            stats.perturbations,
            r.checks,
            r.failures,
            even.trials,
            even_stats.perturbations,
            even_stats.optimal_perturbations,
            even.failures
        ),
    );
}

#[test]
fn criterion_09_hadamard() {
    let mut failures = Vec::new();
    for k in 0..=6 {
        let p = 1usize << k;
        let h = hadamard(p).unwrap();
        for a in 0..p {
            for b in 0..p {
                let dot: f64 = (0..p).map(|i| h.get(i, a) * h.get(i, b)).sum();
                if dot != if a == b { p as f64 } else { 0.0 } {
                    failures.push(format!("p={p}: column dot ({a}, {b}) = {dot}"));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for p in [8usize, 16] {
        let h = hadamard(p).unwrap();
        let bound = (p as f64).powf(1.5);
        for _ in 0..200 {
            let u: Vec<f64> = (0..p)
                .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
                .collect();
            let v: Vec<f64> = (0..p)
                .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
                .collect();
            let x = bilinear(&h, &u, &v).unwrap();
            if x.abs() > bound {
                failures.push(format!("p={p}: |u^T H v| = {x} > {bound}"));
            }
        }
    }
    verdict(
        9,
        failures.is_empty(),
        &format!(
            "orthogonality for p = 1..64, 200 sampled pairs for p = 8, 16, failures {failures:?}"
        ),
    );
}

#[test]
fn criterion_10_lifting() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let trials = 20;
    let mut failures = Vec::new();
    for t in 0..trials {
        let (m, n) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let b = random_binary(&mut rng, m, n);
        let single = bmf_rank1_exact(&b, &oracle()).unwrap().value as usize;
        let lifted = BinaryMatrix::new(diag_lift(b.as_dense(), 2).unwrap()).unwrap();
        let double = bmf_rank_r_exact(&lifted, 2).unwrap().value;
        if double != 2 * single {
            failures.push(format!(
                "trial {t}: rank-2 lifted {double}, rank-1 {single}"
            ));
        }
    }
    verdict(
        10,
        failures.is_empty(),
        &format!("{trials} binary matrices up to 3x3, failures {failures:?}"),
    );
}

#[test]
fn criterion_11_heuristic_quality() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let instances = 100;
    let mut hits = 0;
    let mut misses = Vec::new();
    for k in 0..instances {
        let a = random_sign(&mut rng, 6, 6);
        let exact = l1_lra_rank1_exact_sign(&a, &oracle()).unwrap().value;
        let cfg = SolverConfig::default()
            .with_restarts(20)
            .with_seed(k as u64);
        let found = l1_sign_restarts(&a, &cfg, None).unwrap().rounded.objective;
        if found == exact {
            hits += 1;
        } else {
            misses.push(format!("instance {k}: gap {}", found - exact));
        }
    }
    let rate = hits as f64 / instances as f64;
    for m in &misses {
        let _ = std::io::stderr().write_all(format!("  criterion 11 miss: {m}\n").as_bytes());
    }
    verdict(
        11,
        rate >= HEURISTIC_TARGET,
        &format!("{hits}/{instances} random 6x6 sign instances solved with 20 restarts (target {HEURISTIC_TARGET})"),
    );
}

#[test]
fn criterion_12_determinism() {
    let bin = env!("CARGO_BIN_EXE_rankone");
    let fixtures_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let fx = |name: &str| fixtures_dir.join(name).display().to_string();
    let invocations: Vec<Vec<String>> = vec![
        vec![
            "lra".into(),
            "--p".into(),
            "1".into(),
            "--heur".into(),
            "--in".into(),
            fx("trap6.txt"),
            "--init".into(),
            "random".into(),
            "--restarts".into(),
            "5".into(),
            "--seed".into(),
            "11".into(),
        ],
        vec![
            "norm".into(),
            "--kind".into(),
            "cut".into(),
            "--heur".into(),
            "--in".into(),
            fx("community.txt"),
            "--restarts".into(),
            "4".into(),
            "--seed".into(),
            "3".into(),
        ],
        vec![
            "verify".into(),
            "--what".into(),
            "theorem2".into(),
            "--trials".into(),
            "10".into(),
            "--seed".into(),
            "12".into(),
        ],
        vec![
            "community".into(),
            "--heur".into(),
            "--in".into(),
            fx("community.txt"),
            "--seed".into(),
            "5".into(),
        ],
        vec!["demo".into(), "remark2".into()],
    ];
    let mut failures = Vec::new();
    for args in &invocations {
        let run = || Command::new(bin).args(args).output().expect("binary runs");
        let (first, second) = (run(), run());
        if !first.status.success() || first.stdout.is_empty() {
            failures.push(format!("{args:?} exited with {:?}", first.status.code()));
        } else if first.stdout != second.stdout || first.status.code() != second.status.code() {
            failures.push(format!("{args:?} differs between runs"));
        }
    }
    verdict(
        12,
        failures.is_empty(),
        &format!(
            "{} invocations run twice, failures {failures:?}",
            invocations.len()
        ),
    );
}
