//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cstat_sampsize::bench::{run_bench, speedup_summary, BenchConfig};
use cstat_sampsize::solvers::{diagnostics, mathgpt_terms, n_raw};
use cstat_sampsize::verify::{
    figure1_curves, max_method_spread, relative_spread, reproduce_table1, run_sweep, GridSpec,
    SeRange,
};
use cstat_sampsize::{se_c, solve, DiscriminationInputs, IterativeConfig, SolverMethod};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn inputs(c: f64, phi: f64, se: f64) -> DiscriminationInputs {
    DiscriminationInputs::new(c, phi, se).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed < limit
}

fn table1_reproduction() -> Outcome {
    let start = Instant::now();
    let checks = reproduce_table1();
    let elapsed = start.elapsed();
    let failed: Vec<_> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{:?} -> {:?}", c.inputs, c.n_by_method))
        .collect();
    let fast = within(elapsed, Duration::from_secs(1));
    outcome(
        failed.is_empty() && checks.len() == 5 && fast,
        format!(
            "{}/5 rows exact across 8 methods in {elapsed:.2?} (limit 1 s){}",
            checks.len() - failed.len(),
            if failed.is_empty() {
                String::new()
            } else {
                format!("; failed: {failed:?}")
            }
        ),
    )
}

fn raw_root() -> Outcome {
    let i = inputs(0.7, 0.1, 0.02551);
    let mut worst = 0.0f64;
    for method in SolverMethod::CLOSED {
        let n = n_raw(&i, method).unwrap();
        worst = worst.max((n - 1153.03).abs());
    }
    outcome(
        worst <= 0.005,
        format!("max |n_raw - 1153.03| = {worst:.6} (tol 0.005)"),
    )
}

fn rejected_root() -> Outcome {
    let (minus, _) = diagnostics::mathematica_roots(&inputs(0.7, 0.1, 0.02551));
    let err = (minus - -1.1116).abs();
    outcome(
        err <= 0.0005,
        format!("minus root = {minus:.6} (target -1.1116 +/- 0.0005)"),
    )
}

fn se_precision() -> Outcome {
    let mut bad = Vec::new();
    for method in SolverMethod::ALL {
        let a = solve(&inputs(0.85, 0.018, 0.0255), method).unwrap().n;
        let b = solve(&inputs(0.85, 0.018, 0.02551), method).unwrap().n;
        if (a, b) != (3274, 3271) {
            bad.push(format!("{method}: {a}/{b}"));
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "SE 0.0255 -> 3274, SE 0.02551 -> 3271 for all methods{}",
            fmt_bad(&bad)
        ),
    )
}

fn fmt_bad(bad: &[String]) -> String {
    if bad.is_empty() {
        String::new()
    } else {
        format!("; mismatches: {}", bad.join(", "))
    }
}

fn sweep_is_clean(report: &cstat_sampsize::verify::SweepReport) -> bool {
    report.rows.iter().all(|row| {
        row.n_raw_by_method
            .values()
            .all(|v| v.is_finite() && *v > 0.0)
            && row.oracle_abs_diff_max.is_some_and(|d| d <= 1)
    })
}

fn grid_agreement() -> Outcome {
    let spec = GridSpec::paper();
    let start = Instant::now();
    let scan = run_sweep(&spec).unwrap();
    let scan_time = start.elapsed();

    let start = Instant::now();
    let fast = run_sweep(&spec.clone().with_iterative(IterativeConfig::bracketed())).unwrap();
    let fast_time = start.elapsed();

    let identical = scan
        .rows
        .iter()
        .zip(&fast.rows)
        .all(|(a, b)| a.n_by_method == b.n_by_method);
    let worst = scan
        .rows
        .iter()
        .filter_map(|r| r.oracle_abs_diff_max)
        .max()
        .unwrap_or(0);
    let pass = scan.rows.len() == 450
        && scan.all_within_one
        && sweep_is_clean(&scan)
        && identical
        && within(scan_time, Duration::from_secs(30))
        && within(fast_time, Duration::from_secs(2));
    outcome(
        pass,
        format!(
            "{} points, max |closed - iterative| = {worst}, scan {scan_time:.2?} (limit 30 s), \
             bracketed {fast_time:.2?} (limit 2 s), strategies identical: {identical}",
            scan.rows.len()
        ),
    )
}

fn seven_way_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(20_251_018);
    let mut max_spread = 0.0f64;
    let mut max_round_trip = 0.0f64;
    let samples = 100_000;
    let mut roots = Vec::with_capacity(7);
    for _ in 0..samples {
        let c = rng.random_range(0.51..=0.99);
        let phi = rng.random_range(0.005..=0.5);
        let se = rng.random_range(0.005..=0.1);
        let i = inputs(c, phi, se);
        roots.clear();
        for method in SolverMethod::CLOSED {
            let n = n_raw(&i, method).unwrap();
            max_round_trip = max_round_trip.max(rel(se_c(c, phi, n).unwrap(), se));
            roots.push(n);
        }
        max_spread = max_spread.max(relative_spread(&roots));
    }
    let elapsed = start.elapsed();
    outcome(
        max_spread <= 1e-9 && max_round_trip <= 1e-10 && within(elapsed, Duration::from_secs(10)),
        format!(
            "{samples} inputs: max pairwise rel diff {max_spread:.2e} (tol 1e-9), \
             max round-trip rel err {max_round_trip:.2e} (tol 1e-10), {elapsed:.2?}"
        ),
    )
}

fn figure1_coincidence() -> Outcome {
    let start = Instant::now();
    let rows = figure1_curves(
        0.6,
        &[0.1, 0.2, 0.3, 0.4, 0.5],
        SeRange::DEFAULT,
        &SolverMethod::CLOSED,
    )
    .unwrap();
    let spread = max_method_spread(&rows);
    let elapsed = start.elapsed();
    let same_n = rows
        .chunks(rows.len() / 7)
        .all(|chunk| chunk.iter().zip(&rows).all(|(a, b)| a.n == b.n));
    outcome(
        spread <= 1e-9 && same_n && rows.len() == 7 * 5 * 100 && within(elapsed, Duration::from_secs(1)),
        format!("{} rows, max rel spread {spread:.2e} (tol 1e-9), integer N identical: {same_n}, {elapsed:.2?}", rows.len()),
    )
}

fn speedup() -> Outcome {
    let mut config = BenchConfig::new(SolverMethod::ALL.to_vec());
    config.repetitions = 1_000;
    config.warmup = 20;
    let report = run_bench(&config).unwrap();
    let ratios = speedup_summary(&report, SolverMethod::Iterative).unwrap();
    let slowest = SolverMethod::CLOSED
        .iter()
        .map(|m| (*m, ratios[m]))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let iter_median = report
        .timing(SolverMethod::Iterative)
        .unwrap()
        .summary
        .median;
    outcome(
        slowest.1 >= 1_000.0,
        format!(
            "iterative median {iter_median} ns; smallest closed-form speedup {:.0}x ({}) (need >= 1000x)",
            slowest.1, slowest.0
        ),
    )
}

fn symmetry_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(7_777);
    let (mut worst_c, mut worst_phi) = (0.0f64, 0.0f64);
    let mut delta_ok = true;
    for _ in 0..1_000 {
        let c = rng.random_range(0.01..0.99);
        let phi = rng.random_range(0.005..0.995);
        let se = rng.random_range(0.005..0.1);
        for method in SolverMethod::CLOSED {
            let base = n_raw(&inputs(c, phi, se), method).unwrap();
            worst_c = worst_c.max(rel(n_raw(&inputs(1.0 - c, phi, se), method).unwrap(), base));
            worst_phi = worst_phi.max(rel(n_raw(&inputs(c, 1.0 - phi, se), method).unwrap(), base));
        }
        let t = mathgpt_terms(&inputs(c, phi, se));
        delta_ok &= t.delta > 0.5
            && t.delta <= 2.0 / 3.0
            && t.radicand > 0.0
            && t.numerator >= t.a * t.delta;
    }
    let elapsed = start.elapsed();
    outcome(
        worst_c <= 1e-12
            && worst_phi <= 1e-12
            && delta_ok
            && within(elapsed, Duration::from_secs(1)),
        format!(
            "1000 points x 7 methods: C-symmetry {worst_c:.2e}, phi-symmetry {worst_phi:.2e} \
             (tol 1e-12), delta bound and radicand positivity: {delta_ok}, {elapsed:.2?}"
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("worked examples reproduction", table1_reproduction),
        ("raw root at (0.7, 0.1, 0.02551)", raw_root),
        ("rejected root", rejected_root),
        ("SE precision sensitivity", se_precision),
        ("450-point grid agreement", grid_agreement),
        ("seven-way equivalence", seven_way_equivalence),
        ("figure-1 curve coincidence", figure1_coincidence),
        ("speedup over iterative search", speedup),
        ("symmetry suite", symmetry_suite),
    ];

    let mut failures = 0;
    for (index, (name, run)) in criteria.iter().enumerate() {
        let result = run();
        if !result.pass {
            failures += 1;
        }
        println!(
            "{} criterion {}: {} -- {}",
            if result.pass { "PASS" } else { "FAIL" },
            index + 1,
            name,
            result.detail
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
