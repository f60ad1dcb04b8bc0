//! Single-call latency measurements for the eight methods.

use std::collections::BTreeMap;
use std::hint::black_box;
use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::export::{csv_writer, write_json};
use crate::model::{DiscriminationInputs, SolverMethod};
use crate::oracle::{n_iterative, IterativeConfig};
use crate::solvers::n_raw;

pub const MIN_REPETITIONS: usize = 100;
pub const MIN_WARMUP: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub methods: Vec<SolverMethod>,
    pub repetitions: usize,
    pub warmup: usize,
    pub inputs: DiscriminationInputs,
    /// Search used when timing the iterative method.
    pub iterative: IterativeConfig,
}

impl BenchConfig {
    /// All eight methods at the first published example, 1,000 repetitions.
    pub fn new(methods: Vec<SolverMethod>) -> Self {
        BenchConfig {
            methods,
            repetitions: 1_000,
            warmup: 100,
            inputs: DiscriminationInputs::new(0.7, 0.1, 0.02551).expect("valid"),
            iterative: IterativeConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::InvalidConfig("no methods to benchmark".into()));
        }
        if self.repetitions < MIN_REPETITIONS {
            return Err(Error::InvalidConfig(format!(
                "repetitions must be at least {MIN_REPETITIONS}, got {}",
                self.repetitions
            )));
        }
        if self.warmup < MIN_WARMUP {
            return Err(Error::InvalidConfig(format!(
                "warmup must be at least {MIN_WARMUP}, got {}",
                self.warmup
            )));
        }
        self.iterative.validate()
    }
}

/// Nearest-rank five-number summary plus mean, in nanoseconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub min: u64,
    pub q1: u64,
    pub median: u64,
    pub q3: u64,
    pub max: u64,
    pub mean: f64,
}

/// Nearest-rank quantile of an ascending sample: the element at rank
/// `ceil(p * n)`, with `p = 0` giving the minimum.
pub fn nearest_rank(sorted: &[u64], p: f64) -> u64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let rank = (p * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

impl Summary {
    pub fn from_samples(samples: &[u64]) -> Self {
        let mut sorted = samples.to_vec();
        sorted.sort_unstable();
        let total: u128 = sorted.iter().map(|&s| u128::from(s)).sum();
        Summary {
            min: sorted[0],
            q1: nearest_rank(&sorted, 0.25),
            median: nearest_rank(&sorted, 0.5),
            q3: nearest_rank(&sorted, 0.75),
            max: sorted[sorted.len() - 1],
            mean: total as f64 / sorted.len() as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodTiming {
    pub method: SolverMethod,
    #[serde(skip)]
    pub samples_ns: Vec<u64>,
    #[serde(flatten)]
    pub summary: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub timings: Vec<MethodTiming>,
    pub repetitions: usize,
    pub warmup: usize,
    pub inputs: DiscriminationInputs,
    pub host: String,
    /// Smallest observed nonzero step of the clock.
    pub clock_resolution_ns: u64,
    pub warnings: Vec<String>,
}

impl BenchReport {
    pub fn timing(&self, method: SolverMethod) -> Option<&MethodTiming> {
        self.timings.iter().find(|t| t.method == method)
    }

    /// Raw samples as `method,sample_ns` CSV.
    pub fn write_samples_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv_writer(writer);
        out.write_record(["method", "sample_ns"])?;
        for timing in &self.timings {
            for sample in &timing.samples_ns {
                out.write_record([timing.method.name(), &sample.to_string()])?;
            }
        }
        out.flush()?;
        Ok(())
    }

    /// Per-method summaries with run metadata as JSON.
    pub fn write_summary_json<W: Write>(&self, writer: W) -> Result<()> {
        write_json(writer, self)
    }
}

fn host_descriptor() -> String {
    let cpus = std::thread::available_parallelism().map_or(1, |n| n.get());
    format!(
        "{}-{} ({} logical cpus), {} build",
        std::env::consts::ARCH,
        std::env::consts::OS,
        cpus,
        if cfg!(debug_assertions) {
            "debug"
        } else {
            "release"
        }
    )
}

/// Smallest nonzero difference between consecutive clock readings.
fn clock_resolution() -> Result<u64> {
    let mut best = u64::MAX;
    let mut last = Instant::now();
    for _ in 0..100_000 {
        let now = Instant::now();
        let step = now.duration_since(last).as_nanos() as u64;
        if step > 0 {
            best = best.min(step);
        }
        last = now;
    }
    if best == u64::MAX {
        return Err(Error::ClockUnavailable);
    }
    Ok(best)
}

fn call(
    method: SolverMethod,
    inputs: &DiscriminationInputs,
    iterative: &IterativeConfig,
) -> Result<f64> {
    if method == SolverMethod::Iterative {
        n_iterative(inputs, iterative).map(|r| r.n_raw)
    } else {
        n_raw(inputs, method)
    }
}

/// Times each method one call at a time. Methods run in the configured
/// order on the calling thread; warmup calls are not recorded.
pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    config.validate()?;
    let clock_resolution_ns = clock_resolution()?;
    let mut warnings = Vec::new();
    if clock_resolution_ns > 1_000 {
        warnings.push(format!(
            "clock resolution is {clock_resolution_ns} ns, coarser than 1 us"
        ));
    }

    let inputs = config.inputs;
    let mut timings = Vec::with_capacity(config.methods.len());
    for &method in &config.methods {
        let expected = call(method, &inputs, &config.iterative)?;
        for _ in 0..config.warmup {
            black_box(call(method, black_box(&inputs), &config.iterative)?);
        }
        let mut samples_ns = Vec::with_capacity(config.repetitions);
        for _ in 0..config.repetitions {
            let start = Instant::now();
            let value = black_box(call(method, black_box(&inputs), &config.iterative));
            let elapsed = start.elapsed();
            let value = value?;
            if value.to_bits() != expected.to_bits() {
                return Err(Error::Inconsistent {
                    method,
                    what: "timed result",
                    value,
                });
            }
            samples_ns.push(elapsed.as_nanos() as u64);
        }
        timings.push(MethodTiming {
            method,
            summary: Summary::from_samples(&samples_ns),
            samples_ns,
        });
    }

    Ok(BenchReport {
        timings,
        repetitions: config.repetitions,
        warmup: config.warmup,
        inputs,
        host: host_descriptor(),
        clock_resolution_ns,
        warnings,
    })
}

/// Ratio of the baseline's median latency to each method's median. Medians
/// below one nanosecond are treated as one nanosecond.
pub fn speedup_summary(
    report: &BenchReport,
    baseline: SolverMethod,
) -> Result<BTreeMap<SolverMethod, f64>> {
    let base = report
        .timing(baseline)
        .ok_or(Error::MissingBaseline(baseline))?;
    let base_median = base.summary.median.max(1) as f64;
    Ok(report
        .timings
        .iter()
        .map(|t| (t.method, base_median / t.summary.median.max(1) as f64))
        .collect())
}
