//! Reproduction drivers: the five published confirmation examples, grid
//! sweeps comparing every method against the integer search, and the
//! sample-size-versus-SE curve data.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::export::ResultRow;
use crate::model::{DiscriminationInputs, SolverMethod};
use crate::oracle::{n_iterative, IterativeConfig};
use crate::solvers::{n_raw, round_up};

/// Published confirmation examples: `(c, phi, se, N)`.
pub const TABLE1: [(f64, f64, f64, u64); 5] = [
    (0.7, 0.1, 0.02551, 1154),
    (0.8, 0.5, 0.02551, 302),
    (0.8, 0.018, 0.02551, 4252),
    (0.75, 0.018, 0.02551, 5125),
    (0.85, 0.018, 0.02551, 3271),
];

/// SE used throughout the published examples and grid.
pub const PAPER_SE: f64 = 0.02551;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Check {
    pub inputs: DiscriminationInputs,
    pub expected_n: u64,
    /// `None` where the method returned an error.
    pub n_by_method: BTreeMap<SolverMethod, Option<u64>>,
    pub pass: bool,
}

/// Runs every published example through all eight methods.
pub fn reproduce_table1() -> Vec<Table1Check> {
    reproduce_table1_with(&IterativeConfig::default())
}

pub fn reproduce_table1_with(iterative: &IterativeConfig) -> Vec<Table1Check> {
    TABLE1
        .iter()
        .map(|&(c, phi, se, expected_n)| {
            let inputs = DiscriminationInputs::new(c, phi, se).expect("published inputs are valid");
            let n_by_method: BTreeMap<_, _> = SolverMethod::ALL
                .into_iter()
                .map(|m| (m, evaluate(&inputs, m, iterative).ok().map(|(_, n)| n)))
                .collect();
            let pass = n_by_method.values().all(|n| *n == Some(expected_n));
            Table1Check {
                inputs,
                expected_n,
                n_by_method,
                pass,
            }
        })
        .collect()
}

fn evaluate(
    inputs: &DiscriminationInputs,
    method: SolverMethod,
    iterative: &IterativeConfig,
) -> Result<(f64, u64)> {
    if method == SolverMethod::Iterative {
        let r = n_iterative(inputs, iterative)?;
        Ok((r.n_raw, r.n))
    } else {
        let raw = n_raw(inputs, method)?;
        Ok((raw, round_up(raw)))
    }
}

/// Values `start, start + step, ...` up to `stop` inclusive.
///
/// Each value is built from an integer index as a ratio of integers over a
/// power of ten, so `0.01..0.50 by 0.01` yields exactly the doubles nearest
/// to the decimal values instead of accumulating addition error.
pub fn decimal_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 {
        return Err(Error::InvalidGrid(format!(
            "range {start}:{stop}:{step} needs finite bounds and a positive step"
        )));
    }
    if stop < start {
        return Err(Error::InvalidGrid(format!(
            "range {start}:{stop}:{step} is empty"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as u64 + 1;
    if count > 10_000_000 {
        return Err(Error::InvalidGrid(format!(
            "range {start}:{stop}:{step} is too long"
        )));
    }
    let decimals = (0..=15).find(|&d| {
        let scale = 10f64.powi(d);
        [start, step]
            .iter()
            .all(|v| ((v * scale) - (v * scale).round()).abs() <= 1e-9 * scale.max(1.0))
    });
    Ok(match decimals {
        Some(d) => {
            let scale = 10f64.powi(d);
            let start_units = (start * scale).round() as i64;
            let step_units = (step * scale).round() as i64;
            (0..count as i64)
                .map(|i| (start_units + i * step_units) as f64 / scale)
                .collect()
        }
        None => (0..count).map(|i| start + i as f64 * step).collect(),
    })
}

/// `count` evenly spaced values from `lo` to `hi` inclusive.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn linspace(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if count < 2 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidGrid(format!(
            "need lo < hi and count >= 2, got {lo}:{hi}:{count}"
        )));
    }
    let span = hi - lo;
    let last = count - 1;
    Ok((0..count)
        .map(|i| {
            if i == last {
                hi
            } else {
                lo + span * i as f64 / last as f64
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub c_values: Vec<f64>,
    pub phi_values: Vec<f64>,
    pub se_values: Vec<f64>,
    pub methods: Vec<SolverMethod>,
    /// Search used for the iterative method when it is requested.
    #[serde(default)]
    pub iterative: IterativeConfig,
}

impl GridSpec {
    pub fn new(
        c_values: Vec<f64>,
        phi_values: Vec<f64>,
        se_values: Vec<f64>,
        methods: Vec<SolverMethod>,
    ) -> Result<Self> {
        let spec = GridSpec {
            c_values,
            phi_values,
            se_values,
            methods,
            iterative: IterativeConfig::default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The 9 x 50 sensitivity grid: C from 0.55 to 0.95 by 0.05, phi from
    /// 0.01 to 0.50 by 0.01, SE fixed at 0.02551, all eight methods.
    pub fn paper() -> Self {
        GridSpec {
            c_values: decimal_grid(0.55, 0.95, 0.05).expect("static range"),
            phi_values: decimal_grid(0.01, 0.50, 0.01).expect("static range"),
            se_values: vec![PAPER_SE],
            methods: SolverMethod::ALL.to_vec(),
            iterative: IterativeConfig::default(),
        }
    }

    pub fn with_iterative(mut self, iterative: IterativeConfig) -> Self {
        self.iterative = iterative;
        self
    }

    pub fn point_count(&self) -> usize {
        self.c_values.len() * self.phi_values.len() * self.se_values.len()
    }

    pub fn validate(&self) -> Result<()> {
        check_axis("c", &self.c_values, |v| v > 0.0 && v < 1.0)?;
        check_axis("phi", &self.phi_values, |v| v > 0.0 && v < 1.0)?;
        check_axis("se", &self.se_values, |v| v > 0.0)?;
        if self.methods.is_empty() {
            return Err(Error::InvalidGrid("no methods requested".into()));
        }
        let distinct: BTreeSet<_> = self.methods.iter().collect();
        if distinct.len() != self.methods.len() {
            return Err(Error::InvalidGrid("duplicate method".into()));
        }
        if self.methods.contains(&SolverMethod::Iterative) {
            self.iterative.validate()?;
        }
        Ok(())
    }
}

fn check_axis(name: &str, values: &[f64], in_domain: impl Fn(f64) -> bool) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidGrid(format!("{name} axis is empty")));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite() || !in_domain(**v)) {
        return Err(Error::InvalidGrid(format!(
            "{name} value {v} is outside the domain"
        )));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidGrid(format!(
            "{name} axis has duplicate values"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub c: f64,
    pub phi: f64,
    pub se: f64,
    pub n_by_method: BTreeMap<SolverMethod, u64>,
    pub n_raw_by_method: BTreeMap<SolverMethod, f64>,
    /// Spread of the closed-form roots, `(max - min) / min`.
    pub n_raw_max_rel_diff: f64,
    /// Largest `|closed-form N - iterative N|`; present only when the
    /// iterative method was requested.
    pub oracle_abs_diff_max: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub spec: GridSpec,
    pub rows: Vec<SweepRow>,
    pub all_within_one: bool,
    pub max_pairwise_rel_diff: f64,
}

impl SweepReport {
    /// Long-format rows in sweep order, one per (grid point, method).
    pub fn result_rows(&self) -> Vec<ResultRow> {
        self.rows
            .iter()
            .flat_map(|row| {
                self.spec.methods.iter().map(move |&method| ResultRow {
                    method,
                    c: row.c,
                    phi: row.phi,
                    se: row.se,
                    n_raw: row.n_raw_by_method[&method],
                    n: row.n_by_method[&method],
                })
            })
            .collect()
    }
}

/// Evaluates every grid point with every requested method. Rows come out
/// C-major, then phi, then SE.
pub fn run_sweep(spec: &GridSpec) -> Result<SweepReport> {
    spec.validate()?;
    let mut rows = Vec::with_capacity(spec.point_count());
    for &c in &spec.c_values {
        for &phi in &spec.phi_values {
            for &se in &spec.se_values {
                rows.push(sweep_point(spec, c, phi, se)?);
            }
        }
    }
    let all_within_one = rows
        .iter()
        .all(|r| r.oracle_abs_diff_max.is_none_or(|d| d <= 1));
    let max_pairwise_rel_diff = rows
        .iter()
        .map(|r| r.n_raw_max_rel_diff)
        .fold(0.0, f64::max);
    Ok(SweepReport {
        spec: spec.clone(),
        rows,
        all_within_one,
        max_pairwise_rel_diff,
    })
}

fn sweep_point(spec: &GridSpec, c: f64, phi: f64, se: f64) -> Result<SweepRow> {
    let inputs = DiscriminationInputs::new(c, phi, se)?;
    let mut n_by_method = BTreeMap::new();
    let mut n_raw_by_method = BTreeMap::new();
    for &method in &spec.methods {
        let (raw, n) = evaluate(&inputs, method, &spec.iterative)?;
        n_by_method.insert(method, n);
        n_raw_by_method.insert(method, raw);
    }
    let closed: Vec<f64> = n_raw_by_method
        .iter()
        .filter(|(m, _)| m.is_closed_form())
        .map(|(_, &raw)| raw)
        .collect();
    let oracle_abs_diff_max = n_by_method.get(&SolverMethod::Iterative).map(|&oracle| {
        n_by_method
            .iter()
            .filter(|(m, _)| m.is_closed_form())
            .map(|(_, &n)| n.abs_diff(oracle))
            .max()
            .unwrap_or(0)
    });
    Ok(SweepRow {
        c,
        phi,
        se,
        n_by_method,
        n_raw_by_method,
        n_raw_max_rel_diff: relative_spread(&closed),
        oracle_abs_diff_max,
    })
}

/// `(max - min) / min` of a set of positive values; 0 for fewer than two.
pub fn relative_spread(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (hi - lo) / lo
}

/// Evenly spaced SE axis for curve generation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeRange {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl SeRange {
    /// Default axis, [0.01, 0.05] with 100 points.
    pub const DEFAULT: SeRange = SeRange {
        lo: 0.01,
        hi: 0.05,
        count: 100,
    };

    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn values(&self) -> Result<Vec<f64>> {
        if !(self.lo > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "SE range must start above 0, got {}",
                self.lo
            )));
        }
        linspace(self.lo, self.hi, self.count)
    }
}

/// Sample size against SE for a fixed C, one curve per (method, phi).
/// Rows are ordered by method, then phi, then increasing SE.
pub fn figure1_curves(
    c: f64,
    phi_values: &[f64],
    se_range: SeRange,
    methods: &[SolverMethod],
) -> Result<Vec<ResultRow>> {
    let se_values = se_range.values()?;
    let spec = GridSpec {
        c_values: vec![c],
        phi_values: phi_values.to_vec(),
        se_values,
        methods: methods.to_vec(),
        iterative: IterativeConfig::bracketed(),
    };
    spec.validate()?;
    let mut rows = Vec::with_capacity(spec.point_count() * methods.len());
    for &method in methods {
        for &phi in phi_values {
            for &se in &spec.se_values {
                let inputs = DiscriminationInputs::new(c, phi, se)?;
                let (n_raw, n) = evaluate(&inputs, method, &spec.iterative)?;
                rows.push(ResultRow {
                    method,
                    c,
                    phi,
                    se,
                    n_raw,
                    n,
                });
            }
        }
    }
    Ok(rows)
}

/// Largest relative spread of closed-form `n_raw` across methods at any
/// single (c, phi, se) point of a result set.
pub fn max_method_spread(rows: &[ResultRow]) -> f64 {
    let mut by_point: BTreeMap<(u64, u64, u64), Vec<f64>> = BTreeMap::new();
    for row in rows.iter().filter(|r| r.method.is_closed_form()) {
        by_point
            .entry((row.c.to_bits(), row.phi.to_bits(), row.se.to_bits()))
            .or_default()
            .push(row.n_raw);
    }
    by_point
        .values()
        .map(|v| relative_spread(v))
        .fold(0.0, f64::max)
}
