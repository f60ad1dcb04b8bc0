//! Integer search for the smallest sample size meeting the SE target.
//!
//! This is the reference the closed forms are checked against. The default
//! strategy walks the whole candidate range `[start_n, max_n]` the way the
//! original implementation does, evaluating the SE at every candidate and
//! reporting the first one at or below the target. A bracketed search
//! (exponential growth, then integer bisection) gives the same answer much
//! faster and is tested to agree exactly with the full scan.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{newcombe_se, DiscriminationInputs, SampleSizeResult, SolverMethod};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchStrategy {
    /// Evaluate every candidate in the range.
    #[default]
    Scan,
    /// Exponential bracketing followed by bisection over the integers.
    Bracketed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterativeConfig {
    pub max_n: u64,
    pub start_n: u64,
    pub strategy: SearchStrategy,
}

impl IterativeConfig {
    pub const DEFAULT_MAX_N: u64 = 1_000_000;
    pub const DEFAULT_START_N: u64 = 2;

    pub fn new(start_n: u64, max_n: u64, strategy: SearchStrategy) -> Result<Self> {
        let config = IterativeConfig {
            max_n,
            start_n,
            strategy,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn bracketed() -> Self {
        IterativeConfig {
            strategy: SearchStrategy::Bracketed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.start_n < 2 || self.start_n >= self.max_n {
            return Err(Error::InvalidConfig(format!(
                "need 2 <= start_n < max_n, got start_n = {}, max_n = {}",
                self.start_n, self.max_n
            )));
        }
        Ok(())
    }
}

impl Default for IterativeConfig {
    fn default() -> Self {
        IterativeConfig {
            max_n: Self::DEFAULT_MAX_N,
            start_n: Self::DEFAULT_START_N,
            strategy: SearchStrategy::Scan,
        }
    }
}

/// Smallest integer `N` in `[start_n, max_n]` whose SE meets or falls below
/// the target.
///
/// SE is compared directly rather than the implied CI width; the two are
/// equivalent for a symmetric interval and this avoids depending on the
/// precision of the normal quantile.
pub fn n_iterative(
    inputs: &DiscriminationInputs,
    config: &IterativeConfig,
) -> Result<SampleSizeResult> {
    config.validate()?;
    let n = match config.strategy {
        SearchStrategy::Scan => scan(inputs, config)?,
        SearchStrategy::Bracketed => bracketed(inputs, config)?,
    };
    Ok(SampleSizeResult {
        n_raw: n as f64,
        n,
        method: SolverMethod::Iterative,
        inputs: *inputs,
    })
}

fn se_at(inputs: &DiscriminationInputs, n: u64) -> f64 {
    newcombe_se(inputs.c(), inputs.phi(), n as f64)
}

fn ceiling_exceeded(inputs: &DiscriminationInputs, config: &IterativeConfig) -> Error {
    Error::CeilingExceeded {
        start_n: config.start_n,
        max_n: config.max_n,
        se_at_max: se_at(inputs, config.max_n),
    }
}

fn scan(inputs: &DiscriminationInputs, config: &IterativeConfig) -> Result<u64> {
    let target = inputs.se_target();
    let mut first = None;
    let mut qualifying = 0u64;
    for n in config.start_n..=config.max_n {
        let se = se_at(inputs, n);
        if se <= target {
            qualifying += 1;
            first.get_or_insert(n);
        }
    }
    let first = first.ok_or_else(|| ceiling_exceeded(inputs, config))?;
    // SE is decreasing in N, so every candidate past the first must qualify.
    if qualifying != config.max_n - first + 1 {
        return Err(Error::Inconsistent {
            method: SolverMethod::Iterative,
            what: "qualifying candidate count",
            value: qualifying as f64,
        });
    }
    Ok(first)
}

fn bracketed(inputs: &DiscriminationInputs, config: &IterativeConfig) -> Result<u64> {
    let target = inputs.se_target();
    let meets = |n: u64| se_at(inputs, n) <= target;

    if meets(config.start_n) {
        return Ok(config.start_n);
    }
    if !meets(config.max_n) {
        return Err(ceiling_exceeded(inputs, config));
    }

    // Invariant: `lo` fails, `hi` meets.
    let mut lo = config.start_n;
    let mut step = 1u64;
    let mut hi = loop {
        let probe = lo.saturating_add(step).min(config.max_n);
        if meets(probe) {
            break probe;
        }
        lo = probe;
        step = step.saturating_mul(2);
    };
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if meets(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
