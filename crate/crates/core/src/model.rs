//! Domain types and the forward standard-error formula.
//!
//! Newcombe's expression for the standard error of the C-statistic is
//!
//! ```text
//! SE(C) = sqrt( C(1-C) * (1 + (N/2 - 1)(1-C)/(2-C) + (N/2 - 1)C/(1+C)) / (N^2 phi (1-phi)) )
//! ```
//!
//! where `N` is the validation sample size and `phi` the anticipated outcome
//! event proportion. Everything else in the crate either inverts this
//! expression or checks an inversion against it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// A validated sample-size problem: anticipated C-statistic, outcome event
/// proportion and the target standard error of the C-statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInputs")]
pub struct DiscriminationInputs {
    c: f64,
    phi: f64,
    se_target: f64,
}

impl DiscriminationInputs {
    /// Validates and builds a problem. Values are stored verbatim; in
    /// particular `se_target` is never rounded.
    pub fn new(c: f64, phi: f64, se_target: f64) -> Result<Self> {
        validate_inputs(c, phi, se_target)
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn se_target(&self) -> f64 {
        self.se_target
    }
}

#[derive(Deserialize)]
struct RawInputs {
    c: f64,
    phi: f64,
    se_target: f64,
}

impl TryFrom<RawInputs> for DiscriminationInputs {
    type Error = Error;

    fn try_from(raw: RawInputs) -> Result<Self> {
        validate_inputs(raw.c, raw.phi, raw.se_target)
    }
}

/// Checks the open-interval constraints on `c` and `phi` and positivity of
/// the target SE.
pub fn validate_inputs(c: f64, phi: f64, se_target: f64) -> Result<DiscriminationInputs> {
    check_unit_open("c", c)?;
    check_unit_open("phi", phi)?;
    check_finite("se_target", se_target)?;
    if se_target <= 0.0 {
        return Err(Error::Domain {
            field: "se_target",
            value: se_target,
            bound: "se_target > 0",
        });
    }
    Ok(DiscriminationInputs { c, phi, se_target })
}

fn check_finite(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { field, value })
    }
}

fn check_unit_open(field: &'static str, value: f64) -> Result<()> {
    check_finite(field, value)?;
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            field,
            value,
            bound: "0 < value < 1",
        })
    }
}

fn check_sample_size(n: f64) -> Result<()> {
    check_finite("n", n)?;
    if n > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            field: "n",
            value: n,
            bound: "n > 0",
        })
    }
}

/// The eight computation routes: seven closed-form inversions and the
/// integer search they are checked against.
#[derive(
    Debug, Default, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum SolverMethod {
    Mathematica,
    Maxima,
    Sonar,
    Gpt41,
    Grok3Beta,
    Gemini25Pro,
    #[default]
    MathGpt,
    Iterative,
}

impl SolverMethod {
    pub const ALL: [SolverMethod; 8] = [
        SolverMethod::Mathematica,
        SolverMethod::Maxima,
        SolverMethod::Sonar,
        SolverMethod::Gpt41,
        SolverMethod::Grok3Beta,
        SolverMethod::Gemini25Pro,
        SolverMethod::MathGpt,
        SolverMethod::Iterative,
    ];

    pub const CLOSED: [SolverMethod; 7] = [
        SolverMethod::Mathematica,
        SolverMethod::Maxima,
        SolverMethod::Sonar,
        SolverMethod::Gpt41,
        SolverMethod::Grok3Beta,
        SolverMethod::Gemini25Pro,
        SolverMethod::MathGpt,
    ];

    pub fn is_closed_form(self) -> bool {
        self != SolverMethod::Iterative
    }

    /// Stable lower-case identifier used on the command line and in exports.
    pub fn name(self) -> &'static str {
        match self {
            SolverMethod::Mathematica => "mathematica",
            SolverMethod::Maxima => "maxima",
            SolverMethod::Sonar => "sonar",
            SolverMethod::Gpt41 => "gpt41",
            SolverMethod::Grok3Beta => "grok3beta",
            SolverMethod::Gemini25Pro => "gemini25pro",
            SolverMethod::MathGpt => "mathgpt",
            SolverMethod::Iterative => "iterative",
        }
    }
}

impl fmt::Display for SolverMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownMethod(pub String);

impl fmt::Display for UnknownMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = SolverMethod::ALL.iter().map(|m| m.name()).collect();
        write!(
            f,
            "unknown method `{}` (expected one of: {})",
            self.0,
            names.join(", ")
        )
    }
}

impl std::error::Error for UnknownMethod {}

impl FromStr for SolverMethod {
    type Err = UnknownMethod;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let wanted = s
            .trim()
            .to_ascii_lowercase()
            .replace(['-', '_', '.', ' '], "");
        SolverMethod::ALL
            .into_iter()
            .find(|m| m.name() == wanted)
            .ok_or_else(|| UnknownMethod(s.to_string()))
    }
}

/// Outcome of one sample-size computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSizeResult {
    /// Real-valued root of the SE equation. Equal to `n` for the iterative
    /// search.
    pub n_raw: f64,
    /// Reportable sample size, rounded up.
    pub n: u64,
    pub method: SolverMethod,
    pub inputs: DiscriminationInputs,
}

/// Target confidence-interval width for C and its confidence level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceSpec {
    ci_width: f64,
    level: f64,
}

impl ConfidenceSpec {
    pub const DEFAULT_LEVEL: f64 = 0.95;

    pub fn new(ci_width: f64, level: f64) -> Result<Self> {
        check_unit_open("ci_width", ci_width)?;
        check_unit_open("level", level)?;
        Ok(ConfidenceSpec { ci_width, level })
    }

    pub fn with_width(ci_width: f64) -> Result<Self> {
        Self::new(ci_width, Self::DEFAULT_LEVEL)
    }

    pub fn ci_width(&self) -> f64 {
        self.ci_width
    }

    pub fn level(&self) -> f64 {
        self.level
    }
}

/// Newcombe's standard error of the C-statistic for a sample of `n`.
pub fn se_c(c: f64, phi: f64, n: f64) -> Result<f64> {
    check_unit_open("c", c)?;
    check_unit_open("phi", phi)?;
    check_sample_size(n)?;
    let se = newcombe_se(c, phi, n);
    debug_assert!(se.is_finite() && se > 0.0, "se_c({c}, {phi}, {n}) = {se}");
    Ok(se)
}

/// Unchecked evaluation; callers guarantee `c`, `phi` in (0, 1) and `n > 0`.
#[inline]
pub(crate) fn newcombe_se(c: f64, phi: f64, n: f64) -> f64 {
    let half_less_one = n / 2.0 - 1.0;
    let bracket = 1.0 + half_less_one * ((1.0 - c) / (2.0 - c)) + half_less_one * c / (1.0 + c);
    // phi(1 - phi) grouped so that phi and 1 - phi give bit-identical results.
    (c * (1.0 - c) * bracket / (n * n * (phi * (1.0 - phi)))).sqrt()
}

/// Squared SE in the simplified single-fraction form obtained by clearing the
/// nested fractions. Algebraically equal to `se_c(c, phi, n)^2`.
pub fn se_c_squared_simplified(c: f64, phi: f64, n: f64) -> Result<f64> {
    check_unit_open("c", c)?;
    check_unit_open("phi", phi)?;
    check_sample_size(n)?;
    let num = (c - 1.0) * c * (2.0 * (c - 1.0) * c * (n - 1.0) - (n + 2.0));
    let den = 2.0 * (c - 2.0) * (c + 1.0) * n * n * (phi - 1.0) * phi;
    Ok(num / den)
}

/// Same as [`se_c_squared_simplified`] with the bracketed numerator factor
/// fully expanded as a polynomial in `c` and `n`.
pub fn se_c_squared_expanded(c: f64, phi: f64, n: f64) -> Result<f64> {
    check_unit_open("c", c)?;
    check_unit_open("phi", phi)?;
    check_sample_size(n)?;
    let num = (c - 1.0) * c * (2.0 * c * c * n - 2.0 * c * n - n - 2.0 * c * c + 2.0 * c - 2.0);
    let den = 2.0 * (c - 2.0) * (c + 1.0) * n * n * (phi - 1.0) * phi;
    Ok(num / den)
}

/// Standard-normal quantile.
pub fn normal_quantile(p: f64) -> f64 {
    Normal::standard().inverse_cdf(p)
}

/// Converts a two-sided normal-approximation CI width into the SE it implies:
/// `width / (2 z)` with `z` the `(1 + level) / 2` quantile.
pub fn ci_width_to_se(spec: &ConfidenceSpec) -> f64 {
    let z = normal_quantile((1.0 + spec.level) / 2.0);
    spec.ci_width / (2.0 * z)
}
