//! Closed-form inversions of the SE formula for `N`.
//!
//! Each function below is transcribed on its own from one published
//! rearrangement, using only its own local substitutions. They are kept
//! deliberately free of shared helpers so that comparing them against each
//! other actually tests something.

use crate::error::{Error, Result};
use crate::model::{DiscriminationInputs, SampleSizeResult, SolverMethod};
use crate::oracle::{n_iterative, IterativeConfig};

/// Roots closer than this to an integer are snapped to it before rounding up.
pub const SNAP_TOLERANCE: f64 = 1e-9;

fn checked(method: SolverMethod, n: f64) -> Result<f64> {
    if n.is_finite() && n > 0.0 {
        Ok(n)
    } else {
        Err(Error::Inconsistent {
            method,
            what: "N",
            value: n,
        })
    }
}

fn positive_radicand(method: SolverMethod, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::Inconsistent {
            method,
            what: "radicand",
            value,
        })
    }
}

/// Mathematica, compact form with `alpha = C-1`, `beta = 16(-2+C-2C^3+C^4) SE^2 phi`,
/// `mu = C alpha` and `delta = C + C^2 - 4C^3 + 2C^4`.
pub fn n_mathematica(inputs: &DiscriminationInputs) -> Result<f64> {
    let (c, phi, se) = (inputs.c(), inputs.phi(), inputs.se_target());
    let se2 = se * se;
    let alpha = c - 1.0;
    let beta = 16.0 * (-2.0 + c - 2.0 * c.powi(3) + c.powi(4)) * se2 * phi;
    let mu = c * alpha;
    let delta = c + c * c - 4.0 * c.powi(3) + 2.0 * c.powi(4);
    let radicand = positive_radicand(
        SolverMethod::Mathematica,
        mu * (beta + (1.0 - 2.0 * mu).powi(2) * mu - beta * phi),
    )?;
    let n =
        (delta + radicand.sqrt()) / (4.0 * se2 * (alpha - 1.0) * (alpha + 2.0) * (phi - 1.0) * phi);
    checked(SolverMethod::Mathematica, n)
}

/// Maxima, with `w = 16C(C-1)(C-2)(C+1)(C^2-C+1)`, `x = phi SE^2` and
/// `y = C(C-1)(2C^2-2C-1)`.
pub fn n_maxima(inputs: &DiscriminationInputs) -> Result<f64> {
    let (c, phi, se) = (inputs.c(), inputs.phi(), inputs.se_target());
    let w = 16.0 * c * (c - 1.0) * (c - 2.0) * (c + 1.0) * (c * c - c + 1.0);
    let x = phi * se * se;
    let y = c * (c - 1.0) * (2.0 * c * c - 2.0 * c - 1.0);
    let radicand = positive_radicand(SolverMethod::Maxima, -(w * x * phi) + y * y + w * x)?;
    let n = (y + radicand.sqrt()) / (4.0 * (c - 2.0) * (c + 1.0) * x * (phi - 1.0));
    checked(SolverMethod::Maxima, n)
}

/// Sonar, with `D = 4 SE^2 phi(1-phi)`, `alpha = (1-C)/(2-C)`, `beta = C/(1+C)`.
pub fn n_sonar(inputs: &DiscriminationInputs) -> Result<f64> {
    let (c, phi, se) = (inputs.c(), inputs.phi(), inputs.se_target());
    let d = 4.0 * se * se * phi * (1.0 - phi);
    let alpha = (1.0 - c) / (2.0 - c);
    let beta = c / (1.0 + c);
    let lead = c * (1.0 - c) * (alpha + beta);
    let radicand = positive_radicand(
        SolverMethod::Sonar,
        lead * lead + 4.0 * d * c * (1.0 - c) * (1.0 - (alpha + beta)),
    )?;
    let n = (lead + radicand.sqrt()) / d;
    checked(SolverMethod::Sonar, n)
}

/// GPT 4.1, with `gamma = (1-C)/(2-C) + C/(1+C)`.
pub fn n_gpt41(inputs: &DiscriminationInputs) -> Result<f64> {
    let (c, phi, se) = (inputs.c(), inputs.phi(), inputs.se_target());
    let gamma = (1.0 - c) / (2.0 - c) + c / (1.0 + c);
    let half = c * (1.0 - c) * gamma / 2.0;
    let radicand = positive_radicand(
        SolverMethod::Gpt41,
        half * half + 4.0 * se * se * phi * (1.0 - phi) * c * (1.0 - c) * (1.0 - gamma),
    )?;
    let n = (half + radicand.sqrt()) / (2.0 * se * se * phi * (1.0 - phi));
    checked(SolverMethod::Gpt41, n)
}

/// Grok 3 Beta: the GPT 4.1 root with `sqrt(C(1-C))` factored out of the
/// square root; `D` and `gamma` as for Sonar and GPT 4.1.
pub fn n_grok3(inputs: &DiscriminationInputs) -> Result<f64> {
    let (c, phi, se) = (inputs.c(), inputs.phi(), inputs.se_target());
    let d = 4.0 * se * se * phi * (1.0 - phi);
    let gamma = (1.0 - c) / (2.0 - c) + c / (1.0 + c);
    let cc = c * (1.0 - c);
    let radicand = positive_radicand(
        SolverMethod::Grok3Beta,
        cc * gamma * gamma - 4.0 * d * (gamma - 1.0),
    )?;
    let n = (cc.sqrt() * radicand.sqrt() + cc * gamma) / d;
    checked(SolverMethod::Grok3Beta, n)
}

/// Gemini 2.5 Pro, with `alpha = SE^2 phi(1-phi)`,
/// `beta = (1+2C-2C^2)/((2-C)(1+C))` and `gamma = C(1-C)`.
pub fn n_gemini(inputs: &DiscriminationInputs) -> Result<f64> {
    let (c, phi, se) = (inputs.c(), inputs.phi(), inputs.se_target());
    let alpha = se * se * phi * (1.0 - phi);
    let beta = (1.0 + 2.0 * c - 2.0 * c * c) / ((2.0 - c) * (1.0 + c));
    let gamma = c * (1.0 - c);
    let radicand = positive_radicand(
        SolverMethod::Gemini25Pro,
        gamma * gamma * beta * beta + 16.0 * alpha * gamma * (1.0 - beta),
    )?;
    let n = (gamma * beta + radicand.sqrt()) / (4.0 * alpha);
    checked(SolverMethod::Gemini25Pro, n)
}

/// Intermediate quantities of the MathGPT quadratic
/// `N^2 - (A delta / 2) N - A(1 - delta) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MathGptTerms {
    /// `(1-C)/(2-C) + C/(1+C)`, always in (1/2, 2/3].
    pub delta: f64,
    /// `C(1-C) / (SE^2 phi (1-phi))`.
    pub a: f64,
    /// `A^2 delta^2 + 16 A (1 - delta)`.
    pub radicand: f64,
    /// `A delta + sqrt(radicand)`.
    pub numerator: f64,
}

pub fn mathgpt_terms(inputs: &DiscriminationInputs) -> MathGptTerms {
    let (c, phi, se) = (inputs.c(), inputs.phi(), inputs.se_target());
    let delta = (1.0 - c) / (2.0 - c) + c / (1.0 + c);
    let a = c * (1.0 - c) / (se * se * phi * (1.0 - phi));
    let radicand = a * a * delta * delta + 16.0 * a * (1.0 - delta);
    MathGptTerms {
        delta,
        a,
        radicand,
        numerator: a * delta + radicand.sqrt(),
    }
}

/// MathGPT: `N = (A delta + sqrt(A^2 delta^2 + 16 A (1-delta))) / 4`.
/// The recommended default.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn n_mathgpt(inputs: &DiscriminationInputs) -> Result<f64> {
    let t = mathgpt_terms(inputs);
    let method = SolverMethod::MathGpt;
    // delta can round to exactly 1/2 only for c within ~1e-16 of 0 or 1.
    if !(0.5..=2.0 / 3.0 + f64::EPSILON).contains(&t.delta) {
        return Err(Error::Inconsistent {
            method,
            what: "delta",
            value: t.delta,
        });
    }
    // 16 A (1 - delta) > 0 keeps the radicand strictly above (A delta)^2,
    // so the chosen root never subtracts.
    if !(t.radicand > 0.0) || !(t.numerator >= t.a * t.delta) {
        return Err(Error::Inconsistent {
            method,
            what: "radicand",
            value: t.radicand,
        });
    }
    checked(method, t.numerator / 4.0)
}

/// Raw real-valued root by a closed-form method.
///
/// Returns `InvalidConfig` for [`SolverMethod::Iterative`], which has no
/// real-valued root; use [`solve`] or [`crate::oracle::n_iterative`].
pub fn n_raw(inputs: &DiscriminationInputs, method: SolverMethod) -> Result<f64> {
    match method {
        SolverMethod::Mathematica => n_mathematica(inputs),
        SolverMethod::Maxima => n_maxima(inputs),
        SolverMethod::Sonar => n_sonar(inputs),
        SolverMethod::Gpt41 => n_gpt41(inputs),
        SolverMethod::Grok3Beta => n_grok3(inputs),
        SolverMethod::Gemini25Pro => n_gemini(inputs),
        SolverMethod::MathGpt => n_mathgpt(inputs),
        SolverMethod::Iterative => Err(Error::InvalidConfig(
            "the iterative method has no closed-form root".into(),
        )),
    }
}

/// Rounds a root up to the next integer, snapping to the nearest integer
/// first when within [`SNAP_TOLERANCE`].
pub fn round_up(n_raw: f64) -> u64 {
    let nearest = n_raw.round();
    if (n_raw - nearest).abs() <= SNAP_TOLERANCE {
        nearest as u64
    } else {
        n_raw.ceil() as u64
    }
}

/// Computes the sample size with the given method. The iterative method runs
/// the full-budget search with its default configuration.
pub fn solve(inputs: &DiscriminationInputs, method: SolverMethod) -> Result<SampleSizeResult> {
    if method == SolverMethod::Iterative {
        return n_iterative(inputs, &IterativeConfig::default());
    }
    let n_raw = n_raw(inputs, method)?;
    Ok(SampleSizeResult {
        n_raw,
        n: round_up(n_raw),
        method,
        inputs: *inputs,
    })
}

/// Diagnostics that are not part of the solving API.
pub mod diagnostics {
    use crate::model::DiscriminationInputs;

    /// Both roots of the squared SE equation as returned by Mathematica,
    /// `(minus_root, plus_root)`. Only the second is a valid sample size.
    pub fn mathematica_roots(inputs: &DiscriminationInputs) -> (f64, f64) {
        let (c, phi, se) = (inputs.c(), inputs.phi(), inputs.se_target());
        let se2 = se * se;
        let z = ((c - 1.0)
            * c
            * ((c - 1.0) * c * (1.0 - 2.0 * (c - 1.0) * c).powi(2)
                + 16.0 * se2 * (-2.0 + c - 2.0 * c.powi(3) + c.powi(4)) * phi * (1.0 - phi)))
            .sqrt();
        let lead = c + c * c - 4.0 * c.powi(3) + 2.0 * c.powi(4);
        let den = 4.0 * se2 * (c - 2.0) * (c + 1.0) * (phi - 1.0) * phi;
        ((lead - z) / den, (lead + z) / den)
    }
}
