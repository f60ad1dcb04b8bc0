//! Minimum external-validation sample size for the C-statistic of a binary
//! prediction model.
//!
//! The sample size `N` is the smallest study size for which Newcombe's
//! standard error of the C-statistic falls to a target value. This crate
//! computes it directly from seven equivalent closed-form inversions of that
//! formula, checks them against the integer search they replace, and
//! provides drivers for reproduction sweeps and timing comparisons.
//!
//! ```
//! use cstat_sampsize::{solve, DiscriminationInputs, SolverMethod};
//!
//! let inputs = DiscriminationInputs::new(0.7, 0.1, 0.02551).unwrap();
//! let result = solve(&inputs, SolverMethod::MathGpt).unwrap();
//! assert_eq!(result.n, 1154);
//! ```

pub mod bench;
pub mod error;
pub mod export;
pub mod model;
pub mod oracle;
pub mod solvers;
pub mod verify;

pub use error::{Error, Result};
pub use model::{
    ci_width_to_se, normal_quantile, se_c, se_c_squared_expanded, se_c_squared_simplified,
    validate_inputs, ConfidenceSpec, DiscriminationInputs, SampleSizeResult, SolverMethod,
};
pub use oracle::{n_iterative, IterativeConfig, SearchStrategy};
pub use solvers::{n_raw, round_up, solve};
