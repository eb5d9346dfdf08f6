//! Optimal interpolation formulas in the Hilbert space `K₂(P₂)` on `[0, 1]`.
//!
//! The space is semi-normed by `∫(φ'' + ω²φ)²`, so `sin ωx` and `cos ωx` have
//! zero norm and every optimal formula reproduces them exactly. For equally
//! spaced nodes `x_β = β/N` the optimal coefficients `C_β(z)` are available
//! two ways:
//!
//! * [`closed_form::optimal_coefficients`] evaluates them in closed form through
//!   the discrete analogue `D₂` of the operator `d⁴/dx⁴ + 2ω²d²/dx² + ω⁴`;
//! * [`linear_system::oracle_coefficients`] solves the bordered
//!   `(N+3)×(N+3)` system directly and serves as the reference.
//!
//! ```
//! use k2p2::{optimal_coefficients, interpolate, SampleSet, SpaceParams};
//!
//! let params = SpaceParams::new(1.0, 5).unwrap();
//! let samples = SampleSet::from_fn(params, f64::sin).unwrap();
//! let coeffs = optimal_coefficients(0.33, &params).unwrap();
//! let value = interpolate(&samples, &coeffs).unwrap();
//! assert!((value - 0.33f64.sin()).abs() < 1e-10);
//! ```

pub mod cli;
pub mod closed_form;
pub mod error;
pub mod interpolator;
pub mod linear_system;
pub mod space_kernel;

pub use closed_form::{
    boundary_solution, k_constants, optimal_coefficients, u2_extension, BoundarySolution,
    CoefficientVector, KConstants,
};
pub use error::{Error, Result};
pub use interpolator::{
    convergence_report, error_norm_squared, interpolate, ErrorReport, SampleSet, TestFunction,
};
pub use linear_system::{assemble_system, oracle_coefficients, solve_dense, DeterminingSystem};
pub use space_kernel::{
    discrete_operator_params, discrete_operator_value, green_kernel, make_space_params,
    verify_discrete_identity, DiscreteOperatorParams, SpaceParams,
};
