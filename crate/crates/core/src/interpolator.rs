//! Applying coefficients to data, the squared norm of the error functional,
//! and error sweeps over a `z` grid.

use serde::Serialize;

use crate::closed_form::{optimal_coefficients_with, CoefficientVector};
use crate::error::{Error, Result};
use crate::space_kernel::{discrete_operator_params, SpaceParams};

/// Values `φ(hβ)`, `β = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    params: SpaceParams,
    values: Vec<f64>,
}

impl SampleSet {
    pub fn new(params: SpaceParams, values: Vec<f64>) -> Result<Self> {
        let expected = params.n_intervals() + 1;
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        Ok(Self { params, values })
    }

    /// Samples `f` at the grid nodes.
    pub fn from_fn<F: Fn(f64) -> f64>(params: SpaceParams, f: F) -> Result<Self> {
        let values = (0..=params.n_intervals() as i64)
            .map(|beta| f(params.node(beta)))
            .collect();
        Self::new(params, values)
    }

    pub fn params(&self) -> &SpaceParams {
        &self.params
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `P_φ(z) = Σ_β C_β(z)·φ(hβ)`.
pub fn interpolate(samples: &SampleSet, coeffs: &CoefficientVector) -> Result<f64> {
    if samples.values.len() != coeffs.len() {
        return Err(Error::LengthMismatch {
            expected: samples.values.len(),
            found: coeffs.len(),
        });
    }
    Ok(samples
        .values
        .iter()
        .zip(&coeffs.coeffs)
        .map(|(v, c)| v * c)
        .sum())
}

/// `‖ℓ‖² = ΣΣ C_β C_γ G₂(x_β − x_γ) − 2 Σ C_β G₂(z − x_β)`.
///
/// Equals the squared norm only when the coefficients reproduce `sin ωx` and
/// `cos ωx`; the operator is fourth order, so the overall sign is `+`.
pub fn error_norm_squared(coeffs: &CoefficientVector, params: &SpaceParams) -> f64 {
    debug_assert_eq!(coeffs.len(), params.n_intervals() + 1);
    let c = &coeffs.coeffs;
    let nodes: Vec<f64> = (0..c.len()).map(|b| params.node(b as i64)).collect();
    let mut double = 0.0;
    for (beta, cb) in c.iter().enumerate() {
        let row: f64 = c
            .iter()
            .zip(&nodes)
            .map(|(cg, xg)| cg * params.green(nodes[beta] - xg))
            .sum();
        double += cb * row;
    }
    let single: f64 = c
        .iter()
        .zip(&nodes)
        .map(|(cb, xb)| cb * params.green(coeffs.z - xb))
        .sum();
    double - 2.0 * single
}

/// Test functions interpolated in the numerical experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunction {
    Square,
    Exp,
    Sine,
}

impl TestFunction {
    pub fn eval(self, z: f64) -> f64 {
        match self {
            TestFunction::Square => z * z,
            TestFunction::Exp => z.exp(),
            TestFunction::Sine => z.sin(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TestFunction::Square => "square",
            TestFunction::Exp => "exp",
            TestFunction::Sine => "sine",
        }
    }
}

/// `grid_size` equally spaced points on `[0, 1]`, both endpoints included.
pub fn z_grid(grid_size: usize) -> Vec<f64> {
    let last = (grid_size - 1) as f64;
    (0..grid_size).map(|i| i as f64 / last).collect()
}

/// Absolute errors and error-functional norms over a `z` grid for one `N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub omega: f64,
    pub n_intervals: usize,
    pub z_grid: Vec<f64>,
    pub abs_errors: Vec<f64>,
    pub norm_sq: Vec<f64>,
    pub max_abs_error: f64,
}

pub fn error_report<F: Fn(f64) -> f64>(
    f: F,
    params: &SpaceParams,
    grid_size: usize,
) -> Result<ErrorReport> {
    if grid_size < 2 {
        return Err(Error::Config(format!("grid size must be at least 2, got {grid_size}")));
    }
    let dop = discrete_operator_params(params)?;
    let samples = SampleSet::from_fn(*params, &f)?;
    let z_grid = z_grid(grid_size);
    let mut abs_errors = Vec::with_capacity(grid_size);
    let mut norm_sq = Vec::with_capacity(grid_size);
    for &z in &z_grid {
        let coeffs = optimal_coefficients_with(z, params, &dop)?;
        abs_errors.push((f(z) - interpolate(&samples, &coeffs)?).abs());
        norm_sq.push(error_norm_squared(&coeffs, params));
    }
    let max_abs_error = abs_errors.iter().copied().fold(0.0, f64::max);
    Ok(ErrorReport {
        omega: params.omega(),
        n_intervals: params.n_intervals(),
        z_grid,
        abs_errors,
        norm_sq,
        max_abs_error,
    })
}

/// One [`ErrorReport`] per entry of `params_list`, closed-form coefficients throughout.
pub fn convergence_report<F: Fn(f64) -> f64>(
    f: F,
    params_list: &[SpaceParams],
    grid_size: usize,
) -> Result<Vec<ErrorReport>> {
    params_list
        .iter()
        .map(|params| error_report(&f, params, grid_size))
        .collect()
}
