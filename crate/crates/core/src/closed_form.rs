//! Closed-form optimal coefficients for equally spaced nodes.
//!
//! The coefficients are the lattice convolution `C_β(z) = D₂(hβ) * u₂(hβ)`,
//! where `u₂(hβ) = G₂(z − hβ)` on the grid and continues outside it as a
//! trigonometric-plus-linear function with two unknown multipliers `d₁⁻`, `d₁⁺`.
//! Requiring `C_{−1}(z) = C_{N+1}(z) = 0` yields a 2×2 system for them; every
//! infinite sum that appears is a geometric series in `λ` and is summed in
//! closed form.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::space_kernel::{discrete_operator_params, DiscreteOperatorParams, SpaceParams};

/// Optimal coefficients `C₀(z)…C_N(z)` at one evaluation point.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    pub z: f64,
    pub coeffs: Vec<f64>,
}

impl CoefficientVector {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `(Σ C_β sin ωhβ − sin ωz, Σ C_β cos ωhβ − cos ωz)`.
    pub fn trig_residuals(&self, params: &SpaceParams) -> (f64, f64) {
        let omega = params.omega();
        let (mut s, mut c) = (0.0, 0.0);
        for (beta, coeff) in self.coeffs.iter().enumerate() {
            let x = omega * params.node(beta as i64);
            s += coeff * x.sin();
            c += coeff * x.cos();
        }
        (s - (omega * self.z).sin(), c - (omega * self.z).cos())
    }
}

pub(crate) fn check_z(z: f64) -> Result<()> {
    if (0.0..=1.0).contains(&z) {
        Ok(())
    } else {
        Err(Error::ZOutOfRange(z))
    }
}

/// `G₂(z − hγ)` on the grid together with the `λ`-weighted sums over it.
#[derive(Debug, Clone)]
struct LatticeSums {
    green: Vec<f64>,
    /// `Σ_γ λ^{|β−γ|} G₂(z − hγ)` for each `β`.
    banded: Vec<f64>,
}

impl LatticeSums {
    fn new(z: f64, params: &SpaceParams, lambda: f64) -> Self {
        let n = params.n_intervals();
        let green: Vec<f64> = (0..=n)
            .map(|gamma| params.green(z - params.node(gamma as i64)))
            .collect();

        // Two first-order recursions: left[β] = Σ_{γ≤β}, right[β] = Σ_{γ≥β}.
        let mut left = vec![0.0; n + 1];
        let mut right = vec![0.0; n + 1];
        left[0] = green[0];
        for beta in 1..=n {
            left[beta] = lambda * left[beta - 1] + green[beta];
        }
        right[n] = green[n];
        for beta in (0..n).rev() {
            right[beta] = lambda * right[beta + 1] + green[beta];
        }
        let banded = (0..=n)
            .map(|beta| left[beta] + right[beta] - green[beta])
            .collect();
        Self { green, banded }
    }

    /// `K₄ = Σ_{γ=0}^{N} λ^γ G₂(z − hγ)`; the band at `β = 0` is one-sided.
    fn k4(&self) -> f64 {
        self.banded[0]
    }

    /// `λ^N K₇ = Σ_{γ=0}^{N} λ^{N−γ} G₂(z − hγ)`.
    fn k7_scaled(&self) -> f64 {
        self.banded[self.banded.len() - 1]
    }
}

/// The constants `K₁…K₈` entering the boundary system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KConstants {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub k5: f64,
    pub k6: f64,
    /// `Σ λ^{−γ} G₂(z − hγ)`. Grows like `|λ|^{−N}`; the boundary system uses
    /// [`KConstants::k7_scaled`] instead.
    pub k7: f64,
    pub k8: f64,
    k7_scaled: f64,
}

impl KConstants {
    pub fn as_array(&self) -> [f64; 8] {
        [
            self.k1, self.k2, self.k3, self.k4, self.k5, self.k6, self.k7, self.k8,
        ]
    }

    /// `λ^N K₇`, summed directly as `Σ λ^{N−γ} G₂(z − hγ)`.
    pub fn k7_scaled(&self) -> f64 {
        self.k7_scaled
    }
}

/// `λ² − 2λ cos θ + 1`, the common denominator of the geometric sums.
fn geometric_denominator(lambda: f64, theta: f64) -> f64 {
    lambda * lambda - 2.0 * lambda * theta.cos() + 1.0
}

/// `Σ_{γ≥1} λ^γ cos(ω + γθ)`.
fn k1(lambda: f64, theta: f64, omega: f64) -> f64 {
    lambda * ((omega + theta).cos() - lambda * omega.cos()) / geometric_denominator(lambda, theta)
}

/// `Σ_{γ≥1} γλ^γ cos(γθ + ωz)`.
fn k2(lambda: f64, theta: f64, omega: f64, z: f64) -> f64 {
    let wz = omega * z;
    let d = geometric_denominator(lambda, theta);
    lambda
        * (lambda * lambda * (theta - wz).cos() - 2.0 * lambda * wz.cos() + (theta + wz).cos())
        / (d * d)
}

/// `Σ_{γ≥1} λ^γ cos(γθ)`.
fn k5(lambda: f64, theta: f64) -> f64 {
    lambda * (theta.cos() - lambda) / geometric_denominator(lambda, theta)
}

/// `Σ_{γ≥1} λ^γ sin(ω + γθ)`.
fn k8(lambda: f64, theta: f64, omega: f64) -> f64 {
    lambda * ((omega + theta).sin() - lambda * omega.sin()) / geometric_denominator(lambda, theta)
}

/// `K₃ = Σ_{γ≥1} λ^γ (N+γ) cos(ω(h(N+γ) − z))`, summed in closed form.
///
/// With `q = λe^{iθ}` and phase `φ = ω(1 − z)` this is
/// `Re e^{iφ}[N·q/(1−q) + q/(1−q)²]`.
pub fn k3_closed_form(z: f64, params: &SpaceParams, lambda: f64) -> f64 {
    let theta = params.theta();
    let q = Complex64::from_polar(lambda, theta);
    let one_minus = Complex64::new(1.0, 0.0) - q;
    let n = params.n_intervals() as f64;
    let series = q / one_minus * n + q / (one_minus * one_minus);
    let phase = Complex64::from_polar(1.0, params.omega() * (1.0 - z));
    (phase * series).re
}

fn k_constants_from(
    z: f64,
    params: &SpaceParams,
    dop: &DiscreteOperatorParams,
    sums: &LatticeSums,
) -> KConstants {
    let omega = params.omega();
    let theta = params.theta();
    let lambda = dop.lambda;
    let n = params.n_intervals() as i32;

    let k1 = k1(lambda, theta, omega);
    let k7_scaled = sums.k7_scaled();
    KConstants {
        k1,
        k2: k2(lambda, theta, omega, z),
        k3: k3_closed_form(z, params, lambda),
        k4: sums.k4(),
        k5: k5(lambda, theta),
        k6: omega.cos()
            + dop.big_c * (omega + theta).cos()
            + (omega + 2.0 * theta).cos()
            + dop.big_a * k1 / (lambda * lambda),
        k7: k7_scaled / lambda.powi(n),
        k8: k8(lambda, theta, omega),
        k7_scaled,
    }
}

pub fn k_constants(
    z: f64,
    params: &SpaceParams,
    dop: &DiscreteOperatorParams,
) -> Result<KConstants> {
    check_z(z)?;
    let sums = LatticeSums::new(z, params, dop.lambda);
    Ok(k_constants_from(z, params, dop, &sums))
}

/// `A₁₁d₁⁻ + A₁₂d₁⁺ = S₁`, `A₂₁d₁⁻ + A₂₂d₁⁺ = S₂`: the conditions
/// `C_{−1}(z) = 0` and `C_{N+1}(z) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySystem {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
    pub s1: f64,
    pub s2: f64,
}

impl BoundarySystem {
    pub fn determinant(&self) -> f64 {
        self.a11 * self.a22 - self.a21 * self.a12
    }

    /// Residuals of both equations, each relative to the size of its terms.
    pub fn relative_residuals(&self, d1_minus: f64, d1_plus: f64) -> [f64; 2] {
        let rel = |a: f64, b: f64, s: f64| {
            let scale = (a * d1_minus).abs() + (b * d1_plus).abs() + s.abs();
            (a * d1_minus + b * d1_plus - s).abs() / scale.max(f64::MIN_POSITIVE)
        };
        [
            rel(self.a11, self.a12, self.s1),
            rel(self.a21, self.a22, self.s2),
        ]
    }
}

/// Multipliers of the extension of `u₂` beyond the grid, and the tail sums
/// `M₁ = Σ_{γ≥1} λ^γ u₂(−hγ)`, `N₁ = Σ_{γ≥1} λ^γ u₂(1 + hγ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySolution {
    pub z: f64,
    pub d1_minus: f64,
    pub d1_plus: f64,
    pub d2_minus: f64,
    pub d2_plus: f64,
    pub m1: f64,
    pub n1: f64,
    pub k: KConstants,
    pub system: BoundarySystem,
}

fn boundary_system(
    z: f64,
    params: &SpaceParams,
    dop: &DiscreteOperatorParams,
    k: &KConstants,
) -> BoundarySystem {
    let omega = params.omega();
    let theta = params.theta();
    let h = params.h();
    let n = params.n_intervals() as i64;
    let DiscreteOperatorParams {
        big_c: c,
        big_a: a,
        lambda,
        ..
    } = *dop;
    let q = 1.0 / (4.0 * omega * omega);
    let cos_w = omega.cos();
    let (sin_t, cos_t) = theta.sin_cos();
    let sin_2t = (2.0 * theta).sin();
    let cos_2t = (2.0 * theta).cos();
    let d = geometric_denominator(lambda, theta);
    let lambda2 = lambda * lambda;
    let lambda_n = lambda.powi(n as i32);
    let g_z = params.green(z);
    let g_z1 = params.green(z - 1.0);
    let cos_wz1 = (omega * (1.0 - z)).cos();
    let wz = omega * z;

    let a11 = -sin_2t - c * sin_t - a * sin_t / (lambda * d);
    let a12 = a * lambda_n * lambda * sin_t / (cos_w * d);
    let s1 = q
        * (c * h * (theta + wz).cos() + 2.0 * h * (2.0 * theta + wz).cos()
            - a * lambda_n * cos_wz1 * k.k1 / cos_w
            + a * h * k.k2 / lambda2
            + a * h * lambda_n * k.k3)
        - a * k.k4
        - a * lambda_n * g_z1 * k.k1 / cos_w
        - g_z * (c * cos_t + 1.0 + cos_2t + a * k.k5 / lambda2);

    let a21 = -a * lambda_n * lambda * sin_t / d;
    let a22 = (c * sin_t + sin_2t + a * sin_t / (lambda * d)) / cos_w;
    let x_n1 = params.node(n + 1);
    let x_n2 = params.node(n + 2);
    let s2 = q
        * (a * lambda_n * h * k.k2
            + cos_wz1
            + c * x_n1 * (omega * x_n1 - wz).cos()
            + x_n2 * (omega * x_n2 - wz).cos()
            + a * h * k.k3 / lambda2
            - cos_wz1 * k.k6 / cos_w)
        - a * k.k7_scaled
        - g_z * a * lambda_n * k.k5
        - g_z1 * k.k6 / cos_w;

    BoundarySystem {
        a11,
        a12,
        a21,
        a22,
        s1,
        s2,
    }
}

fn boundary_solution_from(
    z: f64,
    params: &SpaceParams,
    dop: &DiscreteOperatorParams,
    sums: &LatticeSums,
) -> Result<BoundarySolution> {
    let omega = params.omega();
    let theta = params.theta();
    let h = params.h();
    let lambda = dop.lambda;
    let q = 1.0 / (4.0 * omega * omega);

    let k = k_constants_from(z, params, dop, sums);
    let system = boundary_system(z, params, dop, &k);
    let det = system.determinant();
    let scale = (system.a11 * system.a22)
        .abs()
        .max((system.a21 * system.a12).abs());
    if !det.is_finite() || det.abs() <= 1e-14 * scale || det == 0.0 {
        return Err(Error::SingularBoundarySystem { det, scale });
    }
    let d1_minus = (system.s1 * system.a22 - system.s2 * system.a12) / det;
    let d1_plus = (system.s2 * system.a11 - system.s1 * system.a21) / det;
    let d2_minus = params.green(z);
    let d2_plus = (params.green(z - 1.0) + q * (omega * (1.0 - z)).cos() - d1_plus * omega.sin())
        / omega.cos();

    let m1 = -d1_minus * lambda * theta.sin() / geometric_denominator(lambda, theta)
        + d2_minus * k.k5
        - h * q * k.k2;
    let n1 = d1_plus * k.k8 + d2_plus * k.k1 - h * q * k.k3;

    Ok(BoundarySolution {
        z,
        d1_minus,
        d1_plus,
        d2_minus,
        d2_plus,
        m1,
        n1,
        k,
        system,
    })
}

/// Solves the boundary system by Cramer's rule and derives `d₂⁻`, `d₂⁺`, `M₁`, `N₁`.
pub fn boundary_solution(
    z: f64,
    params: &SpaceParams,
    dop: &DiscreteOperatorParams,
) -> Result<BoundarySolution> {
    check_z(z)?;
    let sums = LatticeSums::new(z, params, dop.lambda);
    boundary_solution_from(z, params, dop, &sums)
}

/// Left continuation of `u₂`, valid for `β ≤ 0`.
fn u2_left(beta: i64, z: f64, bs: &BoundarySolution, params: &SpaceParams) -> f64 {
    let omega = params.omega();
    let x = params.node(beta);
    let q = 1.0 / (4.0 * omega * omega);
    bs.d1_minus * (omega * x).sin()
        + params.green(z) * (omega * x).cos()
        + x * q * (omega * (x - z)).cos()
}

/// Right continuation of `u₂`, valid for `β ≥ N`.
fn u2_right(beta: i64, z: f64, bs: &BoundarySolution, params: &SpaceParams) -> f64 {
    let omega = params.omega();
    let n = params.n_intervals() as i64;
    let x = params.node(beta);
    let past_end = params.node(beta - n);
    let q = 1.0 / (4.0 * omega * omega);
    let cos_w = omega.cos();
    bs.d1_plus * (omega * past_end).sin() / cos_w
        + (omega * x).cos() / cos_w * (params.green(z - 1.0) + q * (omega * (1.0 - z)).cos())
        - x * q * (omega * (x - z)).cos()
}

/// `u₂(hβ)` for any integer `β`.
pub fn u2_extension(beta: i64, z: f64, bs: &BoundarySolution, params: &SpaceParams) -> f64 {
    let n = params.n_intervals() as i64;
    if beta < 0 {
        u2_left(beta, z, bs, params)
    } else if beta > n {
        u2_right(beta, z, bs, params)
    } else {
        params.green(z - params.node(beta))
    }
}

/// Closed-form coefficients, reusing already computed operator constants.
pub fn optimal_coefficients_with(
    z: f64,
    params: &SpaceParams,
    dop: &DiscreteOperatorParams,
) -> Result<CoefficientVector> {
    check_z(z)?;
    let sums = LatticeSums::new(z, params, dop.lambda);
    let bs = boundary_solution_from(z, params, dop, &sums)?;

    let omega = params.omega();
    let theta = params.theta();
    let h = params.h();
    let n = params.n_intervals();
    let DiscreteOperatorParams {
        p,
        big_c: c,
        big_a: a,
        lambda,
    } = *dop;
    let q = 1.0 / (4.0 * omega * omega);
    let g = &sums.green;
    let a_over_lambda = a / lambda;

    // Σ_γ λ^{|β−γ|} u₂(hγ) over all integers γ.
    let full_band = |beta: usize| {
        sums.banded[beta] + lambda.powi(beta as i32) * bs.m1 + lambda.powi((n - beta) as i32) * bs.n1
    };

    let mut coeffs = vec![0.0; n + 1];
    coeffs[0] = p * (-bs.d1_minus * theta.sin() + bs.d2_minus * theta.cos()
        - q * h * (theta + omega * z).cos()
        + c * g[0]
        + g[1]
        + a_over_lambda * full_band(0));
    for beta in 1..n {
        coeffs[beta] =
            p * (g[beta - 1] + c * g[beta] + g[beta + 1] + a_over_lambda * full_band(beta));
    }
    let x_n1 = params.node(n as i64 + 1);
    coeffs[n] = p * (bs.d1_plus * (omega * x_n1).sin() + bs.d2_plus * (omega * x_n1).cos()
        - q * x_n1 * (omega * x_n1 - omega * z).cos()
        + c * g[n]
        + g[n - 1]
        + a_over_lambda * full_band(n));

    Ok(CoefficientVector { z, coeffs })
}

/// Optimal coefficients `C₀(z)…C_N(z)` from the closed forms.
pub fn optimal_coefficients(z: f64, params: &SpaceParams) -> Result<CoefficientVector> {
    let dop = discrete_operator_params(params)?;
    optimal_coefficients_with(z, params, &dop)
}
