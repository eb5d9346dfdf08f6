//! Space parameters, the Green kernel `G₂` of the operator
//! `d⁴/dx⁴ + 2ω²d²/dx² + ω⁴`, and its discrete analogue `D₂` on the lattice `hβ`.
//!
//! `D₂` is the lattice inverse of `G₂`: `D₂(hβ) * G₂(hβ) = δ(hβ)`. It decays
//! geometrically like `λ^|β|` with `|λ| < 1`, so every lattice convolution against
//! it is an absolutely convergent series that can be truncated with an a priori
//! tail bound.

use crate::error::{Error, Result};

/// Lower bound on `|cos ω|`; the boundary closed forms divide by `cos ω`.
pub const SINGULAR_TOL: f64 = 1e-8;

/// `|ω|` below this is treated as zero.
pub const OMEGA_ZERO_TOL: f64 = 1e-12;

/// Truncation threshold for infinite lattice convolutions against `D₂`.
pub const TAIL_TOL: f64 = 1e-14;

/// Hard cap on the number of lattice terms a truncated convolution may visit.
const MAX_CONVOLUTION_TERMS: u64 = 1_000_000;

/// Frequency `ω` of the null functions `sin ωx`, `cos ωx` and the uniform grid
/// `x_β = β/N`, `β = 0..=N`, on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceParams {
    omega: f64,
    n_intervals: usize,
    h: f64,
}

impl SpaceParams {
    pub fn new(omega: f64, n_intervals: i64) -> Result<Self> {
        if !omega.is_finite() {
            return Err(Error::OmegaNotFinite(omega));
        }
        if n_intervals < 1 {
            return Err(Error::BadN(n_intervals));
        }
        if omega.abs() < OMEGA_ZERO_TOL {
            return Err(Error::OmegaZero(omega));
        }
        if omega.cos().abs() < SINGULAR_TOL {
            return Err(Error::OmegaSingular {
                omega,
                tol: SINGULAR_TOL,
            });
        }
        Ok(Self {
            omega,
            n_intervals: n_intervals as usize,
            h: 1.0 / n_intervals as f64,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `N`; the grid has `N + 1` nodes.
    pub fn n_intervals(&self) -> usize {
        self.n_intervals
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Lattice point `hβ`, computed as `β/N` so that `node(N) == 1.0` exactly.
    pub fn node(&self, beta: i64) -> f64 {
        beta as f64 / self.n_intervals as f64
    }

    /// `ωh`, the lattice step measured in radians.
    pub fn theta(&self) -> f64 {
        self.omega / self.n_intervals as f64
    }

    /// Shorthand for [`green_kernel`] with these parameters.
    pub fn green(&self, x: f64) -> f64 {
        green_kernel(x, self)
    }
}

/// Validated constructor; see [`SpaceParams::new`].
pub fn make_space_params(omega: f64, n_intervals: i64) -> Result<SpaceParams> {
    SpaceParams::new(omega, n_intervals)
}

/// `sin t − t·cos t`, accurate for small `|t|` where the direct form cancels.
pub fn sin_minus_t_cos(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        return t.sin() - t * t.cos();
    }
    // Σ_{k≥1} (−1)^{k+1} 2k·t^{2k+1}/(2k+1)!
    let t2 = t * t;
    let mut power_over_fact = t;
    let mut sum = 0.0;
    for k in 1..40u32 {
        let kf = f64::from(k);
        power_over_fact *= t2 / ((2.0 * kf) * (2.0 * kf + 1.0));
        let term = 2.0 * kf * power_over_fact;
        sum += if k % 2 == 1 { term } else { -term };
        if term.abs() <= f64::EPSILON * 1e-3 * sum.abs() {
            break;
        }
    }
    sum
}

/// `t − sin t`, accurate for small `|t|`.
pub fn t_minus_sin(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        return t - t.sin();
    }
    // Σ_{k≥1} (−1)^{k+1} t^{2k+1}/(2k+1)!
    let t2 = t * t;
    let mut power_over_fact = t;
    let mut sum = 0.0;
    for k in 1..40u32 {
        let kf = f64::from(k);
        power_over_fact *= t2 / ((2.0 * kf) * (2.0 * kf + 1.0));
        sum += if k % 2 == 1 {
            power_over_fact
        } else {
            -power_over_fact
        };
        if power_over_fact.abs() <= f64::EPSILON * 1e-3 * sum.abs() {
            break;
        }
    }
    sum
}

/// Green kernel `G₂(x) = sgn(x)/(4ω³)·[sin ωx − ωx·cos ωx]`.
///
/// Even in `x`, vanishes at the origin, and behaves like `|x|³/12` near it.
pub fn green_kernel(x: f64, params: &SpaceParams) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let omega = params.omega;
    x.signum() * sin_minus_t_cos(omega * x) / (4.0 * omega * omega * omega)
}

/// The constants `p`, `C`, `A`, `λ` that fix `D₂(hβ)` for every integer `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteOperatorParams {
    pub p: f64,
    pub big_c: f64,
    pub big_a: f64,
    pub lambda: f64,
}

/// Both roots of `λ² − sλ + 1 = 0` with `s = (2θ − sin 2θ)/(θcos θ − sin θ)`,
/// ordered as `(small, large)` in magnitude. Their product is exactly 1.
pub fn lambda_roots(theta: f64) -> (f64, f64) {
    let f = sin_minus_t_cos(theta);
    let s = -t_minus_sin(2.0 * theta) / f;
    // s² − 4 = 4 sin²θ (θ² − sin²θ) / f², with θ² − sin²θ = (θ − sin θ)(θ + sin θ).
    let disc = 2.0 * theta.sin().abs() * (t_minus_sin(theta) * (theta + theta.sin())).sqrt() / f.abs();
    let large = 0.5 * (s + s.signum() * disc);
    (1.0 / large, large)
}

pub fn discrete_operator_params(params: &SpaceParams) -> Result<DiscreteOperatorParams> {
    let omega = params.omega;
    let theta = params.theta();
    let f = sin_minus_t_cos(theta);
    if !f.is_finite() || f.abs() <= 1e-10 * theta.abs().powi(3) {
        return Err(Error::NumericallyDegenerate(format!(
            "sin(ωh) − ωh·cos(ωh) vanishes at ωh = {theta}"
        )));
    }

    let p = 2.0 * omega.powi(3) / f;
    let big_c = -sin_minus_t_cos(2.0 * theta) / f;
    let (lambda, _) = lambda_roots(theta);
    if !lambda.is_finite() || lambda == 0.0 || lambda.abs() >= 1.0 - 1e-12 {
        return Err(Error::NumericallyDegenerate(format!(
            "λ = {lambda} is not strictly inside the unit interval at ωh = {theta}"
        )));
    }
    let sin_theta = theta.sin();
    let lambda2 = lambda * lambda;
    let big_a =
        (2.0 * theta).powi(2) * sin_theta.powi(4) * lambda2 / ((lambda2 - 1.0) * f * f);

    let dop = DiscreteOperatorParams {
        p,
        big_c,
        big_a,
        lambda,
    };
    if ![p, big_c, big_a].iter().all(|v| v.is_finite()) {
        return Err(Error::NumericallyDegenerate(format!(
            "non-finite operator constants {dop:?} at ωh = {theta}"
        )));
    }
    Ok(dop)
}

/// `D₂(hβ)`; even in `β`.
pub fn discrete_operator_value(beta: i64, dop: &DiscreteOperatorParams) -> f64 {
    let DiscreteOperatorParams {
        p,
        big_c,
        big_a,
        lambda,
    } = *dop;
    match beta.unsigned_abs() {
        0 => p * (big_c + big_a / lambda),
        1 => p * (1.0 + big_a),
        k => p * big_a * lambda.powi((k - 1) as i32),
    }
}

/// Affine bound `base + slope·j` on `|f(β ± j)|`, used to size convolution tails.
#[derive(Debug, Clone, Copy)]
pub struct Envelope {
    pub base: f64,
    pub slope: f64,
}

/// Bound on `Σ_{|γ|>k} |D₂(hγ)|·|f(β − γ)|`.
fn convolution_tail_bound(dop: &DiscreteOperatorParams, k: u64, envelope: Envelope) -> f64 {
    let r = dop.lambda.abs();
    let one_minus = 1.0 - r;
    let geometric = envelope.base / one_minus
        + envelope.slope * ((k + 1) as f64 / one_minus + r / (one_minus * one_minus));
    2.0 * (dop.p * dop.big_a).abs() * r.powi(k as i32) * geometric
}

/// Truncated lattice convolution `Σ_γ D₂(hγ)·f(β − γ)`.
///
/// Terms are added symmetrically in `|γ|` until the remaining tail, bounded
/// with `envelope`, drops below [`TAIL_TOL`].
pub fn convolve_operator<F>(dop: &DiscreteOperatorParams, beta: i64, f: F, envelope: Envelope) -> f64
where
    F: Fn(i64) -> f64,
{
    let mut sum = discrete_operator_value(0, dop) * f(beta);
    for k in 1..MAX_CONVOLUTION_TERMS {
        let d = discrete_operator_value(k as i64, dop);
        sum += d * (f(beta - k as i64) + f(beta + k as i64));
        if k >= 2 && convolution_tail_bound(dop, k, envelope) < TAIL_TOL {
            break;
        }
    }
    sum
}

/// Truncated `(D₂ * G₂)(hβ)`.
pub fn operator_green_convolution(
    beta: i64,
    dop: &DiscreteOperatorParams,
    params: &SpaceParams,
) -> f64 {
    let w = params.omega.abs();
    let h = params.h;
    // |G₂(x)| ≤ (1 + |ωx|)/(4|ω|³) and |x| ≤ h(|β| + j).
    let envelope = Envelope {
        base: (1.0 + w * h * beta.unsigned_abs() as f64) / (4.0 * w.powi(3)),
        slope: h / (4.0 * w * w),
    };
    convolve_operator(
        dop,
        beta,
        |gamma| green_kernel(params.node(gamma), params),
        envelope,
    )
}

/// Max over `|β| ≤ half_width` of `|(D₂ * G₂)(hβ) − δ(hβ)|`.
pub fn verify_discrete_identity(
    dop: &DiscreteOperatorParams,
    params: &SpaceParams,
    half_width: i64,
) -> f64 {
    (-half_width..=half_width)
        .map(|beta| {
            let delta = if beta == 0 { 1.0 } else { 0.0 };
            (operator_green_convolution(beta, dop, params) - delta).abs()
        })
        .fold(0.0, f64::max)
}

/// Max over `|β| ≤ half_width` of the truncated convolutions of `D₂` with
/// `sin(ωhβ)`, `cos(ωhβ)`, `ωhβ·cos(ωhβ)` and `ωhβ·sin(ωhβ)`, in that order.
/// All four vanish identically for the exact operator.
pub fn annihilation_residuals(
    dop: &DiscreteOperatorParams,
    params: &SpaceParams,
    half_width: i64,
) -> [f64; 4] {
    let theta = params.theta();
    let t = theta.abs();
    let bounded = Envelope {
        base: 1.0,
        slope: 0.0,
    };
    let mut out = [0.0f64; 4];
    for beta in -half_width..=half_width {
        let growing = Envelope {
            base: t * beta.unsigned_abs() as f64,
            slope: t,
        };
        let values = [
            convolve_operator(dop, beta, |g| (theta * g as f64).sin(), bounded),
            convolve_operator(dop, beta, |g| (theta * g as f64).cos(), bounded),
            convolve_operator(
                dop,
                beta,
                |g| theta * g as f64 * (theta * g as f64).cos(),
                growing,
            ),
            convolve_operator(
                dop,
                beta,
                |g| theta * g as f64 * (theta * g as f64).sin(),
                growing,
            ),
        ];
        for (acc, v) in out.iter_mut().zip(values) {
            *acc = acc.max(v.abs());
        }
    }
    out
}
