//! Reference path: the bordered `(N+3)×(N+3)` system for the optimal
//! coefficients and the Lagrange multipliers `d₁(z)`, `d₂(z)`, solved densely.
//!
//! ```text
//! Σ_γ C_γ G₂(x_β − x_γ) + d₁ sin ωx_β + d₂ cos ωx_β = G₂(z − x_β),  β = 0..N
//! Σ_γ C_γ sin ωx_γ = sin ωz
//! Σ_γ C_γ cos ωx_γ = cos ωz
//! ```

use crate::closed_form::{check_z, CoefficientVector};
use crate::error::{Error, Result};
use crate::space_kernel::SpaceParams;

/// Relative pivot threshold for [`solve_dense`].
pub const PIVOT_TOL: f64 = 1e-13;

/// Row-major square system `matrix · x = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterminingSystem {
    pub side: usize,
    pub matrix: Vec<f64>,
    pub rhs: Vec<f64>,
    pub z: f64,
}

impl DeterminingSystem {
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.matrix[row * self.side + col]
    }

    /// `‖matrix·x − rhs‖_∞`.
    pub fn residual_inf(&self, x: &[f64]) -> f64 {
        (0..self.side)
            .map(|row| {
                let ax: f64 = (0..self.side).map(|col| self.at(row, col) * x[col]).sum();
                (ax - self.rhs[row]).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Solution of the bordered system.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub coefficients: CoefficientVector,
    pub d1: f64,
    pub d2: f64,
}

pub fn assemble_system(z: f64, params: &SpaceParams) -> Result<DeterminingSystem> {
    check_z(z)?;
    let n = params.n_intervals();
    let side = n + 3;
    let omega = params.omega();
    let mut matrix = vec![0.0; side * side];
    let mut rhs = vec![0.0; side];

    for beta in 0..=n {
        let x_beta = params.node(beta as i64);
        for gamma in 0..=n {
            matrix[beta * side + gamma] = params.green(x_beta - params.node(gamma as i64));
        }
        let (s, c) = (omega * x_beta).sin_cos();
        matrix[beta * side + n + 1] = s;
        matrix[beta * side + n + 2] = c;
        matrix[(n + 1) * side + beta] = s;
        matrix[(n + 2) * side + beta] = c;
        rhs[beta] = params.green(z - x_beta);
    }
    rhs[n + 1] = (omega * z).sin();
    rhs[n + 2] = (omega * z).cos();

    Ok(DeterminingSystem {
        side,
        matrix,
        rhs,
        z,
    })
}

/// Gaussian elimination with partial pivoting on a row-major copy.
fn gauss_partial_pivot(side: usize, mut a: Vec<f64>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let largest = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let threshold = PIVOT_TOL * largest;

    for col in 0..side {
        let (pivot_row, pivot) = (col..side)
            .map(|row| (row, a[row * side + col].abs()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(pivot > threshold) {
            return Err(Error::SingularSystem {
                pivot,
                column: col,
                threshold,
            });
        }
        if pivot_row != col {
            for k in 0..side {
                a.swap(col * side + k, pivot_row * side + k);
            }
            b.swap(col, pivot_row);
        }
        let diag = a[col * side + col];
        for row in col + 1..side {
            let factor = a[row * side + col] / diag;
            if factor == 0.0 {
                continue;
            }
            a[row * side + col] = 0.0;
            for k in col + 1..side {
                a[row * side + k] -= factor * a[col * side + k];
            }
            b[row] -= factor * b[col];
        }
    }

    let mut x = vec![0.0; side];
    for row in (0..side).rev() {
        let tail: f64 = (row + 1..side).map(|k| a[row * side + k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row * side + row];
    }
    Ok(x)
}

pub fn solve_dense(system: &DeterminingSystem) -> Result<OracleSolution> {
    let x = gauss_partial_pivot(system.side, system.matrix.clone(), system.rhs.clone())?;
    let n_coeffs = system.side - 2;
    Ok(OracleSolution {
        coefficients: CoefficientVector {
            z: system.z,
            coeffs: x[..n_coeffs].to_vec(),
        },
        d1: x[n_coeffs],
        d2: x[n_coeffs + 1],
    })
}

/// Full oracle solution, multipliers included.
pub fn oracle_solution(z: f64, params: &SpaceParams) -> Result<OracleSolution> {
    solve_dense(&assemble_system(z, params)?)
}

pub fn oracle_coefficients(z: f64, params: &SpaceParams) -> Result<CoefficientVector> {
    Ok(oracle_solution(z, params)?.coefficients)
}
