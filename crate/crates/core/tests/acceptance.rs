//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each, and
//! exits nonzero if any criterion fails.

use std::fs;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use k2p2::cli::format::{parse_coefficient_tables, write_coefficient_tables};
use k2p2::closed_form::{k3_closed_form, optimal_coefficients_with};
use k2p2::interpolator::{error_report, z_grid};
use k2p2::space_kernel::{annihilation_residuals, SINGULAR_TOL};
use k2p2::{
    discrete_operator_params, error_norm_squared, interpolate, oracle_coefficients,
    verify_discrete_identity, CoefficientVector, SampleSet, SpaceParams,
};
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;

struct Criterion {
    id: &'static str,
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn closed(z: f64, params: &SpaceParams) -> CoefficientVector {
    let dop = discrete_operator_params(params).expect("operator");
    optimal_coefficients_with(z, params, &dop).expect("closed form")
}

fn kronecker() -> Check {
    let mut worst: f64 = 0.0;
    for n in [5, 10] {
        let params = SpaceParams::new(1.0, n).unwrap();
        for gamma in 0..=n {
            let c = closed(params.node(gamma), &params);
            for (beta, v) in c.coeffs.iter().enumerate() {
                let delta = if beta as i64 == gamma { 1.0 } else { 0.0 };
                worst = worst.max((v - delta).abs());
            }
        }
    }
    ensure(worst <= 1e-8, format!("max |C_β(hγ) − δ_βγ| = {worst:.2e} (tol 1e-8)"))
}

fn trig_exactness() -> Check {
    let mut rng = rand::rngs::StdRng::seed_from_u64(2019);
    let pairs: Vec<(f64, f64)> = (0..20)
        .map(|_| (rng.gen_range(-10.0..=10.0), rng.gen_range(-10.0..=10.0)))
        .collect();
    let grid = z_grid(1001);
    let (mut worst_row, mut worst_interp): (f64, f64) = (0.0, 0.0);
    for omega in [0.5, 1.0, 2.0] {
        for n in [5, 10] {
            let params = SpaceParams::new(omega, n).unwrap();
            let dop = discrete_operator_params(&params).unwrap();
            let sample_sets: Vec<(SampleSet, f64, f64)> = pairs
                .iter()
                .map(|&(a, b)| {
                    let s = SampleSet::from_fn(params, |x| a * (omega * x).sin() + b * (omega * x).cos())
                        .unwrap();
                    (s, a, b)
                })
                .collect();
            for &z in &grid {
                let c = optimal_coefficients_with(z, &params, &dop).unwrap();
                let (rs, rc) = c.trig_residuals(&params);
                worst_row = worst_row.max(rs.abs()).max(rc.abs());
                for (s, a, b) in &sample_sets {
                    let exact = a * (omega * z).sin() + b * (omega * z).cos();
                    worst_interp = worst_interp.max((interpolate(s, &c).unwrap() - exact).abs());
                }
            }
        }
    }
    ensure(
        worst_row <= 1e-8 && worst_interp <= 1e-8,
        format!(
            "max sin/cos row residual = {worst_row:.2e}, max a·sin+b·cos error = {worst_interp:.2e} (tol 1e-8)"
        ),
    )
}

fn closed_vs_oracle() -> Check {
    let mut worst: f64 = 0.0;
    for n in [1, 5, 10, 20] {
        let params = SpaceParams::new(1.0, n).unwrap();
        let dop = discrete_operator_params(&params).unwrap();
        for z in z_grid(101) {
            let a = optimal_coefficients_with(z, &params, &dop).unwrap();
            let b = oracle_coefficients(z, &params).unwrap();
            for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    ensure(worst <= 1e-7, format!("max |C_closed − C_oracle| = {worst:.2e} (tol 1e-7)"))
}

fn operator_identities() -> Check {
    let mut delta_worst: f64 = 0.0;
    let mut annihilation_worst = [0.0f64; 4];
    for n in [5, 10] {
        let params = SpaceParams::new(1.0, n).unwrap();
        let dop = discrete_operator_params(&params).unwrap();
        delta_worst = delta_worst.max(verify_discrete_identity(&dop, &params, 50));
        for (w, r) in annihilation_worst
            .iter_mut()
            .zip(annihilation_residuals(&dop, &params, 50))
        {
            *w = w.max(r);
        }
    }
    let all = annihilation_worst.iter().all(|r| *r <= 1e-6);
    ensure(
        delta_worst <= 1e-6 && all,
        format!(
            "D₂*G₂−δ = {delta_worst:.2e}; D₂*[sin, cos, x·cos, x·sin] = [{:.1e}, {:.1e}, {:.1e}, {:.1e}] (tol 1e-6)",
            annihilation_worst[0], annihilation_worst[1], annihilation_worst[2], annihilation_worst[3]
        ),
    )
}

fn convergence_ordering() -> Check {
    let p5 = SpaceParams::new(1.0, 5).unwrap();
    let p10 = SpaceParams::new(1.0, 10).unwrap();
    let max_err = |f: fn(f64) -> f64, p: &SpaceParams| error_report(f, p, 1001).unwrap().max_abs_error;
    let sq = (max_err(|z| z * z, &p5), max_err(|z| z * z, &p10));
    let ex = (max_err(f64::exp, &p5), max_err(f64::exp, &p10));
    let si = (max_err(f64::sin, &p5), max_err(f64::sin, &p10));
    ensure(
        sq.1 < sq.0 && ex.1 < ex.0 && si.0 <= 1e-8 && si.1 <= 1e-8,
        format!(
            "z²: {:.2e} → {:.2e}; eᶻ: {:.2e} → {:.2e}; sin z: {:.1e}, {:.1e} (tol 1e-8)",
            sq.0, sq.1, ex.0, ex.1, si.0, si.1
        ),
    )
}

fn norm_checks() -> Check {
    let mut min_norm = f64::INFINITY;
    let mut at_half = Vec::new();
    let mut path_gap: f64 = 0.0;
    for n in [5, 10] {
        let params = SpaceParams::new(1.0, n).unwrap();
        let dop = discrete_operator_params(&params).unwrap();
        for z in z_grid(1001) {
            let c = optimal_coefficients_with(z, &params, &dop).unwrap();
            min_norm = min_norm.min(error_norm_squared(&c, &params));
        }
        let closed = error_norm_squared(&closed(0.5, &params), &params);
        let oracle = error_norm_squared(&oracle_coefficients(0.5, &params).unwrap(), &params);
        path_gap = path_gap.max((closed - oracle).abs());
        at_half.push((closed, oracle));
    }
    let decreasing = at_half[1].0 < at_half[0].0 && at_half[1].1 < at_half[0].1;
    ensure(
        min_norm >= -1e-10 && decreasing && path_gap <= 1e-9,
        format!(
            "min ‖ℓ‖² = {min_norm:.2e} (≥ −1e-10); ‖ℓ‖²(0.5): N=5 {:.3e}, N=10 {:.1e}; path gap {path_gap:.1e}",
            at_half[0].0, at_half[1].0
        ),
    )
}

fn k3_series() -> Check {
    let mut rng = rand::rngs::StdRng::seed_from_u64(43);
    let mut worst: f64 = 0.0;
    let mut accepted = 0;
    while accepted < 100 {
        let n: i64 = rng.gen_range(1..=100);
        let omega: f64 = rng.gen_range(0.05..2.0);
        let z: f64 = rng.gen_range(0.0..=1.0);
        if omega / (n as f64) < 1e-2 || omega.cos().abs() < SINGULAR_TOL {
            continue;
        }
        let params = SpaceParams::new(omega, n).unwrap();
        let lambda = discrete_operator_params(&params).unwrap().lambda;
        let h = params.h();
        let series: f64 = (1..=2000)
            .map(|g| {
                let k = (n + g) as f64;
                lambda.powi(g as i32) * k * (omega * (h * k - z)).cos()
            })
            .sum();
        worst = worst.max((k3_closed_form(z, &params, lambda) - series).abs());
        accepted += 1;
    }
    ensure(worst <= 1e-12, format!("max |K₃ closed − series| = {worst:.2e} over 100 configs (tol 1e-12)"))
}

fn cli_golden() -> Check {
    let bin = env!("CARGO_BIN_EXE_k2p2");
    let compare = Command::new(bin)
        .args(["--mode", "oracle-compare"])
        .env_remove("K2P2_TOL")
        .output()
        .map_err(|e| e.to_string())?;
    let code = compare.status.code();

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("coefficients.csv");
    let emit = Command::new(bin)
        .args(["--mode", "coefficients", "--out"])
        .arg(&path)
        .output()
        .map_err(|e| e.to_string())?;
    if !emit.status.success() {
        return Err(format!("coefficients run exited with {:?}", emit.status.code()));
    }
    let text = fs::read_to_string(&path).map_err(|e| e.to_string())?;
    let tables = parse_coefficient_tables(&text, &path).map_err(|e| e.to_string())?;
    let identical = write_coefficient_tables(&tables) == text;
    ensure(
        code == Some(0) && identical && tables.len() == 2,
        format!(
            "oracle-compare exit {code:?}; coefficients CSV ({} bytes, {} tables) round-trips byte-identically: {identical}",
            text.len(),
            tables.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: "AC1", name: "Kronecker-delta node property", budget: Duration::from_secs(1), run: kronecker },
        Criterion { id: "AC2", name: "trigonometric exactness", budget: Duration::from_secs(5), run: trig_exactness },
        Criterion { id: "AC3", name: "closed form equals dense oracle", budget: Duration::from_secs(10), run: closed_vs_oracle },
        Criterion { id: "AC4", name: "discrete operator identities", budget: Duration::from_secs(2), run: operator_identities },
        Criterion { id: "AC5", name: "convergence ordering", budget: Duration::from_secs(2), run: convergence_ordering },
        Criterion { id: "AC6", name: "error-functional norm", budget: Duration::from_secs(1), run: norm_checks },
        Criterion { id: "AC7", name: "K3 closed form vs series", budget: Duration::from_secs(1), run: k3_series },
        Criterion { id: "AC8", name: "CLI golden files", budget: Duration::from_secs(5), run: cli_golden },
    ];

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let in_budget = elapsed <= c.budget;
        let (ok, detail) = match result {
            Ok(d) => (in_budget, d),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} {} {}: {} [{:.3}s, budget {}s{}]",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            detail,
            elapsed.as_secs_f64(),
            c.budget.as_secs(),
            if in_budget { "" } else { ", OVER BUDGET" }
        );
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
