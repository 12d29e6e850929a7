use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use super::deviation::linear_fit;
use super::iterate::{find_fixed_point, FixedPointOptions};
use super::{dist, System};
use crate::error::{Error, Result};
use crate::map::{norm, Bloch};

/// Bloch vector of `|T⟩ = (|0⟩ + e^{iπ/4}|1⟩)/√2`.
pub fn t_direction() -> Bloch {
    [FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]
}

/// `(1−2ε)|T⟩⟨T| + 2ε·I/2`, whose infidelity to `|T⟩` is ε.
pub fn depolarized_t(eps: f64) -> Bloch {
    t_direction().map(|c| (1.0 - 2.0 * eps) * c)
}

fn infidelity(r: Bloch) -> f64 {
    let t = t_direction();
    (1.0 - (r[0] * t[0] + r[1] * t[1] + r[2] * t[2])) / 2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub lambda: f64,
    pub fixed_point: Bloch,
    /// Estimator (a): dominant eigenvalue modulus of the Jacobian.
    pub jacobian_modulus: f64,
    /// Estimator (b): growth rate of a renormalized perturbation under the
    /// map itself. `None` when the map is superlinear at the fixed point.
    pub trajectory_estimate: Option<f64>,
    /// `|a − b|` when both exist.
    pub agreement: Option<f64>,
    /// Dominant modulus below 1e-6: convergence is faster than linear.
    pub superlinear: bool,
    /// Local order `d` in `ε_out ∝ ε_in^d`, measured only when superlinear.
    pub order_estimate: Option<f64>,
}

const PERTURBATION: f64 = 1e-3;
const POWER_STEPS: usize = 60;
const WINDOW: usize = 10;
const SUPERLINEAR_MODULUS: f64 = 1e-6;

/// Power iteration on finite differences of the map: `r* ± δv` are both
/// mapped, the half-difference becomes the next direction, and the growth
/// factors of the last window are averaged geometrically.
fn paired_growth(sys: &System, center: Bloch, delta: f64) -> Result<Option<f64>> {
    let mut v = {
        let raw = [1.0, 0.618, 0.382];
        let l = norm(raw);
        raw.map(|c| c / l)
    };
    let mut log_sum = 0.0;
    for m in 0..POWER_STEPS {
        let plus = sys.step_unchecked([0, 1, 2].map(|i| center[i] + delta * v[i]))?;
        let minus = sys.step_unchecked([0, 1, 2].map(|i| center[i] - delta * v[i]))?;
        let d = [0, 1, 2].map(|i| (plus[i] - minus[i]) / 2.0);
        let len = norm(d);
        if !(len > 0.0) {
            return Ok(None);
        }
        if m >= POWER_STEPS - WINDOW {
            log_sum += (len / delta).ln();
        }
        v = d.map(|c| c / len);
    }
    Ok(Some((log_sum / WINDOW as f64).exp()))
}

/// Linear convergence rate `k′` at the nontrivial fixed point reached from
/// `seed`, estimated two independent ways.
pub fn convergence_rate(sys: &System, seed: Bloch) -> Result<ConvergenceReport> {
    let fp = find_fixed_point(sys, seed, &FixedPointOptions::default())?;
    if !fp.is_nontrivial_stable() {
        return Err(Error::NoStableFixedPoint(format!(
            "{:?} at lambda={} (dominant modulus {})",
            fp.classification, sys.lambda, fp.dominant_modulus
        )));
    }
    let r = fp.location;
    if fp.dominant_modulus < SUPERLINEAR_MODULUS {
        let inward = r.map(|c| -c / norm(r));
        let out_dist = |e: f64| -> Result<f64> {
            let start = [0, 1, 2].map(|i| r[i] + e * inward[i]);
            Ok(dist(sys.step(start)?.next, r))
        };
        let (a, b) = (out_dist(1e-2)?, out_dist(2e-2)?);
        let order = (a > 0.0 && b > 0.0).then(|| (b / a).ln() / 2f64.ln());
        return Ok(ConvergenceReport {
            lambda: sys.lambda,
            fixed_point: r,
            jacobian_modulus: fp.dominant_modulus,
            trajectory_estimate: None,
            agreement: None,
            superlinear: true,
            order_estimate: order,
        });
    }
    let coarse = paired_growth(sys, r, PERTURBATION)?;
    let fine = paired_growth(sys, r, PERTURBATION / 2.0)?;
    // Central differences leave an O(δ²) bias; one Richardson step removes it.
    let estimate = match (coarse, fine) {
        (Some(c), Some(f)) => Some((4.0 * f - c) / 3.0),
        _ => None,
    };
    Ok(ConvergenceReport {
        lambda: sys.lambda,
        fixed_point: r,
        jacobian_modulus: fp.dominant_modulus,
        trajectory_estimate: estimate,
        agreement: estimate.map(|e| (e - fp.dominant_modulus).abs()),
        superlinear: false,
        order_estimate: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuppressionFit {
    /// Fitted `d` in `ε_out ≈ c·ε_in^d`.
    pub order: f64,
    pub prefactor: f64,
    pub r_squared: f64,
    pub eps_in: Vec<f64>,
    pub eps_out: Vec<f64>,
}

/// `count` log-spaced values on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    (0..count).map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (count - 1) as f64).exp()).collect()
}

fn fit(eps_in: Vec<f64>, eps_out: Vec<f64>) -> Result<SuppressionFit> {
    if let Some(v) = eps_out.iter().find(|v| !(**v > 0.0)) {
        return Err(Error::DegenerateFit(format!("output error {v} is not positive")));
    }
    let x: Vec<f64> = eps_in.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = eps_out.iter().map(|v| v.ln()).collect();
    let f = linear_fit(&x, &y)?;
    Ok(SuppressionFit { order: f.slope, prefactor: f.intercept.exp(), r_squared: f.r_squared, eps_in, eps_out })
}

fn check_grid(eps: &[f64], upper: f64) -> Result<()> {
    if eps.len() < 2 {
        return Err(Error::DegenerateFit(format!("need at least 2 grid points, got {}", eps.len())));
    }
    if let Some(&e) = eps.iter().find(|e| !(**e > 0.0 && **e < upper)) {
        return Err(Error::ParameterOutOfRange { name: "eps", value: e, range: "(0, 0.5)" });
    }
    Ok(())
}

/// One-step infidelity map for depolarized-`|T⟩` inputs, fitted in log-log.
pub fn suppression_order_fit(sys: &System, eps: &[f64]) -> Result<SuppressionFit> {
    check_grid(eps, 0.5)?;
    let out = eps.iter().map(|&e| Ok(infidelity(sys.step(depolarized_t(e))?.next))).collect::<Result<Vec<_>>>()?;
    fit(eps.to_vec(), out)
}

/// Same fit measured against a fixed point instead of `|T⟩`: inputs sit at
/// distance `δ` inward from `fixed_point`, outputs are distances to it.
pub fn suppression_order_fit_relative(sys: &System, fixed_point: Bloch, distances: &[f64]) -> Result<SuppressionFit> {
    check_grid(distances, 1.0)?;
    let len = norm(fixed_point);
    if len == 0.0 {
        return Err(Error::DegenerateFit("fixed point at the origin has no inward direction".into()));
    }
    let inward = fixed_point.map(|c| -c / len);
    let out = distances
        .iter()
        .map(|&d| {
            let start = [0, 1, 2].map(|i| fixed_point[i] + d * inward[i]);
            Ok(dist(sys.step(start)?.next, fixed_point))
        })
        .collect::<Result<Vec<_>>>()?;
    fit(distances.to_vec(), out)
}
