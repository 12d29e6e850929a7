use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use super::iterate::{find_fixed_point, FixedPointOptions};
use super::rates::convergence_rate;
use super::threshold::Policy;
use crate::error::{Error, Result};
use crate::map::{Bloch, DistillationMap};

/// Pauli-X / Pauli-Y error weights of a state near `|T⟩`:
/// `ρ = (1−m_x−m_y)|T⟩⟨T| + m_x X|T⟩⟨T|X + m_y Y|T⟩⟨T|Y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasDecomposition {
    pub m_x: f64,
    pub m_y: f64,
    pub z_residual: f64,
}

pub fn bias_decomposition(r: Bloch) -> BiasDecomposition {
    BiasDecomposition { m_x: (1.0 - SQRT_2 * r[1]) / 2.0, m_y: (1.0 - SQRT_2 * r[0]) / 2.0, z_residual: r[2] }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationPoint {
    pub beta: f64,
    pub lambda: f64,
    pub location: Bloch,
    pub bias: BiasDecomposition,
    /// Trajectory estimate of the linear rate, when it was computable.
    pub k_prime: Option<f64>,
    pub dominant_modulus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationScan {
    pub points: Vec<DeviationPoint>,
    /// Set when the fixed point was lost before the end of the β list.
    pub truncated: Option<String>,
}

/// Tracks the nontrivial fixed point across `betas` (warm starts, in the
/// given order) and decomposes each into X/Y error weights.
pub fn deviation_scan(map: &DistillationMap, betas: &[f64], policy: Policy) -> Result<DeviationScan> {
    let mut seed = super::rates::depolarized_t(0.01);
    let mut points = Vec::with_capacity(betas.len());
    let mut truncated = None;
    for &beta in betas {
        let lambda = policy.convention.lambda(beta)?;
        let sys = policy.system(map, lambda);
        let fp = find_fixed_point(&sys, seed, &FixedPointOptions::default())?;
        if !fp.is_nontrivial_stable() {
            truncated = Some(format!("no stable nontrivial fixed point at beta={beta}"));
            break;
        }
        seed = fp.location;
        let k_prime = convergence_rate(&sys, fp.location).ok().and_then(|c| c.trajectory_estimate);
        points.push(DeviationPoint {
            beta,
            lambda,
            location: fp.location,
            bias: bias_decomposition(fp.location),
            k_prime,
            dominant_modulus: fp.dominant_modulus,
        });
    }
    Ok(DeviationScan { points, truncated })
}

/// Least-squares line through `(t, ln v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn fit_log_slope(t: &[f64], values: &[f64]) -> Result<LogFit> {
    if t.len() != values.len() || t.len() < 2 {
        return Err(Error::DegenerateFit(format!("need >= 2 paired points, got {} and {}", t.len(), values.len())));
    }
    if let Some(v) = values.iter().find(|v| !(**v > 0.0)) {
        return Err(Error::DegenerateFit(format!("non-positive value {v} in log fit")));
    }
    let y: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    linear_fit(t, &y)
}

pub(crate) fn linear_fit(x: &[f64], y: &[f64]) -> Result<LogFit> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all abscissae equal".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LogFit { slope, intercept: my - slope * mx, r_squared })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::t_direction;

    #[test]
    fn bias_of_pure_states() {
        let b = bias_decomposition(t_direction());
        assert!(b.m_x.abs() < 1e-15 && b.m_y.abs() < 1e-15);
        // X|T><T|X has Bloch (x, -y, -z).
        let t = t_direction();
        let b = bias_decomposition([t[0], -t[1], 0.0]);
        assert!((b.m_x - 1.0).abs() < 1e-15 && b.m_y.abs() < 1e-15);
    }

    #[test]
    fn fit_recovers_exponent() {
        let t: Vec<f64> = (0..6).map(|i| 2.5 + 0.5 * i as f64).collect();
        let v: Vec<f64> = t.iter().map(|b| 3.0 * (-2.0 * b).exp()).collect();
        let f = fit_log_slope(&t, &v).unwrap();
        assert!((f.slope + 2.0).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
        assert!(fit_log_slope(&[1.0], &[1.0]).is_err());
        assert!(fit_log_slope(&[1.0, 2.0], &[1.0, 0.0]).is_err());
        assert!(fit_log_slope(&[1.0, 1.0], &[1.0, 2.0]).is_err());
    }
}
