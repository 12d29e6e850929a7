//! Raw-state cost of recursive distillation in the ideal (polylogarithmic)
//! and measurement-limited (polynomial) regimes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on recursion levels considered before giving up.
pub const MAX_LEVELS: u32 = 1024;

fn check_code(n: usize, k: usize) -> Result<f64> {
    if k == 0 || n <= k {
        return Err(Error::ParameterOutOfRange { name: "n/k", value: n as f64 / k as f64, range: "n > k >= 1" });
    }
    Ok(n as f64 / k as f64)
}

fn check_open_unit(name: &'static str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::ParameterOutOfRange { name, value: v, range: "(0, 1)" });
    }
    Ok(())
}

/// `γ = log(n/k)/log d`, the polylog exponent of the ideal cost.
pub fn gamma_exponent(n: usize, k: usize, d: f64) -> Result<f64> {
    let ratio = check_code(n, k)?;
    if !(d >= 2.0 && d.is_finite()) {
        return Err(Error::ParameterOutOfRange { name: "d", value: d, range: "[2, inf)" });
    }
    Ok(ratio.ln() / d.ln())
}

/// `τ = log(n/k)/log(1/k′)`, the polynomial exponent of the linear cost.
pub fn tau_exponent(n: usize, k: usize, k_prime: f64) -> Result<f64> {
    let ratio = check_code(n, k)?;
    check_open_unit("k_prime", k_prime)?;
    Ok(ratio.ln() / (1.0 / k_prime).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum Regime {
    /// `ε_{l+1} = k′·ε_l`.
    Linear { k_prime: f64 },
    /// `ε_{l+1} = c·ε_l^d`.
    Ideal { d: f64, c: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostQuery {
    pub n: usize,
    pub k: usize,
    pub eps_raw: f64,
    pub eps_target: f64,
    pub regime: Regime,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub query: CostQuery,
    /// τ (linear) or γ (ideal).
    pub exponent: f64,
    /// Real-valued level count solving the recursion exactly.
    pub smooth_levels: f64,
    /// `(n/k)^smooth_levels`.
    pub smooth_cost: f64,
    /// Smallest integer level count reaching the target.
    pub levels: u32,
    /// `(n/k)^levels`; may overflow to infinity, see `log_cost`.
    pub cost: f64,
    /// `levels · ln(n/k)`.
    pub log_cost: f64,
    /// Exact integer cost when `k` divides `n` and it fits in `u128`.
    pub cost_exact: Option<u128>,
}

/// Recursion depth `l*` and raw-state cost `(n/k)^{l*}` to take `ε_raw`
/// down to `ε_target`.
pub fn levels_and_cost(q: &CostQuery) -> Result<CostReport> {
    let ratio = check_code(q.n, q.k)?;
    check_open_unit("eps_raw", q.eps_raw)?;
    check_open_unit("eps_target", q.eps_target)?;
    let target = q.eps_target.ln();
    let raw = q.eps_raw.ln();
    // Small slack so that exactly-hit targets do not round up a level.
    let slack = 1e-12 * target.abs().max(1.0);

    let (exponent, smooth_levels, levels) = match q.regime {
        Regime::Linear { k_prime } => {
            let tau = tau_exponent(q.n, q.k, k_prime)?;
            let smooth = ((target - raw) / k_prime.ln()).max(0.0);
            let levels = (smooth - 1e-9).ceil().max(0.0);
            if levels > MAX_LEVELS as f64 {
                return Err(Error::GuardExceeded {
                    what: "recursion levels",
                    value: levels as usize,
                    limit: MAX_LEVELS as usize,
                });
            }
            (tau, smooth, levels as u32)
        }
        Regime::Ideal { d, c } => {
            let gamma = gamma_exponent(q.n, q.k, d)?;
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::ParameterOutOfRange { name: "c", value: c, range: "(0, inf)" });
            }
            let shift = c.ln() / (d - 1.0);
            // ln ε_l = d^l·(ln ε_r + shift) − shift
            let slope = raw + shift;
            if q.eps_target < q.eps_raw && slope >= 0.0 {
                return Err(Error::Unreachable { regime: "ideal", raw: q.eps_raw, target: q.eps_target });
            }
            let log_eps = |l: u32| d.powf(l as f64) * slope - shift;
            let smooth = if slope < 0.0 {
                let u = (target + shift) / slope;
                if u > 1.0 {
                    u.ln() / d.ln()
                } else {
                    0.0
                }
            } else {
                0.0
            };
            let levels = (0..=MAX_LEVELS).find(|&l| log_eps(l) <= target + slack).ok_or(Error::GuardExceeded {
                what: "recursion levels",
                value: MAX_LEVELS as usize + 1,
                limit: MAX_LEVELS as usize,
            })?;
            (gamma, smooth, levels)
        }
    };

    let cost_exact = (q.n % q.k == 0).then(|| ((q.n / q.k) as u128).checked_pow(levels)).flatten();
    Ok(CostReport {
        query: *q,
        exponent,
        smooth_levels,
        smooth_cost: ratio.powf(smooth_levels),
        levels,
        cost: ratio.powi(levels as i32),
        log_cost: levels as f64 * ratio.ln(),
        cost_exact,
    })
}
