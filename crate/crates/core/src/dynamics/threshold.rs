use serde::{Deserialize, Serialize};

use super::iterate::{find_fixed_point, FixedPointOptions, FixedPointReport};
use super::rates::depolarized_t;
use super::{dist, Frame, System};
use crate::error::{Error, Result};
use crate::map::{Bloch, DistillationMap};

/// How a measurement strength β becomes the map parameter λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BetaConvention {
    /// `λ = tanh β`, matching the dense oracle for the Gaussian pointer.
    #[default]
    Tanh,
    /// `λ = tanh²(β/2)`, the literal `h²` reading.
    TanhHalfSquared,
}

impl BetaConvention {
    pub fn lambda(self, beta: f64) -> Result<f64> {
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::ParameterOutOfRange { name: "beta", value: beta, range: "[0, inf)" });
        }
        Ok(match self {
            BetaConvention::Tanh => beta.tanh(),
            BetaConvention::TanhHalfSquared => (beta / 2.0).tanh().powi(2),
        })
    }
}

/// A point on the tracked nontrivial branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchPoint {
    pub beta: f64,
    pub lambda: f64,
    pub location: Bloch,
    pub dominant_modulus: f64,
}

/// Everything besides β that fixes the iterated system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Policy {
    pub frame: Frame,
    pub convention: BetaConvention,
    /// Logical qubit fed back when `k > 1`.
    pub feedback: usize,
}

impl Policy {
    pub fn system(self, map: &DistillationMap, lambda: f64) -> System<'_> {
        let mut sys = System::new(map, lambda).with_frame(self.frame);
        sys.feedback = self.feedback;
        sys
    }
}

/// Largest jump between consecutive branch points that still counts as the
/// same branch.
const MAX_BRANCH_JUMP: f64 = 0.25;

fn point(beta: f64, lambda: f64, fp: &FixedPointReport) -> BranchPoint {
    BranchPoint { beta, lambda, location: fp.location, dominant_modulus: fp.dominant_modulus }
}

/// Continues the branch from `prev` to `beta`. Tries Newton from the warm
/// start first and falls back to iteration plus Newton.
fn track(map: &DistillationMap, beta: f64, prev: Bloch, policy: Policy) -> Result<Option<BranchPoint>> {
    let lambda = policy.convention.lambda(beta)?;
    let sys = policy.system(map, lambda);
    let accept = |fp: &FixedPointReport| fp.is_nontrivial_stable() && dist(fp.location, prev) < MAX_BRANCH_JUMP;
    let warm = FixedPointOptions { newton_only: true, ..FixedPointOptions::default() };
    if let Ok(fp) = find_fixed_point(&sys, prev, &warm) {
        if accept(&fp) {
            return Ok(Some(point(beta, lambda, &fp)));
        }
    }
    match find_fixed_point(&sys, prev, &FixedPointOptions::default()) {
        Ok(fp) if accept(&fp) => Ok(Some(point(beta, lambda, &fp))),
        _ => Ok(None),
    }
}

/// Tracks the stable nontrivial fixed point through `betas` in order,
/// starting by plain iteration from `seed`. Stops at the first β where the
/// branch is lost; the returned points are those found before that.
pub fn continuation(map: &DistillationMap, betas: &[f64], seed: Bloch, policy: Policy) -> Result<Vec<BranchPoint>> {
    let mut out: Vec<BranchPoint> = Vec::with_capacity(betas.len());
    let Some((&first, rest)) = betas.split_first() else { return Ok(out) };
    let lambda = policy.convention.lambda(first)?;
    let sys = policy.system(map, lambda);
    let fp = find_fixed_point(&sys, seed, &FixedPointOptions::default())?;
    if !fp.is_nontrivial_stable() {
        return Ok(out);
    }
    out.push(point(first, lambda, &fp));
    for &beta in rest {
        let prev = out.last().expect("nonempty").location;
        match track(map, beta, prev, policy)? {
            Some(p) => out.push(p),
            None => break,
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdOptions {
    pub beta_lo: f64,
    pub beta_hi: f64,
    pub tol_beta: f64,
    /// Continuation step used before bisection.
    pub step: f64,
    pub policy: Policy,
    pub seed: Bloch,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        Self {
            beta_lo: 0.5,
            beta_hi: 4.0,
            tol_beta: 1e-3,
            step: 0.05,
            policy: Policy::default(),
            seed: depolarized_t(0.01),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    /// Midpoint of the final bracket.
    pub beta_star: f64,
    pub lambda_star: f64,
    /// `[β without branch, β with branch]`, width at most `tol_beta`.
    pub bracket: [f64; 2],
    /// Tracked branch, β descending.
    pub eigen_trace: Vec<BranchPoint>,
    pub policy: Policy,
}

/// Critical measurement strength: continuation down from `beta_hi` in
/// steps of `step`, then bisection on the last interval where the stable
/// nontrivial branch disappears.
pub fn threshold(map: &DistillationMap, opts: &ThresholdOptions) -> Result<ThresholdReport> {
    let ThresholdOptions { beta_lo, beta_hi, tol_beta, step, policy, seed } = *opts;
    if !(beta_lo >= 0.0 && beta_lo < beta_hi && beta_hi.is_finite()) {
        return Err(Error::BracketInvalid(format!("need 0 <= beta_lo < beta_hi, got [{beta_lo}, {beta_hi}]")));
    }
    if !(tol_beta > 0.0) {
        return Err(Error::ParameterOutOfRange { name: "tol_beta", value: tol_beta, range: "(0, inf)" });
    }
    if !(step > 0.0) {
        return Err(Error::ParameterOutOfRange { name: "step", value: step, range: "(0, inf)" });
    }

    let count = ((beta_hi - beta_lo) / step).ceil() as usize;
    let betas: Vec<f64> = (0..=count).map(|i| (beta_hi - i as f64 * step).max(beta_lo)).collect();
    let mut trace = continuation(map, &betas, seed, policy)?;
    if trace.is_empty() {
        return Err(Error::BracketInvalid(format!("no stable nontrivial fixed point at beta_hi={beta_hi}")));
    }
    if trace.len() == betas.len() {
        return Err(Error::BracketInvalid(format!("branch persists down to beta_lo={beta_lo}")));
    }

    let mut hi = *trace.last().expect("nonempty");
    let mut lo = betas[trace.len()];
    while hi.beta - lo > tol_beta {
        let mid = 0.5 * (lo + hi.beta);
        match track(map, mid, hi.location, policy)? {
            Some(p) => {
                trace.push(p);
                hi = p;
            }
            None => lo = mid,
        }
    }
    let beta_star = 0.5 * (lo + hi.beta);
    Ok(ThresholdReport {
        beta_star,
        lambda_star: policy.convention.lambda(beta_star)?,
        bracket: [lo, hi.beta],
        eigen_trace: trace,
        policy,
    })
}
