//! The distillation map as a discrete dynamical system on the Bloch ball.

mod deviation;
mod eigen;
mod flow;
mod iterate;
mod rates;
mod seeds;
mod threshold;

use serde::{Deserialize, Serialize};

pub use deviation::{
    bias_decomposition, deviation_scan, fit_log_slope, BiasDecomposition, DeviationPoint, DeviationScan, LogFit,
};
pub use eigen::{dominant_eigenvalue, eigenvalues, Matrix3};
pub use flow::{flow_grid, Basin, FlowRecord, GridSpec};
pub use iterate::{
    find_fixed_point, iterate, Classification, FixedPointOptions, FixedPointReport, IterateOptions, Trajectory,
};
pub use rates::{
    convergence_rate, depolarized_t, log_grid, suppression_order_fit, suppression_order_fit_relative, t_direction,
    ConvergenceReport, SuppressionFit,
};
pub use seeds::{quasi_random_seeds, R3_PHI};
pub use threshold::{continuation, threshold, BetaConvention, BranchPoint, Policy, ThresholdOptions, ThresholdReport};

use crate::error::Result;
use crate::map::{Bloch, DistillationMap};

/// Radius below which a state counts as the trivial (maximally mixed) point.
pub const TRIVIAL_RADIUS: f64 = 1e-6;

/// Largest tolerated difference between logical marginals when `k > 1`.
pub const ASYMMETRY_TOLERANCE: f64 = 1e-9;

/// How the output Bloch vector is fed back as the next input.
///
/// Transversal-T codes map `|T⟩` inputs to a logical `|T†⟩` with
/// `Ȳ = i·X̄·Z̄`, so the raw map has a `T ↔ T†` two-cycle. `Conjugate` undoes
/// this by flipping `y` on feedback (logical complex conjugation).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    Identity,
    #[default]
    Conjugate,
}

impl Frame {
    fn apply(self, mut r: Bloch) -> Bloch {
        if self == Frame::Conjugate {
            r[1] = -r[1];
        }
        r
    }
}

/// One map application in a fixed frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub next: Bloch,
    pub success_probability: f64,
    /// Max difference between logical marginals (0 for `k = 1`).
    pub asymmetry: f64,
}

/// A map at fixed λ together with its feedback policy.
#[derive(Debug, Clone, Copy)]
pub struct System<'a> {
    pub map: &'a DistillationMap,
    pub lambda: f64,
    pub frame: Frame,
    /// Logical qubit whose marginal is fed back.
    pub feedback: usize,
}

impl<'a> System<'a> {
    pub fn new(map: &'a DistillationMap, lambda: f64) -> Self {
        Self { map, lambda, frame: Frame::default(), feedback: 0 }
    }

    pub fn with_frame(mut self, frame: Frame) -> Self {
        self.frame = frame;
        self
    }

    pub fn step(&self, r: Bloch) -> Result<Step> {
        if self.map.num_logical() == 1 {
            let (b, p) = self.map.evaluate_marginal(r, self.lambda, 0)?;
            return Ok(Step { next: self.frame.apply(b), success_probability: p, asymmetry: 0.0 });
        }
        let e = self.map.evaluate(r, self.lambda)?;
        Ok(Step {
            next: self.frame.apply(e.state.marginal(self.feedback)?),
            success_probability: e.success_probability,
            asymmetry: e.state.marginal_asymmetry(),
        })
    }

    /// Step without the unit-ball check.
    pub(crate) fn step_unchecked(&self, r: Bloch) -> Result<Bloch> {
        let (b, _) = self.map.marginal_outside_ball(r, self.lambda, self.feedback)?;
        Ok(self.frame.apply(b))
    }

    /// Jacobian of [`step`](Self::step).
    pub fn jacobian(&self, r: Bloch) -> Result<Matrix3> {
        let mut j = self.map.marginal_jacobian(r, self.lambda, self.feedback)?;
        if self.frame == Frame::Conjugate {
            j[1] = j[1].map(|v| -v);
        }
        Ok(j)
    }
}

/// Axis and sign when `r` is within [`TRIVIAL_RADIUS`] of a pure Pauli
/// eigenstate `±e_axis`. Stabilizer states are fixed by every stabilizer
/// protocol, so these poles are fixed points at any λ.
pub fn pauli_pole(r: Bloch) -> Option<(usize, f64)> {
    (0..3).flat_map(|a| [(a, 1.0), (a, -1.0)]).find(|&(a, s)| {
        let mut e = [0.0; 3];
        e[a] = s;
        dist(r, e) < TRIVIAL_RADIUS
    })
}

pub(crate) fn sub(a: Bloch, b: Bloch) -> Bloch {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn dist(a: Bloch, b: Bloch) -> f64 {
    crate::map::norm(sub(a, b))
}
