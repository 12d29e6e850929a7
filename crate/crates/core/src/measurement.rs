//! Measurement-noise parameterizations, all reduced to the map coefficient λ.
//!
//! With `M̃₊(g) = f1·P₊ + f2·P₋` and `f1² + f2² = 1`, the normalized squared
//! operator is `(I + λ g)/2` with `λ = f1² − f2²`. The map depends on λ only.

use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasurementModel {
    /// Gaussian pointer noise of strength β: `M̃₊ ∝ exp(βg/2)`.
    Gaussian { beta: f64 },
    /// `M̃₊ ∝ I + h·g`.
    CoefficientH { h: f64 },
    /// Binary symmetric outcome flip with contrast η.
    BinaryEta { eta: f64 },
    /// The map coefficient itself.
    RawLambda { lambda: f64 },
    /// Continuous Gaussian readout of strength κ, thresholded at zero.
    ContinuousGaussian { kappa: f64 },
}

/// Which POVM element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Plus,
    Minus,
}

impl MeasurementModel {
    pub fn gaussian(beta: f64) -> Result<Self> {
        Self::Gaussian { beta }.validated()
    }

    pub fn coefficient_h(h: f64) -> Result<Self> {
        Self::CoefficientH { h }.validated()
    }

    pub fn binary_eta(eta: f64) -> Result<Self> {
        Self::BinaryEta { eta }.validated()
    }

    pub fn raw_lambda(lambda: f64) -> Result<Self> {
        Self::RawLambda { lambda }.validated()
    }

    pub fn continuous_gaussian(kappa: f64) -> Result<Self> {
        Self::ContinuousGaussian { kappa }.validated()
    }

    /// Returns `self` if its parameter is in range.
    pub fn validated(self) -> Result<Self> {
        let unit = |name, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::ParameterOutOfRange { name, value: v, range: "[0, 1]" })
            }
        };
        let nonneg = |name, v: f64| {
            if v >= 0.0 {
                Ok(())
            } else {
                Err(Error::ParameterOutOfRange { name, value: v, range: "[0, inf]" })
            }
        };
        match self {
            Self::Gaussian { beta } => nonneg("beta", beta),
            Self::CoefficientH { h } => unit("h", h),
            Self::BinaryEta { eta } => unit("eta", eta),
            Self::RawLambda { lambda } => unit("lambda", lambda),
            Self::ContinuousGaussian { kappa } => nonneg("kappa", kappa),
        }?;
        Ok(self)
    }

    pub fn lambda(&self) -> f64 {
        match *self {
            Self::Gaussian { beta } => beta.tanh(),
            Self::CoefficientH { h } => 2.0 * h / (1.0 + h * h),
            Self::BinaryEta { eta } => eta,
            Self::RawLambda { lambda } => lambda,
            Self::ContinuousGaussian { kappa } => erf((kappa / 2.0).sqrt()),
        }
    }

    /// Gaussian strength with the same λ: `atanh λ` (infinite when ideal).
    pub fn equivalent_beta(&self) -> f64 {
        match *self {
            Self::Gaussian { beta } => beta,
            _ => self.lambda().atanh(),
        }
    }

    /// Relative weight `(1−λ)/(1+λ)` of the wrong eigenspace in `M̃₊²`.
    pub fn first_order_factor(&self) -> f64 {
        match *self {
            Self::Gaussian { beta } => (-2.0 * beta).exp(),
            _ => {
                let l = self.lambda();
                (1.0 - l) / (1.0 + l)
            }
        }
    }

    /// `(f1, f2)`: amplitudes of `M̃₊` on the +1 and −1 eigenspaces.
    fn plus_amplitudes(&self) -> (f64, f64) {
        match *self {
            Self::Gaussian { beta } => gaussian_amplitudes(beta),
            Self::ContinuousGaussian { .. } => gaussian_amplitudes(self.equivalent_beta()),
            Self::CoefficientH { h } => {
                let norm = (2.0 * (1.0 + h * h)).sqrt();
                ((1.0 + h) / norm, (1.0 - h) / norm)
            }
            Self::BinaryEta { eta: l } | Self::RawLambda { lambda: l } => {
                (((1.0 + l) / 2.0).sqrt(), ((1.0 - l) / 2.0).sqrt())
            }
        }
    }

    /// Amplitudes `(on P₊, on P₋)` of the chosen POVM element. `M̃₋` carries
    /// `√(1−f1²)` on P₊ and `√(1−f2²)` on P₋.
    pub fn amplitudes(&self, outcome: Outcome) -> (f64, f64) {
        let (f1, f2) = self.plus_amplitudes();
        match outcome {
            Outcome::Plus => (f1, f2),
            Outcome::Minus => ((1.0 - f1 * f1).max(0.0).sqrt(), (1.0 - f2 * f2).max(0.0).sqrt()),
        }
    }
}

fn gaussian_amplitudes(beta: f64) -> (f64, f64) {
    let q = (-2.0 * beta).exp();
    let norm = (1.0 + q).sqrt();
    (1.0 / norm, (-beta).exp() / norm)
}

/// Free-function form of [`MeasurementModel::lambda`] with range checking.
pub fn lambda_of(model: &MeasurementModel) -> Result<f64> {
    Ok(model.validated()?.lambda())
}

impl fmt::Display for MeasurementModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Gaussian { beta } => write!(f, "beta={beta}"),
            Self::CoefficientH { h } => write!(f, "h={h}"),
            Self::BinaryEta { eta } => write!(f, "eta={eta}"),
            Self::RawLambda { lambda } => write!(f, "lambda={lambda}"),
            Self::ContinuousGaussian { kappa } => write!(f, "kappa={kappa}"),
        }
    }
}
