use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::iterate::{iterate, Classification, IterateOptions};
use super::System;
use crate::error::{Error, Result};
use crate::map::{norm, Bloch};

/// Square grid in the plane of constant `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub z: f64,
    /// Half-width of the square; points run from `-extent` to `extent`.
    pub extent: f64,
    /// Points per axis.
    pub resolution: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { z: 0.0, extent: 1.0, resolution: 21 }
    }
}

impl GridSpec {
    pub fn coordinate(&self, i: usize) -> f64 {
        -self.extent + 2.0 * self.extent * i as f64 / (self.resolution - 1) as f64
    }

    /// Grid points in row-major order (`y` outer, `x` inner).
    pub fn points(&self) -> Vec<Bloch> {
        let n = self.resolution;
        (0..n * n).map(|idx| [self.coordinate(idx % n), self.coordinate(idx / n), self.z]).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basin {
    Nontrivial,
    /// Ends on a Pauli eigenstate, which every code leaves fixed.
    PauliPole,
    Trivial,
    MaxIter,
    DomainError,
    /// Grid point lies outside the Bloch ball.
    Outside,
}

impl Basin {
    pub fn as_str(self) -> &'static str {
        match self {
            Basin::Nontrivial => "nontrivial",
            Basin::PauliPole => "pauli-pole",
            Basin::Trivial => "trivial",
            Basin::MaxIter => "max-iter",
            Basin::DomainError => "domain-error",
            Basin::Outside => "outside",
        }
    }
}

impl From<Classification> for Basin {
    fn from(c: Classification) -> Self {
        match c {
            Classification::NontrivialFixedPoint => Basin::Nontrivial,
            Classification::TrivialFixedPoint => Basin::Trivial,
            Classification::MaxIterations => Basin::MaxIter,
            Classification::DomainError => Basin::DomainError,
        }
    }
}

/// One grid point: its one-step image and where iteration ends up.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowRecord {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub image: Option<Bloch>,
    pub success_probability: Option<f64>,
    pub basin: Basin,
}

fn record(sys: &System, r: Bloch, opts: &IterateOptions) -> FlowRecord {
    let mut rec =
        FlowRecord { x: r[0], y: r[1], z: r[2], image: None, success_probability: None, basin: Basin::Outside };
    if norm(r) > 1.0 {
        return rec;
    }
    match sys.step(r) {
        Ok(s) => {
            rec.image = Some(s.next);
            rec.success_probability = Some(s.success_probability);
        }
        Err(_) => {
            rec.basin = Basin::DomainError;
            return rec;
        }
    }
    rec.basin = match iterate(sys, r, opts) {
        Ok(t) if t.classification == Classification::NontrivialFixedPoint && super::pauli_pole(t.last()).is_some() => {
            Basin::PauliPole
        }
        Ok(t) => t.classification.into(),
        Err(_) => Basin::DomainError,
    };
    rec
}

/// Evaluates every grid point in parallel; output order matches
/// [`GridSpec::points`].
pub fn flow_grid(sys: &System, spec: &GridSpec, opts: &IterateOptions) -> Result<Vec<FlowRecord>> {
    if spec.resolution < 2 {
        return Err(Error::ParameterOutOfRange { name: "resolution", value: spec.resolution as f64, range: ">= 2" });
    }
    if !(spec.extent > 0.0 && spec.extent.is_finite()) {
        return Err(Error::ParameterOutOfRange { name: "extent", value: spec.extent, range: "(0, inf)" });
    }
    let opts = IterateOptions { record: false, ..*opts };
    Ok(spec.points().par_iter().map(|&r| record(sys, r, &opts)).collect())
}
