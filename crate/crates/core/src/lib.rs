//! Magic-state distillation under imperfect stabilizer measurements.
//!
//! A stabilizer code is compiled into an exact rational map on logical Pauli
//! expectations ([`map::DistillationMap`]); [`dynamics`] analyzes that map as a
//! discrete dynamical system, [`cost`] turns suppression behavior into raw
//! state counts, and [`oracle`] recomputes everything with dense matrices.

// Negated comparisons are deliberate: they reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod code;
pub mod cost;
pub mod dynamics;
pub mod error;
pub mod map;
pub mod measurement;
pub mod oracle;
pub mod pauli;

pub use code::{Convention, StabilizerCode};
pub use dynamics::{Frame, System};
pub use error::{Error, Result};
pub use map::{Bloch, DistillationMap, Evaluation, LogicalState};
pub use measurement::{MeasurementModel, Outcome};
pub use pauli::{Pauli, PauliOperator};
