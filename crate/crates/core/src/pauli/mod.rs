//! Bit-packed Pauli algebra over GF(2).

mod distance;
pub(crate) mod operator;
mod random;
mod standard_form;
mod validate;

pub use distance::{css_distance, CssDistance, MAX_COSET_RANK};
pub use operator::{commutes, multiply, weight_profile, Pauli, PauliOperator, WeightProfile, MAX_QUBITS};
pub use random::random_css_code;
pub use standard_form::{standard_form, ParityCheckMatrix, RowOp, StandardFormResult};
pub use validate::{validate_code, CodeDiagnostics, Violation};
