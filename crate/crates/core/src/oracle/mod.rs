//! Dense density-matrix oracle. Deliberately naive: explicit `2^n × 2^n`
//! complex matrices, measurement operators applied one generator at a time.
//!
//! Kronecker order puts qubit 0 in the leftmost factor.

mod probe;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use probe::{
    oracle_single_flip_probe, single_flip_probe_factorized, single_flip_probe_state_vector, FlipClass,
    FlipContribution, SingleFlipProbe,
};

use crate::code::StabilizerCode;
use crate::error::{Error, Result};
use crate::map::{logical_products, Bloch, Evaluation, LogicalState};
use crate::measurement::{MeasurementModel, Outcome};
use crate::pauli::{Pauli, PauliOperator};

pub type DenseOperator = DMatrix<Complex64>;

pub const MAX_ORACLE_QUBITS: usize = 10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn guard(n: usize) -> Result<()> {
    if n > MAX_ORACLE_QUBITS {
        Err(Error::GuardExceeded { what: "oracle qubits", value: n, limit: MAX_ORACLE_QUBITS })
    } else {
        Ok(())
    }
}

fn letter_matrix(p: Pauli) -> DenseOperator {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match p {
        Pauli::I => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        Pauli::X => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        Pauli::Y => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        Pauli::Z => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

fn kron_all(factors: impl IntoIterator<Item = DenseOperator>) -> DenseOperator {
    factors.into_iter().fold(DMatrix::from_element(1, 1, c(1.0, 0.0)), |acc, f| acc.kronecker(&f))
}

pub fn identity(n: usize) -> DenseOperator {
    DMatrix::identity(1 << n, 1 << n)
}

/// `i^phase · σ_0 ⊗ … ⊗ σ_{n−1}`.
pub fn dense_pauli(p: &PauliOperator) -> Result<DenseOperator> {
    guard(p.num_qubits())?;
    let phase = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][p.phase() as usize];
    Ok(kron_all(p.letters().into_iter().map(letter_matrix)) * phase)
}

/// `(I + xX + yY + zZ)/2`.
pub fn single_qubit_density(r: Bloch) -> DenseOperator {
    let mut m = letter_matrix(Pauli::I);
    m += letter_matrix(Pauli::X) * c(r[0], 0.0);
    m += letter_matrix(Pauli::Y) * c(r[1], 0.0);
    m += letter_matrix(Pauli::Z) * c(r[2], 0.0);
    m * c(0.5, 0.0)
}

pub fn product_density(inputs: &[Bloch]) -> Result<DenseOperator> {
    guard(inputs.len())?;
    Ok(kron_all(inputs.iter().map(|&r| single_qubit_density(r))))
}

/// `M̃(g) = a₊·P₊ + a₋·P₋` with `P± = (I ± g)/2`.
pub fn measurement_operator(g: &PauliOperator, model: &MeasurementModel, outcome: Outcome) -> Result<DenseOperator> {
    let (a_plus, a_minus) = model.amplitudes(outcome);
    let id = identity(g.num_qubits());
    let gm = dense_pauli(g)?;
    let p_plus = (&id + &gm) * c(0.5, 0.0);
    let p_minus = (&id - &gm) * c(0.5, 0.0);
    Ok(p_plus * c(a_plus, 0.0) + p_minus * c(a_minus, 0.0))
}

/// Largest entry of `M̃₊†M̃₊ + M̃₋†M̃₋ − I` for the given observable.
pub fn povm_completeness_error(g: &PauliOperator, model: &MeasurementModel) -> Result<f64> {
    let mp = measurement_operator(g, model, Outcome::Plus)?;
    let mm = measurement_operator(g, model, Outcome::Minus)?;
    let sum = mp.adjoint() * &mp + mm.adjoint() * &mm - identity(g.num_qubits());
    Ok(sum.iter().map(|v| v.norm()).fold(0.0, f64::max))
}

/// `∏_i M̃₊(g_i)` in generator order.
pub fn noisy_code_operator(code: &StabilizerCode, model: &MeasurementModel) -> Result<DenseOperator> {
    let mut out = identity(code.n);
    for g in &code.generators {
        out = measurement_operator(g, model, Outcome::Plus)? * out;
    }
    Ok(out)
}

/// `P̄_x = ∏_i (I + (−1)^{x_i} g_i)/2`, bit `i` of `syndrome` being `x_i`.
pub fn oracle_subspace_projectors(code: &StabilizerCode, syndrome: u64) -> Result<DenseOperator> {
    guard(code.n)?;
    let id = identity(code.n);
    let mut out = id.clone();
    for (i, g) in code.generators.iter().enumerate() {
        let s = if syndrome >> i & 1 == 1 { -1.0 } else { 1.0 };
        let factor = (&id + dense_pauli(g)? * c(s, 0.0)) * c(0.5, 0.0);
        out = factor * out;
    }
    Ok(out)
}

/// `Σ_x f1^{m−|x|} f2^{|x|} P̄_x`.
pub fn subspace_expansion(code: &StabilizerCode, model: &MeasurementModel) -> Result<DenseOperator> {
    let m = code.generators.len();
    let (f1, f2) = model.amplitudes(Outcome::Plus);
    let mut out = DMatrix::zeros(1 << code.n, 1 << code.n);
    for x in 0u64..(1 << m) {
        let flips = x.count_ones() as i32;
        let w = f1.powi(m as i32 - flips) * f2.powi(flips);
        out += oracle_subspace_projectors(code, x)? * c(w, 0.0);
    }
    Ok(out)
}

/// Literal post-selected noisy measurement of every generator on a product
/// input, followed by logical expectations `Tr[ρ P̄]/Tr[ρ]`.
pub fn oracle_distill(code: &StabilizerCode, inputs: &[Bloch], model: &MeasurementModel) -> Result<Evaluation> {
    let order: Vec<usize> = (0..code.generators.len()).collect();
    oracle_distill_ordered(code, inputs, model, &order)
}

/// [`oracle_distill`] with the generators measured in the given order.
pub fn oracle_distill_ordered(
    code: &StabilizerCode,
    inputs: &[Bloch],
    model: &MeasurementModel,
    order: &[usize],
) -> Result<Evaluation> {
    if inputs.len() != code.n {
        return Err(Error::SizeMismatch { left: code.n, right: inputs.len() });
    }
    let mut rho = product_density(inputs)?;
    for &i in order {
        let g = code.generators.get(i).ok_or(Error::IndexOutOfRange { index: i, len: code.generators.len() })?;
        let m = measurement_operator(g, model, Outcome::Plus)?;
        rho = &m * rho * m.adjoint();
    }
    let trace = rho.trace().re;
    if trace <= crate::map::MIN_DENOMINATOR * 2f64.powi(-(code.generators.len() as i32)) {
        return Err(Error::UndefinedPostSelection { weight: trace });
    }
    let expectations = logical_products(code)
        .iter()
        .map(|p| Ok((&rho * dense_pauli(p)?).trace().re / trace))
        .collect::<Result<Vec<_>>>()?;
    Ok(Evaluation { state: LogicalState { k: code.k, expectations }, success_probability: trace })
}
