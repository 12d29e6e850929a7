//! Single-flip decomposition of the noisy post-selected output for an ideal
//! product input `|θ⟩^{⊗n}`, `|θ⟩ = (|0⟩ + e^{iθ}|1⟩)/√2`.
//!
//! `M̃_Q² ∝ Σ_x q^{|x|} P̄_x` with `q = (1−λ)/(1+λ)`, so to first order in `q`
//! the output is the codespace term plus one term per single-flipped syndrome.
//! Each flip either vanishes on the ideal input or reproduces the codespace
//! output up to a logical Pauli.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::code::StabilizerCode;
use crate::error::{Error, Result};
use crate::map::{enumerate_group, Bloch};
use crate::measurement::MeasurementModel;
use crate::pauli::PauliOperator;

/// State-vector size limit for [`single_flip_probe_state_vector`].
pub const MAX_STATE_VECTOR_QUBITS: usize = 20;

const VANISHING: f64 = 1e-12;
const MATCH: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlipClass {
    /// Zero overlap with the input.
    Vanishing,
    /// Same logical state as the codespace term.
    Identity,
    LogicalX,
    LogicalY,
    LogicalZ,
    Other,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlipContribution {
    pub generator: usize,
    /// `'X'` or `'Z'` for CSS generators, `'M'` for mixed.
    pub generator_type: char,
    /// `‖P̄_{e_i}|θ⟩^{⊗n}‖²`.
    pub weight: f64,
    /// Logical Bloch vector (logical qubit 0) of the projected state; zero
    /// when the weight vanishes.
    pub bloch: Bloch,
    pub class: FlipClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleFlipProbe {
    pub theta: f64,
    pub first_order_factor: f64,
    /// Codespace weight `‖P̄_0|θ⟩^{⊗n}‖²`.
    pub p0: f64,
    /// Logical Bloch vector of the codespace term.
    pub target_bloch: Bloch,
    pub flips: Vec<FlipContribution>,
    /// `q · Σ_{logical-X flips} w / p0`.
    pub leading_m_x: f64,
    /// `q · Σ_{logical-Y flips} w / p0`.
    pub leading_m_y: f64,
}

fn classify(weight: f64, b: Bloch, t: Bloch) -> FlipClass {
    if weight <= VANISHING {
        return FlipClass::Vanishing;
    }
    let same = |s: [f64; 3]| (0..3).all(|i| (b[i] - s[i] * t[i]).abs() <= MATCH);
    if same([1.0, 1.0, 1.0]) {
        FlipClass::Identity
    } else if same([1.0, -1.0, -1.0]) {
        FlipClass::LogicalX
    } else if same([-1.0, 1.0, -1.0]) {
        FlipClass::LogicalY
    } else if same([-1.0, -1.0, 1.0]) {
        FlipClass::LogicalZ
    } else {
        FlipClass::Other
    }
}

fn generator_type(g: &PauliOperator) -> char {
    if g.is_x_type() {
        'X'
    } else if g.is_z_type() {
        'Z'
    } else {
        'M'
    }
}

fn assemble(
    code: &StabilizerCode,
    theta: f64,
    model: &MeasurementModel,
    mut syndrome_data: impl FnMut(u64) -> (f64, Bloch),
) -> SingleFlipProbe {
    let (p0, target) = syndrome_data(0);
    let q = model.first_order_factor();
    let flips: Vec<FlipContribution> = (0..code.generators.len())
        .map(|i| {
            let (w, b) = syndrome_data(1 << i);
            let bloch = if w <= VANISHING { [0.0; 3] } else { b };
            FlipContribution {
                generator: i,
                generator_type: generator_type(&code.generators[i]),
                weight: w,
                bloch,
                class: classify(w, b, target),
            }
        })
        .collect();
    let total = |c: FlipClass| flips.iter().filter(|f| f.class == c).fold(0.0, |acc, f| acc + f.weight);
    SingleFlipProbe {
        theta,
        first_order_factor: q,
        p0,
        target_bloch: target,
        leading_m_x: q * total(FlipClass::LogicalX) / p0,
        leading_m_y: q * total(FlipClass::LogicalY) / p0,
        flips,
    }
}

/// Bit mask of index bits: qubit `q` is bit `n − 1 − q` of a basis index.
fn index_mask(mask: u64, n: usize) -> usize {
    (0..n).filter(|q| mask >> q & 1 == 1).map(|q| 1usize << (n - 1 - q)).sum()
}

fn apply_pauli(p: &PauliOperator, v: &[Complex64]) -> Vec<Complex64> {
    let n = p.num_qubits();
    let xm = index_mask(p.x_mask(), n);
    let zm = index_mask(p.z_mask(), n);
    let wy = (p.x_mask() & p.z_mask()).count_ones();
    let pre = Complex64::i().powu((p.phase() as u32 + wy) % 4);
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for (b, amp) in v.iter().enumerate() {
        let s = if (b & zm).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        out[b ^ xm] = pre * amp * s;
    }
    out
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Probe on explicit state vectors (`2^n` amplitudes).
pub fn single_flip_probe_state_vector(
    code: &StabilizerCode,
    theta: f64,
    model: &MeasurementModel,
) -> Result<SingleFlipProbe> {
    let n = code.n;
    if n > MAX_STATE_VECTOR_QUBITS {
        return Err(Error::GuardExceeded { what: "state-vector qubits", value: n, limit: MAX_STATE_VECTOR_QUBITS });
    }
    let phase = Complex64::from_polar(1.0, theta);
    let norm = (0.5f64).powf(n as f64 / 2.0);
    let input: Vec<Complex64> = (0..1usize << n).map(|b| phase.powu(b.count_ones()) * norm).collect();
    let logicals = [code.logical_x[0], code.logical_y(0), code.logical_z[0]];
    Ok(assemble(code, theta, model, |syndrome| {
        let mut psi = input.clone();
        for (i, g) in code.generators.iter().enumerate() {
            let s = if syndrome >> i & 1 == 1 { -0.5 } else { 0.5 };
            let gp = apply_pauli(g, &psi);
            for (a, b) in psi.iter_mut().zip(gp) {
                *a = *a * 0.5 + b * s;
            }
        }
        let w = inner(&psi, &psi).re;
        let bloch = logicals.map(|l| inner(&psi, &apply_pauli(&l, &psi)).re / w);
        (w, bloch)
    }))
}

/// Same decomposition through per-qubit trace products over the stabilizer
/// group: `Tr[P̄_x ρ Q] = 2^{−m} Σ_j (−1)^{x·j} Tr[s_j Q ρ]`.
pub fn single_flip_probe_factorized(
    code: &StabilizerCode,
    theta: f64,
    model: &MeasurementModel,
) -> Result<SingleFlipProbe> {
    let group = enumerate_group(code)?;
    let r = [theta.cos(), theta.sin(), 0.0];
    let trace = |p: &PauliOperator| {
        let mut v = if p.phase() == 0 { 1.0 } else { -1.0 };
        for q in 0..p.num_qubits() {
            v *= match p.letter(q) {
                crate::pauli::Pauli::I => 1.0,
                crate::pauli::Pauli::X => r[0],
                crate::pauli::Pauli::Y => r[1],
                crate::pauli::Pauli::Z => r[2],
            };
        }
        v
    };
    let logicals = [PauliOperator::identity(code.n), code.logical_x[0], code.logical_y(0), code.logical_z[0]];
    // Tr[s_j Q ρ] for every element and Q.
    let table: Vec<(u32, [f64; 4])> =
        group.iter().map(|e| (e.subset, logicals.map(|l| trace(&e.operator.mul_unchecked(&l))))).collect();
    let scale = (-(code.generators.len() as f64)).exp2();
    Ok(assemble(code, theta, model, |syndrome| {
        let mut acc = [0.0; 4];
        for (subset, vals) in &table {
            let s = if (syndrome as u32 & subset).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            for i in 0..4 {
                acc[i] += s * vals[i];
            }
        }
        let w = acc[0] * scale;
        (w, [acc[1] / acc[0], acc[2] / acc[0], acc[3] / acc[0]])
    }))
}

/// State-vector probe at Gaussian strength β.
pub fn oracle_single_flip_probe(code: &StabilizerCode, theta: f64, beta: f64) -> Result<SingleFlipProbe> {
    single_flip_probe_state_vector(code, theta, &MeasurementModel::gaussian(beta)?)
}
