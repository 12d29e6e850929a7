use std::fmt;

use serde::{Deserialize, Serialize};

use super::standard_form::gf2_rank;
use crate::code::StabilizerCode;

/// One problem found by [`validate_code`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    SizeMismatch {
        expected: usize,
        found: usize,
    },
    GeneratorCount {
        n: usize,
        k: usize,
        generators: usize,
    },
    LogicalCount {
        k: usize,
        logical_x: usize,
        logical_z: usize,
    },
    NonHermitianGenerator(usize),
    NonCommutingGenerators(usize, usize),
    DependentGenerator(usize),
    LogicalAnticommutesWithGenerator {
        logical: String,
        generator: usize,
    },
    /// `X̄_i`/`Z̄_j` should anticommute exactly when `i == j`.
    LogicalPairing {
        x: usize,
        z: usize,
        expected_anticommute: bool,
    },
    /// Two logical operators of the same type fail to commute.
    LogicalSameTypeAnticommute {
        first: String,
        second: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SizeMismatch { expected, found } => {
                write!(f, "operator on {found} qubits in a {expected}-qubit code")
            }
            Violation::GeneratorCount { n, k, generators } => {
                write!(f, "{generators} generators for n={n}, k={k} (expected {})", n.saturating_sub(*k))
            }
            Violation::LogicalCount { k, logical_x, logical_z } => {
                write!(f, "k={k} but {logical_x} logical X and {logical_z} logical Z operators")
            }
            Violation::NonHermitianGenerator(i) => write!(f, "generator {i} is not Hermitian"),
            Violation::NonCommutingGenerators(i, j) => {
                write!(f, "generators {i} and {j} do not commute")
            }
            Violation::DependentGenerator(i) => {
                write!(f, "generator {i} is dependent on earlier generators")
            }
            Violation::LogicalAnticommutesWithGenerator { logical, generator } => {
                write!(f, "logical {logical} anticommutes with generator {generator}")
            }
            Violation::LogicalPairing { x, z, expected_anticommute } => {
                if *expected_anticommute {
                    write!(f, "logical X{x} and Z{z} should anticommute but commute")
                } else {
                    write!(f, "logical X{x} and Z{z} should commute but anticommute")
                }
            }
            Violation::LogicalSameTypeAnticommute { first, second } => {
                write!(f, "logicals {first} and {second} do not commute")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDiagnostics {
    pub violations: Vec<Violation>,
    pub is_css: bool,
}

impl CodeDiagnostics {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Structural checks on a code. Never fails; problems are collected.
pub fn validate_code(code: &StabilizerCode) -> CodeDiagnostics {
    let mut out = Vec::new();
    let n = code.n;
    let all = code.generators.iter().chain(&code.logical_x).chain(&code.logical_z);
    let mut sizes_ok = true;
    for p in all {
        if p.num_qubits() != n {
            out.push(Violation::SizeMismatch { expected: n, found: p.num_qubits() });
            sizes_ok = false;
        }
    }
    if code.generators.len() + code.k != n {
        out.push(Violation::GeneratorCount { n, k: code.k, generators: code.generators.len() });
    }
    if code.logical_x.len() != code.k || code.logical_z.len() != code.k {
        out.push(Violation::LogicalCount {
            k: code.k,
            logical_x: code.logical_x.len(),
            logical_z: code.logical_z.len(),
        });
    }
    if !sizes_ok {
        return CodeDiagnostics { violations: out, is_css: code.is_css() };
    }

    let gens = &code.generators;
    for (i, g) in gens.iter().enumerate() {
        if !g.is_hermitian() {
            out.push(Violation::NonHermitianGenerator(i));
        }
    }
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if !gens[i].commutes_unchecked(&gens[j]) {
                out.push(Violation::NonCommutingGenerators(i, j));
            }
        }
    }
    let bin: Vec<(u64, u64)> = gens.iter().map(|g| (g.x_mask(), g.z_mask())).collect();
    let mut rank = 0;
    for i in 0..bin.len() {
        let next = gf2_rank(&bin[..=i]);
        if next == rank {
            out.push(Violation::DependentGenerator(i));
        }
        rank = next;
    }

    let labelled = code
        .logical_x
        .iter()
        .enumerate()
        .map(|(i, l)| (format!("X{i}"), l))
        .chain(code.logical_z.iter().enumerate().map(|(i, l)| (format!("Z{i}"), l)));
    for (label, l) in labelled {
        for (gi, g) in gens.iter().enumerate() {
            if !l.commutes_unchecked(g) {
                out.push(Violation::LogicalAnticommutesWithGenerator { logical: label.clone(), generator: gi });
            }
        }
    }
    for (i, lx) in code.logical_x.iter().enumerate() {
        for (j, lz) in code.logical_z.iter().enumerate() {
            let anti = !lx.commutes_unchecked(lz);
            if anti != (i == j) {
                out.push(Violation::LogicalPairing { x: i, z: j, expected_anticommute: i == j });
            }
        }
    }
    for (kind, ops) in [("X", &code.logical_x), ("Z", &code.logical_z)] {
        for i in 0..ops.len() {
            for j in i + 1..ops.len() {
                if !ops[i].commutes_unchecked(&ops[j]) {
                    out.push(Violation::LogicalSameTypeAnticommute {
                        first: format!("{kind}{i}"),
                        second: format!("{kind}{j}"),
                    });
                }
            }
        }
    }
    CodeDiagnostics { violations: out, is_css: code.is_css() }
}
