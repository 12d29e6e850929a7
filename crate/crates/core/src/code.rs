use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{standard_form, validate_code, ParityCheckMatrix, PauliOperator};

/// Which generator set a code carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Convention {
    Canonical,
    Standard,
    Custom,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Canonical => "canonical",
            Convention::Standard => "standard",
            Convention::Custom => "custom",
        })
    }
}

/// An `[[n, k]]` stabilizer code with an explicit generator set and logical basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizerCode {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub generators: Vec<PauliOperator>,
    pub logical_x: Vec<PauliOperator>,
    pub logical_z: Vec<PauliOperator>,
    pub convention: Convention,
}

impl StabilizerCode {
    /// Builds a code and rejects it unless [`validate_code`] is clean.
    pub fn new(
        name: impl Into<String>,
        generators: Vec<PauliOperator>,
        logical_x: Vec<PauliOperator>,
        logical_z: Vec<PauliOperator>,
        convention: Convention,
    ) -> Result<Self> {
        let code = Self::new_unchecked(name, generators, logical_x, logical_z, convention)?;
        let report = validate_code(&code);
        if !report.is_valid() {
            return Err(Error::InvalidCode(report.violations));
        }
        Ok(code)
    }

    /// Builds a code without validation; sizes must still agree.
    pub fn new_unchecked(
        name: impl Into<String>,
        generators: Vec<PauliOperator>,
        logical_x: Vec<PauliOperator>,
        logical_z: Vec<PauliOperator>,
        convention: Convention,
    ) -> Result<Self> {
        let n = generators
            .first()
            .or(logical_x.first())
            .map(|p| p.num_qubits())
            .ok_or_else(|| Error::Parse { line: 0, message: "code has no operators".into() })?;
        for p in generators.iter().chain(&logical_x).chain(&logical_z) {
            if p.num_qubits() != n {
                return Err(Error::SizeMismatch { left: n, right: p.num_qubits() });
            }
        }
        let k = n.checked_sub(generators.len()).ok_or(Error::DependentGenerators(n))?;
        Ok(Self { name: name.into(), n, k, generators, logical_x, logical_z, convention })
    }

    /// Builds a code from generators alone, reading a logical basis off the
    /// standard form and mapping it back to the input qubit order.
    pub fn from_generators(name: impl Into<String>, generators: Vec<PauliOperator>) -> Result<Self> {
        let n = generators
            .first()
            .map(|g| g.num_qubits())
            .ok_or_else(|| Error::Parse { line: 0, message: "no generators".into() })?;
        let sf = standard_form(&ParityCheckMatrix::new(n, generators.clone())?)?;
        let lx = sf.logical_x.iter().map(|l| sf.unpermute(l)).collect();
        let lz = sf.logical_z.iter().map(|l| sf.unpermute(l)).collect();
        Self::new(name, generators, lx, lz, Convention::Custom)
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn parity_check(&self) -> ParityCheckMatrix {
        ParityCheckMatrix::new(self.n, self.generators.clone()).expect("sizes checked at construction")
    }

    /// Each generator is pure X or pure Z.
    pub fn is_css(&self) -> bool {
        self.generators.iter().all(|g| g.is_x_type() || g.is_z_type())
    }

    /// `Ȳ_j = i·X̄_j·Z̄_j`.
    pub fn logical_y(&self, j: usize) -> PauliOperator {
        let xz = self.logical_x[j].mul_unchecked(&self.logical_z[j]);
        xz.with_phase(xz.phase() + 1)
    }

    /// Same code with qubits reordered: qubit `q` becomes old qubit `perm[q]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let map = |v: &[PauliOperator]| v.iter().map(|p| p.permuted(perm)).collect();
        Self {
            name: self.name.clone(),
            n: self.n,
            k: self.k,
            generators: map(&self.generators),
            logical_x: map(&self.logical_x),
            logical_z: map(&self.logical_z),
            convention: self.convention,
        }
    }

    /// Same logical basis, generators replaced by their standard form (mapped
    /// back to this code's qubit order).
    pub fn to_standard_form(&self) -> Result<Self> {
        let sf = standard_form(&self.parity_check())?;
        let generators = sf.matrix.rows().iter().map(|g| sf.unpermute(g)).collect();
        Self::new(
            format!("{}-standardized", self.name),
            generators,
            self.logical_x.clone(),
            self.logical_z.clone(),
            Convention::Standard,
        )
    }
}
