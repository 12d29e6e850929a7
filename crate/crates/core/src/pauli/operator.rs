use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest register a bit-packed operator can hold.
pub const MAX_QUBITS: usize = 64;

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Counts of X-only, Y, and Z-only sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct WeightProfile {
    pub x: u32,
    pub y: u32,
    pub z: u32,
}

impl WeightProfile {
    pub fn total(&self) -> u32 {
        self.x + self.y + self.z
    }
}

/// An n-qubit Pauli operator `i^phase · σ_0 ⊗ σ_1 ⊗ …` with each `σ_q` a
/// Hermitian letter in {I, X, Y, Z}.
///
/// Bit `q` of `x_mask`/`z_mask` is the X/Z support on qubit `q`; a site with
/// both bits set is the letter Y (not the product XZ). With this convention the
/// operator is Hermitian exactly when `phase` is even, and `phase` 2 is an
/// overall minus sign.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliOperator {
    n: usize,
    x_mask: u64,
    z_mask: u64,
    phase: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "{n} qubits exceeds {MAX_QUBITS}");
        Self { n, x_mask: 0, z_mask: 0, phase: 0 }
    }

    pub fn new(n: usize, x_mask: u64, z_mask: u64, phase: u8) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits { n, max: MAX_QUBITS });
        }
        let valid = low_bits(n);
        if (x_mask | z_mask) & !valid != 0 {
            return Err(Error::PauliSyntax(format!("mask bits set beyond qubit {n}: x={x_mask:#x} z={z_mask:#x}")));
        }
        Ok(Self { n, x_mask, z_mask, phase: phase & 3 })
    }

    /// A weight-one operator `letter` on `qubit`.
    pub fn single(n: usize, qubit: usize, letter: Pauli) -> Self {
        assert!(qubit < n && n <= MAX_QUBITS);
        let (x, z) = letter.bits();
        Self { n, x_mask: (x as u64) << qubit, z_mask: (z as u64) << qubit, phase: 0 }
    }

    pub fn from_letters(letters: &[Pauli]) -> Result<Self> {
        let mut p = Self::new(letters.len(), 0, 0, 0)?;
        for (q, l) in letters.iter().enumerate() {
            let (x, z) = l.bits();
            p.x_mask |= (x as u64) << q;
            p.z_mask |= (z as u64) << q;
        }
        Ok(p)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    /// Same support, phase 0.
    pub fn unsigned(self) -> Self {
        self.with_phase(0)
    }

    pub fn letter(&self, qubit: usize) -> Pauli {
        Pauli::from_bits(self.x_mask >> qubit & 1 == 1, self.z_mask >> qubit & 1 == 1)
    }

    pub fn letters(&self) -> Vec<Pauli> {
        (0..self.n).map(|q| self.letter(q)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    /// `+1` or `-1` for Hermitian operators, `None` otherwise.
    pub fn sign(&self) -> Option<i8> {
        match self.phase {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn support(&self) -> u64 {
        self.x_mask | self.z_mask
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    pub fn weight_profile(&self) -> WeightProfile {
        let y = self.x_mask & self.z_mask;
        WeightProfile { x: (self.x_mask & !y).count_ones(), y: y.count_ones(), z: (self.z_mask & !y).count_ones() }
    }

    pub fn is_x_type(&self) -> bool {
        self.z_mask == 0
    }

    pub fn is_z_type(&self) -> bool {
        self.x_mask == 0
    }

    fn check_size(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    /// Exact product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        // Move to X^a Z^b form (Y = i·XZ), multiply, move back.
        let ya = (self.x_mask & self.z_mask).count_ones();
        let yb = (other.x_mask & other.z_mask).count_ones();
        let x = self.x_mask ^ other.x_mask;
        let z = self.z_mask ^ other.z_mask;
        let yc = (x & z).count_ones();
        let swap = (self.z_mask & other.x_mask).count_ones();
        let phase = (self.phase as u32 + other.phase as u32 + ya + yb + 2 * swap + 4 * 64 - yc) % 4;
        Self { n: self.n, x_mask: x, z_mask: z, phase: phase as u8 }
    }

    /// Symplectic inner product of the supports.
    pub fn symplectic(&self, other: &Self) -> Result<u32> {
        self.check_size(other)?;
        Ok(self.symplectic_unchecked(other))
    }

    pub(crate) fn symplectic_unchecked(&self, other: &Self) -> u32 {
        ((self.x_mask & other.z_mask).count_ones() + (self.z_mask & other.x_mask).count_ones()) & 1
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        Ok(self.symplectic(other)? == 0)
    }

    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        self.symplectic_unchecked(other) == 0
    }

    /// Reorders qubits: qubit `q` of the result is qubit `perm[q]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut x = 0;
        let mut z = 0;
        for (new, &old) in perm.iter().enumerate() {
            x |= (self.x_mask >> old & 1) << new;
            z |= (self.z_mask >> old & 1) << new;
        }
        Self { n: self.n, x_mask: x, z_mask: z, phase: self.phase }
    }
}

/// Free-function form of [`PauliOperator::multiply`].
pub fn multiply(a: &PauliOperator, b: &PauliOperator) -> Result<PauliOperator> {
    a.multiply(b)
}

pub fn commutes(a: &PauliOperator, b: &PauliOperator) -> Result<bool> {
    a.commutes(b)
}

pub fn weight_profile(p: &PauliOperator) -> WeightProfile {
    p.weight_profile()
}

pub(crate) fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for q in 0..self.n {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOperator({self})")
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    /// Accepts an optional sign prefix (`+`, `-`, `i`, `+i`, `-i`) followed by
    /// letters from `IXYZ`; ASCII whitespace anywhere is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (phase, body) = if let Some(rest) = compact.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = compact.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = compact.strip_prefix('i') {
            (1, rest)
        } else if let Some(rest) = compact.strip_prefix('-') {
            (2, rest)
        } else if let Some(rest) = compact.strip_prefix('+') {
            (0, rest)
        } else {
            (0, compact.as_str())
        };
        if body.is_empty() {
            return Err(Error::PauliSyntax(s.to_string()));
        }
        let letters = body
            .chars()
            .map(|c| match c {
                'I' | '_' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(Error::PauliSyntax(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_letters(&letters)?.with_phase(phase))
    }
}
