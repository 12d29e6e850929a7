use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bloch vector `(x, y, z)`.
pub type Bloch = [f64; 3];

/// Expectations of the `4^k − 1` nontrivial logical Pauli products, in the
/// order of [`super::logical_products`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogicalState {
    pub k: usize,
    pub expectations: Vec<f64>,
}

/// Index into `LogicalState::expectations` of the product with the given
/// per-qubit digits (0=I, 1=X, 2=Y, 3=Z), qubit 0 first.
pub fn product_index(digits: &[usize]) -> usize {
    digits.iter().fold(0, |acc, &d| acc * 4 + d) - 1
}

impl LogicalState {
    /// `r^{⊗k}` written as product expectations.
    pub fn product(r: Bloch, k: usize) -> Self {
        let expectations = (1..4usize.pow(k as u32))
            .map(|t| {
                (0..k).map(|q| t / 4usize.pow((k - 1 - q) as u32) % 4).filter(|&d| d != 0).map(|d| r[d - 1]).product()
            })
            .collect();
        Self { k, expectations }
    }

    /// Single-qubit Bloch vector of logical qubit `which`.
    pub fn marginal(&self, which: usize) -> Result<Bloch> {
        if which >= self.k {
            return Err(Error::IndexOutOfRange { index: which, len: self.k });
        }
        let mut out = [0.0; 3];
        for (d, slot) in out.iter_mut().enumerate() {
            let t = (d + 1) * 4usize.pow((self.k - 1 - which) as u32);
            *slot = self.expectations[t - 1];
        }
        Ok(out)
    }

    /// `(x, y, z)` of a single logical qubit.
    pub fn bloch(&self) -> Bloch {
        self.marginal(0).expect("k >= 1")
    }

    /// Largest componentwise difference between any two marginals.
    pub fn marginal_asymmetry(&self) -> f64 {
        let first = self.bloch();
        (1..self.k)
            .map(|q| {
                let m = self.marginal(q).unwrap();
                (0..3).map(|i| (m[i] - first[i]).abs()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

pub fn norm(r: Bloch) -> f64 {
    (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt()
}
