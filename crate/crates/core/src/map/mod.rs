//! The exact noisy distillation map.
//!
//! For input `ρ^{⊗n}` with per-copy Bloch vector `(x, y, z)` and map coefficient
//! λ, the post-selected expectation of a logical product `P̄` is `N_P̄ / D` with
//!
//! ```text
//! N_P̄ = Σ_j λ^{γ_j} · sign(s_j P̄) · x^{wX} y^{wY} z^{wZ}   (weights of s_j P̄)
//! D   = Σ_j λ^{γ_j} · sign(s_j)   · x^{wX} y^{wY} z^{wZ}   (weights of s_j)
//! ```
//!
//! and the success probability is `D / 2^{n−k}`.

mod group;
mod heterogeneous;
mod state;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use group::{enumerate_group, logical_products, GroupElement, MAX_GENERATORS};
pub use heterogeneous::evaluate_heterogeneous;
pub use state::{norm, product_index, Bloch, LogicalState};

use crate::code::StabilizerCode;
use crate::error::{Error, Result};
use crate::pauli::PauliOperator;

/// Post-selection weights at or below this are treated as zero.
pub const MIN_DENOMINATOR: f64 = 1e-14;

/// Slack on `|r| ≤ 1` for points produced by floating-point iteration.
pub(crate) const BALL_SLACK: f64 = 1e-9;

/// `coeff · λ^γ · x^wx · y^wy · z^wz`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub gamma: u8,
    pub wx: u8,
    pub wy: u8,
    pub wz: u8,
    pub coeff: i64,
}

/// A polynomial in `(λ, x, y, z)` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Polynomial {
    pub terms: Vec<Monomial>,
}

impl Polynomial {
    fn from_counts(counts: BTreeMap<(u8, u8, u8, u8), i64>) -> Self {
        let terms = counts
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|((gamma, wx, wy, wz), coeff)| Monomial { gamma, wx, wy, wz, coeff })
            .collect();
        Self { terms }
    }

    fn value(&self, pw: &Powers) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.coeff as f64
                    * pw.l[t.gamma as usize]
                    * pw.x[t.wx as usize]
                    * pw.y[t.wy as usize]
                    * pw.z[t.wz as usize]
            })
            .sum()
    }

    /// Value and gradient in `(x, y, z)`.
    fn value_and_gradient(&self, pw: &Powers) -> (f64, [f64; 3]) {
        let mut v = 0.0;
        let mut g = [0.0; 3];
        for t in &self.terms {
            let (a, b, c) = (t.wx as usize, t.wy as usize, t.wz as usize);
            let base = t.coeff as f64 * pw.l[t.gamma as usize];
            let (px, py, pz) = (pw.x[a], pw.y[b], pw.z[c]);
            v += base * px * py * pz;
            if a > 0 {
                g[0] += base * a as f64 * pw.x[a - 1] * py * pz;
            }
            if b > 0 {
                g[1] += base * b as f64 * px * pw.y[b - 1] * pz;
            }
            if c > 0 {
                g[2] += base * c as f64 * px * py * pw.z[c - 1];
            }
        }
        (v, g)
    }
}

/// Power tables `v^0 ..= v^n` for one evaluation point.
struct Powers {
    l: Vec<f64>,
    x: Vec<f64>,
    y: Vec<f64>,
    z: Vec<f64>,
}

impl Powers {
    fn new(r: Bloch, lambda: f64, n: usize, m: usize) -> Self {
        let table = |v: f64, len: usize| {
            let mut t = Vec::with_capacity(len + 1);
            let mut acc = 1.0;
            for _ in 0..=len {
                t.push(acc);
                acc *= v;
            }
            t
        };
        Self { l: table(lambda, m), x: table(r[0], n), y: table(r[1], n), z: table(r[2], n) }
    }
}

/// Result of one map evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub state: LogicalState,
    pub success_probability: f64,
}

/// The compiled, λ-independent table for one code.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistillationMap {
    code_name: String,
    n: usize,
    k: usize,
    num_generators: usize,
    tracked: Vec<PauliOperator>,
    denominator: Polynomial,
    numerators: Vec<Polynomial>,
}

impl DistillationMap {
    pub fn build(code: &StabilizerCode) -> Result<Self> {
        let tracked = logical_products(code);
        let mut den: BTreeMap<(u8, u8, u8, u8), i64> = BTreeMap::new();
        let mut nums: Vec<BTreeMap<(u8, u8, u8, u8), i64>> = vec![BTreeMap::new(); tracked.len()];
        let key = |gamma: u32, p: &PauliOperator| {
            let w = p.weight_profile();
            (gamma as u8, w.x as u8, w.y as u8, w.z as u8)
        };
        let sign = |p: &PauliOperator| if p.phase() == 0 { 1 } else { -1 };
        let mut failure = None;
        group::for_each_element(code, |e| {
            *den.entry(key(e.gamma, &e.operator)).or_default() += e.sign() as i64;
            for (slot, l) in nums.iter_mut().zip(&tracked) {
                let prod = e.operator.mul_unchecked(l);
                if !prod.is_hermitian() {
                    failure.get_or_insert_with(|| format!("s({:#b})·{l}", e.subset));
                    continue;
                }
                *slot.entry(key(e.gamma, &prod)).or_default() += sign(&prod);
            }
        })?;
        if let Some(context) = failure {
            return Err(Error::ImaginaryPhase { context });
        }
        Ok(Self {
            code_name: code.name.clone(),
            n: code.n,
            k: code.k,
            num_generators: code.generators.len(),
            tracked,
            denominator: Polynomial::from_counts(den),
            numerators: nums.into_iter().map(Polynomial::from_counts).collect(),
        })
    }

    pub fn code_name(&self) -> &str {
        &self.code_name
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_logical(&self) -> usize {
        self.k
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn num_elements(&self) -> u64 {
        1 << self.num_generators
    }

    /// The tracked logical products `P̄_t`, `t = 1 .. 4^k`.
    pub fn tracked_logicals(&self) -> &[PauliOperator] {
        &self.tracked
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    pub fn numerator(&self, index: usize) -> &Polynomial {
        &self.numerators[index]
    }

    fn check_inputs(&self, r: Bloch, lambda: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::ParameterOutOfRange { name: "lambda", value: lambda, range: "[0, 1]" });
        }
        let len = norm(r);
        if !(len <= 1.0 + BALL_SLACK) {
            return Err(Error::ParameterOutOfRange { name: "|r|", value: len, range: "[0, 1]" });
        }
        Ok(())
    }

    fn powers(&self, r: Bloch, lambda: f64) -> Powers {
        Powers::new(r, lambda, self.n, self.num_generators)
    }

    fn check_denominator(d: f64) -> Result<()> {
        if d <= MIN_DENOMINATOR {
            Err(Error::UndefinedPostSelection { weight: d })
        } else {
            Ok(())
        }
    }

    /// Output logical state and success probability for `ρ(r)^{⊗n}`.
    pub fn evaluate(&self, r: Bloch, lambda: f64) -> Result<Evaluation> {
        self.check_inputs(r, lambda)?;
        let pw = self.powers(r, lambda);
        let d = self.denominator.value(&pw);
        Self::check_denominator(d)?;
        let expectations = self.numerators.iter().map(|p| p.value(&pw) / d).collect();
        Ok(Evaluation {
            state: LogicalState { k: self.k, expectations },
            success_probability: d / (self.num_generators as f64).exp2(),
        })
    }

    /// Like [`evaluate`](Self::evaluate) but only the marginal of one logical
    /// qubit, skipping the other products.
    pub fn evaluate_marginal(&self, r: Bloch, lambda: f64, which: usize) -> Result<(Bloch, f64)> {
        if which >= self.k {
            return Err(Error::IndexOutOfRange { index: which, len: self.k });
        }
        self.check_inputs(r, lambda)?;
        self.marginal_outside_ball(r, lambda, which)
    }

    /// [`evaluate_marginal`](Self::evaluate_marginal) without the `|r| ≤ 1`
    /// check; the polynomials extend past the ball, which finite-difference
    /// probes near pure states rely on.
    pub(crate) fn marginal_outside_ball(&self, r: Bloch, lambda: f64, which: usize) -> Result<(Bloch, f64)> {
        let pw = self.powers(r, lambda);
        let d = self.denominator.value(&pw);
        Self::check_denominator(d)?;
        let mut out = [0.0; 3];
        for (a, slot) in out.iter_mut().enumerate() {
            *slot = self.numerators[self.marginal_index(which, a)].value(&pw) / d;
        }
        Ok((out, d / (self.num_generators as f64).exp2()))
    }

    fn marginal_index(&self, which: usize, axis: usize) -> usize {
        (axis + 1) * 4usize.pow((self.k - 1 - which) as u32) - 1
    }

    /// Analytic `∂T_P̄/∂(x, y, z)` for every tracked product (quotient rule on
    /// exact polynomial derivatives).
    pub fn jacobian_all(&self, r: Bloch, lambda: f64) -> Result<Vec<[f64; 3]>> {
        self.check_inputs(r, lambda)?;
        let pw = self.powers(r, lambda);
        let (d, dd) = self.denominator.value_and_gradient(&pw);
        Self::check_denominator(d)?;
        Ok(self.numerators.iter().map(|p| quotient_gradient(p.value_and_gradient(&pw), (d, dd))).collect())
    }

    /// 3×3 Jacobian of the marginal Bloch vector of logical qubit `which`;
    /// row `i` is the gradient of output component `i`.
    pub fn marginal_jacobian(&self, r: Bloch, lambda: f64, which: usize) -> Result<[[f64; 3]; 3]> {
        if which >= self.k {
            return Err(Error::IndexOutOfRange { index: which, len: self.k });
        }
        self.check_inputs(r, lambda)?;
        let pw = self.powers(r, lambda);
        let (d, dd) = self.denominator.value_and_gradient(&pw);
        Self::check_denominator(d)?;
        let mut out = [[0.0; 3]; 3];
        for (a, row) in out.iter_mut().enumerate() {
            let num = self.numerators[self.marginal_index(which, a)].value_and_gradient(&pw);
            *row = quotient_gradient(num, (d, dd));
        }
        Ok(out)
    }
}

fn quotient_gradient((n, dn): (f64, [f64; 3]), (d, dd): (f64, [f64; 3])) -> [f64; 3] {
    let d2 = d * d;
    [0, 1, 2].map(|i| (dn[i] * d - n * dd[i]) / d2)
}
