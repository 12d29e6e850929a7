use super::group::{for_each_element, logical_products};
use super::state::{norm, Bloch, LogicalState};
use super::{Evaluation, BALL_SLACK, MIN_DENOMINATOR};
use crate::code::StabilizerCode;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliOperator};

fn expectation(p: &PauliOperator, inputs: &[Bloch]) -> f64 {
    let mut v = if p.phase() == 0 { 1.0 } else { -1.0 };
    for (q, r) in inputs.iter().enumerate() {
        v *= match p.letter(q) {
            Pauli::I => continue,
            Pauli::X => r[0],
            Pauli::Y => r[1],
            Pauli::Z => r[2],
        };
        if v == 0.0 {
            break;
        }
    }
    v
}

/// Map evaluation for a product input with a different Bloch vector per
/// physical qubit. Walks the group directly instead of using merged tables.
///
/// `products` selects tracked logical indices (see [`logical_products`]); the
/// returned state has zeros elsewhere. `None` means all of them.
pub fn evaluate_heterogeneous(
    code: &StabilizerCode,
    inputs: &[Bloch],
    lambda: f64,
    products: Option<&[usize]>,
) -> Result<Evaluation> {
    if inputs.len() != code.n {
        return Err(Error::SizeMismatch { left: code.n, right: inputs.len() });
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::ParameterOutOfRange { name: "lambda", value: lambda, range: "[0, 1]" });
    }
    for r in inputs {
        let len = norm(*r);
        if !(len <= 1.0 + BALL_SLACK) {
            return Err(Error::ParameterOutOfRange { name: "|r_i|", value: len, range: "[0, 1]" });
        }
    }
    let tracked = logical_products(code);
    let selected: Vec<usize> = match products {
        Some(sel) => {
            if let Some(&bad) = sel.iter().find(|&&i| i >= tracked.len()) {
                return Err(Error::IndexOutOfRange { index: bad, len: tracked.len() });
            }
            sel.to_vec()
        }
        None => (0..tracked.len()).collect(),
    };
    let lambda_pow: Vec<f64> = (0..=code.generators.len() as i32).map(|g| lambda.powi(g)).collect();
    let mut d = 0.0;
    let mut nums = vec![0.0; selected.len()];
    for_each_element(code, |e| {
        let w = lambda_pow[e.gamma as usize];
        if w == 0.0 {
            return;
        }
        d += w * expectation(&e.operator, inputs);
        for (slot, &t) in nums.iter_mut().zip(&selected) {
            *slot += w * expectation(&e.operator.mul_unchecked(&tracked[t]), inputs);
        }
    })?;
    if d <= MIN_DENOMINATOR {
        return Err(Error::UndefinedPostSelection { weight: d });
    }
    let mut expectations = vec![0.0; tracked.len()];
    for (v, &t) in nums.iter().zip(&selected) {
        expectations[t] = v / d;
    }
    Ok(Evaluation {
        state: LogicalState { k: code.k, expectations },
        success_probability: d / (code.generators.len() as f64).exp2(),
    })
}
