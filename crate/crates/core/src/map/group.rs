use crate::code::StabilizerCode;
use crate::error::{Error, Result};
use crate::pauli::PauliOperator;

/// Largest `n − k` for which the full group is enumerated.
pub const MAX_GENERATORS: usize = 28;

/// One stabilizer group element `s = ∏_{i∈S} g_i` with `γ = |S|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupElement {
    /// Generator subset as a bit mask over generator indices.
    pub subset: u32,
    pub gamma: u32,
    /// Hermitian, so the phase is 0 or 2.
    pub operator: PauliOperator,
}

impl GroupElement {
    pub fn sign(&self) -> i8 {
        if self.operator.phase() == 0 {
            1
        } else {
            -1
        }
    }
}

/// Calls `f` once per group element in Gray-code order, maintaining the
/// running product incrementally.
pub(crate) fn for_each_element(code: &StabilizerCode, mut f: impl FnMut(&GroupElement)) -> Result<()> {
    let m = code.generators.len();
    if m > MAX_GENERATORS {
        return Err(Error::GuardExceeded { what: "n - k", value: m, limit: MAX_GENERATORS });
    }
    // Generators commute and square to I, so toggling g either way is a
    // right multiplication by g.
    let mut current = GroupElement { subset: 0, gamma: 0, operator: PauliOperator::identity(code.n) };
    f(&current);
    for step in 1u64..(1u64 << m) {
        let bit = step.trailing_zeros() as usize;
        let g = &code.generators[bit];
        current.operator = current.operator.mul_unchecked(g);
        current.subset ^= 1 << bit;
        current.gamma = current.subset.count_ones();
        if !current.operator.is_hermitian() {
            return Err(Error::ImaginaryPhase { context: format!("generator subset {:#b}", current.subset) });
        }
        f(&current);
    }
    Ok(())
}

/// All `2^(n−k)` elements of the stabilizer group, in Gray-code order.
pub fn enumerate_group(code: &StabilizerCode) -> Result<Vec<GroupElement>> {
    let m = code.generators.len();
    if m > MAX_GENERATORS {
        return Err(Error::GuardExceeded { what: "n - k", value: m, limit: MAX_GENERATORS });
    }
    let mut out = Vec::with_capacity(1 << m);
    for_each_element(code, |e| out.push(*e))?;
    Ok(out)
}

/// Nontrivial logical Pauli products, indexed `1..4^k`. Base-4 digits
/// (0=I, 1=X, 2=Y, 3=Z) with logical qubit 0 as the most significant digit;
/// `Ȳ_q = i·X̄_q·Z̄_q`.
pub fn logical_products(code: &StabilizerCode) -> Vec<PauliOperator> {
    let k = code.k;
    (1..4usize.pow(k as u32))
        .map(|t| {
            let mut p = PauliOperator::identity(code.n);
            for q in 0..k {
                let digit = t / 4usize.pow((k - 1 - q) as u32) % 4;
                let factor = match digit {
                    0 => continue,
                    1 => code.logical_x[q],
                    2 => code.logical_y(q),
                    _ => code.logical_z[q],
                };
                p = p.mul_unchecked(&factor);
            }
            p
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;

    #[test]
    fn sizes_and_identity() {
        let code = builtin("15-1-3-canonical").unwrap();
        let g = enumerate_group(&code).unwrap();
        assert_eq!(g.len(), 16384);
        assert_eq!(g.iter().filter(|e| e.operator.is_identity()).count(), 1);
        assert_eq!(g[0].gamma, 0);
        let mut subsets: Vec<u32> = g.iter().map(|e| e.subset).collect();
        subsets.sort_unstable();
        subsets.dedup();
        assert_eq!(subsets.len(), 16384);
    }

    #[test]
    fn four_two_two_elements() {
        let code = builtin("4-2-2").unwrap();
        let g = enumerate_group(&code).unwrap();
        let ops: Vec<String> = g.iter().map(|e| e.operator.to_string()).collect();
        assert_eq!(ops, ["IIII", "XXXX", "YYYY", "ZZZZ"]);
    }

    #[test]
    fn elements_commute_with_logicals() {
        let code = builtin("14-2-2-canonical").unwrap();
        for e in enumerate_group(&code).unwrap() {
            for l in code.logical_x.iter().chain(&code.logical_z) {
                assert!(e.operator.commutes(l).unwrap());
            }
        }
    }

    #[test]
    fn logical_product_indexing() {
        let code = builtin("4-2-2").unwrap();
        let p = logical_products(&code);
        assert_eq!(p.len(), 15);
        // t = 4 -> digits (1, 0): X on logical qubit 0.
        assert_eq!(p[3], code.logical_x[0]);
        assert_eq!(p[0], code.logical_x[1]);
        assert_eq!(p[2], code.logical_z[1]);
        assert!(p.iter().all(|q| q.is_hermitian()));
    }

    #[test]
    fn y_bar_of_fifteen_is_minus_y_string() {
        let code = builtin("15-1-3-canonical").unwrap();
        assert_eq!(code.logical_y(0).to_string(), format!("-{}", "Y".repeat(15)));
    }
}
