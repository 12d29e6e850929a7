//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use msd_core::pauli::{ParityCheckMatrix, StandardFormResult};
use msd_core::{Pauli, PauliOperator, StabilizerCode};

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

fn anticommute(a: &PauliOperator, b: &PauliOperator) -> bool {
    !a.commutes(b).unwrap()
}

/// Every qubit where `a` acts carries a letter commuting with `b`'s letter.
fn qubitwise_commute(a: &PauliOperator, b: &PauliOperator) -> bool {
    let (ax, az, bx, bz) = (a.x_mask(), a.z_mask(), b.x_mask(), b.z_mask());
    ((ax & bz) ^ (az & bx)) == 0
}

pub fn check_standard_form(label: &str, input: &ParityCheckMatrix, sf: &StandardFormResult) -> Result<(), String> {
    let rows = sf.matrix.rows();
    let m = rows.len();
    ensure!(sf.block_structure_holds(), "{label}: block layout");
    ensure!(sf.replay(input) == sf.matrix, "{label}: replay");
    ensure!(sf.rank_r == input.x_rank(), "{label}: r");

    let permuted = input.permuted(&sf.qubit_permutation);
    ensure!(rows.iter().all(|g| permuted.spans(g)), "{label}: output in input span");
    ensure!(permuted.rows().iter().all(|g| sf.matrix.spans(g)), "{label}: input in output span");

    let logicals: Vec<&PauliOperator> = sf.logical_x.iter().chain(&sf.logical_z).collect();
    for l in &logicals {
        ensure!(rows.iter().all(|g| !anticommute(l, g)), "{label}: logical vs generator");
    }
    for (i, lx) in sf.logical_x.iter().enumerate() {
        for (j, lz) in sf.logical_z.iter().enumerate() {
            ensure!(anticommute(lx, lz) == (i == j), "{label}: pairing X{i} Z{j}");
        }
    }

    ensure!(sf.destabilizers.len() == m, "{label}: destabilizer count");
    let mut seen = 0u64;
    for (i, c) in sf.destabilizers.iter().enumerate() {
        ensure!(c.weight() == 1, "{label}: destabilizer {i} weight");
        ensure!(seen & c.support() == 0, "{label}: destabilizer {i} support reused");
        seen |= c.support();
        let expected = if i < sf.rank_r {
            PauliOperator::single(c.num_qubits(), i, Pauli::Z)
        } else {
            PauliOperator::single(c.num_qubits(), i, Pauli::X)
        };
        ensure!(*c == expected, "{label}: destabilizer {i}");
        for (j, g) in rows.iter().enumerate() {
            ensure!(anticommute(c, g) == (i == j), "{label}: destabilizer {i} vs generator {j}");
        }
        for l in &logicals {
            ensure!(!anticommute(c, l), "{label}: destabilizer {i} vs logical");
            ensure!(qubitwise_commute(c, l), "{label}: destabilizer {i} overlaps a logical");
        }
    }
    Ok(())
}

pub fn same_group(a: &StabilizerCode, b: &StabilizerCode) -> bool {
    let (ha, hb) = (a.parity_check(), b.parity_check());
    a.generators.iter().all(|g| hb.spans(g)) && b.generators.iter().all(|g| ha.spans(g))
}

pub fn same_logicals(a: &StabilizerCode, b: &StabilizerCode) -> bool {
    let h = b.parity_check();
    let pairs = a.logical_x.iter().zip(&b.logical_x).chain(a.logical_z.iter().zip(&b.logical_z));
    pairs.map(|(p, q)| p.multiply(q).unwrap()).all(|d| h.spans(&d))
}

/// Column `q` of the X block as a bit vector over the X-type rows.
fn x_columns(code: &StabilizerCode) -> Vec<u32> {
    let rows: Vec<_> = code.generators.iter().filter(|g| g.is_x_type()).collect();
    (0..code.n)
        .map(|q| rows.iter().enumerate().fold(0, |acc, (i, g)| acc | (((g.x_mask() >> q) & 1) as u32) << i))
        .collect()
}

/// Searches for a qubit relabeling taking `from` onto `to` (same stabilizer
/// group and same logical operators modulo stabilizers). Every X-block change
/// of basis is tried; columns are then matched by value, trying each order
/// among repeated columns.
pub fn find_relabeling(from: &StabilizerCode, to: &StabilizerCode) -> Option<Vec<usize>> {
    let (cf, ct) = (x_columns(from), x_columns(to));
    let r = from.generators.iter().filter(|g| g.is_x_type()).count();
    let mut sorted_to = ct.clone();
    sorted_to.sort_unstable();

    fn assign(
        q: usize,
        img: &[u32],
        ct: &[u32],
        target: &mut Vec<usize>,
        used: &mut Vec<bool>,
        accept: &dyn Fn(&[usize]) -> bool,
    ) -> bool {
        if q == img.len() {
            return accept(target);
        }
        for p in 0..ct.len() {
            if !used[p] && ct[p] == img[q] {
                used[p] = true;
                target[q] = p;
                if assign(q + 1, img, ct, target, used, accept) {
                    return true;
                }
                used[p] = false;
            }
        }
        false
    }

    let accept = |target: &[usize]| {
        let mut perm = vec![0; target.len()];
        for (old, &new) in target.iter().enumerate() {
            perm[new] = old;
        }
        let moved = from.permuted(&perm);
        same_group(&moved, to) && same_logicals(&moved, to)
    };
    for bits in 0u64..1 << (r * r) {
        let a: Vec<u32> = (0..r).map(|i| (bits >> (i * r)) as u32 & ((1 << r) - 1)).collect();
        let img: Vec<u32> = cf
            .iter()
            .map(|&v| a.iter().enumerate().fold(0, |acc, (i, row)| acc | ((row & v).count_ones() & 1) << i))
            .collect();
        let mut sorted = img.clone();
        sorted.sort_unstable();
        if sorted != sorted_to {
            continue;
        }
        let mut target = vec![0; img.len()];
        if assign(0, &img, &ct, &mut target, &mut vec![false; ct.len()], &accept) {
            let mut perm = vec![0; target.len()];
            for (old, &new) in target.iter().enumerate() {
                perm[new] = old;
            }
            return Some(perm);
        }
    }
    None
}
