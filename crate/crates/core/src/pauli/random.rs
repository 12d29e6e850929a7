use rand::Rng;

use super::operator::PauliOperator;
use super::standard_form::gf2_rank;
use crate::code::StabilizerCode;

/// Basis of `{v : popcount(v & row) even for every row}` over the low `n` bits.
fn nullspace(rows: &[u64], n: usize) -> Vec<u64> {
    let mut m: Vec<u64> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| m[i] >> c & 1 == 1) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i] >> c & 1 == 1 {
                m[i] ^= m[r];
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = 1u64 << free;
            for (i, &pc) in pivots.iter().enumerate() {
                if m[i] >> free & 1 == 1 {
                    v |= 1 << pc;
                }
            }
            v
        })
        .collect()
}

fn random_independent<R: Rng + ?Sized>(rng: &mut R, count: usize, mut draw: impl FnMut(&mut R) -> u64) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(count);
    while out.len() < count {
        let v = draw(rng);
        let mut trial: Vec<(u64, u64)> = out.iter().map(|&r| (r, 0)).collect();
        trial.push((v, 0));
        if gf2_rank(&trial) == trial.len() {
            out.push(v);
        }
    }
    out
}

/// A random CSS code on `n` qubits (3 ≤ n ≤ 64) with at least one logical qubit.
///
/// `H_X` is a random full-rank matrix; `H_Z` rows are random independent
/// combinations from the nullspace of `H_X`. Logicals come from the standard form.
pub fn random_css_code<R: Rng + ?Sized>(n: usize, rng: &mut R) -> StabilizerCode {
    assert!((3..=64).contains(&n), "random_css_code needs 3 <= n <= 64");
    let mask = crate::pauli::operator::low_bits(n);
    let rx = rng.random_range(1..=n - 2);
    let rz = rng.random_range(1..=n - rx - 1);
    let hx = random_independent(rng, rx, |g| loop {
        let v = g.random::<u64>() & mask;
        if v != 0 {
            break v;
        }
    });
    let basis = nullspace(&hx, n);
    let hz = random_independent(rng, rz, |g| basis.iter().filter(|_| g.random::<bool>()).fold(0, |a, b| a ^ b));
    let generators = hx
        .iter()
        .map(|&x| PauliOperator::new(n, x, 0, 0).unwrap())
        .chain(hz.iter().map(|&z| PauliOperator::new(n, 0, z, 0).unwrap()))
        .collect();
    StabilizerCode::from_generators(format!("random-css-{n}"), generators)
        .expect("construction yields a valid CSS code")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::validate_code;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn nullspace_is_orthogonal() {
        let rows = [0b1010101, 0b1100110, 0b1111000];
        let ns = nullspace(&rows, 7);
        assert_eq!(ns.len(), 4);
        for v in ns {
            for r in rows {
                assert_eq!((v & r).count_ones() % 2, 0);
            }
        }
    }

    #[test]
    fn random_codes_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 3..=12 {
            let code = random_css_code(n, &mut rng);
            assert!(code.k >= 1);
            let diag = validate_code(&code);
            assert!(diag.is_valid(), "{:?}", diag.violations);
            assert!(diag.is_css);
        }
    }
}
