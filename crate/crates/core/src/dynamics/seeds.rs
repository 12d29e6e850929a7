use crate::map::Bloch;

/// Real root of `x⁴ = x + 1`; the R3 sequence steps by `(φ⁻¹, φ⁻², φ⁻³)`.
pub const R3_PHI: f64 = 1.220_744_084_605_759_5;

/// First `count` points of the R3 low-discrepancy sequence (offset 0.5)
/// mapped to `[−1, 1)³` that fall strictly inside the unit ball.
pub fn quasi_random_seeds(count: usize) -> Vec<Bloch> {
    let alpha = [1.0 / R3_PHI, 1.0 / (R3_PHI * R3_PHI), 1.0 / (R3_PHI * R3_PHI * R3_PHI)];
    let mut out = Vec::with_capacity(count);
    let mut i = 1u64;
    while out.len() < count {
        let v = alpha.map(|a| 2.0 * (0.5 + a * i as f64).fract() - 1.0);
        if v[0] * v[0] + v[1] * v[1] + v[2] * v[2] < 1.0 {
            out.push(v);
        }
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_is_the_root() {
        assert!((R3_PHI.powi(4) - R3_PHI - 1.0).abs() < 1e-14);
    }

    #[test]
    fn seeds_are_interior_and_deterministic() {
        let a = quasi_random_seeds(1000);
        assert_eq!(a.len(), 1000);
        assert!(a.iter().all(|v| v.iter().map(|c| c * c).sum::<f64>() < 1.0));
        assert_eq!(a, quasi_random_seeds(1000));
        // Roughly uniform: every octant is visited.
        for oct in 0..8 {
            let hit = a.iter().any(|v| (0..3).all(|i| (v[i] >= 0.0) == (oct >> i & 1 == 1)));
            assert!(hit, "octant {oct}");
        }
    }
}
