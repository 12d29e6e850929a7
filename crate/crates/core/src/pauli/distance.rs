use serde::{Deserialize, Serialize};

use super::standard_form::{standard_form, ParityCheckMatrix};
use crate::code::StabilizerCode;
use crate::error::{Error, Result};

/// Largest stabilizer-type rank [`css_distance`] will enumerate.
pub const MAX_COSET_RANK: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CssDistance {
    pub d_x: u32,
    pub d_z: u32,
    pub d: u32,
}

/// Exact X and Z distances of a CSS code by exhaustive coset enumeration.
///
/// Each nontrivial combination of standard-form logicals is combined with
/// every element of the same-type stabilizer span, walked in Gray-code order.
pub fn css_distance(code: &StabilizerCode) -> Result<CssDistance> {
    if let Some(i) = code.generators.iter().position(|g| !g.is_x_type() && !g.is_z_type()) {
        return Err(Error::NotCss(i));
    }
    let sf = standard_form(&ParityCheckMatrix::new(code.n, code.generators.clone())?)?;
    let lx: Vec<u64> = sf.logical_x.iter().map(|l| sf.unpermute(l).x_mask()).collect();
    let lz: Vec<u64> = sf.logical_z.iter().map(|l| sf.unpermute(l).z_mask()).collect();
    let sx: Vec<u64> = code.generators.iter().filter(|g| g.z_mask() == 0).map(|g| g.x_mask()).collect();
    let sz: Vec<u64> = code.generators.iter().filter(|g| g.x_mask() == 0).map(|g| g.z_mask()).collect();
    let d_x = min_coset_weight(&sx, &lx)?;
    let d_z = min_coset_weight(&sz, &lz)?;
    Ok(CssDistance { d_x, d_z, d: d_x.min(d_z) })
}

fn min_coset_weight(stabilizers: &[u64], logicals: &[u64]) -> Result<u32> {
    if stabilizers.len() > MAX_COSET_RANK {
        return Err(Error::GuardExceeded { what: "stabilizer rank", value: stabilizers.len(), limit: MAX_COSET_RANK });
    }
    let mut best = u32::MAX;
    for class in 1u64..(1 << logicals.len()) {
        let mut v = logicals.iter().enumerate().filter(|(j, _)| class >> j & 1 == 1).fold(0, |acc, (_, l)| acc ^ l);
        best = best.min(v.count_ones());
        for step in 1u64..(1 << stabilizers.len()) {
            v ^= stabilizers[step.trailing_zeros() as usize];
            best = best.min(v.count_ones());
        }
    }
    Ok(best)
}
