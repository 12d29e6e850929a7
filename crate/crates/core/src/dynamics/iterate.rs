use nalgebra::{Matrix3 as NaMatrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eigen::{eigenvalues, Matrix3};
use super::{dist, sub, System, TRIVIAL_RADIUS};
use crate::error::{Error, Result};
use crate::map::{norm, Bloch};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    NontrivialFixedPoint,
    TrivialFixedPoint,
    MaxIterations,
    DomainError,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterateOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Keep every point, not just the last.
    pub record: bool,
}

impl Default for IterateOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 100_000, record: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// `points[0]` is the start. Only first and last when not recording.
    pub points: Vec<Bloch>,
    /// `success_probs[m]` belongs to the step `points[m] → points[m+1]`.
    pub success_probs: Vec<f64>,
    pub classification: Classification,
    pub steps: usize,
    pub max_asymmetry: f64,
    pub error: Option<String>,
}

impl Trajectory {
    pub fn last(&self) -> Bloch {
        *self.points.last().expect("trajectory has a start point")
    }
}

/// Repeated [`System::step`] until the displacement drops below `tol`.
pub fn iterate(sys: &System, r0: Bloch, opts: &IterateOptions) -> Result<Trajectory> {
    if !(opts.tol > 0.0) {
        return Err(Error::ParameterOutOfRange { name: "tol", value: opts.tol, range: "(0, inf)" });
    }
    let len = norm(r0);
    if !(len <= 1.0 + crate::map::BALL_SLACK) {
        return Err(Error::ParameterOutOfRange { name: "|r0|", value: len, range: "[0, 1]" });
    }
    let mut points = vec![r0];
    let mut probs = Vec::new();
    let mut current = r0;
    let mut max_asym: f64 = 0.0;
    let mut converged = false;
    let mut error = None;
    let mut steps = 0;
    while steps < opts.max_iter {
        let step = match sys.step(current) {
            Ok(s) => s,
            Err(e) => {
                error = Some(e.to_string());
                break;
            }
        };
        steps += 1;
        max_asym = max_asym.max(step.asymmetry);
        probs.push(step.success_probability);
        let moved = dist(step.next, current);
        current = step.next;
        if opts.record {
            points.push(current);
        }
        if moved < opts.tol {
            converged = true;
            break;
        }
    }
    if !opts.record {
        points.push(current);
    }
    let classification = if error.is_some() {
        Classification::DomainError
    } else if norm(current) < TRIVIAL_RADIUS {
        Classification::TrivialFixedPoint
    } else if converged {
        Classification::NontrivialFixedPoint
    } else {
        Classification::MaxIterations
    };
    Ok(Trajectory { points, success_probs: probs, classification, steps, max_asymmetry: max_asym, error })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPointOptions {
    pub iterate: IterateOptions,
    pub newton_steps: usize,
    pub residual_tol: f64,
    /// Skip plain iteration and go straight to Newton from the seed.
    pub newton_only: bool,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        Self {
            iterate: IterateOptions { record: false, ..IterateOptions::default() },
            newton_steps: 50,
            residual_tol: 1e-12,
            newton_only: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub location: Bloch,
    pub residual: f64,
    pub jacobian: Matrix3,
    pub eigenvalues: [Complex64; 3],
    pub dominant_modulus: f64,
    pub stable: bool,
    pub classification: Classification,
    pub iterations: usize,
    pub newton_steps: usize,
    pub max_asymmetry: f64,
}

impl FixedPointReport {
    pub fn is_nontrivial_stable(&self) -> bool {
        self.classification == Classification::NontrivialFixedPoint && self.stable
    }
}

fn residual(sys: &System, r: Bloch) -> Result<(f64, Bloch)> {
    let s = sys.step(r)?;
    let f = sub(s.next, r);
    Ok((norm(f), f))
}

/// Damped Newton on `F(r) = step(r) − r`. Returns the final point, its
/// residual and the number of accepted steps.
fn newton(sys: &System, start: Bloch, max_steps: usize, tol: f64) -> (Bloch, f64, usize) {
    let Ok((mut res, mut f)) = residual(sys, start) else {
        return (start, f64::INFINITY, 0);
    };
    let mut r = start;
    let mut taken = 0;
    let mut polish = 2;
    while taken < max_steps {
        if res <= tol {
            // A couple of extra steps push the residual to round-off.
            if polish == 0 || res == 0.0 {
                break;
            }
            polish -= 1;
        }
        let Ok(j) = sys.jacobian(r) else { break };
        let jf = NaMatrix3::from_fn(|i, k| j[i][k] - if i == k { 1.0 } else { 0.0 });
        let Some(delta) = jf.lu().solve(&Vector3::new(-f[0], -f[1], -f[2])) else { break };
        let mut t = 1.0;
        let mut accepted = false;
        while t > 1e-6 {
            let trial = [r[0] + t * delta[0], r[1] + t * delta[1], r[2] + t * delta[2]];
            if let Ok((res_t, f_t)) = residual(sys, trial) {
                if res_t < res {
                    r = trial;
                    res = res_t;
                    f = f_t;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
        taken += 1;
    }
    (r, res, taken)
}

/// Iterates from `seed`, then polishes with damped Newton.
pub fn find_fixed_point(sys: &System, seed: Bloch, opts: &FixedPointOptions) -> Result<FixedPointReport> {
    let (start, iterations, mut classification, max_asym) = if opts.newton_only {
        let s = sys.step(seed)?;
        (seed, 0, Classification::MaxIterations, s.asymmetry)
    } else {
        let traj = iterate(sys, seed, &opts.iterate)?;
        if traj.classification == Classification::DomainError {
            return Err(Error::NoStableFixedPoint(traj.error.unwrap_or_default()));
        }
        (traj.last(), traj.steps, traj.classification, traj.max_asymmetry)
    };

    let (location, res, newton_steps) = if classification == Classification::TrivialFixedPoint {
        let (res, _) = residual(sys, [0.0; 3])?;
        ([0.0; 3], res, 0)
    } else {
        newton(sys, start, opts.newton_steps, opts.residual_tol)
    };
    if classification != Classification::TrivialFixedPoint {
        classification = if res > opts.residual_tol {
            Classification::MaxIterations
        } else if norm(location) < TRIVIAL_RADIUS {
            Classification::TrivialFixedPoint
        } else {
            Classification::NontrivialFixedPoint
        };
    }
    let jacobian = sys.jacobian(location)?;
    let eig = eigenvalues(&jacobian);
    let dominant = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(FixedPointReport {
        location,
        residual: res,
        jacobian,
        eigenvalues: eig,
        dominant_modulus: dominant,
        stable: dominant < 1.0,
        classification,
        iterations,
        newton_steps,
        max_asymmetry: max_asym,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;
    use crate::dynamics::{depolarized_t, t_direction};
    use crate::map::DistillationMap;

    fn fifteen() -> DistillationMap {
        DistillationMap::build(&builtin("15-1-3-canonical").unwrap()).unwrap()
    }

    #[test]
    fn ideal_converges_to_pure_target() {
        let map = fifteen();
        let sys = System::new(&map, 1.0);
        let traj = iterate(&sys, depolarized_t(0.1), &IterateOptions::default()).unwrap();
        assert_eq!(traj.classification, Classification::NontrivialFixedPoint);
        assert!((norm(traj.last()) - 1.0).abs() < 1e-10);
        assert!(dist(traj.last(), t_direction()) < 1e-10);
        assert_eq!(traj.points.len(), traj.steps + 1);
    }

    #[test]
    fn origin_is_fixed() {
        let map = fifteen();
        let sys = System::new(&map, 0.3);
        let traj = iterate(&sys, [0.0; 3], &IterateOptions::default()).unwrap();
        assert_eq!(traj.classification, Classification::TrivialFixedPoint);
        assert_eq!(traj.steps, 1);
        let fp = find_fixed_point(&sys, [0.0; 3], &FixedPointOptions::default()).unwrap();
        assert_eq!(fp.residual, 0.0);
        assert_eq!(fp.location, [0.0; 3]);
    }

    #[test]
    fn below_threshold_collapses() {
        let map = fifteen();
        let sys = System::new(&map, 1f64.tanh());
        let traj = iterate(&sys, depolarized_t(0.01), &IterateOptions::default()).unwrap();
        assert_eq!(traj.classification, Classification::TrivialFixedPoint);
    }

    #[test]
    fn mixed_target_above_threshold() {
        let map = fifteen();
        let sys = System::new(&map, 2f64.tanh());
        let fp = find_fixed_point(&sys, depolarized_t(0.05), &FixedPointOptions::default()).unwrap();
        assert!(fp.is_nontrivial_stable(), "{fp:?}");
        assert!(fp.residual <= 1e-12);
        assert!(norm(fp.location) < 1.0 - 1e-6);
    }

    #[test]
    fn ideal_fixed_point_is_superattracting() {
        let map = fifteen();
        let sys = System::new(&map, 1.0);
        let fp = find_fixed_point(&sys, depolarized_t(0.1), &FixedPointOptions::default()).unwrap();
        assert!((norm(fp.location) - 1.0).abs() < 1e-10);
        assert!(fp.dominant_modulus < 1e-6, "{}", fp.dominant_modulus);
    }

    #[test]
    fn rejects_bad_start() {
        let map = fifteen();
        let sys = System::new(&map, 0.5);
        assert!(iterate(&sys, [1.0, 1.0, 0.0], &IterateOptions::default()).is_err());
        let bad = IterateOptions { tol: 0.0, ..IterateOptions::default() };
        assert!(iterate(&sys, [0.1, 0.0, 0.0], &bad).is_err());
    }
}
