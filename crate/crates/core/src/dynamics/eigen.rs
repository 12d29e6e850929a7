use num_complex::Complex64;

pub type Matrix3 = [[f64; 3]; 3];

/// Roots of the characteristic polynomial `t³ − tr·t² + c₂·t − det`, by
/// Cardano's formula in complex arithmetic with two Newton polish steps.
pub fn eigenvalues(m: &Matrix3) -> [Complex64; 3] {
    let tr = m[0][0] + m[1][1] + m[2][2];
    let c2 = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    // t³ + a t² + b t + c
    let (a, b, c) = (-tr, c2, -det);
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = Complex64::new(q * q / 4.0 + p * p * p / 27.0, 0.0).sqrt();
    let half_q = Complex64::new(-q / 2.0, 0.0);
    let u3 = if (half_q + disc).norm() >= (half_q - disc).norm() { half_q + disc } else { half_q - disc };
    let u = u3.powf(1.0 / 3.0);
    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let poly = |x: Complex64| ((x + a) * x + b) * x + c;
    let dpoly = |x: Complex64| (3.0 * x + 2.0 * a) * x + b;
    let mut roots = [Complex64::new(0.0, 0.0); 3];
    let mut w = Complex64::new(1.0, 0.0);
    for root in roots.iter_mut() {
        let uk = u * w;
        let t = if uk.norm() == 0.0 { uk } else { uk - p / (3.0 * uk) };
        let mut x = t - a / 3.0;
        for _ in 0..2 {
            let d = dpoly(x);
            if d.norm() > 1e-300 {
                let next = x - poly(x) / d;
                if poly(next).norm() < poly(x).norm() {
                    x = next;
                }
            }
        }
        *root = x;
        w *= omega;
    }
    roots
}

/// Largest eigenvalue modulus.
pub fn dominant_eigenvalue(m: &Matrix3) -> f64 {
    eigenvalues(m).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
