use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};

const UNIT_TOL: f64 = 1e-12;

/// Terms summed directly before the Euler–Maclaurin tail takes over at `z = 1`.
const ZETA_TERMS: usize = 1000;

/// `Φ(z, 2, 1) = Σ_{n≥0} z^n/(n+1)²` for `|z| = 1`, accurate to `tol`.
///
/// For `z ≠ 1` the partial sums of `z^n` are bounded by `2/|1−z|`, so Abel
/// summation bounds the tail after `M` terms by `2/(|1−z|(M+2)²)`. At
/// `z = 1` the tail `Σ_{k>M} 1/k²` is replaced by its Euler–Maclaurin
/// expansion, whose error is below the first omitted term.
pub fn lerch_phi_unit(z: Complex64, tol: f64) -> Result<Complex64> {
    if !(tol > 0.0) {
        return Err(invalid(format!("tolerance must be positive, got {tol}")));
    }
    if (z.norm() - 1.0).abs() > UNIT_TOL {
        return Err(invalid(format!("|z| must be 1, got {}", z.norm())));
    }
    let gap = (Complex64::new(1.0, 0.0) - z).norm();
    if gap == 0.0 {
        return Ok(Complex64::new(zeta2_tail_corrected(), 0.0));
    }
    let terms = ((2.0 / (gap * tol)).sqrt().ceil() as usize).max(16);
    // Compensated summation keeps rounding well below tol over millions of terms.
    let mut acc = Complex64::new(0.0, 0.0);
    let mut carry = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    for n in 0..terms {
        let d = (n + 1) as f64;
        let y = pow / (d * d) - carry;
        let t = acc + y;
        carry = (t - acc) - y;
        acc = t;
        pow *= z;
    }
    Ok(acc)
}

fn zeta2_tail_corrected() -> f64 {
    let m = ZETA_TERMS;
    let head: f64 = (1..=m).rev().map(|k| 1.0 / (k as f64 * k as f64)).sum();
    // Σ_{k>m} 1/k² = 1/m − 1/(2m²) + 1/(6m³) − 1/(30m⁵) + 1/(42m⁷) − …
    let x = m as f64;
    let tail = 1.0 / x - 1.0 / (2.0 * x * x) + 1.0 / (6.0 * x.powi(3)) - 1.0 / (30.0 * x.powi(5))
        + 1.0 / (42.0 * x.powi(7));
    head + tail
}

/// `Li₂(z) = z Φ(z, 2, 1)` on the unit circle.
pub fn dilog_unit(z: Complex64, tol: f64) -> Result<Complex64> {
    Ok(z * lerch_phi_unit(z, tol)?)
}

/// `|Li₂(ζ) + Li₂(ζ⁻¹) + π²/6 + ½ log(−ζ)²|` with the principal logarithm.
pub fn dilog_identity_residual(zeta: Complex64) -> Result<f64> {
    if (zeta - Complex64::new(1.0, 0.0)).norm() < UNIT_TOL {
        return Err(invalid("zeta = 1 is excluded"));
    }
    let tol = 1e-12;
    let lhs = dilog_unit(zeta, tol)? + dilog_unit(zeta.inv(), tol)?;
    let log = (-zeta).ln();
    let rhs = -PI * PI / 6.0 - 0.5 * log * log;
    Ok((lhs - rhs).norm())
}

/// `e^{2πi r/b}`.
pub fn root_of_unity(r: i64, b: usize) -> Complex64 {
    let r = r.rem_euclid(b as i64);
    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / b as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn phi_at_one_is_zeta_two() {
        let v = lerch_phi_unit(Complex64::new(1.0, 0.0), TOL).unwrap();
        assert!((v.re - PI * PI / 6.0).abs() < TOL);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn phi_at_minus_one_is_eta_two() {
        let v = lerch_phi_unit(Complex64::new(-1.0, 0.0), TOL).unwrap();
        assert!((v.re - PI * PI / 12.0).abs() < TOL, "{v}");
        assert!(v.im.abs() < TOL);
        let li = dilog_unit(Complex64::new(-1.0, 0.0), TOL).unwrap();
        assert!((li.re + PI * PI / 12.0).abs() < TOL);
    }

    #[test]
    fn phi_rejects_off_circle() {
        assert!(lerch_phi_unit(Complex64::new(0.5, 0.0), TOL).is_err());
        assert!(lerch_phi_unit(Complex64::new(1.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn doubling_length_is_stable() {
        let z = root_of_unity(1, 7);
        let a = lerch_phi_unit(z, 1e-8).unwrap();
        let b = lerch_phi_unit(z, 1e-8 / 4.0).unwrap();
        assert!((a - b).norm() < 1e-8);
    }

    #[test]
    fn identity_residuals() {
        for zeta in [Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0), root_of_unity(1, 5)] {
            assert!(dilog_identity_residual(zeta).unwrap() <= 1e-10);
        }
        assert!(dilog_identity_residual(Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn real_part_matches_closed_form() {
        // Re Li₂(e^{iθ}) = π²/6 − θ(2π − θ)/4 for 0 ≤ θ ≤ 2π.
        for r in 1..6 {
            let theta = 2.0 * PI * r as f64 / 6.0;
            let li = dilog_unit(root_of_unity(r, 6), 1e-13).unwrap();
            let expect = PI * PI / 6.0 - theta * (2.0 * PI - theta) / 4.0;
            assert!((li.re - expect).abs() < 1e-11);
        }
    }
}
