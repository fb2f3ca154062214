//! Direct evaluation of the infinite products near `|q| = 1` and the
//! major/minor arc comparisons for `H(a,b;q)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::Serialize;

use crate::asymptotics::lerch::{dilog_unit, root_of_unity};
use crate::error::{invalid, Result};
use crate::partition::bg_core_size;

/// Factors are included until `|q^n|` drops below this.
const PRODUCT_CUTOFF: f64 = 1e-16;

/// Minor-arc slopes `M` in `y = Mx`.
pub const MINOR_ARC_SLOPES: [f64; 2] = [2.0, 5.0];
/// Real parts `x` of the sampled points.
pub const MINOR_ARC_XS: [f64; 2] = [0.05, 0.02];

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn check_cone(z: Complex64) -> Result<()> {
    if !(z.re > 0.0) {
        return Err(invalid(format!("need Re z > 0, got {z}")));
    }
    Ok(())
}

/// `log Π_{n≥1} (1 − ζ q^{step·n})` for `|q| < 1`, summed factor by factor.
fn log_product(zeta: Complex64, q: Complex64, step: u32) -> Complex64 {
    let q_step = q.powu(step);
    let mut pow = q_step;
    let mut acc = Complex64::new(0.0, 0.0);
    while pow.norm() >= PRODUCT_CUTOFF {
        acc += (one() - zeta * pow).ln();
        pow *= q_step;
    }
    acc
}

/// `F₁(ζ; e^{−z}) = Π_{n≥1} (1 − ζ e^{−nz})` by direct truncated product.
pub fn f1_product(zeta: Complex64, z: Complex64) -> Result<Complex64> {
    check_cone(z)?;
    Ok(log_product(zeta, (-z).exp(), 1).exp())
}

/// Leading behaviour `(1−ζ)^{−1/2} exp(−Li₂(ζ)/z)` of `F₁(ζ; e^{−z})` as `z → 0`.
pub fn f1_major_arc(zeta: Complex64, z: Complex64) -> Result<Complex64> {
    if (zeta - one()).norm() < 1e-12 {
        return Err(invalid("zeta = 1 is excluded"));
    }
    check_cone(z)?;
    let li2 = dilog_unit(zeta, 1e-12)?;
    Ok((one() - zeta).sqrt().inv() * (-li2 / z).exp())
}

/// `H(ζ; q) = q^{j(2j−1)} / Π_{n≥1} (1 − ζ q^{2n})(1 − ζ^{−1} q^{2n})`.
pub fn h_twisted(j: i64, zeta: Complex64, q: Complex64) -> Complex64 {
    let log = log_product(zeta, q, 2) + log_product(zeta.inv(), q, 2);
    q.powu(bg_core_size(j) as u32) * (-log).exp()
}

/// `H(a,b;q) = (1/b) Σ_{k=0}^{b−1} ζ_b^{−ak} H(ζ_b^k; q)`.
pub fn h_residue_class(j: i64, a: usize, b: usize, q: Complex64) -> Complex64 {
    let sum: Complex64 = (0..b as i64)
        .map(|k| root_of_unity(-(a as i64) * k, b) * h_twisted(j, root_of_unity(k, b), q))
        .sum();
    sum / b as f64
}

/// One row of the exact check `π² − 3 arg(−ζ_b^k)² < 2π²`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArgInequalityRow {
    pub k: usize,
    /// `arg(−ζ_b^k)/π` in `(−1, 1]`, as `numerator/denominator`.
    pub arg_over_pi: (i64, i64),
    /// `(π² − 3 arg²)/π²`.
    pub lhs_over_pi2: (i64, i64),
    pub holds: bool,
}

/// `|H(a,b;e^{−z})|` on a minor-arc point against the real point of equal modulus.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArcSample {
    pub a: usize,
    pub slope: f64,
    pub x: f64,
    pub minor_abs: f64,
    pub major_abs: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArcDominanceReport {
    pub b: usize,
    pub j: i64,
    pub inequality: Vec<ArgInequalityRow>,
    pub samples: Vec<ArcSample>,
}

impl ArcDominanceReport {
    pub fn inequality_holds(&self) -> bool {
        self.inequality.iter().all(|r| r.holds)
    }

    pub fn max_ratio(&self) -> f64 {
        self.samples.iter().map(|s| s.ratio).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.inequality_holds() && self.samples.iter().all(|s| s.ratio < 1.0)
    }
}

/// `arg(−ζ_b^k)/π` reduced to `(−1, 1]`.
pub fn arg_neg_root_over_pi(k: usize, b: usize) -> Ratio<i64> {
    // −ζ_b^k = exp(iπ(2k + b)/b); reduce the angle mod 2π.
    let b = b as i64;
    let num = (2 * k as i64 + b).rem_euclid(2 * b);
    let r = Ratio::new(num, b);
    if r > Ratio::from_integer(1) {
        r - Ratio::from_integer(2)
    } else {
        r
    }
}

pub fn arg_inequality_row(k: usize, b: usize) -> ArgInequalityRow {
    let r = arg_neg_root_over_pi(k, b);
    let lhs = Ratio::from_integer(1) - Ratio::from_integer(3) * r * r;
    ArgInequalityRow {
        k,
        arg_over_pi: (*r.numer(), *r.denom()),
        lhs_over_pi2: (*lhs.numer(), *lhs.denom()),
        holds: lhs < Ratio::from_integer(2),
    }
}

pub fn arc_dominance_check(b: usize) -> Result<ArcDominanceReport> {
    arc_dominance_check_for(0, b)
}

pub fn arc_dominance_check_for(j: i64, b: usize) -> Result<ArcDominanceReport> {
    if b < 2 {
        return Err(invalid(format!("b must be at least 2, got {b}")));
    }
    let inequality = (1..b).map(|k| arg_inequality_row(k, b)).collect();
    let mut samples = Vec::new();
    for a in 0..b {
        for &slope in &MINOR_ARC_SLOPES {
            for &x in &MINOR_ARC_XS {
                let z = Complex64::new(x, slope * x);
                let minor_abs = h_residue_class(j, a, b, (-z).exp()).norm();
                let major_abs = h_residue_class(j, a, b, Complex64::new((-z.norm()).exp(), 0.0)).norm();
                samples.push(ArcSample { a, slope, x, minor_abs, major_abs, ratio: minor_abs / major_abs });
            }
        }
    }
    Ok(ArcDominanceReport { b, j, inequality, samples })
}

/// Primitive `b`-th roots of unity `ζ_b^k`, `gcd(k, b) = 1`.
pub fn primitive_roots(b: usize) -> Vec<(usize, Complex64)> {
    (1..=b)
        .filter(|&k| num_integer::gcd(k, b) == 1)
        .map(|k| (k % b, root_of_unity(k as i64, b)))
        .collect()
}

/// `arg(−ζ)` for a point on the unit circle, principal branch.
pub fn arg_neg(zeta: Complex64) -> f64 {
    (-zeta).arg()
}

/// Exponential growth rate of `1/(F₁(ζ;q²)F₁(ζ⁻¹;q²))` relative to `(q²;q²)_∞^{−2}`:
/// `max(0, arg(−ζ)²/4 − π²/12) / (π²/6)`. Below one means the twisted term is dominated.
pub fn twisted_growth_ratio(zeta: Complex64) -> f64 {
    let t = arg_neg(zeta);
    (t * t / 4.0 - PI * PI / 12.0).max(0.0) / (PI * PI / 6.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f1_leading_term_converges_on_real_axis() {
        for zeta in [Complex64::new(-1.0, 0.0), root_of_unity(1, 3)] {
            let mut last = f64::INFINITY;
            for x in [0.2, 0.1, 0.05] {
                let z = Complex64::new(x, 0.0);
                let ratio = f1_product(zeta, z).unwrap() / f1_major_arc(zeta, z).unwrap();
                let err = (ratio - one()).norm();
                assert!(err < last, "ζ = {zeta}, x = {x}: {err} ≥ {last}");
                last = err;
            }
            assert!(last < 0.05);
        }
    }

    #[test]
    fn f1_major_arc_is_finite_off_axis() {
        let v = f1_major_arc(Complex64::new(-1.0, 0.0), Complex64::new(0.1, 0.05)).unwrap();
        assert!(v.norm().is_finite() && v.norm() > 0.0);
        assert!(f1_major_arc(one(), Complex64::new(0.1, 0.0)).is_err());
        assert!(f1_major_arc(Complex64::new(-1.0, 0.0), Complex64::new(-0.1, 0.0)).is_err());
    }

    #[test]
    fn exact_arg_inequality() {
        assert_eq!(arg_neg_root_over_pi(1, 2), Ratio::from_integer(0));
        let row = arg_inequality_row(1, 2);
        assert_eq!(row.lhs_over_pi2, (1, 1));
        assert!(row.holds);
        // ζ = i: −i has argument −π/2, so the left side is π²/4.
        let row = arg_inequality_row(1, 4);
        assert_eq!(row.arg_over_pi, (-1, 2));
        assert_eq!(row.lhs_over_pi2, (1, 4));
        assert!(row.holds);
    }

    #[test]
    fn arg_reduction_matches_floating_point() {
        for b in 2..=12 {
            for k in 1..b {
                let exact = arg_neg_root_over_pi(k, b);
                let float = arg_neg(root_of_unity(k as i64, b)) / PI;
                let e = *exact.numer() as f64 / *exact.denom() as f64;
                assert!((e - float).abs() < 1e-12 || (e - 1.0).abs() < 1e-12 && (float + 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn residue_classes_sum_to_total() {
        let q = Complex64::new(0.3, 0.2);
        let total: Complex64 = (0..5).map(|a| h_residue_class(0, a, 5, q)).sum();
        assert!((total - h_twisted(0, one(), q)).norm() < 1e-12);
    }

    #[test]
    fn minor_arcs_are_dominated_for_b5() {
        let report = arc_dominance_check(5).unwrap();
        assert!(report.inequality_holds());
        assert_eq!(report.samples.len(), 5 * 2 * 2);
        assert!(report.passed(), "max ratio {}", report.max_ratio());
        assert!(arc_dominance_check(1).is_err());
    }

    #[test]
    fn twisted_terms_grow_slower() {
        for b in 2..=12 {
            for (_, zeta) in primitive_roots(b) {
                assert!(twisted_growth_ratio(zeta) < 1.0);
            }
        }
    }
}
