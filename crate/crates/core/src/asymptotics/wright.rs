use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Singular data `F(e^{−z}) ~ z^B e^{A/z} Σ α_j z^j` on one major arc, plus
/// the number of major arcs that contribute equally.
#[derive(Clone, Debug, PartialEq)]
pub struct WrightParams {
    a: f64,
    b: f64,
    alphas: Vec<Complex64>,
    arc_factor: u32,
}

impl WrightParams {
    pub fn new(a: f64, b: f64, alphas: Vec<Complex64>, arc_factor: u32) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(invalid(format!("A must be positive, got {a}")));
        }
        if alphas.is_empty() {
            return Err(invalid("at least one α coefficient is required"));
        }
        if arc_factor == 0 {
            return Err(invalid("arc factor must be positive"));
        }
        Ok(Self { a, b, alphas, arc_factor })
    }

    /// Real single-term data.
    pub fn leading(a: f64, b: f64, alpha0: f64, arc_factor: u32) -> Result<Self> {
        Self::new(a, b, vec![Complex64::new(alpha0, 0.0)], arc_factor)
    }

    /// `1/(q;q)_∞`: `A = π²/6`, `B = 1/2`, `α₀ = 1/√(2π)`.
    pub fn partitions() -> Self {
        Self::leading(PI * PI / 6.0, 0.5, 1.0 / (2.0 * PI).sqrt(), 1).expect("valid constants")
    }

    /// `p̄_j(a,b;n)` for even `j, n`: the arcs at `q = ±1` each carry
    /// `A = π²/6`, `B = 1`, `α₀ = 1/(bπ)`.
    pub fn bg_rank(b: usize) -> Self {
        Self::leading(PI * PI / 6.0, 1.0, 1.0 / (b as f64 * PI), 2).expect("valid constants")
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn alphas(&self) -> &[Complex64] {
        &self.alphas
    }

    pub fn arc_factor(&self) -> u32 {
        self.arc_factor
    }

    /// `p_r = Σ_{j≤r} α_j c_{j,r−j}`, with missing `α_j` read as zero.
    pub fn p_coefficient(&self, r: usize) -> Complex64 {
        (0..=r)
            .filter_map(|j| {
                let alpha = self.alphas.get(j)?;
                let c = wright_coefficient(j, r - j, self.a, self.b).expect("A validated");
                Some(alpha * c)
            })
            .sum()
    }

    /// The `n`-free constant of the one-term expansion, `arc_factor · Re(α₀ c_{0,0})`.
    pub fn leading_constant(&self) -> f64 {
        self.arc_factor as f64 * self.p_coefficient(0).re
    }
}

/// `c_{j,r} = (−1/(4√A))^r (√A)^{j+B+1/2} / (2√π) · Γ(x+r) / (r! Γ(x−r))`
/// with `x = j + B + 3/2`.
///
/// The Gamma ratio equals the finite product `(x−r)(x−r+1)⋯(x+r−1)`, which
/// vanishes exactly when `x − r` is a non-positive integer, matching
/// `1/Γ(non-positive integer) = 0`.
pub fn wright_coefficient(j: usize, r: usize, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(invalid(format!("A must be positive, got {a}")));
    }
    let sqrt_a = a.sqrt();
    let x = j as f64 + b + 1.5;
    let mut ratio = 1.0;
    for i in 0..2 * r {
        ratio *= x - r as f64 + i as f64;
    }
    let factorial: f64 = (1..=r).map(|k| k as f64).product();
    let prefactor = (-1.0 / (4.0 * sqrt_a)).powi(r as i32) * sqrt_a.powf(j as f64 + b + 0.5)
        / (2.0 * PI.sqrt());
    Ok(prefactor * ratio / factorial)
}

/// `arc_factor · n^{(−2B−3)/4} e^{2√(An)} Σ_{r<R} p_r n^{−r/2}`.
pub fn wright_asymptotic(n: u64, params: &WrightParams, terms: usize) -> Result<f64> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    if terms == 0 || terms > params.alphas.len() {
        return Err(invalid(format!(
            "term count {terms} must be between 1 and the number of α coefficients ({})",
            params.alphas.len()
        )));
    }
    let nf = n as f64;
    let series: f64 = (0..terms)
        .map(|r| params.p_coefficient(r).re * nf.powf(-(r as f64) / 2.0))
        .sum();
    let power = nf.powf((-2.0 * params.b - 3.0) / 4.0);
    let growth = (2.0 * (params.a * nf).sqrt()).exp();
    Ok(params.arc_factor as f64 * power * growth * series)
}

/// Which printed main term to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MainTermSource {
    /// `p̄_j(a,b;n)`, divided by `b`.
    Equidistributed,
    /// `p̄_j(n)`, the `b = 1` case.
    Total,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MainTermResult {
    pub n: u64,
    /// `2/(3^{3/4} 2^{5/4} b)`.
    pub constant: f64,
    /// `π√(2n/3)`.
    pub exponent_arg: f64,
    /// `constant · n^{−5/4} · e^{exponent_arg}`.
    pub value: f64,
}

/// The printed leading term `2 e^{π√(2n/3)} / (3^{3/4} (2n)^{5/4} b)`.
pub fn main_term(n: u64, b: usize, source: MainTermSource) -> Result<MainTermResult> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(invalid(format!("n must be even and at least 2, got {n}")));
    }
    let b = match source {
        MainTermSource::Total => 1,
        MainTermSource::Equidistributed => {
            if b == 0 {
                return Err(invalid("b must be positive"));
            }
            b
        }
    };
    let nf = n as f64;
    let total_constant = 2.0 / (3f64.powf(0.75) * 2f64.powf(1.25));
    let exponent_arg = PI * (2.0 * nf / 3.0).sqrt();
    let total = total_constant * nf.powf(-1.25) * exponent_arg.exp();
    // The b-split term is the total divided by b, as one floating expression.
    Ok(MainTermResult {
        n,
        constant: total_constant / b as f64,
        exponent_arg,
        value: total / b as f64,
    })
}

/// `6^{−3/4}`: the constant produced by the Wright expansion with the
/// `q = ±1` arc data for `p̄_j(n)`.
pub fn wright_bg_constant() -> f64 {
    6f64.powf(-0.75)
}

/// `√2 · 6^{−3/4}`: the constant in the printed main term.
pub fn printed_bg_constant() -> f64 {
    2f64.sqrt() * 6f64.powf(-0.75)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::p_values;
    use num_traits::ToPrimitive;

    #[test]
    fn c00_values() {
        let a = PI * PI / 6.0;
        let c = wright_coefficient(0, 0, a, 0.5).unwrap();
        assert!((c - PI.sqrt() / (2.0 * 6f64.sqrt())).abs() < 1e-15);
        assert!((c - 0.361801).abs() < 1e-6);
        let c = wright_coefficient(0, 0, a, 1.0).unwrap();
        assert!((c - PI / (2.0 * 6f64.powf(0.75))).abs() < 1e-15);
        assert!((c - 0.409738).abs() < 1e-6);
        assert!(wright_coefficient(0, 0, 0.0, 1.0).is_err());
    }

    #[test]
    fn r_zero_is_plain_power() {
        for j in 0..4 {
            for &(a, b) in &[(1.3, 0.5), (2.0, -0.25), (0.7, 1.0)] {
                let c = wright_coefficient(j, 0, a, b).unwrap();
                let expect = a.sqrt().powf(j as f64 + b + 0.5) / (2.0 * PI.sqrt());
                assert!((c - expect).abs() < 1e-14 * expect.abs().max(1.0));
            }
        }
    }

    #[test]
    fn gamma_ratio_vanishes_at_poles() {
        // B = 1/2, j = 0: x = 2, so Γ(2 − r) has a pole for r ≥ 2.
        assert_eq!(wright_coefficient(0, 2, 1.0, 0.5).unwrap(), 0.0);
        assert_eq!(wright_coefficient(0, 5, 1.0, 0.5).unwrap(), 0.0);
        assert!(wright_coefficient(0, 1, 1.0, 0.5).unwrap() != 0.0);
    }

    /// Γ(5.5)/Γ(−0.5) = −14.765625 from Γ(1/2) = √π and the recursion.
    #[test]
    fn gamma_ratio_half_integer() {
        // B = 1, j = 0: x = 2.5; r = 3 gives Γ(5.5)/(3! Γ(−0.5)).
        let a = 2.0f64;
        let c0 = wright_coefficient(0, 0, a, 1.0).unwrap();
        let c3 = wright_coefficient(0, 3, a, 1.0).unwrap();
        let expect = c0 * (-1.0 / (4.0 * a.sqrt())).powi(3) * (-14.765625) / 6.0;
        assert!((c3 - expect).abs() < 1e-14 * expect.abs());
    }

    #[test]
    fn hardy_ramanujan_calibration() {
        let params = WrightParams::partitions();
        let constant = params.leading_constant();
        assert!((constant - 1.0 / (4.0 * 3f64.sqrt())).abs() < 1e-12);
        assert!((constant - 0.144338).abs() < 1e-6);
        let p = p_values(5000);
        for n in [1000usize, 5000] {
            let w = wright_asymptotic(n as u64, &params, 1).unwrap();
            let exact = p[n].to_f64().unwrap();
            assert!((w / exact - 1.0).abs() < 0.02, "n = {n}: ratio {}", w / exact);
        }
    }

    #[test]
    fn bg_rank_constant() {
        let c = WrightParams::bg_rank(1).leading_constant();
        assert!((c - wright_bg_constant()).abs() < 1e-15);
        assert!((c - 0.260847).abs() < 1e-6);
        let c5 = WrightParams::bg_rank(5).leading_constant();
        assert!((c5 * 5.0 - c).abs() < 1e-15);
    }

    #[test]
    fn wright_argument_checks() {
        let params = WrightParams::partitions();
        assert!(wright_asymptotic(0, &params, 1).is_err());
        assert!(wright_asymptotic(10, &params, 2).is_err());
        assert!(WrightParams::leading(-1.0, 0.0, 1.0, 1).is_err());
        assert!(WrightParams::new(1.0, 0.0, vec![], 1).is_err());
    }

    #[test]
    fn main_term_scaling_and_constant() {
        let total = main_term(100, 1, MainTermSource::Total).unwrap();
        for b in 1..8 {
            let eq = main_term(100, b, MainTermSource::Equidistributed).unwrap();
            assert_eq!(eq.value, total.value / b as f64);
            assert!((eq.constant - printed_bg_constant() / b as f64).abs() < 1e-15);
        }
        assert!((total.constant - 0.368894).abs() < 1e-6);
        assert!((total.value / 1.61e8 - 1.0).abs() < 0.01, "{}", total.value);
        let rebuilt = total.constant * 100f64.powf(-1.25) * total.exponent_arg.exp();
        assert_eq!(rebuilt, total.value);
        assert!(main_term(101, 1, MainTermSource::Total).is_err());
        assert!(main_term(0, 1, MainTermSource::Total).is_err());
    }
}
