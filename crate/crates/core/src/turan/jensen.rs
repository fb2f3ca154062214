use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::turan::poly::{real_root_count_full, Poly};

/// `J^{d,n}(X) = Σ_{k=0}^{d} C(d,k) α(n+k) X^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JensenPoly {
    d: usize,
    n: usize,
    coeffs: Vec<BigInt>,
}

impl JensenPoly {
    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn shift(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_integers(&self.coeffs)
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

fn check_len(seq: &[BigInt], last: usize) -> Result<()> {
    if last >= seq.len() {
        return Err(Error::SequenceTooShort { needed: last, len: seq.len() });
    }
    Ok(())
}

pub fn jensen_poly(seq: &[BigInt], d: usize, n: usize) -> Result<JensenPoly> {
    if d == 0 {
        return Err(invalid("Jensen degree must be at least 1"));
    }
    check_len(seq, n + d)?;
    let coeffs = (0..=d).map(|k| binomial(d, k) * &seq[n + k]).collect();
    Ok(JensenPoly { d, n, coeffs })
}

/// All roots real, counted with multiplicity. The zero polynomial is not
/// hyperbolic; a nonzero constant trivially is.
pub fn is_hyperbolic(jp: &JensenPoly) -> bool {
    let p = jp.to_poly();
    !p.is_zero() && real_root_count_full(&p).map(|rc| rc.all_real()).unwrap_or(false)
}

/// Hermite polynomials with `Σ H_d(X) t^d/d! = exp(Xt − t²)`, so that
/// `H_{d+1} = X H_d − 2d H_{d−1}`.
pub fn hermite(d: usize) -> Poly {
    let mut prev = Poly::one();
    if d == 0 {
        return prev;
    }
    let mut cur = Poly::x();
    for k in 1..d {
        let two_k = BigRational::from_integer((2 * k).into());
        let next = Poly::x().mul(&cur).sub(&prev.scale(&two_k));
        prev = cur;
        cur = next;
    }
    cur
}

/// Shift and scale in `log α(n+j) − log α(n) ≈ A j − δ² j²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RenormSeq {
    pub a_of_n: f64,
    pub delta_of_n: f64,
}

/// Main-term values for `p̄_0(n)`: `A(n) = π/√(6n)` and
/// `δ(n)² = π√(2/3)/8 · n^{−3/2}`.
pub fn renorm_sequences(n: u64) -> Result<RenormSeq> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let nf = n as f64;
    let a = PI * (1.0 / (6.0 * nf)).sqrt();
    let delta_sq = PI * (2.0f64 / 3.0).sqrt() / 8.0 * nf.powf(-1.5);
    Ok(RenormSeq { a_of_n: a, delta_of_n: delta_sq.sqrt() })
}

/// `A` and `δ` from the full main term `n^{−5/4} e^{π√(2n/3)}`, power
/// factor included: `A = π/√(6n) − 5/(4n)`, `δ² = π√(2/3)/8 · n^{−3/2} − 5/(8n²)`.
pub fn renorm_sequences_with_power(n: u64) -> Result<RenormSeq> {
    let base = renorm_sequences(n)?;
    let nf = n as f64;
    let delta_sq = base.delta_of_n.powi(2) - 5.0 / (8.0 * nf * nf);
    if !(delta_sq > 0.0) {
        return Err(invalid(format!("δ² is not positive at n = {n}")));
    }
    Ok(RenormSeq { a_of_n: base.a_of_n - 5.0 / (4.0 * nf), delta_of_n: delta_sq.sqrt() })
}

/// Even-index version of [`renorm_sequences_with_power`].
pub fn renorm_sequences_with_power_even(m: u64) -> Result<RenormSeq> {
    if m == 0 {
        return Err(invalid("m must be at least 1"));
    }
    let rs = renorm_sequences_with_power(2 * m)?;
    Ok(RenormSeq { a_of_n: 2.0 * rs.a_of_n, delta_of_n: 2.0 * rs.delta_of_n })
}

/// The same data for the even-index sequence `α(m) = p̄_0(2m)`: one step in
/// `m` is two steps in `n`, so `A ↦ 2A(2m)` and `δ ↦ 2δ(2m)`.
pub fn renorm_sequences_even(m: u64) -> Result<RenormSeq> {
    if m == 0 {
        return Err(invalid("m must be at least 1"));
    }
    let rs = renorm_sequences(2 * m)?;
    Ok(RenormSeq { a_of_n: 2.0 * rs.a_of_n, delta_of_n: 2.0 * rs.delta_of_n })
}

/// Coefficients, low to high, of
/// `Ĵ(X) = δ^{−d}/α(n) · J^{d,n}((δX − 1)/e^{A})`.
///
/// The ratios `α(n+k)/α(n)` are exact; each `g_k = α(n+k)e^{−kA}/α(n)` is
/// then taken as `1 + expm1(log ratio − kA)` so the finite differences that
/// make up the lower coefficients never subtract the constant one in
/// floating point.
pub fn renormalized_jensen(seq: &[BigInt], d: usize, n: usize, rs: &RenormSeq) -> Result<Vec<f64>> {
    if d == 0 {
        return Err(invalid("Jensen degree must be at least 1"));
    }
    check_len(seq, n + d)?;
    if let Some(k) = (0..=d).find(|&k| !seq[n + k].is_positive()) {
        return Err(invalid(format!("sequence value at {} is not positive", n + k)));
    }
    if !(rs.delta_of_n > 0.0) {
        return Err(invalid("δ must be positive"));
    }
    let h: Vec<f64> = (0..=d)
        .map(|k| {
            let ratio = BigRational::new(seq[n + k].clone(), seq[n].clone());
            let log_ratio = ratio.to_f64().expect("ratio is finite").ln();
            (log_ratio - k as f64 * rs.a_of_n).exp_m1()
        })
        .collect();
    let delta = rs.delta_of_n;
    let mut out = Vec::with_capacity(d + 1);
    for i in 0..=d {
        // Σ_k C(d,k) C(k,i) (−1)^{k−i} g_k; the constant parts of g_k cancel
        // unless i = d.
        let mut s = 0.0;
        for (k, hk) in h.iter().enumerate().skip(i) {
            let c = binomial(d, k) * binomial(k, i);
            let c = c.to_f64().expect("small binomial");
            let term = c * hk;
            s += if (k - i) % 2 == 0 { term } else { -term };
        }
        if i == d {
            s += 1.0;
        }
        out.push(s * delta.powi(i as i32 - d as i32));
    }
    Ok(out)
}

/// `max_i |c_i − [X^i]H_d|`.
pub fn hermite_distance(coeffs: &[f64], d: usize) -> f64 {
    let h = hermite(d).to_f64_coeffs();
    (0..coeffs.len().max(h.len()))
        .map(|i| (coeffs.get(i).copied().unwrap_or(0.0) - h.get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

/// Hyperbolicity of `J^{d,m}` over `m ∈ [lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperbolicityScan {
    pub d: usize,
    pub lo: usize,
    pub hi: usize,
    pub failures: Vec<usize>,
}

impl HyperbolicityScan {
    /// Least `m₀ ≥ lo` with every `m ∈ [m₀, hi]` hyperbolic.
    pub fn onset(&self) -> usize {
        self.failures.last().map_or(self.lo, |&m| m + 1)
    }
}

pub fn hyperbolicity_scan(seq: &[BigInt], d: usize, lo: usize, hi: usize) -> Result<HyperbolicityScan> {
    if lo > hi {
        return Err(invalid(format!("empty range {lo}..={hi}")));
    }
    check_len(seq, hi + d)?;
    let verdicts: Vec<(usize, bool)> = (lo..=hi)
        .into_par_iter()
        .map(|m| jensen_poly(seq, d, m).map(|jp| (m, is_hyperbolic(&jp))))
        .collect::<Result<_>>()?;
    let failures = verdicts.into_iter().filter(|&(_, ok)| !ok).map(|(m, _)| m).collect();
    Ok(HyperbolicityScan { d, lo, hi, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::p2_values;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn jensen_coefficients() {
        let seq = p2_values(10);
        let jp = jensen_poly(&seq, 2, 2).unwrap();
        assert_eq!(jp.coeffs(), ints(&[5, 20, 20]).as_slice());
        assert!(is_hyperbolic(&jp));
        let jp = jensen_poly(&seq, 2, 0).unwrap();
        assert_eq!(jp.coeffs(), ints(&[1, 4, 5]).as_slice());
        assert!(!is_hyperbolic(&jp));
        assert!(matches!(jensen_poly(&seq, 3, 8), Err(Error::SequenceTooShort { .. })));
        assert!(jensen_poly(&seq, 0, 0).is_err());
    }

    #[test]
    fn degree_one_always_hyperbolic() {
        let seq = ints(&[3, 1, 4, 1, 5, 9, 2, 6]);
        for n in 0..7 {
            assert!(is_hyperbolic(&jensen_poly(&seq, 1, n).unwrap()));
        }
    }

    #[test]
    fn degree_two_is_log_concavity() {
        let seq = p2_values(60);
        for n in 0..58 {
            let lc = &seq[n + 1] * &seq[n + 1] >= &seq[n] * &seq[n + 2];
            assert_eq!(is_hyperbolic(&jensen_poly(&seq, 2, n).unwrap()), lc, "n = {n}");
        }
    }

    #[test]
    fn hermite_table() {
        assert_eq!(hermite(0), Poly::one());
        assert_eq!(hermite(1), Poly::x());
        assert_eq!(hermite(2), Poly::from_i64(&[-2, 0, 1]));
        assert_eq!(hermite(3), Poly::from_i64(&[0, -6, 0, 1]));
        assert_eq!(hermite(4), Poly::from_i64(&[12, 0, -12, 0, 1]));
    }

    #[test]
    fn hermite_recurrence_and_roots() {
        for d in 1..8 {
            let two_d = BigRational::from_integer((2 * d).into());
            let rhs = Poly::x().mul(&hermite(d)).sub(&hermite(d - 1).scale(&two_d));
            assert_eq!(hermite(d + 1), rhs);
        }
        for d in 1..=6 {
            let rc = real_root_count_full(&hermite(d)).unwrap();
            assert_eq!(rc.distinct, d);
        }
    }

    #[test]
    fn renorm_values() {
        let rs = renorm_sequences(6).unwrap();
        assert!((rs.a_of_n - PI / 6.0).abs() < 1e-15);
        for n in [1u64, 10, 1000, 123456] {
            let rs = renorm_sequences(n).unwrap();
            let v = rs.delta_of_n.powi(2) * (n as f64).powf(1.5);
            assert!((v - 0.320_637).abs() < 1e-6, "{v}");
        }
        let (a, b) = (renorm_sequences(10).unwrap(), renorm_sequences(11).unwrap());
        assert!(b.a_of_n < a.a_of_n && b.delta_of_n < a.delta_of_n);
        assert!(renorm_sequences(0).is_err());
    }

    #[test]
    fn renormalized_degree_one_tends_to_x() {
        let seq = p2_values(2002);
        let mut last = f64::INFINITY;
        for m in [100usize, 1000, 2000] {
            let c = renormalized_jensen(&seq, 1, m, &renorm_sequences_even(m as u64).unwrap()).unwrap();
            let dist = hermite_distance(&c, 1);
            assert!(dist < last, "m = {m}: {dist}");
            last = dist;
        }
    }

    #[test]
    fn renormalized_matches_direct_composition() {
        // Small case where plain floating composition is accurate enough.
        let seq = ints(&[7, 11, 19, 30]);
        let rs = RenormSeq { a_of_n: 0.4, delta_of_n: 0.5 };
        let got = renormalized_jensen(&seq, 3, 0, &rs).unwrap();
        let (a, delta) = (rs.a_of_n, rs.delta_of_n);
        let j = jensen_poly(&seq, 3, 0).unwrap().to_poly();
        for x in [-1.0, 0.0, 0.3, 2.0] {
            let direct = j.eval_f64((delta * x - 1.0) / a.exp()) / (delta.powi(3) * 7.0);
            let ours: f64 = got.iter().rev().fold(0.0, |acc, c| acc * x + c);
            assert!((direct - ours).abs() < 1e-12 * direct.abs().max(1.0), "{direct} vs {ours}");
        }
    }

    #[test]
    fn power_term_tightens_degree_two() {
        let seq = p2_values(2002);
        let m = 2000;
        let plain = renormalized_jensen(&seq, 2, m, &renorm_sequences_even(m as u64).unwrap()).unwrap();
        let full = renormalized_jensen(&seq, 2, m, &renorm_sequences_with_power_even(m as u64).unwrap()).unwrap();
        assert!(hermite_distance(&full, 2) < hermite_distance(&plain, 2));
        assert!(renorm_sequences_with_power(0).is_err());
    }

    #[test]
    fn renormalized_rejects_bad_input() {
        let rs = RenormSeq { a_of_n: 0.1, delta_of_n: 0.1 };
        assert!(renormalized_jensen(&ints(&[1, 0, 2]), 2, 0, &rs).is_err());
        assert!(renormalized_jensen(&ints(&[1, 1]), 2, 0, &rs).is_err());
    }

    #[test]
    fn scan_onset() {
        let seq = p2_values(40);
        let scan = hyperbolicity_scan(&seq, 2, 0, 30).unwrap();
        assert_eq!(scan.failures, vec![0, 4]);
        assert_eq!(scan.onset(), 5);
    }
}
