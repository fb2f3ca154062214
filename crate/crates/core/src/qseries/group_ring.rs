//! The integral group ring `Z[C_b]` and power series over it.
//!
//! An element is a dense vector `c_0..c_{b−1}` standing for
//! `Σ c_r ζ^r` with `ζ^b = 1`. Multiplication is cyclic convolution; no
//! cyclotomic relation is imposed until [`GroupRingElem::evaluate_integer`]
//! maps an element into `Z[ζ_b] ⊂ C`.

use std::ops::AddAssign;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qseries::IntSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElem {
    coeffs: Vec<BigInt>,
}

impl GroupRingElem {
    pub fn zero(b: usize) -> Self {
        assert!(b >= 1, "group order must be positive");
        Self { coeffs: vec![BigInt::zero(); b] }
    }

    pub fn one(b: usize) -> Self {
        Self::monomial(b, 0, BigInt::one())
    }

    /// `c·ζ^r`.
    pub fn monomial(b: usize, r: i64, c: BigInt) -> Self {
        let mut e = Self::zero(b);
        e.coeffs[r.rem_euclid(b as i64) as usize] = c;
        e
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "group order must be positive");
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Multiplication by `ζ^k`.
    pub fn rotate(&self, k: i64) -> Self {
        let b = self.order();
        let k = k.rem_euclid(b as i64) as usize;
        let mut out = Self::zero(b);
        for (r, c) in self.coeffs.iter().enumerate() {
            out.coeffs[(r + k) % b] = c.clone();
        }
        out
    }

    /// In-place `self += ζ^k · other`.
    pub fn add_rotated(&mut self, other: &Self, k: i64) {
        let b = self.order();
        let k = k.rem_euclid(b as i64) as usize;
        for (r, c) in other.coeffs.iter().enumerate() {
            if !c.is_zero() {
                self.coeffs[(r + k) % b] += c;
            }
        }
    }

    /// The ring endomorphism `ζ ↦ ζ^k`.
    pub fn substitute_power(&self, k: i64) -> Self {
        let b = self.order() as i64;
        let mut out = Self::zero(self.order());
        for (r, c) in self.coeffs.iter().enumerate() {
            out.coeffs[(r as i64 * k).rem_euclid(b) as usize] += c;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let b = self.order();
        assert_eq!(b, other.order(), "group orders differ");
        let mut out = Self::zero(b);
        for (r, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (s, y) in other.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    out.coeffs[(r + s) % b] += x * y;
                }
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Image under `ζ ↦ 1`.
    pub fn augmentation(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Reduces modulo the cyclotomic polynomial `Φ_b` and returns the value
    /// at a primitive `b`-th root of unity, provided it is a rational integer.
    pub fn evaluate_integer(&self) -> Option<BigInt> {
        let phi = cyclotomic_polynomial(self.order());
        let rem = poly_rem_monic(self.coeffs.clone(), &phi);
        if rem.iter().skip(1).all(Zero::is_zero) {
            Some(rem.into_iter().next().unwrap_or_default())
        } else {
            None
        }
    }
}

impl AddAssign<&GroupRingElem> for GroupRingElem {
    fn add_assign(&mut self, rhs: &GroupRingElem) {
        self.add_rotated(rhs, 0);
    }
}

/// Integer coefficients of `Φ_b`, ascending.
pub fn cyclotomic_polynomial(b: usize) -> Vec<BigInt> {
    assert!(b >= 1);
    // x^b − 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![BigInt::zero(); b + 1];
    num[0] = BigInt::from(-1);
    num[b] = BigInt::one();
    for d in (1..b).filter(|d| b.is_multiple_of(*d)) {
        num = poly_div_exact_monic(&num, &cyclotomic_polynomial(d));
    }
    num
}

fn poly_div_exact_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn].clone();
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

fn poly_rem_monic(mut num: Vec<BigInt>, den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    while num.len() > dn {
        let c = num.pop().expect("non-empty");
        let top = num.len();
        for (j, d) in den.iter().take(dn).enumerate() {
            num[top - dn + j] -= &c * d;
        }
    }
    num
}

/// A truncated power series in `q` with coefficients in `Z[C_b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingSeries {
    b: usize,
    coeffs: Vec<GroupRingElem>,
}

impl GroupRingSeries {
    pub fn zero(b: usize, n: usize) -> Self {
        Self { b, coeffs: vec![GroupRingElem::zero(b); n + 1] }
    }

    pub fn one(b: usize, n: usize) -> Self {
        let mut s = Self::zero(b, n);
        s.coeffs[0] = GroupRingElem::one(b);
        s
    }

    pub fn from_coeffs(b: usize, coeffs: Vec<GroupRingElem>) -> Self {
        assert!(!coeffs.is_empty());
        assert!(coeffs.iter().all(|c| c.order() == b), "mixed group orders");
        Self { b, coeffs }
    }

    pub fn modulus(&self) -> usize {
        self.b
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[GroupRingElem] {
        &self.coeffs
    }

    pub fn coeff(&self, e: usize) -> &GroupRingElem {
        &self.coeffs[e]
    }

    pub fn coeff_mut(&mut self, e: usize) -> &mut GroupRingElem {
        &mut self.coeffs[e]
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.b, other.b, "group orders differ");
        let n = self.truncation().min(other.truncation());
        let mut out = Self::zero(self.b, n);
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                if !other.coeffs[j].is_zero() {
                    let prod = self.coeffs[i].mul(&other.coeffs[j]);
                    out.coeffs[i + j] += &prod;
                }
            }
        }
        out
    }

    /// Inverse when the constant term is `±ζ^r`.
    pub fn invert(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        let unit_inv = group_ring_unit_inverse(c0)
            .ok_or_else(|| Error::NotAUnit(format!("{:?}", c0.coeffs())))?;
        let n = self.truncation();
        let mut inv = Self::zero(self.b, n);
        inv.coeffs[0] = unit_inv.clone();
        for m in 1..=n {
            let mut acc = GroupRingElem::zero(self.b);
            for i in 1..=m {
                if !self.coeffs[i].is_zero() {
                    acc += &self.coeffs[i].mul(&inv.coeffs[m - i]);
                }
            }
            inv.coeffs[m] = acc.mul(&unit_inv).neg();
        }
        Ok(inv)
    }

    /// Image under `ζ ↦ 1`.
    pub fn collapse(&self) -> IntSeries {
        IntSeries::from_coeffs(
            self.coeffs.iter().map(GroupRingElem::augmentation).collect(),
            self.truncation(),
        )
    }
}

/// Inverse of a signed monomial `±ζ^r`; other units are not needed here.
fn group_ring_unit_inverse(e: &GroupRingElem) -> Option<GroupRingElem> {
    let nonzero: Vec<(usize, &BigInt)> = e
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .collect();
    match nonzero.as_slice() {
        [(r, c)] if c.is_one() || (-*c).is_one() => Some(GroupRingElem::monomial(
            e.order(),
            -(*r as i64),
            (*c).clone(),
        )),
        _ => None,
    }
}

/// Exact quotient `value / b`, or a divisibility error naming `q^n`.
pub(crate) fn divide_exact(value: &BigInt, b: usize, n: usize) -> Result<BigInt> {
    let (q, r) = value.div_rem(&BigInt::from(b));
    if !r.is_zero() {
        return Err(Error::Divisibility { n, b, detail: format!("remainder {r} from {value}") });
    }
    Ok(q)
}
