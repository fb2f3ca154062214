use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Below this many output coefficients schoolbook multiplication wins.
const KRONECKER_MIN_LEN: usize = 64;

/// A power series in `q` truncated after `q^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSeries {
    coeffs: Vec<BigInt>,
}

impl IntSeries {
    pub fn zero(n: usize) -> Self {
        Self { coeffs: vec![BigInt::zero(); n + 1] }
    }

    pub fn one(n: usize) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// Pads with zeros or drops coefficients past `q^n`.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>, n: usize) -> Self {
        coeffs.resize(n + 1, BigInt::zero());
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64], n: usize) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect(), n)
    }

    /// Sparse constructor from `(exponent, coefficient)` pairs.
    pub fn from_terms(terms: impl IntoIterator<Item = (usize, BigInt)>, n: usize) -> Self {
        let mut s = Self::zero(n);
        for (e, c) in terms {
            if e <= n {
                s.coeffs[e] += c;
            }
        }
        s
    }

    /// `(q^step; q^step)_∞` via Euler's pentagonal theorem.
    pub fn euler_product(step: usize, n: usize) -> Self {
        assert!(step > 0, "step must be positive");
        let mut s = Self::zero(n);
        s.coeffs[0] = BigInt::one();
        for k in 1usize.. {
            let g1 = k * (3 * k - 1) / 2 * step;
            if g1 > n {
                break;
            }
            let sign = if k % 2 == 1 { -1 } else { 1 };
            s.coeffs[g1] += sign;
            let g2 = k * (3 * k + 1) / 2 * step;
            if g2 <= n {
                s.coeffs[g2] += sign;
            }
        }
        s
    }

    /// Truncation order `N`.
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, e: usize) -> &BigInt {
        &self.coeffs[e]
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    pub fn truncate(&self, n: usize) -> Self {
        Self::from_coeffs(self.coeffs[..=n.min(self.truncation())].to_vec(), n)
    }

    /// Product truncated at the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.truncation().min(other.truncation());
        if n + 1 >= KRONECKER_MIN_LEN && self.is_nonnegative() && other.is_nonnegative() {
            kronecker_mul(&self.coeffs[..=n], &other.coeffs[..=n], n)
        } else {
            schoolbook_mul(&self.coeffs[..=n], &other.coeffs[..=n], n)
        }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Multiplicative inverse, defined when the constant term is ±1.
    pub fn invert(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        let unit = if c0.is_one() {
            1
        } else if (-c0).is_one() {
            -1
        } else {
            return Err(Error::NotAUnit(c0.to_string()));
        };
        let n = self.truncation();
        let mut inv = vec![BigInt::zero(); n + 1];
        inv[0] = BigInt::from(unit);
        let support: Vec<usize> = (1..=n).filter(|&i| !self.coeffs[i].is_zero()).collect();
        for m in 1..=n {
            let mut acc = BigInt::zero();
            for &i in support.iter().take_while(|&&i| i <= m) {
                acc += &self.coeffs[i] * &inv[m - i];
            }
            inv[m] = if unit == 1 { -acc } else { acc };
        }
        Ok(Self { coeffs: inv })
    }

    /// Multiply by `q^shift`, dropping overflow.
    pub fn shift(&self, shift: usize) -> Self {
        let n = self.truncation();
        let mut out = Self::zero(n);
        for (e, c) in self.coeffs.iter().enumerate() {
            if e + shift <= n {
                out.coeffs[e + shift] = c.clone();
            }
        }
        out
    }

    /// Substitute `q ↦ q^step`.
    pub fn dilate(&self, step: usize) -> Self {
        let n = self.truncation();
        let mut out = Self::zero(n);
        for (e, c) in self.coeffs.iter().enumerate() {
            if e * step > n {
                break;
            }
            out.coeffs[e * step] = c.clone();
        }
        out
    }
}

impl Add for &IntSeries {
    type Output = IntSeries;

    fn add(self, rhs: &IntSeries) -> IntSeries {
        let n = self.truncation().min(rhs.truncation());
        let coeffs = (0..=n).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect();
        IntSeries { coeffs }
    }
}

impl Sub for &IntSeries {
    type Output = IntSeries;

    fn sub(self, rhs: &IntSeries) -> IntSeries {
        let n = self.truncation().min(rhs.truncation());
        let coeffs = (0..=n).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect();
        IntSeries { coeffs }
    }
}

impl Neg for &IntSeries {
    type Output = IntSeries;

    fn neg(self) -> IntSeries {
        IntSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

fn schoolbook_mul(a: &[BigInt], b: &[BigInt], n: usize) -> IntSeries {
    let coeffs = (0..=n)
        .into_par_iter()
        .map(|m| {
            let mut acc = BigInt::zero();
            for i in 0..=m {
                if !a[i].is_zero() && !b[m - i].is_zero() {
                    acc += &a[i] * &b[m - i];
                }
            }
            acc
        })
        .collect();
    IntSeries { coeffs }
}

/// Packs each non-negative series into one big integer with fixed-width
/// 64-bit-aligned slots, multiplies once, and unpacks. The slot width
/// bounds every product coefficient so no carries cross slots.
fn kronecker_mul(a: &[BigInt], b: &[BigInt], n: usize) -> IntSeries {
    let max_bits = |s: &[BigInt]| s.iter().map(BigInt::bits).max().unwrap_or(0);
    let len_bits = u64::from(usize::BITS - (n + 1).leading_zeros());
    let slot_bits = max_bits(a) + max_bits(b) + len_bits + 1;
    let slot_limbs = slot_bits.div_ceil(64) as usize;

    let pack = |s: &[BigInt]| {
        let mut limbs = vec![0u64; s.len() * slot_limbs];
        for (i, c) in s.iter().enumerate() {
            let digits = c.magnitude().to_u64_digits();
            limbs[i * slot_limbs..i * slot_limbs + digits.len()].copy_from_slice(&digits);
        }
        biguint_from_u64_limbs(&limbs)
    };

    let product = if std::ptr::eq(a, b) {
        let x = pack(a);
        &x * &x
    } else {
        pack(a) * pack(b)
    };
    let limbs = product.to_u64_digits();
    let coeffs = (0..=n)
        .map(|i| {
            let lo = (i * slot_limbs).min(limbs.len());
            let hi = ((i + 1) * slot_limbs).min(limbs.len());
            BigInt::from_biguint(Sign::Plus, biguint_from_u64_limbs(&limbs[lo..hi]))
        })
        .collect();
    IntSeries { coeffs }
}

fn biguint_from_u64_limbs(limbs: &[u64]) -> BigUint {
    let digits: Vec<u32> = limbs
        .iter()
        .flat_map(|&l| [l as u32, (l >> 32) as u32])
        .collect();
    BigUint::new(digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive(a: &IntSeries, b: &IntSeries) -> IntSeries {
        let n = a.truncation().min(b.truncation());
        schoolbook_mul(&a.coeffs()[..=n], &b.coeffs()[..=n], n)
    }

    #[test]
    fn invert_geometric() {
        let s = IntSeries::from_i64(&[1, -1], 8);
        let inv = s.invert().unwrap();
        assert!(inv.coeffs().iter().all(|c| c.is_one()));
    }

    #[test]
    fn invert_rejects_non_unit() {
        let s = IntSeries::from_i64(&[2, 1], 5);
        assert!(matches!(s.invert(), Err(Error::NotAUnit(_))));
        let s = IntSeries::from_i64(&[-1, 3], 5);
        let inv = s.invert().unwrap();
        assert_eq!(s.mul(&inv), IntSeries::one(5));
    }

    #[test]
    fn invert_euler_square_gives_two_colored_partitions() {
        let e = IntSeries::euler_product(2, 12);
        let inv = e.square().invert().unwrap();
        let expect = [1, 0, 2, 0, 5, 0, 10, 0, 20, 0, 36, 0, 65];
        assert_eq!(inv, IntSeries::from_i64(&expect, 12));
    }

    #[test]
    fn euler_product_matches_finite_product() {
        let n = 40;
        let mut prod = IntSeries::one(n);
        for i in 1..=n {
            let mut f = IntSeries::one(n);
            f = &f - &IntSeries::one(n).shift(i);
            prod = prod.mul(&f);
        }
        assert_eq!(prod, IntSeries::euler_product(1, n));
    }

    #[test]
    fn kronecker_agrees_with_schoolbook_on_large_input() {
        let n = 300;
        let p = IntSeries::euler_product(1, n).invert().unwrap();
        assert!(p.is_nonnegative());
        let fast = p.mul(&p);
        assert_eq!(fast, naive(&p, &p));
        let q = p.shift(3);
        assert_eq!(p.mul(&q), naive(&p, &q));
    }

    #[test]
    fn dilate_and_shift() {
        let s = IntSeries::from_i64(&[1, 2, 3], 6);
        assert_eq!(s.dilate(2), IntSeries::from_i64(&[1, 0, 2, 0, 3], 6));
        assert_eq!(s.shift(5), IntSeries::from_i64(&[0, 0, 0, 0, 0, 1, 2], 6));
    }

    proptest! {
        #[test]
        fn invert_is_an_involution(tail in proptest::collection::vec(-50i64..50, 0..20), neg in any::<bool>()) {
            let mut c = vec![if neg { -1 } else { 1 }];
            c.extend(tail);
            let n = 20;
            let s = IntSeries::from_i64(&c, n);
            let inv = s.invert().unwrap();
            prop_assert_eq!(s.mul(&inv), IntSeries::one(n));
            prop_assert_eq!(inv.invert().unwrap(), s);
        }

        #[test]
        fn kronecker_matches_schoolbook(a in proptest::collection::vec(0u64..u64::MAX, 70..90),
                                        b in proptest::collection::vec(0u64..1000, 70..90)) {
            let n = a.len().min(b.len()) - 1;
            let sa = IntSeries::from_coeffs(a.iter().map(|&x| BigInt::from(x) * BigInt::from(x)).collect(), n);
            let sb = IntSeries::from_coeffs(b.iter().map(|&x| BigInt::from(x)).collect(), n);
            prop_assert_eq!(sa.mul(&sb), naive(&sa, &sb));
        }
    }
}
