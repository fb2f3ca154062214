use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::partition::{bg_core_size, bg_rank, enumerate_partitions, two_quotient_rank};
use crate::qseries::group_ring::{divide_exact, GroupRingElem, GroupRingSeries};
use crate::qseries::IntSeries;

/// Largest q-order accepted by [`joint_table`].
pub const JOINT_TABLE_MAX_N: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatKind {
    /// `p(n)`.
    P,
    /// Two-colored partitions, the coefficients of `1/(q;q)²_∞`.
    P2,
    /// `p̄_j(n)`.
    PbarJ,
    /// `p̄_j(a,b;n)`.
    PbarJab,
}

impl StatKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StatKind::P => "p",
            StatKind::P2 => "p2",
            StatKind::PbarJ => "pbar",
            StatKind::PbarJab => "pbar-ab",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "p" => Some(StatKind::P),
            "p2" => Some(StatKind::P2),
            "pbar" => Some(StatKind::PbarJ),
            "pbar-ab" => Some(StatKind::PbarJab),
            _ => None,
        }
    }
}

impl fmt::Display for StatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StatParams {
    pub j: Option<i64>,
    pub a: Option<usize>,
    pub b: Option<usize>,
}

/// A cached coefficient array together with how it was produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatTable {
    pub kind: StatKind,
    pub params: StatParams,
    pub route: String,
    values: Vec<BigInt>,
}

impl StatTable {
    pub fn new(kind: StatKind, params: StatParams, route: impl Into<String>, values: Vec<BigInt>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("a table needs at least one value"));
        }
        if let Some((n, v)) = values.iter().enumerate().find(|(_, v)| v.is_negative()) {
            return Err(invalid(format!("negative count {v} at n = {n}")));
        }
        Ok(Self { kind, params, route: route.into(), values })
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<&BigInt> {
        self.values.get(n)
    }
}

/// `p(n)` for `n ≤ n_max` by Euler's pentagonal recurrence.
pub fn p_values(n_max: usize) -> Vec<BigInt> {
    let mut p: Vec<BigInt> = Vec::with_capacity(n_max + 1);
    p.push(BigInt::one());
    for n in 1..=n_max {
        let mut acc = BigInt::zero();
        for k in 1usize.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let g2 = g1 + k;
            if k % 2 == 1 {
                acc += &p[n - g1];
                if g2 <= n {
                    acc += &p[n - g2];
                }
            } else {
                acc -= &p[n - g1];
                if g2 <= n {
                    acc -= &p[n - g2];
                }
            }
        }
        p.push(acc);
    }
    p
}

pub fn p_table(n_max: usize) -> StatTable {
    StatTable::new(StatKind::P, StatParams::default(), "pentagonal-recurrence", p_values(n_max))
        .expect("partition counts are positive")
}

/// `p2(m) = Σ p(k) p(m−k)` as one big-integer self-convolution.
pub fn p2_values(n_max: usize) -> Vec<BigInt> {
    let p = IntSeries::from_coeffs(p_values(n_max), n_max);
    p.square().into_coeffs()
}

pub fn p2_table(n_max: usize) -> StatTable {
    StatTable::new(StatKind::P2, StatParams::default(), "p-self-convolution", p2_values(n_max))
        .expect("convolution of positive counts is positive")
}

fn check_even_j(j: i64) -> Result<()> {
    if j % 2 != 0 {
        return Err(invalid(format!("j must be even, got {j}")));
    }
    Ok(())
}

/// Reads `p̄_j(n)` off the two-colored partition counts: the BG-rank-`j`
/// partitions are the 2-core of size `j(2j−1)` plus two independent
/// quotient partitions.
fn pbar_from_p2(p2: &[BigInt], j: i64, n: usize) -> BigInt {
    let s = bg_core_size(j);
    if n < s || !(n - s).is_multiple_of(2) {
        return BigInt::zero();
    }
    p2[(n - s) / 2].clone()
}

/// `p̄_j(n)` for even `j` from `q^{j(2j−1)}/(q²;q²)²_∞`.
pub fn pbar_eta(j: i64, n: usize) -> Result<BigInt> {
    check_even_j(j)?;
    let s = bg_core_size(j);
    if n < s {
        return Ok(BigInt::zero());
    }
    let p2 = p2_values((n - s) / 2);
    Ok(pbar_from_p2(&p2, j, n))
}

/// `p̄_j(n)` for every `n ≤ n_max`. Works for any integer `j`; the
/// parity law and the core-size shift are the only `j` dependence.
pub fn pbar_values(j: i64, n_max: usize) -> Vec<BigInt> {
    let p2 = p2_values(n_max / 2);
    (0..=n_max).map(|n| pbar_from_p2(&p2, j, n)).collect()
}

pub fn pbar_table(j: i64, n_max: usize) -> Result<StatTable> {
    check_even_j(j)?;
    StatTable::new(
        StatKind::PbarJ,
        StatParams { j: Some(j), ..Default::default() },
        "eta-quotient",
        pbar_values(j, n_max),
    )
}

/// Exact expansion of `H(ζ_b^k; q) = q^{j(2j−1)} / (ζ_b^k q², ζ_b^{−k} q²; q²)_∞`
/// with `ζ_b` kept symbolic in `Z[C_b]`.
///
/// Each factor `1/(1 − ζ^{±k} u^i)` in `u = q²` is applied as the in-place
/// recurrence `f[t] += ζ^{±k} f[t−i]`, which is exact division by the factor.
pub fn expand_h_groupring(j: i64, b: usize, k: i64, n_max: usize) -> Result<GroupRingSeries> {
    if b < 2 {
        return Err(invalid(format!("b must be at least 2, got {b}")));
    }
    if k.rem_euclid(b as i64) == 0 {
        return Err(invalid(format!(
            "k = {k} is 0 mod {b}; that series is the untwisted p̄_j generating function"
        )));
    }
    let s = bg_core_size(j);
    let mut out = GroupRingSeries::zero(b, n_max);
    if s > n_max {
        return Ok(out);
    }
    let u_max = (n_max - s) / 2;
    let mut f = vec![GroupRingElem::zero(b); u_max + 1];
    f[0] = GroupRingElem::one(b);
    for i in 1..=u_max {
        for twist in [k, -k] {
            for t in i..=u_max {
                let (lo, hi) = f.split_at_mut(t);
                hi[0].add_rotated(&lo[t - i], twist);
            }
        }
    }
    for (t, c) in f.into_iter().enumerate() {
        *out.coeff_mut(s + 2 * t) = c;
    }
    Ok(out)
}

/// `p̄_j(a,b;n)` for `n ≤ n_max` by the roots-of-unity filter
/// `b·p̄_j(a,b;n) = p̄_j(n) + Σ_{k=1}^{b−1} ζ_b^{−ak} [q^n] H(ζ_b^k; q)`.
///
/// The sum is assembled in `Z[C_b]` by index rotation and then evaluated
/// at a primitive root; the result must be an integer divisible by `b`.
pub fn pbar_abn_values(j: i64, a: usize, b: usize, n_max: usize) -> Result<Vec<BigInt>> {
    check_even_j(j)?;
    if b < 2 || a >= b {
        return Err(invalid(format!("need 0 ≤ a < b and b ≥ 2, got a = {a}, b = {b}")));
    }
    let untwisted = pbar_values(j, n_max);
    let mut sums: Vec<GroupRingElem> = untwisted
        .iter()
        .map(|v| GroupRingElem::monomial(b, 0, v.clone()))
        .collect();
    for k in 1..b as i64 {
        let h = expand_h_groupring(j, b, k, n_max)?;
        for (acc, c) in sums.iter_mut().zip(h.coeffs()) {
            acc.add_rotated(c, -(a as i64) * k);
        }
    }
    sums.iter()
        .enumerate()
        .map(|(n, e)| {
            let total = e.evaluate_integer().ok_or_else(|| Error::Divisibility {
                n,
                b,
                detail: format!("orthogonality sum {:?} is not rational", e.coeffs()),
            })?;
            divide_exact(&total, b, n)
        })
        .collect()
}

/// `p̄_j(a,b;n)` for every residue `a`, indexed `[a][n]`.
///
/// Expands `H(ζ_b; q)` once; the other twists follow from `ζ ↦ ζ^k`.
pub fn pbar_abn_all_values(j: i64, b: usize, n_max: usize) -> Result<Vec<Vec<BigInt>>> {
    check_even_j(j)?;
    if b < 2 {
        return Err(invalid(format!("b must be at least 2, got {b}")));
    }
    let untwisted = pbar_values(j, n_max);
    let h1 = expand_h_groupring(j, b, 1, n_max)?;
    let twists: Vec<Vec<GroupRingElem>> = (1..b as i64)
        .map(|k| h1.coeffs().iter().map(|c| c.substitute_power(k)).collect())
        .collect();
    (0..b)
        .map(|a| {
            (0..=n_max)
                .map(|n| {
                    let mut acc = GroupRingElem::monomial(b, 0, untwisted[n].clone());
                    for (k, h) in (1..).zip(&twists) {
                        acc.add_rotated(&h[n], -(a as i64) * k);
                    }
                    let total = acc.evaluate_integer().ok_or_else(|| Error::Divisibility {
                        n,
                        b,
                        detail: format!("orthogonality sum {:?} is not rational", acc.coeffs()),
                    })?;
                    divide_exact(&total, b, n)
                })
                .collect()
        })
        .collect()
}

pub fn pbar_abn_table(j: i64, a: usize, b: usize, n_max: usize) -> Result<StatTable> {
    StatTable::new(
        StatKind::PbarJab,
        StatParams { j: Some(j), a: Some(a), b: Some(b) },
        "group-ring-orthogonality",
        pbar_abn_values(j, a, b, n_max)?,
    )
}

/// `p̄_j(m,n)`: for each `n`, the map from 2-quotient rank `m` to count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateSeries {
    j: i64,
    rows: Vec<BTreeMap<i64, BigInt>>,
}

impl BivariateSeries {
    pub fn j(&self) -> i64 {
        self.j
    }

    pub fn truncation(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, n: usize) -> &BTreeMap<i64, BigInt> {
        &self.rows[n]
    }

    pub fn get(&self, m: i64, n: usize) -> BigInt {
        self.rows[n].get(&m).cloned().unwrap_or_default()
    }

    /// `Σ_m p̄_j(m,n)`.
    pub fn row_total(&self, n: usize) -> BigInt {
        self.rows[n].values().sum()
    }

    /// `Σ_{m ≡ a (mod b)} p̄_j(m,n)`.
    pub fn residue_sum(&self, a: usize, b: usize, n: usize) -> BigInt {
        self.rows[n]
            .iter()
            .filter(|(m, _)| m.rem_euclid(b as i64) == a as i64)
            .map(|(_, v)| v)
            .sum()
    }
}

/// Expands `H(ζ; q)` with `ζ` a formal Laurent variable, for `n ≤ n_max`.
pub fn joint_table(j: i64, n_max: usize) -> Result<BivariateSeries> {
    if n_max > JOINT_TABLE_MAX_N {
        return Err(invalid(format!(
            "joint table is limited to n ≤ {JOINT_TABLE_MAX_N}, got {n_max}"
        )));
    }
    let s = bg_core_size(j);
    let mut rows = vec![BTreeMap::new(); n_max + 1];
    if s <= n_max {
        let u_max = (n_max - s) / 2;
        let width = 2 * u_max + 1;
        let offset = u_max as i64;
        // dense[t][m + offset]
        let mut dense = vec![vec![BigInt::zero(); width]; u_max + 1];
        dense[0][u_max] = BigInt::one();
        for i in 1..=u_max {
            for twist in [1i64, -1] {
                for t in i..=u_max {
                    let (lo, hi) = dense.split_at_mut(t);
                    let src = &lo[t - i];
                    for (idx, c) in src.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let m = idx as i64 + twist;
                        if (0..width as i64).contains(&m) {
                            hi[0][m as usize] += c;
                        }
                    }
                }
            }
        }
        for (t, row) in dense.into_iter().enumerate() {
            rows[s + 2 * t] = row
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(idx, c)| (idx as i64 - offset, c))
                .collect();
        }
    }
    Ok(BivariateSeries { j, rows })
}

/// Brute-force counts `#{λ ⊢ n : bg_rank(λ) = j, rank(λ) ≡ a (mod b)}`.
pub fn enumerate_pbar_abn(j: i64, a: usize, b: usize, n: usize) -> u64 {
    enumerate_partitions(n)
        .filter(|p| bg_rank(p) == j && two_quotient_rank(p).rem_euclid(b as i64) == a as i64)
        .count() as u64
}

/// Brute-force joint distribution of `(bg_rank, two_quotient_rank)` over the partitions of `n`.
pub fn enumerate_joint(n: usize) -> BTreeMap<(i64, i64), u64> {
    let mut out = BTreeMap::new();
    for p in enumerate_partitions(n) {
        *out.entry((bg_rank(&p), two_quotient_rank(&p))).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn p_values_small() {
        assert_eq!(ints(&p_values(0)), vec![1]);
        let p = p_values(10);
        assert_eq!(p[4], BigInt::from(5));
        assert_eq!(p[10], BigInt::from(42));
    }

    #[test]
    fn p2_values_small() {
        assert_eq!(ints(&p2_values(10)), vec![1, 2, 5, 10, 20, 36, 65, 110, 185, 300, 481]);
        let p = p_values(200);
        let p2 = p2_values(200);
        assert!(p2.iter().zip(&p).all(|(x, y)| x >= y));
    }

    #[test]
    fn pbar_eta_examples() {
        assert_eq!(pbar_eta(0, 4).unwrap(), BigInt::from(5));
        assert_eq!(pbar_eta(0, 12).unwrap(), BigInt::from(65));
        assert_eq!(pbar_eta(2, 8).unwrap(), BigInt::from(2));
        assert_eq!(pbar_eta(2, 6).unwrap(), BigInt::one());
        assert_eq!(pbar_eta(0, 7).unwrap(), BigInt::zero());
        assert_eq!(pbar_eta(2, 4).unwrap(), BigInt::zero());
        assert!(pbar_eta(1, 4).is_err());
    }

    #[test]
    fn groupring_expansion_examples() {
        let h = expand_h_groupring(0, 5, 1, 6).unwrap();
        assert_eq!(h.coeff(0), &GroupRingElem::one(5));
        let h = expand_h_groupring(0, 2, 1, 4).unwrap();
        assert_eq!(h.coeff(2), &GroupRingElem::monomial(2, 1, BigInt::from(2)));
        assert!(h.coeff(1).is_zero());
        assert!(expand_h_groupring(0, 3, 3, 4).is_err());
        assert!(expand_h_groupring(0, 1, 1, 4).is_err());
    }

    #[test]
    fn all_residues_match_single_residue() {
        for b in [2usize, 3, 4, 5, 6] {
            let all = pbar_abn_all_values(0, b, 40).unwrap();
            for (a, row) in all.iter().enumerate() {
                assert_eq!(row, &pbar_abn_values(0, a, b, 40).unwrap());
            }
        }
    }

    #[test]
    fn groupring_collapse_matches_eta_route() {
        for b in [2, 3, 5] {
            for k in 1..b as i64 {
                for j in [0i64, 2, -2] {
                    let h = expand_h_groupring(j, b, k, 30).unwrap();
                    assert_eq!(h.collapse().coeffs(), pbar_values(j, 30).as_slice());
                }
            }
        }
    }

    /// The design route: multiply the truncated factors, then invert.
    #[test]
    fn groupring_expansion_matches_product_then_invert() {
        let (j, b, k, n) = (2i64, 3usize, 2i64, 24usize);
        let mut prod = GroupRingSeries::one(b, n);
        for i in (2..=n).step_by(2) {
            for twist in [k, -k] {
                let mut f = GroupRingSeries::one(b, n);
                *f.coeff_mut(i) = GroupRingElem::monomial(b, twist, BigInt::from(-1));
                prod = prod.mul(&f);
            }
        }
        let inv = prod.invert().unwrap();
        let s = bg_core_size(j);
        let expect = GroupRingSeries::from_coeffs(
            b,
            (0..=n)
                .map(|e| if e >= s { inv.coeff(e - s).clone() } else { GroupRingElem::zero(b) })
                .collect(),
        );
        assert_eq!(expand_h_groupring(j, b, k, n).unwrap(), expect);
    }

    #[test]
    fn pbar_abn_examples() {
        let t0 = pbar_abn_values(0, 0, 2, 4).unwrap();
        let t1 = pbar_abn_values(0, 1, 2, 4).unwrap();
        assert_eq!(t0[2], BigInt::zero());
        assert_eq!(t1[2], BigInt::from(2));
        for a in 0..5 {
            assert_eq!(pbar_abn_values(0, a, 5, 4).unwrap()[4], BigInt::one());
        }
        assert!(pbar_abn_values(0, 5, 5, 4).is_err());
        assert!(pbar_abn_values(1, 0, 5, 4).is_err());
    }

    #[test]
    fn pbar_abn_sums_to_pbar() {
        for b in [2usize, 3, 5] {
            for j in [0i64, 2] {
                let total = (0..b).fold(vec![BigInt::zero(); 31], |acc, a| {
                    let v = pbar_abn_values(j, a, b, 30).unwrap();
                    acc.iter().zip(&v).map(|(x, y)| x + y).collect()
                });
                assert_eq!(total, pbar_values(j, 30));
            }
        }
    }

    #[test]
    fn joint_table_rows() {
        let t = joint_table(0, 30).unwrap();
        let row4: Vec<(i64, i64)> = t.row(4).iter().map(|(m, c)| (*m, i64::try_from(c).unwrap())).collect();
        assert_eq!(row4, vec![(-2, 1), (-1, 1), (0, 1), (1, 1), (2, 1)]);
        let pbar = pbar_values(0, 30);
        for n in 0..=30 {
            assert_eq!(t.row_total(n), pbar[n]);
            for (m, c) in t.row(n) {
                assert_eq!(&t.get(-m, n), c);
            }
        }
        assert!(joint_table(0, 61).is_err());
    }

    #[test]
    fn joint_table_matches_enumeration() {
        for n in 0..=16 {
            let brute = enumerate_joint(n);
            for j in -3i64..=3 {
                let t = joint_table(j, n).unwrap();
                for (m, c) in t.row(n) {
                    assert_eq!(brute.get(&(j, *m)).copied().unwrap_or(0), u64::try_from(c).unwrap());
                }
                let brute_total: u64 = brute.iter().filter(|((jj, _), _)| *jj == j).map(|(_, c)| c).sum();
                assert_eq!(u64::try_from(t.row_total(n)).unwrap(), brute_total);
            }
        }
    }

    #[test]
    fn stat_table_rejects_negative_values() {
        assert!(StatTable::new(StatKind::P, StatParams::default(), "x", vec![BigInt::from(-1)]).is_err());
        assert!(StatTable::new(StatKind::P, StatParams::default(), "x", vec![]).is_err());
        assert_eq!(p_table(10).n_max(), 10);
    }
}
