//! Integer partitions and the combinatorics built on Ferrers diagrams:
//! conjugation, hook lengths, t-cores, the Littlewood core/quotient
//! bijection, and the BG-rank and 2-quotient-rank statistics.
//!
//! The core/quotient map works on beta-sets. A partition with `s` parts
//! (padded with zeros so that `s` is a multiple of `t`) is encoded as the
//! bead positions `{λ_i + s − i}`; bead `x` sits on runner `x mod t` at
//! height `x div t`. Sliding every bead down its runner gives the core,
//! and the gaps left on runner `r` give the quotient component `r`.

use std::fmt;

use crate::error::{Error, Result};

/// A weakly decreasing list of positive parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
    size: usize,
}

impl Partition {
    /// Builds a partition, rejecting zero parts and increasing steps.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} contains a zero part"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} is not weakly decreasing"
            )));
        }
        Ok(Self::from_parts_unchecked(parts))
    }

    /// Sorts the parts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::from_parts_unchecked(parts)
    }

    fn from_parts_unchecked(parts: Vec<usize>) -> Self {
        let size = parts.iter().sum();
        Self { parts, size }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The staircase `(k, k−1, …, 1)`.
    pub fn staircase(k: usize) -> Self {
        Self::from_parts_unchecked((1..=k).rev().collect())
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `|λ|`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// `ν(λ)`, the number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        conjugate(self)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Column lengths of the Ferrers diagram.
pub fn conjugate(p: &Partition) -> Partition {
    let width = p.parts.first().copied().unwrap_or(0);
    let mut cols = vec![0usize; width];
    for &row in &p.parts {
        for c in cols.iter_mut().take(row) {
            *c += 1;
        }
    }
    Partition::from_parts_unchecked(cols)
}

/// Hook length of every node, row by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HookTable {
    rows: Vec<Vec<usize>>,
}

impl HookTable {
    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Hook at row `k`, column `j` (both zero-based).
    pub fn get(&self, k: usize, j: usize) -> Option<usize> {
        self.rows.get(k).and_then(|r| r.get(j)).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().flatten().copied()
    }

    /// Hook lengths sorted ascending.
    pub fn multiset(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.iter().collect();
        all.sort_unstable();
        all
    }
}

/// Arm plus leg plus one: `h(k,j) = (λ_k − j) + (λ'_j − k) + 1` with
/// one-based `k, j`.
pub fn hook_lengths(p: &Partition) -> HookTable {
    let conj = conjugate(p);
    let rows = p
        .parts
        .iter()
        .enumerate()
        .map(|(k, &row)| {
            (0..row)
                .map(|j| (row - j - 1) + (conj.parts[j] - k - 1) + 1)
                .collect()
        })
        .collect();
    HookTable { rows }
}

pub fn is_t_core(p: &Partition, t: usize) -> Result<bool> {
    check_t(t)?;
    Ok(hook_lengths(p).iter().all(|h| h % t != 0))
}

fn check_t(t: usize) -> Result<()> {
    if t < 2 {
        return Err(Error::InvalidArgument(format!("t must be at least 2, got {t}")));
    }
    Ok(())
}

/// The image of a partition under the Littlewood map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LittlewoodDecomposition {
    pub core: Partition,
    pub quotients: Vec<Partition>,
}

impl LittlewoodDecomposition {
    pub fn t(&self) -> usize {
        self.quotients.len()
    }

    /// `|core| + t·Σ|quotient|`, which equals the size of the original partition.
    pub fn weight(&self) -> usize {
        self.core.size() + self.t() * self.quotients.iter().map(Partition::size).sum::<usize>()
    }
}

/// The `t = 2` case with named components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoQuotientDecomposition {
    pub core: Partition,
    pub q0: Partition,
    pub q1: Partition,
}

/// Bead positions for `p` padded to `s` parts.
fn beta_set(p: &Partition, s: usize) -> Vec<usize> {
    (0..s)
        .map(|i| p.parts.get(i).copied().unwrap_or(0) + s - 1 - i)
        .collect()
}

/// Smallest multiple of `t` that is at least `len`.
fn padded_len(len: usize, t: usize) -> usize {
    len.div_ceil(t) * t
}

/// Per-runner bead heights, each list sorted descending.
fn runners(beta: &[usize], t: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); t];
    for &x in beta {
        out[x % t].push(x / t);
    }
    for r in &mut out {
        r.sort_unstable_by(|a, b| b.cmp(a));
    }
    out
}

fn from_beta_set(mut beta: Vec<usize>) -> Partition {
    beta.sort_unstable_by(|a, b| b.cmp(a));
    let s = beta.len();
    let parts = beta
        .iter()
        .enumerate()
        .map(|(i, &x)| x - (s - 1 - i))
        .filter(|&p| p > 0)
        .collect();
    Partition::from_parts_unchecked(parts)
}

/// Reads the partition encoded by descending bead heights on one runner.
fn runner_partition(heights: &[usize]) -> Partition {
    let c = heights.len();
    let parts = heights
        .iter()
        .enumerate()
        .map(|(l, &y)| y - (c - 1 - l))
        .filter(|&p| p > 0)
        .collect();
    Partition::from_parts_unchecked(parts)
}

pub fn littlewood_decompose(p: &Partition, t: usize) -> Result<LittlewoodDecomposition> {
    check_t(t)?;
    let s = padded_len(p.len(), t);
    let beta = beta_set(p, s);
    let runs = runners(&beta, t);

    let quotients = runs.iter().map(|h| runner_partition(h)).collect();
    let core_beta = runs
        .iter()
        .enumerate()
        .flat_map(|(r, h)| (0..h.len()).map(move |y| t * y + r))
        .collect();
    Ok(LittlewoodDecomposition {
        core: from_beta_set(core_beta),
        quotients,
    })
}

pub fn littlewood_compose(core: &Partition, quotients: &[Partition], t: usize) -> Result<Partition> {
    check_t(t)?;
    if quotients.len() != t {
        return Err(Error::InvalidArgument(format!(
            "expected {t} quotient components, got {}",
            quotients.len()
        )));
    }
    if !is_t_core(core, t)? {
        return Err(Error::NotACore(core.to_string(), t));
    }

    // Each extra block of t beads adds one bead to every runner, so grow s
    // until every runner has room for its quotient.
    let mut s = padded_len(core.len(), t);
    let counts = loop {
        let counts: Vec<usize> = runners(&beta_set(core, s), t).iter().map(Vec::len).collect();
        if counts.iter().zip(quotients).all(|(&c, q)| c >= q.len()) {
            break counts;
        }
        s += t;
    };

    let mut beta = Vec::with_capacity(s);
    for (r, (&c, q)) in counts.iter().zip(quotients).enumerate() {
        for l in 0..c {
            let y = q.parts.get(l).copied().unwrap_or(0) + (c - 1 - l);
            beta.push(t * y + r);
        }
    }
    Ok(from_beta_set(beta))
}

pub fn two_quotient(p: &Partition) -> TwoQuotientDecomposition {
    let mut d = littlewood_decompose(p, 2).expect("t = 2 is valid");
    let q1 = d.quotients.pop().expect("two components");
    let q0 = d.quotients.pop().expect("two components");
    TwoQuotientDecomposition { core: d.core, q0, q1 }
}

/// `Σ (−1)^{i+1} par(λ_i)` over one-based `i`.
pub fn bg_rank(p: &Partition) -> i64 {
    p.parts
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let par = (x % 2) as i64;
            if i % 2 == 0 {
                par
            } else {
                -par
            }
        })
        .sum()
}

/// `ν(q0) − ν(q1)` for the 2-quotient.
pub fn two_quotient_rank(p: &Partition) -> i64 {
    let d = two_quotient(p);
    d.q0.len() as i64 - d.q1.len() as i64
}

/// Size of the 2-core of any partition with BG-rank `j`.
pub fn bg_core_size(j: i64) -> usize {
    (j * (2 * j - 1)) as usize
}

/// All partitions of `n` in descending lexicographic order.
pub fn enumerate_partitions(n: usize) -> PartitionIter {
    PartitionIter {
        current: Some(if n == 0 { Vec::new() } else { vec![n] }),
    }
}

pub struct PartitionIter {
    current: Option<Vec<usize>>,
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.current.take()?;
        let mut next = cur.clone();
        // Find the last part above 1, decrement it, and refill the tail
        // greedily with parts no larger than the new value.
        if let Some(pos) = next.iter().rposition(|&x| x > 1) {
            let ones = next.len() - pos - 1;
            next.truncate(pos + 1);
            next[pos] -= 1;
            let cap = next[pos];
            let mut rest = ones + 1;
            while rest > 0 {
                let part = rest.min(cap);
                next.push(part);
                rest -= part;
            }
            self.current = Some(next);
        }
        Some(Partition::from_parts_unchecked(cur))
    }
}
