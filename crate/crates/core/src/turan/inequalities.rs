use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TuranOrder {
    /// `α(m)² ≥ α(m−1)α(m+1)`.
    Two,
    /// `4(α₁² − α₀α₂)(α₂² − α₁α₃) ≥ (α₁α₂ − α₀α₃)²` with `α_i = α(m+i)`.
    Three,
    /// `α(m₁)α(m₂) > α(m₁+m₂)`.
    Convexity,
}

impl TuranOrder {
    pub fn as_str(self) -> &'static str {
        match self {
            TuranOrder::Two => "2",
            TuranOrder::Three => "3",
            TuranOrder::Convexity => "convexity",
        }
    }
}

impl fmt::Display for TuranOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TuranOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2" => Ok(TuranOrder::Two),
            "3" => Ok(TuranOrder::Three),
            "convexity" => Ok(TuranOrder::Convexity),
            _ => Err(invalid(format!("unknown order {s:?}; expected 2, 3 or convexity"))),
        }
    }
}

/// One checked index: `m`, or the pair `(m, m2)` for convexity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TuranRow {
    pub m: usize,
    pub m2: Option<usize>,
    pub holds: bool,
    pub equality: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TuranReport {
    pub order: TuranOrder,
    pub lo: usize,
    pub hi: usize,
    pub rows: Vec<TuranRow>,
}

impl TuranReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &TuranRow> {
        self.rows.iter().filter(|r| !r.holds)
    }

    pub fn first_failure(&self) -> Option<&TuranRow> {
        self.failures().next()
    }

    pub fn equalities(&self) -> impl Iterator<Item = &TuranRow> {
        self.rows.iter().filter(|r| r.equality)
    }

    pub fn row(&self, m: usize, m2: Option<usize>) -> Option<&TuranRow> {
        self.rows.iter().find(|r| r.m == m && r.m2 == m2)
    }
}

fn need(seq: &[BigInt], last: usize) -> Result<()> {
    if last >= seq.len() {
        return Err(Error::SequenceTooShort { needed: last, len: seq.len() });
    }
    Ok(())
}

fn row(m: usize, m2: Option<usize>, lhs: BigInt, rhs: BigInt, strict: bool) -> TuranRow {
    let cmp = lhs.cmp(&rhs);
    let holds = if strict { cmp == Ordering::Greater } else { cmp != Ordering::Less };
    TuranRow { m, m2, holds, equality: cmp == Ordering::Equal }
}

/// Exact scan of the chosen inequality for `m ∈ [lo, hi]`. Convexity checks
/// every pair `lo ≤ m₁ ≤ m₂ ≤ hi`.
pub fn turan_report(seq: &[BigInt], order: TuranOrder, lo: usize, hi: usize) -> Result<TuranReport> {
    if lo > hi {
        return Err(invalid(format!("empty range {lo}..={hi}")));
    }
    let rows: Vec<TuranRow> = match order {
        TuranOrder::Two => {
            if lo == 0 {
                return Err(invalid("order 2 needs m ≥ 1"));
            }
            need(seq, hi + 1)?;
            (lo..=hi)
                .into_par_iter()
                .map(|m| row(m, None, &seq[m] * &seq[m], &seq[m - 1] * &seq[m + 1], false))
                .collect()
        }
        TuranOrder::Three => {
            need(seq, hi + 3)?;
            (lo..=hi)
                .into_par_iter()
                .map(|m| {
                    let (a0, a1, a2, a3) = (&seq[m], &seq[m + 1], &seq[m + 2], &seq[m + 3]);
                    let lhs = 4 * (a1 * a1 - a0 * a2) * (a2 * a2 - a1 * a3);
                    let cross = a1 * a2 - a0 * a3;
                    row(m, None, lhs, &cross * &cross, false)
                })
                .collect()
        }
        TuranOrder::Convexity => {
            need(seq, 2 * hi)?;
            (lo..=hi)
                .into_par_iter()
                .flat_map_iter(|m1| {
                    (m1..=hi).map(move |m2| row(m1, Some(m2), &seq[m1] * &seq[m2], seq[m1 + m2].clone(), true))
                })
                .collect()
        }
    };
    Ok(TuranReport { order, lo, hi, rows })
}
