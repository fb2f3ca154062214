//! Exact truncated q-series for the BG-rank statistics.
//!
//! Three routes produce the same counts and are cross-checked in tests:
//! brute-force enumeration, the eta-quotient / roots-of-unity filter over
//! `Z[C_b]`, and the bivariate expansion of `H(ζ; q)` sieved by residue.

pub mod group_ring;
mod series;
mod tables;

pub use group_ring::{cyclotomic_polynomial, GroupRingElem, GroupRingSeries};
pub use series::IntSeries;
pub use tables::{
    enumerate_joint, enumerate_pbar_abn, expand_h_groupring, joint_table, p2_table, p2_values,
    p_table, p_values, pbar_abn_all_values, pbar_abn_table, pbar_abn_values, pbar_eta, pbar_table, pbar_values,
    BivariateSeries, StatKind, StatParams, StatTable, JOINT_TABLE_MAX_N,
};
