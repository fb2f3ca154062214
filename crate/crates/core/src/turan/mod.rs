//! Jensen polynomials and the inequalities around them.
//!
//! Hyperbolicity is decided exactly with Sturm chains over the rationals.
//! Hermite polynomials use `Σ H_d(X) t^d/d! = exp(Xt − t²)`, so
//! `H₂ = X² − 2`. Renormalized Jensen coefficients are floating point.

mod inequalities;
mod jensen;
pub mod poly;

pub use inequalities::{turan_report, TuranOrder, TuranReport, TuranRow};
pub use jensen::{
    hermite, hermite_distance, hyperbolicity_scan, is_hyperbolic, jensen_poly, renorm_sequences,
    renorm_sequences_even, renorm_sequences_with_power, renorm_sequences_with_power_even,
    renormalized_jensen, HyperbolicityScan, JensenPoly, RenormSeq,
};
pub use poly::{real_root_count, real_root_count_full, square_free_decomposition, Poly, RootCount, SturmChain};
