//! Floating-point evaluation of the circle-method objects: Lerch and
//! dilogarithm values on the unit circle, the leading behaviour of
//! `F₁(ζ; e^{−z})`, the Wright coefficient expansion, the printed main
//! terms, and numeric major/minor arc comparisons.

pub mod arcs;
pub mod lerch;
pub mod wright;

pub use arcs::{
    arc_dominance_check, arc_dominance_check_for, f1_major_arc, f1_product, h_residue_class,
    h_twisted, ArcDominanceReport, ArcSample, ArgInequalityRow,
};
pub use lerch::{dilog_identity_residual, dilog_unit, lerch_phi_unit, root_of_unity};
pub use wright::{
    main_term, printed_bg_constant, wright_asymptotic, wright_bg_constant, wright_coefficient,
    MainTermResult, MainTermSource, WrightParams,
};
