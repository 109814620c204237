//! Exact classification of linear x-coordinate relations on triples of
//! elliptic curve points.
//!
//! Given a curve `E: y² = x³ + a2x² + a4x + a6` and nonzero coefficients
//! `(c1, c2, c3)`, the surface cut out of E³ by `c1·x1 + c2·x2 + c3·x3 = 0`
//! contains finitely many shapes of translated elliptic curves. This crate
//! classifies them exactly, verifies each one in the function field of E,
//! evaluates the companion Weierstrass-℘ numerics, and searches finite-rank
//! subgroups for solution triples, splitting them into trivial (on a
//! family) and sporadic.

pub mod analytic;
pub mod cm;
pub mod curve;
pub mod error;
pub mod exact;
pub mod family;
pub mod funcfield;
pub mod oracle;
pub mod poly;
pub mod search;
pub mod subgroup;

pub use cm::{
    detect_ea_form, endo_apply, solve_norm, units_of, units_with_policy, CmPolicy, EndoDescriptor,
    UnitGroup,
};
pub use curve::{CurvePoint, DepressedForm, WeierstrassCurve};
pub use error::{Error, Result};
pub use exact::{quad_arith, ArithOp, MultiQuad, QuadNum};
pub use family::{
    classify, classify_with_policy, member, subsum_zero, verify_caseb_with_x,
    verify_family_symbolic, FamilyDescriptor, FamilyList, RelationCoeffs, UnrealizedFamily,
};
pub use funcfield::{identity_check, x_function, CurveFunction, XTransform};
pub use analytic::{
    family_uniformization, identity_residual, periods, pole_inclusion_check, wp_addition_x,
    LatticeData,
};
pub use oracle::{derive_caseb_constant, lemma2_scan, Lemma2Report};
pub use search::{
    fiber_count, find_solutions, find_solutions_with, Classification, SearchOptions, SearchReport,
    SearchSummary, SolutionRecord,
};
pub use subgroup::{enumerate, enumerate_with, EnumerateOptions, GroupElement, SubgroupSpec};
