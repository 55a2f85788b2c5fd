//! Exact calculus of direct-sum decompositions of motives into Tate twists.
//!
//! The engine works with formal sums `sum_i A_i * p_i(L)` of opaque atoms
//! `A_i` with twist polynomials `p_i` having natural coefficients. Geometric
//! constructors (projective bundles, blow-ups, fibrations, products with
//! cellular varieties) produce such sums; Hodge and Betti realizations and
//! torsion flags are read off atom by atom.
//!
//! [`gm`] drives the full computation for a Gushel-Mukai sixfold.

pub mod atlas;
pub mod dsl;
pub mod error;
pub mod formulas;
pub mod gm;
pub mod hodge;
pub mod motive;
pub mod tate;

pub use atlas::{Atlas, AtlasEntry};
pub use error::{Error, Result};
pub use hodge::{
    betti_polynomial, check_symmetries, lefschetz_section_profile, realize_hodge, torsion_status, twist_diamond, Betti,
    CohomologyProfile, HodgeDiamond, RankExpr, Torsion,
};
pub use motive::{
    dim_of, equal, normalize, solve_tensor_factor, subtract_summand, MotiveAtom, MotiveExpr, NormalForm, Registry,
    Solution,
};
pub use tate::TatePolynomial;
