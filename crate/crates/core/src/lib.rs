//! Exact computation of two-variable skein modules of framed oriented links
//! in oriented 3-manifolds.
//!
//! The module over `Z[q1^±1, q2^±1]` splits into one cyclic summand per
//! multiset `α` of free homotopy classes. Each summand is the group ring of
//! `Z²` modulo the doubled exponent lattice `2Γ'(α)`, where `Γ'(α)` is spanned
//! by intersection numbers of swept tori with the components of `α`.
//!
//! * [`laurent`]: exact Laurent polynomials in one and two variables.
//! * [`lattice`]: subgroups of `Z²` in the canonical `((e1,e2),(e3,0))` form.
//! * [`manifold`]: homological models of 3-manifolds (pairing, tori, spheres).
//! * [`skein`]: indices, summands, move traces and skein elements.

pub mod lattice;
pub mod laurent;
pub mod manifold;
pub mod skein;

mod error;

pub use error::{Error, Result};
pub use lattice::{ExponentLattice, IndexTriple};
pub use laurent::{LaurentPoly1, LaurentPoly2, SpecializationMap};
pub use manifold::{ClassLabel, HomologyClass1, HomologyClass2, ManifoldModel};
pub use skein::{
    Coefficient, Freeness, LinkClass, ModuleTag, Move, MoveTrace, SkeinElement, Summand, WrithePair,
};
