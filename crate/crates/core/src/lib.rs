//! State-diagram generating polynomials of knot shadows.
//!
//! A knot shadow is a knot projection with the over/under information erased:
//! a 4-valent diagram whose crossings can each be split in one of two ways.
//! Splitting every crossing leaves a collection of disjoint circles, and the
//! generating polynomial of a shadow `K` is `K(x) = sum over states of
//! x^(number of circles)`.
//!
//! The crate computes these polynomials two independent ways and proves they
//! agree: by exhaustive resolution of explicit diagrams ([`diagram`],
//! [`families`]) and by closed forms, recurrences, composition laws and
//! generating functions ([`formulas`]). Coefficient triangles and reference
//! fixtures live in [`tables`]; a small expression language for combining
//! knots is in [`expr`].

pub mod algebra;
pub mod diagram;
pub mod expr;
pub mod families;
pub mod formulas;
pub mod tables;

pub use algebra::{AlgebraError, Coefficient, Polynomial, Series};
pub use diagram::{
    ArcRef, DiagramError, Shadow, StateAssignment, ValidationReport, DEFAULT_CROSSING_GUARD,
    MAX_CROSSING_GUARD,
};
pub use families::{build, crossing_count, Family, FamilyError, FamilySpec};
