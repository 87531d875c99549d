//! SU(2) character varieties of homology 3-spheres obtained by splicing
//! torus-knot exteriors.
//!
//! The library computes, exactly where possible, the pieces of the
//! character variety of a splice `X ∪_h Y` of two knot exteriors:
//!
//! * [`su2`] — unit-quaternion arithmetic, word evaluation and stabilizer
//!   classification;
//! * [`presentation`] — finitely presented groups for knot exteriors,
//!   connected sums and splices, Fox derivatives, and integral homology
//!   via Smith normal form;
//! * [`pillowcase`] — exact geometry of the character variety of the
//!   2-torus (coordinates are rational multiples of π);
//! * [`arcs`] — the arcs and glued families making up torus-knot and
//!   composite-knot character varieties, together with an independent
//!   numeric tracer used as an oracle;
//! * [`cohomology`] — twisted cohomology dimensions with adjoint
//!   coefficients and Mayer–Vietoris bookkeeping;
//! * [`splice`] — fiber products over the pillowcase, gluing parameters,
//!   component assembly, local links of singular points, and the census;
//! * [`acceptance`] — the end-to-end verification suite run by
//!   `charvar verify`;
//! * [`svg`] — figure rendering for the CLI.

pub mod acceptance;
pub mod arcs;
pub mod cohomology;
pub mod pillowcase;
pub mod presentation;
pub mod splice;
pub mod su2;
pub mod svg;

/// Library-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller-supplied argument was rejected.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A documented precondition of an operation was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// An internal consistency check failed; indicates a modeling bug.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
