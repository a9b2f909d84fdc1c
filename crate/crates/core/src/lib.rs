//! Exact computations in the bounded homotopy category `K^b(proj-A)` of a
//! path algebra `A` of a finite acyclic quiver.
//!
//! The crate covers the full pipeline for gluing silting complexes along an
//! idempotent recollement: exact linear algebra, path algebras, complexes of
//! projectives with cones and minimal models, Hom spaces modulo homotopy,
//! approximations (envelopes into `add(T)[s]` and `susp(T)`), the functors
//! `j_!`, `i_*`, `i^*`, and the gluing driver with its certificates.
//!
//! Everything here is `no_std` (with `alloc`); file formats and the command
//! line live in the companion `silting-cli` crate.
#![no_std]

extern crate alloc;

pub mod approximation;
pub mod complex;
mod error;
pub mod glue;
pub mod hom;
pub mod linalg;
pub mod quiver;
pub mod random;
pub mod recollement;

pub use error::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;
