//! Exact intersection numbers on the compactified space of morphisms from a
//! smooth genus-`g` curve to a smooth projective toric variety.
//!
//! The pipeline runs fan validation ([`fan`]), degree bookkeeping
//! ([`moduli`]), push-forward to a power of the Jacobian by torus
//! localization ([`localization`]), and finally pull-back along the
//! multiplication map of Jacobians and integration ([`jacobian`]).

pub mod document;
pub mod error;
pub mod fan;
pub mod jacobian;
pub mod linalg;
pub mod localization;
pub mod moduli;
pub mod rational;
pub mod selftest;
pub mod theta;

pub use error::{Error, Result};
