//! Jet calculus in local coordinates.
//!
//! The crate models, with exact rational arithmetic by default:
//!
//! - truncated Taylor polynomials and holonomic jets of maps between
//!   coordinate models, with composition, inversion and prolongation
//!   ([`tjet`]);
//! - jets modulo multifoliations with multiorders, their projections, and
//!   the associated (R,S,Q)-jet data of fibered morphisms ([`folijet`]);
//! - iterated tangent fibers, nonholonomic jets acting through the mu map,
//!   and quasijets as partition-indexed block-multilinear maps
//!   ([`itertangent`]);
//! - exact subspace arithmetic with cap/cup transversality over all index
//!   subsets, subfoliation order, and the (P,p) pattern group
//!   ([`transversal`]);
//! - a minimal Weil-algebra layer for dimension and homomorphism
//!   cross-checks ([`weil`]).
//!
//! Core types are generic over the coefficient [`scalar::Scalar`];
//! concrete aliases for the two supported domains live at the crate root.

pub mod error;
pub mod expr;
pub mod folijet;
pub mod itertangent;
pub mod json;
pub mod multiindex;
pub mod sample;
pub mod scalar;
pub mod tjet;
pub mod transversal;
pub mod weil;

pub use error::{ErrorClass, JetError, Result};
pub use scalar::{Rat, Scalar};

/// Exact-rational truncated polynomial.
pub type RatPoly = tjet::TruncatedPoly<Rat>;
/// Exact-rational jet.
pub type RatJet = tjet::JetMap<Rat>;
/// Float-domain truncated polynomial.
pub type FloatPoly = tjet::TruncatedPoly<f64>;
/// Float-domain jet.
pub type FloatJet = tjet::JetMap<f64>;
/* TEMP
/// Exact-rational jet modulo a multifoliation.
pub type RatFoliJet = folijet::FoliJet<Rat>;
/// Exact-rational iterated tangent vector.
pub type RatTangent = itertangent::IterTangentVector<Rat>;
/// Exact-rational nonholonomic jet.
pub type RatNonholJet = itertangent::NonholJet<Rat>;
/// Exact-rational quasijet.
pub type RatQuasiJet = itertangent::QuasiJet<Rat>;
TEMP */
