//! Finite-shift classification for parabolic semigroups of holomorphic
//! self-maps of the unit disc.
//!
//! A parabolic semigroup of zero hyperbolic step is described by its Koenigs
//! domain `Ω`, a starlike-at-infinity domain invariant under `z ↦ z + it`.
//! The shift `lim δ⁺(t) − δ⁻(t)` between the two sides of the orbit is finite
//! or infinite according to geometric series and integrals computed here.
//!
//! - [`hypgeom`]: hyperbolic distances, Cayley maps, horocycles, Stolz angles.
//! - [`domains`]: Koenigs domains, `Ω_*`, inner-tangent cones, angular width.
//! - [`criteria`]: the series and integral tests and the combined verdict.
//! - [`models`]: closed-form model semigroups with speeds and orbits.
//! - [`cli`]: the `koenigs-shift` command-line front end.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod criteria;
pub mod domains;
pub mod hypgeom;
pub mod models;
pub mod numerics;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/hyperbolic-geometry.md")]
    mod hyperbolic_geometry {}
    #[doc = include_str!("../../../book/src/koenigs-domains.md")]
    mod koenigs_domains {}
    #[doc = include_str!("../../../book/src/criteria.md")]
    mod criteria {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
