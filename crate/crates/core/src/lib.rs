//! Exact routes to the degrees of the classical groups SO(n), O(n) and Sp(r),
//! and to the critical-point count of low-rank semidefinite programming.
//!
//! Every quantity here is computed in exact integer or rational arithmetic,
//! and each degree is reachable by more than one independent route:
//!
//! * [`group`] evaluates the closed binomial-determinant formulas,
//! * [`kazarnovskij`] integrates the root-system integrand over the
//!   cross-polytope of weights, either term by term or through the collapsed
//!   factorial determinant,
//! * [`lattice`] counts non-intersecting lattice-path systems, both by brute
//!   force and by the Gessel–Viennot determinant.
//!
//! [`sdp`] builds on the group degrees to count critical points of the
//! Burer–Monteiro factorization of a semidefinite program.
//!
//! The crate is `no_std` and needs only `alloc`.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arith;
mod error;
pub mod group;
pub mod kazarnovskij;
pub mod lattice;
pub mod sdp;

pub use arith::{BigInt, BigRational, IntMatrix};
pub use error::Error;
pub use group::{deg_o, deg_so, deg_sp, GroupFamily, GroupId};
