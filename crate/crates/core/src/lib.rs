//! Cluster pictures of hyperelliptic curves over local fields with tame
//! inertia: polynomial-type detection, explicit witness polynomials, the
//! inertia representation on H^1 and the resulting local root numbers.
#![no_std]

extern crate alloc;

pub mod cluster;
pub mod elliptic;
mod error;
mod fp;
pub mod inertia;
pub mod numbers;
pub mod repn;
pub mod rootnum;
pub mod tables;
pub mod witness;

pub use cluster::{ClusterId, ClusterPicture, Topology};
pub use error::{Error, Result};
pub use inertia::{Permutation, TameAction};
pub use numbers::{ExtendedValuation, Rational};
pub use repn::{InertiaRep, RhoSum};
