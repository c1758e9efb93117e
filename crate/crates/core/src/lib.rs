//! Minimum flip plans between lattice triangulations of the triangular lattice.
//!
//! Lattice and Farey primitives are generic over the integer coordinate
//! type ([`lattice::Coord`]); plans, triangulations and everything built on
//! them use `i64` through the aliases below.

pub mod error;
pub mod farey;
pub mod io;
pub mod lattice;
pub mod mintri;
pub mod oracle;
pub mod plan;
pub mod planner;
pub mod render;
pub mod triangulation;

pub use error::{Error, ErrorClass, Result};

pub type Vector = lattice::LatticeVector<i64>;
pub type Point = lattice::LatticePoint<i64>;
pub type Edge = lattice::EdgeClass<i64>;
pub type Instance = lattice::EdgeInstance<i64>;
pub type Seg = lattice::Segment<i64>;
pub type Frac = farey::Fraction<i64>;
