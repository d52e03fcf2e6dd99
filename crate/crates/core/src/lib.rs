//! Numerical laboratory for the planar Pauli operator `H = (σ·(−i∇ − A))² + V`
//! with growing negative potentials.
//!
//! The compute modules are generic over the scalar type ([`Real`], `f32` or
//! `f64`); the aliases at the crate root fix `f64`, which every tolerance in
//! the test suites assumes.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod error;
pub mod fields;
pub mod geom;
pub mod numerics;
pub mod radial;
pub mod scalar;
pub mod weyl;

pub use error::{Error, Result};
pub use geom::Vec2;
pub use scalar::Real;

pub type Point = geom::Vec2<f64>;
pub type Field = fields::PowerLawField<f64>;
pub type Potential = fields::PowerLawPotential<f64>;
pub type Rule = numerics::QuadratureRule<f64>;
pub type Tridiagonal = numerics::TridiagonalSym<f64>;
