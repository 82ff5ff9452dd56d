//! Strain-limiting special Cosserat rods.
//!
//! Exact constitutive maps between contact loads and geometrically exact
//! strains, the stored and complementary energies and the Hessian, the
//! Euler-angle description of the directors, and explicit equilibrium
//! families (straight and sheared tensile branches, pure twist, helices,
//! pure bending) together with a balance-law checker.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod constitutive;
pub mod equilibrium;
pub mod error;
pub mod kinematics;
pub mod material;
pub mod quadrature;

pub use constitutive::{Loads, Strains};
pub use error::{Error, Result};
pub use material::{Material, MaterialParams};
