//! Fractional calculus toolkit: Riemann-Liouville integrals and Caputo
//! derivatives on uniform meshes, interior witnesses for the fractional mean
//! value theorems, a sampled Nagumo-condition checker and a fractional
//! Adams-Bashforth-Moulton solver for Caputo initial value problems.

pub mod cli;
pub mod error;
pub mod expr;
pub mod ivp;
pub mod mvt;
pub mod nagumo;
pub mod operators;
pub mod special;

pub use error::{Error, ErrorClass, ParseError, Result};
