//! Association schemes on attenuated spaces: construction from first
//! principles, closed-form eigenvalue polynomials, and verification of their
//! structure against brute-force oracles.

pub mod error;
pub mod exactnum;
pub mod unipoly;
pub mod attenuated;
pub mod spectra;
pub mod bispectral;
pub mod structure;
pub mod subconstituent;
pub mod johnson;

mod par;

pub use error::{Error, Result};
