//! Finite-site Galois toolkit.
//!
//! Finite categories with A-topologies generated by semi-localizing
//! collections, Galois coverings, explicit sheafification, grids, the Galois
//! monoid of a grid and the comparison between sheaves and smooth monoid sets.

pub mod cat_core;
pub mod coverage_topology;
pub mod error;
pub mod galois_coverings;
pub mod grid_monoid;
pub mod report;
pub mod sheaf_engine;
pub mod site_io;
pub mod site_validation;

pub use error::{Error, Result};
