//! Cellular decomposition of Bott-Samelson varieties and the cell-by-cell
//! structure of the fibres of the Bott-Samelson resolution over T-fixed
//! points, with a matrix realization in type A used as an independent oracle.

pub mod cartan;
pub mod chevalley;
pub mod cli;
pub mod error;
pub mod fibre;
pub mod gallery;

pub use error::{Error, Result};
