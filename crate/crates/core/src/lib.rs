//! Nielsen complexity of purified states of a one-dimensional discrete-time
//! quantum walk, with the su(4) Majorana algebra, k-local penalty geodesics,
//! a continuum Dirac limit and CNOT circuit synthesis.

pub mod algebra;
pub mod circuit;
pub mod cli;
pub mod complexity;
pub mod continuum;
pub mod error;
pub mod io;
pub mod numerics;
pub mod purification;
pub mod synthesis;
pub mod walk;

pub use error::{Error, Result};
