//! Kicking-order rules for penalty shootouts and their exact analysis.

pub mod analysis;
pub mod complexity;
pub mod engine;
pub mod error;
pub mod mechanisms;
pub mod reference;
pub mod strategy;

pub use error::{Error, Result};
