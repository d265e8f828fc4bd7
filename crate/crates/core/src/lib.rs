//! Steiner triple and quadruple systems with zero-sum flows.

pub mod cache;
pub mod compositions;
pub mod cyclic;
pub mod design;
pub mod error;
pub mod exact_cover;
pub mod factorizations;
pub mod flow;
pub mod io;
pub mod latin;
mod rank;
pub mod resolvable;
pub mod search;
pub mod solver;
pub mod sqs;

pub use error::{Error, Result};
