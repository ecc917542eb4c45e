//! Fair division of indivisible goods when each agent reports only a top-k
//! ranking of the goods.

pub mod cli;
pub mod error;
pub mod fairness;
pub mod model;
pub mod polytope;
pub mod rules;
pub mod welfare;

pub use error::{Error, Result};
