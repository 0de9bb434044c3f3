//! Comparing gene lists through the exchangeability of gene positions under
//! resampled rankings.

pub mod classic;
pub mod error;
pub mod evaluation;
pub mod exchangeability;
pub mod framework;
pub mod io;
pub mod model;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use model::{Direction, GeneList, Ranking, Universe};
