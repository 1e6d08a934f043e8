//! Cogrowth of finitely presented groups: words, presentations, word problem
//! oracles, exact counting in Cayley balls, exponent bounds, locality
//! certificates and van Kampen diagrams.

pub mod cayley;
pub mod counting;
pub mod error;
pub mod lab;
pub mod exponents;
pub mod locality;
pub mod montecarlo;
pub mod pieces;
pub mod presentation;
pub mod rng;
pub mod spectral;
pub mod vankampen;
pub mod word;
pub mod word_problem;

pub use error::{Error, Result};
pub use presentation::{DensityConfig, Presentation, WordKind};
pub use word::{Letter, Word};
