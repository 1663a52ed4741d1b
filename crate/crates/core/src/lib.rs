//! Combinatorics on words around the Thue–Morse word: generators, overlap
//! avoidance, enumeration of overlap-free words, subword complexity, and
//! the sequence analyses used to study their generating series.

pub mod avoidance;
pub mod complexity;
pub mod enumerate;
pub mod error;
pub mod interchange;
pub mod series;
pub mod word;

pub use error::{Error, Result};
pub use word::{FiniteWord, Letter, Morphism};
