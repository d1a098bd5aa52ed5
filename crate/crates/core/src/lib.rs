//! Solving, normalizing, and stress-testing one-variable word equations with
//! constants, plus tools for constant-free three-variable systems.

pub mod campaign;
pub mod equation;
pub mod normalizer;
pub mod reduction;
pub mod solver;
pub mod threevar;
pub mod words;

pub use equation::{AlignedEquation, EquationError, OneVarEquation, SolutionSet, Token};
pub use solver::{candidate_for_length, classify, enumerate_solutions};
pub use words::{Alphabet, Height, PrefixSumWord, Value, Word, WordError};
