//! Quantum cluster algebras in exact arithmetic: seeds and mutation, Laurent expansions in a
//! reference quantum torus, dominance-order degrees, tropical transformations, and a checker
//! for the two-extremal-term structure of products with triangular-basis elements.

pub mod error;
pub mod expansion;
pub mod instances;
pub mod lattice;
pub mod leclerc;
pub mod pointed;
pub mod qtorus;
pub mod seed;
pub mod tropical;

pub use error::{Error, Result};
pub use qtorus::{BilinearForm, ExpVec, QTElem, VCoeff};
pub use seed::QuantumSeed;
