//! Root classification for weighted projective lines.
//!
//! For a weight type `p = (p_1, ..., p_n)` this crate builds the star-shaped
//! graph and the lattice `Q^ = Q + Z delta`, decides for every class whether
//! it carries zero, one or infinitely many indecomposable coherent sheaves,
//! and checks the loop-algebra relations of an explicit symbolic model.

pub mod error;
pub mod format;
pub mod lattice;
pub mod loop_model;
pub mod weight;
pub mod weyl;

pub use error::{Error, Result};
pub use lattice::{ClassVector, RootLattice, SheafObject};
pub use loop_model::{
    Basis, BracketError, Degree, GeneratorSymbol, JacobiReport, LoopModel, ModelElement,
    RelationReport,
};
pub use weight::{GradingElement, StarGraph, Vertex, WeightType};
pub use weyl::{
    Count, EnumeratedRoot, Reduction, ReflectionWord, RootClassification, RootKind, RootSet,
    RootSystem, Terminal, TerminalCase, Verdict,
};
