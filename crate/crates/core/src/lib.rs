//! Computational homological algebra over finite-dimensional algebras:
//! resolutions, Ext and Tor, zig-zag subresolutions and filtrations of modules
//! and complexes, and cotorsion-pair checks on finite universes.

pub mod algebra;
pub mod certificate;
pub mod checker;
pub mod class;
pub mod cli;
pub mod complex;
pub mod complex_zigzag;
pub mod cotorsion;
pub mod error;
pub mod field;
pub mod formats;
pub mod homological;
pub mod library;
pub mod matrix;
pub mod module;
pub mod oracle;
pub mod par;
pub mod random;
pub mod resolution;
pub mod subspace;
pub mod zigzag;

pub use algebra::{Algebra, AlgebraSpec};
pub use error::{Error, Result};
pub use field::PrimeField;
pub use matrix::Matrix;
pub use module::{Module, ModuleMap};
pub use subspace::Subspace;
