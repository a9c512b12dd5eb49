//! Quadratic lattices over complete discrete valuation rings of odd residue
//! characteristic, with exact arithmetic throughout.
//!
//! The crate decides lattice embeddings with O'Meara's local criterion,
//! computes integral spinor-norm and transporter-norm groups, checks their
//! behaviour under base change along finite extension towers, and assembles
//! everywhere-local embedding reports over `F_q[t]`.

pub mod embedding;
pub mod error;
pub mod ff;
pub mod global;
pub mod localfield;
pub mod matrix;
pub mod quadlattice;
pub mod quadspace;
pub mod spinor;

pub use error::{Error, Result};
pub use localfield::{BaseField, Elem, Field, Scalar, SquareClass, SquareClassSubgroup, Step};
pub use matrix::Mat;
pub use quadlattice::{JordanComponent, JordanSplitting, QuadLattice};
pub use quadspace::{QuadSpace, SpaceInvariants};
