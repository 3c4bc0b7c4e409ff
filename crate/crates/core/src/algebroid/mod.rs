//! Free Lie algebroids over a coordinate ring and the structures they carry:
//! polyvectors with the Schouten bracket, `L`-forms with Cartan calculus,
//! polydifferential operators with the Gerstenhaber bracket, the symplectic
//! `J` map and constant-coefficient star products.
//!
//! Conventions: a polyvector of exterior degree `k + 1` and a
//! polydifferential operator with `k + 1` slots both have Lie degree `k`.

mod cartan;
mod forms;
mod model;
mod moyal;
mod polydiff;
mod polyvector;
mod symplectic;

pub use cartan::{cartan_check, CartanFault, CartanReport};
pub use forms::{forms_equal, subsets as basis_subsets, LForm};
pub use model::{parse_model_file, AlgebroidModel};
pub use moyal::{moyal_generate, skew_symmetrize, SkewSymmetrization};
pub use polydiff::{PolyDiff, PolyDiffModel, SlotKey};
pub use polyvector::{PolyVector, PolyVectorModel};
pub use symplectic::{Symplectic, INTERTWINING_SIGN};

pub(crate) use model::relabel;
