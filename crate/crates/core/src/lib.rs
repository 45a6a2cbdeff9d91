//! Exact homological algebra for finitely presented modules over the
//! integers and over finite-dimensional bound quiver algebras.

pub mod constructions;
pub mod error;
pub mod fdalgebra;
pub mod fdmodule;
pub mod fixtures;
pub mod fp;
pub mod gorenstein;
pub mod homology;
pub mod integers;
pub mod io;
pub mod lifting;
pub mod module;
pub mod ring;

pub use error::{HalgError, Precondition, Result};
pub use fdalgebra::{AlgebraSpec, ArrowSpec, BoundQuiverAlgebra, FdRing, QuiverSpec, StructureConstantsSpec};
pub use integers::Integers;
pub use ring::{opposite_transfer, BackendKind, Matrix, ModuleInvariant, Ring, Side};
