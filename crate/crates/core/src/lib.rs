//! Exact computation of the transgression kernel `Ker(d2)` for the Galois
//! cohomology of Fermat-curve homology over F_p.

pub mod action;
pub mod cohomology;
pub mod cyclotomic;
pub mod data;
pub mod error;
pub mod fp;
pub mod group_ring;
pub mod homology;
pub mod transgression;

pub use action::GaloisActionData;
pub use cohomology::{ExtensionClassData, NData, QGroup, QModule, TwoCocycle};
pub use cyclotomic::CyclotomicInteger;
pub use data::{dataset, Dataset};
pub use error::{Error, Result};
pub use fp::{FpMatrix, Prime, Subspace};
pub use group_ring::{GroupRingElement, MonomialOrder};
pub use homology::{HomologyModule, ModuleKind};
pub use transgression::{InvariantHomSpace, KerD2Result, QuotientPreset};
