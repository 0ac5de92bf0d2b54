//! Computation and verification kernel for almost contact metric structures
//! (cosymplectic, Sasakian) on finite-dimensional Lie algebras given by
//! structure constants and a left-invariant metric.
//!
//! Every identity of the underlying geometry is exposed as a machine-checkable
//! residual: bracket axioms, the Levi-Civita connection invariants, the
//! almost-contact axioms, the 2-step half-bracket formula, Gauss/Weingarten
//! duality, and the Q-operator spectrum of a subalgebra.
//!
//! All values are immutable after construction and every operation is a pure
//! function of its inputs; randomized checks take explicit seeds.

pub mod catalog;
pub mod contact;
pub mod document;
pub mod error;
pub mod lie;
pub mod linalg;
pub mod metric;
pub mod report;
pub mod run;
pub mod subalgebra;

pub use contact::{AlmostContactStructure, Classification, StructureClass};
pub use error::GeometryError;
pub use lie::{BracketEntry, LieAlgebra, Nilpotency, NonsingularVerdict, Subspace};
pub use metric::{ConnectionTable, MetricLieAlgebra};
pub use report::{CheckItem, CheckReport, DEFAULT_TOLERANCE};
pub use subalgebra::{QSpectrum, SlantVerdict, Subalgebra, WirtingerAngle};
