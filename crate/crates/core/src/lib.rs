//! Discord-type quantum correlation measures for bipartite states and
//! simulation of the interferometric phase-estimation protocol they bound.
//!
//! * [`linalg`]: dense complex Hermitian linear algebra.
//! * [`states`]: validated density matrices, probe-state factories, gates.
//! * [`measures`]: skew information, quantum Fisher information, local quantum
//!   uncertainty, interferometric power, entropic discord.
//! * [`optimize`]: minimization over fixed-spectrum local observables.
//! * [`estimate`]: phase encoding, optimal measurement, maximum likelihood.
//! * [`sweep`]: named probes and the per-`p` table of measures.
//! * [`suite`]: invariant checks shared by the CLI and the test suites.

pub mod error;
pub mod estimate;
pub mod linalg;
pub mod measures;
pub mod optimize;
pub mod random;
pub mod states;
pub mod suite;
pub mod sweep;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, EigenDecomposition, Subsystem, C64};
pub use measures::{LocalObservable, MeasureReport, Method, QipReport, SpectrumSpec};
pub use optimize::{GridSpec, Objective, OrbitProblem};
pub use states::DensityMatrix;
pub use suite::{PropertyResult, Suite, SuiteConfig};
pub use sweep::{Preset, SweepRow};
