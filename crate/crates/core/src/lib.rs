//! Quantum benchmarks for teleportation and storage of single-mode squeezed
//! (thermal) states whose squeezing degree is completely unknown.
//!
//! The crate computes the classical fidelity threshold (CFT) attainable by
//! measure-and-prepare strategies: the exact value for pure squeezed vacua,
//! upper and lower bounds for squeezed thermal inputs of given purity, their
//! purity averages, and the fidelity of conventional twin-beam teleportation.
//!
//! Layout:
//! - [`states`]: squeezed thermal state parameterization and conversions.
//! - [`specfun`]: complex log-gamma, terminating ₂F₁, squeeze matrix elements.
//! - [`quadrature`]: real-line integration, cosine transforms, tabulated densities.
//! - [`estimation`]: the covariant squeezing-estimation distributions.
//! - [`benchmark`]: fidelities, bounds, protocol analysis and verdicts.
//! - [`fock_oracle`]: brute-force cross-checks in a truncated Fock space.

pub mod benchmark;
pub mod error;
pub mod estimation;
pub mod export;
pub mod fock_oracle;
pub mod quadrature;
pub mod specfun;
pub mod states;

pub use error::{Error, Result};
pub use estimation::{Estimator, EstimationKind};
pub use quadrature::{QuadConfig, TabulatedDensity};
pub use states::{Purity, SqueezedThermalState, ThermalWeights};
