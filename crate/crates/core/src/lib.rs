//! Few-photon linear-optics interference with internal (polarisation) and
//! external (spatial) degrees of freedom.
//!
//! The crate is organised bottom-up:
//!
//! * [`fock`]: occupation-number states over the modes `γ, a, b` × `{0, 1}`.
//! * [`labeled`]: first-quantized wavefunctions with per-particle labels, the
//!   pair exchange / (anti)symmetrization operators and the exchange-symmetry
//!   classification of the three-photon states.
//! * [`interferometer`]: spatial unitaries and two independent evolution
//!   engines (creation-operator substitution and matrix permanents).
//! * [`states`]: named Bell and three-photon states.
//! * [`closed_form`]: analytic scattering probabilities, product statistics
//!   and their difference.
//! * [`experiment`]: post-selected state preparation, HOM dips, pseudo
//!   photon-number-resolving detection and Monte Carlo count generation.

pub mod closed_form;
pub mod distribution;
pub mod error;
pub mod experiment;
pub mod fock;
pub mod format;
pub mod interferometer;
pub mod labeled;
pub mod states;

pub use distribution::{OutcomeDistribution, Pattern};
pub use error::{Error, Result};
pub use fock::{FockBasisState, Internal, ModeLabel, Spatial, StateVector};
pub use interferometer::SpatialUnitary;
pub use labeled::{Dof, LabeledWavefunction, SymmetryClass};
pub use num_complex::Complex64;
