//! Numerical laboratory for planar diffuse phase boundaries in a
//! compressible two-phase Navier-Stokes-Allen-Cahn model.
//!
//! The crate is organized around the pipeline
//! thermodynamics → reduced landscape → Maxwell states → no-flux profiles
//! → traveling waves → 1D dynamics:
//!
//! - [`thermo`]: energies, pressure `p`, transformation rate `q`, Gibbs
//!   potentials, the critical pressure and structural identities.
//! - [`landscape`]: the reduced function `Γ^{θ,π}(c,y)`, its critical
//!   points, contour extraction and the panel figure.
//! - [`maxwell`]: equilibrium concentrations and the equal-saddle-level
//!   pressure `π*(θ)` with the Maxwell state pair.
//! - [`profile`]: no-flux phase-boundary profiles built from the
//!   heteroclinic level set.
//! - [`twave`]: traveling-wave phase boundaries at small mass flux by
//!   shooting and continuation.
//! - [`pde1d`]: an explicit 1D finite-volume solver validating the
//!   profiles dynamically.

pub mod error;
pub mod landscape;
pub mod maxwell;
pub mod ode;
pub mod params;
pub mod pde1d;
pub mod profile;
pub mod rootfind;
pub mod thermo;
pub mod twave;

pub use error::{Error, Result};
pub use params::{FluidState, MixingEnergySpec, ModelParams, Phase2Energy, Phase2EnergySpec};
