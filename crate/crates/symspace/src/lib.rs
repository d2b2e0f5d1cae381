//! Numerical toolkit for radial analysis on symmetric spaces of noncompact
//! type: restricted root systems with multiplicities, concrete matrix models
//! with Cartan radial coordinates, volume densities and envelopes, two-sided
//! Green/heat kernel envelopes with exact rank-one reference kernels, and
//! orbit statistics for finitely generated isometry groups.
//!
//! Everything numerically delicate has a log-space code path, so kernels and
//! envelopes stay comparable far past the underflow threshold of `f64`.

pub mod envelopes;
pub mod error;
pub mod lattice;
pub mod models;
pub mod oracles;
pub mod quad;
pub mod rootdata;
pub mod special;
pub mod volume;

pub use envelopes::{
    gaussian_tail_bound, green_envelope, heat_envelope, phi_t, Branch, OperatorSpec,
    SpectralParameter, GAUSSIAN_TAIL_C, HYPOTHESIS_MIN_DISTANCE,
};
pub use error::{Error, Result};
pub use lattice::{
    critical_exponents, enumerate_orbit, enumerate_orbit_capped, exponent_inequality_check,
    lambda0_lower_bound, modified_series, CriticalExponents, InequalityCheck, LatticeSpec,
    OrbitEnumeration, OrbitSample,
};
pub use models::{cartan_plus, distance, random_isometry, CartanCoordinate, Model, SpacePoint};
pub use oracles::{green_from_heat, h2_heat_mckean, h3_heat, HeatOracle, KernelSample};
pub use rootdata::{catalog_space, ChamberVector, RestrictedRootSystem};
pub use volume::{density_j, volume_envelope, volume_quadrature, VolumeEnvelope, VolumeEstimate};
