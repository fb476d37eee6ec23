//! Dense quantum dynamics toolkit for measurement models driven by
//! autonomous switching devices.
//!
//! The crate is organized in layers:
//!
//! * [`linalg`] / [`states`] — dense complex linear algebra and quantum-state
//!   primitives (tensor products, partial traces, purification, exact
//!   unitary evolution).
//! * [`metrics`] — fidelity, trace distance (sup-over-observables
//!   convention), Bures angle, energy fluctuation, overall spectral width,
//!   and the Mandelstam-Tamm overlap bound.
//! * [`grids`] — discretized 1D/2D continuum spaces with spectral
//!   translation and second-order split-operator propagation.
//! * [`models`] — concrete measurement and timing-device models
//!   (conditional-translation pointer, chiral timing device, Gaussian
//!   particle, 2D Stern-Gerlach) plus finite-dimensional specimens.
//! * [`conditions`] — numerical checkers for the switching-device
//!   conditions and a finite-dimensional no-go probe.
//! * [`measure`] — measurement protocol execution: outcome probabilities,
//!   worst-case error, disturbance profiles, free-vs-full overlap curves.
//! * [`bounds`] — trade-off inequality audits and the spacetime heuristic
//!   calculator.
//! * [`lattice`] — finite spin chains, box Hamiltonians, and locality
//!   error sweeps.
//!
//! All internal computation uses natural units (`ℏ = 1`); see
//! [`HBAR`] for the single rescaling constant applied to reported
//! products.

// `!(x > 0)`-style checks deliberately reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod conditions;
pub mod error;
pub mod grids;
pub mod lattice;
pub mod linalg;
pub mod measure;
pub mod metrics;
pub mod models;
pub mod states;

pub use error::{Error, Result};

/// Reduced Planck constant in internal units. Everything downstream is
/// scale-covariant in `ℏ`, so computations run with `ℏ = 1` and reported
/// products such as `τ·ΔH_A` are multiples of this constant.
pub const HBAR: f64 = 1.0;

/// Default cap on the total dimension of dense composite spaces.
pub const MAX_TOTAL_DIM: usize = 4096;
