//! Green–Naghdi heat propagation on 1-D grids.
//!
//! Implements the constitutive theory and field equations of the three
//! Green–Naghdi heat-conduction theories (Types I, II, III) together with
//! classical Fourier conduction, plus a thermodynamic audit layer that
//! verifies the structural identities of the framework — the entropy
//! balance η̇ = −div h + s + ξ, the influx proportionality q = θh, the
//! free-energy relation ε = ψ + θη, and the reduced entropy equation
//! ψ̇ + ηθ̇ + θ⁻¹q·∇θ + θξ = 0 — and probes where internal entropy
//! production ξ fails to be nonnegative (null for Type II, sign-indefinite
//! for Type III when κ** > 0).
//!
//! The crate is organised as a library; the `examples/` directory holds one
//! runnable program per capability, and a single thin `gn-heat` binary
//! exposes config-driven runs (`run`, `sweep`, `report`, `validate`).
//!
//! Layers, bottom up:
//!
//! - [`constitutive`]: material parameters, per-theory state spaces, and
//!   the response sextuple (ψ, η, ε, q, h, ξ).
//! - [`grid`]: uniform 1-D cell-centered grid with second-order discrete
//!   operators and boundary conditions.
//! - [`solvers`]: time integration of the five field equations (classical
//!   heat equation, Type I nonlinear and ξ-form, Type II α-wave,
//!   Type III linearized and full entropy-balance form).
//! - [`thermo_audit`]: runtime verification of identities, second-law
//!   inequalities, and budget closure along trajectories.
//! - [`diagnostics`]: dispersion roots, measured decay rates and
//!   frequencies, convergence studies.
//! - [`cli`]: JSON scenario configs, CSV/JSON outputs, parameter sweeps.

pub mod cli;
pub mod constitutive;
pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod solvers;
pub mod source;
pub mod thermo_audit;
pub mod tridiag;

pub use error::{Error, Result};
