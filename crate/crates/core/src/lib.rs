//! Numerical lab for multiplicative statistics at the soft edge of unitary
//! invariant Hermitian ensembles.
//!
//! The crate is layered bottom-up:
//!
//! * [`numerics`]: polynomials, Gauss-Legendre panels, LU log-determinants, RK4.
//! * [`special`]: Airy functions and Fermi-Dirac type integrals.
//! * [`equilibrium`]: one-cut equilibrium measures and edge data of a potential.
//! * [`ensemble`]: deformed orthogonal polynomials, kernels and the multiplicative statistic.
//! * [`fredholm`]: finite-temperature Airy kernel and its Fredholm determinant.
//! * [`idpii`]: the integro-differential Painleve II system.
//! * [`lab`]: configuration, studies and result emission used by the CLI.

pub mod ensemble;
pub mod equilibrium;
pub mod error;
pub mod fredholm;
pub mod idpii;
pub mod lab;
pub mod numerics;
pub mod special;

pub use error::{Error, Result};
