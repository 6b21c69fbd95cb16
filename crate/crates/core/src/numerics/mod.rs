//! Low-level numerical building blocks.

pub mod linalg;
pub mod ode;
pub mod poly;
pub mod quadrature;

pub use linalg::{lu_logdet, symmetric_eigenvalues, SquareMatrix};
pub use ode::{ode_rk4, Rk4Stepper, Trajectory};
pub use poly::RealPolynomial;
pub use quadrature::{
    gauss_legendre, gauss_legendre_cached, integrate_panels, map_semi_infinite, PanelScheme,
    QuadratureRule, SemiInfiniteMap,
};
