//! Airy functions and Fermi-Dirac type integrals.

pub mod airy;
pub mod fermi;

pub use airy::{airy, airy_ai, airy_ai_prime, airy_asymptotic, airy_series, AiryPair};
pub use fermi::{f_beta_quad, f_k_closed, fermi_weight, polylog_alternating};
