//! Numerical machinery for moments of the argument of Hecke–Maass
//! L-functions on the critical line.
//!
//! The crate is organised bottom-up:
//!
//! - [`arith`]: primes, von Mangoldt, divisor functions, Kloosterman sums.
//! - [`specfun`]: log-Gamma, digamma, ζ via Euler–Maclaurin and Bessel
//!   functions of imaginary order.
//! - [`hecke`]: Hecke eigenvalue algebra and Satake parameters.
//! - [`maass_data`]: the `maass-v1` dataset format.
//! - [`dirichlet_poly`]: smoothed von Mangoldt weights and the short
//!   Dirichlet-polynomial approximation of `S_j(t)`.
//! - [`trace`]: both sides of the Kuznetsov trace formula over even forms.
//! - [`moments`]: Gaussian-weighted moments and the limiting Gaussian.
//! - [`zeta_clt`]: Riemann–Siegel, zero counting and Selberg's `S(T)`.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod arith;
pub mod dirichlet_poly;
mod error;
pub mod hecke;
pub mod maass_data;
pub mod moments;
pub mod quad;
pub mod specfun;
pub mod sum;
pub mod trace;
pub mod zeta_clt;

pub use error::{Error, Result};

/// Version line embedded in every report.
pub const VERSION_LINE: &str = concat!("spectral-moments ", env!("CARGO_PKG_VERSION"));
