//! Special functions: log-Gamma, digamma, ζ by Euler–Maclaurin, and Bessel
//! functions of imaginary order.

mod bessel;
mod gamma;
mod zeta;

pub use bessel::{
    bessel_i_real, bessel_ji_imag, bessel_ji_imag_integral_scaled, bessel_ji_imag_scaled,
    bessel_ji_imag_series_scaled, bessel_k_asymptotic, bessel_k_asymptotic_with,
    bessel_k_imag_scaled, bessel_k_imag_scaled_quadrature, bessel_k_imag_scaled_series,
    bessel_k_real, AsymptoticConfig, BesselEval, BesselKind, BesselMethod, PhaseParams, JI_MAX_T,
    JI_UNSCALED_MAX_T, K_ASYMPTOTIC_MIN_T,
};
pub use gamma::{digamma, ln_gamma_real, log_gamma, EULER_GAMMA};
pub use zeta::{zeta, zeta_one_line, ZETA_ONE_LINE_MAX_T};
