//! Special-function kernels used by the rate series.
//!
//! * incomplete Gamma functions of integer order (positive and negative),
//! * the closed form of `∫_0^∞ t^m e^{-βt} / (1+t) dt`,
//! * the Gauss-Chebyshev rule for `Γ(-m, β)`,
//! * `I_0` and the first-order Marcum Q function,
//! * an adaptive Gauss-Kronrod integrator used as an independent reference.
//!
//! Everything here is a pure function of its arguments.

mod bessel;
mod chebyshev;
mod gamma;
mod oracle;

pub use bessel::{bessel_i0, bessel_i0_scaled, marcum_q1};
pub use chebyshev::{gauss_chebyshev_gamma, ChebyshevRule, QuadratureConfig};
pub use gamma::{
    exp_scaled_expint, lemma1_integral, ln_factorial, ln_lemma1_integral,
    ln_upper_gamma_negint, regularized_upper_gamma_posint, scaled_negint_gamma,
    scaled_negint_gamma_table, upper_gamma_negint, upper_gamma_posint,
};
pub use oracle::{oracle_quadrature, OracleConfig};
