//! Average achievable rates of a NOMA-based cooperative relaying system
//! (source, half-duplex decode-and-forward relay, destination) over
//! independent Rician fading links.
//!
//! Three independent routes to the same numbers are provided:
//!
//! * [`rates::exact_rates`]: double infinite series built from the CDFs of the
//!   min-statistics and the closed form of `∫ t^m e^{-βt}/(1+t) dt`,
//! * [`rates::approx_rates`]: the same series with the negative-order
//!   incomplete Gamma function replaced by Gauss-Chebyshev quadrature,
//! * [`sim::mc_noma_rates`]: seeded, parallel Monte Carlo over channel draws.
//!
//! ```
//! use noma_crs::{RicianLink, SeriesControl, SystemConfig};
//!
//! let cfg = SystemConfig::from_snr_db(
//!     RicianLink::new(2.0, 9.0).unwrap(),
//!     RicianLink::new(5.0, 36.0).unwrap(),
//!     RicianLink::new(5.0, 36.0).unwrap(),
//!     0.3,
//!     20.0,
//! )
//! .unwrap();
//! let report = noma_crs::rates::exact_rates(&cfg, &SeriesControl::default()).unwrap();
//! assert!(report.c_s1 > 0.0 && report.c_s2 > report.c_s1);
//! ```

pub mod channel;
pub mod error;
pub mod rates;
mod series;
pub mod sim;
pub mod specfun;

pub use channel::{LinkCoefficients, MinPairSpec, RicianLink, SeriesControl};
pub use error::{Error, Result};
pub use rates::{GammaKernel, Method, RateMeta, RateReport, SystemConfig};
pub use series::SeriesValue;
pub use sim::{Combine, McConfig, McEstimate};
pub use specfun::{OracleConfig, QuadratureConfig};

/// Converts an SNR in decibels to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
