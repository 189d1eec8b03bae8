//! Shared fixtures for the criterion benches.

use noma_crs::{RicianLink, SystemConfig};

/// Two-hop scenario with Ω_SD = 9, Ω_SR = Ω_RD = 36, K_SD = 2, K_SR = K_RD = 5.
pub fn fig2_config(a2: f64, snr_db: f64) -> SystemConfig {
    SystemConfig::from_snr_db(
        RicianLink::new(2.0, 9.0).expect("valid link"),
        RicianLink::new(5.0, 36.0).expect("valid link"),
        RicianLink::new(5.0, 36.0).expect("valid link"),
        a2,
        snr_db,
    )
    .expect("valid scenario")
}
