use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Duration of RX(π) at the reference Rabi frequency.
pub const T_PI_REFERENCE_NS: f64 = 10.0;
/// Rabi frequency Ω/2π (Hz) at which RX(π) takes `T_PI_REFERENCE_NS`.
pub const RABI_REFERENCE_HZ: f64 = 25e6;

/// Transmon frequency, drive Rabi frequency and XY coupling, all angular
/// (rad/s).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HardwareParams {
    pub omega: f64,
    pub rabi: f64,
    pub coupling: f64,
}

impl Default for HardwareParams {
    fn default() -> Self {
        HardwareParams::from_frequencies(6e9, 25e6, 25e6).expect("defaults are positive")
    }
}

impl HardwareParams {
    /// Takes ω/2π, Ω/2π, g/2π in Hz.
    pub fn from_frequencies(omega_hz: f64, rabi_hz: f64, coupling_hz: f64) -> Result<Self> {
        for (name, v) in [("omega", omega_hz), ("rabi", rabi_hz), ("g", coupling_hz)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::arg(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(HardwareParams {
            omega: 2.0 * PI * omega_hz,
            rabi: 2.0 * PI * rabi_hz,
            coupling: 2.0 * PI * coupling_hz,
        })
    }

    pub fn from_ghz_mhz(omega_ghz: f64, rabi_mhz: f64, g_mhz: f64) -> Result<Self> {
        Self::from_frequencies(omega_ghz * 1e9, rabi_mhz * 1e6, g_mhz * 1e6)
    }

    pub fn omega_hz(&self) -> f64 {
        self.omega / (2.0 * PI)
    }

    pub fn rabi_hz(&self) -> f64 {
        self.rabi / (2.0 * PI)
    }

    pub fn coupling_hz(&self) -> f64 {
        self.coupling / (2.0 * PI)
    }

    pub fn t_pi_ns(&self) -> f64 {
        T_PI_REFERENCE_NS * RABI_REFERENCE_HZ / self.rabi_hz()
    }

    pub fn rx_ns(&self, theta: f64) -> f64 {
        theta.abs() / PI * self.t_pi_ns()
    }

    /// `3π / (2g)` in nanoseconds.
    pub fn iswap_ns(&self) -> f64 {
        3.0 * PI / (2.0 * self.coupling) * 1e9
    }
}
