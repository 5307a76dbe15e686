//! Physical constants. Everything defaults to natural units.

use crate::error::{invalid, Result};

/// Fundamental constants entering the Hamiltonian.
///
/// `tau` is the charge-over-speed factor multiplying the vector potential,
/// `-e/c` unless overridden with [`Constants::with_tau`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub hbar: f64,
    pub mu: f64,
    pub e_charge: f64,
    pub c_light: f64,
    pub k_b: f64,
    tau: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mu: 1.0,
            e_charge: 1.0,
            c_light: 1.0,
            k_b: 1.0,
            tau: -1.0,
        }
    }
}

impl Constants {
    pub fn new(hbar: f64, mu: f64, e_charge: f64, c_light: f64, k_b: f64) -> Result<Self> {
        for (name, v) in [
            ("hbar", hbar),
            ("mu", mu),
            ("e_charge", e_charge),
            ("c_light", c_light),
            ("k_B", k_b),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(Self {
            hbar,
            mu,
            e_charge,
            c_light,
            k_b,
            tau: -e_charge / c_light,
        })
    }

    /// Replace the coupling `tau`. Only meant for sign-convention experiments;
    /// the physical value is `-e/c`.
    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Flux quantum `hbar c / e`.
    pub fn flux_quantum(&self) -> f64 {
        self.hbar * self.c_light / self.e_charge
    }

    /// `hbar^2 alpha^2 / (2 mu)`: the energy unit of the closed-form spectrum.
    pub fn energy_scale(&self, alpha: f64) -> f64 {
        self.hbar * self.hbar * alpha * alpha / (2.0 * self.mu)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_units() {
        let k = Constants::default();
        assert_eq!(k.tau(), -1.0);
        assert_eq!(k.flux_quantum(), 1.0);
        assert_eq!(k, Constants::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap());
    }

    #[test]
    fn rejects_non_positive() {
        assert!(Constants::new(1.0, 0.0, 1.0, 1.0, 1.0).is_err());
        assert!(Constants::new(1.0, 1.0, -1.0, 1.0, 1.0).is_err());
        assert!(Constants::new(f64::NAN, 1.0, 1.0, 1.0, 1.0).is_err());
    }
}
