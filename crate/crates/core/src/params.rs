//! Device parameters and unit conversions.
//!
//! All frequencies are angular (rad/s) and all times are seconds. Helpers in
//! this module convert from the laboratory units used in configuration files
//! (GHz, MHz, ns, dBm).

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Converts a frequency in GHz to rad/s.
pub fn ghz(f: f64) -> f64 {
    2.0 * PI * f * 1e9
}

/// Converts a frequency in MHz to rad/s.
pub fn mhz(f: f64) -> f64 {
    2.0 * PI * f * 1e6
}

/// Converts nanoseconds to seconds.
pub fn ns(t: f64) -> f64 {
    t / 1e9
}

/// Converts an angular frequency to GHz.
pub fn to_ghz(omega: f64) -> f64 {
    omega / (2.0 * PI * 1e9)
}

/// Converts an angular frequency to MHz.
pub fn to_mhz(omega: f64) -> f64 {
    omega / (2.0 * PI * 1e6)
}

/// Photon flux (photons/s) carried by a continuous tone of power `p_dbm` at angular frequency `omega`.
pub fn photon_flux_from_dbm(p_dbm: f64, omega: f64) -> f64 {
    1e-3 * 10f64.powf(p_dbm / 10.0) / (HBAR * omega)
}

/// Inverse of [`photon_flux_from_dbm`].
pub fn dbm_from_photon_flux(flux: f64, omega: f64) -> f64 {
    10.0 * (flux * HBAR * omega / 1e-3).log10()
}

/// Physical parameters of the driven qubit-resonator system.
///
/// `omega_ge` and `omega_r` are the renormalized transition frequencies (the
/// resonator frequency is the one with the qubit in its ground state). The
/// full dispersive pull of the resonator is `2 * chi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub omega_ge: f64,
    pub omega_r: f64,
    pub chi: f64,
    pub kappa: f64,
    pub kappa_ext_ratio: f64,
    pub gamma: f64,
    pub gamma_phi: f64,
    pub init_excited_pop: f64,
    /// Calibration `c` in `rabi = c * 10^(P_d / 20)` (rad/s per sqrt(mW)).
    pub drive_power_to_rabi: f64,
}

impl SystemParams {
    /// Device values measured for the flux-qubit detector, with the drive
    /// calibration anchored so the balanced point at a 49 MHz drive detuning
    /// sits at -75.7 dBm.
    pub fn reference_device() -> Self {
        let omega_r = ghz(10.256);
        let mut p = SystemParams {
            omega_ge: ghz(5.508),
            omega_r,
            chi: mhz(34.5),
            kappa: omega_r / 630.0,
            kappa_ext_ratio: 0.964,
            gamma: 1.0 / ns(700.0),
            gamma_phi: 0.0,
            init_excited_pop: 0.008,
            drive_power_to_rabi: 1.0,
        };
        p.drive_power_to_rabi = crate::ladder::fit_drive_calibration(&p, p.omega_ge - mhz(49.0), -75.7)
            .expect("device parameters admit a matching point");
        p
    }

    pub fn validate(&self) -> Result<()> {
        fn check(ok: bool, name: &'static str, reason: &str) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter { name, reason: reason.to_string() })
            }
        }
        check(self.omega_ge.is_finite() && self.omega_ge > 0.0, "omega_ge", "must be positive")?;
        check(self.omega_r.is_finite() && self.omega_r > 0.0, "omega_r", "must be positive")?;
        check(self.chi.is_finite() && self.chi > 0.0, "chi", "must be positive")?;
        check(self.kappa.is_finite() && self.kappa > 0.0, "kappa", "must be positive")?;
        check(
            (0.0..=1.0).contains(&self.kappa_ext_ratio),
            "kappa_ext_ratio",
            "must lie in [0, 1]",
        )?;
        check(self.gamma.is_finite() && self.gamma >= 0.0, "gamma", "must be non-negative")?;
        check(
            self.gamma_phi.is_finite() && self.gamma_phi >= 0.0,
            "gamma_phi",
            "must be non-negative",
        )?;
        check(
            (0.0..=1.0).contains(&self.init_excited_pop),
            "init_excited_pop",
            "must lie in [0, 1]",
        )?;
        check(
            self.drive_power_to_rabi.is_finite() && self.drive_power_to_rabi > 0.0,
            "drive_power_to_rabi",
            "must be positive",
        )
    }

    pub fn kappa_ext(&self) -> f64 {
        self.kappa * self.kappa_ext_ratio
    }

    pub fn kappa_int(&self) -> f64 {
        self.kappa - self.kappa_ext()
    }

    /// Resonator frequency with the qubit excited.
    pub fn omega_r_excited(&self) -> f64 {
        self.omega_r - 2.0 * self.chi
    }

    pub fn rabi_from_dbm(&self, p_dbm: f64) -> f64 {
        self.drive_power_to_rabi * 10f64.powf(p_dbm / 20.0)
    }

    pub fn dbm_from_rabi(&self, rabi: f64) -> f64 {
        20.0 * (rabi / self.drive_power_to_rabi).log10()
    }

    /// Checks `0 < omega_ge - omega_d < 2 chi`.
    pub fn check_nesting(&self, omega_d: f64) -> Result<()> {
        let detuning = self.omega_ge - omega_d;
        if detuning > 0.0 && detuning < 2.0 * self.chi {
            Ok(())
        } else {
            Err(Error::NotNested { detuning, two_chi: 2.0 * self.chi })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn device_values() {
        let p = SystemParams::reference_device();
        p.validate().unwrap();
        assert_relative_eq!(to_ghz(p.omega_ge), 5.508, max_relative = 1e-12);
        assert_relative_eq!(to_mhz(2.0 * p.chi), 69.0, max_relative = 1e-12);
        // kappa = omega_r / Q with Q = 630
        assert_relative_eq!(to_mhz(p.kappa), 16.28, epsilon = 0.005);
        assert_relative_eq!(p.kappa_int() / p.kappa, 0.036, epsilon = 1e-12);
    }

    #[test]
    fn dbm_round_trip() {
        let p = SystemParams::reference_device();
        for dbm in [-90.0, -75.7, -72.1, -60.0] {
            assert_relative_eq!(p.dbm_from_rabi(p.rabi_from_dbm(dbm)), dbm, epsilon = 1e-12);
        }
        // 6 dB in power doubles the Rabi amplitude
        assert_relative_eq!(
            p.rabi_from_dbm(-70.0) / p.rabi_from_dbm(-76.0),
            10f64.powf(0.3),
            max_relative = 1e-12
        );
    }

    #[test]
    fn photon_flux_conversion() {
        let omega = ghz(10.0);
        let flux = photon_flux_from_dbm(-145.65, omega);
        // 2.72e-18 W at 10 GHz is a few 1e5 photons per second
        assert!(flux > 3e5 && flux < 5e5, "{flux}");
        assert_relative_eq!(dbm_from_photon_flux(flux, omega), -145.65, epsilon = 1e-10);
    }

    #[test]
    fn nesting_window() {
        let p = SystemParams::reference_device();
        assert!(p.check_nesting(p.omega_ge - mhz(49.0)).is_ok());
        assert!(p.check_nesting(p.omega_ge).is_err());
        assert!(p.check_nesting(p.omega_ge - mhz(70.0)).is_err());
        assert!(p.check_nesting(p.omega_ge + mhz(10.0)).is_err());
    }

    #[test]
    fn invalid_ratio_rejected() {
        let mut p = SystemParams::reference_device();
        p.kappa_ext_ratio = 1.2;
        assert!(matches!(p.validate(), Err(Error::InvalidParameter { name: "kappa_ext_ratio", .. })));
        p.kappa_ext_ratio = 0.5;
        p.kappa = 0.0;
        assert!(p.validate().is_err());
    }
}
