//! CODATA 2018 constants and the unit converters used at API boundaries.
//!
//! Everything inside the crate is SI. Inputs quoted as `ea0`, `um` or
//! `rad/s` go through the helpers here exactly once.

use crate::error::{non_negative, Result};

/// Fundamental constants, SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant (J s).
    pub hbar: f64,
    /// Vacuum permittivity (F/m).
    pub epsilon0: f64,
    /// Elementary charge (C).
    pub e_charge: f64,
    /// Bohr radius (m).
    pub a0: f64,
    /// Speed of light (m/s).
    pub c_light: f64,
}

pub const CODATA2018: PhysicalConstants = PhysicalConstants {
    hbar: 1.054_571_817e-34,
    epsilon0: 8.854_187_812_8e-12,
    e_charge: 1.602_176_634e-19,
    a0: 5.291_772_109_03e-11,
    c_light: 299_792_458.0,
};

pub const HBAR: f64 = CODATA2018.hbar;
pub const EPSILON0: f64 = CODATA2018.epsilon0;
pub const E_CHARGE: f64 = CODATA2018.e_charge;
pub const BOHR_RADIUS: f64 = CODATA2018.a0;
pub const C_LIGHT: f64 = CODATA2018.c_light;

/// Atomic unit of electric dipole moment, e a0 (C m).
pub const EA0: f64 = E_CHARGE * BOHR_RADIUS;

/// Dipole moment in units of e a0 to C m.
pub fn dipole_from_ea0(value: f64) -> Result<f64> {
    Ok(non_negative("dipole (ea0)", value)? * EA0)
}

pub fn dipole_to_ea0(dipole: f64) -> f64 {
    dipole / EA0
}

pub fn length_from_um(value: f64) -> Result<f64> {
    Ok(non_negative("length (um)", value)? * 1e-6)
}

pub fn length_from_nm(value: f64) -> Result<f64> {
    Ok(non_negative("length (nm)", value)? * 1e-9)
}

pub fn length_from_cm(value: f64) -> Result<f64> {
    Ok(non_negative("length (cm)", value)? * 1e-2)
}

pub fn time_from_us(value: f64) -> Result<f64> {
    Ok(non_negative("time (us)", value)? * 1e-6)
}

/// Angular frequencies are carried in rad/s already; this only validates.
pub fn angular_freq_from_rad_s(value: f64) -> Result<f64> {
    non_negative("angular frequency (rad/s)", value)
}

/// m^-3 to cm^-3.
pub fn density_to_per_cm3(density: f64) -> f64 {
    density * 1e-6
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn codata_literals() {
        let k = CODATA2018;
        assert_relative_eq!(k.hbar, 1.054571817e-34, max_relative = 1e-9);
        assert_relative_eq!(k.epsilon0, 8.8541878128e-12, max_relative = 1e-9);
        assert_relative_eq!(k.e_charge, 1.602176634e-19, max_relative = 1e-9);
        assert_relative_eq!(k.a0, 5.29177210903e-11, max_relative = 1e-9);
        assert_eq!(k.c_light, 299792458.0);
        for v in [k.hbar, k.epsilon0, k.e_charge, k.a0, k.c_light] {
            assert!(v > 0.0);
        }
    }

    #[test]
    fn dipole_examples() {
        assert_eq!(dipole_from_ea0(0.0).unwrap(), 0.0);
        assert!((dipole_from_ea0(1.0).unwrap() - 8.4784e-30).abs() < 1e-33);
        assert!((dipole_from_ea0(315.0).unwrap() - 2.6707e-27).abs() < 1e-30);
        assert!(dipole_from_ea0(-1.0).is_err());
    }

    #[test]
    fn prefix_scaling() {
        assert_eq!(length_from_um(2.0).unwrap(), 2e-6);
        assert_eq!(length_from_um(0.0).unwrap(), 0.0);
        assert_eq!(length_from_um(1.0).unwrap(), 1e-6);
        assert!(length_from_um(-2.0).is_err());
        assert_eq!(angular_freq_from_rad_s(7.35e6).unwrap(), 7.35e6);
        assert!(angular_freq_from_rad_s(-1.0).is_err());
        assert_eq!(length_from_cm(1.0).unwrap(), 0.01);
    }

    proptest! {
        #[test]
        fn dipole_round_trip(x in 0.0f64..1e4) {
            let back = dipole_from_ea0(x).unwrap() / (E_CHARGE * BOHR_RADIUS);
            prop_assert!((back - x).abs() <= 4.0 * f64::EPSILON * x.max(1.0));
        }
    }
}
