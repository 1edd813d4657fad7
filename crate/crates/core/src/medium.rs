//! Waveguide geometry, trapped ensemble and the two EIT channels.

use std::f64::consts::PI;

use crate::constants::C_LIGHT;
use crate::ddi::RydbergState;
use crate::error::{positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveguideGeometry {
    /// Medium length L (m).
    pub length: f64,
    /// Transverse Gaussian width of the guided mode, w_f (m).
    pub field_width: f64,
    /// Transverse Gaussian width of the atomic cloud, w_a (m).
    pub atom_width: f64,
    /// `w_a w_f / sqrt(w_a^2 + w_f^2)` (m).
    pub effective_width: f64,
}

impl WaveguideGeometry {
    pub fn new(length: f64, field_width: f64, atom_width: f64) -> Result<Self> {
        positive("waveguide length", length)?;
        positive("field width w_f", field_width)?;
        positive("atom width w_a", atom_width)?;
        if atom_width > field_width {
            return Err(Error::InvalidParameter {
                name: "atom width w_a",
                reason: format!("must not exceed the field width ({atom_width} > {field_width})"),
            });
        }
        let effective_width = atom_width * field_width / atom_width.hypot(field_width);
        Ok(Self {
            length,
            field_width,
            atom_width,
            effective_width,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomicEnsemble {
    pub atom_count: f64,
    pub geometry: WaveguideGeometry,
    /// `N / [pi (w_a^2 + w_f^2) L]` (m^-3).
    pub effective_density: f64,
}

impl AtomicEnsemble {
    pub fn new(atom_count: f64, geometry: WaveguideGeometry) -> Result<Self> {
        positive("atom count", atom_count)?;
        let g = &geometry;
        let effective_density =
            atom_count / (PI * (g.atom_width.powi(2) + g.field_width.powi(2)) * g.length);
        Ok(Self {
            atom_count,
            geometry,
            effective_density,
        })
    }
}

pub fn effective_density(ensemble: &AtomicEnsemble) -> f64 {
    ensemble.effective_density
}

/// Optical transition |g> -> |e_l>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub wavelength: f64,
    pub relaxation_gamma_ge: f64,
    /// Resonant two-level cross-section `3 lambda^2 / (2 pi)` (m^2).
    pub absorption_cross_section: f64,
}

impl Transition {
    pub fn new(wavelength: f64, relaxation_gamma_ge: f64) -> Result<Self> {
        positive("wavelength", wavelength)?;
        positive("gamma_ge", relaxation_gamma_ge)?;
        Ok(Self {
            wavelength,
            relaxation_gamma_ge,
            absorption_cross_section: 3.0 * wavelength * wavelength / (2.0 * PI),
        })
    }
}

/// `kappa = sigma rho` (m^-1).
pub fn absorption_coefficient(transition: &Transition, density: f64) -> f64 {
    transition.absorption_cross_section * density
}

/// `v = 2 Omega^2 / (kappa gamma_ge)`; errors if the result is not slow light.
pub fn group_velocity(control_rabi: f64, kappa: f64, gamma_ge: f64) -> Result<f64> {
    positive("absorption coefficient", kappa)?;
    positive("gamma_ge", gamma_ge)?;
    let v = 2.0 * control_rabi * control_rabi / (kappa * gamma_ge);
    if v >= C_LIGHT || !v.is_finite() {
        return Err(Error::ComputedVelocityExceedsC { velocity: v });
    }
    Ok(v)
}

/// `sin^2 theta = 1 - v/c`, from `v = c cos^2 theta`.
pub fn mixing_angle_sin2(v: f64) -> f64 {
    1.0 - v / C_LIGHT
}

/// `delta_omega = Omega^2 / (gamma_ge sqrt(kappa L))` (rad/s).
pub fn eit_bandwidth(control_rabi: f64, gamma_ge: f64, optical_depth: f64) -> f64 {
    control_rabi * control_rabi / (gamma_ge * optical_depth.sqrt())
}

/// `sin^2 theta` from `tan^2 theta = (g^2 N / Omega^2)(w / w_a)^2`.
///
/// For callers who know the single-atom coupling `g`; the channel itself
/// derives the mixing angle from the group velocity.
pub fn mixing_sin2_from_coupling(g: f64, atom_count: f64, control_rabi: f64, w: f64, atom_width: f64) -> f64 {
    let tan2 = g * g * atom_count / (control_rabi * control_rabi) * (w / atom_width).powi(2);
    tan2 / (1.0 + tan2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelLabel {
    First,
    Second,
}

impl ChannelLabel {
    pub fn index(self) -> usize {
        match self {
            ChannelLabel::First => 1,
            ChannelLabel::Second => 2,
        }
    }
}

/// One quantum field with its optical transition, control field and Rydberg level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EitChannel {
    pub label: ChannelLabel,
    pub transition: Transition,
    pub control_rabi: f64,
    pub rydberg_state: RydbergState,
    /// Decay rate of the g-d coherence; no default.
    pub rydberg_coherence_gamma_gd: Option<f64>,
    pub absorption_kappa: f64,
    pub optical_depth: f64,
    pub group_velocity: f64,
    pub sin2_theta: f64,
    pub eit_bandwidth: f64,
}

impl EitChannel {
    pub fn new(
        label: ChannelLabel,
        transition: Transition,
        control_rabi: f64,
        rydberg_state: RydbergState,
        rydberg_coherence_gamma_gd: Option<f64>,
        ensemble: &AtomicEnsemble,
    ) -> Result<Self> {
        positive("control Rabi frequency", control_rabi)?;
        if let Some(g) = rydberg_coherence_gamma_gd {
            positive("gamma_gd", g)?;
        }
        let kappa = absorption_coefficient(&transition, ensemble.effective_density);
        let optical_depth = kappa * ensemble.geometry.length;
        let v = group_velocity(control_rabi, kappa, transition.relaxation_gamma_ge)?;
        Ok(Self {
            label,
            transition,
            control_rabi,
            rydberg_state,
            rydberg_coherence_gamma_gd,
            absorption_kappa: kappa,
            optical_depth,
            group_velocity: v,
            sin2_theta: mixing_angle_sin2(v),
            eit_bandwidth: eit_bandwidth(control_rabi, transition.relaxation_gamma_ge, optical_depth),
        })
    }

    /// Relative difference between the velocity-derived `sin^2 theta` and the
    /// one implied by a single-atom coupling `g`.
    pub fn coupling_consistency(&self, g: f64, ensemble: &AtomicEnsemble) -> f64 {
        let geo = &ensemble.geometry;
        let other = mixing_sin2_from_coupling(
            g,
            ensemble.atom_count,
            self.control_rabi,
            geo.effective_width,
            geo.atom_width,
        );
        (other - self.sin2_theta).abs() / self.sin2_theta
    }

    /// Time to traverse the medium, `L / v`.
    pub fn transit_time(&self, length: f64) -> f64 {
        length / self.group_velocity
    }
}

/// The counter-propagating pair sharing one ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelPair {
    pub ensemble: AtomicEnsemble,
    pub first: EitChannel,
    pub second: EitChannel,
}

pub const DEFAULT_MIXING_TOLERANCE: f64 = 1e-3;

impl ChannelPair {
    pub fn new(ensemble: AtomicEnsemble, first: EitChannel, second: EitChannel) -> Self {
        Self {
            ensemble,
            first,
            second,
        }
    }

    pub fn geometry(&self) -> &WaveguideGeometry {
        &self.ensemble.geometry
    }

    pub fn channel(&self, label: ChannelLabel) -> &EitChannel {
        match label {
            ChannelLabel::First => &self.first,
            ChannelLabel::Second => &self.second,
        }
    }

    /// Checks `theta_1 = theta_2` to relative tolerance `tol` on `sin^2 theta`.
    pub fn check_equal_mixing(&self, tol: f64) -> Result<()> {
        let (a, b) = (self.first.sin2_theta, self.second.sin2_theta);
        if (a - b).abs() <= tol * a.max(b) {
            Ok(())
        } else {
            Err(Error::MixingAngleMismatch { first: a, second: b })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reference_geometry() -> WaveguideGeometry {
        WaveguideGeometry::new(0.01, 2e-6, 2e-6).unwrap()
    }

    #[test]
    fn geometry_invariants() {
        let g = reference_geometry();
        assert!((g.effective_width - std::f64::consts::SQRT_2 * 1e-6).abs() < 1e-20);
        assert!(WaveguideGeometry::new(0.01, 1e-6, 2e-6).is_err());
        assert!(WaveguideGeometry::new(0.0, 2e-6, 2e-6).is_err());
        let g = WaveguideGeometry::new(0.01, 3e-6, 1e-6).unwrap();
        assert!(g.effective_width <= g.atom_width.min(g.field_width));
    }

    #[test]
    fn density_examples() {
        let e = AtomicEnsemble::new(5e4, reference_geometry()).unwrap();
        assert!((e.effective_density / 1.99e17 - 1.0).abs() < 0.05);
        let e2 = AtomicEnsemble::new(1e5, reference_geometry()).unwrap();
        assert_eq!(e2.effective_density, 2.0 * e.effective_density);
        let unit = WaveguideGeometry::new(1.0 / PI, 1.0, 1.0).unwrap();
        let e = AtomicEnsemble::new(1.0, unit).unwrap();
        assert!((effective_density(&e) - 0.5).abs() < 1e-15);
        assert!(AtomicEnsemble::new(0.0, unit).is_err());
    }

    #[test]
    fn optical_depths() {
        let e = AtomicEnsemble::new(5e4, reference_geometry()).unwrap();
        let d1 = Transition::new(795e-9, 1.8e7).unwrap();
        let d2 = Transition::new(780e-9, 1.9e7).unwrap();
        let od1 = absorption_coefficient(&d1, e.effective_density) * 0.01;
        let od2 = absorption_coefficient(&d2, e.effective_density) * 0.01;
        assert!((od1 / 600.0 - 1.0).abs() < 0.03);
        assert!((od2 / 580.0 - 1.0).abs() < 0.03);
        assert_eq!(absorption_coefficient(&d1, 0.0), 0.0);
    }

    #[test]
    fn velocity_examples() {
        let v2 = group_velocity(7.43e6, 580.0 / 0.01, 1.9e7).unwrap();
        let v1 = group_velocity(7.35e6, 600.0 / 0.01, 1.8e7).unwrap();
        assert!((v1 / 100.0 - 1.0).abs() < 0.02);
        assert!((v2 / 100.0 - 1.0).abs() < 0.02);
        let doubled = group_velocity(7.35e6 * 2f64.sqrt(), 600.0 / 0.01, 1.8e7).unwrap();
        assert!((doubled / v1 - 2.0).abs() < 1e-14);
        assert!(matches!(
            group_velocity(1e12, 1.0, 1.0),
            Err(Error::ComputedVelocityExceedsC { .. })
        ));
    }

    #[test]
    fn mixing_angle_examples() {
        assert_eq!(mixing_angle_sin2(C_LIGHT), 0.0);
        assert_eq!(mixing_angle_sin2(C_LIGHT / 2.0), 0.5);
        let s = mixing_angle_sin2(100.0);
        assert!((s - (1.0 - 3.3356409519815204e-7)).abs() < 1e-16);
    }

    #[test]
    fn bandwidth_examples() {
        let b = eit_bandwidth(7.35e6, 1.8e7, 600.0);
        assert!((b / 1.2e5 - 1.0).abs() < 0.05);
        assert!((eit_bandwidth(7.35e6, 1.8e7, 2400.0) / b - 0.5).abs() < 1e-15);
        assert!((eit_bandwidth(14.7e6, 1.8e7, 600.0) / b - 4.0).abs() < 1e-15);
    }

    #[test]
    fn coupling_route_agrees_with_velocity_route() {
        let e = AtomicEnsemble::new(5e4, reference_geometry()).unwrap();
        let ch = EitChannel::new(
            ChannelLabel::First,
            Transition::new(795e-9, 1.8e7).unwrap(),
            7.35e6,
            RydbergState::with_dipole_ea0(315.0).unwrap(),
            None,
            &e,
        )
        .unwrap();
        // Choose g so that tan^2 theta = c/v - 1.
        let geo = &e.geometry;
        let tan2 = C_LIGHT / ch.group_velocity - 1.0;
        let g = (tan2 * ch.control_rabi.powi(2) / e.atom_count).sqrt() * geo.atom_width / geo.effective_width;
        assert!(ch.coupling_consistency(g, &e) < 1e-12);
        assert!(ch.coupling_consistency(0.5 * g, &e) > 1e-6);
    }

    proptest! {
        #[test]
        fn velocity_round_trip(omega in 1e5f64..1e8, kappa in 1e2f64..1e6, gamma in 1e6f64..1e8) {
            if let Ok(v) = group_velocity(omega, kappa, gamma) {
                let back = v * kappa * gamma;
                prop_assert!((back / (2.0 * omega * omega) - 1.0).abs() < 1e-12);
                prop_assert_eq!(mixing_angle_sin2(v) + v / C_LIGHT, 1.0);
            }
        }

        #[test]
        fn optical_depth_increases_with_atoms(n in 1e2f64..1e7, factor in 1.001f64..10.0) {
            let g = reference_geometry();
            let t = Transition::new(795e-9, 1.8e7).unwrap();
            let a = AtomicEnsemble::new(n, g).unwrap();
            let b = AtomicEnsemble::new(n * factor, g).unwrap();
            prop_assert!(absorption_coefficient(&t, b.effective_density) > absorption_coefficient(&t, a.effective_density));
        }
    }
}
