//! Solved polariton dynamics for the Fock-Fock and coherent-Fock sectors.
//!
//! Both pulses keep their shapes; all interaction lives in a phase picked up
//! along the relative trajectory `r(t') = z1 - z2 - (v1 + v2)(t - t')`.

mod probe;
mod pulse;
mod two_photon;

pub use probe::{probe_phase, PhaseKernel, ProbeSetup};
pub use pulse::{Envelope, EnvelopeFn, PulseContent, PulseSpec, SUPPORT_LEAKAGE};
pub use two_photon::{evolve_two_photon, GridWindow, PhaseStats, TwoPhotonSetup, TwoPhotonState};

use crate::constants::HBAR;
use crate::ddi::{reduced_potential, DdiCoupling, Potential1D};
use crate::error::{Error, Result};
use crate::medium::ChannelPair;
use crate::quadrature::{trapezoid, Integrator};

pub const DEFAULT_QUAD_TOL: f64 = 1e-8;

/// Velocities and mixing angles of the two counter-propagating channels.
///
/// With equal channels this is the single-theta case; otherwise `sin^4 theta`
/// becomes `sin^2 theta_1 sin^2 theta_2` and `2v` becomes `v1 + v2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairKinematics {
    pub v1: f64,
    pub v2: f64,
    pub sin2_theta1: f64,
    pub sin2_theta2: f64,
}

impl PairKinematics {
    pub fn symmetric(v: f64, sin2_theta: f64) -> Self {
        Self {
            v1: v,
            v2: v,
            sin2_theta1: sin2_theta,
            sin2_theta2: sin2_theta,
        }
    }

    pub fn from_pair(pair: &ChannelPair) -> Self {
        Self {
            v1: pair.first.group_velocity,
            v2: pair.second.group_velocity,
            sin2_theta1: pair.first.sin2_theta,
            sin2_theta2: pair.second.sin2_theta,
        }
    }

    pub fn relative_speed(&self) -> f64 {
        self.v1 + self.v2
    }

    /// `(v1 + v2) / 2`, the `v` of the single-theta formulas.
    pub fn mean_velocity(&self) -> f64 {
        0.5 * (self.v1 + self.v2)
    }

    pub fn sin4_theta(&self) -> f64 {
        self.sin2_theta1 * self.sin2_theta2
    }

    /// Time for a complete pass through a medium of length `l`.
    pub fn exit_time(&self, l: f64) -> f64 {
        l / self.mean_velocity()
    }
}

fn closed_form(c: f64, sin4: f64, w: f64, v: f64) -> f64 {
    c * sin4 / (HBAR * w * w * v)
}

/// Complete-pass conditional phase `C sin^4 theta / (hbar w^2 v)`.
pub fn uniform_phase(coupling: &DdiCoupling, w: f64, v: f64, sin2_theta: f64) -> f64 {
    closed_form(coupling.coefficient, sin2_theta * sin2_theta, w, v)
}

/// [`uniform_phase`] for possibly unequal channels.
pub fn uniform_phase_pair(coupling: &DdiCoupling, w: f64, kin: &PairKinematics) -> f64 {
    closed_form(coupling.coefficient, kin.sin4_theta(), w, kin.mean_velocity())
}

/// Self-phase of a coherent probe, `2 C11 sin^4 theta |alpha(0)|^2 / (hbar w^2 v)`.
pub fn self_phase_estimate(alpha_sq: f64, coupling_self: &DdiCoupling, w: f64, v: f64, sin2_theta: f64) -> f64 {
    2.0 * alpha_sq * uniform_phase(coupling_self, w, v, sin2_theta)
}

/// Which route produced a phase value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    ExactQuadrature,
    DeltaApproximation,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShiftResult {
    pub phi: f64,
    /// max - min over the sampled final coordinates (0 for single values).
    pub uniformity_spread: f64,
    pub kernel: KernelKind,
}

impl PhaseShiftResult {
    pub fn closed_form(coupling: &DdiCoupling, w: f64, kin: &PairKinematics) -> Self {
        Self {
            phi: uniform_phase_pair(coupling, w, kin),
            uniformity_spread: 0.0,
            kernel: KernelKind::ClosedForm,
        }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 1e-12 && tol < 1e-3 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "quadrature tolerance",
            reason: format!("must lie in (1e-12, 1e-3), got {tol}"),
        })
    }
}

/// Straight-line relative motion `r(t') = r0 + u t'` of the two pulses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeTrajectory {
    pub initial_separation: f64,
    pub relative_speed: f64,
}

impl RelativeTrajectory {
    /// Trajectory ending at separation `z1 - z2` at time `t`.
    pub fn ending_at(z1: f64, z2: f64, t: f64, kin: &PairKinematics) -> Self {
        let u = kin.relative_speed();
        Self {
            initial_separation: z1 - z2 - u * t,
            relative_speed: u,
        }
    }

    fn zeta_limits(&self, pot: &Potential1D, t_a: f64, t_b: f64) -> (f64, f64) {
        let r = |t: f64| self.initial_separation + self.relative_speed * t;
        (pot.zeta(r(t_a)), pot.zeta(r(t_b)))
    }

    /// `-sin^4 theta int_{t_a}^{t_b} Delta(r(t')) dt'`, integrated adaptively
    /// in the spatial variable.
    pub fn phase_over(&self, pot: &Potential1D, sin4: f64, t_a: f64, t_b: f64, tol: f64) -> Result<f64> {
        check_tol(tol)?;
        if t_b == t_a {
            return Ok(0.0);
        }
        let (za, zb) = self.zeta_limits(pot, t_a, t_b);
        let (lo, hi) = if za <= zb { (za, zb) } else { (zb, za) };
        let mut breaks = vec![lo];
        breaks.extend([-1.0, 0.0, 1.0].into_iter().filter(|&b| b > lo && b < hi));
        breaks.push(hi);
        let est = Integrator::new(tol).integrate_with_breaks(reduced_potential, &breaks)?;
        let signed = if za <= zb { est.value } else { -est.value };
        Ok(-sin4 * self.scale(pot) * signed)
    }

    /// Same integral with a fixed-panel trapezoid rule (the cusp at zero
    /// separation is kept on a node).
    pub fn phase_over_trapezoid(&self, pot: &Potential1D, sin4: f64, t_a: f64, t_b: f64, panels: usize) -> f64 {
        let (za, zb) = self.zeta_limits(pot, t_a, t_b);
        let integral = if za < 0.0 && zb > 0.0 {
            let left = ((panels as f64 * -za / (zb - za)).round() as usize).clamp(1, panels - 1);
            trapezoid(reduced_potential, za, 0.0, left) + trapezoid(reduced_potential, 0.0, zb, panels - left)
        } else {
            trapezoid(reduced_potential, za, zb, panels)
        };
        -sin4 * self.scale(pot) * integral
    }

    /// Closed form through the primitive of the reduced potential.
    pub fn phase_over_analytic(&self, pot: &Potential1D, sin4: f64, t_a: f64, t_b: f64) -> f64 {
        let r = |t: f64| self.initial_separation + self.relative_speed * t;
        -sin4 * pot.integral_between(r(t_a), r(t_b)) / self.relative_speed
    }

    // dt' = dr / u and dr = sqrt(2) w d zeta
    fn scale(&self, pot: &Potential1D) -> f64 {
        pot.reduced_unit() * pot.length_scale() / self.relative_speed
    }
}

/// Phase accumulated by the two-photon amplitude at `(z1, z2, t)`.
pub fn accumulated_phase(pot: &Potential1D, kin: &PairKinematics, z1: f64, z2: f64, t: f64, tol: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "time",
            reason: format!("must be non-negative, got {t}"),
        });
    }
    RelativeTrajectory::ending_at(z1, z2, t, kin).phase_over(pot, kin.sin4_theta(), 0.0, t, tol)
}
