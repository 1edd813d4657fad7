use num_complex::Complex64;

use super::{uniform_phase_pair, PairKinematics, PulseContent, PulseSpec};
use crate::ddi::{reduced_potential, Potential1D};
use crate::error::{Error, Result};
use crate::quadrature::Integrator;

/// Interaction kernel used for the probe phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseKernel {
    /// Full double integral over the exact 1D potential.
    ExactQuadrature,
    /// `Delta12(z) -> -2 C12 / (hbar w^2) delta(z)`.
    DeltaApproximation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeSetup {
    pub cross_potential: Potential1D,
    pub kinematics: PairKinematics,
    pub length: f64,
    pub quad_tol: f64,
}

const MAX_RELATIVE_VARIATION: f64 = 0.1;

/// Output probe amplitude ratio `<Psi_1(L, L/v)> / alpha_1(0)` for a
/// coherent probe and a Fock signal.
///
/// The exact kernel rotates the `(z', t')` square to `x = z' - v t'`,
/// `u = z' + v t'`, giving
///
/// ```text
/// -i (sin^4 theta n / (2 v L)) int_{-L}^{L} dx Delta12(x) int_{|x|}^{2L-|x|} |f2(u)|^2 du
/// ```
pub fn probe_phase(probe: &PulseSpec, signal: &PulseSpec, setup: &ProbeSetup, kernel: PhaseKernel) -> Result<Complex64> {
    if !probe.content.is_coherent() {
        return Err(Error::InvalidParameter {
            name: "probe content",
            reason: "probe must be a coherent pulse".into(),
        });
    }
    let n = match signal.content {
        PulseContent::Fock(n) => n,
        PulseContent::Coherent(_) => {
            return Err(Error::InvalidParameter {
                name: "signal content",
                reason: "signal must be a Fock pulse".into(),
            })
        }
    };
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let pot = &setup.cross_potential;
    let kin = &setup.kinematics;
    let phase = match kernel {
        PhaseKernel::DeltaApproximation => n as f64 * uniform_phase_pair(&pot.coupling, pot.effective_width, kin),
        PhaseKernel::ExactQuadrature => {
            let variation = signal.max_variation_over(pot.effective_width);
            if variation >= MAX_RELATIVE_VARIATION {
                return Err(Error::EnvelopeTooSharp { variation });
            }
            exact_exponent(signal, setup)? * n as f64
        }
    };
    Ok(Complex64::from_polar(1.0, phase))
}

/// Phase per signal photon from the exact kernel.
fn exact_exponent(signal: &PulseSpec, setup: &ProbeSetup) -> Result<f64> {
    let pot = &setup.cross_potential;
    let l = setup.length;
    let v = setup.kinematics.mean_velocity();
    let scale = pot.length_scale();
    let inner_q = Integrator::new(setup.quad_tol * 0.1);
    let (sa, sb) = signal.support();
    let occupied = |a: f64| -> Result<f64> {
        let lo = a.max(sa);
        let hi = (2.0 * l - a).min(sb);
        if hi <= lo {
            return Ok(0.0);
        }
        let mid = signal.center.clamp(lo, hi);
        Ok(inner_q
            .integrate_with_breaks(|u| signal.intensity(u), &[lo, mid, hi])?
            .value)
    };
    // Outer integrand in zeta; errors from the inner integral are carried out.
    let failure = std::cell::Cell::new(None);
    let outer = |zeta: f64| match occupied((zeta * scale).abs()) {
        Ok(i) => reduced_potential(zeta) * i,
        Err(e) => {
            failure.set(Some(e));
            0.0
        }
    };
    let zmax = l / scale;
    let mut breaks = vec![-zmax];
    breaks.extend([-1.0, 0.0, 1.0].into_iter().filter(|b: &f64| b.abs() < zmax));
    breaks.push(zmax);
    let est = Integrator::new(setup.quad_tol).integrate_with_breaks(outer, &breaks)?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let integral = est.value * pot.reduced_unit() * scale;
    Ok(-setup.kinematics.sin4_theta() * integral / (2.0 * v * l))
}
