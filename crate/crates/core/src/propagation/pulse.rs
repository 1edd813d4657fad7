use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{positive, Error, Result};
use crate::quadrature::Integrator;

/// Leakage threshold for [`PulseSpec::fits_window`].
pub const SUPPORT_LEAKAGE: f64 = 1e-6;
const NORMALIZATION_TOL: f64 = 1e-6;

/// Photon content of a pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseContent {
    Fock(u32),
    /// Coherent state with peak amplitude `alpha(0)`.
    Coherent(Complex64),
}

impl PulseContent {
    /// `n` for Fock, `|alpha|^2` for coherent content.
    pub fn mean_photons(&self) -> f64 {
        match *self {
            PulseContent::Fock(n) => n as f64,
            PulseContent::Coherent(a) => a.norm_sqr(),
        }
    }

    pub fn is_coherent(&self) -> bool {
        matches!(self, PulseContent::Coherent(_))
    }
}

pub type EnvelopeFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
pub enum Envelope {
    /// `A exp(-(z - z0)^2 / (2 sigma^2))`.
    Gaussian { sigma: f64, amplitude: f64 },
    /// User envelope, assumed to vanish outside `support`.
    Custom { f: EnvelopeFn, support: (f64, f64) },
}

impl fmt::Debug for Envelope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Envelope::Gaussian { sigma, amplitude } => f
                .debug_struct("Gaussian")
                .field("sigma", sigma)
                .field("amplitude", amplitude)
                .finish(),
            Envelope::Custom { support, .. } => f.debug_struct("Custom").field("support", support).finish(),
        }
    }
}

/// Longitudinal polariton pulse inside the medium at `t = 0`.
///
/// Normalized so that `(1/L) int |f(z)|^2 dz = 1`, checked by quadrature at
/// construction.
#[derive(Debug, Clone)]
pub struct PulseSpec {
    pub envelope: Envelope,
    pub duration: f64,
    pub center: f64,
    pub content: PulseContent,
    pub medium_length: f64,
}

impl PulseSpec {
    /// Gaussian with `sigma = T v / 2`.
    pub fn gaussian(center: f64, duration: f64, velocity: f64, content: PulseContent, medium_length: f64) -> Result<Self> {
        positive("pulse duration", duration)?;
        positive("group velocity", velocity)?;
        positive("medium length", medium_length)?;
        let sigma = 0.5 * duration * velocity;
        let amplitude = (medium_length / (PI.sqrt() * sigma)).sqrt();
        let pulse = Self {
            envelope: Envelope::Gaussian { sigma, amplitude },
            duration,
            center,
            content,
            medium_length,
        };
        pulse.check_normalization()?;
        Ok(pulse)
    }

    pub fn custom(
        f: EnvelopeFn,
        support: (f64, f64),
        duration: f64,
        center: f64,
        content: PulseContent,
        medium_length: f64,
    ) -> Result<Self> {
        positive("pulse duration", duration)?;
        positive("medium length", medium_length)?;
        if !(support.1 > support.0) {
            return Err(Error::InvalidParameter {
                name: "envelope support",
                reason: format!("empty interval {support:?}"),
            });
        }
        let pulse = Self {
            envelope: Envelope::Custom { f, support },
            duration,
            center,
            content,
            medium_length,
        };
        pulse.check_normalization()?;
        Ok(pulse)
    }

    pub fn with_content(&self, content: PulseContent) -> Self {
        Self {
            content,
            ..self.clone()
        }
    }

    fn check_normalization(&self) -> Result<()> {
        let norm = self.norm()?;
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { value: norm });
        }
        Ok(())
    }

    /// Interval outside which the envelope is treated as zero.
    pub fn support(&self) -> (f64, f64) {
        match &self.envelope {
            Envelope::Gaussian { sigma, .. } => (self.center - 12.0 * sigma, self.center + 12.0 * sigma),
            Envelope::Custom { support, .. } => *support,
        }
    }

    /// `f(z)` at `t = 0`.
    pub fn amplitude(&self, z: f64) -> Complex64 {
        match &self.envelope {
            Envelope::Gaussian { sigma, amplitude } => {
                let u = (z - self.center) / sigma;
                Complex64::new(amplitude * (-0.5 * u * u).exp(), 0.0)
            }
            Envelope::Custom { f, support } => {
                if z < support.0 || z > support.1 {
                    Complex64::new(0.0, 0.0)
                } else {
                    f(z)
                }
            }
        }
    }

    pub fn intensity(&self, z: f64) -> f64 {
        self.amplitude(z).norm_sqr()
    }

    /// `(1/L) int |f|^2 dz` by adaptive quadrature.
    pub fn norm(&self) -> Result<f64> {
        let (a, b) = self.support();
        let mid = match self.envelope {
            Envelope::Gaussian { .. } => self.center,
            Envelope::Custom { .. } => 0.5 * (a + b),
        };
        let est = Integrator::new(1e-10).integrate_with_breaks(|z| self.intensity(z), &[a, mid, b])?;
        Ok(est.value / self.medium_length)
    }

    /// `max_z |f(z)|^2`.
    pub fn peak_intensity(&self) -> f64 {
        match &self.envelope {
            Envelope::Gaussian { amplitude, .. } => amplitude * amplitude,
            Envelope::Custom { .. } => {
                let (a, b) = self.support();
                let n = 20_000;
                (0..=n)
                    .map(|i| self.intensity(a + (b - a) * i as f64 / n as f64))
                    .fold(0.0, f64::max)
            }
        }
    }

    /// `max_z <I(z)> = n_mean max|f|^2`.
    pub fn max_expected_intensity(&self) -> f64 {
        self.content.mean_photons() * self.peak_intensity()
    }

    /// `max(|f(a)|, |f(b)|) / max|f|`.
    pub fn window_leakage(&self, a: f64, b: f64) -> f64 {
        let peak = self.peak_intensity().sqrt();
        self.amplitude(a).norm().max(self.amplitude(b).norm()) / peak
    }

    pub fn fits_window(&self, a: f64, b: f64) -> bool {
        self.window_leakage(a, b) < SUPPORT_LEAKAGE
    }

    /// Largest `|f(z + w) - f(z)|` relative to the peak amplitude.
    pub fn max_variation_over(&self, w: f64) -> f64 {
        let peak = self.peak_intensity().sqrt();
        let (a, b) = self.support();
        let n = (((b - a) / w).ceil() as usize).clamp(1000, 200_000);
        let step = (b - a) / n as f64;
        (0..=n)
            .map(|i| {
                let z = a + step * i as f64;
                (self.amplitude(z + w) - self.amplitude(z)).norm()
            })
            .fold(0.0, f64::max)
            / peak
    }
}
