//! Scenario files and the experiment runner.
//!
//! A scenario is a TOML document whose keys carry their units
//! (`waveguide.length_cm`, `rydberg1.dipole_ea0`, ...). Unknown keys are
//! rejected.

mod paper;
mod run;

pub use paper::{paper_scenario, reproduce_paper, ComparisonRow, PaperComparison, PAPER_PHASE_GATE, PAPER_QND};
pub use run::{run, Dump, Quantity, RunOptions, RunOutput, Section};

use num_complex::Complex64;
use serde::Deserialize;

use crate::constants::{dipole_from_ea0, length_from_cm, length_from_nm, length_from_um, time_from_us};
use crate::constraints::{ConstraintConfig, Couplings};
use crate::ddi::RydbergState;
use crate::error::{Error, Result};
use crate::medium::{AtomicEnsemble, ChannelLabel, ChannelPair, EitChannel, Transition, WaveguideGeometry};
use crate::propagation::{PulseContent, PulseSpec, DEFAULT_QUAD_TOL};

/// Fixed numeric format for every emitted number: nine significant digits.
pub fn fmt_sig(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.8e}")
    } else {
        format!("{x}")
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct WaveguideSection {
    pub length_cm: f64,
    pub field_width_um: f64,
    pub atom_width_um: f64,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    pub atom_count: f64,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ChannelSection {
    pub wavelength_nm: f64,
    pub gamma_ge_per_s: f64,
    pub control_rabi_rad_s: f64,
    pub gamma_gd_per_s: Option<f64>,
}

/// Either `dipole_ea0` or the quantum numbers `n`, `q`, `m`.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RydbergSection {
    pub dipole_ea0: Option<f64>,
    pub n: Option<i64>,
    pub q: Option<i64>,
    pub m: Option<i64>,
}

/// Gaussian pulse; exactly one of `photons` (Fock) and
/// `coherent_mean_photons` (real coherent amplitude) is given.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PulseSection {
    pub duration_us: f64,
    pub center_cm: f64,
    pub photons: Option<u32>,
    pub coherent_mean_photons: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SweepTarget {
    PhaseGate,
    Qnd,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Experiment {
    PhaseGate {
        /// Side of the square phase-surface window dumped at the exit time.
        grid_points: Option<usize>,
    },
    Qnd {
        n_max: u32,
    },
    PotentialCurve {
        zeta_min: f64,
        zeta_max: f64,
        points: usize,
    },
    Sweep {
        /// Dotted key path, e.g. `rydberg2.dipole_ea0`.
        parameter: String,
        start: f64,
        stop: f64,
        steps: usize,
        target: SweepTarget,
        n_max: Option<u32>,
    },
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct NumericsSection {
    pub quad_tol: f64,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSection {
    pub strict_threshold: Option<f64>,
    pub plain_threshold: Option<f64>,
    pub coherent_sigmas: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub waveguide: WaveguideSection,
    pub ensemble: EnsembleSection,
    pub channel1: ChannelSection,
    pub channel2: ChannelSection,
    pub rydberg1: RydbergSection,
    pub rydberg2: RydbergSection,
    pub pulse1: PulseSection,
    pub pulse2: PulseSection,
    pub experiment: Experiment,
    pub numerics: Option<NumericsSection>,
    pub constraints: Option<ConstraintSection>,
}

/// A parsed scenario together with its source table (kept for sweeps).
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub file: ScenarioFile,
    raw: toml::Table,
}

/// Physics objects built from a scenario.
#[derive(Debug, Clone)]
pub struct Model {
    pub pair: ChannelPair,
    pub couplings: Couplings,
    pub pulses: [PulseSpec; 2],
    pub config: ConstraintConfig,
    pub quad_tol: f64,
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Parse(e.to_string()))?;
        Self::from_table(raw)
    }

    pub fn from_table(raw: toml::Table) -> Result<Self> {
        let file = ScenarioFile::deserialize(raw.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(Self { file, raw })
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Quadrature tolerance from `numerics.quad_tol`, or the library default.
    pub fn quad_tol(&self) -> f64 {
        self.file.numerics.as_ref().map_or(DEFAULT_QUAD_TOL, |n| n.quad_tol)
    }

    pub fn constraint_config(&self) -> ConstraintConfig {
        let d = ConstraintConfig::default();
        let c = self.file.constraints.clone().unwrap_or_default();
        ConstraintConfig {
            strict_threshold: c.strict_threshold.unwrap_or(d.strict_threshold),
            plain_threshold: c.plain_threshold.unwrap_or(d.plain_threshold),
            coherent_sigmas: c.coherent_sigmas.unwrap_or(d.coherent_sigmas),
        }
    }

    /// Copy with the value at dotted `path` replaced (used by sweeps).
    pub fn with_value(&self, path: &str, value: f64) -> Result<Self> {
        let mut raw = self.raw.clone();
        let mut keys = path.split('.').peekable();
        let mut table = &mut raw;
        while let Some(key) = keys.next() {
            if keys.peek().is_none() {
                let slot = table
                    .get_mut(key)
                    .ok_or_else(|| Error::Parse(format!("sweep parameter `{path}` not present in scenario")))?;
                *slot = match slot {
                    toml::Value::Integer(_) if value.fract() == 0.0 => toml::Value::Integer(value as i64),
                    toml::Value::Integer(_) | toml::Value::Float(_) => toml::Value::Float(value),
                    _ => return Err(Error::Parse(format!("sweep parameter `{path}` is not numeric"))),
                };
            } else {
                table = table
                    .get_mut(key)
                    .and_then(toml::Value::as_table_mut)
                    .ok_or_else(|| Error::Parse(format!("sweep parameter `{path}` not present in scenario")))?;
            }
        }
        Self::from_table(raw)
    }

    /// Copy with the experiment replaced.
    pub fn with_experiment(&self, experiment: toml::Table) -> Result<Self> {
        let mut raw = self.raw.clone();
        raw.insert("experiment".into(), toml::Value::Table(experiment));
        Self::from_table(raw)
    }

    pub fn model(&self) -> Result<Model> {
        let f = &self.file;
        let geometry = WaveguideGeometry::new(
            length_from_cm(f.waveguide.length_cm)?,
            length_from_um(f.waveguide.field_width_um)?,
            length_from_um(f.waveguide.atom_width_um)?,
        )?;
        let ensemble = AtomicEnsemble::new(f.ensemble.atom_count, geometry)?;
        let channel = |label, c: &ChannelSection, r: &RydbergSection| -> Result<EitChannel> {
            let transition = Transition::new(length_from_nm(c.wavelength_nm)?, c.gamma_ge_per_s)?;
            EitChannel::new(label, transition, c.control_rabi_rad_s, rydberg(r)?, c.gamma_gd_per_s, &ensemble)
        };
        let first = channel(ChannelLabel::First, &f.channel1, &f.rydberg1)?;
        let second = channel(ChannelLabel::Second, &f.channel2, &f.rydberg2)?;
        let pair = ChannelPair::new(ensemble, first, second);
        let length = geometry.length;
        let pulse = |p: &PulseSection, ch: &EitChannel| {
            PulseSpec::gaussian(
                // centres may sit outside the medium, so no sign check here
                p.center_cm * 1e-2,
                time_from_us(p.duration_us)?,
                ch.group_velocity,
                content(p)?,
                length,
            )
        };
        let pulses = [pulse(&f.pulse1, &first)?, pulse(&f.pulse2, &second)?];
        let quad_tol = self.quad_tol();
        if !(quad_tol > 1e-12 && quad_tol < 1e-3) {
            return Err(Error::InvalidParameter {
                name: "numerics.quad_tol",
                reason: format!("must lie in (1e-12, 1e-3), got {quad_tol}"),
            });
        }
        Ok(Model {
            couplings: Couplings::from_pair(&pair),
            pair,
            pulses,
            config: self.constraint_config(),
            quad_tol,
        })
    }
}

fn rydberg(r: &RydbergSection) -> Result<RydbergState> {
    match (r.dipole_ea0, r.n, r.q, r.m) {
        (Some(d), None, None, None) => RydbergState::with_dipole(dipole_from_ea0(d)?),
        (None, Some(n), Some(q), Some(m)) => RydbergState::from_quantum_numbers(n, q, m),
        _ => Err(Error::Parse(
            "rydberg section needs either dipole_ea0 or all of n, q, m".into(),
        )),
    }
}

fn content(p: &PulseSection) -> Result<PulseContent> {
    match (p.photons, p.coherent_mean_photons) {
        (Some(n), None) => Ok(PulseContent::Fock(n)),
        (None, Some(mean)) => {
            crate::error::non_negative("coherent_mean_photons", mean)?;
            Ok(PulseContent::Coherent(Complex64::new(mean.sqrt(), 0.0)))
        }
        _ => Err(Error::Parse(
            "pulse section needs exactly one of photons, coherent_mean_photons".into(),
        )),
    }
}
