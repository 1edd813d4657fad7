use num_complex::Complex64;

use super::{accumulated_phase, PairKinematics, PulseSpec};
use crate::ddi::Potential1D;
use crate::error::{positive, Error, Result};
use crate::parallel::{try_map_indices, Execution};

/// Rectangular sampling window in `(z1, z2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridWindow {
    pub z1_start: f64,
    pub z2_start: f64,
    pub spacing: f64,
    pub n1: usize,
    pub n2: usize,
}

impl GridWindow {
    pub fn new(z1_start: f64, z2_start: f64, spacing: f64, n1: usize, n2: usize) -> Result<Self> {
        positive("grid spacing", spacing)?;
        if n1 == 0 || n2 == 0 {
            return Err(Error::InvalidParameter {
                name: "grid size",
                reason: "need at least one point per axis".into(),
            });
        }
        Ok(Self {
            z1_start,
            z2_start,
            spacing,
            n1,
            n2,
        })
    }

    /// Window of `n x n` points centred on `(c1, c2)`, shifted to lie inside `[0, length]`.
    pub fn centered_in_medium(c1: f64, c2: f64, spacing: f64, n: usize, length: f64) -> Result<Self> {
        let extent = spacing * (n.max(1) - 1) as f64;
        let place = |c: f64| (c - 0.5 * extent).clamp(0.0, (length - extent).max(0.0));
        Self::new(place(c1), place(c2), spacing, n, n)
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn z1(&self, i: usize) -> f64 {
        self.z1_start + self.spacing * i as f64
    }

    pub fn z2(&self, j: usize) -> f64 {
        self.z2_start + self.spacing * j as f64
    }

    /// Row-major index to `(i, j)`.
    pub fn coords(&self, k: usize) -> (usize, usize) {
        (k / self.n2, k % self.n2)
    }
}

/// Inputs shared by every grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonSetup {
    pub potential: Potential1D,
    pub kinematics: PairKinematics,
    pub length: f64,
    pub quad_tol: f64,
    pub execution: Execution,
}

impl TwoPhotonSetup {
    pub fn exit_time(&self) -> f64 {
        self.kinematics.exit_time(self.length)
    }
}

/// Two-photon amplitude `F12(z1, z2, t)` sampled on a window.
#[derive(Debug, Clone)]
pub struct TwoPhotonState {
    pub pulse1: PulseSpec,
    pub pulse2: PulseSpec,
    pub time: f64,
    pub grid: GridWindow,
    pub wavefunction: Vec<Complex64>,
    pub phase: Vec<f64>,
    /// False where a coordinate lies outside `[0, L]`.
    pub valid: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub count: usize,
}

impl PhaseStats {
    pub fn spread(&self) -> f64 {
        self.max - self.min
    }
}

impl TwoPhotonState {
    /// `F12(z1, z2, 0) = f1(z1) f2(z2)`.
    pub fn initial(pulse1: PulseSpec, pulse2: PulseSpec, grid: GridWindow, length: f64) -> Self {
        let mut wavefunction = Vec::with_capacity(grid.len());
        let mut valid = Vec::with_capacity(grid.len());
        for k in 0..grid.len() {
            let (i, j) = grid.coords(k);
            let (z1, z2) = (grid.z1(i), grid.z2(j));
            wavefunction.push(pulse1.amplitude(z1) * pulse2.amplitude(z2));
            valid.push(inside(z1, length) && inside(z2, length));
        }
        Self {
            pulse1,
            pulse2,
            time: 0.0,
            grid,
            wavefunction,
            phase: vec![0.0; grid.len()],
            valid,
        }
    }

    /// `(|f1(z1 - v1 t)|, |f2(z2 + v2 t)|)` at grid point `k`.
    pub fn envelope_moduli(&self, k: usize, kin: &PairKinematics) -> (f64, f64) {
        let (i, j) = self.grid.coords(k);
        (
            self.pulse1.amplitude(self.grid.z1(i) - kin.v1 * self.time).norm(),
            self.pulse2.amplitude(self.grid.z2(j) + kin.v2 * self.time).norm(),
        )
    }

    fn stats_where<P: Fn(usize) -> bool>(&self, keep: P) -> Option<PhaseStats> {
        let mut stats = PhaseStats {
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            mean: 0.0,
            count: 0,
        };
        for (k, &phi) in self.phase.iter().enumerate() {
            if self.valid[k] && keep(k) {
                stats.min = stats.min.min(phi);
                stats.max = stats.max.max(phi);
                stats.mean += phi;
                stats.count += 1;
            }
        }
        if stats.count == 0 {
            return None;
        }
        stats.mean /= stats.count as f64;
        Some(stats)
    }

    /// Phase statistics over the central `fraction` of each grid axis.
    pub fn central_stats(&self, fraction: f64) -> Option<PhaseStats> {
        let band = |n: usize, idx: usize| {
            let lo = 0.5 * (1.0 - fraction) * (n - 1) as f64;
            let hi = (n - 1) as f64 - lo;
            (idx as f64) >= lo - 1e-9 && (idx as f64) <= hi + 1e-9
        };
        self.stats_where(|k| {
            let (i, j) = self.grid.coords(k);
            band(self.grid.n1, i) && band(self.grid.n2, j)
        })
    }

    /// Phase statistics where both translated envelopes exceed `threshold` of their peaks.
    pub fn significant_stats(&self, kin: &PairKinematics, threshold: f64) -> Option<PhaseStats> {
        let p1 = self.pulse1.peak_intensity().sqrt();
        let p2 = self.pulse2.peak_intensity().sqrt();
        self.stats_where(|k| {
            let (m1, m2) = self.envelope_moduli(k, kin);
            m1 > threshold * p1 && m2 > threshold * p2
        })
    }

    /// Comma-separated dump `z1,z2,re_f12,im_f12,phi12` of the valid points.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("z1_m,z2_m,re_f12,im_f12,phi12_rad\n");
        for k in 0..self.grid.len() {
            if !self.valid[k] {
                continue;
            }
            let (i, j) = self.grid.coords(k);
            let f = self.wavefunction[k];
            out.push_str(&format!(
                "{:.8e},{:.8e},{:.8e},{:.8e},{:.8e}\n",
                self.grid.z1(i),
                self.grid.z2(j),
                f.re,
                f.im,
                self.phase[k]
            ));
        }
        out
    }
}

fn inside(z: f64, length: f64) -> bool {
    (0.0..=length).contains(&z)
}

/// Amplitude at absolute time `t` from the initial pulses of `state`:
/// `F12 = f1(z1 - v1 t) f2(z2 + v2 t) exp(i phi12(z1, z2, t))`.
pub fn evolve_two_photon(state: &TwoPhotonState, setup: &TwoPhotonSetup, t: f64) -> Result<TwoPhotonState> {
    let grid = state.grid;
    let limit = 0.25 * setup.potential.effective_width;
    if grid.spacing > limit {
        return Err(Error::GridTooCoarse {
            spacing: grid.spacing,
            limit,
        });
    }
    let t_out = setup.exit_time();
    if t > t_out * (1.0 + 1e-12) {
        return Err(Error::PulseLeftMedium { t, t_out });
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "time",
            reason: format!("must be non-negative, got {t}"),
        });
    }
    let kin = setup.kinematics;
    let points: Vec<(Complex64, f64)> = try_map_indices(grid.len(), setup.execution, |k| {
        let (i, j) = grid.coords(k);
        let (z1, z2) = (grid.z1(i), grid.z2(j));
        let phi = accumulated_phase(&setup.potential, &kin, z1, z2, t, setup.quad_tol)?;
        let envelope = state.pulse1.amplitude(z1 - kin.v1 * t) * state.pulse2.amplitude(z2 + kin.v2 * t);
        Ok::<_, Error>((envelope * Complex64::from_polar(1.0, phi), phi))
    })?;
    let (wavefunction, phase) = points.into_iter().unzip();
    Ok(TwoPhotonState {
        pulse1: state.pulse1.clone(),
        pulse2: state.pulse2.clone(),
        time: t,
        grid,
        wavefunction,
        phase,
        valid: state.valid.clone(),
    })
}
