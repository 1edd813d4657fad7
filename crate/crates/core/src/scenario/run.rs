use super::{fmt_sig, Experiment, Model, Scenario, SweepTarget};
use crate::constants::density_to_per_cm3;
use crate::constraints::{check_all, cross_potential, photon_number_bounds, ConstraintReport, PhaseTable};
use crate::ddi::{curve_fwhm, potential_curve, reduced_potential};
use crate::error::{Error, Result};
use crate::medium::ChannelPair;
use crate::parallel::{try_map_indices, Execution};
use crate::propagation::{
    accumulated_phase, evolve_two_photon, probe_phase, self_phase_estimate, uniform_phase_pair, GridWindow,
    PairKinematics, PhaseKernel, ProbeSetup, PulseContent, TwoPhotonSetup, TwoPhotonState,
};
use crate::qnd::{distinguishability, required_probe_strength, Distinguishability};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOptions {
    /// Overrides `numerics.quad_tol` when set.
    pub quad_tol: Option<f64>,
    pub execution: Execution,
}

/// One computed number with its unit and the operation that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantity {
    pub name: String,
    pub value: f64,
    pub unit: &'static str,
    pub source: &'static str,
}

/// A titled block of comma-separated text.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub title: String,
    pub body: String,
}

/// A file-sized artifact (grid or curve) written next to the tables.
#[derive(Debug, Clone, PartialEq)]
pub struct Dump {
    pub file_name: String,
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: ConstraintReport,
    pub quantities: Vec<Quantity>,
    pub sections: Vec<Section>,
    pub dumps: Vec<Dump>,
    pub qnd: Option<Distinguishability>,
    /// Violated entries, summed over sweep points for sweeps.
    pub constraint_failures: usize,
}

impl RunOutput {
    pub fn quantity(&self, name: &str) -> Option<f64> {
        self.quantities.iter().find(|q| q.name == name).map(|q| q.value)
    }

    /// Report first, then the quantity table, then any extra sections.
    pub fn render(&self) -> String {
        let mut out = String::from("# constraints\n");
        out.push_str(&self.report.to_csv());
        out.push_str("\n# quantities\nname,value,unit,source\n");
        for q in &self.quantities {
            out.push_str(&format!("{},{},{},{}\n", q.name, fmt_sig(q.value), q.unit, q.source));
        }
        for s in &self.sections {
            out.push_str(&format!("\n# {}\n{}", s.title, s.body));
        }
        out
    }

    /// `ConstraintFailure` when any entry was violated.
    pub fn strict_check(&self) -> Result<()> {
        if self.constraint_failures > 0 {
            Err(Error::ConstraintFailure {
                failed: self.constraint_failures,
            })
        } else {
            Ok(())
        }
    }
}

struct Quantities(Vec<Quantity>);

impl Quantities {
    fn push(&mut self, name: impl Into<String>, value: f64, unit: &'static str, source: &'static str) {
        self.0.push(Quantity {
            name: name.into(),
            value,
            unit,
            source,
        });
    }
}

pub fn run(scenario: &Scenario, options: &RunOptions) -> Result<RunOutput> {
    let mut model = scenario.model()?;
    if let Some(tol) = options.quad_tol {
        model.quad_tol = tol;
    }
    let report = check_all(&model.pair, [&model.pulses[0], &model.pulses[1]], &model.couplings, &model.config);
    let mut q = Quantities(Vec::new());
    medium_quantities(&mut q, &model.pair);
    let mut out = RunOutput {
        constraint_failures: report.failed(),
        report,
        quantities: Vec::new(),
        sections: Vec::new(),
        dumps: Vec::new(),
        qnd: None,
    };
    match &scenario.file.experiment {
        Experiment::PhaseGate { grid_points } => phase_gate(&model, *grid_points, options.execution, &mut q, &mut out)?,
        Experiment::Qnd { n_max } => qnd(&model, *n_max, &mut q, &mut out)?,
        Experiment::PotentialCurve {
            zeta_min,
            zeta_max,
            points,
        } => curve(&model, *zeta_min, *zeta_max, *points, &mut q, &mut out)?,
        Experiment::Sweep {
            parameter,
            start,
            stop,
            steps,
            target,
            n_max,
        } => sweep(scenario, options, parameter, *start, *stop, *steps, *target, *n_max, &mut out)?,
    }
    out.quantities = q.0;
    Ok(out)
}

fn medium_quantities(q: &mut Quantities, pair: &ChannelPair) {
    q.push(
        "effective_density",
        density_to_per_cm3(pair.ensemble.effective_density),
        "cm^-3",
        "medium::effective_density",
    );
    for ch in [&pair.first, &pair.second] {
        let l = ch.label.index();
        q.push(format!("optical_depth_{l}"), ch.optical_depth, "1", "medium::absorption_coefficient");
        q.push(format!("group_velocity_{l}"), ch.group_velocity, "m/s", "medium::group_velocity");
        q.push(format!("sin2_theta_{l}"), ch.sin2_theta, "1", "medium::mixing_angle_sin2");
        q.push(format!("eit_bandwidth_{l}"), ch.eit_bandwidth, "rad/s", "medium::eit_bandwidth");
    }
}

fn phase_quantities(q: &mut Quantities, model: &Model) -> f64 {
    let pair = &model.pair;
    let kin = PairKinematics::from_pair(pair);
    let w = pair.geometry().effective_width;
    let phases = PhaseTable::new(pair, &model.couplings);
    q.push("exit_time", kin.exit_time(pair.geometry().length), "s", "propagation::PairKinematics::exit_time");
    q.push("coupling_c12", model.couplings.c12.coefficient, "J m^3", "ddi::DdiCoupling::between");
    let phi12 = uniform_phase_pair(&model.couplings.c12, w, &kin);
    q.push("phi12_closed_form", phi12, "rad", "propagation::uniform_phase_pair");
    q.push("phi11", phases.phi11, "rad", "constraints::PhaseTable");
    q.push("phi22", phases.phi22, "rad", "constraints::PhaseTable");
    for (l, b) in photon_number_bounds(pair, &model.couplings).iter().enumerate() {
        let n = b.max_n.map_or(f64::INFINITY, |n| n as f64);
        q.push(format!("max_photon_number_{}", l + 1), n, "1", "constraints::photon_number_bounds");
    }
    phi12
}

fn phase_gate(model: &Model, grid_points: Option<usize>, exec: Execution, q: &mut Quantities, out: &mut RunOutput) -> Result<()> {
    phase_quantities(q, model);
    let pair = &model.pair;
    let kin = PairKinematics::from_pair(pair);
    let length = pair.geometry().length;
    let t_out = kin.exit_time(length);
    let pot = cross_potential(pair, &model.couplings);
    // pulse centres after one complete pass
    let (z1, z2) = (model.pulses[0].center + kin.v1 * t_out, model.pulses[1].center - kin.v2 * t_out);
    let numeric = accumulated_phase(&pot, &kin, z1, z2, t_out, model.quad_tol)?;
    q.push("phi12_numeric", numeric, "rad", "propagation::accumulated_phase");
    if let Some(n) = grid_points {
        let spacing = 0.25 * pot.effective_width;
        let grid = GridWindow::centered_in_medium(z1, z2, spacing, n, length)?;
        let initial = TwoPhotonState::initial(model.pulses[0].clone(), model.pulses[1].clone(), grid, length);
        let setup = TwoPhotonSetup {
            potential: pot,
            kinematics: kin,
            length,
            quad_tol: model.quad_tol,
            execution: exec,
        };
        let state = evolve_two_photon(&initial, &setup, t_out)?;
        if let Some(stats) = state.central_stats(0.5) {
            q.push(
                "phi12_central_relative_spread",
                stats.spread() / stats.mean.abs(),
                "1",
                "propagation::TwoPhotonState::central_stats",
            );
        }
        out.dumps.push(super::Dump {
            file_name: "phase_surface.csv".into(),
            contents: state.to_csv(),
        });
    }
    Ok(())
}

fn qnd(model: &Model, n_max: u32, q: &mut Quantities, out: &mut RunOutput) -> Result<()> {
    let phi12 = phase_quantities(q, model);
    let [probe, signal] = &model.pulses;
    let alpha_sq = match probe.content {
        PulseContent::Coherent(a) => a.norm_sqr(),
        PulseContent::Fock(_) => {
            return Err(Error::InvalidParameter {
                name: "pulse1",
                reason: "the QND probe must be coherent".into(),
            })
        }
    };
    let pair = &model.pair;
    let kin = PairKinematics::from_pair(pair);
    let w = pair.geometry().effective_width;
    let setup = ProbeSetup {
        cross_potential: cross_potential(pair, &model.couplings),
        kinematics: kin,
        length: pair.geometry().length,
        quad_tol: model.quad_tol,
    };
    // per-photon phase from a one-photon signal of the same shape
    let one = signal.with_content(PulseContent::Fock(1));
    for (kernel, name, source) in [
        (PhaseKernel::DeltaApproximation, "probe_phase_delta", "propagation::probe_phase(DeltaApproximation)"),
        (PhaseKernel::ExactQuadrature, "probe_phase_exact", "propagation::probe_phase(ExactQuadrature)"),
    ] {
        q.push(name, probe_phase(probe, &one, &setup, kernel)?.arg(), "rad", source);
    }
    let self_phase = self_phase_estimate(alpha_sq, &model.couplings.c11, w, pair.first.group_velocity, pair.first.sin2_theta);
    q.push("probe_self_phase", self_phase, "rad", "propagation::self_phase_estimate");
    q.push("probe_self_to_cross_ratio", self_phase / phi12, "1", "propagation::self_phase_estimate");
    let verdict = distinguishability(alpha_sq, phi12, n_max)?;
    q.push("qnd_feasible", f64::from(u8::from(verdict.feasible)), "bool", "qnd::distinguishability");
    match required_probe_strength(phi12, n_max) {
        Ok(a) => q.push("required_probe_strength", a, "photons", "qnd::required_probe_strength"),
        Err(Error::PhaseWrapInfeasible { .. }) => {
            q.push("required_probe_strength", f64::NAN, "photons", "qnd::required_probe_strength")
        }
        Err(e) => return Err(e),
    }
    out.sections.push(super::Section {
        title: format!("homodyne verdicts (|alpha|^2 = {}, phi12 = {})", fmt_sig(alpha_sq), fmt_sig(phi12)),
        body: verdict.to_table(),
    });
    out.qnd = Some(verdict);
    Ok(())
}

fn curve(model: &Model, zeta_min: f64, zeta_max: f64, points: usize, q: &mut Quantities, out: &mut RunOutput) -> Result<()> {
    let c = potential_curve(zeta_min, zeta_max, points)?;
    let pot = cross_potential(&model.pair, &model.couplings);
    q.push("reduced_potential_at_zero", reduced_potential(0.0), "reduced", "ddi::reduced_potential");
    q.push("reduced_unit_c12", pot.reduced_unit(), "rad/s", "ddi::Potential1D::reduced_unit");
    q.push("length_scale", pot.length_scale(), "m", "ddi::Potential1D::length_scale");
    if let Some(fwhm) = curve_fwhm(&c) {
        q.push("curve_fwhm", fwhm, "reduced", "ddi::curve_fwhm");
    }
    out.dumps.push(super::Dump {
        file_name: "potential_curve.txt".into(),
        contents: curve_text(&c),
    });
    Ok(())
}

/// Two columns `zeta delta`, reduced units.
pub(crate) fn curve_text(curve: &[(f64, f64)]) -> String {
    let mut s = String::new();
    for &(z, d) in curve {
        s.push_str(&format!("{} {}\n", fmt_sig(z), fmt_sig(d)));
    }
    s
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    scenario: &Scenario,
    options: &RunOptions,
    parameter: &str,
    start: f64,
    stop: f64,
    steps: usize,
    target: SweepTarget,
    n_max: Option<u32>,
    out: &mut RunOutput,
) -> Result<()> {
    if steps == 0 {
        return Err(Error::Parse("sweep.steps must be at least 1".into()));
    }
    if parameter.starts_with("experiment") {
        return Err(Error::Parse("the sweep parameter cannot be part of the experiment".into()));
    }
    let mut experiment = toml::Table::new();
    match target {
        SweepTarget::PhaseGate => {
            experiment.insert("kind".into(), "phase_gate".into());
        }
        SweepTarget::Qnd => {
            let n = n_max.ok_or_else(|| Error::Parse("a qnd sweep needs n_max".into()))?;
            experiment.insert("kind".into(), "qnd".into());
            experiment.insert("n_max".into(), toml::Value::Integer(n.into()));
        }
    }
    let base = scenario.with_experiment(experiment)?;
    let value = |k: usize| {
        if steps == 1 {
            start
        } else {
            start + (stop - start) * k as f64 / (steps - 1) as f64
        }
    };
    let inner = RunOptions {
        execution: Execution::Sequential,
        ..*options
    };
    let results = try_map_indices(steps, options.execution, |k| run(&base.with_value(parameter, value(k))?, &inner))?;
    let mut body = format!("index,{parameter},phi12_closed_form,constraint_failures,qnd_feasible,source\n");
    let mut failures = 0;
    for (k, r) in results.iter().enumerate() {
        failures += r.constraint_failures;
        let feasible = r.qnd.as_ref().map_or("-".to_string(), |d| d.feasible.to_string());
        body.push_str(&format!(
            "{k},{},{},{},{feasible},scenario::sweep\n",
            fmt_sig(value(k)),
            fmt_sig(r.quantity("phi12_closed_form").unwrap_or(f64::NAN)),
            r.constraint_failures
        ));
    }
    // the sweep points decide strict-mode failure, not the file's own values
    out.constraint_failures = failures;
    out.sections.push(super::Section {
        title: format!("sweep over {parameter}"),
        body,
    });
    Ok(())
}
