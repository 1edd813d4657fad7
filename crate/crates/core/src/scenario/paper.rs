use std::f64::consts::PI;

use super::{fmt_sig, run, RunOptions, Scenario};
use crate::error::{Error, Result};

pub const PAPER_PHASE_GATE: &str = include_str!("../../scenarios/paper_phase_gate.toml");
pub const PAPER_QND: &str = include_str!("../../scenarios/paper_qnd.toml");

/// Bundled scenario by name (`paper_phase_gate` or `paper_qnd`).
pub fn paper_scenario(name: &str) -> Result<Scenario> {
    match name {
        "paper_phase_gate" => Scenario::from_toml_str(PAPER_PHASE_GATE),
        "paper_qnd" => Scenario::from_toml_str(PAPER_QND),
        other => Err(Error::Parse(format!("no bundled scenario named `{other}`"))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub quantity: &'static str,
    pub computed: f64,
    pub published: f64,
    pub source: &'static str,
}

impl ComparisonRow {
    pub fn relative_deviation(&self) -> f64 {
        (self.computed - self.published).abs() / self.published.abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PaperComparison {
    pub rows: Vec<ComparisonRow>,
    pub gate_failures: usize,
    pub qnd_failures: usize,
}

impl PaperComparison {
    pub fn row(&self, quantity: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.quantity == quantity)
    }

    pub fn to_table(&self) -> String {
        let mut out = String::from("quantity,computed,published,relative_deviation,source\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.quantity,
                fmt_sig(r.computed),
                fmt_sig(r.published),
                fmt_sig(r.relative_deviation()),
                r.source
            ));
        }
        out.push_str(&format!(
            "# violated constraint entries: phase gate {}, qnd {}\n",
            self.gate_failures, self.qnd_failures
        ));
        out
    }
}

/// Runs both bundled scenarios and lines the results up against the
/// published operating point.
pub fn reproduce_paper(options: &RunOptions) -> Result<PaperComparison> {
    let gate = run(&paper_scenario("paper_phase_gate")?, options)?;
    let qnd = run(&paper_scenario("paper_qnd")?, options)?;
    let get = |out: &super::RunOutput, name: &str| {
        out.quantity(name)
            .ok_or_else(|| Error::Parse(format!("scenario output lacks `{name}`")))
    };
    let mut rows = Vec::new();
    let mut row = |quantity, computed, published, source| {
        rows.push(ComparisonRow {
            quantity,
            computed,
            published,
            source,
        })
    };
    row("effective_density_cm3", get(&gate, "effective_density")?, 2e11, "medium::effective_density");
    row("optical_depth_1", get(&gate, "optical_depth_1")?, 600.0, "medium::absorption_coefficient");
    row("optical_depth_2", get(&gate, "optical_depth_2")?, 580.0, "medium::absorption_coefficient");
    row("group_velocity_1", get(&gate, "group_velocity_1")?, 100.0, "medium::group_velocity");
    row("group_velocity_2", get(&gate, "group_velocity_2")?, 100.0, "medium::group_velocity");
    row("eit_bandwidth_1", get(&gate, "eit_bandwidth_1")?, 1.2e5, "medium::eit_bandwidth");
    row("phi12_gate", get(&gate, "phi12_closed_form")?, PI, "propagation::uniform_phase_pair");
    row("phi12_qnd", get(&qnd, "phi12_closed_form")?, 0.7, "propagation::uniform_phase_pair");
    row("qnd_feasible_n_le_2", get(&qnd, "qnd_feasible")?, 1.0, "qnd::distinguishability");
    Ok(PaperComparison {
        rows,
        gate_failures: gate.constraint_failures,
        qnd_failures: qnd.constraint_failures,
    })
}
