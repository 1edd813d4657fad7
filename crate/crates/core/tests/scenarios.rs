use rydeit::constraints::{check_all, photon_number_bounds, CheckId, Status};
use rydeit::parallel::Execution;
use rydeit::scenario::{paper_scenario, run, RunOptions, Scenario, PAPER_PHASE_GATE, PAPER_QND};
use rydeit::Error;

fn opts(execution: Execution) -> RunOptions {
    RunOptions {
        quad_tol: None,
        execution,
    }
}

#[test]
fn report_always_has_seven_checks() {
    for name in ["paper_phase_gate", "paper_qnd"] {
        let out = run(&paper_scenario(name).unwrap(), &RunOptions::default()).unwrap();
        for id in CheckId::ALL {
            assert!(out.report.entries_for(id).count() > 0, "{name}: {id:?}");
        }
        let coherence: Vec<_> = out.report.entries_for(CheckId::CoherenceTime).collect();
        assert!(coherence.iter().all(|e| e.status == Status::Indeterminate && e.missing == Some("gamma_gd")));
    }
}

#[test]
fn gamma_gd_enables_coherence_check() {
    let text = PAPER_PHASE_GATE.replace("control_rabi_rad_s = 7.35e6", "control_rabi_rad_s = 7.35e6\ngamma_gd_per_s = 1.0e2");
    let out = run(&Scenario::from_toml_str(&text).unwrap(), &RunOptions::default()).unwrap();
    let e = out.report.entry("coherence_time[1]").unwrap();
    assert!((e.lhs - 1e2 * 0.01 / 99.98304).abs() < 1e-6);
    assert_eq!(e.status, Status::Satisfied);
    let e = out.report.entry("coherence_time[2]").unwrap();
    assert_eq!(e.status, Status::Indeterminate);
}

#[test]
fn zero_couplings_are_trivially_valid() {
    let text = PAPER_QND
        .replace("dipole_ea0 = 50.0", "dipole_ea0 = 0.0")
        .replace("dipole_ea0 = 450.0", "dipole_ea0 = 0.0");
    let model = Scenario::from_toml_str(&text).unwrap().model().unwrap();
    let report = check_all(&model.pair, [&model.pulses[0], &model.pulses[1]], &model.couplings, &model.config);
    for id in [CheckId::EitWindow, CheckId::PhaseBound, CheckId::QndSelfInteraction, CheckId::PhotonBound] {
        for e in report.entries_for(id) {
            assert_eq!(e.margin, f64::INFINITY, "{}", e.name);
            assert_eq!(e.status, Status::Satisfied);
        }
    }
    assert!(photon_number_bounds(&model.pair, &model.couplings).iter().all(|b| b.max_n.is_none()));
}

#[test]
fn margins_scale_with_coupling() {
    let model = paper_scenario("paper_qnd").unwrap().model().unwrap();
    let pulses = [&model.pulses[0], &model.pulses[1]];
    let base = check_all(&model.pair, pulses, &model.couplings, &model.config);
    let scaled = check_all(&model.pair, pulses, &model.couplings.scaled(3.0), &model.config);
    for (a, b) in base.entries_for(CheckId::EitWindow).zip(scaled.entries_for(CheckId::EitWindow)) {
        assert!((b.lhs - 3.0 * a.lhs).abs() <= 1e-12 * b.lhs, "{}", a.name);
    }
    for (a, b) in base.entries_for(CheckId::PhotonBound).zip(scaled.entries_for(CheckId::PhotonBound)) {
        if a.rhs.is_finite() {
            // the self bound carries a "+1", so only the cross part scales exactly
            assert!(b.rhs <= a.rhs && b.rhs >= a.rhs / 3.0 - 1e-12, "{}", a.name);
        }
    }
    let cross = photon_number_bounds(&model.pair, &model.couplings);
    let cross3 = photon_number_bounds(&model.pair, &model.couplings.scaled(3.0));
    for (a, b) in cross.iter().zip(&cross3) {
        assert!((b.cross - a.cross / 3.0).abs() <= 1e-12 * a.cross);
    }
    assert_eq!(base.to_csv(), check_all(&model.pair, pulses, &model.couplings, &model.config).to_csv());
}

#[test]
fn outputs_are_deterministic_across_execution() {
    let text = PAPER_PHASE_GATE.replace("kind = \"phase_gate\"", "kind = \"phase_gate\"\ngrid_points = 9");
    let s = Scenario::from_toml_str(&text).unwrap();
    let a = run(&s, &opts(Execution::Sequential)).unwrap();
    let b = run(&s, &opts(Execution::Parallel)).unwrap();
    assert_eq!(a.render(), b.render());
    assert_eq!(a.dumps, b.dumps);
    assert_eq!(a.dumps[0].file_name, "phase_surface.csv");
    assert_eq!(a.dumps[0].contents.lines().count(), 1 + 81);
    let spread = a.quantity("phi12_central_relative_spread").unwrap();
    assert!(spread < 1e-3, "{spread}");
}

#[test]
fn sweep_is_ordered_and_counts_failures() {
    let text = PAPER_QND.replace(
        "kind = \"qnd\"\nn_max = 2",
        "kind = \"sweep\"\nparameter = \"rydberg2.dipole_ea0\"\nstart = 450.0\nstop = 4500.0\nsteps = 4\ntarget = \"qnd\"\nn_max = 2",
    );
    let s = Scenario::from_toml_str(&text).unwrap();
    let par = run(&s, &opts(Execution::Parallel)).unwrap();
    let seq = run(&s, &opts(Execution::Sequential)).unwrap();
    assert_eq!(par.render(), seq.render());
    let body = &par.sections[0].body;
    let rows: Vec<&str> = body.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    for (k, r) in rows.iter().enumerate() {
        assert!(r.starts_with(&format!("{k},")));
    }
    // phase grows linearly with the signal dipole
    let phi = |r: &str| r.split(',').nth(2).unwrap().parse::<f64>().unwrap();
    assert!((phi(rows[3]) / phi(rows[0]) - 10.0).abs() < 1e-9);
    assert!(rows[0].contains(",0,true,"));
    assert!(par.constraint_failures > 0);
    assert!(matches!(par.strict_check(), Err(Error::ConstraintFailure { .. })));
}

#[test]
fn tolerance_override_is_validated() {
    let s = paper_scenario("paper_phase_gate").unwrap();
    let r = run(
        &s,
        &RunOptions {
            quad_tol: Some(1e-6),
            execution: Execution::Sequential,
        },
    )
    .unwrap();
    assert!((r.quantity("phi12_numeric").unwrap() / r.quantity("phi12_closed_form").unwrap() - 1.0).abs() < 1e-3);
    let bad = RunOptions {
        quad_tol: Some(0.5),
        execution: Execution::Sequential,
    };
    assert!(run(&s, &bad).is_err());
}

#[test]
fn potential_curve_experiment() {
    let text = PAPER_QND.replace(
        "kind = \"qnd\"\nn_max = 2",
        "kind = \"potential_curve\"\nzeta_min = -3.0\nzeta_max = 3.0\npoints = 601",
    );
    let out = run(&Scenario::from_toml_str(&text).unwrap(), &RunOptions::default()).unwrap();
    assert_eq!(out.dumps[0].contents.lines().count(), 601);
    assert!((out.quantity("curve_fwhm").unwrap() - 0.65).abs() < 0.02);
}
