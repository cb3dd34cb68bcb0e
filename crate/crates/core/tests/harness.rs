use mmhighway::harness::*;
use mmhighway::Error;

fn small_sim(e: &mut Experiment) {
    e.sim.half_length_m = 2_000.0;
    e.sim.enforce_radius_rule = false;
    e.sim.n_trials = 3;
    e.sim.snapshots_per_trial = 30;
    e.sim.warmup_s = 5.0;
}

#[test]
fn defaults_round_trip_through_toml() {
    let e = Experiment::paper_defaults();
    let text = e.to_toml_string().unwrap();
    let back = Experiment::from_toml_str(&text).unwrap();
    assert_eq!(back, e);
    assert_eq!(back.to_toml_string().unwrap(), text);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exp.toml");
    save_config(&e, &path).unwrap();
    assert_eq!(load_config(&path).unwrap(), e);
}

#[test]
fn preset_carries_table_values() {
    let e = Experiment::preset("paper_defaults").unwrap();
    assert_eq!(e.road.lane_width_m, 3.7);
    assert_eq!(e.road.tau_m, 11.2);
    assert_eq!(e.radio.alpha_l, 2.8);
    assert_eq!(e.radio.nakagami_m, 3);
    assert_eq!(e.radio.bandwidth_hz, 100e6);
    assert_eq!(e.radio.p_t_dbm, 27.0);
    assert_eq!(e.radio.g_rx_main_db, 10.0);
    assert_eq!(e.radio.g_tx_side_db, -10.0);
    assert_eq!(e.radio.carrier_hz, 28e9);
    let r = e.radio_config().unwrap();
    assert!((r.psi - 30f64.to_radians()).abs() < 1e-15);
    assert!((r.g_rx_main - 10.0).abs() < 1e-12);
    assert!((r.g_tx_side - 0.1).abs() < 1e-15);
    assert!(Experiment::preset("unknown").is_err());
}

#[test]
fn unknown_key_is_rejected() {
    let text = Experiment::paper_defaults().to_toml_string().unwrap();
    let bad = text.replace("alpha_l = 2.8", "alpha_l = 2.8\nalpha_x = 3.0");
    let err = Experiment::from_toml_str(&bad).unwrap_err().to_string();
    assert!(err.contains("alpha_x"), "{err}");
}

#[test]
fn malformed_numeric_names_key_and_line() {
    let text = Experiment::paper_defaults().to_toml_string().unwrap();
    let bad = text.replace("tau_m = 11.2", "tau_m = \"eleven\"");
    let err = Experiment::from_toml_str(&bad).unwrap_err().to_string();
    assert!(err.contains("tau_m"), "{err}");
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn empty_or_unordered_sweep_is_rejected() {
    let mut e = Experiment::paper_defaults();
    e.sweep.values.clear();
    assert!(matches!(e.validate(), Err(Error::Config { .. })));
    e.sweep.values = vec![1.0, 1.0];
    assert!(e.validate().is_err());
    e.sweep.values = vec![2.0, 1.0];
    assert!(e.validate().is_err());
    let mut e = Experiment::paper_defaults();
    e.sweep.curves.clear();
    assert!(e.validate().is_err());
}

#[test]
fn theta_sweep_gives_monotone_outage() {
    let table = run_experiment(&Experiment::paper_defaults()).unwrap();
    assert_eq!(table.rows.len(), 8);
    assert!(table.failures.is_empty());
    let curve = table.curve("P_T_theory");
    let xs: Vec<f64> = curve.iter().map(|p| p.0).collect();
    assert_eq!(xs, vec![-5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0]);
    assert!(curve.windows(2).all(|w| w[1].1 >= w[0].1));
    assert!(curve.iter().all(|p| (0.0..=1.0).contains(&p.1)));
}

#[test]
fn lambda_sweep_rows_follow_grid_order() {
    let mut e = Experiment::paper_defaults();
    e.sweep.axis = Axis::LambdaBs;
    e.sweep.values = vec![1e-3, 2e-3, 4e-3, 8e-3];
    e.sweep.curves = vec![Curve::PlTheory, Curve::PtTheory];
    let t = run_experiment(&e).unwrap();
    let xs: Vec<f64> = t.rows.iter().map(|r| r.axis_value.unwrap()).collect();
    assert_eq!(xs, vec![1e-3, 1e-3, 2e-3, 2e-3, 4e-3, 4e-3, 8e-3, 8e-3]);
}

#[test]
fn simulation_rows_are_deterministic_and_carry_intervals() {
    let mut e = Experiment::paper_defaults();
    small_sim(&mut e);
    e.sweep.values = vec![0.0, 10.0, 20.0];
    e.sweep.curves = vec![Curve::PtTheory, Curve::PtSim, Curve::Mse];
    let a = run_experiment(&e).unwrap();
    let b = run_experiment(&e).unwrap();
    assert_eq!(a, b);
    let sims: Vec<&ResultRow> = a.rows.iter().filter(|r| r.curve == "P_T_sim").collect();
    assert_eq!(sims.len(), 3);
    for r in sims {
        assert_eq!(r.n, Some(90));
        assert!(r.ci_low.unwrap() <= r.value && r.value <= r.ci_high.unwrap());
    }
    let mse = a.mse();
    assert_eq!(mse.len(), 1);
    assert_eq!(mse[0].0, "MSE:P_T");
    let th: Vec<f64> = a.curve("P_T_theory").iter().map(|p| p.1).collect();
    let sim: Vec<f64> = a.curve("P_T_sim").iter().map(|p| p.1).collect();
    assert_eq!(mse[0].1, mean_squared_difference(&th, &sim));
    assert!(a.gate_failures(1.0).is_empty());
    assert_eq!(a.gate_failures(-1.0).len(), 1);
}

#[test]
fn csv_round_trips_exactly() {
    let mut e = Experiment::paper_defaults();
    small_sim(&mut e);
    e.sweep.values = vec![-5.0, 7.5];
    e.sweep.curves = vec![Curve::PtTheory, Curve::PtSim, Curve::RcTheory, Curve::Mse];
    let table = run_experiment(&e).unwrap();
    let mut buf = Vec::new();
    write_csv(&table, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("axis_value,curve,value,ci_low,ci_high,n\n"));
    let rows = read_csv(buf.as_slice()).unwrap();
    assert_eq!(rows, table.rows);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    emit_csv(&table, &path).unwrap();
    assert_eq!(read_csv(std::fs::File::open(&path).unwrap()).unwrap(), table.rows);
}

#[test]
fn csv_with_wrong_header_is_rejected() {
    assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
}

#[test]
fn mean_squared_difference_basics() {
    assert_eq!(mean_squared_difference(&[1.0, 2.0], &[1.0, 4.0]), 2.0);
    assert!(mean_squared_difference(&[], &[]).is_nan());
    assert!(mean_squared_difference(&[1.0], &[1.0, 2.0]).is_nan());
}
