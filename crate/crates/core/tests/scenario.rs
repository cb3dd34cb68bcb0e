use mmhighway::scenario::*;
use mmhighway::Error;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn decibel_conversions() {
    assert_eq!(db_to_linear(0.0), 1.0);
    assert!(close(db_to_linear(10.0), 10.0, 1e-15));
    assert!(close(dbm_to_watts(27.0), 0.501_187_233_6, 1e-10));
    assert!(close(watts_to_dbm(dbm_to_watts(-13.5)), -13.5, 1e-13));
    assert!(close(linear_to_db(db_to_linear(7.25)), 7.25, 1e-13));
}

#[test]
fn free_space_intercepts() {
    let (c_l, c_n) = derive_intercepts(28e9).unwrap();
    assert_eq!(c_l, c_n);
    assert!((linear_to_db(c_l) + 61.3909).abs() < 1e-3);
    let (unit, _) = derive_intercepts(SPEED_OF_LIGHT / (4.0 * std::f64::consts::PI)).unwrap();
    assert!(close(unit, 1.0, 1e-14));
    let (half, _) = derive_intercepts(56e9).unwrap();
    assert!(close(
        linear_to_db(c_l) - linear_to_db(half),
        20.0 * 2f64.log10(),
        1e-12
    ));
    assert!(matches!(derive_intercepts(0.0), Err(Error::Domain { .. })));
}

#[test]
fn thermal_noise() {
    let kt = BOLTZMANN * REFERENCE_TEMPERATURE * 100e6;
    assert!((watts_to_dbm(kt) + 93.97).abs() < 0.01);
    assert!(close(
        derive_noise(100e6, REFERENCE_TEMPERATURE, kt).unwrap(),
        1.0,
        1e-14
    ));
    let sigma = derive_noise(100e6, REFERENCE_TEMPERATURE, dbm_to_watts(27.0)).unwrap();
    assert!(close(linear_to_db(sigma), watts_to_dbm(kt) - 27.0, 1e-12));
    assert!(derive_noise(-1.0, 290.0, 1.0).is_err());
}

#[test]
fn los_probability_values() {
    let mut layout = RoadLayout::paper_defaults(2).unwrap();
    assert_eq!(layout.lambda_o, vec![1e-2, 2e-2]);
    assert!(close(los_probability(&layout), (-0.336f64).exp(), 1e-15));
    assert!((los_probability(&layout) - 0.7146).abs() < 1e-4);
    layout.lambda_o = vec![0.0, 0.0];
    assert_eq!(los_probability(&layout), 1.0);
    layout.lambda_o = vec![1e-2];
    layout.tau = 1e6;
    assert!(los_probability(&layout) < 1e-300);
}

#[test]
fn path_loss_values() {
    let layout = RoadLayout::paper_defaults(1).unwrap();
    let radio = RadioConfig::paper_defaults();
    let v = path_loss(100.0, LinkState::Los, &radio, &layout).unwrap();
    assert!(close(v, radio.c_l * 100f64.powf(-2.8), 1e-14));
    let nlos = path_loss(100.0, LinkState::Nlos, &radio, &layout).unwrap();
    assert!(nlos < v);
    assert!(matches!(
        path_loss(7.0, LinkState::Los, &radio, &layout),
        Err(Error::Domain { .. })
    ));

    let mut unit = radio.clone();
    unit.c_l = 50.0;
    let r = unit.c_l.powf(1.0 / unit.alpha_l);
    let mut wide = layout.clone();
    wide.lane_width = r;
    assert!(close(
        path_loss(
            r,
            LinkState::Los,
            &unit,
            &RoadLayout {
                lane_width: r / 2.0,
                ..wide
            }
        )
        .unwrap(),
        1.0,
        1e-13
    ));
}

#[test]
fn exclusion_radii() {
    let layout = RoadLayout::paper_defaults(1).unwrap();
    let mut radio = RadioConfig::paper_defaults();
    radio.c_n = radio.c_l;
    assert_eq!(exclusion_radius_n(10.0, &radio, &layout), 7.4);
    let a_l = exclusion_radius_l(10.0, &radio, &layout);
    assert!(close(a_l, 10f64.powf(4.0 / 2.8), 1e-13));
    assert!((a_l - 26.83).abs() < 0.01);
    radio.alpha_n = radio.alpha_l;
    let h = layout.half_width();
    assert!(close(exclusion_radius_l(h, &radio, &layout), h, 1e-14));
    assert!(close(exclusion_radius_n(h, &radio, &layout), h, 1e-14));
}

#[test]
fn defaults_validate() {
    let sc = Scenario::paper_defaults(1, 4e-3).unwrap();
    assert_eq!(sc.half_width(), 7.4);
    assert_eq!(sc.radio.m, 3);
    assert!(close(sc.radio.serving_gain(), 1000.0, 1e-12));
    let d = sc.densities();
    assert!(close(d.p_l + d.p_n, 1.0, 1e-15));
    assert!(close(d.lambda_l + d.lambda_n, 4e-3, 1e-15));
    assert!(close(
        Scenario::paper_defaults(2, 4e-3).unwrap().half_width(),
        11.1,
        1e-14
    ));
}

#[test]
fn invalid_parameters_are_rejected() {
    let mut dep = DeploymentConfig::new(4e-3);
    dep.q = 0.3;
    assert!(matches!(dep.validate(), Err(Error::Config { .. })));
    assert!(DeploymentConfig::new(-1.0).validate().is_err());

    let layout = RoadLayout::paper_defaults(1).unwrap();
    let mut radio = RadioConfig::paper_defaults();
    radio.alpha_l = 1.0;
    assert!(radio.validate(&layout).is_err());

    let mut radio = RadioConfig::paper_defaults();
    radio.c_l = 1e6;
    let err = radio.validate(&layout).unwrap_err();
    assert!(err.to_string().contains("c_l"), "{err}");

    let mut bad = layout.clone();
    bad.lambda_o = vec![];
    assert!(bad.validate().is_err());
    let mut bad = layout;
    bad.blockage_width = 10.0;
    assert!(bad.validate().is_err());
}

#[test]
fn sides_and_states() {
    assert_eq!(Side::Upper.opposite(), Side::Bottom);
    assert_eq!(Side::Bottom.sign(), -1.0);
    assert_eq!(LinkState::Los.other(), LinkState::Nlos);
}
