use mmhighway::association::{association_probabilities, pdf_nearest, r_of_b};
use mmhighway::coverage::*;
use mmhighway::interference::laplace_i;
use mmhighway::numerics::QuadratureSpec;
use mmhighway::scenario::{exclusion_radius_n, LinkState, Scenario, ServingLink, Side};

fn scenario(n_o: usize, lambda: f64) -> Scenario {
    Scenario::paper_defaults(n_o, lambda).unwrap()
}

fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

/// Composite Simpson rule over the abscissa t with f_E(r) dr = 2λ e^{-2λt} dt.
fn simpson(lambda: f64, g: impl Fn(f64, f64) -> f64, h: f64) -> f64 {
    let upper = 40.0 / (2.0 * lambda);
    let n = 20_000;
    let step = upper / n as f64;
    let mut sum = 0.0;
    for i in 0..=n {
        let t = i as f64 * step;
        let r = t.hypot(h);
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        sum += w * 2.0 * lambda * (-2.0 * lambda * t).exp() * g(t, r);
    }
    sum * step / 3.0
}

#[test]
fn nakagami_constants() {
    assert_eq!(nakagami_v(1).unwrap(), 1.0);
    assert!((nakagami_v(2).unwrap() - 2f64.sqrt()).abs() < 1e-14);
    assert!((nakagami_v(3).unwrap() - 3.0 * 6f64.powf(-1.0 / 3.0)).abs() < 1e-14);
    assert!((nakagami_v(3).unwrap() - 1.6510).abs() < 1e-4);
    assert!(nakagami_v(0).is_err());
}

#[test]
fn threshold_limits() {
    let sc = scenario(1, 4e-3);
    let a = association_probabilities(&sc).unwrap();
    assert!((p_cl(1e-12, &sc).unwrap() - a.p_l).abs() < 1e-6);
    assert!((p_cn(1e-12, &sc).unwrap() - a.p_n).abs() < 1e-6);
    assert!(p_cl(1e12, &sc).unwrap().abs() < 1e-9);
    assert!(p_cn(1e12, &sc).unwrap().abs() < 1e-9);
    assert!(outage_probability(1e-12, Variant::Full, &sc).unwrap() < 1e-6);
    assert!(outage_probability(1e12, Variant::Full, &sc).unwrap() > 1.0 - 1e-9);
    assert!(p_cl(-1.0, &sc).is_err());
}

#[test]
fn no_nlos_means_no_nlos_coverage() {
    let mut sc = scenario(1, 4e-3);
    sc.layout.lambda_o = vec![0.0];
    assert_eq!(p_cn(db(5.0), &sc).unwrap(), 0.0);
}

#[test]
fn outage_is_monotone_in_threshold() {
    for (n_o, lambda) in [(1, 4e-3), (2, 1e-2)] {
        let sc = scenario(n_o, lambda);
        let mut prev = 0.0;
        for step in -2..=14 {
            let p = outage_probability(db(2.5 * step as f64), Variant::Full, &sc).unwrap();
            assert!((0.0..=1.0).contains(&p));
            assert!(p >= prev - 1e-9, "θ={} dB: {p} < {prev}", 2.5 * step as f64);
            prev = p;
        }
    }
}

#[test]
fn noise_limited_matches_independent_quadrature() {
    // Side lobes so weak that interference is negligible next to noise.
    let mut sc = scenario(1, 4e-3);
    sc.radio.g_tx_side = 1e-12;
    sc.radio.g_rx_side = 1e-12;
    let theta = db(10.0);
    let d = sc.densities();
    let m = sc.radio.m as i32;
    let v = nakagami_v(sc.radio.m).unwrap();
    let h = sc.half_width();
    let oracle = simpson(
        d.lambda_l,
        |_, r| {
            let x = theta * sc.radio.sigma * r.powf(sc.radio.alpha_l) / (sc.radio.serving_gain() * sc.radio.c_l);
            let covered = 1.0 - (1.0 - (-v * x).exp()).powi(m);
            let a_n = exclusion_radius_n(r, &sc.radio, &sc.layout);
            let void = (-2.0 * d.lambda_n * ((a_n - h) * (a_n + h)).sqrt()).exp();
            covered * void
        },
        h,
    );
    let got = p_cl(theta, &sc).unwrap();
    assert!((got - oracle).abs() < 1e-6, "{got} vs {oracle}");
}

#[test]
fn rayleigh_form_for_unit_shape() {
    let mut sc = scenario(1, 1e-2);
    sc.radio.m = 1;
    let theta = db(5.0);
    let d = sc.densities();
    let h = sc.half_width();
    let radio = &sc.radio;
    let oracle = simpson(
        d.lambda_l,
        |_, r| {
            let s = theta * r.powf(radio.alpha_l) / (radio.serving_gain() * radio.c_l);
            let link = ServingLink::at_distance(Side::Upper, LinkState::Los, r.max(h), &sc).unwrap();
            let a_n = exclusion_radius_n(r, radio, &sc.layout);
            let void = (-2.0 * d.lambda_n * ((a_n - h) * (a_n + h)).sqrt()).exp();
            (-s * radio.sigma).exp() * laplace_i(s, &link, &sc).unwrap() * void
        },
        h,
    );
    let got = p_cl(theta, &sc).unwrap();
    assert!((got - oracle).abs() < 1e-6, "{got} vs {oracle}");
    // The nearest-BS density used by the oracle.
    let t: f64 = 50.0;
    let r = r_of_b(t, &sc.layout);
    let dens = pdf_nearest(r, LinkState::Los, &sc).unwrap() * t / r;
    assert!((dens - 2.0 * d.lambda_l * (-2.0 * d.lambda_l * t).exp()).abs() < 1e-15);
}

#[test]
fn breakdown_is_consistent() {
    let sc = scenario(2, 4e-3);
    let b = outage_breakdown(db(10.0), Variant::Full, &sc, &QuadratureSpec::default()).unwrap();
    assert!((b.p_t - (b.p_l - b.p_cl + b.p_n - b.p_cn)).abs() < 1e-12);
    assert!(b.p_cl <= b.p_l && b.p_cn <= b.p_n);
    assert!(b.diagnostics.is_empty(), "{:?}", b.diagnostics);
}

#[test]
fn simplified_variants() {
    let sc = scenario(1, 4e-3);
    let theta = db(10.0);
    let full = outage_probability(theta, Variant::Full, &sc).unwrap();
    let los_only = outage_probability(theta, Variant::SimplifiedLosOnly, &sc).unwrap();
    let median = outage_probability(theta, Variant::MedianDeployment, &sc).unwrap();
    for p in [full, los_only, median] {
        assert!((0.0..=1.0).contains(&p));
    }
    // Dropping NLOS competition and NLOS service keeps every LOS-served user.
    let mut clear = sc.clone();
    clear.layout.lambda_o = vec![0.0];
    let a = outage_probability(theta, Variant::SimplifiedLosOnly, &clear).unwrap();
    let b = outage_probability(theta, Variant::Full, &clear).unwrap();
    assert!((a - b).abs() < 1e-9);
}

#[test]
fn rate_coverage_identity() {
    let sc = scenario(2, 4e-3);
    let w = sc.radio.bandwidth_hz;
    assert_eq!(kappa_to_theta(w, w), 1.0);
    let rc = rate_coverage(w, Variant::Full, &sc).unwrap();
    assert_eq!(rc, 1.0 - outage_probability(1.0, Variant::Full, &sc).unwrap());
    let rc0 = rate_coverage(0.0, Variant::Full, &sc).unwrap();
    assert_eq!(rc0, 1.0 - outage_probability(0.0, Variant::Full, &sc).unwrap());
    assert!(rate_coverage(-1.0, Variant::Full, &sc).is_err());
}

#[test]
fn nakagami_shape_is_bounded() {
    let mut sc = scenario(1, 4e-3);
    sc.radio.m = MAX_NAKAGAMI_M + 1;
    assert!(p_cl(1.0, &sc).is_err());
    let q = OutageQuery {
        theta: -1.0,
        kappa: 0.0,
        variant: Variant::Full,
    };
    assert!(q.validate().is_err());
}
