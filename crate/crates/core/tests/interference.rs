use mmhighway::interference::*;
use mmhighway::numerics::{integrate_finite, integrate_semi_infinite, QuadratureSpec};
use mmhighway::scenario::{LinkState, Scenario, ServingLink, Side};

fn scenario() -> Scenario {
    Scenario::paper_defaults(1, 4e-3).unwrap()
}

fn link_at_abscissa(x1: f64, los: LinkState, sc: &Scenario) -> ServingLink {
    ServingLink::at_distance(Side::Upper, los, x1.hypot(sc.half_width()), sc).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1e-300)
}

#[test]
fn beam_intercepts_by_hand() {
    let sc = scenario();
    let link = link_at_abscissa(20.0, LinkState::Los, &sc);
    let g = beam_geometry(&link, &sc);
    let eps = 7.4f64.atan2(20.0);
    assert!((eps.to_degrees() - 20.31).abs() < 0.01);
    let psi = 30f64.to_radians();
    assert!(close(g.k, 7.4 / (eps - psi / 2.0).tan(), 1e-12));
    // Hand value from the rounded angle is 79.6.
    assert!((g.k - 79.6).abs() < 0.15, "K={}", g.k);
    assert!((g.j - 10.44).abs() < 0.01, "J={}", g.j);
    assert!(g.j < link.x1 && link.x1 < g.k);
}

#[test]
fn narrow_beam_collapses_on_serving_ray() {
    let mut sc = scenario();
    sc.radio.psi = 1e-9;
    let link = link_at_abscissa(35.0, LinkState::Los, &sc);
    let g = beam_geometry(&link, &sc);
    assert!(close(g.j, 35.0, 1e-6) && close(g.k, 35.0, 1e-6));
}

#[test]
fn close_serving_bs_flips_outer_edge() {
    let sc = scenario();
    let link = link_at_abscissa(1.0, LinkState::Los, &sc);
    let g = beam_geometry(&link, &sc);
    assert!(g.j < 0.0);
    assert!(g.k.is_finite());
    let wide = {
        let mut s = scenario();
        s.radio.psi = 120f64.to_radians();
        s
    };
    let g = beam_geometry(&link_at_abscissa(10.0, LinkState::Los, &wide), &wide);
    assert!(g.k.is_infinite());
}

#[test]
fn segments_for_serving_side_los() {
    let sc = scenario();
    let r = &sc.radio;
    let link = link_at_abscissa(20.0, LinkState::Los, &sc);
    let g = beam_geometry(&link, &sc);
    let segs = gain_segments(&link, Side::Upper, Side::Upper, LinkState::Los, &g, r);
    let main = r.g_tx_side * r.g_rx_main;
    let side = r.g_tx_side * r.g_rx_side;
    let want = [
        GainSegment {
            a: link.x1,
            b: g.k,
            delta: main,
        },
        GainSegment {
            a: g.k,
            b: f64::INFINITY,
            delta: side,
        },
        GainSegment {
            a: link.x1,
            b: f64::INFINITY,
            delta: side,
        },
    ];
    assert_eq!(segs, want);

    let other = gain_segments(&link, Side::Upper, Side::Bottom, LinkState::Los, &g, r);
    let seg = GainSegment {
        a: link.x1,
        b: f64::INFINITY,
        delta: side,
    };
    assert_eq!(other, vec![seg, seg]);
}

#[test]
fn segments_for_nlos_interferers_start_at_exclusion() {
    let sc = scenario();
    let r = &sc.radio;
    let link = link_at_abscissa(1.0, LinkState::Los, &sc);
    let g = beam_geometry(&link, &sc);
    assert!(g.j <= 0.0);
    let main = r.g_tx_side * r.g_rx_main;
    let side = r.g_tx_side * r.g_rx_side;
    let inf = f64::INFINITY;
    let expected: Vec<GainSegment> = [(0.0, g.k, main), (g.k, inf, side), (0.0, -g.j, main), (-g.j, inf, side)]
        .into_iter()
        .filter_map(|(a, b, delta): (f64, f64, f64)| {
            let a = a.max(g.x_n);
            (a < b).then_some(GainSegment { a, b, delta })
        })
        .collect();
    let nlos = gain_segments(&link, Side::Upper, Side::Upper, LinkState::Nlos, &g, r);
    assert_eq!(nlos, expected);
    assert!(nlos.iter().all(|seg| seg.a >= g.x_n));
}

#[test]
fn segment_terms_match_direct_integral() {
    let spec = QuadratureSpec::default().with_tolerances(1e-16, 1e-12);
    for &(k, a, b, alpha) in &[
        (1e-3, 7.0, 50.0, 2.8),
        (0.5, 7.0, f64::INFINITY, 2.8),
        (30.0, 10.0, 400.0, 4.0),
        (3e4, 12.0, f64::INFINITY, 4.0),
        (2.0, 0.0, 5.0, 5.76),
        (1e8, 100.0, 1e4, 2.8),
    ] {
        let f = |t: f64| k / (k + t.powf(alpha));
        let oracle = if b.is_finite() {
            integrate_finite(f, a, b, &spec).unwrap()
        } else {
            integrate_semi_infinite(f, a, &spec).unwrap()
        };
        let (theta, lam) = segment_terms(k, a, b, alpha, 1.0).unwrap();
        assert!(
            close(theta + lam, oracle, 1e-8),
            "k={k} a={a} b={b}: {} vs {oracle}",
            theta + lam
        );
    }
}

#[test]
fn segment_transform_limits() {
    let sc = scenario();
    let seg = GainSegment {
        a: 10.0,
        b: 200.0,
        delta: 1.0,
    };
    assert_eq!(laplace_segment(0.0, &seg, LinkState::Los, &sc).unwrap(), 1.0);
    let mut empty = sc.clone();
    empty.layout.lambda_o = vec![0.0];
    assert_eq!(laplace_segment(1e9, &seg, LinkState::Nlos, &empty).unwrap(), 1.0);
    assert!(laplace_segment(-1.0, &seg, LinkState::Los, &sc).is_err());
    assert!(segment_terms(1.0, 1.0, 2.0, 0.5, 1.0).is_err());
}

#[test]
fn transforms_are_in_unit_interval_and_decreasing() {
    let sc = scenario();
    for x1 in [0.5, 20.0, 300.0] {
        for los in [LinkState::Los, LinkState::Nlos] {
            let link = link_at_abscissa(x1, los, &sc);
            for side in [Side::Upper, Side::Bottom] {
                for state in [LinkState::Los, LinkState::Nlos] {
                    assert_eq!(laplace_ise(0.0, side, state, &link, &sc).unwrap(), 1.0);
                    let mut prev = 1.0;
                    for e in -2..14 {
                        let s = 10f64.powi(e);
                        let v = laplace_ise(s, side, state, &link, &sc).unwrap();
                        assert!(v > 0.0 && v <= prev, "x1={x1} s={s}: {v} > {prev}");
                        prev = v;
                    }
                }
            }
            assert_eq!(laplace_i(0.0, &link, &sc).unwrap(), 1.0);
        }
    }
}

#[test]
fn product_over_families() {
    let sc = scenario();
    let link = link_at_abscissa(40.0, LinkState::Los, &sc);
    let s = 3e9;
    let mut prod = 1.0;
    for side in [Side::Upper, Side::Bottom] {
        for state in [LinkState::Los, LinkState::Nlos] {
            prod *= laplace_ise(s, side, state, &link, &sc).unwrap();
        }
    }
    assert!(close(laplace_i(s, &link, &sc).unwrap(), prod, 1e-12));
}

#[test]
fn no_obstacles_leaves_only_los_families() {
    let mut sc = scenario();
    sc.layout.lambda_o = vec![0.0];
    let link = link_at_abscissa(40.0, LinkState::Los, &sc);
    let s = 3e9;
    let los_only = InterferenceProfile::build(&link, &sc, &[Side::Upper, Side::Bottom], &[LinkState::Los]);
    assert!(close(
        laplace_i(s, &link, &sc).unwrap(),
        los_only.laplace(s, &sc).unwrap(),
        1e-14
    ));
    for side in [Side::Upper, Side::Bottom] {
        assert_eq!(laplace_ise(s, side, LinkState::Nlos, &link, &sc).unwrap(), 1.0);
    }
}

#[test]
fn los_served_serving_side_expansion() {
    // Square root of the three serving-hypothesis factors times the full
    // factor of the opposite hypothesis.
    let sc = scenario();
    let r = &sc.radio;
    let link = link_at_abscissa(20.0, LinkState::Los, &sc);
    let g = beam_geometry(&link, &sc);
    assert!(g.j > 0.0);
    let s = 1e9;
    let main = r.g_tx_side * r.g_rx_main;
    let side = r.g_tx_side * r.g_rx_side;
    let f = |a: f64, b: f64, d: f64| laplace_segment(s, &GainSegment { a, b, delta: d }, LinkState::Los, &sc).unwrap();
    let expected = (f(link.x1, g.k, main) * f(g.k, f64::INFINITY, side) * f(link.x1, f64::INFINITY, side)).sqrt()
        * f(link.x1, f64::INFINITY, side);
    let got = laplace_ise(s, Side::Upper, LinkState::Los, &link, &sc).unwrap();
    assert!(close(got, expected, 1e-12), "{got} vs {expected}");
}
