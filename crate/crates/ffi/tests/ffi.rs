use std::ffi::{CStr, CString};
use std::ptr;

use mmhighway_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0u8; 256];
    let n = unsafe { mh_last_error(buf.as_mut_ptr().cast(), buf.len()) };
    assert!(n > 0);
    CStr::from_bytes_until_nul(&buf).unwrap().to_str().unwrap().to_string()
}

fn scenario(n_o: u32, lambda: f64) -> *mut MhScenario {
    let mut sc = ptr::null_mut();
    assert_eq!(unsafe { mh_scenario_new_default(n_o, lambda, &mut sc) }, MhStatus::Ok);
    assert!(!sc.is_null());
    sc
}

#[test]
fn association_probabilities_sum_to_one() {
    let sc = scenario(1, 4e-3);
    let (mut p_l, mut p_n) = (0.0, 0.0);
    assert_eq!(unsafe { mh_association(sc, &mut p_l, &mut p_n) }, MhStatus::Ok);
    assert!(p_l > 0.9 && p_l < 1.0, "{p_l}");
    assert!((p_l + p_n - 1.0).abs() < 1e-12);
    unsafe { mh_scenario_free(sc) };
}

#[test]
fn outage_and_rate_coverage_agree_with_core() {
    let sc = scenario(2, 4e-3);
    let core = mmhighway::scenario::Scenario::paper_defaults(2, 4e-3).unwrap();
    let mut p = 0.0;
    assert_eq!(
        unsafe { mh_outage_probability(sc, 10.0, MhVariant::Full, &mut p) },
        MhStatus::Ok
    );
    let expect = mmhighway::coverage::outage_probability(10.0, mmhighway::coverage::Variant::Full, &core).unwrap();
    assert_eq!(p, expect);

    let mut rc = 0.0;
    assert_eq!(
        unsafe { mh_rate_coverage(sc, 5e8, MhVariant::Full, &mut rc) },
        MhStatus::Ok
    );
    assert!((0.0..=1.0).contains(&rc));
    unsafe { mh_scenario_free(sc) };
}

#[test]
fn setters_change_results_and_reject_bad_values() {
    let sc = scenario(1, 4e-3);
    let mut before = 0.0;
    unsafe { mh_outage_probability(sc, 10.0, MhVariant::Full, &mut before) };
    assert_eq!(unsafe { mh_scenario_set_lambda_bs(sc, 1e-2) }, MhStatus::Ok);
    let mut after = 0.0;
    unsafe { mh_outage_probability(sc, 10.0, MhVariant::Full, &mut after) };
    assert!(after < before, "{after} vs {before}");

    assert_eq!(unsafe { mh_scenario_set_beamwidth_deg(sc, -5.0) }, MhStatus::Config);
    assert!(!last_error().is_empty());
    // A rejected edit leaves the handle unchanged.
    let mut again = 0.0;
    unsafe { mh_outage_probability(sc, 10.0, MhVariant::Full, &mut again) };
    assert_eq!(again, after);

    assert_eq!(unsafe { mh_scenario_set_g_tx_main_db(sc, 10.0) }, MhStatus::Ok);
    assert_eq!(unsafe { mh_scenario_set_alpha_n(sc, 4.0) }, MhStatus::Ok);
    unsafe { mh_scenario_free(sc) };
}

#[test]
fn null_pointers_are_reported() {
    let mut p = 0.0;
    let st = unsafe { mh_outage_probability(ptr::null(), 0.0, MhVariant::Full, &mut p) };
    assert_eq!(st, MhStatus::NullPointer);
    assert!(last_error().contains("scenario"));

    let sc = scenario(1, 4e-3);
    let st = unsafe { mh_association(sc, ptr::null_mut(), &mut p) };
    assert_eq!(st, MhStatus::NullPointer);
    assert!(last_error().contains("p_l"));
    unsafe { mh_scenario_free(sc) };
    unsafe { mh_scenario_free(ptr::null_mut()) };
}

#[test]
fn invalid_defaults_fail() {
    let mut sc = ptr::null_mut();
    assert_eq!(unsafe { mh_scenario_new_default(1, -1.0, &mut sc) }, MhStatus::Config);
    assert!(sc.is_null());
}

#[test]
fn toml_round_trip_and_config_errors() {
    let text = mmhighway::harness::Experiment::paper_defaults()
        .to_toml_string()
        .unwrap();
    let c = CString::new(text).unwrap();
    let mut sc = ptr::null_mut();
    assert_eq!(unsafe { mh_scenario_from_toml(c.as_ptr(), &mut sc) }, MhStatus::Ok);
    let mut p = 0.0;
    assert_eq!(
        unsafe { mh_outage_probability(sc, 0.0, MhVariant::Full, &mut p) },
        MhStatus::Ok
    );
    unsafe { mh_scenario_free(sc) };

    let bad = CString::new("[road]\nbogus = 1\n").unwrap();
    let mut sc = ptr::null_mut();
    assert_eq!(
        unsafe { mh_scenario_from_toml(bad.as_ptr(), &mut sc) },
        MhStatus::Config
    );
    assert!(sc.is_null());
}

#[test]
fn simulation_is_seeded() {
    let sc = scenario(1, 4e-3);
    let mut a = MhEstimate::default();
    let mut b = MhEstimate::default();
    assert_eq!(unsafe { mh_simulate_outage(sc, 10.0, 4, 7, &mut a) }, MhStatus::Ok);
    assert_eq!(unsafe { mh_simulate_outage(sc, 10.0, 4, 7, &mut b) }, MhStatus::Ok);
    assert_eq!(a, b);
    assert!(a.n > 0 && a.ci_low <= a.value && a.value <= a.ci_high);
    assert_eq!(unsafe { mh_simulate_outage(sc, 10.0, 0, 7, &mut a) }, MhStatus::Config);
    unsafe { mh_scenario_free(sc) };
}

#[test]
fn version_and_header_are_exported() {
    let v = unsafe { CStr::from_ptr(mh_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/mmhighway.h")).unwrap();
    for name in [
        "mh_last_error",
        "mh_scenario_new_default",
        "mh_scenario_from_toml",
        "mh_scenario_free",
        "mh_association",
        "mh_outage_probability",
        "mh_rate_coverage",
        "mh_simulate_outage",
        "MH_STATUS_NULL_POINTER",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c99() {
    let Ok(cc) = which_cc() else { return };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    std::fs::write(
        &src,
        "#include \"mmhighway.h\"\nint main(void) { MhScenario *s = 0; return mh_scenario_new_default(1, 4e-3, &s); }\n",
    )
    .unwrap();
    let status = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| std::process::Command::new(c).arg("--version").output().is_ok())
        .ok_or(())
}
