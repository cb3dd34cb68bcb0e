//! C ABI over the analysis engine.
//!
//! Scenarios are opaque handles created by `mh_scenario_*` constructors and
//! released with `mh_scenario_free`. Every fallible call returns an
//! `MhStatus`; on failure `mh_last_error` describes the most recent error
//! raised on the calling thread. Angles are in degrees and gains and
//! thresholds in dB at this boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use mmhighway::association::association_probabilities;
use mmhighway::coverage::{outage_probability, rate_coverage, Variant};
use mmhighway::harness::Experiment;
use mmhighway::mcsim::{simulate, SimConfig};
use mmhighway::scenario::{db_to_linear, Scenario};
use mmhighway::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Numerical = 3,
    Config = 4,
    Io = 5,
    Panic = 6,
}

/// Outage expression selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MhVariant {
    Full = 0,
    SimplifiedLosOnly = 1,
    MedianDeployment = 2,
}

impl From<MhVariant> for Variant {
    fn from(v: MhVariant) -> Self {
        match v {
            MhVariant::Full => Variant::Full,
            MhVariant::SimplifiedLosOnly => Variant::SimplifiedLosOnly,
            MhVariant::MedianDeployment => Variant::MedianDeployment,
        }
    }
}

/// Monte Carlo estimate with its confidence interval.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MhEstimate {
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n: u64,
}

/// Opaque scenario handle.
pub struct MhScenario {
    inner: Scenario,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> MhStatus {
    match e {
        Error::Domain { .. } => MhStatus::InvalidArgument,
        Error::Numerical { .. } => MhStatus::Numerical,
        Error::Config { .. } => MhStatus::Config,
        Error::Io(_) => MhStatus::Io,
    }
}

// Runs `f`, converting errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), (MhStatus, String)>>(f: F) -> MhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MhStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(format!("panic: {msg}"));
            MhStatus::Panic
        }
    }
}

fn lift<T>(r: mmhighway::Result<T>) -> Result<T, (MhStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(name: &str) -> (MhStatus, String) {
    (MhStatus::NullPointer, format!("{name} is null"))
}

unsafe fn scenario_ref<'a>(p: *const MhScenario) -> Result<&'a MhScenario, (MhStatus, String)> {
    p.as_ref().ok_or_else(|| null("scenario"))
}

unsafe fn scenario_mut<'a>(p: *mut MhScenario) -> Result<&'a mut MhScenario, (MhStatus, String)> {
    p.as_mut().ok_or_else(|| null("scenario"))
}

unsafe fn write<T>(out: *mut T, value: T, name: &str) -> Result<(), (MhStatus, String)> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

/// Copies the last error message of this thread into `buf` (NUL
/// terminated, truncated to `len` bytes). Returns the full message length
/// without the terminator, or 0 when there is no error.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn mh_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mh_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Reference scenario with `n_obstacle_lanes` obstacle lanes (1 or 2) and
/// BS density `lambda_bs` per meter.
///
/// # Safety
/// `out` must be a valid pointer; on success it receives a handle to free
/// with `mh_scenario_free`.
#[no_mangle]
pub unsafe extern "C" fn mh_scenario_new_default(
    n_obstacle_lanes: u32,
    lambda_bs: f64,
    out: *mut *mut MhScenario,
) -> MhStatus {
    guard(|| {
        let inner = lift(Scenario::paper_defaults(n_obstacle_lanes as usize, lambda_bs))?;
        write(out, Box::into_raw(Box::new(MhScenario { inner })), "out")
    })
}

/// Scenario described by the TOML experiment text `toml`.
///
/// # Safety
/// `toml` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mh_scenario_from_toml(toml: *const c_char, out: *mut *mut MhScenario) -> MhStatus {
    guard(|| {
        if toml.is_null() {
            return Err(null("toml"));
        }
        let text = CStr::from_ptr(toml)
            .to_str()
            .map_err(|e| (MhStatus::Config, format!("toml is not UTF-8: {e}")))?;
        let inner = lift(Experiment::from_toml_str(text).and_then(|e| e.scenario()))?;
        write(out, Box::into_raw(Box::new(MhScenario { inner })), "out")
    })
}

/// Releases a scenario handle. Null is ignored.
///
/// # Safety
/// `scenario` must come from an `mh_scenario_*` constructor and must not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mh_scenario_free(scenario: *mut MhScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

// Applies `edit` and keeps the change only if the scenario stays valid.
unsafe fn edit(scenario: *mut MhScenario, edit: impl FnOnce(&mut Scenario)) -> MhStatus {
    guard(|| {
        let s = scenario_mut(scenario)?;
        let mut next = s.inner.clone();
        edit(&mut next);
        lift(next.validate())?;
        s.inner = next;
        Ok(())
    })
}

/// Sets the main-lobe beamwidth ψ of BSs and user, in degrees.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mh_scenario_set_beamwidth_deg(scenario: *mut MhScenario, psi_deg: f64) -> MhStatus {
    edit(scenario, |s| s.radio.psi = psi_deg.to_radians())
}

/// Sets the BS main-lobe gain G_TX, in dB.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mh_scenario_set_g_tx_main_db(scenario: *mut MhScenario, g_db: f64) -> MhStatus {
    edit(scenario, |s| s.radio.g_tx_main = db_to_linear(g_db))
}

/// Sets the NLOS path-loss exponent α_N.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mh_scenario_set_alpha_n(scenario: *mut MhScenario, alpha_n: f64) -> MhStatus {
    edit(scenario, |s| s.radio.alpha_n = alpha_n)
}

/// Sets the BS density λ_BS, per meter.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mh_scenario_set_lambda_bs(scenario: *mut MhScenario, lambda_bs: f64) -> MhStatus {
    edit(scenario, |s| s.deployment.lambda_bs = lambda_bs)
}

/// LOS and NLOS association probabilities.
///
/// # Safety
/// `scenario` must be a live handle; `p_l` and `p_n` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mh_association(scenario: *const MhScenario, p_l: *mut f64, p_n: *mut f64) -> MhStatus {
    guard(|| {
        let a = lift(association_probabilities(&scenario_ref(scenario)?.inner))?;
        write(p_l, a.p_l, "p_l")?;
        write(p_n, a.p_n, "p_n")
    })
}

/// SINR outage probability at threshold `theta_db`.
///
/// # Safety
/// `scenario` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mh_outage_probability(
    scenario: *const MhScenario,
    theta_db: f64,
    variant: MhVariant,
    out: *mut f64,
) -> MhStatus {
    guard(|| {
        let sc = &scenario_ref(scenario)?.inner;
        let p = lift(outage_probability(db_to_linear(theta_db), variant.into(), sc))?;
        write(out, p, "out")
    })
}

/// Probability that the rate reaches `kappa` bit/s.
///
/// # Safety
/// `scenario` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mh_rate_coverage(
    scenario: *const MhScenario,
    kappa: f64,
    variant: MhVariant,
    out: *mut f64,
) -> MhStatus {
    guard(|| {
        let sc = &scenario_ref(scenario)?.inner;
        write(out, lift(rate_coverage(kappa, variant.into(), sc))?, "out")
    })
}

/// Simulated outage probability at `theta_db` with the default simulator
/// settings, `n_trials` trials and `seed`.
///
/// # Safety
/// `scenario` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mh_simulate_outage(
    scenario: *const MhScenario,
    theta_db: f64,
    n_trials: u32,
    seed: u64,
    out: *mut MhEstimate,
) -> MhStatus {
    guard(|| {
        let sc = &scenario_ref(scenario)?.inner;
        let cfg = SimConfig {
            n_trials: n_trials as usize,
            seed,
            ..SimConfig::default()
        };
        let e = lift(simulate(sc, &cfg))?.outage(db_to_linear(theta_db));
        write(
            out,
            MhEstimate {
                value: e.value,
                ci_low: e.ci_low,
                ci_high: e.ci_high,
                n: e.n,
            },
            "out",
        )
    })
}
