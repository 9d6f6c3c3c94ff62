//! C ABI for the `mucb-intervals` simulator.
//!
//! Objects cross the boundary as opaque handles that the caller frees with
//! the matching `*_free` function. Every fallible call returns a
//! [`MucbStatus`]; on failure a description is available from
//! [`mucb_last_error`] on the same thread.
//!
//! Array getters follow one convention: pass a buffer and its capacity, get
//! the required length back through `len_out`. A null buffer with capacity 0
//! is a valid length query. A too-small buffer yields
//! `MUCB_STATUS_BUFFER_TOO_SMALL` and leaves the buffer untouched.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use mucb_intervals::{
    decomposition_check, run_episode, run_experiment, ActionSpace, DeltaChoice, DeltaPreset, Environment,
    EnvironmentSpec, EpisodeOptions, Error, EtcParams, ExperimentConfig, Policy, RunOptions, RunRecord,
};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MucbStatus {
    Ok = 0,
    NullPointer = 1,
    /// An argument is outside its domain.
    InvalidArgument = 2,
    /// A configuration (file or policy) is not runnable.
    Config = 3,
    Io = 4,
    BufferTooSmall = 5,
    /// The requested data does not exist for this run (for example the
    /// desired set of a baseline policy).
    Unavailable = 6,
    /// A bug inside the library; the handle arguments are still valid.
    Panic = 7,
    /// Any other library error.
    Internal = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MucbPolicyKind {
    MucbIntervals = 0,
    CentralizedUcb = 1,
    EtcDseeStyle = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MucbDeltaMode {
    /// `delta = 1/T^2`.
    InverseTSquared = 0,
    /// `delta = T^(-2/gamma)`.
    ProofSchedule = 1,
    /// Use `MucbPolicy::delta` as given.
    Explicit = 2,
}

/// Policy parameters. Start from [`mucb_policy_default`] and override
/// fields; fields that do not apply to `kind` are ignored.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MucbPolicy {
    pub kind: MucbPolicyKind,
    pub gamma: f64,
    pub delta_mode: MucbDeltaMode,
    pub delta: f64,
    pub explore_growth: f64,
    pub commit_growth: f64,
}

/// Opaque reward environment.
pub struct MucbEnvironment(Environment);

/// Opaque record of one finished episode.
pub struct MucbRun(RunRecord);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: MucbStatus, msg: impl Into<String>) -> MucbStatus {
    set_last_error(msg.into());
    status
}

fn from_error(err: Error) -> MucbStatus {
    let status = match &err {
        Error::Domain(_) => MucbStatus::InvalidArgument,
        Error::Config(_) => MucbStatus::Config,
        Error::Io { .. } => MucbStatus::Io,
        _ => MucbStatus::Internal,
    };
    fail(status, err.to_string())
}

/// Runs `f`, turning panics into `MucbStatus::Panic`.
fn guard(f: impl FnOnce() -> Result<(), MucbStatus>) -> MucbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MucbStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(MucbStatus::Panic, format!("panic: {msg}"))
        }
    }
}

unsafe fn deref<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, MucbStatus> {
    ptr.as_ref().ok_or_else(|| fail(MucbStatus::NullPointer, format!("{what} is null")))
}

unsafe fn slice<'a, T>(ptr: *const T, len: usize, what: &str) -> Result<&'a [T], MucbStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(fail(MucbStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), MucbStatus> {
    if out.is_null() {
        return Err(fail(MucbStatus::NullPointer, format!("{what} is null")));
    }
    out.write(value);
    Ok(())
}

unsafe fn copy_array<T: Copy>(src: &[T], buf: *mut T, cap: usize, len_out: *mut usize) -> Result<(), MucbStatus> {
    write_out(len_out, src.len(), "len_out")?;
    if src.is_empty() && cap == 0 {
        return Ok(());
    }
    if cap < src.len() {
        if cap == 0 && buf.is_null() {
            return Ok(());
        }
        return Err(fail(
            MucbStatus::BufferTooSmall,
            format!("buffer holds {cap} elements, {} needed", src.len()),
        ));
    }
    if buf.is_null() {
        return Err(fail(MucbStatus::NullPointer, "buffer is null"));
    }
    std::ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    Ok(())
}

fn to_policy(p: &MucbPolicy) -> Result<Policy, MucbStatus> {
    let delta = match p.delta_mode {
        MucbDeltaMode::InverseTSquared => DeltaChoice::Preset(DeltaPreset::InverseTSquared),
        MucbDeltaMode::ProofSchedule => DeltaChoice::Preset(DeltaPreset::ProofSchedule),
        MucbDeltaMode::Explicit => DeltaChoice::Value(p.delta),
    };
    Ok(match p.kind {
        MucbPolicyKind::MucbIntervals => {
            if !(p.gamma > 0.0 && p.gamma.is_finite()) {
                return Err(fail(MucbStatus::InvalidArgument, "gamma must be > 0"));
            }
            Policy::MucbIntervals { gamma: p.gamma, delta }
        }
        MucbPolicyKind::CentralizedUcb => Policy::CentralizedUcb { delta },
        MucbPolicyKind::EtcDseeStyle => {
            let params = EtcParams {
                explore_growth: p.explore_growth,
                commit_growth: p.commit_growth,
            };
            params.validate().map_err(from_error)?;
            Policy::EtcDseeStyle(params)
        }
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mucb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null if none.
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mucb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Default parameters for `kind`: gamma 0.5, delta 1/T^2, ETC growth 2 and 4.
#[no_mangle]
pub extern "C" fn mucb_policy_default(kind: MucbPolicyKind) -> MucbPolicy {
    let etc = EtcParams::default();
    MucbPolicy {
        kind,
        gamma: 0.5,
        delta_mode: MucbDeltaMode::InverseTSquared,
        delta: 0.0,
        explore_growth: etc.explore_growth,
        commit_growth: etc.commit_growth,
    }
}

/// Samples Gaussian means from U(mean_low, mean_high) and standard
/// deviations from U(sd_low, sd_high) for every joint action.
///
/// # Safety
/// `arms_per_player` must point to `num_players` values; `out` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mucb_environment_random(
    num_players: usize,
    arms_per_player: *const usize,
    mean_low: f64,
    mean_high: f64,
    sd_low: f64,
    sd_high: f64,
    seed: u64,
    out: *mut *mut MucbEnvironment,
) -> MucbStatus {
    guard(|| {
        let arms = slice(arms_per_player, num_players, "arms_per_player")?.to_vec();
        let spec = EnvironmentSpec::random(arms, (mean_low, mean_high), (sd_low, sd_high));
        let env = Environment::sample(&spec, seed).map_err(from_error)?;
        write_out(out, Box::into_raw(Box::new(MucbEnvironment(env))), "out")
    })
}

/// Environment with given means and standard deviations, both indexed by
/// joint-action id (lexicographic order, first player slowest).
///
/// # Safety
/// `arms_per_player` must point to `num_players` values, `means` and `sds`
/// to one value per joint action; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mucb_environment_fixed(
    num_players: usize,
    arms_per_player: *const usize,
    means: *const f64,
    sds: *const f64,
    out: *mut *mut MucbEnvironment,
) -> MucbStatus {
    guard(|| {
        let arms = slice(arms_per_player, num_players, "arms_per_player")?.to_vec();
        let space = ActionSpace::new(&arms).map_err(from_error)?;
        let n = space.size();
        let means = slice(means, n, "means")?.to_vec();
        let sds = slice(sds, n, "sds")?.to_vec();
        let spec = EnvironmentSpec::fixed(arms, means, sds);
        let env = Environment::sample(&spec, 0).map_err(from_error)?;
        write_out(out, Box::into_raw(Box::new(MucbEnvironment(env))), "out")
    })
}

/// # Safety
/// `env` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mucb_environment_free(env: *mut MucbEnvironment) {
    if !env.is_null() {
        drop(Box::from_raw(env));
    }
}

/// Number of joint actions, or 0 for a null handle.
///
/// # Safety
/// `env` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mucb_environment_num_actions(env: *const MucbEnvironment) -> usize {
    env.as_ref().map_or(0, |e| e.0.space().size())
}

/// Copies the mean table (one entry per joint action).
///
/// # Safety
/// `env` must be a live handle; `buf` must hold `cap` values.
#[no_mangle]
pub unsafe extern "C" fn mucb_environment_means(
    env: *const MucbEnvironment,
    buf: *mut f64,
    cap: usize,
    len_out: *mut usize,
) -> MucbStatus {
    guard(|| copy_array(deref(env, "env")?.0.means(), buf, cap, len_out))
}

/// Copies the gap table `mu_star - mean`.
///
/// # Safety
/// `env` must be a live handle; `buf` must hold `cap` values.
#[no_mangle]
pub unsafe extern "C" fn mucb_environment_gaps(
    env: *const MucbEnvironment,
    buf: *mut f64,
    cap: usize,
    len_out: *mut usize,
) -> MucbStatus {
    guard(|| copy_array(&deref(env, "env")?.0.gaps(), buf, cap, len_out))
}

/// # Safety
/// `env` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mucb_environment_optimal_action(env: *const MucbEnvironment, out: *mut usize) -> MucbStatus {
    guard(|| write_out(out, deref(env, "env")?.0.optimal_action().0, "out"))
}

/// Plays `policy` for `horizon` rounds with reward seed `seed`.
///
/// # Safety
/// `env` and `policy` must be live; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mucb_run_episode(
    env: *const MucbEnvironment,
    policy: *const MucbPolicy,
    horizon: u64,
    seed: u64,
    out: *mut *mut MucbRun,
) -> MucbStatus {
    guard(|| {
        let env = &deref(env, "env")?.0;
        let policy = to_policy(deref(policy, "policy")?)?;
        let record = run_episode(env, &policy, horizon, seed, EpisodeOptions::default()).map_err(from_error)?;
        write_out(out, Box::into_raw(Box::new(MucbRun(record))), "out")
    })
}

/// # Safety
/// `run` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mucb_run_free(run: *mut MucbRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Rounds played, or 0 for a null handle.
///
/// # Safety
/// `run` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mucb_run_horizon(run: *const MucbRun) -> u64 {
    run.as_ref().map_or(0, |r| r.0.horizon)
}

/// # Safety
/// `run` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mucb_run_final_regret(run: *const MucbRun, out: *mut f64) -> MucbStatus {
    guard(|| write_out(out, deref(run, "run")?.0.final_regret(), "out"))
}

/// Cumulative pseudo-regret after each round.
///
/// # Safety
/// `run` must be a live handle; `buf` must hold `cap` values.
#[no_mangle]
pub unsafe extern "C" fn mucb_run_regret_trace(
    run: *const MucbRun,
    buf: *mut f64,
    cap: usize,
    len_out: *mut usize,
) -> MucbStatus {
    guard(|| copy_array(&deref(run, "run")?.0.regret_trace, buf, cap, len_out))
}

/// Joint-action id taken in each round.
///
/// # Safety
/// `run` must be a live handle; `buf` must hold `cap` values.
#[no_mangle]
pub unsafe extern "C" fn mucb_run_actions(
    run: *const MucbRun,
    buf: *mut usize,
    cap: usize,
    len_out: *mut usize,
) -> MucbStatus {
    guard(|| {
        let ids: Vec<usize> = deref(run, "run")?.0.actions.iter().map(|a| a.0).collect();
        copy_array(&ids, buf, cap, len_out)
    })
}

/// Pull count of each joint action.
///
/// # Safety
/// `run` must be a live handle; `buf` must hold `cap` values.
#[no_mangle]
pub unsafe extern "C" fn mucb_run_pull_counts(
    run: *const MucbRun,
    buf: *mut u64,
    cap: usize,
    len_out: *mut usize,
) -> MucbStatus {
    guard(|| copy_array(&deref(run, "run")?.0.pull_counts, buf, cap, len_out))
}

/// Eliminations as parallel arrays of one-based rounds and action ids.
/// Both buffers must hold `cap` values.
///
/// # Safety
/// `run` must be a live handle; `rounds` and `actions` must hold `cap`
/// values each.
#[no_mangle]
pub unsafe extern "C" fn mucb_run_eliminations(
    run: *const MucbRun,
    rounds: *mut u64,
    actions: *mut usize,
    cap: usize,
    len_out: *mut usize,
) -> MucbStatus {
    guard(|| {
        let elims = &deref(run, "run")?.0.eliminations;
        let r: Vec<u64> = elims.iter().map(|e| e.round).collect();
        let a: Vec<usize> = elims.iter().map(|e| e.action.0).collect();
        copy_array(&r, rounds, cap, len_out)?;
        copy_array(&a, actions, cap, len_out)
    })
}

/// Surviving candidates at the horizon in agreed order. Only mUCB-Intervals
/// runs have one; others return `MUCB_STATUS_UNAVAILABLE`.
///
/// # Safety
/// `run` must be a live handle; `buf` must hold `cap` values.
#[no_mangle]
pub unsafe extern "C" fn mucb_run_final_desired(
    run: *const MucbRun,
    buf: *mut usize,
    cap: usize,
    len_out: *mut usize,
) -> MucbStatus {
    guard(|| {
        let record = &deref(run, "run")?.0;
        let Some(desired) = &record.final_desired else {
            return Err(fail(
                MucbStatus::Unavailable,
                format!("{} runs have no desired set", record.policy),
            ));
        };
        let ids: Vec<usize> = desired.iter().map(|a| a.0).collect();
        copy_array(&ids, buf, cap, len_out)
    })
}

/// `|R_T - sum over actions of gap * pulls|` for a run played on `env`.
///
/// # Safety
/// `run` and `env` must be live; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mucb_run_decomposition_residual(
    run: *const MucbRun,
    env: *const MucbEnvironment,
    out: *mut f64,
) -> MucbStatus {
    guard(|| {
        let record = &deref(run, "run")?.0;
        let env = &deref(env, "env")?.0;
        if record.pull_counts.len() != env.space().size() {
            return Err(fail(MucbStatus::InvalidArgument, "run was not played on this environment"));
        }
        write_out(out, decomposition_check(record, env), "out")
    })
}

/// Runs the experiment described by a TOML config file, writing its CSV,
/// summary and plot files under the config's `output_dir`.
///
/// # Safety
/// `config_path` must be a NUL-terminated UTF-8 path.
#[no_mangle]
pub unsafe extern "C" fn mucb_run_experiment_file(config_path: *const c_char) -> MucbStatus {
    guard(|| {
        if config_path.is_null() {
            return Err(fail(MucbStatus::NullPointer, "config_path is null"));
        }
        let path = CStr::from_ptr(config_path)
            .to_str()
            .map_err(|_| fail(MucbStatus::InvalidArgument, "config_path is not UTF-8"))?;
        let config = ExperimentConfig::load(Path::new(path)).map_err(from_error)?;
        run_experiment(&config, RunOptions::default()).map_err(from_error)?;
        Ok(())
    })
}
