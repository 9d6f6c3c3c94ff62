use std::ffi::{CStr, CString};
use std::ptr;

use mucb_ffi::*;

fn last_error() -> String {
    let p = mucb_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn fixed_env(means: &[f64], sd: f64) -> *mut MucbEnvironment {
    let arms = [2usize, 2];
    let sds = vec![sd; means.len()];
    let mut env = ptr::null_mut();
    let s = unsafe { mucb_environment_fixed(2, arms.as_ptr(), means.as_ptr(), sds.as_ptr(), &mut env) };
    assert_eq!(s, MucbStatus::Ok);
    env
}

fn read_f64(f: impl Fn(*mut f64, usize, *mut usize) -> MucbStatus) -> Vec<f64> {
    let mut n = 0;
    assert_eq!(f(ptr::null_mut(), 0, &mut n), MucbStatus::Ok);
    let mut buf = vec![0.0; n];
    assert_eq!(f(buf.as_mut_ptr(), n, &mut n), MucbStatus::Ok);
    buf
}

fn read_usize(f: impl Fn(*mut usize, usize, *mut usize) -> MucbStatus) -> Vec<usize> {
    let mut n = 0;
    assert_eq!(f(ptr::null_mut(), 0, &mut n), MucbStatus::Ok);
    let mut buf = vec![0; n];
    assert_eq!(f(buf.as_mut_ptr(), n, &mut n), MucbStatus::Ok);
    buf
}

#[test]
fn zero_noise_episode_matches_the_library() {
    let env = fixed_env(&[0.9, 0.5, 0.6, 0.7], 0.0);
    let mut policy = mucb_policy_default(MucbPolicyKind::MucbIntervals);
    policy.gamma = 0.1;
    let mut run = ptr::null_mut();
    assert_eq!(unsafe { mucb_run_episode(env, &policy, 20, 0, &mut run) }, MucbStatus::Ok);

    assert_eq!(unsafe { mucb_run_horizon(run) }, 20);
    let actions = read_usize(|b, c, l| unsafe { mucb_run_actions(run, b, c, l) });
    assert_eq!(actions, [0, 1, 2, 3, 0, 1, 2, 3, 0, 2, 1, 3, 0, 3, 0, 3, 0, 3, 0, 0]);
    assert_eq!(read_usize(|b, c, l| unsafe { mucb_run_final_desired(run, b, c, l) }), [0]);

    let mut n = 0;
    assert_eq!(
        unsafe { mucb_run_eliminations(run, ptr::null_mut(), ptr::null_mut(), 0, &mut n) },
        MucbStatus::Ok
    );
    let (mut rounds, mut ids) = (vec![0u64; n], vec![0usize; n]);
    assert_eq!(
        unsafe { mucb_run_eliminations(run, rounds.as_mut_ptr(), ids.as_mut_ptr(), n, &mut n) },
        MucbStatus::Ok
    );
    assert_eq!(rounds, [10, 11, 20]);
    assert_eq!(ids, [1, 2, 3]);

    let trace = read_f64(|b, c, l| unsafe { mucb_run_regret_trace(run, b, c, l) });
    let mut regret = 0.0;
    assert_eq!(unsafe { mucb_run_final_regret(run, &mut regret) }, MucbStatus::Ok);
    assert_eq!(trace.last().copied(), Some(regret));
    let mut counts = vec![0u64; 4];
    let mut len = 0;
    assert_eq!(
        unsafe { mucb_run_pull_counts(run, counts.as_mut_ptr(), 4, &mut len) },
        MucbStatus::Ok
    );
    assert_eq!(counts.iter().sum::<u64>(), 20);
    let gaps = read_f64(|b, c, l| unsafe { mucb_environment_gaps(env, b, c, l) });
    let by_hand: f64 = gaps.iter().zip(&counts).map(|(g, &n)| g * n as f64).sum();
    assert!((by_hand - regret).abs() < 1e-12);
    let mut residual = 1.0;
    assert_eq!(
        unsafe { mucb_run_decomposition_residual(run, env, &mut residual) },
        MucbStatus::Ok
    );
    assert!(residual < 1e-12);

    unsafe {
        mucb_run_free(run);
        mucb_environment_free(env);
    }
}

#[test]
fn random_environment_is_seeded() {
    let arms = [3usize, 3];
    let make = |seed| {
        let mut env = ptr::null_mut();
        let s = unsafe { mucb_environment_random(2, arms.as_ptr(), 0.0, 1.0, 0.0, 0.5, seed, &mut env) };
        assert_eq!(s, MucbStatus::Ok);
        env
    };
    let (a, b, c) = (make(5), make(5), make(6));
    let means = |e| read_f64(|buf, cap, l| unsafe { mucb_environment_means(e, buf, cap, l) });
    assert_eq!(means(a), means(b));
    assert_ne!(means(a), means(c));
    assert_eq!(unsafe { mucb_environment_num_actions(a) }, 9);
    let mut best = 99;
    assert_eq!(unsafe { mucb_environment_optimal_action(a, &mut best) }, MucbStatus::Ok);
    let m = means(a);
    assert!(m.iter().all(|&x| x <= m[best]));
    unsafe {
        mucb_environment_free(a);
        mucb_environment_free(b);
        mucb_environment_free(c);
    }
}

#[test]
fn every_policy_kind_runs() {
    let env = fixed_env(&[0.2, 0.8, 0.5, 0.4], 0.3);
    for kind in [
        MucbPolicyKind::MucbIntervals,
        MucbPolicyKind::CentralizedUcb,
        MucbPolicyKind::EtcDseeStyle,
    ] {
        let policy = mucb_policy_default(kind);
        let mut run = ptr::null_mut();
        assert_eq!(unsafe { mucb_run_episode(env, &policy, 5_000, 1, &mut run) }, MucbStatus::Ok);
        let mut residual = 1.0;
        unsafe { mucb_run_decomposition_residual(run, env, &mut residual) };
        assert!(residual <= 1e-9);
        let mut n = 0;
        let s = unsafe { mucb_run_final_desired(run, ptr::null_mut(), 0, &mut n) };
        if kind == MucbPolicyKind::MucbIntervals {
            assert_eq!(s, MucbStatus::Ok);
        } else {
            assert_eq!(s, MucbStatus::Unavailable);
            assert!(last_error().contains("no desired set"));
        }
        unsafe { mucb_run_free(run) };
    }
    unsafe { mucb_environment_free(env) };
}

#[test]
fn errors_carry_status_and_message() {
    let arms = [3usize, 1];
    let mut env = ptr::null_mut();
    let s = unsafe { mucb_environment_random(2, arms.as_ptr(), 0.0, 1.0, 0.0, 0.5, 0, &mut env) };
    assert_ne!(s, MucbStatus::Ok);
    assert!(last_error().contains("arms_per_player must be ≥ 2"), "{}", last_error());
    assert!(env.is_null());

    let s = unsafe { mucb_environment_random(2, ptr::null(), 0.0, 1.0, 0.0, 0.5, 0, &mut env) };
    assert_eq!(s, MucbStatus::NullPointer);

    let env = fixed_env(&[0.9, 0.5, 0.6, 0.7], 0.1);
    let mut run = ptr::null_mut();
    let mut policy = mucb_policy_default(MucbPolicyKind::MucbIntervals);
    assert_eq!(unsafe { mucb_run_episode(env, &policy, 3, 0, &mut run) }, MucbStatus::Config);
    assert!(run.is_null());

    policy.gamma = 0.0;
    assert_eq!(
        unsafe { mucb_run_episode(env, &policy, 100, 0, &mut run) },
        MucbStatus::InvalidArgument
    );
    assert!(last_error().contains("gamma must be > 0"));

    policy = mucb_policy_default(MucbPolicyKind::CentralizedUcb);
    policy.delta_mode = MucbDeltaMode::Explicit;
    policy.delta = 1.5;
    assert_eq!(
        unsafe { mucb_run_episode(env, &policy, 100, 0, &mut run) },
        MucbStatus::InvalidArgument
    );

    policy = mucb_policy_default(MucbPolicyKind::MucbIntervals);
    assert_eq!(unsafe { mucb_run_episode(env, &policy, 100, 0, &mut run) }, MucbStatus::Ok);
    let mut small = [0.0; 10];
    let mut n = 0;
    assert_eq!(
        unsafe { mucb_run_regret_trace(run, small.as_mut_ptr(), small.len(), &mut n) },
        MucbStatus::BufferTooSmall
    );
    assert_eq!(n, 100);
    assert_eq!(small, [0.0; 10]);
    assert_eq!(
        unsafe { mucb_run_final_regret(ptr::null(), &mut small[0]) },
        MucbStatus::NullPointer
    );
    assert_eq!(unsafe { mucb_run_horizon(ptr::null()) }, 0);
    unsafe {
        mucb_run_free(run);
        mucb_environment_free(env);
        mucb_run_free(ptr::null_mut());
        mucb_environment_free(ptr::null_mut());
    }
}

#[test]
fn experiment_file_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    std::fs::write(
        &cfg,
        "horizon = 2000\nrepetitions = 2\noutput_dir = \"out\"\nemit_plots = false\n",
    )
    .unwrap();
    let path = CString::new(cfg.to_str().unwrap()).unwrap();
    assert_eq!(unsafe { mucb_run_experiment_file(path.as_ptr()) }, MucbStatus::Ok);
    assert!(dir.path().join("out/mucb-intervals.csv").exists());
    assert!(dir.path().join("out/summary.json").exists());

    std::fs::write(&cfg, "repetitions = 0\n").unwrap();
    assert_eq!(unsafe { mucb_run_experiment_file(path.as_ptr()) }, MucbStatus::Config);
    assert!(last_error().contains("repetitions"));

    let missing = CString::new(dir.path().join("nope.toml").to_str().unwrap()).unwrap();
    assert_eq!(unsafe { mucb_run_experiment_file(missing.as_ptr()) }, MucbStatus::Io);
    assert_eq!(unsafe { mucb_run_experiment_file(ptr::null()) }, MucbStatus::NullPointer);
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(mucb_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
