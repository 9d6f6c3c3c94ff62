use mucb_intervals::rng::rng_from_seed;
use mucb_intervals::{ActionId, Environment, EnvironmentSpec, JointAction};

#[test]
fn player_copies_are_unbiased_and_uncorrelated() {
    let spec = EnvironmentSpec::fixed(vec![2, 2, 2], (0..8).map(|i| 0.1 * i as f64).collect(), vec![0.5; 8]);
    let env = Environment::sample(&spec, 0).unwrap();
    let action = JointAction::from_one_based(&[2, 1, 2]).unwrap();
    let mean = env.mean(env.space().id_of(&action).unwrap());
    let mut rng = rng_from_seed(123);
    let n = 1_000_000;
    let mut sum = [0.0; 3];
    let mut sq = [0.0; 3];
    let mut cross = [0.0; 3];
    for _ in 0..n {
        let x = env.draw_rewards(&action, &mut rng).unwrap().per_player;
        assert_eq!(x.len(), 3);
        for i in 0..3 {
            let d = x[i] - mean;
            sum[i] += d;
            sq[i] += d * d;
            cross[i] += d * (x[(i + 1) % 3] - mean);
        }
    }
    let n = n as f64;
    for i in 0..3 {
        let m = sum[i] / n;
        assert!(m.abs() < 0.002, "player {i} mean offset {m}");
        let j = (i + 1) % 3;
        let cov = cross[i] / n - m * sum[j] / n;
        let rho = cov / ((sq[i] / n - m * m).sqrt() * (sq[j] / n - (sum[j] / n).powi(2)).sqrt());
        assert!(rho.abs() < 0.01, "players {i},{j} correlation {rho}");
        let var = sq[i] / n - m * m;
        assert!((var - 0.25).abs() < 0.005, "player {i} variance {var}");
    }
}

#[test]
fn sampled_tables_respect_ranges() {
    let spec = EnvironmentSpec::random(vec![3, 3], (0.2, 0.4), (0.0, 0.5));
    for seed in 0..200 {
        let env = Environment::sample(&spec, seed).unwrap();
        assert!(env.means().iter().all(|m| (0.2..0.4).contains(m)));
        assert!(env.sds().iter().all(|s| (0.0..0.5).contains(s)));
        let best = env.optimal_action();
        assert_eq!(env.mean(best), env.mu_star());
        assert!(env.gaps().iter().all(|&g| g >= 0.0));
        let zero: Vec<usize> = env.gaps().iter().enumerate().filter(|(_, &g)| g == 0.0).map(|(i, _)| i).collect();
        assert!(zero.contains(&best.0));
    }
}

#[test]
fn zero_sd_draws_are_exact() {
    let spec = EnvironmentSpec::fixed_uniform_sd(vec![2, 2], vec![0.9, 0.5, 0.6, 0.7], 0.0);
    let env = Environment::sample(&spec, 0).unwrap();
    let mut rng = rng_from_seed(0);
    let mut out = [0.0; 2];
    for id in 0..4 {
        env.draw_into(ActionId(id), &mut rng, &mut out);
        assert_eq!(out, [env.means()[id]; 2]);
    }
}

#[test]
fn single_arm_player_is_rejected() {
    let spec = EnvironmentSpec::random(vec![3, 1], (0.0, 1.0), (0.0, 0.5));
    let err = spec.validate().unwrap_err().to_string();
    assert!(
        err.contains("arms_per_player must be ≥ 2 (signaling requires a second marginal arm)"),
        "{err}"
    );
}
