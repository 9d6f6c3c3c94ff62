//! Batch execution of an [`ExperimentConfig`] and the files it produces.
//!
//! Output files, all inside `output_dir`:
//!
//! * `<label>.csv` per policy, columns `round,run_id,cumulative_regret`
//!   (plus `sampled_regret` when enabled), sorted by round then run. Rounds
//!   are the checkpoint grid (powers of two and the horizon) unless dense
//!   output is requested.
//! * `summary.json` with the environment(s), final median regret and band,
//!   elimination rounds, and survivor frequencies per policy.
//! * `regret.svg` when plots are enabled.
//!
//! Repetition `r` uses reward seed `reward_seed(master_seed, r)` for every
//! policy, so policies are compared on paired seeds.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::action::ActionId;
use crate::config::{EnvironmentMode, ExperimentConfig};
use crate::environment::Environment;
use crate::error::{Error, Result};
use crate::plot::write_regret_plot;
use crate::rng::{environment_seed, reward_seed};
use crate::simulator::{aggregate, checkpoints, quantile, run_episode, AggregateResult, EpisodeOptions, Policy, RunRecord};

pub const CSV_HEADER: [&str; 3] = ["round", "run_id", "cumulative_regret"];
pub const SAMPLED_COLUMN: &str = "sampled_regret";
pub const SUMMARY_FILE: &str = "summary.json";
pub const PLOT_FILE: &str = "regret.svg";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Emit every round in the CSVs instead of the checkpoint grid.
    pub dense: bool,
    /// Suppress the plot even if the config asks for it.
    pub no_plots: bool,
}

/// All runs of one policy.
#[derive(Debug, Clone)]
pub struct PolicyOutcome {
    pub label: String,
    pub policy: Policy,
    pub records: Vec<RunRecord>,
    pub aggregate: AggregateResult,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub environments: Vec<Environment>,
    pub policies: Vec<PolicyOutcome>,
}

impl ExperimentOutcome {
    /// Environment used by repetition `run`.
    pub fn environment(&self, run: usize) -> &Environment {
        &self.environments[run.min(self.environments.len() - 1)]
    }
}

pub fn environments_for(config: &ExperimentConfig) -> Result<Vec<Environment>> {
    let count = match config.environment_mode {
        EnvironmentMode::Shared => 1,
        EnvironmentMode::FreshPerRun => config.repetitions,
    };
    (0..count as u64)
        .map(|i| Environment::sample(&config.environment, environment_seed(config.master_seed, i)))
        .collect()
}

/// Runs every policy for every repetition without writing anything.
pub fn simulate(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    config.validate()?;
    let environments = environments_for(config)?;
    let options = EpisodeOptions {
        audit: config.audit,
        sampled_regret: config.sampled_regret,
    };
    let mut policies = Vec::with_capacity(config.policies.len());
    for pc in &config.policies {
        let policy = pc.to_policy()?;
        let records = (0..config.repetitions)
            .into_par_iter()
            .map(|r| {
                let env = &environments[r.min(environments.len() - 1)];
                run_episode(env, &policy, config.horizon, reward_seed(config.master_seed, r as u64), options)
            })
            .collect::<Result<Vec<_>>>()?;
        let aggregate = aggregate(&records)?;
        policies.push(PolicyOutcome {
            label: pc.label().to_string(),
            policy,
            records,
            aggregate,
        });
    }
    Ok(ExperimentOutcome { environments, policies })
}

#[derive(Debug, Clone, Serialize)]
pub struct EnvironmentSummary {
    pub index: usize,
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
    pub optimal_action: String,
    pub mu_star: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EliminationSummary {
    pub round: u64,
    pub action: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub run_id: usize,
    pub seed: u64,
    pub final_regret: f64,
    pub eliminations: Vec<EliminationSummary>,
    /// Final desired set (mUCB-Intervals only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub survivors: Option<Vec<String>>,
    pub most_pulled: String,
    pub optimal_retained: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolicySummary {
    pub label: String,
    pub name: String,
    pub runs: usize,
    pub final_median_regret: f64,
    pub final_lower_regret: f64,
    pub final_upper_regret: f64,
    /// How often each joint action is among the survivors at the horizon.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub survivor_frequency: Option<BTreeMap<String, usize>>,
    pub most_pulled_frequency: BTreeMap<String, usize>,
    pub optimal_retained_runs: usize,
    /// Rounds at which some player's desired set disagreed (audit only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coordination_violations: Option<usize>,
    pub per_run: Vec<RunSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub horizon: u64,
    pub repetitions: usize,
    pub master_seed: u64,
    pub environment_mode: EnvironmentMode,
    pub environments: Vec<EnvironmentSummary>,
    pub policies: Vec<PolicySummary>,
}

fn most_pulled(record: &RunRecord) -> ActionId {
    // first maximum
    let (i, _) = record
        .pull_counts
        .iter()
        .enumerate()
        .fold((0, 0u64), |best, (i, &n)| if n > best.1 { (i, n) } else { best });
    ActionId(i)
}

/// Rounds at which the players' desired sets were not all identical.
pub fn coordination_violations(record: &RunRecord) -> Option<usize> {
    let audit = record.audit.as_ref()?;
    if audit.desired.is_empty() {
        return None;
    }
    Some(
        audit
            .desired
            .iter()
            .filter(|sets| sets.windows(2).any(|w| w[0] != w[1]))
            .count(),
    )
}

pub fn summarize(config: &ExperimentConfig, outcome: &ExperimentOutcome) -> Summary {
    let environments = outcome
        .environments
        .iter()
        .enumerate()
        .map(|(index, env)| EnvironmentSummary {
            index,
            means: env.means().to_vec(),
            sds: env.sds().to_vec(),
            optimal_action: env.space().label(env.optimal_action()),
            mu_star: env.mu_star(),
        })
        .collect();
    let policies = outcome
        .policies
        .iter()
        .map(|po| {
            let per_run: Vec<RunSummary> = po
                .records
                .iter()
                .enumerate()
                .map(|(run_id, rec)| {
                    let env = outcome.environment(run_id);
                    let space = env.space();
                    let top = most_pulled(rec);
                    let optimal_retained = match &rec.final_desired {
                        Some(set) => set.contains(&env.optimal_action()),
                        None => env.gap(top) == 0.0,
                    };
                    RunSummary {
                        run_id,
                        seed: rec.seed,
                        final_regret: rec.final_regret(),
                        eliminations: rec
                            .eliminations
                            .iter()
                            .map(|e| EliminationSummary {
                                round: e.round,
                                action: space.label(e.action),
                            })
                            .collect(),
                        survivors: rec
                            .final_desired
                            .as_ref()
                            .map(|set| set.iter().map(|&id| space.label(id)).collect()),
                        most_pulled: space.label(top),
                        optimal_retained,
                    }
                })
                .collect();
            let survivor_frequency = po.policy.is_protocol().then(|| {
                let mut freq = BTreeMap::new();
                for run in &per_run {
                    for s in run.survivors.iter().flatten() {
                        *freq.entry(s.clone()).or_insert(0) += 1;
                    }
                }
                freq
            });
            let mut most_pulled_frequency = BTreeMap::new();
            for run in &per_run {
                *most_pulled_frequency.entry(run.most_pulled.clone()).or_insert(0) += 1;
            }
            let coordination_violations = config
                .audit
                .then(|| po.records.iter().filter_map(coordination_violations).sum());
            let agg = &po.aggregate;
            PolicySummary {
                label: po.label.clone(),
                name: po.policy.name().to_string(),
                runs: po.records.len(),
                final_median_regret: agg.final_median(),
                final_lower_regret: agg.lower.last().copied().unwrap_or(0.0),
                final_upper_regret: agg.upper.last().copied().unwrap_or(0.0),
                survivor_frequency,
                most_pulled_frequency,
                optimal_retained_runs: per_run.iter().filter(|r| r.optimal_retained).count(),
                coordination_violations,
                per_run,
            }
        })
        .collect();
    Summary {
        horizon: config.horizon,
        repetitions: config.repetitions,
        master_seed: config.master_seed,
        environment_mode: config.environment_mode,
        environments,
        policies,
    }
}

/// Writes the regret CSV of one policy.
pub fn write_csv(path: &Path, records: &[RunRecord], horizon: u64, dense: bool) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(std::io::BufWriter::new(file));
    let sampled = records.iter().all(|r| r.sampled_regret.is_some()) && !records.is_empty();
    let mut header: Vec<&str> = CSV_HEADER.to_vec();
    if sampled {
        header.push(SAMPLED_COLUMN);
    }
    w.write_record(&header)?;
    let rounds: Vec<u64> = if dense { (1..=horizon).collect() } else { checkpoints(horizon) };
    for &t in &rounds {
        for (run_id, rec) in records.iter().enumerate() {
            let mut row = vec![t.to_string(), run_id.to_string(), rec.regret_at(t).to_string()];
            if let Some(trace) = rec.sampled_regret.as_ref().filter(|_| sampled) {
                row.push(trace[t as usize - 1].to_string());
            }
            w.write_record(&row)?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Files written by [`run_experiment`], in creation order.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub summary: Summary,
    pub files: Vec<PathBuf>,
}

pub fn run_experiment(config: &ExperimentConfig, options: RunOptions) -> Result<ExperimentReport> {
    config.validate()?;
    let dir = &config.output_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let outcome = simulate(config)?;
    let mut files = Vec::new();
    for po in &outcome.policies {
        let path = dir.join(format!("{}.csv", po.label));
        write_csv(&path, &po.records, config.horizon, options.dense)?;
        files.push(path);
    }
    let summary = summarize(config, &outcome);
    let path = dir.join(SUMMARY_FILE);
    let mut json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    json.push('\n');
    fs::write(&path, json).map_err(|e| Error::io(&path, e))?;
    files.push(path);
    if config.emit_plots && !options.no_plots {
        let path = dir.join(PLOT_FILE);
        let series: Vec<(String, &AggregateResult)> =
            outcome.policies.iter().map(|p| (p.label.clone(), &p.aggregate)).collect();
        write_regret_plot(&path, &series)?;
        files.push(path);
    }
    Ok(ExperimentReport { summary, files })
}

/// Reruns repetition `run_id` of the selected policies (all when `label` is
/// `None`) with full auditing.
pub fn replay(config: &ExperimentConfig, label: Option<&str>, run_id: u64) -> Result<Vec<(String, Environment, RunRecord)>> {
    config.validate()?;
    if run_id >= config.repetitions as u64 {
        return Err(Error::config(
            "--seed",
            format!("run id {run_id} is outside 0..{}", config.repetitions),
        ));
    }
    let env_index = match config.environment_mode {
        EnvironmentMode::Shared => 0,
        EnvironmentMode::FreshPerRun => run_id,
    };
    let env = Environment::sample(&config.environment, environment_seed(config.master_seed, env_index))?;
    let selected: Vec<_> = config
        .policies
        .iter()
        .filter(|p| label.is_none_or(|l| p.label() == l))
        .collect();
    if selected.is_empty() {
        return Err(Error::config("--policy", format!("no policy labelled {:?}", label.unwrap_or(""))));
    }
    selected
        .into_iter()
        .map(|pc| {
            let record = run_episode(
                &env,
                &pc.to_policy()?,
                config.horizon,
                reward_seed(config.master_seed, run_id),
                EpisodeOptions {
                    audit: true,
                    sampled_regret: config.sampled_regret,
                },
            )?;
            Ok((pc.label().to_string(), env.clone(), record))
        })
        .collect()
}

/// Human-readable log of a run: eliminations, and with `per_round` one line
/// per round.
pub fn format_trace(label: &str, env: &Environment, record: &RunRecord, per_round: bool) -> String {
    let space = env.space();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# {label} ({}) seed={} horizon={} optimal={} mu_star={}",
        record.policy,
        record.seed,
        record.horizon,
        space.label(env.optimal_action()),
        env.mu_star()
    );
    if per_round {
        let _ = writeln!(out, "round\ttaken\tchoices\teliminated\tgap\tcumulative_regret");
        let mut elims = record.eliminations.iter().peekable();
        for (i, &taken) in record.actions.iter().enumerate() {
            let round = i as u64 + 1;
            let eliminated = match elims.peek() {
                Some(e) if e.round == round => space.label(elims.next().expect("peeked").action),
                _ => "-".to_string(),
            };
            let choices = record
                .audit
                .as_ref()
                .map(|a| {
                    a.choices[i]
                        .iter()
                        .map(|c| (c + 1).to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{round}\t{}\t{choices}\t{eliminated}\t{}\t{}",
                space.label(taken),
                env.gap(taken),
                record.regret_trace[i]
            );
        }
    }
    for e in &record.eliminations {
        let _ = writeln!(out, "eliminated {} at round {}", space.label(e.action), e.round);
    }
    if let Some(set) = &record.final_desired {
        let labels: Vec<_> = set.iter().map(|&id| space.label(id)).collect();
        let _ = writeln!(out, "final desired set: [{}]", labels.join(", "));
    }
    let _ = writeln!(out, "final regret: {}", record.final_regret());
    out
}

/// Median of the final-round values of a set of runs, computed the same way
/// as the aggregate.
pub fn median_final(records: &[RunRecord]) -> f64 {
    let mut finals: Vec<f64> = records.iter().map(RunRecord::final_regret).collect();
    finals.sort_by(f64::total_cmp);
    quantile(&finals, 0.5)
}
