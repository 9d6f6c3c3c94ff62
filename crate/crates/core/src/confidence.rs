//! Running reward statistics and the confidence intervals built from them.
//!
//! Every policy in the crate reads its rewards through [`ArmStats`]. The
//! elimination protocol compares [`ConfidenceInterval`]s whose half-width is
//! `gamma * sqrt(ln(1/delta) / n)`; the classic UCB index is kept around as a
//! diagnostic and equals the interval's upper endpoint when `gamma = sqrt(2)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pull count and running empirical mean of one joint action, as seen by one
/// reward stream.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ArmStats {
    pulls: u64,
    mean: f64,
}

impl ArmStats {
    /// Statistics of an action that has never been pulled.
    pub const fn new() -> Self {
        Self { pulls: 0, mean: 0.0 }
    }

    /// Builds statistics directly from a pull count and mean.
    ///
    /// A zero pull count always yields the empty state, whatever `mean` is.
    pub fn from_parts(pulls: u64, mean: f64) -> Self {
        if pulls == 0 {
            Self::new()
        } else {
            Self { pulls, mean }
        }
    }

    pub fn pulls(&self) -> u64 {
        self.pulls
    }

    /// Empirical mean, or `None` before the first observation.
    pub fn mean(&self) -> Option<f64> {
        (self.pulls > 0).then_some(self.mean)
    }

    /// Folds one reward into the running mean.
    pub fn record(&mut self, reward: f64) {
        self.pulls += 1;
        self.mean += (reward - self.mean) / self.pulls as f64;
    }

    /// Value-returning form of [`ArmStats::record`].
    pub fn updated(mut self, reward: f64) -> Self {
        self.record(reward);
        self
    }
}

/// Open interval `(lo, hi)`. The interval of an unpulled action is the whole
/// real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub lo: f64,
    pub hi: f64,
}

impl ConfidenceInterval {
    pub const UNBOUNDED: Self = Self {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::Domain(format!(
                "confidence interval needs lo < hi, got ({lo}, {hi})"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn around(center: f64, half_width: f64) -> Self {
        Self {
            lo: center - half_width,
            hi: center + half_width,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn is_unbounded(&self) -> bool {
        self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY
    }

    /// True iff `self` lies strictly above `other` with no overlap.
    pub fn is_disjoint_above(&self, other: &Self) -> bool {
        is_disjoint_above(self, other)
    }
}

/// Confidence parameter `delta` and interval scale `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthParams {
    delta: f64,
    gamma: f64,
    #[serde(skip)]
    log_inv_delta: f64,
}

impl WidthParams {
    pub fn new(delta: f64, gamma: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::Domain(format!("delta must lie in (0, 1), got {delta}")));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Domain(format!("gamma must be > 0, got {gamma}")));
        }
        Ok(Self {
            delta,
            gamma,
            log_inv_delta: -delta.ln(),
        })
    }

    /// `delta = 1/T^2`, the default for a horizon of `T` rounds.
    pub fn inverse_t_squared(horizon: u64, gamma: f64) -> Result<Self> {
        let t = horizon as f64;
        Self::new(1.0 / (t * t), gamma)
    }

    /// `delta = T^(-2/gamma)`, the schedule used by the regret analysis.
    pub fn proof_schedule(horizon: u64, gamma: f64) -> Result<Self> {
        if gamma.is_nan() || gamma <= 0.0 {
            return Err(Error::Domain(format!("gamma must be > 0, got {gamma}")));
        }
        Self::new((horizon as f64).powf(-2.0 / gamma), gamma)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `ln(1/delta)`.
    pub fn log_inv_delta(&self) -> f64 {
        self.log_inv_delta
    }

    pub(crate) fn half_width(&self, pulls: u64) -> f64 {
        self.gamma * (self.log_inv_delta / pulls as f64).sqrt()
    }
}

/// Half-width `gamma * sqrt(ln(1/delta) / n)` after `n` pulls.
///
/// `n = 0` is a domain error; an unpulled action gets
/// [`ConfidenceInterval::UNBOUNDED`] instead.
pub fn epsilon(pulls: u64, params: &WidthParams) -> Result<f64> {
    if pulls == 0 {
        return Err(Error::Domain(
            "epsilon is undefined for zero pulls; use the unbounded interval".into(),
        ));
    }
    Ok(params.half_width(pulls))
}

pub fn interval_of(stats: &ArmStats, params: &WidthParams) -> ConfidenceInterval {
    match stats.mean() {
        None => ConfidenceInterval::UNBOUNDED,
        Some(mean) => ConfidenceInterval::around(mean, params.half_width(stats.pulls())),
    }
}

/// Elimination trigger: `upper.lo > lower.hi`, strictly.
pub fn is_disjoint_above(upper: &ConfidenceInterval, lower: &ConfidenceInterval) -> bool {
    upper.lo > lower.hi
}

pub fn update_stats(stats: ArmStats, reward: f64) -> ArmStats {
    stats.updated(reward)
}

/// UCB index `mean + sqrt(2 ln(1/delta) / n)`, infinite before the first pull.
pub fn ucb_index(stats: &ArmStats, delta: f64) -> f64 {
    match stats.mean() {
        None => f64::INFINITY,
        Some(mean) => mean + (2.0 * (1.0 / delta).ln() / stats.pulls() as f64).sqrt(),
    }
}
