//! Analytic ground-truth environment.
//!
//! Each provider carries a sinusoidal system load, a load-dependent minimum
//! supportable delay, and a piecewise S-curve acceptance probability.
//! Providers also emit binary admission feedback used to train risk models.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::decompose::DomainEvaluator;

/// Hidden per-provider parameters driving load, minimum delay, and the true
/// acceptance probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProviderGroundTruth {
    /// Baseline latency in milliseconds, with the domain-wise additional
    /// latency already folded in.
    pub alpha: f64,
    /// Load sensitivity (per load-unit).
    pub beta: f64,
    /// Acceptance-rate parameter (per millisecond).
    pub lambda: f64,
    /// Baseline system load (load-units).
    pub load_base: f64,
    /// Static load fraction in [0, 1].
    pub k_static: f64,
    /// Sinusoid period in time-steps.
    pub period: f64,
    /// Phase shift in radians.
    pub phase: f64,
}

impl ProviderGroundTruth {
    /// System load at integer time-step `t`.
    ///
    /// Oscillates between `load_base * k_static` (static floor) and
    /// `load_base` (peak).
    pub fn system_load(&self, t: u64) -> f64 {
        let dynamic = (1.0 + (2.0 * PI * t as f64 / self.period + self.phase).sin()) / 2.0;
        self.load_base * self.k_static + self.load_base * (1.0 - self.k_static) * dynamic
    }

    /// Minimum delay (ms) the provider can support at time-step `t`:
    /// a fixed latency floor plus an exponential function of the load.
    pub fn min_supportable_delay(&self, t: u64) -> f64 {
        self.alpha + (self.beta * self.system_load(t)).exp()
    }

    /// True probability that a request with delay budget `delay_ms` is
    /// admitted at time-step `t`. Zero below the minimum supportable delay,
    /// then saturating towards one with the excess delay.
    pub fn true_acceptance_probability(&self, delay_ms: f64, t: u64) -> f64 {
        let d_min = self.min_supportable_delay(t);
        if delay_ms < d_min {
            0.0
        } else {
            1.0 - (-self.lambda * (delay_ms - d_min)).exp()
        }
    }

    /// Draws one step of admission feedback: `floor(load)` requests with
    /// delays uniform in [10 ms, 100 ms], each admitted by a coin flip
    /// against the true acceptance probability.
    pub fn generate_feedback<R: Rng>(&self, t: u64, rng: &mut R) -> Vec<FeedbackSample> {
        let count = self.system_load(t).floor() as usize;
        (0..count)
            .map(|_| {
                let delay = rng.random_range(FEEDBACK_DELAY_MIN_MS..=FEEDBACK_DELAY_MAX_MS);
                let accepted = rng.random::<f64>() < self.true_acceptance_probability(delay, t);
                FeedbackSample { delay, accepted }
            })
            .collect()
    }

    fn violations(&self, path: &str, out: &mut Vec<String>) {
        if !(self.alpha >= 0.0) {
            out.push(format!("{path}.alpha: must be >= 0, got {}", self.alpha));
        }
        if !(self.beta >= 0.0) {
            out.push(format!("{path}.beta: must be >= 0, got {}", self.beta));
        }
        if !(self.lambda > 0.0) {
            out.push(format!("{path}.lambda: must be > 0, got {}", self.lambda));
        }
        if !(self.load_base > 0.0) {
            out.push(format!("{path}.load_base: must be > 0, got {}", self.load_base));
        }
        if !(0.0..=1.0).contains(&self.k_static) {
            out.push(format!("{path}.k_static: must be in [0, 1], got {}", self.k_static));
        }
        if !(self.period >= 1.0) {
            out.push(format!("{path}.period: must be >= 1, got {}", self.period));
        }
    }
}

/// Feedback delays are sampled uniformly from this closed interval (ms).
pub const FEEDBACK_DELAY_MIN_MS: f64 = 10.0;
pub const FEEDBACK_DELAY_MAX_MS: f64 = 100.0;

/// One historical observation: a requested delay and its admission outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeedbackSample {
    /// Requested delay in milliseconds.
    pub delay: f64,
    /// Admission outcome.
    pub accepted: bool,
}

/// The full ground-truth world: an ordered list of domains, each an ordered
/// list of providers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub domains: Vec<Vec<ProviderGroundTruth>>,
    /// Additional latency per domain (ms); folded into every provider's
    /// `alpha` of that domain at build time, kept here for replay.
    pub domain_extra_latency: Vec<f64>,
}

impl Environment {
    pub fn num_domains(&self) -> usize {
        self.domains.len()
    }

    /// Provider count per domain, in domain order.
    pub fn domain_sizes(&self) -> Vec<usize> {
        self.domains.iter().map(Vec::len).collect()
    }

    pub fn provider(&self, domain: usize, provider: usize) -> &ProviderGroundTruth {
        &self.domains[domain][provider]
    }

    /// Ground-truth end-to-end acceptance probability of a concrete solution:
    /// the product over domains of the selected provider's acceptance
    /// probability at the allotted delay.
    pub fn true_e2e_probability(&self, t: u64, providers: &[usize], delays: &[f64]) -> f64 {
        assert_eq!(providers.len(), self.num_domains());
        assert_eq!(delays.len(), self.num_domains());
        self.domains
            .iter()
            .zip(providers)
            .zip(delays)
            .map(|((domain, &j), &d)| domain[j].true_acceptance_probability(d, t))
            .product()
    }

    /// Serializes every parameter at full precision so a run can be replayed
    /// exactly.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("environment serialization cannot fail")
    }

    pub fn from_json(json: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(json)
            .map_err(|e| ConfigError::new(vec![format!("environment: invalid JSON: {e}")]))
    }
}

/// Evaluates one provider's true acceptance probability at a fixed time-step.
/// Adapts ground truth to the decomposition layer's evaluator interface.
pub struct GroundTruthEvaluator<'a> {
    pub provider: &'a ProviderGroundTruth,
    pub t: u64,
}

impl DomainEvaluator for GroundTruthEvaluator<'_> {
    fn acceptance(&self, delay_ms: f64) -> f64 {
        self.provider.true_acceptance_probability(delay_ms, self.t)
    }
}

/// Sampling ranges for randomly generated provider ground truths.
///
/// All ranges are closed intervals; collapsing a range to a point pins the
/// parameter. `lambda` and `k_static` are shared by every provider.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnvironmentConfig {
    pub alpha_range: [f64; 2],
    pub beta_range: [f64; 2],
    pub load_base_range: [f64; 2],
    /// Integer period range (inclusive), in time-steps.
    pub period_range: [u64; 2],
    pub phase_range: [f64; 2],
    pub lambda: f64,
    pub k_static: f64,
    /// Per-domain additional latency is drawn uniformly from this set (ms).
    pub extra_latency_choices: Vec<f64>,
}

impl Default for EnvironmentConfig {
    fn default() -> Self {
        Self {
            alpha_range: [0.0, 2.0],
            beta_range: [0.04, 0.06],
            load_base_range: [30.0, 50.0],
            period_range: [30, 60],
            phase_range: [0.0, PI],
            lambda: 0.2,
            k_static: 0.5,
            extra_latency_choices: vec![0.0, 10.0, 20.0],
        }
    }
}

impl EnvironmentConfig {
    /// Collects invariant violations, prefixing field paths with `path`.
    pub fn violations(&self, path: &str, out: &mut Vec<String>) {
        let range = |name: &str, lo: f64, hi: f64, min: f64, out: &mut Vec<String>| {
            if !(lo <= hi) {
                out.push(format!("{path}.{name}: empty interval [{lo}, {hi}]"));
            }
            if !(lo >= min) {
                out.push(format!("{path}.{name}: lower bound must be >= {min}, got {lo}"));
            }
        };
        range("alpha_range", self.alpha_range[0], self.alpha_range[1], 0.0, out);
        range("beta_range", self.beta_range[0], self.beta_range[1], 0.0, out);
        range("load_base_range", self.load_base_range[0], self.load_base_range[1], 0.0, out);
        if self.load_base_range[0] <= 0.0 {
            out.push(format!(
                "{path}.load_base_range: lower bound must be > 0, got {}",
                self.load_base_range[0]
            ));
        }
        if self.period_range[0] > self.period_range[1] {
            out.push(format!(
                "{path}.period_range: empty interval [{}, {}]",
                self.period_range[0], self.period_range[1]
            ));
        }
        if self.period_range[0] < 1 {
            out.push(format!(
                "{path}.period_range: lower bound must be >= 1, got {}",
                self.period_range[0]
            ));
        }
        if !(self.phase_range[0] <= self.phase_range[1]) {
            out.push(format!(
                "{path}.phase_range: empty interval [{}, {}]",
                self.phase_range[0], self.phase_range[1]
            ));
        }
        if !(self.lambda > 0.0) {
            out.push(format!("{path}.lambda: must be > 0, got {}", self.lambda));
        }
        if !(0.0..=1.0).contains(&self.k_static) {
            out.push(format!("{path}.k_static: must be in [0, 1], got {}", self.k_static));
        }
        if self.extra_latency_choices.is_empty() {
            out.push(format!("{path}.extra_latency_choices: must not be empty"));
        }
        for (i, v) in self.extra_latency_choices.iter().enumerate() {
            if !(*v >= 0.0) {
                out.push(format!("{path}.extra_latency_choices[{i}]: must be >= 0, got {v}"));
            }
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut out = Vec::new();
        self.violations("environment", &mut out);
        if out.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::new(out))
        }
    }
}

/// Configuration rejected before any work: one message per violated field.
#[derive(Debug, Clone, thiserror::Error)]
#[error("invalid configuration: {}", .violations.join("; "))]
pub struct ConfigError {
    violations: Vec<String>,
}

impl ConfigError {
    pub fn new(violations: Vec<String>) -> Self {
        Self { violations }
    }

    pub fn violations(&self) -> &[String] {
        &self.violations
    }
}

/// Builds a fully populated environment from sampling ranges.
///
/// One extra latency is drawn per domain and folded into each provider's
/// `alpha`. Draw order is fixed (per domain: extra latency, then per provider
/// alpha, beta, load_base, period, phase) so the result is a pure function of
/// the stream state.
pub fn build_environment<R: Rng>(
    domains: usize,
    providers_per_domain: usize,
    config: &EnvironmentConfig,
    rng: &mut R,
) -> Result<Environment, ConfigError> {
    config.validate()?;
    if domains == 0 || providers_per_domain == 0 {
        return Err(ConfigError::new(vec![format!(
            "environment: domains and providers_per_domain must be >= 1, got {domains} x {providers_per_domain}"
        )]));
    }

    let mut env = Environment {
        domains: Vec::with_capacity(domains),
        domain_extra_latency: Vec::with_capacity(domains),
    };
    for _ in 0..domains {
        let extra = config.extra_latency_choices
            [rng.random_range(0..config.extra_latency_choices.len())];
        env.domain_extra_latency.push(extra);
        let providers = (0..providers_per_domain)
            .map(|_| ProviderGroundTruth {
                alpha: rng.random_range(config.alpha_range[0]..=config.alpha_range[1]) + extra,
                beta: rng.random_range(config.beta_range[0]..=config.beta_range[1]),
                lambda: config.lambda,
                load_base: rng
                    .random_range(config.load_base_range[0]..=config.load_base_range[1]),
                k_static: config.k_static,
                period: rng.random_range(config.period_range[0]..=config.period_range[1]) as f64,
                phase: rng.random_range(config.phase_range[0]..=config.phase_range[1]),
            })
            .collect();
        env.domains.push(providers);
    }

    let mut violations = Vec::new();
    for (i, domain) in env.domains.iter().enumerate() {
        for (j, p) in domain.iter().enumerate() {
            p.violations(&format!("environment.domains[{i}][{j}]"), &mut violations);
        }
    }
    if violations.is_empty() {
        Ok(env)
    } else {
        Err(ConfigError::new(violations))
    }
}
