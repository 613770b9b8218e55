//! Experiment configuration, read from and written to JSON.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Density,
    LambdaSweep,
    EscapeSweep,
    StarScaling,
    LitTransfer,
}

/// Observation time: fixed, or `scale * (ln n)^log_power` for graph size `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimeSpec {
    Fixed { t: f64 },
    Schedule { scale: f64, log_power: f64 },
}

impl TimeSpec {
    pub fn resolve(&self, n: usize) -> f64 {
        match *self {
            TimeSpec::Fixed { t } => t,
            TimeSpec::Schedule { scale, log_power } => scale * (n as f64).ln().powf(log_power),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub m: u32,
    pub alpha: f64,
    /// Graph size for density experiments.
    #[serde(default)]
    pub n: usize,
    /// Ball radius for escape sweeps; trees are sampled one level deeper.
    #[serde(default)]
    pub radius: usize,
    pub degree_cap: u64,
    pub lambdas: Vec<f64>,
    /// Observation time (density) or horizon (star, lit transfer).
    pub time: TimeSpec,
    /// Extra observation times for density runs, at most the resolved time.
    #[serde(default)]
    pub observe_times: Vec<f64>,
    pub replicas: usize,
    pub seed: u64,
    pub event_cap: u64,
    /// Star sizes for star-scaling and lit-transfer experiments.
    #[serde(default)]
    pub leaf_counts: Vec<u64>,
    /// Distance between the two centres in lit-transfer experiments.
    #[serde(default)]
    pub distance: usize,
}

impl ExperimentConfig {
    /// Defaults for each kind at modest desk scale.
    pub fn preset(kind: ExperimentKind) -> Self {
        let base = ExperimentConfig {
            kind,
            m: 2,
            alpha: 0.0,
            n: 0,
            radius: 0,
            degree_cap: polya_contact_core::locallimit::DEFAULT_DEGREE_CAP,
            lambdas: vec![],
            time: TimeSpec::Fixed { t: 10.0 },
            observe_times: vec![],
            replicas: 30,
            seed: 1,
            event_cap: 2_000_000_000,
            leaf_counts: vec![],
            distance: 0,
        };
        match kind {
            ExperimentKind::Density => ExperimentConfig { n: 10_000, lambdas: vec![0.3], time: TimeSpec::Fixed { t: 50.0 }, ..base },
            ExperimentKind::LambdaSweep => ExperimentConfig {
                n: 100_000,
                lambdas: vec![0.15, 0.2, 0.25, 0.3, 0.35, 0.4],
                time: TimeSpec::Fixed { t: 100.0 },
                ..base
            },
            ExperimentKind::EscapeSweep => ExperimentConfig {
                radius: 3,
                lambdas: vec![0.15, 0.2, 0.25, 0.3, 0.35, 0.4],
                replicas: 2_000,
                ..base
            },
            ExperimentKind::StarScaling => ExperimentConfig {
                lambdas: vec![0.5],
                leaf_counts: vec![50, 100, 200, 400],
                replicas: 1_000,
                time: TimeSpec::Fixed { t: 3e4 },
                ..base
            },
            ExperimentKind::LitTransfer => ExperimentConfig {
                lambdas: vec![0.5],
                leaf_counts: vec![10, 100, 1_000, 10_000],
                distance: 1,
                replicas: 100,
                time: TimeSpec::Fixed { t: 1e3 },
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.replicas < 1 {
            return bad("replicas must be at least 1".into());
        }
        polya_contact_core::Constants::new(self.m, self.alpha)?;
        if self.lambdas.is_empty() {
            return bad("lambda grid is empty".into());
        }
        let sweep = matches!(self.kind, ExperimentKind::LambdaSweep | ExperimentKind::EscapeSweep);
        for &l in &self.lambdas {
            let ok = l.is_finite() && if sweep { l > 0.0 } else { l >= 0.0 };
            if !ok {
                return bad(format!("lambda {l} not allowed (sweeps need lambda > 0, other kinds lambda >= 0)"));
            }
        }
        if sweep && self.lambdas.len() < 5 {
            return bad(format!("a sweep needs at least 5 lambda values, got {}", self.lambdas.len()));
        }
        let t = self.time.resolve(self.n.max(2));
        if !(t >= 0.0 && t.is_finite()) {
            return bad(format!("time resolves to {t}"));
        }
        let mut prev = 0.0;
        for &o in &self.observe_times {
            if !(o >= prev && o <= t) {
                return bad(format!("observe_times must be sorted within [0, {t}]"));
            }
            prev = o;
        }
        match self.kind {
            ExperimentKind::Density | ExperimentKind::LambdaSweep if self.n < 2 => bad("n must be at least 2".into()),
            ExperimentKind::EscapeSweep if self.degree_cap < self.m as u64 + 1 => bad("degree_cap must be at least m + 1".into()),
            ExperimentKind::StarScaling if self.leaf_counts.len() < 2 => bad("star scaling needs at least 2 sizes".into()),
            ExperimentKind::LitTransfer if self.leaf_counts.is_empty() || self.distance < 1 => {
                bad("lit transfer needs star sizes and distance >= 1".into())
            }
            _ => Ok(()),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn presets_validate() {
        for kind in [
            ExperimentKind::Density,
            ExperimentKind::LambdaSweep,
            ExperimentKind::EscapeSweep,
            ExperimentKind::StarScaling,
            ExperimentKind::LitTransfer,
        ] {
            ExperimentConfig::preset(kind).validate().unwrap();
        }
    }

    #[test]
    fn contract_violations() {
        let mut c = ExperimentConfig::preset(ExperimentKind::LambdaSweep);
        c.lambdas = vec![0.3];
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::preset(ExperimentKind::LambdaSweep);
        c.lambdas[0] = 0.0;
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::preset(ExperimentKind::Density);
        c.lambdas = vec![0.0];
        assert!(c.validate().is_ok());
        c.replicas = 0;
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::preset(ExperimentKind::StarScaling);
        c.leaf_counts = vec![10];
        assert!(c.validate().is_err());
        assert!(ExperimentConfig::from_json("{\"kind\":\"density\",\"bogus\":1}").is_err());
    }

    #[test]
    fn schedule_resolves() {
        let t = TimeSpec::Schedule { scale: 2.0, log_power: 1.0 };
        assert!((t.resolve(100) - 2.0 * 100f64.ln()).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn json_round_trips_exactly(alpha in 0.0f64..0.99, lambdas in proptest::collection::vec(1e-6f64..10.0, 5..9), seed: u64, t in 0.0f64..1e6) {
            let mut c = ExperimentConfig::preset(ExperimentKind::LambdaSweep);
            c.alpha = alpha;
            c.lambdas = lambdas;
            c.seed = seed;
            c.time = TimeSpec::Fixed { t };
            let back = ExperimentConfig::from_json(&c.to_json()).unwrap();
            prop_assert_eq!(back, c);
        }
    }
}
