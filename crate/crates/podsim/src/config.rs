//! JSON config documents.
//!
//! Every document is a JSON object. Graphs, models and schedules are tagged
//! objects: `{"type": "er", "n": 500, "rho": 0.05}`. Structural problems
//! (unknown keys, wrong types) surface as parse errors; range problems are
//! collected field by field into a single schema error.

use std::collections::BTreeMap;
use std::path::Path;

use podsim_core::graph::mag_affinity;
use podsim_core::pod::ExposurePolicy;
use podsim_core::{AffinityMatrix, Belief, ContagionModel, GraphKind, MessageSchedule, RunConfig};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, FieldError, Result};
use crate::presets;

type Theta = [[f64; Belief::LEVELS]; Belief::LEVELS];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
#[allow(clippy::large_enum_variant)]
pub enum GraphConfig {
    Er {
        n: usize,
        rho: f64,
    },
    Ws {
        n: usize,
        k: usize,
        rho: f64,
    },
    Ba {
        n: usize,
        m: usize,
    },
    /// `theta` defaults to the homophilic affinity matrix.
    Mag {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta: Option<Theta>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    Simple {
        #[serde(default = "default_p")]
        p: f64,
    },
    Complex {
        #[serde(default = "default_alpha")]
        alpha: f64,
    },
    Threshold {
        gamma: u32,
    },
    Linear {
        gamma: f64,
        alpha: f64,
    },
    Sigmoid {
        alpha: f64,
        gamma: f64,
    },
    /// Sigmoid with `alpha = 4, gamma = 2`.
    Dcc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleConfig {
    Single {
        #[serde(default = "default_high")]
        level: u8,
    },
    Split {
        #[serde(default = "default_high")]
        first: u8,
        #[serde(default)]
        second: u8,
        #[serde(default = "default_switch")]
        switch_tick: u32,
    },
    Gradual {
        #[serde(default = "default_high")]
        start: u8,
        #[serde(default)]
        end: u8,
        #[serde(default = "default_interval")]
        interval: u32,
    },
    /// Levels per tick, keyed by tick number; every tick `1..=T` must appear.
    Explicit {
        #[serde(deserialize_with = "tick_keys")]
        levels: BTreeMap<u32, Vec<u8>>,
    },
}

// Tagged enums buffer their content, so numeric map keys arrive as strings.
fn tick_keys<'de, D: serde::Deserializer<'de>>(
    d: D,
) -> std::result::Result<BTreeMap<u32, Vec<u8>>, D::Error> {
    let raw = BTreeMap::<String, Vec<u8>>::deserialize(d)?;
    raw.into_iter()
        .map(|(k, v)| {
            k.parse().map(|t| (t, v)).map_err(|_| {
                serde::de::Error::custom(format!("tick `{k}` is not a non-negative integer"))
            })
        })
        .collect()
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig::Single { level: 6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyConfig {
    #[default]
    FirstCopy,
    PerCopy,
}

impl From<PolicyConfig> for ExposurePolicy {
    fn from(p: PolicyConfig) -> Self {
        match p {
            PolicyConfig::FirstCopy => ExposurePolicy::FirstCopy,
            PolicyConfig::PerCopy => ExposurePolicy::PerCopy,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationConfig {
    #[default]
    PerEdge,
    Eq11,
}

fn default_p() -> f64 {
    podsim_core::kernel::DEFAULT_SIMPLE_P
}
fn default_alpha() -> f64 {
    podsim_core::kernel::DEFAULT_COMPLEX_ALPHA
}
fn default_high() -> u8 {
    6
}
fn default_switch() -> u32 {
    50
}
fn default_interval() -> u32 {
    10
}
fn default_ticks() -> u32 {
    100
}
fn default_repetitions() -> usize {
    10
}
fn default_taus() -> Vec<u32> {
    vec![1, 2]
}
fn default_trials() -> usize {
    100
}
fn default_seeds() -> usize {
    10
}

/// Input of `podsim run`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub graph: GraphConfig,
    pub model: ModelConfig,
    #[serde(default)]
    pub schedule: ScheduleConfig,
    #[serde(rename = "T", default = "default_ticks")]
    pub ticks: u32,
    #[serde(default = "default_high")]
    pub institution_belief: u8,
    #[serde(default)]
    pub epsilon: u8,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub policy: PolicyConfig,
}

/// Input of `podsim graph`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub graph: GraphConfig,
    #[serde(default)]
    pub seed: u64,
}

/// Input of `podsim beta-table`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub model: ModelConfig,
}

/// Input of `podsim census`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CensusFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub graph: GraphConfig,
    #[serde(default = "default_taus")]
    pub taus: Vec<u32>,
    #[serde(default = "default_high")]
    pub msg_level: u8,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
}

/// Input of `podsim homophily`: one graph family over `seeds` seeds
/// starting at `seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomophilyFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub graph: GraphConfig,
    #[serde(default = "default_seeds")]
    pub seeds: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub normalization: NormalizationConfig,
}

/// Collects range violations under a dotted field prefix.
#[derive(Default)]
struct Checker {
    errors: Vec<FieldError>,
}

impl Checker {
    fn check(&mut self, ok: bool, field: &str, reason: &str) {
        if !ok {
            self.errors.push(FieldError::new(field, reason));
        }
    }

    fn level(&mut self, value: u8, field: &str) -> Belief {
        self.check(value <= 6, field, "must lie in 0..=6");
        Belief::new(value.min(6)).expect("clamped")
    }

    fn finish<T>(self, value: T) -> Result<T> {
        if self.errors.is_empty() {
            Ok(value)
        } else {
            Err(CliError::Schema(self.errors))
        }
    }
}

fn unit(x: f64) -> bool {
    (0.0..=1.0).contains(&x)
}

impl GraphConfig {
    pub fn from_kind(kind: &GraphKind) -> Self {
        match *kind {
            GraphKind::ErdosRenyi { n, rho } => GraphConfig::Er { n, rho },
            GraphKind::WattsStrogatz { n, k, rho } => GraphConfig::Ws { n, k, rho },
            GraphKind::BarabasiAlbert { n, m } => GraphConfig::Ba { n, m },
            GraphKind::Mag { n, ref theta } => GraphConfig::Mag {
                n,
                theta: (*theta != mag_affinity()).then(|| *theta.rows()),
            },
        }
    }

    fn check(&self, c: &mut Checker, at: &str) -> Option<GraphKind> {
        let f = |name: &str| format!("{at}.{name}");
        let n = match *self {
            GraphConfig::Er { n, .. }
            | GraphConfig::Ws { n, .. }
            | GraphConfig::Ba { n, .. }
            | GraphConfig::Mag { n, .. } => n,
        };
        c.check(n >= 1, &f("n"), "must be at least 1");
        let before = c.errors.len();
        let kind = match *self {
            GraphConfig::Er { n, rho } => {
                c.check(unit(rho), &f("rho"), "must lie in [0, 1]");
                GraphKind::ErdosRenyi { n, rho }
            }
            GraphConfig::Ws { n, k, rho } => {
                c.check(k >= 1, &f("k"), "must be at least 1");
                c.check(n > 2 * k, &f("k"), "n must exceed 2k");
                c.check(unit(rho), &f("rho"), "must lie in [0, 1]");
                GraphKind::WattsStrogatz { n, k, rho }
            }
            GraphConfig::Ba { n, m } => {
                c.check(m >= 1, &f("m"), "must be at least 1");
                c.check(n > m, &f("m"), "n must exceed m");
                GraphKind::BarabasiAlbert { n, m }
            }
            GraphConfig::Mag { n, theta } => {
                let theta = match theta {
                    None => mag_affinity(),
                    Some(rows) => match AffinityMatrix::new(rows) {
                        Ok(t) => t,
                        Err(_) => {
                            c.check(
                                false,
                                &f("theta"),
                                "must be symmetric with entries in [0, 1]",
                            );
                            mag_affinity()
                        }
                    },
                };
                GraphKind::Mag { n, theta }
            }
        };
        (c.errors.len() == before && n >= 1).then_some(kind)
    }

    pub fn to_kind(&self) -> Result<GraphKind> {
        let mut c = Checker::default();
        let kind = self.check(&mut c, "graph");
        c.finish(kind).map(|k| k.expect("checked"))
    }
}

impl ModelConfig {
    pub fn from_model(model: &ContagionModel) -> Self {
        match *model {
            ContagionModel::Simple { p } => ModelConfig::Simple { p },
            ContagionModel::Complex { alpha } => ModelConfig::Complex { alpha },
            ContagionModel::CognitiveThreshold { gamma } => ModelConfig::Threshold { gamma },
            ContagionModel::CognitiveLinear { gamma, alpha } => {
                ModelConfig::Linear { gamma, alpha }
            }
            ContagionModel::CognitiveSigmoid { alpha, gamma } => {
                ModelConfig::Sigmoid { alpha, gamma }
            }
        }
    }

    fn check(&self, c: &mut Checker, at: &str) -> ContagionModel {
        let f = |name: &str| format!("{at}.{name}");
        let nonneg = |x: f64| x >= 0.0 && x.is_finite();
        match *self {
            ModelConfig::Simple { p } => {
                c.check(p > 0.0 && p < 1.0, &f("p"), "must lie in (0, 1)");
                ContagionModel::Simple { p }
            }
            ModelConfig::Complex { alpha } => {
                c.check(unit(alpha), &f("alpha"), "must lie in [0, 1]");
                ContagionModel::Complex { alpha }
            }
            ModelConfig::Threshold { gamma } => ContagionModel::CognitiveThreshold { gamma },
            ModelConfig::Linear { gamma, alpha } => {
                c.check(
                    nonneg(gamma),
                    &f("gamma"),
                    "must be finite and non-negative",
                );
                c.check(
                    nonneg(alpha),
                    &f("alpha"),
                    "must be finite and non-negative",
                );
                c.check(
                    gamma > 0.0 || alpha != 0.0,
                    &f("gamma"),
                    "must be positive when alpha is 0",
                );
                ContagionModel::CognitiveLinear { gamma, alpha }
            }
            ModelConfig::Sigmoid { alpha, gamma } => {
                c.check(
                    nonneg(alpha),
                    &f("alpha"),
                    "must be finite and non-negative",
                );
                c.check(gamma.is_finite(), &f("gamma"), "must be finite");
                ContagionModel::CognitiveSigmoid { alpha, gamma }
            }
            ModelConfig::Dcc => ContagionModel::dcc(),
        }
    }

    pub fn to_model(&self) -> Result<ContagionModel> {
        let mut c = Checker::default();
        let model = self.check(&mut c, "model");
        c.finish(model)
    }
}

impl ScheduleConfig {
    pub fn from_schedule(s: &MessageSchedule) -> Self {
        match s {
            MessageSchedule::Single { level } => ScheduleConfig::Single { level: level.get() },
            MessageSchedule::Split {
                first,
                second,
                switch_tick,
            } => ScheduleConfig::Split {
                first: first.get(),
                second: second.get(),
                switch_tick: *switch_tick,
            },
            MessageSchedule::Gradual {
                start,
                end,
                interval,
            } => ScheduleConfig::Gradual {
                start: start.get(),
                end: end.get(),
                interval: *interval,
            },
            MessageSchedule::Explicit(map) => ScheduleConfig::Explicit {
                levels: map
                    .iter()
                    .map(|(&t, v)| (t, v.iter().map(|b| b.get()).collect()))
                    .collect(),
            },
        }
    }

    fn check(&self, c: &mut Checker, at: &str, ticks: u32) -> MessageSchedule {
        let f = |name: &str| format!("{at}.{name}");
        let schedule = match self {
            ScheduleConfig::Single { level } => MessageSchedule::Single {
                level: c.level(*level, &f("level")),
            },
            ScheduleConfig::Split {
                first,
                second,
                switch_tick,
            } => MessageSchedule::Split {
                first: c.level(*first, &f("first")),
                second: c.level(*second, &f("second")),
                switch_tick: *switch_tick,
            },
            ScheduleConfig::Gradual {
                start,
                end,
                interval,
            } => {
                c.check(*interval >= 1, &f("interval"), "must be at least 1");
                MessageSchedule::Gradual {
                    start: c.level(*start, &f("start")),
                    end: c.level(*end, &f("end")),
                    interval: *interval,
                }
            }
            ScheduleConfig::Explicit { levels } => {
                let mut map = BTreeMap::new();
                for (&tick, list) in levels {
                    let field = format!("{at}.levels.{tick}");
                    c.check(tick >= 1 && tick <= ticks, &field, "tick must lie in 1..=T");
                    map.insert(tick, list.iter().map(|&x| c.level(x, &field)).collect());
                }
                let missing = (1..=ticks).filter(|t| !levels.contains_key(t)).count();
                c.check(
                    missing == 0,
                    &f("levels"),
                    "every tick in 1..=T must be listed",
                );
                MessageSchedule::Explicit(map)
            }
        };
        schedule
    }

    pub fn to_schedule(&self, ticks: u32) -> Result<MessageSchedule> {
        let mut c = Checker::default();
        let s = self.check(&mut c, "schedule", ticks);
        c.finish(s)
    }
}

/// A validated `run` document.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub name: String,
    pub config: RunConfig,
    pub repetitions: usize,
}

impl RunFile {
    pub fn from_experiment(e: &Experiment) -> Self {
        let c = &e.config;
        RunFile {
            name: Some(e.name.clone()),
            graph: GraphConfig::from_kind(&c.graph),
            model: ModelConfig::from_model(&c.model),
            schedule: ScheduleConfig::from_schedule(&c.schedule),
            ticks: c.ticks,
            institution_belief: c.institution_belief.get(),
            epsilon: c.epsilon,
            repetitions: e.repetitions,
            seed: c.seed,
            policy: match c.policy {
                ExposurePolicy::FirstCopy => PolicyConfig::FirstCopy,
                ExposurePolicy::PerCopy => PolicyConfig::PerCopy,
            },
        }
    }

    /// Validates every section and reports all offending fields at once.
    pub fn validate(&self, fallback_name: &str) -> Result<Experiment> {
        let mut c = Checker::default();
        let graph = self.graph.check(&mut c, "graph");
        let model = self.model.check(&mut c, "model");
        c.check(self.ticks >= 1, "T", "must be at least 1");
        let schedule = self.schedule.check(&mut c, "schedule", self.ticks);
        let institution_belief = c.level(self.institution_belief, "institution_belief");
        c.check(self.epsilon <= 6, "epsilon", "must lie in 0..=6");
        c.check(self.repetitions >= 1, "repetitions", "must be at least 1");
        let name = self
            .name
            .clone()
            .unwrap_or_else(|| fallback_name.to_owned());
        c.check(
            is_safe_name(&name),
            "name",
            "use letters, digits, '-', '_' or '.'",
        );
        c.finish(())?;
        let config = RunConfig {
            graph: graph.expect("checked"),
            model,
            schedule,
            ticks: self.ticks,
            institution_belief,
            epsilon: self.epsilon,
            policy: self.policy.into(),
            seed: self.seed,
        };
        config.validate()?;
        Ok(Experiment {
            name,
            config,
            repetitions: self.repetitions,
        })
    }
}

impl CensusFile {
    pub fn validate(&self) -> Result<(GraphKind, Belief)> {
        let mut c = Checker::default();
        let kind = self.graph.check(&mut c, "graph");
        let level = c.level(self.msg_level, "msg_level");
        c.check(self.trials >= 1, "trials", "must be at least 1");
        c.check(!self.taus.is_empty(), "taus", "must list at least one tau");
        c.finish(())?;
        Ok((kind.expect("checked"), level))
    }
}

impl HomophilyFile {
    pub fn validate(&self) -> Result<GraphKind> {
        let mut c = Checker::default();
        let kind = self.graph.check(&mut c, "graph");
        c.check(self.seeds >= 1, "seeds", "must be at least 1");
        c.finish(())?;
        Ok(kind.expect("checked"))
    }
}

/// Output names end up in paths, so keep them to a conservative alphabet.
pub fn is_safe_name(name: &str) -> bool {
    !name.is_empty()
        && !name.starts_with('.')
        && name
            .chars()
            .all(|ch| ch.is_ascii_alphanumeric() || matches!(ch, '-' | '_' | '.'))
}

/// Reads a config document from a file, or from a bundled preset when
/// `source` looks like `preset:<name>`. Returns the document and a name
/// derived from the preset or file stem.
pub fn load<T: DeserializeOwned>(source: &str) -> Result<(T, String)> {
    if let Some(name) = source.strip_prefix("preset:") {
        let text = presets::get(name).ok_or_else(|| {
            CliError::Usage(format!("unknown preset `{name}`; try `podsim presets`"))
        })?;
        return Ok((parse(text, source)?, name.to_owned()));
    }
    let path = Path::new(source);
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("run")
        .to_owned();
    Ok((parse(&text, source)?, stem))
}

pub fn parse<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|source| CliError::Parse {
        path: origin.to_owned(),
        source,
    })
}
