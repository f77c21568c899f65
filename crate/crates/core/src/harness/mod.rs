//! Configuration-driven experiments: train, test, aggregate, report.

mod report;

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use ngrl_norms::{parse, NormativeSystem, ParseError};
use ngrl_pacman::{EnvConfig, GhostColor, Layout, LayoutError, PacmanEnv};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agents::{
    evaluate, stream_rng, train, ComplianceMdp, EpsilonSchedule, EvalStats, FeatureExtractor,
    GreedyPolicy, HyperError, Hyperparams, LinearQ, PacmanFeatures, QFunction, Selector,
    TabularQ,
};
use crate::assets::{bundled_layout, bundled_norms, load_text};
use crate::supervisor::{PacmanLabelling, PacmanSupervisor, Supervisor, SupervisorError};

pub use report::{to_csv, to_markdown, ResultsRow};

/// Tabular agents are refused on layouts with more open cells than this,
/// unless `allow_large_tabular` is set.
pub const TABULAR_MAX_CELLS: usize = 25;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("layout `{name}`: {source}")]
    Layout { name: String, source: LayoutError },
    #[error("norms `{name}`: {source}")]
    Norms { name: String, source: ParseError },
    #[error(transparent)]
    Hyper(#[from] HyperError),
    #[error(transparent)]
    Supervisor(#[from] SupervisorError),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("cannot write trace {path}: {source}")]
    Trace {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl ExperimentError {
    /// Whether the failure lies in the configuration (as opposed to a
    /// failure while running it).
    pub fn is_config(&self) -> bool {
        !matches!(self, ExperimentError::Trace { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AgentKind {
    #[serde(rename = "plainQ")]
    PlainQ,
    #[serde(rename = "scalarized")]
    Scalarized,
    #[serde(rename = "tlq")]
    Tlq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    /// Tabular learning.
    None,
    Basic,
    Blue,
}

/// One experiment, as a flat TOML file. Every key is optional; unknown
/// keys are rejected. Layout and norm names refer to bundled assets
/// (`mini`, `classic2g`; `benevolent`, `benevolent_permit`, `none`) or to
/// files relative to the config's directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub layout: String,
    pub norms: String,
    pub agent: AgentKind,
    pub monitored: bool,
    pub features: FeatureKind,
    pub seed: u64,
    pub repetitions: usize,
    pub allow_large_tabular: bool,

    pub alpha: f64,
    pub gamma: f64,
    pub epsilon_start: f64,
    pub epsilon_end: f64,
    /// Defaults to `train_episodes`.
    pub epsilon_decay_episodes: Option<usize>,
    pub penalty: f64,
    pub weight: f64,
    pub threshold: f64,
    pub train_episodes: usize,
    pub test_episodes: usize,
    pub max_steps: usize,

    pub scared_duration: u32,
    pub ghost_no_reversal: bool,
    pub respawn_eaten_ghosts: bool,

    #[serde(skip)]
    pub base_dir: PathBuf,
    /// Where to write the supervisor's test-time trace.
    #[serde(skip)]
    pub trace: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let hp = Hyperparams::default();
        let env = EnvConfig::default();
        ExperimentConfig {
            name: String::new(),
            layout: "mini".into(),
            norms: "benevolent".into(),
            agent: AgentKind::PlainQ,
            monitored: false,
            features: FeatureKind::None,
            seed: 0,
            repetitions: 5,
            allow_large_tabular: false,
            alpha: hp.alpha,
            gamma: hp.gamma,
            epsilon_start: hp.epsilon.start,
            epsilon_end: hp.epsilon.end,
            epsilon_decay_episodes: None,
            penalty: hp.penalty,
            weight: hp.weight,
            threshold: hp.threshold,
            train_episodes: hp.train_episodes,
            test_episodes: hp.test_episodes,
            max_steps: hp.max_steps,
            scared_duration: env.scared_duration,
            ghost_no_reversal: env.ghost_no_reversal,
            respawn_eaten_ghosts: env.respawn_eaten_ghosts,
            base_dir: PathBuf::new(),
            trace: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self, ExperimentError> {
        let mut c: ExperimentConfig = toml::from_str(text)?;
        c.base_dir = base_dir.to_path_buf();
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path).map_err(|source| ExperimentError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut c = Self::from_toml(&text, path.parent().unwrap_or(Path::new(".")))?;
        if c.name.is_empty() {
            c.name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
        }
        Ok(c)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn hyperparams(&self) -> Hyperparams {
        Hyperparams {
            alpha: self.alpha,
            gamma: self.gamma,
            epsilon: EpsilonSchedule {
                start: self.epsilon_start,
                end: self.epsilon_end,
                decay_episodes: self.epsilon_decay_episodes.unwrap_or(self.train_episodes),
            },
            penalty: self.penalty,
            weight: self.weight,
            threshold: self.threshold,
            train_episodes: self.train_episodes,
            test_episodes: self.test_episodes,
            max_steps: self.max_steps,
        }
    }

    pub fn env_config(&self) -> EnvConfig {
        EnvConfig {
            scared_duration: self.scared_duration,
            ghost_no_reversal: self.ghost_no_reversal,
            respawn_eaten_ghosts: self.respawn_eaten_ghosts,
        }
    }

    pub fn selector(&self) -> Selector {
        match self.agent {
            AgentKind::PlainQ => Selector::PlainQ,
            AgentKind::Scalarized => Selector::Scalarized {
                weight: self.weight,
            },
            AgentKind::Tlq => Selector::Tlq {
                threshold: self.threshold,
            },
        }
    }
}

/// Loaded and validated pieces of an experiment.
pub struct Prepared {
    pub config: ExperimentConfig,
    pub env: PacmanEnv,
    pub system: NormativeSystem,
    pub supervisor: PacmanSupervisor,
    pub hp: Hyperparams,
}

impl std::fmt::Debug for Prepared {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Prepared")
            .field("config", &self.config.name)
            .finish_non_exhaustive()
    }
}

impl Prepared {
    pub fn new(config: &ExperimentConfig) -> Result<Self, ExperimentError> {
        let io = |name: &str| {
            let path = config.base_dir.join(name);
            move |source| ExperimentError::Io { path, source }
        };
        let layout_text = load_text(&config.layout, &config.base_dir, bundled_layout)
            .map_err(io(&config.layout))?;
        let layout = Layout::parse(&layout_text).map_err(|source| ExperimentError::Layout {
            name: config.layout.clone(),
            source,
        })?;
        let norm_text = load_text(&config.norms, &config.base_dir, bundled_norms)
            .map_err(io(&config.norms))?;
        let system = parse(&norm_text).map_err(|source| ExperimentError::Norms {
            name: config.norms.clone(),
            source,
        })?;
        let hp = config.hyperparams();
        hp.validate()?;
        if config.test_episodes == 0 {
            return Err(ExperimentError::Invalid("test_episodes must be positive".into()));
        }
        if config.repetitions == 0 {
            return Err(ExperimentError::Invalid("repetitions must be positive".into()));
        }
        let env = PacmanEnv::new(Arc::new(layout), config.env_config());
        let cells = env.layout().open_cells().count();
        if config.features == FeatureKind::None
            && cells > TABULAR_MAX_CELLS
            && !config.allow_large_tabular
        {
            return Err(ExperimentError::Invalid(format!(
                "tabular agents are limited to {TABULAR_MAX_CELLS} open cells ({} has {cells}); \
                 set allow_large_tabular to override",
                config.layout
            )));
        }
        let supervisor = Supervisor::new(PacmanLabelling::new(env.clone()), &system)?;
        Ok(Prepared {
            config: config.clone(),
            env,
            system,
            supervisor,
            hp,
        })
    }

    pub fn mdp(&self) -> ComplianceMdp<'_> {
        ComplianceMdp {
            env: &self.env,
            supervisor: &self.supervisor,
            penalty: self.hp.penalty,
        }
    }

    pub fn extractor(&self) -> Option<Arc<dyn FeatureExtractor>> {
        match self.config.features {
            FeatureKind::None => None,
            FeatureKind::Basic => Some(Arc::new(PacmanFeatures::basic(self.env.clone()))),
            FeatureKind::Blue => Some(Arc::new(PacmanFeatures::blue(self.env.clone()))),
        }
    }

    /// Training stream of repetition `rep`.
    pub fn train_rng(&self, rep: usize) -> rand_chacha::ChaCha8Rng {
        stream_rng(self.config.seed, 2 * rep as u64)
    }

    /// Seed of repetition `rep`'s test games; game `i` uses its stream `i`.
    pub fn test_seed(&self, rep: usize) -> u64 {
        let mut rng = stream_rng(self.config.seed, 2 * rep as u64 + 1);
        rand::Rng::gen(&mut rng)
    }

    /// Trains one repetition.
    pub fn train(&self, rep: usize) -> Learned {
        let mut rng = self.train_rng(rep);
        let selector = self.config.selector();
        match self.extractor() {
            None => {
                let mut q = TabularQ::new();
                train(&self.mdp(), &mut q, selector, &self.hp, &mut rng);
                Learned::Tabular(q)
            }
            Some(f) => {
                let mut q = LinearQ::new(f);
                train(&self.mdp(), &mut q, selector, &self.hp, &mut rng);
                Learned::Linear(q)
            }
        }
    }

    /// Tests a learned Q-function; `audit` counts executed violations.
    pub fn test(&self, q: &dyn QFunction, rep: usize, audit: &PacmanSupervisor) -> EvalStats {
        let policy = GreedyPolicy {
            q,
            selector: self.config.selector(),
            monitor: self.config.monitored.then_some(audit),
        };
        evaluate(
            &self.env,
            &policy,
            Some(audit),
            self.config.test_episodes,
            self.test_seed(rep),
            self.hp.max_steps,
        )
    }

    fn audit_supervisor(&self) -> Result<Option<PacmanSupervisor>, ExperimentError> {
        let Some(path) = &self.config.trace else {
            return Ok(None);
        };
        let file = File::create(path).map_err(|source| ExperimentError::Trace {
            path: path.clone(),
            source,
        })?;
        let sup = Supervisor::new(PacmanLabelling::new(self.env.clone()), &self.system)?
            .with_trace(Box::new(BufWriter::new(file)));
        Ok(Some(sup))
    }
}

#[derive(Clone, Debug)]
pub enum Learned {
    Tabular(TabularQ),
    Linear(LinearQ),
}

impl Learned {
    pub fn as_q(&self) -> &dyn QFunction {
        match self {
            Learned::Tabular(q) => q,
            Learned::Linear(q) => q,
        }
    }
}

/// Trains and tests every repetition and averages over all test games.
/// Identical configs give identical rows, wall time aside.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ResultsRow, ExperimentError> {
    let start = Instant::now();
    let p = Prepared::new(config)?;
    let traced = p.audit_supervisor()?;
    let audit = traced.as_ref().unwrap_or(&p.supervisor);
    let mut total = EvalStats::default();
    for rep in 0..config.repetitions {
        let learned = p.train(rep);
        total = total.merge(p.test(learned.as_q(), rep, audit));
    }
    let colors: Vec<GhostColor> = {
        let mut c: Vec<GhostColor> = p.env.layout().ghosts.iter().map(|g| g.0).collect();
        c.sort();
        c.dedup();
        c
    };
    Ok(ResultsRow::new(config, &total, &colors, start.elapsed()))
}

/// Runs independent experiments in parallel; rows keep input order and a
/// failing experiment does not stop the others.
pub fn run_suite(configs: &[ExperimentConfig]) -> Vec<Result<ResultsRow, ExperimentError>> {
    configs.par_iter().map(run_experiment).collect()
}

/// Loads every `*.toml` in a directory, sorted by file name.
pub fn load_suite(dir: &Path) -> Result<Vec<ExperimentConfig>, ExperimentError> {
    let io = |source| ExperimentError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "toml"))
        .collect();
    paths.sort();
    paths.iter().map(|p| ExperimentConfig::load(p)).collect()
}
