use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use ngrl::agents::{Checkpoint, LinearQ, QFunction};
use ngrl::harness::{
    load_suite, run_experiment, run_suite, to_csv, to_markdown, ExperimentConfig,
    ExperimentError, FeatureKind, Learned, Prepared, ResultsRow,
};
use ngrl::supervisor::{FactLabelling, Supervisor};
use ngrl_ddl::{Atom, Literal};
use ngrl_norms::{compile, parse};

#[derive(Parser)]
#[command(name = "ngrl", version, about = "Norm-guided reinforcement learning on Pac-Man")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Train one repetition and optionally save the learned values.
    Train {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Write a checkpoint here.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Run an experiment (or test a checkpoint) and print its results row.
    Eval {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Test these learned values instead of training.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "md")]
        out: Format,
        /// Log every supervisor query of the test games to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run every config of a directory (or the given files) as one table.
    Suite {
        paths: Vec<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "md")]
        out: Format,
    },
    /// Prove a norm file against a set of facts and print all conclusions.
    Prove {
        norms: PathBuf,
        /// Comma-separated fact literals, `-` for negation.
        #[arg(long, default_value = "")]
        facts: String,
        /// Comma-separated action atoms for the non-concurrence constraints.
        #[arg(long, default_value = "")]
        actions: String,
    },
    /// Parse and compile a norm file, printing the resulting rules.
    CheckNorms {
        norms: PathBuf,
        #[arg(long, default_value = "move(north),move(south),move(east),move(west),move(stop)")]
        actions: String,
    },
}

/// Failure with its exit code: 1 for configuration problems, 2 otherwise.
struct Failure(u8, anyhow::Error);

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        Failure(if e.is_config() { 1 } else { 2 }, e.into())
    }
}

fn config_err(e: impl Into<anyhow::Error>) -> Failure {
    Failure(1, e.into())
}

fn runtime_err(e: impl Into<anyhow::Error>) -> Failure {
    Failure(2, e.into())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

fn load_config(path: &Path, seed: Option<u64>) -> Result<ExperimentConfig, Failure> {
    let mut c = ExperimentConfig::load(path)?;
    if let Some(s) = seed {
        c.seed = s;
    }
    Ok(c)
}

fn render(rows: &[Result<ResultsRow, ExperimentError>], out: Format) -> String {
    match out {
        Format::Csv => to_csv(rows),
        Format::Md => to_markdown(rows),
    }
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    // Commas inside parentheses belong to the atom.
    let mut depth = 0i32;
    let mut start = 0;
    let mut parts = Vec::new();
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts.into_iter().map(str::trim).filter(|p| !p.is_empty())
}

fn literal(text: &str) -> Result<Literal, Failure> {
    let (positive, name) = match text.strip_prefix('-') {
        Some(rest) => (false, rest),
        None => (true, text),
    };
    let atom = Atom::try_new(name)
        .ok_or_else(|| config_err(anyhow::anyhow!("`{text}` is not a literal")))?;
    Ok(Literal { atom, positive })
}

fn read_norms(path: &Path) -> Result<ngrl_norms::NormativeSystem, Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| path.display().to_string())
        .map_err(config_err)?;
    parse(&text)
        .with_context(|| path.display().to_string())
        .map_err(config_err)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Train {
            config,
            seed,
            checkpoint,
        } => {
            let c = load_config(&config, seed)?;
            let p = Prepared::new(&c)?;
            let learned = p.train(0);
            let ckpt = match &learned {
                Learned::Tabular(q) => {
                    println!("trained {} episodes; {} states in table", c.train_episodes, q.len());
                    Checkpoint::Tabular(q.clone())
                }
                Learned::Linear(q) => {
                    println!("trained {} episodes; weights {:?}", c.train_episodes, q);
                    Checkpoint::of_linear(q)
                }
            };
            if let Some(path) = checkpoint {
                std::fs::write(&path, ckpt.to_text())
                    .with_context(|| path.display().to_string())
                    .map_err(runtime_err)?;
            }
            Ok(())
        }
        Command::Eval {
            config,
            seed,
            checkpoint,
            out,
            trace,
        } => {
            let mut c = load_config(&config, seed)?;
            c.trace = trace;
            let row = match checkpoint {
                None => run_experiment(&c)?,
                Some(path) => eval_checkpoint(&c, &path)?,
            };
            print!("{}", render(&[Ok(row)], out));
            Ok(())
        }
        Command::Suite { paths, seed, out } => {
            let mut configs = Vec::new();
            for p in &paths {
                if p.is_dir() {
                    configs.extend(load_suite(p)?);
                } else {
                    configs.push(ExperimentConfig::load(p)?);
                }
            }
            if configs.is_empty() {
                return Err(config_err(anyhow::anyhow!("no experiment configs given")));
            }
            if let Some(s) = seed {
                configs.iter_mut().for_each(|c| c.seed = s);
            }
            let rows = run_suite(&configs);
            print!("{}", render(&rows, out));
            if rows.iter().any(Result::is_err) {
                return Err(runtime_err(anyhow::anyhow!("some experiments failed")));
            }
            Ok(())
        }
        Command::Prove {
            norms,
            facts,
            actions,
        } => {
            let system = read_norms(&norms)?;
            let actions: Vec<Atom> = split_list(&actions)
                .map(|a| Atom::try_new(a).ok_or_else(|| config_err(anyhow::anyhow!("bad action `{a}`"))))
                .collect::<Result<_, _>>()?;
            let facts: BTreeSet<Literal> = split_list(&facts)
                .map(literal)
                .collect::<Result<_, _>>()?;
            let sup = Supervisor::new(FactLabelling { actions }, &system).map_err(config_err)?;
            print!("{}", sup.conclusions(&facts).dump());
            Ok(())
        }
        Command::CheckNorms { norms, actions } => {
            let system = read_norms(&norms)?;
            let actions: Vec<Atom> = split_list(&actions).map(Atom::new).collect();
            let compiled = compile(&system, &actions).map_err(config_err)?;
            for r in &compiled.rules {
                println!("{r}");
            }
            for (w, l) in &compiled.superiority {
                println!("{w} > {l}");
            }
            println!(
                "# {} norms, {} rules, {} superiority pairs",
                system.regulative.len() + system.constitutive.len(),
                compiled.rules.len(),
                compiled.superiority.len()
            );
            Ok(())
        }
    }
}

fn eval_checkpoint(c: &ExperimentConfig, path: &Path) -> Result<ResultsRow, Failure> {
    let start = std::time::Instant::now();
    let text = std::fs::read_to_string(path)
        .with_context(|| path.display().to_string())
        .map_err(config_err)?;
    let ckpt = Checkpoint::parse(&text).map_err(config_err)?;
    let p = Prepared::new(c)?;
    let learned: Box<dyn QFunction> = match ckpt {
        Checkpoint::Tabular(q) if c.features == FeatureKind::None => Box::new(q),
        Checkpoint::Linear {
            extractor,
            theta_x,
            theta_n,
            ..
        } => {
            let f = p
                .extractor()
                .filter(|f| f.name() == extractor)
                .ok_or_else(|| config_err(anyhow::anyhow!("checkpoint uses `{extractor}` features")))?;
            Box::new(LinearQ::with_weights(f, theta_x, theta_n).map_err(config_err)?)
        }
        Checkpoint::Tabular(_) => {
            return Err(config_err(anyhow::anyhow!("tabular checkpoint for a feature-based config")))
        }
    };
    let stats = p.test(&*learned, 0, &p.supervisor);
    let mut colors: Vec<_> = p.env.layout().ghosts.iter().map(|g| g.0).collect();
    colors.sort();
    colors.dedup();
    Ok(ResultsRow::new(c, &stats, &colors, start.elapsed()))
}
