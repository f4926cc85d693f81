//! Command-line front end: argument parsing, configuration merging, report
//! output and the exit-code contract (0 all checks pass, 1 any mismatch or
//! pipeline failure, 2 usage, configuration or genericity errors).

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use sl3theta_core::theta::ClosedFormId;
use sl3theta_core::verma::Root;
use sl3theta_core::{Error, Result};

use crate::commands::{Command, Output, Pipeline};
use crate::config::{RunConfig, Settings};

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "SL3THETA_THREADS";

#[derive(Parser, Debug)]
#[command(name = "sl3theta", version, about = "Exact sl(3) Verma module branching, kappa spectra and partial theta series")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Brute-force character against its closed form.
    Character(CommonArgs),
    /// Branching table for a root sl(2).
    Branch {
        #[arg(long)]
        root: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Kappa spectra by kernel ranks, checked against the branching table.
    Spectrum {
        #[arg(long)]
        root: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Trace of a root monodromy operator on a window.
    Trace {
        #[arg(long)]
        root: String,
        /// brute, branching, closed or all
        #[arg(long, default_value = "all")]
        pipeline: String,
        #[arg(long)]
        regularized: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Three-way verification of closed-form identities.
    Verify {
        #[arg(long, conflicts_with = "id")]
        all: bool,
        /// Identity name; repeatable
        #[arg(long)]
        id: Vec<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// Flat key = value file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// borel or parabolic
    #[arg(long)]
    module: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda2: Option<String>,
    #[arg(long)]
    depth: Option<usize>,
    /// Largest coefficient of λ1, λ2 in the window
    #[arg(long = "B")]
    b: Option<i64>,
    /// Window keeps constant terms c0 ≥ -D
    #[arg(long = "D")]
    d: Option<i64>,
    /// Largest |t1|, |t2| offset in the window
    #[arg(long = "T")]
    t: Option<i64>,
    /// Upper bound on the constant term c0
    #[arg(long, allow_hyphen_values = true)]
    cap: Option<i64>,
    /// λ samples as l1:l2,l1:l2,...
    #[arg(long, allow_hyphen_values = true)]
    samples: Option<String>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// json or csv
    #[arg(long)]
    format: Option<String>,
}

impl CommonArgs {
    fn settings(&self) -> Result<Settings> {
        let mut s = Settings::default();
        let pairs: [(&str, Option<String>); 10] = [
            ("module", self.module.clone()),
            ("lambda1", self.lambda1.clone()),
            ("lambda2", self.lambda2.clone()),
            ("depth", self.depth.map(|v| v.to_string())),
            ("B", self.b.map(|v| v.to_string())),
            ("D", self.d.map(|v| v.to_string())),
            ("T", self.t.map(|v| v.to_string())),
            ("cap", self.cap.map(|v| v.to_string())),
            ("samples", self.samples.clone()),
            ("format", self.format.clone()),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                s.set(key, &v)?;
            }
        }
        s.output = self.output.clone();
        Ok(s)
    }

    fn resolve(&self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Usage(format!("cannot read config {}: {e}", path.display())))?;
                Settings::parse(&text)?
            }
            None => Settings::default(),
        };
        file.overlay(self.settings()?).resolve()
    }
}

/// Result of one invocation: exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: String) -> Self {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

fn build(sub: Sub) -> Result<(Command, RunConfig)> {
    Ok(match sub {
        Sub::Character(common) => (Command::Character, common.resolve()?),
        Sub::Branch { root, common } => (Command::Branch { root: Root::parse(&root)? }, common.resolve()?),
        Sub::Spectrum { root, common } => (Command::Spectrum { root: Root::parse(&root)? }, common.resolve()?),
        Sub::Trace {
            root,
            pipeline,
            regularized,
            common,
        } => (
            Command::Trace {
                root: Root::parse(&root)?,
                pipeline: Pipeline::parse(&pipeline)?,
                regularized,
            },
            common.resolve()?,
        ),
        Sub::Verify { all, id, common } => {
            let cfg = common.resolve()?;
            let ids = if all {
                ClosedFormId::suite(cfg.module)
            } else if id.is_empty() {
                return Err(Error::Usage("verify needs --all or at least one --id".into()));
            } else {
                id.iter().map(|s| ClosedFormId::parse(s)).collect::<Result<_>>()?
            };
            (Command::Verify { ids }, cfg)
        }
    })
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Usage(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    if let Err(e) = configure_threads() {
        return Outcome::usage(e.to_string());
    }
    let (cmd, cfg) = match build(cli.command) {
        Ok(x) => x,
        Err(e) => return Outcome::usage(e.to_string()),
    };
    let output = match commands::run(&cmd, &cfg) {
        Ok(o) => o,
        Err(e) if commands::is_usage_error(&e) => return Outcome::usage(e.to_string()),
        Err(e) => {
            return Outcome {
                code: 1,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    let (text, code) = match &output {
        Output::Report(r) => (r.to_json(), if r.all_ok() { 0 } else { 1 }),
        Output::Csv(s) => (s.clone(), 0),
    };
    match &cfg.output {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome {
                code,
                stdout: String::new(),
                stderr: format!("wrote {}\n", path.display()),
            },
            Err(e) => Outcome::usage(format!("cannot write {}: {e}", path.display())),
        },
        None => Outcome {
            code,
            stdout: text,
            stderr: String::new(),
        },
    }
}
