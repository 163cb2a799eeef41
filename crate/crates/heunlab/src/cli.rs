//! Argument parsing and batch dispatch.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand};

use crate::commands::{gauss, run_instance, Command, Settings};
use crate::error::AppError;
use crate::instance::{InstanceFile, PrecisionMode, Which};
use crate::number::Number;
use crate::report::{write_outputs, ResultDocument};

/// Default precision when neither the command line nor the instance sets one.
pub const PRECISION_ENV: &str = "HEUNLAB_PRECISION";

#[derive(Debug, Parser)]
#[command(name = "heunlab", version, about = "Series solutions of Heun's equation and their convergence")]
pub struct Cli {
    /// Working precision: `exact` or a bit count.
    #[arg(long, global = true, value_name = "BITS|exact")]
    pub precision: Option<PrecisionMode>,
    /// Stopping tolerance for `eval`.
    #[arg(long, global = true)]
    pub tol: Option<Number>,
    /// Term budget (`eval`) or probe length (`boundary`).
    #[arg(long, global = true)]
    pub n_max: Option<usize>,
    /// Sum outside the absolute-convergence domain.
    #[arg(long, global = true)]
    pub force: bool,
    /// Worker threads when INSTANCE is a directory.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Write result documents and CSV traces into this directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Args)]
pub struct Target {
    /// Instance file, or a directory of `*.toml` instances.
    pub instance: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Sum the local Heun series at x.
    Eval {
        #[command(flatten)]
        target: Target,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<Number>,
        /// Exponent of the local solution (0 or 1 − γ).
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<Number>,
    },
    /// Coefficient limits, boundary radius r*, and η, z.
    Domain {
        #[command(flatten)]
        target: Target,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<Number>,
    },
    /// Compare the sub-leading coefficients of the three-term recurrence.
    Classify {
        #[command(flatten)]
        target: Target,
    },
    /// Probe a series on |x| = r (r* by default).
    Boundary {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        r: Option<Number>,
        #[arg(long)]
        stride: Option<usize>,
        #[arg(long, value_enum)]
        which: Option<Which>,
        /// Start index of the modulus recurrence.
        #[arg(long)]
        offset: Option<usize>,
    },
    /// Gauss's test for absolute convergence of 2F1(a, b; c; x) on |x| = 1.
    Gauss {
        #[arg(allow_hyphen_values = true)]
        a: Number,
        #[arg(allow_hyphen_values = true)]
        b: Number,
        #[arg(allow_hyphen_values = true)]
        c: Number,
    },
    /// Recompute and re-verify the constants and inequalities of the divergence argument.
    ProofAudit {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        eps: Option<Number>,
        #[arg(long)]
        n_check: Option<u64>,
        #[arg(long)]
        m: Option<usize>,
        /// Pochhammer-bound samples.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        x: Option<Number>,
    },
}

impl Cli {
    fn settings(&self, env_precision: Option<PrecisionMode>) -> (Command, Option<&Path>, Settings) {
        let mut s = Settings {
            precision: self.precision,
            env_precision,
            tol: self.tol.clone(),
            n_max: self.n_max,
            force: self.force,
            ..Settings::default()
        };
        let (cmd, path) = match &self.command {
            Sub::Eval { target, x, .. } => {
                s.x = x.clone();
                (Command::Eval, Some(target.instance.as_path()))
            }
            Sub::Domain { target, x } => {
                s.x = x.clone();
                (Command::Domain, Some(target.instance.as_path()))
            }
            Sub::Classify { target } => (Command::Classify, Some(target.instance.as_path())),
            Sub::Boundary { target, r, stride, which, offset } => {
                s.r = r.clone();
                s.stride = *stride;
                s.which = *which;
                s.offset = *offset;
                (Command::Boundary, Some(target.instance.as_path()))
            }
            Sub::Gauss { .. } => (Command::Eval, None),
            Sub::ProofAudit { target, eps, n_check, m, samples, seed, x } => {
                s.eps = eps.clone();
                s.n_check = *n_check;
                s.m = *m;
                s.samples = *samples;
                s.seed = *seed;
                s.x = x.clone();
                (Command::ProofAudit, Some(target.instance.as_path()))
            }
        };
        (cmd, path, s)
    }

    fn lambda_override(&self) -> Option<&Number> {
        match &self.command {
            Sub::Eval { lambda, .. } => lambda.as_ref(),
            _ => None,
        }
    }
}

/// Parses `args`, runs the command, prints the result document to stdout,
/// and returns the process exit code.
pub fn main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 3 } else { 0 };
        }
    };
    match run(&cli) {
        Ok((text, code)) => {
            print!("{text}");
            code
        }
        Err(e) => {
            eprintln!("heunlab: {e}");
            e.exit_code()
        }
    }
}

fn env_precision() -> Result<Option<PrecisionMode>, AppError> {
    match std::env::var(PRECISION_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|e: AppError| AppError::Input(format!("{PRECISION_ENV}: {e}"))),
        _ => Ok(None),
    }
}

/// Returns the text for stdout and the exit code.
fn run(cli: &Cli) -> Result<(String, i32), AppError> {
    let env = env_precision()?;
    if let Sub::Gauss { a, b, c } = &cli.command {
        let doc = gauss(a, b, c, cli.precision.or(env))?;
        let doc = match &cli.out {
            Some(dir) => write_outputs(dir, "gauss", doc, &[])?.0,
            None => doc,
        };
        return Ok((doc.to_json(), 0));
    }
    let (cmd, path, settings) = cli.settings(env);
    let path = path.expect("instance commands carry a path");
    if !path.is_dir() {
        let doc = one_instance(cli, cmd, path, &settings)?;
        return Ok((doc.to_json(), 0));
    }
    let files = instance_files(path)?;
    let results = fan_out(&files, cli.jobs.max(1), |p| one_instance(cli, cmd, p, &settings));
    let mut code = 0;
    let mut items = Vec::with_capacity(files.len());
    for (p, r) in files.iter().zip(results) {
        match r {
            Ok(doc) => items.push(serde_json::to_value(&doc).expect("documents serialize")),
            Err(e) => {
                code = code.max(e.exit_code());
                eprintln!("heunlab: {}: {e}", p.display());
                items.push(serde_json::json!({
                    "instance_path": p.display().to_string(),
                    "error": e.to_string(),
                    "exit_code": e.exit_code(),
                }));
            }
        }
    }
    let mut text = serde_json::to_string_pretty(&items).expect("documents serialize");
    text.push('\n');
    Ok((text, code))
}

fn one_instance(cli: &Cli, cmd: Command, path: &Path, settings: &Settings) -> Result<ResultDocument, AppError> {
    let mut inst = InstanceFile::load(path)?;
    if let Some(l) = cli.lambda_override() {
        match inst.heun.as_mut() {
            Some(h) => h.lambda = Some(l.clone()),
            None => return Err(AppError::Input("--lambda needs a [heun] instance".into())),
        }
    }
    let (doc, traces) = run_instance(cmd, &inst, settings)?;
    match &cli.out {
        Some(dir) => {
            let stem = path.file_stem().map_or("instance".into(), |s| s.to_string_lossy().into_owned());
            Ok(write_outputs(dir, &stem, doc, &traces)?.0)
        }
        None => Ok(doc),
    }
}

/// `*.toml` files directly inside `dir`, sorted by name.
fn instance_files(dir: &Path) -> Result<Vec<PathBuf>, AppError> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "toml"))
        .collect();
    files.sort();
    Ok(files)
}

/// Runs `f` over `items` on `jobs` threads; results keep the input order.
fn fan_out<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<R>>> = items.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(items.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(item) = items.get(i) else { break };
                *slots[i].lock().expect("worker panicked") = Some(f(item));
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.into_inner().expect("worker panicked").expect("every item ran"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fan_out_keeps_order() {
        let v: Vec<usize> = (0..50).collect();
        assert_eq!(fan_out(&v, 4, |x| x * 2), v.iter().map(|x| x * 2).collect::<Vec<_>>());
        assert!(fan_out(&Vec::<usize>::new(), 4, |x| *x).is_empty());
    }

    #[test]
    fn parse_errors_exit_3_and_help_exits_0() {
        assert_eq!(main(["heunlab", "frobnicate"]), 3);
        assert_eq!(main(["heunlab", "--help"]), 0);
        assert_eq!(main(["heunlab", "gauss", "1", "1"]), 3);
    }
}
