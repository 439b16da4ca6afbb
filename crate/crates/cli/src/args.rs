use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{RunConfig, Tolerances};
use crate::error::CliError;
use crate::suites::{self, Command};

#[derive(Debug, Parser)]
#[command(
    name = "ecsusy",
    version,
    about = "Verify ECSusy, pseudo-boson and su(1,1) identities on truncated Fock spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Fock, pseudo-boson, commutator, Casimir, eigenfamily and intertwining checks.
    VerifyCore(Common),
    /// Every cell of the two action tables, float and exact, plus family structure.
    VerifyTables(Common),
    /// Deformed quadruples, tilted families and the quasi-basis checks.
    VerifyDeform(Common),
    /// Shifted oscillator functions on a grid; writes CSV files with --out.
    ShiftedHo(Common),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// TOML file with RunConfig fields; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Truncation dimension N.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long = "m-max")]
    pub m_max: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sets every tolerance to this value.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Comma-separated suites to run (default: all suites of the command).
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub suites: Option<Vec<String>>,
    /// Directory for the JSON report and CSV files; without it the report goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Common {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.dim {
            cfg.dim = v;
        }
        if let Some(v) = self.m_max {
            cfg.m_max = v;
        }
        if let Some(v) = self.alpha {
            cfg.alpha = v;
        }
        if let Some(v) = self.sigma {
            cfg.sigma = v;
        }
        if let Some(v) = self.tau {
            cfg.tau = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.tolerance {
            cfg.tolerances = Tolerances::uniform(v);
        }
        if let Some(s) = &self.suites {
            cfg.suites = Some(
                s.iter()
                    .map(|x| x.trim().to_string())
                    .filter(|x| !x.is_empty())
                    .collect(),
            );
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl Cmd {
    pub fn split(&self) -> (Command, &Common) {
        match self {
            Cmd::VerifyCore(c) => (Command::VerifyCore, c),
            Cmd::VerifyTables(c) => (Command::VerifyTables, c),
            Cmd::VerifyDeform(c) => (Command::VerifyDeform, c),
            Cmd::ShiftedHo(c) => (Command::ShiftedHo, c),
        }
    }
}

/// Runs one command and returns the process exit code.
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let (command, common) = cli.command.split();
    match execute_inner(command, common, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute_inner(
    command: Command,
    common: &Common,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, CliError> {
    let cfg = common.resolve()?;
    let out = common.out.as_deref();
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
    }
    let report = suites::run(command, &cfg, out)?;
    match out {
        Some(dir) => {
            std::fs::write(
                dir.join(format!("{}.json", command.name())),
                report.to_json() + "\n",
            )?;
            writeln!(stdout, "{}", report.summary_line())?;
        }
        None => {
            writeln!(stdout, "{}", report.to_json())?;
            writeln!(stderr, "{}", report.summary_line())?;
        }
    }
    for c in report.failures() {
        writeln!(
            stderr,
            "FAIL {} residual {:e} tolerance {:e}",
            c.id, c.residual, c.tolerance
        )?;
    }
    Ok(report.exit_code())
}
