//! Command-line flags and JSON config files, which share one schema.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracalc_core::sobolev::Side;
use fracalc_core::Direction;
use serde::{Deserialize, Serialize};

use crate::dsl::Domain;
use crate::error::CliError;

pub const DEFAULT_ALPHA: f64 = 0.5;
pub const DEFAULT_P: f64 = 2.0;
pub const DEFAULT_N: usize = 4096;
pub const DEFAULT_BATTERY: usize = 8;
pub const DEFAULT_LADDER: [usize; 5] = [256, 512, 1024, 2048, 4096];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Compute,
    Verify,
    Convergence,
    Norm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Op {
    RlInt,
    RlDeriv,
    Caputo,
    Gl,
    Fourier,
    WeakCaputo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Dir {
    Left,
    Right,
}

impl From<Dir> for Direction {
    fn from(d: Dir) -> Self {
        match d {
            Dir::Left => Direction::Left,
            Dir::Right => Direction::Right,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SideArg {
    Left,
    Right,
    Symmetric,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
            SideArg::Symmetric => Side::Symmetric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum NormKind {
    /// L^p norm.
    Lp,
    /// One-sided or symmetric fractional Sobolev norm.
    Sobolev,
    /// Gagliardo seminorm with σ = alpha.
    Gagliardo,
    /// Fourier seminorm with s = alpha; needs a line domain.
    Fourier,
    /// Terminal-endpoint trace; needs alpha·p > 1.
    Trace,
    /// Poincaré quotient.
    Poincare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Ftfc,
    Product,
    Chain,
    Ibp,
    Weak,
    Mollify,
    Equivalences,
    Sobolev,
    Poincare,
    Pollution,
    Extensions,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

/// Everything a run depends on. Unset fields take documented defaults.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<CommandName>,
    /// Function, e.g. `power:0.5`, `2*bump:0.5,0.2+constant:1`.
    #[arg(long = "f", value_name = "SPEC")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    /// `a,b[,n][,line|finite]`; defaults to `0,1`.
    #[arg(long, value_name = "A,B[,N][,KIND]", allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub op: Option<Op>,
    /// Order of the operator or space [default: 0.5].
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Side of the operator [default: left].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<Dir>,
    /// Integrability exponent [default: 2].
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Sobolev space side [default: the value of --dir].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<SideArg>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<NormKind>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
    /// Verification case filter, or the oracle case of a convergence study
    /// (`power:μ`, `constant:c`, `kernel:β`, `step:λ,μ`).
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    /// Grid cells [default: 4096].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Seed of the noise injected into weak-derivative candidates [default: 0].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Cell counts of a convergence study [default: 256,512,1024,2048,4096].
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ladder: Option<Vec<usize>>,
    /// Fail a convergence study whose fitted order is below this.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_order: Option<f64>,
    /// Bump centres per width in the weak-derivative battery [default: 8].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub battery: Option<usize>,
    /// Tolerance overrides keyed by identity name (config file only).
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<BTreeMap<String, f64>>,
    #[arg(short = 'o', long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Output format [default: json for verify, else from the -o extension, else csv].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

#[derive(Debug, Parser)]
#[command(name = "fracalc", version, about = "Fractional integrals, derivatives, identities and Sobolev norms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply a fractional operator to a function and write the samples.
    Compute(Invocation),
    /// Run identity checks and write one report entry per check.
    Verify(Invocation),
    /// Measure errors against a closed-form oracle over a ladder of grids.
    Convergence(Invocation),
    /// Evaluate a norm, seminorm, trace or Poincaré quotient.
    Norm(Invocation),
}

#[derive(Debug, Args)]
pub struct Invocation {
    /// JSON file with the same keys as the flags; its values win.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Also write the resolved configuration to this path.
    #[arg(long, value_name = "PATH")]
    pub write_config: Option<PathBuf>,
    #[command(flatten)]
    pub flags: RunConfig,
}

impl Command {
    pub fn split(&self) -> (CommandName, &Invocation) {
        match self {
            Command::Compute(i) => (CommandName::Compute, i),
            Command::Verify(i) => (CommandName::Verify, i),
            Command::Convergence(i) => (CommandName::Convergence, i),
            Command::Norm(i) => (CommandName::Norm, i),
        }
    }
}

impl RunConfig {
    /// Fields set in `top` replace those of `self`.
    pub fn overlay(self, top: RunConfig) -> RunConfig {
        RunConfig {
            command: top.command.or(self.command),
            f: top.f.or(self.f),
            domain: top.domain.or(self.domain),
            op: top.op.or(self.op),
            alpha: top.alpha.or(self.alpha),
            dir: top.dir.or(self.dir),
            p: top.p.or(self.p),
            side: top.side.or(self.side),
            kind: top.kind.or(self.kind),
            suite: top.suite.or(self.suite),
            case: top.case.or(self.case),
            n: top.n.or(self.n),
            seed: top.seed.or(self.seed),
            ladder: top.ladder.or(self.ladder),
            min_order: top.min_order.or(self.min_order),
            battery: top.battery.or(self.battery),
            tolerances: top.tolerances.or(self.tolerances),
            output: top.output.or(self.output),
            format: top.format.or(self.format),
        }
    }

    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::config(format!("config {}: {e}", path.display())))
    }

    /// Flags overlaid with the config file, stamped with the command.
    pub fn resolve(command: CommandName, inv: &Invocation) -> Result<RunConfig, CliError> {
        let mut cfg = inv.flags.clone();
        if let Some(path) = &inv.config {
            let file = RunConfig::load(path)?;
            if let Some(c) = file.command {
                if c != command {
                    return Err(CliError::config(format!(
                        "config {} is for '{}', not '{}'",
                        path.display(),
                        c.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default(),
                        command.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
                    )));
                }
            }
            cfg = cfg.overlay(file);
        }
        cfg.command = Some(command);
        Ok(cfg)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(DEFAULT_ALPHA)
    }

    pub fn direction(&self) -> Direction {
        self.dir.unwrap_or(Dir::Left).into()
    }

    pub fn p(&self) -> f64 {
        self.p.unwrap_or(DEFAULT_P)
    }

    pub fn side(&self) -> Side {
        self.side.map(Side::from).unwrap_or_else(|| Side::from(self.direction()))
    }

    pub fn n(&self) -> Result<usize, CliError> {
        match self.n {
            Some(0) => Err(CliError::config("--n must be positive")),
            Some(n) => Ok(n),
            None => Ok(DEFAULT_N),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn battery(&self) -> Result<usize, CliError> {
        match self.battery {
            Some(0) => Err(CliError::config("--battery must be positive")),
            b => Ok(b.unwrap_or(DEFAULT_BATTERY)),
        }
    }

    pub fn ladder(&self) -> Result<Vec<usize>, CliError> {
        let ladder = self.ladder.clone().unwrap_or_else(|| DEFAULT_LADDER.to_vec());
        if ladder.len() < 2 {
            return Err(CliError::config("a convergence ladder needs at least two grids"));
        }
        if ladder.windows(2).any(|w| w[1] <= w[0]) || ladder[0] == 0 {
            return Err(CliError::config("ladder cell counts must be positive and increasing"));
        }
        Ok(ladder)
    }

    pub fn domain(&self) -> Result<Domain, CliError> {
        Domain::parse(self.domain.as_deref().unwrap_or("0,1"))
    }

    pub fn format(&self) -> Format {
        if let Some(f) = self.format {
            return f;
        }
        let ext = self.output.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str());
        match (ext, self.command) {
            (Some(e), _) if e.eq_ignore_ascii_case("json") => Format::Json,
            (Some(e), _) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            (_, Some(CommandName::Verify)) => Format::Json,
            _ => Format::Csv,
        }
    }
}

pub fn required<'a, T>(value: &'a Option<T>, flag: &str) -> Result<&'a T, CliError> {
    value.as_ref().ok_or_else(|| CliError::config(format!("missing --{flag}")))
}
