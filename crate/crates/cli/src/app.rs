//! Argument parsing and command dispatch.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::absorption::{inspect, Query};
use crate::compare::{write_csv as write_comparisons, SweepTable};
use crate::config::{Claim, ConfigFile, Scenario, TableCache};
use crate::error::{CliError, CliResult};
use crate::report::run_point;
use crate::sweep::{parse_axes, run_sweep};

#[derive(Debug, Parser)]
#[command(
    name = "thzlink",
    version,
    about = "Ergodic capacity of THz wireless fiber-extender links"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the capacity of one scenario.
    Capacity(PointArgs),
    /// Monte-Carlo capacity of one scenario (`capacity --method monte_carlo`).
    Mc(PointArgs),
    /// Evaluate a scenario over a grid of one or two parameters.
    Sweep(SweepArgs),
    /// Validate an absorption table and print κ over a query grid.
    Absorption(AbsorptionArgs),
    /// Percent change between two rows of a sweep CSV.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

/// Scenario flags; each overrides the matching config-file key.
#[derive(Debug, Clone, Default, Args)]
pub struct ScenarioArgs {
    /// TOML scenario file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub freq_ghz: Option<f64>,
    #[arg(long)]
    pub distance_m: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gt_dbi: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gr_dbi: Option<f64>,
    /// Transmit power over noise power, dB.
    #[arg(long, allow_negative_numbers = true)]
    pub snr0_db: Option<f64>,
    #[arg(long)]
    pub temp_k: Option<f64>,
    #[arg(long)]
    pub pressure_pa: Option<f64>,
    #[arg(long)]
    pub rh_percent: Option<f64>,
    /// Pointing-jitter standard deviation, m.
    #[arg(long, allow_negative_numbers = true)]
    pub sigma_s_m: Option<f64>,
    /// Receive aperture radius, m.
    #[arg(long)]
    pub aperture_m: Option<f64>,
    /// Beam radius at the receiver, m.
    #[arg(long)]
    pub beam_radius_m: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub hhat: Option<f64>,
    /// Constant absorption coefficient, 1/m.
    #[arg(long, conflicts_with = "kappa_table")]
    pub kappa_per_m: Option<f64>,
    /// Absorption table (CSV).
    #[arg(long)]
    pub kappa_table: Option<PathBuf>,
    /// closed_form, quadrature, monte_carlo or all.
    #[arg(long)]
    pub method: Option<String>,
    /// Monte-Carlo sample count.
    #[arg(long)]
    pub samples: Option<u64>,
    /// Monte-Carlo seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

impl ScenarioArgs {
    fn flags(&self) -> ConfigFile {
        let mut c = ConfigFile {
            method: self.method.clone(),
            ..Default::default()
        };
        c.link.freq_ghz = self.freq_ghz;
        c.link.distance_m = self.distance_m;
        c.link.gt_dbi = self.gt_dbi;
        c.link.gr_dbi = self.gr_dbi;
        c.link.snr0_db = self.snr0_db;
        c.env.temp_k = self.temp_k;
        c.env.pressure_pa = self.pressure_pa;
        c.env.rh_percent = self.rh_percent;
        c.geom.aperture_radius = self.aperture_m;
        c.geom.beam_radius = self.beam_radius_m;
        c.geom.sigma_s = self.sigma_s_m;
        c.fading.alpha = self.alpha;
        c.fading.mu = self.mu;
        c.fading.hhat = self.hhat;
        c.absorption.kappa_per_m = self.kappa_per_m;
        c.absorption.table = self.kappa_table.clone();
        c.mc.samples = self.samples;
        c.mc.seed = self.seed;
        c
    }

    /// Config file overlaid with flags.
    pub fn merged(&self) -> CliResult<ConfigFile> {
        let base = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        Ok(base.overlay(&self.flags()))
    }
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// `path=v1,v2,...` or `path=start:stop:count`; repeat for a second axis.
    /// Replaces `sweep.axes` from the config file.
    #[arg(long = "axis")]
    pub axes: Vec<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AbsorptionArgs {
    #[arg(long)]
    pub table: PathBuf,
    #[arg(long, value_delimiter = ',')]
    pub freq_ghz: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub temp_k: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub pressure_pa: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub rh_percent: Option<Vec<f64>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Sweep CSV produced by `thzlink sweep`.
    #[arg(long)]
    pub input: PathBuf,
    /// Selector of the reference row, e.g. `link.distance_m=20`.
    #[arg(long, requires = "to")]
    pub from: Option<String>,
    /// Selector of the compared row.
    #[arg(long, requires = "from")]
    pub to: Option<String>,
    /// Extra selector applied to both rows.
    #[arg(long = "where")]
    pub filter: Option<String>,
    #[arg(long)]
    pub method: Option<String>,
    /// Published percent change to print alongside the computed one.
    #[arg(long, allow_negative_numbers = true)]
    pub reference_percent: Option<f64>,
    /// Scenario file whose `[[claims]]` are evaluated when --from/--to are absent.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Write `render`'s bytes to `out`, or stdout when `out` is `None`.
fn emit(out: Option<&Path>, render: impl FnOnce(&mut Vec<u8>) -> CliResult<()>) -> CliResult<()> {
    let mut buf = Vec::new();
    render(&mut buf)?;
    match out {
        Some(path) => {
            std::fs::write(path, &buf).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&buf)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn run_capacity(args: &PointArgs, force_mc: bool) -> CliResult<()> {
    let mut cfg = args.scenario.merged()?;
    if force_mc {
        if let Some(m) = cfg.method.as_deref().filter(|&m| m != "monte_carlo") {
            if args.scenario.method.is_some() {
                return Err(CliError::field(
                    "method",
                    format!("`mc` always uses monte_carlo, got `{m}`"),
                ));
            }
        }
        cfg.method = Some("monte_carlo".into());
    }
    let scenario = Scenario::resolve(&cfg, &mut TableCache::default())?;
    let report = run_point(&scenario)?;
    emit(args.output.out.as_deref(), |buf| match args.output.format {
        Format::Csv => report.write_csv(buf),
        Format::Json => report.write_json(buf),
    })?;
    for r in report.results.iter().filter_map(|r| r.result.as_ref()) {
        if r.low_sample_warning {
            eprintln!(
                "warning: only {} Monte-Carlo samples; the standard error is unreliable",
                r.sample_count
            );
        }
    }
    match report.failure() {
        Some(f) => Err(CliError::Numerical(format!("{}: {}", f.method, f.status))),
        None => Ok(()),
    }
}

fn run_sweep_cmd(args: &SweepArgs) -> CliResult<()> {
    let cfg = args.scenario.merged()?;
    let specs = if args.axes.is_empty() {
        cfg.sweep
            .as_ref()
            .map(|s| s.axes.clone())
            .unwrap_or_default()
    } else {
        args.axes.clone()
    };
    let report = run_sweep(&cfg, parse_axes(&specs)?)?;
    emit(args.output.out.as_deref(), |buf| match args.output.format {
        Format::Csv => report.write_csv(buf),
        Format::Json => report.write_json(buf),
    })?;
    let failed = report.failed_rows();
    if failed > 0 {
        eprintln!(
            "warning: {failed} of {} rows failed; see the status column",
            report.rows.len()
        );
    }
    Ok(())
}

fn run_absorption(args: &AbsorptionArgs) -> CliResult<()> {
    let query = Query {
        freq_ghz: args.freq_ghz.clone(),
        temp_k: args.temp_k.clone(),
        pressure_pa: args.pressure_pa.clone(),
        rh_percent: args.rh_percent.clone(),
    };
    emit(args.out.as_deref(), |buf| inspect(&args.table, &query, buf))
}

fn run_compare(args: &CompareArgs) -> CliResult<()> {
    let claims = match (&args.from, &args.to) {
        (Some(from), Some(to)) => vec![Claim {
            from: from.clone(),
            to: to.clone(),
            filter: args.filter.clone(),
            method: args.method.clone(),
            reference_percent: args.reference_percent,
            note: None,
        }],
        _ => {
            let path = args.config.as_ref().ok_or_else(|| {
                CliError::Config("pass --from and --to, or --config with [[claims]]".into())
            })?;
            let claims = ConfigFile::load(path)?.claims;
            if claims.is_empty() {
                return Err(CliError::Config(format!(
                    "{}: no [[claims]] entries",
                    path.display()
                )));
            }
            claims
        }
    };
    let file = std::fs::File::open(&args.input)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.input.display())))?;
    let table = SweepTable::from_reader(file).map_err(|e| match e {
        CliError::Config(m) => CliError::Config(format!("{}: {m}", args.input.display())),
        other => other,
    })?;
    let rows = claims
        .iter()
        .map(|c| table.compare(c))
        .collect::<CliResult<Vec<_>>>()?;
    emit(args.out.as_deref(), |buf| write_comparisons(&rows, buf))
}

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Capacity(a) => run_capacity(a, false),
        Command::Mc(a) => run_capacity(a, true),
        Command::Sweep(a) => run_sweep_cmd(a),
        Command::Absorption(a) => run_absorption(a),
        Command::Compare(a) => run_compare(a),
    }
}
