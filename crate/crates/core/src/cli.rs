//! Command-line front end: `run`, `cfl-check`, `sweep`, `export-csv`, `diag`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::config::{preset_text, ConfigFile, RawConfig};
use crate::diagnostics::peak_report;
use crate::error::{Error, Result};
use crate::rk4::{CflPolicy, RunSummary};
use crate::snapshot::{export_csv, read_series, read_snapshot_file, DirSink};

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "EPCS_OUT";
const DEFAULT_OUT_ROOT: &str = "runs";

#[derive(Debug, Parser)]
#[command(name = "polariton", version, about = "Polariton condensate simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one simulation, writing snapshots and diagnostics.txt.
    Run {
        #[command(flatten)]
        source: Source,
        /// Output directory [default: $EPCS_OUT/<name> or runs/<name>].
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the stability ratio of a configuration and PASS/FAIL.
    CflCheck {
        #[command(flatten)]
        source: Source,
    },
    /// Run one simulation per value of a parameter, concurrently.
    Sweep {
        #[command(flatten)]
        source: Source,
        /// Parameter key, bare (`g_ratio`) or qualified (`pump.F_p`).
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        /// Root directory; each run goes to `<out>/<param>=<value>`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert one field of an EPCS snapshot to CSV.
    ExportCsv {
        /// Snapshot file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Field name, e.g. psi, psi_c, n_R.
        #[arg(long)]
        field: String,
        /// Output file [default: stdout].
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute diagnostics from a directory of snapshots.
    Diag {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Debug, Args)]
struct Source {
    /// Configuration file.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    /// Shipped preset: table1_1d, table1_2d, table2, table3, hinrp_1d, hinrp_2d.
    #[arg(long)]
    preset: Option<String>,
    /// Override one key, `key=value`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// What to do when the stability ratio exceeds 1.
    #[arg(long, value_enum)]
    policy: Option<PolicyArg>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolicyArg {
    Reject,
    Warn,
}

impl Source {
    fn name(&self) -> String {
        match (&self.preset, &self.config) {
            (Some(p), _) => p.clone(),
            (None, Some(c)) => c.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "run".into()),
            (None, None) => "run".into(),
        }
    }

    fn raw(&self) -> Result<RawConfig> {
        let mut raw = match (&self.preset, &self.config) {
            (Some(p), _) => RawConfig::parse(preset_text(p)?)?,
            (None, Some(path)) => {
                let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                RawConfig::parse(&text)?
            }
            (None, None) => unreachable!("clap requires --config or --preset"),
        };
        for kv in &self.overrides {
            let (k, v) = kv.split_once('=').ok_or_else(|| Error::BadValue {
                key: kv.clone(),
                reason: "override must look like key=value".into(),
            })?;
            raw.set(k.trim(), v.trim())?;
        }
        Ok(raw)
    }

    fn apply_policy(&self, cfg: &mut ConfigFile) {
        match self.policy {
            Some(PolicyArg::Reject) => cfg.run.cfl_policy = CflPolicy::Reject,
            Some(PolicyArg::Warn) => cfg.run.cfl_policy = CflPolicy::Warn,
            None => {}
        }
    }

    fn load(&self) -> Result<ConfigFile> {
        let mut cfg = self.raw()?.resolve()?;
        self.apply_policy(&mut cfg);
        Ok(cfg)
    }
}

fn out_root() -> PathBuf {
    std::env::var_os(OUT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_ROOT))
}

/// Runs `cfg` into `dir`: snapshots, `config.cfg` (resolved) and `diagnostics.txt`.
pub fn run_into(cfg: &ConfigFile, dir: &Path) -> Result<RunSummary> {
    let mut sink = DirSink::create(dir)?;
    let cfg_path = dir.join("config.cfg");
    fs::write(&cfg_path, cfg.to_text()).map_err(|e| Error::io(&cfg_path, e))?;
    let summary = cfg.simulate(&mut sink)?;
    let diag_path = dir.join("diagnostics.txt");
    let text = format!("cfl_ratio: {}\nsteps: {}\n{}", summary.cfl, summary.steps, summary.diagnostics.to_text());
    fs::write(&diag_path, text).map_err(|e| Error::io(&diag_path, e))?;
    Ok(summary)
}

/// Parses `args` (including the program name) and executes the command.
/// Returns the process exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// 2 for missing input files, 1 for everything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound => 2,
        _ => 1,
    }
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let io = |e| Error::io("<stdout>", e);
    match cmd {
        Command::Run { source, out: dir } => {
            let cfg = source.load()?;
            let dir = dir.unwrap_or_else(|| out_root().join(source.name()));
            warn_cfl(&cfg, err)?;
            let s = run_into(&cfg, &dir)?;
            writeln!(out, "wrote {} snapshots to {}", s.snapshots, dir.display()).map_err(io)?;
            write!(out, "{}", s.diagnostics.to_text()).map_err(io)?;
            Ok(0)
        }
        Command::CflCheck { source } => {
            let cfg = source.load()?;
            let ratio = cfg.cfl_ratio()?;
            let verdict = if ratio <= 1.0 { "PASS" } else { "FAIL" };
            writeln!(out, "cfl_ratio: {ratio:.4} ({ratio:e})").map_err(io)?;
            writeln!(out, "{verdict}").map_err(io)?;
            Ok(if ratio <= 1.0 { 0 } else { 1 })
        }
        Command::Sweep { source, param, values, out: root } => {
            let raw = source.raw()?;
            let mut configs = Vec::with_capacity(values.len());
            for v in &values {
                let mut r = raw.clone();
                r.set(&param, v)?;
                let mut cfg = r.resolve()?;
                source.apply_policy(&mut cfg);
                configs.push(cfg);
            }
            if let Some(first) = configs.first() {
                warn_cfl(first, err)?;
            }
            let root = root.unwrap_or_else(|| out_root().join(format!("{}_sweep", source.name())));
            let results: Vec<Result<RunSummary>> = configs
                .par_iter()
                .zip(&values)
                .map(|(cfg, v)| run_into(cfg, &root.join(format!("{param}={v}"))))
                .collect();
            writeln!(out, "{param}\tpeak_density\tpeak_number\tonset_time").map_err(io)?;
            for (v, r) in values.iter().zip(results) {
                let d = r?.diagnostics;
                let onset = d.onset_time.map_or("none".to_string(), |t| t.to_string());
                writeln!(out, "{v}\t{:.6e}\t{:.6e}\t{onset}", d.peak_density, d.peak_number).map_err(io)?;
            }
            Ok(0)
        }
        Command::ExportCsv { input, field, out: path } => {
            let s = read_snapshot_file(&input)?;
            match path {
                Some(p) => {
                    let file = fs::File::create(&p).map_err(|e| Error::io(&p, e))?;
                    export_csv(&s, &field, std::io::BufWriter::new(file))?;
                }
                None => export_csv(&s, &field, out)?,
            }
            Ok(0)
        }
        Command::Diag { input } => {
            if !input.is_dir() {
                return Err(Error::io(&input, std::io::Error::from(std::io::ErrorKind::NotFound)));
            }
            let series = read_series(&input)?;
            let d = peak_report(&series).ok_or_else(|| Error::BadValue {
                key: "in".into(),
                reason: format!("no .epcs snapshots in {}", input.display()),
            })?;
            write!(out, "{}", d.to_text()).map_err(io)?;
            Ok(0)
        }
    }
}

fn warn_cfl(cfg: &ConfigFile, err: &mut dyn Write) -> Result<()> {
    let ratio = cfg.cfl_ratio()?;
    if ratio > 1.0 && cfg.run.cfl_policy == CflPolicy::Warn {
        let _ = writeln!(err, "warning: CFL ratio {ratio:.4} exceeds 1; the run may diverge");
    }
    Ok(())
}
