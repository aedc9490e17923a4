//! Command-line front end: `simulate`, `bounds`, `sweep`, `report`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wncs::harness::{
    bounds_csv, merge_reports, read_csv_table, run_bounds, sweep, sweep_csv, write_meta, DecoderChoice, ExperimentConfig,
    GammaMode,
};
use wncs::{Error, Result};

#[derive(Parser)]
#[command(name = "wncs", version, about = "Closed-loop MAP/ML decoding simulator and bound calculator")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct Overrides {
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated SNR grid in dB, replacing the configured one.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    snr_db: Option<Vec<f64>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    decoder: Option<DecoderChoice>,
    #[arg(long)]
    gamma_mode: Option<GammaMode>,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo sweep plus bounds for one configuration.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        ov: Overrides,
    },
    /// Bounds only, no Monte Carlo.
    Bounds {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        ov: Overrides,
    },
    /// `simulate` for several configurations; writes `<out>/<stem>.csv`.
    Sweep {
        #[arg(long, required = true, num_args = 1..)]
        config: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        ov: Overrides,
    },
    /// Merges CSV files on `snr_db` into whitespace-separated columns.
    Report {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &Path, ov: &Overrides) -> Result<ExperimentConfig> {
    let base = ExperimentConfig::from_path(path)?;
    let mut file = base.file;
    if let Some(s) = ov.seed {
        file.sim.seed = s;
    }
    if let Some(g) = &ov.snr_db {
        file.sim.snr_db = g.clone();
    }
    if let Some(t) = ov.trials {
        file.sim.trials = t;
    }
    if let Some(d) = ov.decoder {
        file.sim.decoder = d;
    }
    if let Some(g) = ov.gamma_mode {
        file.sim.gamma_mode = g;
    }
    ExperimentConfig::with_file(file)
}

fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.toml");
    PathBuf::from(s)
}

fn simulate(config: &Path, out: &Path, ov: &Overrides) -> Result<()> {
    let cfg = load(config, ov)?;
    let result = sweep(&cfg)?;
    sweep_csv(&result, out)?;
    write_meta(&meta_path(out), &cfg.file, Some(&result))
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Simulate { config, out, ov } => simulate(&config, &out, &ov),
        Command::Bounds { config, out, ov } => {
            let cfg = load(&config, &ov)?;
            bounds_csv(&run_bounds(&cfg)?, &out)?;
            write_meta(&meta_path(&out), &cfg.file, None)
        }
        Command::Sweep { config, out, ov } => {
            std::fs::create_dir_all(&out).map_err(|source| Error::Io { path: out.display().to_string(), source })?;
            for c in &config {
                let stem = c.file_stem().map_or_else(|| "run".into(), |s| s.to_string_lossy().into_owned());
                simulate(c, &out.join(format!("{stem}.csv")), &ov)?;
            }
            Ok(())
        }
        Command::Report { inputs, out } => {
            let tables = inputs
                .iter()
                .map(|p| {
                    let label = p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned());
                    read_csv_table(p).map(|t| (label, t))
                })
                .collect::<Result<Vec<_>>>()?;
            let text = merge_reports(&tables)?;
            match out {
                Some(p) => std::fs::write(&p, text).map_err(|source| Error::Io { path: p.display().to_string(), source }),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        pool = pool.num_threads(t);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(cli.cmd)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
