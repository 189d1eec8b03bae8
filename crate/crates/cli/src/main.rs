use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use noma_crs::{Combine, Method, RateMeta};
use noma_crs_cli::sweep::{parse_combine, parse_method};
use noma_crs_cli::{evaluate, run_checks, run_sweep, write_csv, Axis, ScenarioConfig, SweepSpec};

const EXIT_CONFIG: u8 = 1;
const EXIT_COMPUTE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

/// Average rates of NOMA-based cooperative relaying over Rician fading.
#[derive(Parser)]
#[command(name = "noma-crs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the scenario once with each requested method.
    Single(Common),
    /// Evaluate over a grid of a2 or SNR values and write CSV.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = |s: &str| s.parse::<Axis>())]
        axis: Axis,
        /// Defaults: 0.05 (a2) or 0 (snr_db).
        #[arg(long, allow_hyphen_values = true)]
        start: Option<f64>,
        /// Defaults: 0.45 (a2) or 30 (snr_db).
        #[arg(long, allow_hyphen_values = true)]
        stop: Option<f64>,
        /// Defaults: 9 (a2) or 7 (snr_db).
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Run the acceptance checks for the scenario; JSON lines on stdout.
    Validate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// CSV output path; the resolved scenario goes to `<out>.cfg`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated subset of exact, approx, mc.
    #[arg(long, value_delimiter = ',', default_value = "exact,approx,mc", value_parser = parse_method)]
    methods: Vec<Method>,
    /// Add the traditional (non-NOMA) relaying baseline.
    #[arg(long)]
    traditional: bool,
    #[arg(long, default_value = "mrc", value_parser = parse_combine)]
    combine: Combine,
    /// Overrides mc.seed.
    #[arg(long)]
    seed: Option<u64>,
}

enum Failure {
    Config(anyhow::Error),
    Compute(anyhow::Error),
    Validation(usize),
}

impl Common {
    fn methods(&self) -> Vec<Method> {
        let mut out = Vec::new();
        for &m in &self.methods {
            if !out.contains(&m) {
                out.push(m);
            }
        }
        out
    }
}

fn load(path: &Path, seed: Option<u64>) -> Result<ScenarioConfig, Failure> {
    let mut scenario = ScenarioConfig::from_path(path)
        .with_context(|| format!("config {}", path.display()))
        .map_err(Failure::Config)?;
    if let Some(seed) = seed {
        scenario.mc.seed = seed;
    }
    Ok(scenario)
}

fn write_outputs(out: &Path, scenario: &ScenarioConfig, rows: &[noma_crs_cli::SweepRow]) -> Result<(), Failure> {
    let io_err = |e: io::Error| Failure::Config(anyhow::Error::new(e).context(format!("writing {}", out.display())));
    let file = File::create(out).map_err(io_err)?;
    write_csv(BufWriter::new(file), rows).map_err(io_err)?;
    let mut sidecar = out.as_os_str().to_owned();
    sidecar.push(".cfg");
    std::fs::write(&sidecar, scenario.to_config_string()).map_err(io_err)?;
    log::info!("wrote {} rows to {}", rows.len(), out.display());
    Ok(())
}

fn print_rows(rows: &[noma_crs_cli::SweepRow]) {
    let mut stdout = io::stdout().lock();
    for row in rows {
        let mut line = format!("{} = {}", row.axis, row.axis_value);
        if let Some(r) = row.report {
            line += &format!(
                "  {:<15}  c_s1 = {:.6}  c_s2 = {:.6}  sum = {:.6}",
                r.method.to_string(),
                r.c_s1,
                r.c_s2,
                r.sum
            );
            line += &match r.meta {
                RateMeta::Series { tail_bound } => format!("  (tail <= {tail_bound:.1e})"),
                RateMeta::Quadrature { order, tail_bound } => {
                    format!("  (order {order}, tail <= {tail_bound:.1e})")
                }
                RateMeta::MonteCarlo {
                    stderr_c1,
                    stderr_c2,
                    samples,
                } => format!("  (stderr {stderr_c1:.1e} / {stderr_c2:.1e}, {samples} draws)"),
            };
        }
        if let Some(t) = row.traditional {
            line += &format!("  traditional = {:.6} (stderr {:.1e})", t.mean, t.stderr);
        }
        let _ = writeln!(stdout, "{line}");
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Single(common) => {
            let scenario = load(&common.config, common.seed)?;
            let traditional = common.traditional.then_some(common.combine);
            let rows = evaluate(&scenario, Axis::A2, &common.methods(), traditional)
                .map_err(|e| Failure::Compute(e.into()))?;
            print_rows(&rows);
            if let Some(out) = &common.out {
                write_outputs(out, &scenario, &rows)?;
            }
        }
        Command::Sweep {
            common,
            axis,
            start,
            stop,
            steps,
        } => {
            let (d_start, d_stop, d_steps) = match axis {
                Axis::A2 => (0.05, 0.45, 9),
                Axis::SnrDb => (0.0, 30.0, 7),
            };
            let spec = SweepSpec {
                axis,
                start: start.unwrap_or(d_start),
                stop: stop.unwrap_or(d_stop),
                steps: steps.unwrap_or(d_steps),
                methods: common.methods(),
                include_traditional: common.traditional,
                combine: common.combine,
            };
            spec.validate().map_err(|e| Failure::Config(e.into()))?;
            let scenario = load(&common.config, common.seed)?;
            let rows = run_sweep(&scenario, &spec).map_err(|e| Failure::Compute(e.into()))?;
            match &common.out {
                Some(out) => write_outputs(out, &scenario, &rows)?,
                None => write_csv(io::stdout().lock(), &rows)
                    .map_err(|e| Failure::Compute(e.into()))?,
            }
        }
        Command::Validate { config, seed } => {
            let scenario = load(&config, seed)?;
            let checks = run_checks(&scenario);
            let mut stdout = io::stdout().lock();
            for c in &checks {
                let _ = writeln!(stdout, "{}", c.to_json());
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(Failure::Validation(failed));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_COMPUTE)
        }
        Err(Failure::Validation(n)) => {
            eprintln!("validation failed: {n} check(s) out of tolerance");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}
