use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use giant_atom::oracle::SystemKind;
use giant_atom_cli::commands::{self, Report, RunInfo};
use giant_atom_cli::{CliError, Format, Result, Settings};

/// Single-photon scattering spectra of giant atoms in a waveguide.
///
/// Frequencies are in units of ω_e unless suffixed with `rad/s`
/// (`--wd 0.3`, `--wd 0.3we` and `--wd 9e8rad/s` are equivalent at the
/// default ω_e = 3e9 rad/s). Sizes are in metres.
#[derive(Debug, Parser)]
#[command(name = "giant-atom", version)]
struct Cli {
    /// key=value file with the same keys as the long flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// csv or json.
    #[arg(long, global = true)]
    format: Option<String>,

    /// Seed for oracle-check draws.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Excited-level frequency ω_e in rad/s [3e9].
    #[arg(long)]
    we: Option<String>,
    /// Group velocity in m/s [3e8].
    #[arg(long)]
    vg: Option<String>,
    /// Coupling ratio f/sqrt(v_g ω_e) [0.05].
    #[arg(long)]
    g: Option<String>,
    /// Absolute coupling f, instead of --g.
    #[arg(long)]
    f: Option<String>,
    /// Size in metres, or lo:hi:points.
    #[arg(long)]
    x0: Option<String>,
    /// Metastable level ω_f [0.7].
    #[arg(long)]
    wf: Option<String>,
    /// Drive frequency ω_d [0.3].
    #[arg(long)]
    wd: Option<String>,
    /// Drive strength η [0.08].
    #[arg(long)]
    eta: Option<String>,
    /// Loss rate of |e⟩ with --dissipative [1e-3].
    #[arg(long)]
    gamma_e: Option<String>,
    /// Loss rate of |f⟩ with --dissipative [1e-3].
    #[arg(long)]
    gamma_f: Option<String>,
    /// Include the loss rates.
    #[arg(long)]
    dissipative: bool,
}

impl ModelArgs {
    fn apply(self, s: &mut Settings) {
        let pairs = [
            ("we", self.we),
            ("vg", self.vg),
            ("g", self.g),
            ("f", self.f),
            ("x0", self.x0),
            ("wf", self.wf),
            ("wd", self.wd),
            ("eta", self.eta),
            ("gamma-e", self.gamma_e),
            ("gamma-f", self.gamma_f),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                s.set(k, v);
            }
        }
        if self.dissipative {
            s.set("dissipative", "true");
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Transmission and reflection over a detuning and/or size grid.
    Spectrum {
        /// two-level, three-level or two-small-atoms.
        kind: String,
        #[command(flatten)]
        model: ModelArgs,
        /// Detuning E − ω_e, value or lo:hi:points.
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<String>,
        /// Photon energy, value or lo:hi:points (instead of --delta).
        #[arg(long)]
        energy: Option<String>,
    },
    /// Complete-reflection detuning against size, with the sinusoid fit.
    Resonance {
        #[command(flatten)]
        model: ModelArgs,
        /// Coupling ratios lo:hi:points; emits one fitted amplitude per ratio.
        #[arg(long)]
        g_sweep: Option<String>,
        /// Sign-change scan density [10000].
        #[arg(long)]
        scan_points: Option<String>,
    },
    /// Dressed frequencies, mixing angle and effective couplings (JSON).
    Dressed {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Effective couplings for the four published lines next to the printed values.
    Table1,
    /// Closed forms against the boundary-matching solver on random draws.
    OracleCheck {
        /// Draws per system kind and loss setting [1000].
        #[arg(long)]
        draws: Option<String>,
    },
}

fn run(cli: Cli) -> Result<Report> {
    let mut settings = match &cli.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    if let Some(o) = &cli.output {
        settings.set("output", o.to_string_lossy());
    }
    if let Some(f) = &cli.format {
        settings.set("format", f.as_str());
    }
    if let Some(seed) = cli.seed {
        settings.set("seed", seed.to_string());
    }

    match cli.command {
        Command::Spectrum {
            kind,
            model,
            delta,
            energy,
        } => {
            let kind: SystemKind = kind
                .parse()
                .map_err(|e: giant_atom::Error| CliError::Validation(e.to_string()))?;
            model.apply(&mut settings);
            if let Some(d) = delta {
                settings.set("delta", d);
            }
            if let Some(e) = energy {
                settings.set("energy", e);
            }
            commands::cmd_spectrum(kind, &settings, &RunInfo::new("spectrum"))
        }
        Command::Resonance {
            model,
            g_sweep,
            scan_points,
        } => {
            model.apply(&mut settings);
            if let Some(g) = g_sweep {
                settings.set("g-sweep", g);
            }
            if let Some(n) = scan_points {
                settings.set("scan-points", n);
            }
            commands::cmd_resonance(&settings, &RunInfo::new("resonance"))
        }
        Command::Dressed { model } => {
            model.apply(&mut settings);
            commands::cmd_dressed(&settings, &RunInfo::new("dressed"))
        }
        Command::Table1 => commands::cmd_table1(&RunInfo::new("table1")),
        Command::OracleCheck { draws } => {
            if let Some(n) = draws {
                settings.set("draws", n);
            }
            let seed = settings.integer::<u64>("seed")?.unwrap_or(0);
            commands::cmd_oracle_check(&settings, seed, &RunInfo::new("oracle-check"))
        }
    }
    .and_then(|report| {
        let format: Format = settings.get("format").unwrap_or("csv").parse()?;
        match settings.get("output") {
            Some(path) => {
                let mut w = BufWriter::new(File::create(path)?);
                report.write(format, &mut w)?;
                w.flush()?;
            }
            None => {
                let mut w = io::stdout().lock();
                report.write(format, &mut w)?;
                w.flush()?;
            }
        }
        Ok(report)
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(Report {
            failure: Some(e), ..
        })
        | Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Ok(_) => ExitCode::SUCCESS,
    }
}
