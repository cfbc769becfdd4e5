use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use disentangle::harness::{self, plot, state_io, ExperimentConfig, Overrides, TraceTable};
use disentangle::{Error, QuantityKind};

#[derive(Parser)]
#[command(name = "disentangle", version, about = "Estimate entropies and distances by variational disentangling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train on generated or loaded states; writes trace.csv and report.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        qubits: Option<usize>,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long)]
        lr: Option<f64>,
        #[arg(long)]
        layers: Option<usize>,
        #[arg(long)]
        discard: Option<usize>,
        /// Comma-separated quantity names.
        #[arg(long)]
        quantities: Option<String>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        /// Switch to finite-shot swap tests with this many shots.
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long)]
        staged: bool,
    },
    /// Re-check every bound recorded in a report.
    Certify {
        #[arg(long)]
        report: PathBuf,
    },
    /// Render a trace as an SVG chart.
    Plot {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a quantity exactly on serialized states.
    Oracle {
        quantity: String,
        #[arg(long = "state", required = true)]
        states: Vec<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 1.5)]
        q: f64,
    },
}

fn execute(command: Command) -> disentangle::Result<()> {
    match command {
        Command::Run {
            config,
            out,
            seed,
            qubits,
            rank,
            epochs,
            lr,
            layers,
            discard,
            quantities,
            alpha,
            q,
            shots,
            staged,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            cfg.apply(&Overrides {
                seed,
                qubits,
                rank,
                epochs,
                learning_rate: lr,
                layers,
                discard,
                quantities,
                alpha,
                q,
                shots,
                staged,
            })?;
            let run = harness::run_experiment(&cfg, Some(&out))?;
            let r = &run.report;
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            println!(
                "{} epochs, final cost {:.3e} ({}), preserved qubits {:?}",
                r.epochs_run,
                r.final_cost,
                if r.converged { "converged" } else { "not converged" },
                r.preserved
            );
            for q in &r.quantities {
                println!(
                    "  {:<24} exact {:>12.8} estimate {:>12.8} deviation {:.3e}",
                    q.label, q.exact, q.estimate, q.deviation
                );
            }
            println!("wrote {}", out.display());
        }
        Command::Certify { report } => {
            let report = harness::load_report(&report)?;
            let checks = harness::certify(&report);
            for c in &checks {
                println!(
                    "{} {:<32} observed {:.4e} bound {:.4e}",
                    if c.satisfied { "ok  " } else { "FAIL" },
                    c.label,
                    c.observed,
                    c.bound
                );
            }
            let failed = checks.iter().filter(|c| !c.satisfied).count();
            println!("{} checks, {failed} violated, final cost {:.3e}", checks.len(), report.final_cost);
        }
        Command::Plot { trace, out } => {
            let table = TraceTable::read(std::fs::File::open(&trace)?)?;
            std::fs::write(&out, plot::render_svg(&table)?)?;
        }
        Command::Oracle {
            quantity,
            states,
            alpha,
            q,
        } => {
            let kind = QuantityKind::parse(&quantity, alpha, q)?;
            let loaded = states
                .iter()
                .map(|p| state_io::load_state(p))
                .collect::<disentangle::Result<Vec<_>>>()?;
            let value = match loaded.as_slice() {
                [rho] => kind.evaluate_single(rho)?,
                [rho, sigma] => kind.evaluate_pair(rho, sigma)?,
                _ => return Err(Error::Config("pass one state for entropies or two for distances".into())),
            };
            println!("{value:.17e}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::NonFinite { .. } => ExitCode::from(3),
                Error::Io(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
