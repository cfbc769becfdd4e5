//! Full harness run: config text in, trace, report, certification and chart out.

use disentangle::harness::{certify, plot, run_experiment, ExperimentConfig};

fn main() -> disentangle::Result<()> {
    let config = ExperimentConfig::parse(
        "qubits = 4
         rank = 2
         quantities = von_neumann, renyi, tsallis, trace_distance, fidelity
         seed = 5",
        None,
    )?;
    let out = std::env::temp_dir().join("disentangle-example");
    let run = run_experiment(&config, Some(&out))?;
    let report = &run.report;
    println!("epochs {}, final cost {:.2e}, preserved {:?}", report.epochs_run, report.final_cost, report.preserved);
    for q in &report.quantities {
        println!("  {:<16} deviation {:.2e} <= bound {:.3}", q.label, q.deviation, q.bound.unwrap_or(f64::NAN));
    }
    let checks = certify(report);
    println!("{}/{} bound checks hold", checks.iter().filter(|c| c.satisfied).count(), checks.len());
    std::fs::write(out.join("trace.svg"), plot::render_svg(&run.trace)?)?;
    println!("outputs in {}", out.display());
    Ok(())
}
