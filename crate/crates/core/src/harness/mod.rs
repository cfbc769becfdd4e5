//! Configuration-driven experiments: generate inputs, train, evaluate, certify.
//!
//! A run writes `trace.csv` (one row per epoch) and `report.json` to its output
//! directory. [`certify`] re-derives every bound check from a saved report.

pub mod config;
pub mod plot;
pub mod state_io;
pub mod trace;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use config::{auto_layers, Discard, EvaluationMode, ExperimentConfig, Init, Overrides, Support};
pub use trace::{SeriesColumn, TraceTable};

use crate::bounds::{self, BoundCheck};
use crate::circuit::{build_ansatz, ParameterVector};
use crate::cost::{
    self, disentanglement_error, mix_seed, preserved_reductions, witness_disentanglement_error, CostSpec, PairingMode,
};
use crate::error::{Error, Result};
use crate::linalg::{
    compose, numerical_rank, partial_trace, purity, DensityMatrix, QubitPartition, SquareMatrix, Subsystem, RANK_TOL,
};
use crate::optimizer::{self, series_for, Series, Termination, TrainingConfig};
use crate::quantities::{trace_distance, QuantityKind};
use crate::stategen;

/// Final cost below which a run counts as converged.
pub const CONVERGED_COST: f64 = 1e-2;

/// Exact value, final estimate and bound for one series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantityResult {
    pub label: String,
    pub quantity: QuantityKind,
    pub states: Vec<usize>,
    pub exact: f64,
    pub estimate: f64,
    pub deviation: f64,
    /// Training bound at the measured cost; absent for quantities without one.
    pub bound: Option<f64>,
    pub satisfied: Option<bool>,
}

/// Trace distance to the nearest product with a pure discarded part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessDistanceCheck {
    pub state: usize,
    pub rank: usize,
    /// `1 − λ_max` of the discarded reduction.
    pub witness_error: f64,
    pub trace_distance: f64,
    pub bound: f64,
    pub satisfied: bool,
}

/// Purities of the discarded reductions and their overlap with one common witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionCheck {
    pub epsilon: f64,
    pub purities: Vec<f64>,
    pub purity_floor: f64,
    pub purity_satisfied: bool,
    /// Absent in diagonal-only mode, where reductions need not share a witness.
    pub overlaps: Option<Vec<f64>>,
    pub overlap_floor: f64,
    pub overlap_satisfied: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageResult {
    pub stage: usize,
    pub qubits: usize,
    pub discarded: usize,
    pub first_epoch: usize,
    pub epochs: usize,
    pub termination: Termination,
    pub final_cost: f64,
    /// Per-state `1 − λ_max(ρ_A)` of this stage's unitary on its inputs: the
    /// error against the best pure target, which is what the cost drives down.
    pub disentanglement_errors: Vec<f64>,
    /// Per-state `1 − ⟨0|ρ_A|0⟩`, for comparison with a fixed `|0⟩` target.
    pub zero_target_errors: Vec<f64>,
    pub parameters: ParameterVector,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub qubits: usize,
    /// Rank entering the bounds: the configured rank, or the largest numerical
    /// rank of loaded states.
    pub rank: usize,
    pub num_states: usize,
    pub discarded: Vec<usize>,
    pub preserved: Vec<usize>,
    pub required_preserved_qubits: usize,
    pub warnings: Vec<String>,
    pub epochs_run: usize,
    /// Exact cost of the end-to-end unitary: the `ε` of every bound.
    pub final_cost: f64,
    pub converged: bool,
    pub quantities: Vec<QuantityResult>,
    pub witness_distances: Vec<WitnessDistanceCheck>,
    pub reductions: ReductionCheck,
    pub stages: Vec<StageResult>,
    /// Largest end-to-end `1 − λ_max(ρ_A)` over the inputs.
    pub end_to_end_error: f64,
    /// Largest end-to-end `1 − ⟨0|ρ_A|0⟩` over the inputs.
    pub end_to_end_zero_target_error: f64,
    pub wall_time_secs: f64,
    pub trace_path: Option<PathBuf>,
}

/// Report and trace of one run.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: ExperimentReport,
    pub trace: TraceTable,
}

fn state_seed(seed: u64, index: usize) -> u64 {
    mix_seed(seed ^ 0x7374_6174_6573, index as u64)
}

/// Loads or generates the input states of `config`.
pub fn prepare_states(config: &ExperimentConfig) -> Result<Vec<DensityMatrix>> {
    if !config.states.is_empty() {
        let states = config
            .states
            .iter()
            .map(|p| state_io::load_state(p))
            .collect::<Result<Vec<_>>>()?;
        if let Some(bad) = states.iter().find(|s| s.qubits() != states[0].qubits()) {
            return Err(Error::DimensionMismatch {
                expected: states[0].dim(),
                actual: bad.dim(),
            });
        }
        return Ok(states);
    }
    match config.support {
        Support::Shared => {
            stategen::random_states_shared_support(config.qubits, config.rank, config.num_states, state_seed(config.seed, 0))
        }
        Support::Independent => (0..config.num_states)
            .map(|i| stategen::random_mixed_state(config.qubits, config.rank, state_seed(config.seed, i)))
            .collect(),
    }
}

fn stage_sizes(total: usize, config: &ExperimentConfig) -> Vec<usize> {
    if !config.staged_discard {
        return vec![total];
    }
    let mut left = total;
    let mut sizes = Vec::new();
    while left > 0 {
        let s = config.stage_size.min(left);
        sizes.push(s);
        left -= s;
    }
    sizes
}

/// `I_{2^extra} ⊗ u`.
fn pad_leading(u: &SquareMatrix, extra: usize) -> SquareMatrix {
    SquareMatrix::identity(1 << extra).kron(u)
}

fn write_trace(table: &TraceTable, path: &Path) -> Result<()> {
    table.write(fs::File::create(path)?)
}

/// Runs one experiment. With `out_dir`, writes `trace.csv` and `report.json`
/// there; on divergence the partial trace is still written.
pub fn run_experiment(config: &ExperimentConfig, out_dir: Option<&Path>) -> Result<RunOutput> {
    let started = Instant::now();
    config.validate()?;
    let states = prepare_states(config)?;
    let n = states[0].qubits();
    let m = states.len();
    let series: Vec<Series> = series_for(&config.quantities, m)?;
    let exact: Vec<f64> = series.iter().map(|s| s.evaluate(&states)).collect::<Result<_>>()?;
    let rank = if config.states.is_empty() {
        config.rank
    } else {
        states.iter().map(|s| numerical_rank(s, RANK_TOL)).max().unwrap_or(1)
    };

    let required = stategen::required_preserved_qubits(&states)?;
    let total_discard = match config.discard {
        Discard::Auto if required >= n => {
            return Err(Error::Config(format!(
                "inputs need all {n} qubits; nothing can be discarded"
            )))
        }
        Discard::Auto => n - required,
        Discard::Qubits(k) if k >= n => {
            return Err(Error::Config(format!("cannot discard {k} of {n} qubits")));
        }
        Discard::Qubits(k) => k,
    };
    let mut warnings = Vec::new();
    if n - total_discard < required {
        warnings.push(format!(
            "preserved register has {} qubits but the inputs span {} qubits; estimates will be biased",
            n - total_discard,
            required
        ));
    }
    let partition = QubitPartition::leading(n, total_discard)?;

    let mut table = TraceTable {
        series: series
            .iter()
            .zip(&exact)
            .map(|(s, &e)| SeriesColumn {
                label: s.label.clone(),
                exact: e,
                estimates: Vec::new(),
            })
            .collect(),
        ..TraceTable::default()
    };
    let trace_path = out_dir.map(|d| d.join("trace.csv"));
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
    }

    let mut current = states.clone();
    let mut total_unitary = SquareMatrix::identity(1 << n);
    let mut stages = Vec::new();
    let mut width = n;
    for (stage, &size) in stage_sizes(total_discard, config).iter().enumerate() {
        let stage_partition = QubitPartition::leading(width, size)?;
        let ansatz = build_ansatz(width, config.layers_for(width))?;
        let spec = CostSpec::new(
            current.clone(),
            stage_partition.clone(),
            config.cost_mode,
            config.evaluation_for(stage as u64),
        )?;
        let init_seed = if stage == 0 { config.seed } else { mix_seed(config.seed, stage as u64) };
        let training = TrainingConfig {
            steps: config.epochs,
            learning_rate: config.learning_rate,
            early_stop_threshold: config.early_stop,
            seed: init_seed,
            record_quantities: config.quantities.clone(),
        };
        let first_epoch = table.len();
        let push = |table: &mut TraceTable, records: &[optimizer::EpochRecord]| {
            for r in records {
                table.epochs.push(first_epoch + r.epoch);
                table.cost.push(r.cost);
                table.grad_norm.push(r.grad_norm);
                for (col, v) in table.series.iter_mut().zip(&r.estimates) {
                    col.estimates.push(*v);
                }
            }
        };
        let initial = match config.init {
            Init::Random => ansatz.initialize_parameters(init_seed),
            Init::Zero => ParameterVector::zeros(ansatz.parameter_count()),
        };
        let trained = match optimizer::train_from(&ansatz, &spec, &training, initial) {
            Ok(t) => t,
            Err(divergence) => {
                push(&mut table, &divergence.partial);
                if let Some(path) = &trace_path {
                    write_trace(&table, path)?;
                }
                return Err(divergence.error);
            }
        };
        push(&mut table, &trained.records);

        let u = ansatz.unitary(&trained.final_parameters)?;
        let errors = current
            .iter()
            .map(|rho| witness_disentanglement_error(&u, rho, &stage_partition))
            .collect::<Result<Vec<_>>>()?;
        let zero_errors = current
            .iter()
            .map(|rho| disentanglement_error(&u, rho, &stage_partition))
            .collect::<Result<Vec<_>>>()?;
        total_unitary = &pad_leading(&u, n - width) * &total_unitary;
        current = preserved_reductions(&ansatz, &trained.final_parameters, &current, &stage_partition)?;
        stages.push(StageResult {
            stage,
            qubits: width,
            discarded: size,
            first_epoch,
            epochs: trained.records.len(),
            termination: trained.termination,
            final_cost: trained.final_cost,
            disentanglement_errors: errors,
            zero_target_errors: zero_errors,
            parameters: trained.final_parameters,
        });
        width -= size;
    }

    let full_spec = CostSpec::new(states.clone(), partition.clone(), config.cost_mode, crate::cost::Evaluation::Exact)?;
    let epsilon = cost::unitary_cost(&total_unitary, &full_spec)?;
    let eps_for_bounds = epsilon.clamp(0.0, 1.0);

    let quantities = series
        .iter()
        .zip(&exact)
        .map(|(s, &e)| {
            let estimate = s.evaluate(&current)?;
            let deviation = (estimate - e).abs();
            let bound = bounds::disentanglement_bound(s.quantity, rank, eps_for_bounds).ok();
            Ok(QuantityResult {
                label: s.label.clone(),
                quantity: s.quantity,
                states: s.states.clone(),
                exact: e,
                estimate,
                deviation,
                bound,
                satisfied: bound.map(|b| deviation <= b),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let rotated = states
        .iter()
        .map(|rho| rho.conjugate_by(&total_unitary))
        .collect::<Result<Vec<_>>>()?;
    let witness_distances = witness_distance_checks(&states, &rotated, &partition)?;
    let reductions = reduction_check(&rotated, &partition, epsilon, config.cost_mode)?;
    let end_to_end_error = states
        .iter()
        .map(|rho| witness_disentanglement_error(&total_unitary, rho, &partition))
        .try_fold(0.0f64, |acc, e| e.map(|e| acc.max(e)))?;
    let end_to_end_zero_target_error = cost::max_disentanglement_error(&total_unitary, &states, &partition)?;

    let report = ExperimentReport {
        config: config.clone(),
        qubits: n,
        rank,
        num_states: m,
        discarded: partition.discarded().to_vec(),
        preserved: partition.preserved().to_vec(),
        required_preserved_qubits: required,
        warnings,
        epochs_run: table.len(),
        final_cost: epsilon,
        converged: epsilon < CONVERGED_COST,
        quantities,
        witness_distances,
        reductions,
        stages,
        end_to_end_error,
        end_to_end_zero_target_error,
        wall_time_secs: started.elapsed().as_secs_f64(),
        trace_path: trace_path.clone(),
    };
    if let Some(dir) = out_dir {
        write_trace(&table, &dir.join("trace.csv"))?;
        fs::write(dir.join("report.json"), serde_json::to_string_pretty(&report)?)?;
    }
    Ok(RunOutput { report, trace: table })
}

fn top_eigenvector(rho: &DensityMatrix) -> (f64, Vec<num_complex::Complex64>) {
    let eigen = rho.eigen();
    (eigen.values[0], eigen.vector(0))
}

fn witness_distance_checks(
    states: &[DensityMatrix],
    rotated: &[DensityMatrix],
    partition: &QubitPartition,
) -> Result<Vec<WitnessDistanceCheck>> {
    states
        .iter()
        .zip(rotated)
        .enumerate()
        .map(|(i, (rho, turned))| {
            let rho_a = partial_trace(turned, partition, Subsystem::Discarded)?;
            let rho_b = partial_trace(turned, partition, Subsystem::Preserved)?;
            let (top, psi) = top_eigenvector(&rho_a);
            let witness_error = (1.0 - top).clamp(0.0, 1.0);
            let target = DensityMatrix::new(compose(&SquareMatrix::projector(&psi), rho_b.matrix(), partition)?)?;
            let distance = trace_distance(turned, &target)?;
            let rank = numerical_rank(rho, RANK_TOL).max(1);
            let bound = bounds::witness_distance_bound(rank, witness_error)?;
            Ok(WitnessDistanceCheck {
                state: i,
                rank,
                witness_error,
                trace_distance: distance,
                bound,
                satisfied: distance <= bound + 1e-12,
            })
        })
        .collect()
}

fn reduction_check(
    rotated: &[DensityMatrix],
    partition: &QubitPartition,
    epsilon: f64,
    mode: PairingMode,
) -> Result<ReductionCheck> {
    let reductions = rotated
        .iter()
        .map(|r| partial_trace(r, partition, Subsystem::Discarded))
        .collect::<Result<Vec<_>>>()?;
    let (purity_floor, overlap_floor) = bounds::overlap_floors(rotated.len(), epsilon.max(0.0));
    let purities: Vec<f64> = reductions.iter().map(purity).collect();
    let overlaps = match mode {
        PairingMode::DiagonalOnly => None,
        PairingMode::FullPairwise => {
            let (_, psi) = top_eigenvector(&reductions[0]);
            Some(
                reductions
                    .iter()
                    .map(|r| {
                        psi.iter()
                            .zip(r.matrix().apply(&psi))
                            .map(|(a, b)| (a.conj() * b).re)
                            .sum()
                    })
                    .collect::<Vec<f64>>(),
            )
        }
    };
    Ok(ReductionCheck {
        epsilon,
        purity_satisfied: purities.iter().all(|&p| p >= purity_floor - 1e-12),
        overlap_satisfied: overlaps.as_ref().map(|o| o.iter().all(|&v| v >= overlap_floor - 1e-12)),
        purities,
        purity_floor,
        overlaps,
        overlap_floor,
    })
}

/// Re-derives every bound check of a report.
///
/// Labels: `training:<series>` (training bound), `continuity:<series>` (continuity
/// bound at the trace distance implied by `ε`), `witness_distance:s<i>`,
/// `reduction_purity:s<i>` and `reduction_overlap:s<i>` (observed `1 − value` against
/// `1 − floor`).
pub fn certify(report: &ExperimentReport) -> Vec<BoundCheck> {
    let eps = report.final_cost.clamp(0.0, 1.0);
    let mut checks = Vec::new();
    for q in &report.quantities {
        if let Ok(b) = bounds::disentanglement_bound(q.quantity, report.rank, eps) {
            checks.push(BoundCheck::new(format!("training:{}", q.label), q.deviation, b));
        }
        if let Ok(b) = bounds::continuity_at_epsilon(q.quantity, report.rank, eps) {
            checks.push(BoundCheck::new(format!("continuity:{}", q.label), q.deviation, b));
        }
    }
    for l in &report.witness_distances {
        let bound = bounds::witness_distance_bound(l.rank, l.witness_error).unwrap_or(f64::NAN);
        checks.push(BoundCheck::new(format!("witness_distance:s{}", l.state), l.trace_distance, bound + 1e-12));
    }
    let reductions = &report.reductions;
    for (i, p) in reductions.purities.iter().enumerate() {
        checks.push(BoundCheck::new(format!("reduction_purity:s{i}"), 1.0 - p, 1.0 - reductions.purity_floor + 1e-12));
    }
    if let Some(overlaps) = &reductions.overlaps {
        for (i, o) in overlaps.iter().enumerate() {
            checks.push(BoundCheck::new(format!("reduction_overlap:s{i}"), 1.0 - o, 1.0 - reductions.overlap_floor + 1e-12));
        }
    }
    checks
}

/// Reads a `report.json`.
pub fn load_report(path: &Path) -> Result<ExperimentReport> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> ExperimentConfig {
        ExperimentConfig {
            qubits: 3,
            rank: 2,
            layers: Some(4),
            epochs: 40,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn auto_discard_matches_support() {
        let out = run_experiment(&quick(), None).unwrap();
        assert_eq!(out.report.preserved, vec![2]);
        assert_eq!(out.report.discarded, vec![0, 1]);
        assert_eq!(out.trace.len(), out.report.epochs_run);
        assert_eq!(out.report.quantities.len(), 8);
    }

    #[test]
    fn pre_disentangled_input_stops_at_epoch_zero() {
        let dir = tempfile::tempdir().unwrap();
        let rho_b = stategen::random_mixed_state(1, 2, 3).unwrap();
        let rho = DensityMatrix::basis_state(1, 0).tensor(&rho_b);
        let path = dir.path().join("rho.json");
        state_io::save_state(&rho, &path).unwrap();
        let config = ExperimentConfig {
            states: vec![path],
            layers: Some(1),
            discard: Discard::Qubits(1),
            quantities: vec![QuantityKind::VonNeumann, QuantityKind::Renyi { alpha: 0.5 }],
            ..ExperimentConfig::default()
        };
        // zero angles leave a |0⟩ ⊗ ρ_B input untouched on two qubits
        let config = ExperimentConfig {
            init: Init::Zero,
            ..config
        };
        let report = run_experiment(&config, None).unwrap().report;
        assert_eq!(report.epochs_run, 1);
        assert!(report.final_cost.abs() < 1e-12);
        assert!(report.quantities.iter().all(|q| q.deviation <= 1e-9));
        assert!(certify(&report).iter().all(|c| c.satisfied));
    }

    #[test]
    fn same_seed_same_trace() {
        let a = run_experiment(&quick(), None).unwrap().trace;
        let b = run_experiment(&quick(), None).unwrap().trace;
        let (mut x, mut y) = (Vec::new(), Vec::new());
        a.write(&mut x).unwrap();
        b.write(&mut y).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn staged_run_reports_each_stage() {
        let config = ExperimentConfig {
            staged_discard: true,
            quantities: vec![QuantityKind::VonNeumann],
            num_states: 1,
            ..quick()
        };
        let out = run_experiment(&config, None).unwrap();
        assert_eq!(out.report.stages.len(), 2);
        assert_eq!(out.report.stages[1].first_epoch, out.report.stages[0].epochs);
        assert_eq!(out.trace.len(), out.report.stages.iter().map(|s| s.epochs).sum::<usize>());
    }

    #[test]
    fn too_small_preserved_register_warns() {
        let config = ExperimentConfig {
            discard: Discard::Qubits(2),
            rank: 4,
            epochs: 3,
            ..quick()
        };
        let out = run_experiment(&config, None).unwrap();
        assert_eq!(out.report.warnings.len(), 1);
    }

    #[test]
    fn distances_need_two_states() {
        let config = ExperimentConfig {
            num_states: 1,
            ..quick()
        };
        assert!(matches!(run_experiment(&config, None), Err(Error::Config(_))));
    }
}
