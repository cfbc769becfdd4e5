//! Gradient rules and the gradient-descent training loop.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::circuit::{Ansatz, ParameterVector};
use crate::cost::{preserved_reductions, CostFunction, CostSpec, Evaluation};
use crate::error::{Error, Result};
use crate::quantities::QuantityKind;

/// Default learning rate.
pub const DEFAULT_LEARNING_RATE: f64 = 0.05;
/// Default early-stop threshold on the cost.
pub const DEFAULT_EARLY_STOP: f64 = 1e-3;

/// Two-term shift rule for generators with eigenvalues `±1/2`:
/// `∂_j f = ½ (f(θ + π/2·e_j) − f(θ − π/2·e_j))`.
///
/// Exact when `f` is an expectation value linear in `U(θ)ρU(θ)†`.
pub fn parameter_shift_gradient<F>(cost_fn: F, theta: &ParameterVector) -> Result<Vec<f64>>
where
    F: Fn(&ParameterVector) -> Result<f64>,
{
    (0..theta.len())
        .map(|j| {
            let plus = finite(cost_fn(&theta.shifted(j, FRAC_PI_2))?, j)?;
            let minus = finite(cost_fn(&theta.shifted(j, -FRAC_PI_2))?, j)?;
            Ok(0.5 * (plus - minus))
        })
        .collect()
}

/// Central differences `(f(θ + h e_j) − f(θ − h e_j)) / 2h`.
pub fn finite_difference_gradient<F>(cost_fn: F, theta: &ParameterVector, h: f64) -> Result<Vec<f64>>
where
    F: Fn(&ParameterVector) -> Result<f64>,
{
    if h <= 0.0 || !h.is_finite() {
        return Err(Error::OutOfRange(format!("step {h} must be positive")));
    }
    (0..theta.len())
        .map(|j| Ok((cost_fn(&theta.shifted(j, h))? - cost_fn(&theta.shifted(j, -h))?) / (2.0 * h)))
        .collect()
}

fn finite(value: f64, index: usize) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { epoch: index, value })
    }
}

/// Settings for [`train`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingConfig {
    pub steps: usize,
    pub learning_rate: f64,
    /// Stop once the cost drops below this; 0 disables.
    pub early_stop_threshold: f64,
    pub seed: u64,
    /// Quantities estimated every epoch on the preserved reductions.
    pub record_quantities: Vec<QuantityKind>,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self {
            steps: 300,
            learning_rate: DEFAULT_LEARNING_RATE,
            early_stop_threshold: DEFAULT_EARLY_STOP,
            seed: 0,
            record_quantities: Vec::new(),
        }
    }
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::Config("steps must be at least 1".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config(format!("learning rate {} must be positive", self.learning_rate)));
        }
        if !(self.early_stop_threshold >= 0.0) {
            return Err(Error::Config("early-stop threshold must be nonnegative".into()));
        }
        self.record_quantities.iter().try_for_each(QuantityKind::validate)
    }
}

/// Why training ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    MaxSteps,
    Threshold,
}

/// One named estimate series: a quantity and the state indices it reads.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub label: String,
    pub quantity: QuantityKind,
    pub states: Vec<usize>,
}

impl Series {
    pub fn evaluate(&self, states: &[crate::linalg::DensityMatrix]) -> Result<f64> {
        match self.states.as_slice() {
            [i] => self.quantity.evaluate_single(&states[*i]),
            [i, j] => self.quantity.evaluate_pair(&states[*i], &states[*j]),
            _ => Err(Error::Config(format!("series {} has no states", self.label))),
        }
    }
}

/// Expands quantities into per-state (entropies) or per-pair (distances) series.
pub fn series_for(quantities: &[QuantityKind], states: usize) -> Result<Vec<Series>> {
    let mut out = Vec::new();
    for &quantity in quantities {
        quantity.validate()?;
        if quantity.is_single_state() {
            for i in 0..states {
                let label = if states == 1 {
                    quantity.label().to_string()
                } else {
                    format!("{}_s{i}", quantity.label())
                };
                out.push(Series { label, quantity, states: vec![i] });
            }
        } else {
            if states < 2 {
                return Err(Error::Config(format!("{} needs at least two states", quantity.label())));
            }
            for i in 0..states {
                for j in i + 1..states {
                    let label = if states == 2 {
                        quantity.label().to_string()
                    } else {
                        format!("{}_s{i}_s{j}", quantity.label())
                    };
                    out.push(Series { label, quantity, states: vec![i, j] });
                }
            }
        }
    }
    Ok(out)
}

/// Per-epoch record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    /// Exact cost at this epoch's parameters.
    pub cost: f64,
    /// Cost as the configured evaluation sees it; equals `cost` in exact mode.
    pub measured_cost: f64,
    /// Largest absolute gradient component.
    pub grad_norm: f64,
    /// One value per [`TrainingTrace::series`] entry.
    pub estimates: Vec<f64>,
}

/// Output of [`train`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingTrace {
    pub series: Vec<Series>,
    pub records: Vec<EpochRecord>,
    pub final_parameters: ParameterVector,
    pub final_cost: f64,
    pub final_estimates: Vec<f64>,
    pub termination: Termination,
}

/// Training stopped on a non-finite cost.
#[derive(Debug)]
pub struct Divergence {
    pub last_good_epoch: Option<usize>,
    pub partial: Vec<EpochRecord>,
    pub error: Error,
}

/// Plain gradient descent `θ ← θ − α ∇C(θ)` from parameters drawn with `config.seed`.
pub fn train(ansatz: &Ansatz, spec: &CostSpec, config: &TrainingConfig) -> Result<TrainingTrace> {
    let initial = ansatz.initialize_parameters(config.seed);
    train_from(ansatz, spec, config, initial).map_err(|d| d.error)
}

/// [`train`] from explicit initial parameters, keeping the partial trace on divergence.
pub fn train_from(
    ansatz: &Ansatz,
    spec: &CostSpec,
    config: &TrainingConfig,
    initial: ParameterVector,
) -> std::result::Result<TrainingTrace, Divergence> {
    let fail = |error: Error, partial: &[EpochRecord]| Divergence {
        last_good_epoch: partial.last().map(|r| r.epoch),
        partial: partial.to_vec(),
        error,
    };
    let mut records = Vec::new();
    let setup = || -> Result<(CostFunction<'_>, Vec<Series>)> {
        config.validate()?;
        ansatz.check_parameters(&initial)?;
        Ok((
            CostFunction::new(ansatz, spec)?,
            series_for(&config.record_quantities, spec.states().len())?,
        ))
    };
    let (objective, series) = setup().map_err(|e| fail(e, &records))?;
    let estimate = |theta: &ParameterVector| -> Result<Vec<f64>> {
        if series.is_empty() {
            return Ok(Vec::new());
        }
        let reduced = preserved_reductions(ansatz, theta, spec.states(), spec.partition())?;
        series.iter().map(|s| s.evaluate(&reduced)).collect()
    };

    let mut theta = initial;
    let mut termination = Termination::MaxSteps;
    for epoch in 0..config.steps {
        let stream = epoch as u64;
        let measured_cost = objective.value_in_stream(&theta, stream).map_err(|e| fail(e, &records))?;
        let cost = match spec.evaluation() {
            Evaluation::Exact => measured_cost,
            Evaluation::Sampled { .. } => objective.exact_value(&theta).map_err(|e| fail(e, &records))?,
        };
        if !cost.is_finite() || !measured_cost.is_finite() {
            return Err(fail(Error::NonFinite { epoch, value: cost }, &records));
        }
        let grad = objective
            .gradient_in_stream(&theta, stream)
            .map_err(|e| fail(e, &records))?;
        if let Some(bad) = grad.iter().find(|g| !g.is_finite()) {
            return Err(fail(Error::NonFinite { epoch, value: *bad }, &records));
        }
        let estimates = estimate(&theta).map_err(|e| fail(e, &records))?;
        records.push(EpochRecord {
            epoch,
            cost,
            measured_cost,
            grad_norm: grad.iter().fold(0.0f64, |m, g| m.max(g.abs())),
            estimates,
        });
        if config.early_stop_threshold > 0.0 && measured_cost < config.early_stop_threshold {
            termination = Termination::Threshold;
            break;
        }
        theta
            .as_mut_slice()
            .iter_mut()
            .zip(&grad)
            .for_each(|(t, g)| *t -= config.learning_rate * g);
        if let Some(bad) = theta.as_slice().iter().find(|t| !t.is_finite()) {
            return Err(fail(Error::NonFinite { epoch, value: *bad }, &records));
        }
    }

    let (final_cost, final_estimates) = match termination {
        Termination::Threshold => {
            let last = records.last().expect("threshold stop records an epoch");
            (last.cost, last.estimates.clone())
        }
        Termination::MaxSteps => {
            let cost = objective.exact_value(&theta).map_err(|e| fail(e, &records))?;
            if !cost.is_finite() {
                return Err(fail(Error::NonFinite { epoch: config.steps, value: cost }, &records));
            }
            (cost, estimate(&theta).map_err(|e| fail(e, &records))?)
        }
    };
    Ok(TrainingTrace {
        series,
        records,
        final_parameters: theta,
        final_cost,
        final_estimates,
        termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::build_ansatz;
    use crate::linalg::{DensityMatrix, QubitPartition, SquareMatrix};

    #[test]
    fn shift_rule_on_cosine() {
        let f = |t: &ParameterVector| Ok(t.as_slice()[0].cos());
        let theta = ParameterVector::new(vec![FRAC_PI_2]);
        let g = parameter_shift_gradient(f, &theta).unwrap();
        assert!((g[0] + 1.0).abs() < 1e-15);
        let fd = finite_difference_gradient(f, &theta, 1e-5).unwrap();
        assert!((fd[0] + 1.0).abs() < 1e-9);
    }

    #[test]
    fn finite_difference_on_quadratic() {
        let f = |t: &ParameterVector| Ok(3.0 * t.as_slice()[0].powi(2) - t.as_slice()[1]);
        let g = finite_difference_gradient(f, &ParameterVector::new(vec![0.7, 2.0]), 1e-3).unwrap();
        assert!((g[0] - 4.2).abs() < 1e-9 && (g[1] + 1.0).abs() < 1e-9);
        assert!(finite_difference_gradient(f, &ParameterVector::new(vec![0.0, 0.0]), 0.0).is_err());
    }

    #[test]
    fn shift_rule_reports_non_finite() {
        let f = |_: &ParameterVector| Ok(f64::NAN);
        assert!(parameter_shift_gradient(f, &ParameterVector::zeros(2)).is_err());
    }

    #[test]
    fn disentangled_input_stops_immediately() {
        let a = build_ansatz(2, 1).unwrap();
        let rho_b = DensityMatrix::new(SquareMatrix::diagonal(&[0.6, 0.4])).unwrap();
        let rho = DensityMatrix::basis_state(1, 0).tensor(&rho_b);
        let spec = CostSpec::exact(vec![rho], QubitPartition::leading(2, 1).unwrap()).unwrap();
        let config = TrainingConfig {
            record_quantities: vec![QuantityKind::VonNeumann],
            ..TrainingConfig::default()
        };
        let trace = train_from(&a, &spec, &config, ParameterVector::zeros(12)).unwrap();
        assert_eq!(trace.termination, Termination::Threshold);
        assert_eq!(trace.records.len(), 1);
        assert!(trace.final_cost.abs() < 1e-15);
        let exact = crate::quantities::von_neumann(&rho_b);
        assert!((trace.final_estimates[0] - exact).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        let bad = TrainingConfig {
            learning_rate: 0.0,
            ..TrainingConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = TrainingConfig {
            steps: 0,
            ..TrainingConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn distances_need_two_states() {
        assert!(series_for(&[QuantityKind::Fidelity], 1).is_err());
        let s = series_for(&[QuantityKind::VonNeumann, QuantityKind::TraceDistance], 3).unwrap();
        let labels: Vec<_> = s.iter().map(|s| s.label.as_str()).collect();
        assert_eq!(
            labels,
            [
                "von_neumann_s0",
                "von_neumann_s1",
                "von_neumann_s2",
                "trace_distance_s0_s1",
                "trace_distance_s0_s2",
                "trace_distance_s1_s2"
            ]
        );
    }
}
