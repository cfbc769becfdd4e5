//! Flat `key = value` experiment configuration.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cost::{Evaluation, PairingMode};
use crate::error::{Error, Result};
use crate::quantities::QuantityKind;

/// Size of the discarded register.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Discard {
    /// Keep just enough qubits to hold the joint support of the inputs.
    Auto,
    Qubits(usize),
}

/// How generated input states relate to each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    /// All states share one random rank-`r` support.
    Shared,
    /// Each state is drawn on its own.
    Independent,
}

/// Starting angles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Init {
    /// Uniform in `[0, 2π)` from the run seed.
    Random,
    /// All zero.
    Zero,
}

/// How overlaps are evaluated during training.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvaluationMode {
    Exact,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub qubits: usize,
    pub rank: usize,
    pub num_states: usize,
    pub support: Support,
    pub quantities: Vec<QuantityKind>,
    pub alpha: f64,
    pub q: f64,
    /// Ansatz depth; `None` picks [`auto_layers`] from the register width.
    pub layers: Option<usize>,
    pub epochs: usize,
    pub learning_rate: f64,
    pub early_stop: f64,
    pub seed: u64,
    pub discard: Discard,
    pub evaluation: EvaluationMode,
    pub shots: u64,
    pub cost_mode: PairingMode,
    pub staged_discard: bool,
    pub stage_size: usize,
    pub init: Init,
    /// Input states read from JSON files instead of being generated.
    pub states: Vec<PathBuf>,
}

/// Default depth for a register of `qubits` qubits.
///
/// Shallow circuits stall: the trained unitary needs enough parameters to rotate
/// the support off the discarded qubits, and that count grows with `2^qubits`.
/// These depths converged on every seed tried at 4 and 6 qubits.
pub fn auto_layers(qubits: usize) -> usize {
    if qubits <= 4 {
        12
    } else {
        32
    }
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            qubits: 4,
            rank: 4,
            num_states: 2,
            support: Support::Shared,
            quantities: QuantityKind::standard_set(0.5, 1.5),
            alpha: 0.5,
            q: 1.5,
            layers: None,
            epochs: 300,
            learning_rate: 0.15,
            early_stop: 1e-3,
            seed: 0,
            discard: Discard::Auto,
            evaluation: EvaluationMode::Exact,
            shots: 1000,
            cost_mode: PairingMode::FullPairwise,
            staged_discard: false,
            stage_size: 1,
            init: Init::Random,
            states: Vec::new(),
        }
    }
}

/// Command-line overrides, applied on top of a parsed file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub qubits: Option<usize>,
    pub rank: Option<usize>,
    pub epochs: Option<usize>,
    pub learning_rate: Option<f64>,
    pub layers: Option<usize>,
    pub discard: Option<usize>,
    pub quantities: Option<String>,
    pub alpha: Option<f64>,
    pub q: Option<f64>,
    pub shots: Option<u64>,
    pub staged: bool,
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse '{value}'")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected true or false, got '{value}'"))),
    }
}

impl ExperimentConfig {
    /// Parses `key = value` lines; `#` starts a comment. Relative state paths
    /// resolve against `base`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self> {
        let mut config = Self::default();
        let mut seen = BTreeSet::new();
        let mut quantity_names: Option<String> = None;
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", line_no + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(Error::Config(format!("line {}: duplicate key '{key}'", line_no + 1)));
            }
            match key {
                "qubits" => config.qubits = parse_num(key, value)?,
                "rank" => config.rank = parse_num(key, value)?,
                "num_states" => config.num_states = parse_num(key, value)?,
                "support" => {
                    config.support = match value {
                        "shared" => Support::Shared,
                        "independent" => Support::Independent,
                        _ => return Err(Error::Config(format!("support: unknown mode '{value}'"))),
                    }
                }
                "quantities" => quantity_names = Some(value.to_string()),
                "alpha" => config.alpha = parse_num(key, value)?,
                "q" => config.q = parse_num(key, value)?,
                "layers" => config.layers = if value == "auto" { None } else { Some(parse_num(key, value)?) },
                "epochs" => config.epochs = parse_num(key, value)?,
                "learning_rate" | "lr" => config.learning_rate = parse_num(key, value)?,
                "early_stop" => config.early_stop = parse_num(key, value)?,
                "seed" => config.seed = parse_num(key, value)?,
                "discard" => {
                    config.discard = if value == "auto" {
                        Discard::Auto
                    } else {
                        Discard::Qubits(parse_num(key, value)?)
                    }
                }
                "evaluation" => {
                    config.evaluation = match value {
                        "exact" => EvaluationMode::Exact,
                        "sampled" => EvaluationMode::Sampled,
                        _ => return Err(Error::Config(format!("evaluation: unknown mode '{value}'"))),
                    }
                }
                "shots" => config.shots = parse_num(key, value)?,
                "cost_mode" => {
                    config.cost_mode = match value {
                        "full_pairwise" => PairingMode::FullPairwise,
                        "diagonal" | "diagonal_only" => PairingMode::DiagonalOnly,
                        _ => return Err(Error::Config(format!("cost_mode: unknown mode '{value}'"))),
                    }
                }
                "staged_discard" => config.staged_discard = parse_bool(key, value)?,
                "stage_size" => config.stage_size = parse_num(key, value)?,
                "init" => {
                    config.init = match value {
                        "random" => Init::Random,
                        "zero" => Init::Zero,
                        _ => return Err(Error::Config(format!("init: unknown mode '{value}'"))),
                    }
                }
                "states" => {
                    config.states = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|p| match base {
                            Some(dir) if Path::new(p).is_relative() => dir.join(p),
                            _ => PathBuf::from(p),
                        })
                        .collect()
                }
                _ => return Err(Error::Config(format!("line {}: unknown key '{key}'", line_no + 1))),
            }
        }
        // entropy orders may come after the list, so resolve names last
        if let Some(names) = quantity_names {
            config.set_quantities(&names)?;
        } else {
            config.quantities = QuantityKind::standard_set(config.alpha, config.q);
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, path.parent())
    }

    fn set_quantities(&mut self, names: &str) -> Result<()> {
        self.quantities = names
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|name| QuantityKind::parse(name, self.alpha, self.q))
            .collect::<Result<_>>()?;
        Ok(())
    }

    /// Applies command-line overrides. Entropy orders are re-applied to the
    /// current quantity list when `alpha` or `q` change.
    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        macro_rules! set {
            ($field:ident, $value:expr) => {
                if let Some(v) = $value {
                    self.$field = v;
                }
            };
        }
        set!(seed, o.seed);
        set!(qubits, o.qubits);
        set!(rank, o.rank);
        set!(epochs, o.epochs);
        set!(learning_rate, o.learning_rate);
        if o.layers.is_some() {
            self.layers = o.layers;
        }
        set!(alpha, o.alpha);
        set!(q, o.q);
        if let Some(k) = o.discard {
            self.discard = Discard::Qubits(k);
        }
        if let Some(shots) = o.shots {
            self.evaluation = EvaluationMode::Sampled;
            self.shots = shots;
        }
        if o.staged {
            self.staged_discard = true;
        }
        if let Some(names) = &o.quantities {
            self.set_quantities(names)?;
        } else if o.alpha.is_some() || o.q.is_some() {
            let (alpha, q) = (self.alpha, self.q);
            for kind in &mut self.quantities {
                match kind {
                    QuantityKind::Renyi { alpha: a } => *a = alpha,
                    QuantityKind::Tsallis { q: t } => *t = q,
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Depth of the ansatz acting on `width` qubits.
    pub fn layers_for(&self, width: usize) -> usize {
        self.layers.unwrap_or_else(|| auto_layers(width))
    }

    /// Checks everything that does not depend on the generated states.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.states.is_empty() {
            if self.qubits == 0 || self.qubits > 10 {
                return bad(format!("qubits = {} must lie in 1..=10", self.qubits));
            }
            if self.rank == 0 || self.rank > 1 << self.qubits {
                return bad(format!("rank = {} must lie in 1..=2^qubits", self.rank));
            }
            if self.num_states == 0 {
                return bad("num_states must be at least 1".into());
            }
        }
        if self.layers == Some(0) || self.epochs == 0 {
            return bad("layers and epochs must be at least 1".into());
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad(format!("learning_rate = {} must be positive", self.learning_rate));
        }
        if !(self.early_stop >= 0.0) {
            return bad("early_stop must be nonnegative".into());
        }
        if self.evaluation == EvaluationMode::Sampled && self.shots == 0 {
            return bad("sampled evaluation needs shots >= 1".into());
        }
        if self.staged_discard && self.stage_size == 0 {
            return bad("stage_size must be at least 1".into());
        }
        if let Discard::Qubits(0) = self.discard {
            return bad("discard must be at least 1 qubit".into());
        }
        self.quantities.iter().try_for_each(QuantityKind::validate)
    }

    pub(crate) fn evaluation_for(&self, stage: u64) -> Evaluation {
        match self.evaluation {
            EvaluationMode::Exact => Evaluation::Exact,
            EvaluationMode::Sampled => Evaluation::Sampled {
                shots: self.shots,
                seed: crate::cost::mix_seed(self.seed, 0x5A4D_0000 + stage),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let text = "
            # reproduction run
            qubits = 6
            rank = 2
            num_states = 3
            support = independent
            alpha = 2
            quantities = vn, renyi, fidelity
            q = 0.5
            layers = 4
            epochs = 50
            lr = 0.2
            early_stop = 0
            seed = 9
            discard = 3
            evaluation = sampled
            shots = 200
            cost_mode = diagonal
            staged_discard = yes
            stage_size = 2
            init = zero
            states = a.json, /abs/b.json
        ";
        let c = ExperimentConfig::parse(text, Some(Path::new("/cfg"))).unwrap();
        assert_eq!(c.qubits, 6);
        assert_eq!(c.support, Support::Independent);
        assert_eq!(
            c.quantities,
            vec![QuantityKind::VonNeumann, QuantityKind::Renyi { alpha: 2.0 }, QuantityKind::Fidelity]
        );
        assert_eq!(c.discard, Discard::Qubits(3));
        assert_eq!(c.cost_mode, PairingMode::DiagonalOnly);
        assert!(c.staged_discard && c.stage_size == 2);
        assert_eq!(c.init, Init::Zero);
        assert_eq!(c.states, vec![PathBuf::from("/cfg/a.json"), PathBuf::from("/abs/b.json")]);
        assert_eq!(c.learning_rate, 0.2);
    }

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(ExperimentConfig::parse("", None).unwrap(), ExperimentConfig::default());
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        assert!(ExperimentConfig::parse("colour = red", None).is_err());
        assert!(ExperimentConfig::parse("seed = 1\nseed = 2", None).is_err());
        assert!(ExperimentConfig::parse("seed", None).is_err());
        assert!(ExperimentConfig::parse("seed = x", None).is_err());
        assert!(ExperimentConfig::parse("quantities = entropy", None).is_err());
    }

    #[test]
    fn overrides_reapply_orders() {
        let mut c = ExperimentConfig::default();
        c.apply(&Overrides {
            alpha: Some(2.0),
            shots: Some(64),
            discard: Some(1),
            ..Overrides::default()
        })
        .unwrap();
        assert!(c.quantities.contains(&QuantityKind::Renyi { alpha: 2.0 }));
        assert_eq!(c.evaluation, EvaluationMode::Sampled);
        assert_eq!(c.discard, Discard::Qubits(1));
    }

    #[test]
    fn validation() {
        let mut c = ExperimentConfig::default();
        assert!(c.validate().is_ok());
        c.rank = 3;
        assert!(c.validate().is_ok());
        c.rank = 17;
        assert!(c.validate().is_err());
        c.rank = 4;
        c.learning_rate = -1.0;
        assert!(c.validate().is_err());
    }
}
