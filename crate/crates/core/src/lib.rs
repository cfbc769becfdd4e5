//! Density-matrix simulation and variational disentangling.
//!
//! Entropies and distances of mixed states are estimated by training a
//! parameterized circuit that maps the states' support onto a small preserved
//! register while driving the remaining qubits to `|0…0⟩`. The crate provides the
//! exact quantities, the circuit and its gradient, the swap-test cost, gradient
//! descent, error bounds, reference constructions and an experiment harness.

pub mod bounds;
pub mod circuit;
pub mod cost;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod optimizer;
pub mod quantities;
pub mod stategen;

pub use circuit::{build_ansatz, circuit_unitary, Ansatz, ParameterVector};
pub use cost::{cost, CostFunction, CostSpec, Evaluation, PairingMode};
pub use error::{Error, Result};
pub use linalg::{partial_trace, DensityMatrix, QubitPartition, SquareMatrix, Subsystem};
pub use optimizer::{train, TrainingConfig, TrainingTrace};
pub use quantities::QuantityKind;
