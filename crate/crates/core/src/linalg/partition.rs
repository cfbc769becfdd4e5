use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{DensityMatrix, SquareMatrix};
use crate::error::{Error, Result};

/// Which side of a [`QubitPartition`] to refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    /// System A, driven towards a pure state and thrown away.
    Discarded,
    /// System B, carrying the compressed state.
    Preserved,
}

/// Split of `n` qubits into a discarded system A and a preserved system B.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitPartition {
    qubits: usize,
    discarded: Vec<usize>,
    preserved: Vec<usize>,
}

impl QubitPartition {
    pub fn new(qubits: usize, discarded: Vec<usize>, preserved: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; qubits];
        for &q in discarded.iter().chain(&preserved) {
            if q >= qubits {
                return Err(Error::InvalidPartition(format!("qubit {q} out of range for {qubits} qubits")));
            }
            if seen[q] {
                return Err(Error::InvalidPartition(format!("qubit {q} listed twice")));
            }
            seen[q] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("qubit {missing} not assigned")));
        }
        Ok(Self {
            qubits,
            discarded,
            preserved,
        })
    }

    /// Discards the listed qubits and preserves the rest in ascending order.
    pub fn discard(qubits: usize, discarded: Vec<usize>) -> Result<Self> {
        let preserved = (0..qubits).filter(|q| !discarded.contains(q)).collect();
        Self::new(qubits, discarded, preserved)
    }

    /// Discards qubits `0..count`.
    pub fn leading(qubits: usize, count: usize) -> Result<Self> {
        if count > qubits {
            return Err(Error::InvalidPartition(format!(
                "cannot discard {count} of {qubits} qubits"
            )));
        }
        Self::discard(qubits, (0..count).collect())
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn discarded(&self) -> &[usize] {
        &self.discarded
    }

    pub fn preserved(&self) -> &[usize] {
        &self.preserved
    }

    pub fn subsystem(&self, which: Subsystem) -> &[usize] {
        match which {
            Subsystem::Discarded => &self.discarded,
            Subsystem::Preserved => &self.preserved,
        }
    }

    /// Both sides nonempty, as required when training a disentangler.
    pub fn require_proper(&self) -> Result<()> {
        if self.discarded.is_empty() || self.preserved.is_empty() {
            return Err(Error::InvalidPartition(
                "discarded and preserved systems must both be nonempty".into(),
            ));
        }
        Ok(())
    }

    /// Full-register basis index contributed by each value of a subsystem register.
    ///
    /// The first listed qubit is the most significant bit of the subsystem value.
    pub fn offsets(&self, which: Subsystem) -> Vec<usize> {
        register_offsets(self.qubits, self.subsystem(which))
    }

    fn check(&self, dim: usize) -> Result<()> {
        if dim != 1 << self.qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.qubits,
                actual: dim,
            });
        }
        Ok(())
    }
}

pub(crate) fn register_offsets(total_qubits: usize, register: &[usize]) -> Vec<usize> {
    let len = register.len();
    (0..1usize << len)
        .map(|value| {
            register.iter().enumerate().fold(0usize, |acc, (pos, &q)| {
                let bit = (value >> (len - 1 - pos)) & 1;
                acc | (bit << (total_qubits - 1 - q))
            })
        })
        .collect()
}

/// Partial trace over the complement of `keep`, applied to any square operator.
pub fn reduce_operator(op: &SquareMatrix, partition: &QubitPartition, keep: Subsystem) -> Result<SquareMatrix> {
    partition.check(op.dim())?;
    let traced = match keep {
        Subsystem::Discarded => Subsystem::Preserved,
        Subsystem::Preserved => Subsystem::Discarded,
    };
    let kept = partition.offsets(keep);
    let summed = partition.offsets(traced);
    let d = op.dim();
    let entries = op.entries();
    Ok(SquareMatrix::from_fn(kept.len(), |i, j| {
        let (ri, cj) = (kept[i], kept[j]);
        summed
            .iter()
            .map(|&t| entries[(ri | t) * d + (cj | t)])
            .sum::<Complex64>()
    }))
}

/// Reduced state on the `keep` side of `partition`.
pub fn partial_trace(rho: &DensityMatrix, partition: &QubitPartition, keep: Subsystem) -> Result<DensityMatrix> {
    Ok(DensityMatrix::from_trusted(reduce_operator(rho.matrix(), partition, keep)?))
}

/// Places `on_discarded ⊗ on_preserved` into the register order of `partition`.
pub fn compose(
    on_discarded: &SquareMatrix,
    on_preserved: &SquareMatrix,
    partition: &QubitPartition,
) -> Result<SquareMatrix> {
    let a_off = partition.offsets(Subsystem::Discarded);
    let b_off = partition.offsets(Subsystem::Preserved);
    if on_discarded.dim() != a_off.len() {
        return Err(Error::DimensionMismatch {
            expected: a_off.len(),
            actual: on_discarded.dim(),
        });
    }
    if on_preserved.dim() != b_off.len() {
        return Err(Error::DimensionMismatch {
            expected: b_off.len(),
            actual: on_preserved.dim(),
        });
    }
    let d = 1 << partition.qubits();
    let mut out = SquareMatrix::zeros(d);
    let entries = out.entries_mut();
    for (ai, &ar) in a_off.iter().enumerate() {
        for (aj, &ac) in a_off.iter().enumerate() {
            let a = on_discarded.get(ai, aj);
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            for (bi, &br) in b_off.iter().enumerate() {
                for (bj, &bc) in b_off.iter().enumerate() {
                    entries[(ar | br) * d + (ac | bc)] = a * on_preserved.get(bi, bj);
                }
            }
        }
    }
    Ok(out)
}
