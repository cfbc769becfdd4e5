//! Exact entropies and distance measures, computed from spectra.
//!
//! All logarithms are base 2, so entropies come out in bits.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, psd_factor, purity, DensityMatrix, LOG_CUTOFF};

/// The quantities this crate can evaluate and estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuantityKind {
    VonNeumann,
    Renyi { alpha: f64 },
    Tsallis { q: f64 },
    TraceDistance,
    Fidelity,
    BuresAngle,
    BuresDistance,
    HilbertSchmidt,
}

impl QuantityKind {
    /// The five quantities tracked by the estimation experiments.
    pub fn standard_set(alpha: f64, q: f64) -> Vec<QuantityKind> {
        vec![
            QuantityKind::VonNeumann,
            QuantityKind::Renyi { alpha },
            QuantityKind::Tsallis { q },
            QuantityKind::TraceDistance,
            QuantityKind::Fidelity,
        ]
    }

    /// Parses a bare quantity name; `alpha` and `q` fill in the entropy orders.
    pub fn parse(name: &str, alpha: f64, q: f64) -> Result<Self> {
        let kind = match name.trim() {
            "von_neumann" | "vn" => QuantityKind::VonNeumann,
            "renyi" => QuantityKind::Renyi { alpha },
            "tsallis" => QuantityKind::Tsallis { q },
            "trace_distance" | "td" => QuantityKind::TraceDistance,
            "fidelity" => QuantityKind::Fidelity,
            "bures_angle" => QuantityKind::BuresAngle,
            "bures_distance" => QuantityKind::BuresDistance,
            "hilbert_schmidt" => QuantityKind::HilbertSchmidt,
            other => return Err(Error::Config(format!("unknown quantity '{other}'"))),
        };
        kind.validate()?;
        Ok(kind)
    }

    pub fn label(&self) -> &'static str {
        match self {
            QuantityKind::VonNeumann => "von_neumann",
            QuantityKind::Renyi { .. } => "renyi",
            QuantityKind::Tsallis { .. } => "tsallis",
            QuantityKind::TraceDistance => "trace_distance",
            QuantityKind::Fidelity => "fidelity",
            QuantityKind::BuresAngle => "bures_angle",
            QuantityKind::BuresDistance => "bures_distance",
            QuantityKind::HilbertSchmidt => "hilbert_schmidt",
        }
    }

    /// True for entropies (functions of one state).
    pub fn is_single_state(&self) -> bool {
        matches!(
            self,
            QuantityKind::VonNeumann | QuantityKind::Renyi { .. } | QuantityKind::Tsallis { .. }
        )
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            QuantityKind::Renyi { alpha } => check_order("alpha", alpha),
            QuantityKind::Tsallis { q } => check_order("q", q),
            _ => Ok(()),
        }
    }

    pub fn evaluate_single(&self, rho: &DensityMatrix) -> Result<f64> {
        match *self {
            QuantityKind::VonNeumann => Ok(von_neumann(rho)),
            QuantityKind::Renyi { alpha } => renyi(rho, alpha),
            QuantityKind::Tsallis { q } => tsallis(rho, q),
            other => Err(Error::OutOfRange(format!("{} needs two states", other.label()))),
        }
    }

    pub fn evaluate_pair(&self, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
        match self {
            QuantityKind::TraceDistance => trace_distance(rho, sigma),
            QuantityKind::Fidelity => fidelity(rho, sigma),
            QuantityKind::BuresAngle => bures_angle(rho, sigma),
            QuantityKind::BuresDistance => bures_distance(rho, sigma),
            QuantityKind::HilbertSchmidt => hilbert_schmidt(rho, sigma),
            other => Err(Error::OutOfRange(format!("{} takes a single state", other.label()))),
        }
    }
}

impl fmt::Display for QuantityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuantityKind::Renyi { alpha } => write!(f, "renyi(alpha={alpha})"),
            QuantityKind::Tsallis { q } => write!(f, "tsallis(q={q})"),
            other => f.write_str(other.label()),
        }
    }
}

fn check_order(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::OutOfRange(format!("{name} = {value} must be positive")));
    }
    if value == 1.0 {
        return Err(Error::OutOfRange(format!(
            "{name} = 1 is the von Neumann limit; use von_neumann"
        )));
    }
    Ok(())
}

fn support(rho: &DensityMatrix) -> Vec<f64> {
    rho.spectrum().into_iter().filter(|&p| p > LOG_CUTOFF).collect()
}

fn same_dim(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: sigma.dim(),
        });
    }
    Ok(())
}

/// `S(ρ) = −Tr(ρ log₂ ρ)`.
pub fn von_neumann(rho: &DensityMatrix) -> f64 {
    let s: f64 = support(rho).iter().map(|&p| -p * p.log2()).sum();
    s.max(0.0)
}

/// `log₂ Σ pᵢ^α` over the support, evaluated as a log-sum-exp.
fn log2_power_sum(spectrum: &[f64], alpha: f64) -> f64 {
    let logs: Vec<f64> = spectrum.iter().map(|&p| alpha * p.ln()).collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let rest: f64 = logs.iter().map(|&l| (l - top).exp()).sum();
    (top + rest.ln()) / std::f64::consts::LN_2
}

/// `S_α(ρ) = log₂ Tr(ρ^α) / (1 − α)`.
pub fn renyi(rho: &DensityMatrix, alpha: f64) -> Result<f64> {
    check_order("alpha", alpha)?;
    Ok((log2_power_sum(&support(rho), alpha) / (1.0 - alpha)).max(0.0))
}

/// `S_q(ρ) = (Tr(ρ^q) − 1) / (1 − q)`.
pub fn tsallis(rho: &DensityMatrix, q: f64) -> Result<f64> {
    check_order("q", q)?;
    let power_sum: f64 = support(rho).iter().map(|&p| p.powf(q)).sum();
    Ok(((power_sum - 1.0) / (1.0 - q)).max(0.0))
}

/// `T(ρ, σ) = ½ Tr|ρ − σ|`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma)?;
    let diff = rho.matrix() - sigma.matrix();
    let t: f64 = eigenvalues(&diff)?.iter().map(|l| l.abs()).sum::<f64>() * 0.5;
    Ok(t.clamp(0.0, 1.0))
}

/// `F(ρ, σ) = (Tr √(√ρ σ √ρ))²`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma)?;
    // With ρ = AA† and σ = BB†, √F is the nuclear norm of A†B. The singular
    // values come straight from an SVD, so a zero overlap stays near 1e-16
    // instead of picking up the square root of round-off.
    let a = psd_factor(rho)?;
    let b = psd_factor(sigma)?;
    if a.ncols() == 0 || b.ncols() == 0 {
        return Ok(0.0);
    }
    let overlap = a.adjoint() * b;
    let root: f64 = overlap.singular_values().iter().sum();
    Ok((root * root).clamp(0.0, 1.0))
}

/// Bures angle taken as `arccos F(ρ, σ)`.
///
/// Note: this is `arccos` of the fidelity itself, not of its square root as in
/// the more common definition. Orthogonal pure states give π/2 either way.
pub fn bures_angle(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(fidelity(rho, sigma)?.acos())
}

/// `D_B(ρ, σ) = √(2 − 2√F)`.
pub fn bures_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let f = fidelity(rho, sigma)?;
    Ok((2.0 - 2.0 * f.sqrt()).max(0.0).sqrt())
}

/// Squared Hilbert–Schmidt distance `Tr(ρ²) + Tr(σ²) − 2 Tr(ρσ)`.
pub fn hilbert_schmidt(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma)?;
    let cross = rho.matrix().trace_product(sigma.matrix()).re;
    Ok((purity(rho) + purity(sigma) - 2.0 * cross).max(0.0))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, SQRT_2};

    use super::*;
    use crate::linalg::SquareMatrix;

    fn diag(values: &[f64]) -> DensityMatrix {
        DensityMatrix::new(SquareMatrix::diagonal(values)).unwrap()
    }

    #[test]
    fn von_neumann_closed_forms() {
        assert!((von_neumann(&DensityMatrix::maximally_mixed(2)) - 2.0).abs() < 1e-12);
        assert!(von_neumann(&DensityMatrix::basis_state(1, 0)).abs() < 1e-12);
        assert!((von_neumann(&diag(&[0.5, 0.5, 0.0, 0.0])) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn renyi_closed_forms() {
        assert!((renyi(&diag(&[0.5, 0.5]), 0.5).unwrap() - 1.0).abs() < 1e-12);
        for alpha in [0.3, 0.5, 2.0, 7.5, 40.0] {
            assert!((renyi(&DensityMatrix::maximally_mixed(3), alpha).unwrap() - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn renyi_rejects_bad_orders() {
        let rho = DensityMatrix::maximally_mixed(1);
        assert!(renyi(&rho, 1.0).is_err());
        assert!(renyi(&rho, 0.0).is_err());
        assert!(renyi(&rho, -0.5).is_err());
    }

    #[test]
    fn tsallis_closed_forms() {
        assert!((tsallis(&diag(&[0.5, 0.5]), 2.0).unwrap() - 0.5).abs() < 1e-12);
        for q in [0.5, 1.5, 3.0] {
            assert!(tsallis(&DensityMatrix::basis_state(2, 3), q).unwrap().abs() < 1e-12);
        }
        assert!(tsallis(&diag(&[0.5, 0.5]), 1.0).is_err());
        assert!(tsallis(&diag(&[0.5, 0.5]), 0.0).is_err());
    }

    #[test]
    fn trace_distance_closed_forms() {
        let zero = DensityMatrix::basis_state(1, 0);
        let one = DensityMatrix::basis_state(1, 1);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-12);
        assert!(trace_distance(&zero, &zero).unwrap().abs() < 1e-12);
        assert!((trace_distance(&diag(&[0.7, 0.3]), &diag(&[0.5, 0.5])).unwrap() - 0.2).abs() < 1e-12);
        assert!(trace_distance(&zero, &DensityMatrix::maximally_mixed(2)).is_err());
    }

    #[test]
    fn fidelity_closed_forms() {
        let zero = DensityMatrix::basis_state(1, 0);
        let one = DensityMatrix::basis_state(1, 1);
        let mixed = DensityMatrix::maximally_mixed(1);
        assert!((fidelity(&mixed, &mixed).unwrap() - 1.0).abs() < 1e-12);
        assert!(fidelity(&zero, &one).unwrap().abs() < 1e-12);
        assert!((fidelity(&zero, &mixed).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bures_closed_forms() {
        let zero = DensityMatrix::basis_state(1, 0);
        let one = DensityMatrix::basis_state(1, 1);
        assert!(bures_angle(&zero, &zero).unwrap().abs() < 1e-6);
        assert!(bures_distance(&zero, &zero).unwrap().abs() < 1e-9);
        assert!((bures_angle(&zero, &one).unwrap() - FRAC_PI_2).abs() < 1e-12);
        assert!((bures_distance(&zero, &one).unwrap() - SQRT_2).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(1);
        assert!((bures_angle(&zero, &mixed).unwrap() - FRAC_PI_3).abs() < 1e-12);
    }

    #[test]
    fn hilbert_schmidt_closed_forms() {
        let zero = DensityMatrix::basis_state(1, 0);
        let one = DensityMatrix::basis_state(1, 1);
        assert!(hilbert_schmidt(&zero, &zero).unwrap().abs() < 1e-12);
        assert!((hilbert_schmidt(&zero, &one).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn parse_names() {
        assert_eq!(QuantityKind::parse("renyi", 0.5, 1.5).unwrap(), QuantityKind::Renyi { alpha: 0.5 });
        assert!(QuantityKind::parse("renyi", 1.0, 1.5).is_err());
        assert!(QuantityKind::parse("entropy", 0.5, 1.5).is_err());
    }
}
