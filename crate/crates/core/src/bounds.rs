//! Error bounds relating the disentanglement error to the estimation error.
//!
//! Two families live here. Continuity bounds take trace distances between
//! exact and estimated states and bound the change of a quantity. Training
//! bounds take the disentanglement error `ε` and the rank `r` and bound the
//! final estimation error directly. All entropies are in bits.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantities::QuantityKind;

fn check_unit(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("{name} = {x} must lie in [0, 1]")))
    }
}

fn check_rank(r: usize) -> Result<()> {
    if r == 0 {
        Err(Error::OutOfRange("rank must be positive".into()))
    } else {
        Ok(())
    }
}

/// `x log₂ x` with the `0 log 0 = 0` convention.
fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// The Rényi bounds come from the Tsallis ones through `|ln x − ln y| ≤ |x − y| / min(x, y)`,
/// which holds for natural logarithms. Rényi entropies here are in bits, so
/// those bounds pick up a factor `log₂ e`.
const NATS_TO_BITS: f64 = std::f64::consts::LOG2_E;

fn power_family_continuity(order: f64, t: f64, r: usize, renyi: bool) -> f64 {
    let r = r as f64;
    let units = if renyi { NATS_TO_BITS } else { 1.0 };
    if order < 1.0 {
        units * ((1.0 - t).powf(order) - 1.0 + (r - 1.0).powf(1.0 - order) * t.powf(order)) / (1.0 - order)
    } else if renyi {
        units * 2.0 * order / (order - 1.0) * r.powf(order - 1.0) * t
    } else {
        2.0 * order / (order - 1.0) * t
    }
}

/// Bound on `|f(ρ) − f(ρ̃)|` given trace distances to the estimates.
///
/// Entropies read only `t_rho = T(ρ, ρ̃)`. Distances also need
/// `t_sigma = T(σ, σ̃)`. `rank` enters the entropy bounds; pass the dimension of
/// the space that holds both states.
pub fn continuity_bound(kind: QuantityKind, t_rho: f64, t_sigma: Option<f64>, rank: usize) -> Result<f64> {
    kind.validate()?;
    check_unit("trace distance", t_rho)?;
    check_rank(rank)?;
    let pair = || -> Result<f64> {
        let t = t_sigma.ok_or_else(|| Error::OutOfRange(format!("{} needs both trace distances", kind.label())))?;
        check_unit("trace distance", t)?;
        Ok(t)
    };
    Ok(match kind {
        QuantityKind::VonNeumann => {
            let r = rank as f64;
            let dim_term = if rank > 1 { t_rho * (r - 1.0).log2() } else { 0.0 };
            dim_term - xlog2x(t_rho) - xlog2x(1.0 - t_rho)
        }
        QuantityKind::Renyi { alpha } => power_family_continuity(alpha, t_rho, rank, true),
        QuantityKind::Tsallis { q } => power_family_continuity(q, t_rho, rank, false),
        QuantityKind::TraceDistance => t_rho + pair()?,
        QuantityKind::Fidelity => {
            let t_sigma = pair()?;
            let angle = |t: f64| ((1.0 - t) * (1.0 - t)).clamp(-1.0, 1.0).acos();
            angle(t_rho) + angle(t_sigma)
        }
        other => {
            return Err(Error::OutOfRange(format!("no continuity bound for {}", other.label())));
        }
    })
}

/// Bound on the final estimation error after training to disentanglement error `ε`
/// on states of rank at most `rank`.
pub fn disentanglement_bound(kind: QuantityKind, rank: usize, epsilon: f64) -> Result<f64> {
    kind.validate()?;
    check_rank(rank)?;
    check_unit("disentanglement error", epsilon)?;
    let r = rank as f64;
    Ok(match kind {
        QuantityKind::VonNeumann => 2.0 * r.powf(0.75) * epsilon.powf(0.25),
        QuantityKind::Renyi { alpha } if alpha < 1.0 => {
            NATS_TO_BITS * 2f64.powf(alpha) / (1.0 - alpha) * r.powf(1.0 - alpha / 2.0) * epsilon.powf(alpha / 2.0)
        }
        QuantityKind::Renyi { alpha } => {
            NATS_TO_BITS * 4.0 * alpha / (alpha - 1.0) * r.powf(alpha - 0.5) * epsilon.sqrt()
        }
        QuantityKind::Tsallis { q } if q < 1.0 => {
            2f64.powf(q) / (1.0 - q) * r.powf(1.0 - q / 2.0) * epsilon.powf(q / 2.0)
        }
        QuantityKind::Tsallis { q } => 4.0 * q / (q - 1.0) * r.sqrt() * epsilon.sqrt(),
        QuantityKind::TraceDistance => 4.0 * r.sqrt() * epsilon.sqrt(),
        QuantityKind::Fidelity => 2.0 * PI * r.powf(0.25) * epsilon.powf(0.25),
        other => {
            return Err(Error::OutOfRange(format!("no training bound for {}", other.label())));
        }
    })
}

/// Trace distance between a state and its estimate, bounded through `ε`: `2√(rε)`.
pub fn witness_distance_bound(rank: usize, epsilon: f64) -> Result<f64> {
    check_rank(rank)?;
    check_unit("disentanglement error", epsilon)?;
    Ok(2.0 * (rank as f64 * epsilon).sqrt())
}

/// Continuity bound evaluated at the trace distance implied by `ε`
/// (clamped to 1), for each state that enters the quantity.
pub fn continuity_at_epsilon(kind: QuantityKind, rank: usize, epsilon: f64) -> Result<f64> {
    let t = witness_distance_bound(rank, epsilon)?.min(1.0);
    let t_sigma = (!kind.is_single_state()).then_some(t);
    continuity_bound(kind, t, t_sigma, rank)
}

/// Lower bounds on the overlaps of the discarded reductions with the witness
/// state when the cost is `ε` over `m` states: purity `> 1 − m²ε` and witness
/// overlap `> 1 − 3.5 m²ε`. For two states these are `1 − 4ε` and `1 − 14ε`.
pub fn overlap_floors(states: usize, epsilon: f64) -> (f64, f64) {
    let m2 = (states * states) as f64;
    (1.0 - m2 * epsilon, 1.0 - 3.5 * m2 * epsilon)
}

/// One quantity's observed error next to its bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub label: String,
    pub observed: f64,
    pub bound: f64,
    pub satisfied: bool,
}

impl BoundCheck {
    pub fn new(label: impl Into<String>, observed: f64, bound: f64) -> Self {
        Self {
            label: label.into(),
            observed,
            bound,
            // a NaN bound must not count as satisfied
            satisfied: observed <= bound,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    const EPS: f64 = 1e-12;

    #[test]
    fn von_neumann_continuity_qubit() {
        // T log 1 + h(1/2) = 1
        let b = continuity_bound(QuantityKind::VonNeumann, 0.5, None, 2).unwrap();
        assert!((b - 1.0).abs() < EPS);
        assert_eq!(continuity_bound(QuantityKind::VonNeumann, 0.0, None, 4).unwrap(), 0.0);
    }

    #[test]
    fn tsallis_continuity_above_one() {
        let b = continuity_bound(QuantityKind::Tsallis { q: 2.0 }, 0.3, None, 8).unwrap();
        assert!((b - 1.2).abs() < EPS);
    }

    #[test]
    fn renyi_continuity_below_one() {
        // α = 1/2, T = 1/4, r = 5: 2 (√(3/4) − 1 + 2·(1/2)) nats, then converted to bits
        let b = continuity_bound(QuantityKind::Renyi { alpha: 0.5 }, 0.25, None, 5).unwrap();
        assert!((b - 2.0 * 0.75f64.sqrt() / LN_2).abs() < EPS);
        let tsallis = continuity_bound(QuantityKind::Tsallis { q: 0.5 }, 0.25, None, 5).unwrap();
        assert!((tsallis - 2.0 * 0.75f64.sqrt()).abs() < EPS);
    }

    #[test]
    fn distance_continuity() {
        let b = continuity_bound(QuantityKind::TraceDistance, 0.1, Some(0.2), 2).unwrap();
        assert!((b - 0.3).abs() < EPS);
        let b = continuity_bound(QuantityKind::Fidelity, 0.0, Some(0.0), 2).unwrap();
        assert_eq!(b, 0.0);
        assert!(continuity_bound(QuantityKind::Fidelity, 0.1, None, 2).is_err());
    }

    #[test]
    fn training_bound_examples() {
        let b = disentanglement_bound(QuantityKind::VonNeumann, 4, 1e-4).unwrap();
        assert!((b - 0.565_685_424_949_238).abs() < 1e-12);
        let b = disentanglement_bound(QuantityKind::TraceDistance, 4, 0.01).unwrap();
        assert!((b - 0.8).abs() < EPS);
        let b = disentanglement_bound(QuantityKind::Fidelity, 1, 1.0).unwrap();
        assert!((b - 2.0 * PI).abs() < EPS);
        let b = disentanglement_bound(QuantityKind::Renyi { alpha: 2.0 }, 4, 0.01).unwrap();
        assert!((b - 6.4 / LN_2).abs() < 1e-12);
    }

    #[test]
    fn witness_distance_example() {
        assert!((witness_distance_bound(4, 0.01).unwrap() - 0.4).abs() < EPS);
        assert!(witness_distance_bound(0, 0.1).is_err());
        assert!(witness_distance_bound(2, 1.5).is_err());
    }

    #[test]
    fn overlap_floors_for_two_states() {
        let (p, w) = overlap_floors(2, 0.01);
        assert!((p - 0.96).abs() < EPS && (w - 0.86).abs() < EPS);
    }

    #[test]
    fn rejects_unbounded_quantities() {
        assert!(disentanglement_bound(QuantityKind::HilbertSchmidt, 2, 0.1).is_err());
        assert!(continuity_bound(QuantityKind::Renyi { alpha: 1.0 }, 0.1, None, 2).is_err());
    }

    #[test]
    fn nan_bound_is_not_satisfied() {
        assert!(!BoundCheck::new("x", 0.0, f64::NAN).satisfied);
    }
}
