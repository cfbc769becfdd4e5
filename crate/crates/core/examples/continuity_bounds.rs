//! How the bounds scale with rank and with the disentanglement error.

use disentangle::bounds::{continuity_bound, disentanglement_bound, witness_distance_bound};
use disentangle::QuantityKind;

fn main() -> disentangle::Result<()> {
    let kinds = QuantityKind::standard_set(0.5, 1.5);
    println!("{:<16} {:>10} {:>10} {:>10}", "quantity", "eps=1e-2", "eps=1e-4", "eps=1e-6");
    for kind in &kinds {
        let row: Vec<String> = [1e-2, 1e-4, 1e-6]
            .iter()
            .map(|&eps| disentanglement_bound(*kind, 4, eps).map(|b| format!("{b:>10.4}")))
            .collect::<Result<_, _>>()?;
        println!("{:<16} {}", kind.label(), row.join(" "));
    }

    // continuity in the trace distance, for a rank-4 state
    for t in [0.01, 0.1, 0.3] {
        let vn = continuity_bound(QuantityKind::VonNeumann, t, None, 4)?;
        let td = continuity_bound(QuantityKind::TraceDistance, t, Some(t), 4)?;
        println!("T = {t:<5} von Neumann <= {vn:.4}, trace distance <= {td:.4}");
    }
    println!("trace-distance floor at r = 4, eps = 1e-4: {:.4}", witness_distance_bound(4, 1e-4)?);
    Ok(())
}
