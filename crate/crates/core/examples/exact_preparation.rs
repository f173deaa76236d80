//! Iterates the postselected projection exactly and prints the infidelity of
//! every stage against the Gram–Schmidt target.

use dfsprep::orthogonalizer::{Orthogonalizer, PreparationConfig};

fn main() -> dfsprep::Result<()> {
    let n = 6;
    let orth = Orthogonalizer::new(n)?;
    let result = orth.prepare_all(&PreparationConfig::new(n, 1e-10))?;
    for trace in &result.traces {
        println!(
            "u_{}: m = {:>2}, lambda = {:.4}, m_bound = {:>2}",
            trace.k,
            trace.m,
            orth.lambda(trace.k),
            orth.m_bound(trace.k, 1e-10)
        );
        for r in &trace.records {
            println!(
                "    m {:>2}  infidelity {:>10.3e}  p(all zeros) {:.6}",
                r.m, r.infidelity, r.success_probability
            );
        }
    }
    Ok(())
}
