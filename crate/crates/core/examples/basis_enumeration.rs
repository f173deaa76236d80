//! Pairing basis for six qubits: sequences, singlet pairs, Gram matrix and
//! condition number.

use dfsprep::basis::{build_basis_matrix, dfs_dimension, verify_dfs_membership};

fn main() -> dfsprep::Result<()> {
    let n = 6;
    let (basis, spectral) = build_basis_matrix(n)?;
    println!("N = {n}: dimension {} (Catalan {})", basis.dim(), dfs_dimension(n)?);
    for (k, (seq, pairing)) in basis.parens().iter().zip(basis.pairings()).enumerate() {
        let residual = verify_dfs_membership(basis.column(k + 1));
        println!("a_{}  {}  {}  S2 residual {residual:.1e}", k + 1, seq, pairing);
    }
    let gram = basis.gram();
    println!("Gram matrix (real part):");
    for i in 0..gram.nrows() {
        let row: Vec<String> = (0..gram.ncols()).map(|j| format!("{:>7.4}", gram[(i, j)].re)).collect();
        println!("  {}", row.join(" "));
    }
    println!(
        "sigma_max {:.6}, sigma_min {:.6}, kappa {:.6}",
        spectral.sigma_max, spectral.sigma_min, spectral.kappa
    );
    Ok(())
}
