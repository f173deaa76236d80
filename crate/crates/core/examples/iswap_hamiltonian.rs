//! Evolves the XY coupling Hamiltonian and compares it with the ideal
//! iSWAP for a few coupling strengths.

use dfsprep::hw::{iswap_hamiltonian_check, HardwareParams};

fn main() -> dfsprep::Result<()> {
    for g_mhz in [12.5, 25.0, 50.0] {
        let params = HardwareParams::from_ghz_mhz(6.0, 25.0, g_mhz)?;
        let d = iswap_hamiltonian_check(&params);
        println!(
            "g/2pi = {g_mhz:>5} MHz: t = {:.2} ns raw {:.3} frame {:.3}; best t* = {:.3} ns ({:.1e})",
            d.t_ns, d.raw_distance, d.frame_distance, d.t_star_ns, d.t_star_distance
        );
    }
    Ok(())
}
