//! Finite-size hybridization of the two edge modes on even chains.
//!
//! On a short even chain the left and right edge states overlap through
//! the bulk; the in-gap doublet splits by 2 t_e and an excitation on the
//! left end Rabi-oscillates all the way to the right end. The splitting
//! decays exponentially with length, and past the critical size the
//! hybridization is gone for any practical purpose.
//!
//! Run with: cargo run --example hybridization

use magnon_chain::dynamics::{evolve_unitary, uniform_grid, PureState};
use magnon_chain::lattice::{
    build_hamiltonian, critical_chain_length, hybridization, BondPattern, ChainSpec,
    CRITICAL_GAP_THRESHOLD_MHZ,
};
use magnon_chain::Result;

fn main() -> Result<()> {
    // 4-qubit transfer experiment: 1-5-1.1 couplings, excitation on a1
    let chain = ChainSpec::new(4)?;
    let h = build_hamiltonian(&chain, &BondPattern::from_real(&[1.0, 5.0, 1.1]))?;
    let psi0 = PureState::site_excitation(4, 1)?;
    let times = uniform_grid(2.0, 0.001)?;
    let traj = evolve_unitary(&h, &psi0, &times)?;
    let p4 = traj.site_series(4)?;
    let (idx, max_p4) = p4
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    println!(
        "1-5-1.1 chain: excitation crosses to the far end, max P_b2 = {max_p4:.4} at t = {:.3} us",
        times[idx]
    );

    println!("\nsplitting vs chain length at (J1, J2) = (1, 5):");
    println!("qubits   2|t_e| (MHz)    numeric gap (MHz)   hybridized");
    for n_cells in [2_usize, 4, 6, 8, 10, 12] {
        let report = hybridization(1.0, 5.0, n_cells)?;
        println!(
            "{:>6}   {:<12.6e}  {:<17.6e}  {}",
            2 * n_cells,
            2.0 * report.t_e_mhz.abs(),
            report.numeric_gap_mhz,
            report.modes_hybridized
        );
    }

    let critical = critical_chain_length(1.0, 5.0, CRITICAL_GAP_THRESHOLD_MHZ)?;
    println!(
        "\ncritical chain length at the default gap threshold ({CRITICAL_GAP_THRESHOLD_MHZ:.0e} MHz): {critical} qubits"
    );
    Ok(())
}
