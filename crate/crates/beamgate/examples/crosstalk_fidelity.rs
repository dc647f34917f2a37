//! Crosstalk matrices and fidelity for the Hadamard basis, ideal versus
//! physical pipeline.
//!
//! Each basis state is prepared, the Hadamard gate applied, and the readout
//! probabilities stacked into a row-stochastic matrix whose diagonal average
//! is the fidelity. Ideal mode gives the identity; the physical mode's
//! diffraction leaks light into neighboring rows.
//!
//! ```text
//! cargo run --example crosstalk_fidelity
//! ```

use beamgate::experiments::crosstalk_bench;
use beamgate::optics::PipelineConfig;

fn main() -> beamgate::Result<()> {
    println!("{:>3} {:>12} {:>24}", "N", "ideal", "physical");
    for n_qubits in 1..=3u32 {
        let n = 1usize << n_qubits;
        let ideal = crosstalk_bench(n_qubits, &PipelineConfig::ideal_defaults(n)?)?;
        let physical = crosstalk_bench(n_qubits, &PipelineConfig::physical_defaults(n)?)?;
        println!(
            "{n:>3} {:>12.6} {:>15.6} +/- {:.6}",
            ideal.fidelity, physical.fidelity, physical.fidelity_std
        );
    }

    let n_qubits = 2;
    let bench = crosstalk_bench(
        n_qubits,
        &PipelineConfig::physical_defaults(1 << n_qubits)?,
    )?;
    println!("\nphysical crosstalk matrix for N=4 (rows: prepared u_j):");
    for row in &bench.entries {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.4}")).collect();
        println!("  [{}]", cells.join("  "));
    }
    Ok(())
}
