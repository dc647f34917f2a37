//! Optical matrix-vector multiplication against the direct summation.
//!
//! Draws a random 4x4 unitary and a random unit vector, pushes them through
//! the ideal pipeline, and compares the readout probabilities with
//! |M u|^2 computed by plain summation.
//!
//! ```text
//! cargo run --example multiply
//! ```

use beamgate::gates::{matvec_oracle, GateMatrix, StateVector};
use beamgate::optics::{run_pipeline, PipelineConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> beamgate::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 4;
    let m = GateMatrix::random_unitary(n, &mut rng);
    let u = StateVector::random_unit(n, &mut rng);

    let cfg = PipelineConfig::ideal_defaults(n)?;
    let readout = run_pipeline(&u, &m, &cfg)?;

    let expected = matvec_oracle(&m, &u)?.intensities();
    let total: f64 = expected.iter().sum();

    println!("{:>4} {:>22} {:>22}", "row", "optical readout", "direct |Mu|^2");
    let mut max_dev = 0.0f64;
    for j in 0..n {
        let reference = expected[j] / total;
        max_dev = max_dev.max((readout.probabilities[j] - reference).abs());
        println!(
            "{j:>4} {:>22.16} {:>22.16}",
            readout.probabilities[j], reference
        );
    }
    println!("\nmax deviation: {max_dev:.3e}");
    Ok(())
}
