//! The Deutsch-Jozsa algorithm on the optical multiplier.
//!
//! The uniform superposition is prepared on the lattice, the compound
//! operation (Hadamard gate after the phase oracle) goes on the second
//! modulation plane, and the function class is read from the light on
//! row 0: bright means constant, dark means balanced.
//!
//! Runs the two constant functions and the worked balanced example at N=4,
//! then a batch of random balanced functions at N=8.
//!
//! ```text
//! cargo run --example deutsch_jozsa
//! ```

use beamgate::experiments::{dj_run, DEFAULT_DJ_THRESHOLD};
use beamgate::gates::BooleanFunction;
use beamgate::optics::PipelineConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bits_of(f: &BooleanFunction) -> String {
    f.bits().iter().map(|b| char::from(b'0' + b)).collect()
}

fn main() -> beamgate::Result<()> {
    let cfg4 = PipelineConfig::ideal_defaults(4)?;
    let showcase = [
        BooleanFunction::constant(4, 0)?,
        BooleanFunction::constant(4, 1)?,
        // maps {00, 11} -> 1 and {01, 10} -> 0; the output lands on row 3
        BooleanFunction::from_bits("1001")?,
    ];
    println!("N=4:");
    for f in &showcase {
        let v = dj_run(f, &cfg4, DEFAULT_DJ_THRESHOLD)?;
        let bars: Vec<String> = v
            .measured_probabilities
            .iter()
            .map(|p| format!("{p:.3}"))
            .collect();
        println!(
            "  F = {}  rows [{}]  verdict: {} ({})",
            bits_of(f),
            bars.join(" "),
            v.verdict,
            if v.correct { "correct" } else { "WRONG" }
        );
    }

    let cfg8 = PipelineConfig::ideal_defaults(8)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut correct = 0;
    let trials = 20;
    for _ in 0..trials {
        let f = BooleanFunction::random_balanced(8, &mut rng)?;
        if dj_run(&f, &cfg8, DEFAULT_DJ_THRESHOLD)?.correct {
            correct += 1;
        }
    }
    println!("\nN=8: {correct}/{trials} random balanced functions classified correctly");
    Ok(())
}
