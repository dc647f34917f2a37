//! Fidelity versus lattice dimension at fixed total extent.
//!
//! Packing more modes into the same aperture shrinks each waist, the
//! smaller beams diffract faster in the unfocused direction after the
//! cylindrical lens, and the crosstalk fidelity falls. Takes around a
//! minute at the default grid resolution.
//!
//! ```text
//! cargo run --release --example scaling_trend
//! ```

use beamgate::experiments::{scaling_study, ScalingConfig};
use beamgate::optics::Mode;

fn main() {
    let cfg = ScalingConfig::new(Mode::Physical);
    println!(
        "extent = {:.1} mm, y-spread distance = {:.0} mm",
        cfg.extent * 1e3,
        cfg.propagation_distance * 1e3
    );
    println!(
        "{:>4} {:>12} {:>22} {:>12}",
        "N", "waist (um)", "fidelity", "overlap"
    );
    for row in scaling_study(&[2, 4, 8, 16], &cfg) {
        match row.fidelity {
            Some(fid) => println!(
                "{:>4} {:>12.1} {:>14.6} +/- {:.1e} {:>10.4}",
                row.n,
                row.waist * 1e6,
                fid,
                row.fidelity_std.unwrap_or(0.0),
                row.adjacent_overlap.unwrap_or(0.0)
            ),
            None => println!(
                "{:>4} {:>12.1} failed: {}",
                row.n,
                row.waist * 1e6,
                row.error.as_deref().unwrap_or("unknown")
            ),
        }
    }
}
