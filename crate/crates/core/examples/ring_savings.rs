//! Microring counts with and without receptive-field filtering, per layer.
//!
//! `cargo run --example ring_savings`

use pcnna::{alexnet_preset, ring_counts, HardwareConfig, RingMode};

fn main() -> pcnna::Result<()> {
    let hw = HardwareConfig::default();
    println!(
        "{:<6} {:>16} {:>12} {:>12} {:>12} {:>10}",
        "layer", "unfiltered", "per-channel", "spatial", "savings", "area mm2"
    );
    for layer in &alexnet_preset().layers {
        let full = ring_counts(layer, &hw, RingMode::PerChannelRings)?;
        let spatial = ring_counts(layer, &hw, RingMode::SpatialOnlyRings)?;
        println!(
            "{:<6} {:>16} {:>12} {:>12} {:>12.0} {:>10.2}",
            layer.name,
            full.rings_unfiltered,
            full.rings_filtered,
            spatial.rings_filtered,
            full.savings_ratio,
            full.ring_area_mm2
        );
    }
    Ok(())
}
