//! Walks the kernel locations of a small layer and shows how many input
//! values each one loads into the buffer.
//!
//! `cargo run --example dataflow_schedule`

use pcnna::schedule::total_input_loads;
use pcnna::{
    alexnet_preset, build_schedule, check_working_set, receptive_field_coords, ConvLayerSpec, HardwareConfig,
};

fn main() -> pcnna::Result<()> {
    let spec = ConvLayerSpec::new("toy", 6, 3, 1, 2, 2, 4);
    let schedule = build_schedule(&spec)?;
    println!("{} locations, working set {} values", schedule.locations.len(), schedule.working_set_values);
    for loc in &schedule.locations {
        let padded = receptive_field_coords(loc, &spec).iter().filter(|c| c.padded).count();
        println!(
            "  #{:<2} out ({}, {}) window at ({:>2}, {:>2}) loads {:>2}{}  padded taps {}",
            loc.index,
            loc.row,
            loc.col,
            loc.top,
            loc.left,
            loc.new_values,
            if loc.is_row_start { " row start" } else { "          " },
            padded
        );
    }
    println!("total loads {}", schedule.total_input_loads);

    let hw = HardwareConfig::default();
    println!("\nAlexNet:");
    for layer in &alexnet_preset().layers {
        let fit = check_working_set(layer, &hw);
        println!(
            "  {}: total loads {:>9}, working set {:>5} / {} values{}",
            layer.name,
            total_input_loads(layer)?,
            fit.working_set_values,
            fit.capacity,
            if fit.fits { "" } else { " (overflows)" }
        );
    }
    Ok(())
}
