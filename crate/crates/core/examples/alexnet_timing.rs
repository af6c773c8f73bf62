//! Optical-core and full-system time for the AlexNet conv layers, with
//! speedups over the published comparison accelerators.
//!
//! `cargo run --example alexnet_timing`

use pcnna::report::format_seconds;
use pcnna::timing::attach_speedups;
use pcnna::{alexnet_preset, full_system_time, BaselineTable, HardwareConfig};

fn main() -> pcnna::Result<()> {
    let hw = HardwareConfig::default();
    let mut reports = alexnet_preset()
        .layers
        .iter()
        .map(|l| full_system_time(l, &hw))
        .collect::<pcnna::Result<Vec<_>>>()?;
    attach_speedups(&mut reports, &BaselineTable::alexnet())?;

    for r in &reports {
        println!(
            "{}: optical {}, full {} (sequential {}), weight load {}, bottleneck {}",
            r.layer,
            format_seconds(r.t_optical),
            format_seconds(r.t_full),
            format_seconds(r.t_full_sequential),
            format_seconds(r.t_weight_load),
            r.bottleneck.as_str()
        );
        for (name, s) in &r.speedups {
            println!("    vs {name:<8} full {:>10.1}x  optical {:>12.1}x", s.full, s.optical);
        }
        for w in &r.warnings {
            println!("    warning: {w}");
        }
    }
    Ok(())
}
