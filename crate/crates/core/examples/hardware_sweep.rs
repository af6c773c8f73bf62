//! How conv4 responds to more input DACs, a faster DAC and to kernel count.
//!
//! `cargo run --example hardware_sweep`

use pcnna::report::{format_seconds, sweep, SweepArgs, SweepAxis};
use pcnna::{alexnet_preset, HardwareConfig, RingMode};

fn main() -> pcnna::Result<()> {
    let net = alexnet_preset();
    let conv4 = net.layer("conv4")?;
    let hw = HardwareConfig::default();
    let axes = [
        (SweepAxis::InputDacs, vec![1.0, 2.0, 5.0, 10.0, 20.0, 40.0]),
        (SweepAxis::DacRate, vec![1e9, 3e9, 6e9, 12e9]),
        (SweepAxis::Kernels, vec![64.0, 128.0, 256.0, 384.0]),
        (SweepAxis::Bits, vec![4.0, 8.0, 12.0, 16.0]),
    ];
    for (axis, values) in axes {
        println!("{}:", axis.as_str());
        let args = SweepArgs { axis, values, layer: None };
        for row in sweep(conv4, &hw, RingMode::PerChannelRings, &args)? {
            println!(
                "  {:>8} rings {:>7} full {:>10} bottleneck {:<7} bound {:.2e}",
                row.value,
                row.rings_filtered,
                format_seconds(row.t_full),
                row.bottleneck,
                row.output_error_bound
            );
        }
    }
    Ok(())
}
