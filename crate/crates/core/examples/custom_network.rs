//! Builds a small network and hardware config in code, round-trips them
//! through JSON and prints the report as a table.
//!
//! `cargo run --example custom_network`

use pcnna::report::{analyze_network, render_report, Format};
use pcnna::{ConvLayerSpec, HardwareConfig, NetworkSpec, RingMode};

fn main() -> pcnna::Result<()> {
    let net = NetworkSpec {
        name: "small".into(),
        layers: vec![
            ConvLayerSpec::new("c1", 32, 3, 1, 1, 3, 16),
            ConvLayerSpec::new("c2", 32, 3, 1, 2, 16, 32),
            ConvLayerSpec::new("c3", 16, 3, 1, 1, 32, 64),
        ],
    };
    let hw = HardwareConfig {
        n_input_dac: 16,
        bits: 8,
        ..HardwareConfig::default()
    };

    let net_json = serde_json::to_string_pretty(&net).expect("serialize network");
    let hw_json = serde_json::to_string_pretty(&hw).expect("serialize hardware");
    println!("network file:\n{net_json}\n\nhardware file:\n{hw_json}\n");

    let net = NetworkSpec::from_json(&net_json).expect("parse network");
    let hw = HardwareConfig::from_json(&hw_json).expect("parse hardware");
    net.validate()?;
    let report = analyze_network(&net, &hw, RingMode::PerChannelRings)?;
    print!("{}", render_report(&report, Format::Table));
    for w in &report.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
