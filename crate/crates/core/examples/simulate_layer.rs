//! Simulates a whole layer on random data at several resolutions and checks
//! the result against the exact convolution.
//!
//! `cargo run --release --example simulate_layer`

use pcnna::optical::deviation;
use pcnna::{reference_conv, simulate_layer, ConvLayerSpec, QuantSpec, Tensor3, Tensor4};

fn main() -> pcnna::Result<()> {
    let spec = ConvLayerSpec::new("demo", 27, 5, 2, 1, 16, 32);
    let m = spec.kernel_size;
    let fm = Tensor3::random([spec.input_size, spec.input_size, spec.channels], (-1.0, 1.0), 1);
    let kernels = Tensor4::random([spec.kernels, m, m, spec.channels], (-1.0, 1.0), 2);
    let reference = reference_conv(&fm, &kernels, &spec)?;

    for bits in [8, 12, 16, 24] {
        let q = QuantSpec::covering(bits, &fm)?;
        let sim = simulate_layer(&fm, &kernels, &spec, &q)?;
        let (max, mean) = deviation(&sim.output, &reference);
        println!(
            "{bits:>2} bits: max {max:.3e} mean {mean:.3e} bound {:.3e} {}",
            sim.error_bound,
            if max <= sim.error_bound { "ok" } else { "EXCEEDED" }
        );
    }
    Ok(())
}
