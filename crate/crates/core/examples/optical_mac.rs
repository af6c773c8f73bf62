//! One weight bank: a dot product through quantized DACs and an ADC,
//! against the exact value.
//!
//! `cargo run --example optical_mac`

use pcnna::{weight_bank_mac, QuantSpec};

fn main() -> pcnna::Result<()> {
    let inputs = [0.8, -0.3, 0.55, 0.1, -0.95, 0.42, 0.0, 0.77, -0.6];
    let weights = [0.25, -0.5, 0.9, -0.1, 0.3, 0.0, -0.7, 0.6, 0.15];
    let exact = weight_bank_mac(&inputs, &weights, None)?;
    println!("exact {exact:+.9}");
    for bits in [4, 8, 12, 16, 24] {
        let q = QuantSpec::new(bits, (-1.0, 1.0))?;
        let got = weight_bank_mac(&inputs, &weights, Some(&q))?;
        println!(
            "{bits:>2} bits {got:+.9}  error {:.3e}  bound {:.3e}",
            (got - exact).abs(),
            q.error_bound(inputs.len(), 1.0)
        );
    }
    Ok(())
}
