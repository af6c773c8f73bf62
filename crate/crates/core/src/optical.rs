//! Functional model of the optical multiply-and-accumulate datapath.
//!
//! Each input value is converted by a DAC and imprinted on its own
//! wavelength. A bank of microrings scales every wavelength by a weight in
//! `[-1, 1]`, and a photodiode sums the bank into one photocurrent, which an
//! ADC digitizes. Signed inputs are simulated directly; the physical
//! intensity encoding is not modeled.
//!
//! Kernel weights outside `[-1, 1]` are handled with a per-layer scale
//! `g = max(1, max|w|)`: weights are divided by `g` before the rings and the
//! outputs multiplied by `g` after the photodiode.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::ConvLayerSpec;
use crate::schedule::{build_schedule, receptive_field_coords};

/// Largest supported converter resolution.
pub const MAX_BITS: u32 = 32;

/// Ring transmission range used for weights.
pub const WEIGHT_RANGE: (f64, f64) = (-1.0, 1.0);

/// Input feature map, `n × n × n_c`, row-major `(row, col, channel)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTensor")]
pub struct Tensor3 {
    pub extent: [usize; 3],
    pub values: Vec<f64>,
}

/// Kernel set, `K × m × m × n_c`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTensor")]
pub struct Tensor4 {
    pub extent: [usize; 4],
    pub values: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTensor {
    extent: Vec<usize>,
    values: Vec<f64>,
}

fn check_values(expected: usize, values: &[f64]) -> Result<()> {
    if values.len() != expected {
        return Err(Error::InvalidTensor(format!(
            "extent implies {expected} values, got {}",
            values.len()
        )));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidTensor(format!("value {i} is not finite")));
    }
    Ok(())
}

impl TryFrom<RawTensor> for Tensor3 {
    type Error = Error;
    fn try_from(raw: RawTensor) -> Result<Self> {
        let extent: [usize; 3] = raw.extent.try_into().map_err(|e: Vec<usize>| {
            Error::InvalidTensor(format!("expected a 3-element extent, got {}", e.len()))
        })?;
        Tensor3::new(extent, raw.values)
    }
}

impl TryFrom<RawTensor> for Tensor4 {
    type Error = Error;
    fn try_from(raw: RawTensor) -> Result<Self> {
        let extent: [usize; 4] = raw.extent.try_into().map_err(|e: Vec<usize>| {
            Error::InvalidTensor(format!("expected a 4-element extent, got {}", e.len()))
        })?;
        Tensor4::new(extent, raw.values)
    }
}

impl Tensor3 {
    pub fn new(extent: [usize; 3], values: Vec<f64>) -> Result<Self> {
        check_values(extent.iter().product(), &values)?;
        Ok(Self { extent, values })
    }

    pub fn zeros(extent: [usize; 3]) -> Self {
        Self {
            extent,
            values: vec![0.0; extent.iter().product()],
        }
    }

    /// Uniform values in `[lo, hi)` from a seeded generator.
    pub fn random(extent: [usize; 3], range: (f64, f64), seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..extent.iter().product::<usize>())
            .map(|_| rng.gen_range(range.0..range.1))
            .collect();
        Self { extent, values }
    }

    #[inline]
    pub fn index(&self, row: usize, col: usize, channel: usize) -> usize {
        (row * self.extent[1] + col) * self.extent[2] + channel
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize, channel: usize) -> f64 {
        self.values[self.index(row, col, channel)]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }
}

impl Tensor4 {
    pub fn new(extent: [usize; 4], values: Vec<f64>) -> Result<Self> {
        check_values(extent.iter().product(), &values)?;
        Ok(Self { extent, values })
    }

    pub fn random(extent: [usize; 4], range: (f64, f64), seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..extent.iter().product::<usize>())
            .map(|_| rng.gen_range(range.0..range.1))
            .collect();
        Self { extent, values }
    }

    #[inline]
    pub fn index(&self, kernel: usize, row: usize, col: usize, channel: usize) -> usize {
        ((kernel * self.extent[1] + row) * self.extent[2] + col) * self.extent[3] + channel
    }

    #[inline]
    pub fn get(&self, kernel: usize, row: usize, col: usize, channel: usize) -> f64 {
        self.values[self.index(kernel, row, col, channel)]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// The single-kernel tensor holding kernel `k`.
    pub fn kernel(&self, k: usize) -> Tensor4 {
        let len = self.extent[1] * self.extent[2] * self.extent[3];
        Tensor4 {
            extent: [1, self.extent[1], self.extent[2], self.extent[3]],
            values: self.values[k * len..(k + 1) * len].to_vec(),
        }
    }
}

/// Converter resolution and ranges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantSpec {
    pub bits: u32,
    pub input_range: (f64, f64),
    /// ADC range. `None` calibrates it per layer so no photocurrent can clip.
    pub output_range: Option<(f64, f64)>,
}

impl QuantSpec {
    pub fn new(bits: u32, input_range: (f64, f64)) -> Result<Self> {
        let q = Self {
            bits,
            input_range,
            output_range: None,
        };
        q.validate()?;
        Ok(q)
    }

    /// Symmetric input range wide enough for every value in `fm`.
    pub fn covering(bits: u32, fm: &Tensor3) -> Result<Self> {
        let x = fm.max_abs();
        let x = if x > 0.0 { x } else { 1.0 };
        Self::new(bits, (-x, x))
    }

    pub fn with_output_range(mut self, range: (f64, f64)) -> Result<Self> {
        self.output_range = Some(range);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_BITS).contains(&self.bits) {
            return Err(Error::InvalidQuant(format!(
                "bits must be between 1 and {MAX_BITS}, got {}",
                self.bits
            )));
        }
        let check = |name: &str, (lo, hi): (f64, f64)| {
            if lo.is_finite() && hi.is_finite() && lo < hi {
                Ok(())
            } else {
                Err(Error::InvalidQuant(format!("{name} needs finite lo < hi")))
            }
        };
        check("input_range", self.input_range)?;
        if let Some(r) = self.output_range {
            check("output_range", r)?;
        }
        Ok(())
    }

    pub fn input_step(&self) -> f64 {
        quant_step(self.input_range, self.bits)
    }

    pub fn weight_step(&self) -> f64 {
        weight_step(self.bits)
    }

    /// Largest input magnitude the DAC represents.
    pub fn input_bound(&self) -> f64 {
        self.input_range.0.abs().max(self.input_range.1.abs())
    }

    pub fn quantize_input(&self, x: f64) -> f64 {
        quantize(x, self.input_range, self.bits)
    }

    pub fn quantize_weight(&self, w: f64) -> f64 {
        quantize_weight(w, self.bits)
    }

    /// ADC range for a layer with `terms` products per MAC and weight scale `g`.
    pub fn output_range_for(&self, terms: usize, weight_scale: f64) -> (f64, f64) {
        self.output_range.unwrap_or_else(|| {
            let r = terms as f64 * weight_scale * self.input_bound();
            let r = if r > 0.0 { r } else { 1.0 };
            (-r, r)
        })
    }

    /// Worst-case deviation of one simulated output from the exact value.
    ///
    /// Holds whenever inputs lie inside `input_range` and the exact output
    /// lies inside the ADC range. Full steps are used for both converters so
    /// the bound carries a factor-of-two margin over the rounding error.
    pub fn error_bound(&self, terms: usize, weight_scale: f64) -> f64 {
        let dx = self.input_step();
        let dw = self.weight_step();
        let x = self.input_bound();
        let w = WEIGHT_RANGE.1;
        let mac = terms as f64 * (dx * w + dw * x + dx * dw);
        let out_step = quant_step(self.output_range_for(terms, weight_scale), self.bits);
        weight_scale * mac + out_step / 2.0
    }
}

fn levels(bits: u32) -> f64 {
    ((1u64 << bits.min(MAX_BITS)) - 1) as f64
}

fn quant_step((lo, hi): (f64, f64), bits: u32) -> f64 {
    (hi - lo) / levels(bits)
}

/// Nearest of `2^bits` evenly spaced levels spanning `[lo, hi]`.
///
/// Values outside the range clamp to it; ties round away from zero.
pub fn quantize(x: f64, (lo, hi): (f64, f64), bits: u32) -> f64 {
    let steps = levels(bits);
    let step = (hi - lo) / steps;
    let code = ((x.clamp(lo, hi) - lo) / step).round().min(steps);
    if code == steps {
        hi
    } else {
        lo + code * step
    }
}

/// Spacing of the weight levels.
pub fn weight_step(bits: u32) -> f64 {
    if bits < 2 {
        quant_step(WEIGHT_RANGE, bits)
    } else {
        // 2^bits - 1 levels, symmetric about an exact zero
        2.0 / (levels(bits) - 1.0)
    }
}

/// Weight quantization onto a zero-centred grid over `[-1, 1]`.
///
/// For `bits >= 2` the grid has `2^bits - 1` levels so that a zero weight
/// (a ring parked off resonance on a balanced detector) is exact.
pub fn quantize_weight(w: f64, bits: u32) -> f64 {
    if bits < 2 {
        return quantize(w, WEIGHT_RANGE, bits);
    }
    let step = weight_step(bits);
    let half = (levels(bits) - 1.0) / 2.0;
    let code = (w.clamp(-1.0, 1.0) / step).round().clamp(-half, half);
    if code == half {
        1.0
    } else if code == -half {
        -1.0
    } else {
        code * step
    }
}

fn dot(inputs: impl Iterator<Item = f64>, weights: impl Iterator<Item = f64>) -> f64 {
    inputs.zip(weights).fold(0.0, |acc, (x, w)| acc + x * w)
}

/// One weight bank: per-wavelength weighting followed by photodiode summation.
///
/// With `q = None` the converters are ideal and the result is the exact dot
/// product.
pub fn weight_bank_mac(inputs: &[f64], weights: &[f64], q: Option<&QuantSpec>) -> Result<f64> {
    if inputs.len() != weights.len() {
        return Err(Error::LengthMismatch {
            left: inputs.len(),
            right: weights.len(),
        });
    }
    Ok(match q {
        None => dot(inputs.iter().copied(), weights.iter().copied()),
        Some(q) => dot(
            inputs.iter().map(|&x| q.quantize_input(x)),
            weights.iter().map(|&w| q.quantize_weight(w)),
        ),
    })
}

fn check_extents(fm: &Tensor3, kernels: &Tensor4, spec: &ConvLayerSpec) -> Result<()> {
    spec.validate()?;
    let want_fm = [spec.input_size, spec.input_size, spec.channels];
    if fm.extent != want_fm {
        return Err(Error::ExtentMismatch {
            what: "input",
            expected: want_fm.to_vec(),
            actual: fm.extent.to_vec(),
        });
    }
    let want_k = [spec.kernels, spec.kernel_size, spec.kernel_size, spec.channels];
    if kernels.extent != want_k {
        return Err(Error::ExtentMismatch {
            what: "kernel",
            expected: want_k.to_vec(),
            actual: kernels.extent.to_vec(),
        });
    }
    Ok(())
}

/// Output of [`simulate_layer`] plus the calibration it used.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerSimulation {
    /// `o × o × K`
    pub output: Tensor3,
    /// Per-layer weight scale `g`.
    pub weight_scale: f64,
    pub output_range: (f64, f64),
    /// Per-element bound on the deviation from [`reference_conv`].
    pub error_bound: f64,
}

/// Runs a whole layer through the quantized optical datapath.
///
/// All `K` weight banks see the same receptive field at each location;
/// padded positions contribute nothing.
pub fn simulate_layer(
    fm: &Tensor3,
    kernels: &Tensor4,
    spec: &ConvLayerSpec,
    q: &QuantSpec,
) -> Result<LayerSimulation> {
    check_extents(fm, kernels, spec)?;
    q.validate()?;
    let schedule = build_schedule(spec)?;
    let dims = spec.dims_unchecked();
    let k_count = spec.kernels;
    let m = spec.kernel_size;

    let weight_scale = kernels.max_abs().max(1.0);
    let q_fm: Vec<f64> = fm.values.iter().map(|&x| q.quantize_input(x)).collect();
    let q_kernels: Vec<f64> = kernels
        .values
        .iter()
        .map(|&w| q.quantize_weight(w / weight_scale))
        .collect();
    let output_range = q.output_range_for(dims.kernel_values, weight_scale);

    let per_location: Vec<Vec<f64>> = schedule
        .locations
        .par_iter()
        .map(|loc| {
            // (input index, kernel offset) for each unpadded position
            let taps: Vec<(usize, usize)> = receptive_field_coords(loc, spec)
                .into_iter()
                .filter(|c| !c.padded)
                .map(|c| {
                    let (r, col) = (c.row as usize, c.col as usize);
                    let kr = (c.row - loc.top) as usize;
                    let kc = (c.col - loc.left) as usize;
                    (fm.index(r, col, c.channel), (kr * m + kc) * spec.channels + c.channel)
                })
                .collect();
            (0..k_count)
                .map(|k| {
                    let base = kernels.index(k, 0, 0, 0);
                    let current = dot(
                        taps.iter().map(|&(i, _)| q_fm[i]),
                        taps.iter().map(|&(_, w)| q_kernels[base + w]),
                    );
                    quantize(weight_scale * current, output_range, q.bits)
                })
                .collect()
        })
        .collect();

    let o = dims.output_size;
    let output = Tensor3 {
        extent: [o, o, k_count],
        values: per_location.into_iter().flatten().collect(),
    };
    Ok(LayerSimulation {
        output,
        weight_scale,
        output_range,
        error_bound: q.error_bound(dims.kernel_values, weight_scale),
    })
}

/// Exact floating-point cross-correlation with zero padding.
///
/// Each output sums channel-major, then row-major over the window, so the
/// result is bit-reproducible.
pub fn reference_conv(fm: &Tensor3, kernels: &Tensor4, spec: &ConvLayerSpec) -> Result<Tensor3> {
    check_extents(fm, kernels, spec)?;
    let o = spec.dims_unchecked().output_size;
    let (n, m, s, p) = (
        spec.input_size as i64,
        spec.kernel_size,
        spec.stride as i64,
        spec.padding as i64,
    );
    let mut out = Tensor3::zeros([o, o, spec.kernels]);
    for row in 0..o {
        for col in 0..o {
            let top = row as i64 * s - p;
            let left = col as i64 * s - p;
            for k in 0..spec.kernels {
                let mut acc = 0.0;
                for ch in 0..spec.channels {
                    for kr in 0..m {
                        let r = top + kr as i64;
                        if r < 0 || r >= n {
                            continue;
                        }
                        for kc in 0..m {
                            let c = left + kc as i64;
                            if c < 0 || c >= n {
                                continue;
                            }
                            acc += fm.get(r as usize, c as usize, ch) * kernels.get(k, kr, kc, ch);
                        }
                    }
                }
                let idx = out.index(row, col, k);
                out.values[idx] = acc;
            }
        }
    }
    Ok(out)
}

/// Largest and mean absolute elementwise difference.
pub fn deviation(a: &Tensor3, b: &Tensor3) -> (f64, f64) {
    assert_eq!(a.extent, b.extent, "deviation of tensors with different extents");
    let diffs = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs());
    let (max, sum) = diffs.fold((0.0f64, 0.0), |(m, s), d| (m.max(d), s + d));
    let len = a.values.len().max(1) as f64;
    (max, sum / len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn quantize_midrange() {
        let step = 2.0 / 255.0;
        let q = quantize(0.0, (-1.0, 1.0), 8);
        assert!(q.abs() <= step / 2.0 + 1e-15);
        // 127.5 rounds away from zero to code 128
        assert!((q - (-1.0 + 128.0 * step)).abs() < 1e-15);
    }

    #[test]
    fn quantize_clamps() {
        assert_eq!(quantize(5.0, (-1.0, 1.0), 8), 1.0);
        assert_eq!(quantize(-5.0, (-1.0, 1.0), 8), -1.0);
    }

    #[test]
    fn quantize_two_bits() {
        // levels {0, 1/3, 2/3, 1}
        assert_eq!(quantize(0.3, (0.0, 1.0), 2), 1.0 / 3.0);
        assert_eq!(quantize(0.9, (0.0, 1.0), 2), 1.0);
        assert_eq!(quantize(0.0, (0.0, 1.0), 2), 0.0);
    }

    #[test]
    fn quantize_one_bit() {
        assert_eq!(quantize(-0.4, (-1.0, 1.0), 1), -1.0);
        assert_eq!(quantize(0.4, (-1.0, 1.0), 1), 1.0);
        assert_eq!(quantize(0.0, (-1.0, 1.0), 1), 1.0);
    }

    #[test]
    fn weight_grid_contains_zero_and_ends() {
        for bits in 2..=24 {
            assert_eq!(quantize_weight(0.0, bits), 0.0);
            assert_eq!(quantize_weight(1.0, bits), 1.0);
            assert_eq!(quantize_weight(-3.0, bits), -1.0);
        }
        assert_eq!(quantize_weight(0.4, 2), 0.0);
        assert_eq!(quantize_weight(0.5, 2), 1.0);
    }

    #[test]
    fn mac_all_ones() {
        let q = QuantSpec::new(16, (-1.0, 1.0)).unwrap();
        let got = weight_bank_mac(&[1.0; 3], &[1.0; 3], Some(&q)).unwrap();
        assert!((got - 3.0).abs() <= q.input_step());
    }

    #[test]
    fn mac_zero_weights_is_exactly_zero() {
        let q = QuantSpec::new(16, (-1.0, 1.0)).unwrap();
        let x = [0.3, -0.7, 0.99, 0.01];
        assert_eq!(weight_bank_mac(&x, &[0.0; 4], Some(&q)).unwrap(), 0.0);
    }

    #[test]
    fn mac_length_mismatch() {
        assert!(matches!(
            weight_bank_mac(&[1.0; 3], &[1.0; 2], None),
            Err(Error::LengthMismatch { left: 3, right: 2 })
        ));
    }

    #[test]
    fn mac_random_within_bruteforce_bound() {
        let q = QuantSpec::new(16, (-1.0, 1.0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let x: Vec<f64> = (0..363).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let w: Vec<f64> = (0..363).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let exact: f64 = x.iter().zip(&w).map(|(a, b)| a * b).sum();
            let got = weight_bank_mac(&x, &w, Some(&q)).unwrap();
            let (dx, dw) = (q.input_step(), q.weight_step());
            // per-element worst case, accumulated independently
            let per_element: f64 = x
                .iter()
                .zip(&w)
                .map(|(a, b)| dx * b.abs() + dw * a.abs() + dx * dw)
                .sum();
            let max_w = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let max_x = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let formula = 363.0 * (dx * max_w + dw * max_x + dx * dw);
            assert!((got - exact).abs() <= per_element);
            assert!(per_element <= formula + 1e-15);
        }
    }

    #[test]
    fn scalar_convolution() {
        let spec = ConvLayerSpec::new("s", 1, 1, 0, 1, 1, 1);
        let fm = Tensor3::new([1, 1, 1], vec![0.625]).unwrap();
        let k = Tensor4::new([1, 1, 1, 1], vec![-0.5]).unwrap();
        let q = QuantSpec::covering(24, &fm).unwrap();
        let sim = simulate_layer(&fm, &k, &spec, &q).unwrap();
        assert_eq!(sim.output.extent, [1, 1, 1]);
        assert!((sim.output.values[0] + 0.3125).abs() < 1e-6);
    }

    #[test]
    fn sum_of_nine_ones() {
        let spec = ConvLayerSpec::new("s", 3, 3, 0, 1, 1, 1);
        let fm = Tensor3::new([3, 3, 1], vec![1.0; 9]).unwrap();
        let k = Tensor4::new([1, 3, 3, 1], vec![1.0; 9]).unwrap();
        let q = QuantSpec::new(16, (-1.0, 1.0)).unwrap();
        let sim = simulate_layer(&fm, &k, &spec, &q).unwrap();
        assert!((sim.output.values[0] - 9.0).abs() <= sim.error_bound);
        assert!((sim.output.values[0] - 9.0).abs() < 1e-3);
    }

    #[test]
    fn ramp_stride_two() {
        let spec = ConvLayerSpec::new("r", 4, 2, 0, 2, 1, 1);
        let fm = Tensor3::new([4, 4, 1], (0..16).map(f64::from).collect()).unwrap();
        let k = Tensor4::new([1, 2, 2, 1], vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let out = reference_conv(&fm, &k, &spec).unwrap();
        assert_eq!(out.extent, [2, 2, 1]);
        assert_eq!(out.values, vec![5.0, 9.0, 21.0, 25.0]);
    }

    #[test]
    fn identity_kernel_same_padding() {
        let spec = ConvLayerSpec::new("id", 6, 3, 1, 1, 2, 2);
        let fm = Tensor3::random([6, 6, 2], (-1.0, 1.0), 3);
        let mut k = vec![0.0; 2 * 3 * 3 * 2];
        let kt = Tensor4 { extent: [2, 3, 3, 2], values: vec![] };
        // kernel c picks channel c at the window centre
        for c in 0..2 {
            k[kt.index(c, 1, 1, c)] = 1.0;
        }
        let k = Tensor4::new([2, 3, 3, 2], k).unwrap();
        let out = reference_conv(&fm, &k, &spec).unwrap();
        assert_eq!(out, fm);
    }

    #[test]
    fn zero_kernels_give_zero_output() {
        let spec = ConvLayerSpec::new("z", 5, 3, 1, 2, 2, 3);
        let fm = Tensor3::random([5, 5, 2], (-1.0, 1.0), 4);
        let k = Tensor4::new([3, 3, 3, 2], vec![0.0; 54]).unwrap();
        let out = reference_conv(&fm, &k, &spec).unwrap();
        assert!(out.values.iter().all(|&v| v == 0.0));
        let q = QuantSpec::covering(16, &fm).unwrap();
        let sim = simulate_layer(&fm, &k, &spec, &q).unwrap();
        assert!(sim.output.values.iter().all(|&v| v.abs() <= sim.error_bound));
    }

    #[test]
    fn random_layer_within_bound() {
        let spec = ConvLayerSpec::new("r", 16, 3, 0, 1, 3, 5);
        let fm = Tensor3::random([16, 16, 3], (-1.0, 1.0), 11);
        let k = Tensor4::random([5, 3, 3, 3], (-1.0, 1.0), 12);
        let q = QuantSpec::covering(16, &fm).unwrap();
        let sim = simulate_layer(&fm, &k, &spec, &q).unwrap();
        let reference = reference_conv(&fm, &k, &spec).unwrap();
        let (max, _) = deviation(&sim.output, &reference);
        assert!(max <= sim.error_bound, "{max} > {}", sim.error_bound);
    }

    #[test]
    fn large_weights_are_rescaled() {
        let spec = ConvLayerSpec::new("g", 4, 2, 0, 1, 1, 2);
        let fm = Tensor3::random([4, 4, 1], (-1.0, 1.0), 5);
        let k = Tensor4::random([2, 2, 2, 1], (-8.0, 8.0), 6);
        let q = QuantSpec::covering(20, &fm).unwrap();
        let sim = simulate_layer(&fm, &k, &spec, &q).unwrap();
        assert_eq!(sim.weight_scale, k.max_abs());
        let reference = reference_conv(&fm, &k, &spec).unwrap();
        assert!(deviation(&sim.output, &reference).0 <= sim.error_bound);
    }

    #[test]
    fn extent_mismatch() {
        let spec = ConvLayerSpec::new("e", 4, 2, 0, 1, 1, 2);
        let fm = Tensor3::zeros([4, 4, 1]);
        let k = Tensor4::new([2, 3, 3, 1], vec![0.0; 18]).unwrap();
        let err = reference_conv(&fm, &k, &spec).unwrap_err();
        assert!(err.to_string().contains("kernel extent mismatch"));
        let err = simulate_layer(&Tensor3::zeros([5, 4, 1]), &k, &spec, &QuantSpec::new(8, (-1.0, 1.0)).unwrap())
            .unwrap_err();
        assert!(err.to_string().contains("input extent mismatch"));
    }

    #[test]
    fn simulated_mac_matches_weight_bank() {
        let spec = ConvLayerSpec::new("w", 5, 3, 1, 1, 2, 2);
        let fm = Tensor3::random([5, 5, 2], (-1.0, 1.0), 8);
        let k = Tensor4::random([2, 3, 3, 2], (-1.0, 1.0), 9);
        // wide fixed ADC range at high resolution so the ADC is nearly transparent
        let q = QuantSpec::new(24, (-1.0, 1.0)).unwrap();
        let sim = simulate_layer(&fm, &k, &spec, &q).unwrap();
        let sched = build_schedule(&spec).unwrap();
        let loc = &sched.locations[7];
        let coords: Vec<_> = receptive_field_coords(loc, &spec).into_iter().filter(|c| !c.padded).collect();
        let x: Vec<f64> = coords.iter().map(|c| fm.get(c.row as usize, c.col as usize, c.channel)).collect();
        for kk in 0..2 {
            let w: Vec<f64> = coords
                .iter()
                .map(|c| k.get(kk, (c.row - loc.top) as usize, (c.col - loc.left) as usize, c.channel))
                .collect();
            let mac = weight_bank_mac(&x, &w, Some(&q)).unwrap();
            let out = sim.output.get(loc.row, loc.col, kk);
            let adc_step = quant_step(sim.output_range, 24);
            assert!((mac - out).abs() <= adc_step / 2.0 + 1e-12);
        }
    }

    #[test]
    fn tensor_json_round_trip_and_validation() {
        let t: Tensor3 = serde_json::from_str(r#"{"extent":[1,2,1],"values":[0.5,-1]}"#).unwrap();
        assert_eq!(t.values, vec![0.5, -1.0]);
        let back: Tensor3 = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<Tensor3>(r#"{"extent":[2,2,1],"values":[0.5]}"#).is_err());
        assert!(serde_json::from_str::<Tensor4>(r#"{"extent":[1,1,1],"values":[0.5]}"#).is_err());
    }

    fn small_layer() -> impl Strategy<Value = (ConvLayerSpec, u64)> {
        (1usize..12, 1usize..4, 0usize..2, 1usize..3, 1usize..3, 1usize..4, any::<u64>())
            .prop_filter("kernel fits", |(n, m, p, ..)| *m <= n + 2 * p)
            .prop_map(|(n, m, p, s, c, k, seed)| (ConvLayerSpec::new("p", n, m, p, s, c, k), seed))
    }

    proptest! {
        #[test]
        fn quantize_error_at_most_half_step(x in -2.0f64..2.0, bits in 1u32..24) {
            let q = quantize(x, (-1.0, 1.0), bits);
            let step = quant_step((-1.0, 1.0), bits);
            prop_assert!((q - x.clamp(-1.0, 1.0)).abs() <= step / 2.0 + 1e-12);
            let qw = quantize_weight(x, bits);
            prop_assert!((qw - x.clamp(-1.0, 1.0)).abs() <= weight_step(bits) / 2.0 + 1e-12);
        }

        #[test]
        fn ideal_mac_is_linear(
            x in prop::collection::vec(-1.0f64..1.0, 1..20),
            a in -4.0f64..4.0,
            seed in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w: Vec<f64> = x.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
            // exact when the scale is a power of two
            let a = 2f64.powi(a as i32);
            let ax: Vec<f64> = x.iter().map(|v| a * v).collect();
            prop_assert_eq!(
                weight_bank_mac(&ax, &w, None).unwrap(),
                a * weight_bank_mac(&x, &w, None).unwrap()
            );
        }

        #[test]
        fn quantized_mac_is_nearly_linear(
            x in prop::collection::vec(-0.5f64..0.5, 1..40),
            a in 0.1f64..2.0,
            seed in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w: Vec<f64> = x.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
            let q = QuantSpec::new(16, (-1.0, 1.0)).unwrap();
            let ax: Vec<f64> = x.iter().map(|v| a * v).collect();
            let lhs = weight_bank_mac(&ax, &w, Some(&q)).unwrap();
            let rhs = a * weight_bank_mac(&x, &w, Some(&q)).unwrap();
            let terms = x.len() as f64;
            let b = terms * (q.input_step() + q.weight_step() + q.input_step() * q.weight_step());
            prop_assert!((lhs - rhs).abs() <= b * (1.0 + a));
        }

        #[test]
        fn kernels_one_at_a_time_match_all_at_once((spec, seed) in small_layer()) {
            let n = spec.input_size;
            let fm = Tensor3::random([n, n, spec.channels], (-1.0, 1.0), seed);
            let k = Tensor4::random(
                [spec.kernels, spec.kernel_size, spec.kernel_size, spec.channels],
                (-1.0, 1.0),
                seed ^ 1,
            );
            let q = QuantSpec::new(12, (-1.0, 1.0)).unwrap();
            let all = simulate_layer(&fm, &k, &spec, &q).unwrap().output;
            for kk in 0..spec.kernels {
                let single = simulate_layer(&fm, &k.kernel(kk), &spec.with_kernels(1), &q).unwrap().output;
                let o = all.extent[0];
                for r in 0..o {
                    for c in 0..o {
                        prop_assert_eq!(single.get(r, c, 0), all.get(r, c, kk));
                    }
                }
            }
        }

        #[test]
        fn high_resolution_matches_reference((spec, seed) in small_layer()) {
            let n = spec.input_size;
            let fm = Tensor3::random([n, n, spec.channels], (-1.0, 1.0), seed);
            let k = Tensor4::random(
                [spec.kernels, spec.kernel_size, spec.kernel_size, spec.channels],
                (-1.0, 1.0),
                seed ^ 2,
            );
            let q = QuantSpec::new(24, (-1.0, 1.0)).unwrap();
            let sim = simulate_layer(&fm, &k, &spec, &q).unwrap();
            let reference = reference_conv(&fm, &k, &spec).unwrap();
            let (max, _) = deviation(&sim.output, &reference);
            prop_assert!(max < 1e-3);
            prop_assert!(max <= sim.error_bound);
        }
    }
}
