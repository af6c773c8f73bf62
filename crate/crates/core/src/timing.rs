//! Execution-time model.
//!
//! The optical core finishes one receptive-field location per clock, for all
//! kernels at once, so its time is `N_locs / f_clock` regardless of `K`.
//!
//! The full system adds the electronics around it as a three-stage pipeline
//! per location: input DACs convert the newly loaded values, the optical core
//! runs one cycle, ADCs drain the `K` outputs. Buffers decouple the stages,
//! so each location costs the slowest of the three. The one-off kernel-weight
//! load through the weight DAC is reported separately in `t_weight_load` and
//! is not part of `t_full`. DRAM traffic is not modeled.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, InvalidLayer, Result};
use crate::hardware::HardwareConfig;
use crate::network::ConvLayerSpec;
use crate::schedule::{build_schedule, check_working_set, steady_state_new_values};

/// Pipeline stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Dac,
    Adc,
    Optical,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Dac => "dac",
            Stage::Adc => "adc",
            Stage::Optical => "optical",
        }
    }
}

/// What the timing model leaves out; attached to every report.
pub const EXCLUDED_FROM_TIMING: &[&str] = &["dram transfers"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Speedup {
    /// Baseline latency over `t_full`.
    pub full: f64,
    /// Baseline latency over `t_optical`.
    pub optical: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingReport {
    pub layer: String,
    pub n_locs: usize,
    /// Optical core alone (s).
    pub t_optical: f64,
    /// One optical MAC cycle (s).
    pub t_optical_cycle: f64,
    /// Input conversion time at a location continuing a row (s).
    pub t_dac_steady: f64,
    /// Input conversion time at the first location of a row (s).
    pub t_dac_rowstart: f64,
    /// Output conversion time per location (s).
    pub t_adc: f64,
    /// Sum of input conversion times over the schedule (s).
    pub t_dac_total: f64,
    /// Sum of output conversion times over the schedule (s).
    pub t_adc_total: f64,
    /// Pipelined full-system time (s).
    pub t_full: f64,
    /// Full-system time if the stages did not overlap (s).
    pub t_full_sequential: f64,
    /// One-off kernel-weight load through the weight DACs (s).
    pub t_weight_load: f64,
    pub bottleneck: Stage,
    /// Keyed by baseline name; filled by [`attach_speedups`].
    pub speedups: BTreeMap<String, Speedup>,
    pub excluded: Vec<String>,
    pub warnings: Vec<String>,
}

impl TimingReport {
    /// `t_full` plus the weight load.
    pub fn t_full_with_weight_load(&self) -> f64 {
        self.t_full + self.t_weight_load
    }
}

/// `N_locs / f_clock`.
pub fn optical_time(spec: &ConvLayerSpec, hw: &HardwareConfig) -> Result<f64, InvalidLayer> {
    Ok(spec.dims()?.locations as f64 / hw.f_clock)
}

/// Sequential conversions per input DAC at one location.
pub fn dac_conversions_per_location(
    spec: &ConvLayerSpec,
    hw: &HardwareConfig,
    row_start: bool,
) -> Result<usize, InvalidLayer> {
    let dims = spec.dims()?;
    let new_values = if row_start {
        dims.kernel_values
    } else {
        steady_state_new_values(spec)
    };
    Ok(new_values.div_ceil(hw.n_input_dac))
}

/// Pipelined full-system timing of one layer.
pub fn full_system_time(spec: &ConvLayerSpec, hw: &HardwareConfig) -> Result<TimingReport> {
    hw.validate()?;
    let mut warnings: Vec<String> = spec.validate()?.iter().map(ToString::to_string).collect();
    let dims = spec.dims_unchecked();
    let schedule = build_schedule(spec)?;

    let fit = check_working_set(spec, hw);
    if !fit.fits {
        warnings.push(format!(
            "layer `{}`: receptive field of {} values exceeds SRAM capacity of {} (x{:.3})",
            spec.name, fit.working_set_values, fit.capacity, fit.overflow_factor
        ));
    }

    let t_cycle = 1.0 / hw.f_clock;
    let dac_time = |new_values: usize| new_values.div_ceil(hw.n_input_dac) as f64 / hw.f_dac;
    let t_dac_steady = dac_time(steady_state_new_values(spec));
    let t_dac_rowstart = dac_time(dims.kernel_values);
    let t_adc = spec.kernels.div_ceil(hw.adc_count(spec.kernels)) as f64 / hw.f_adc;

    let mut t_full = 0.0;
    let mut t_full_sequential = 0.0;
    let mut t_dac_total = 0.0;
    let mut t_adc_total = 0.0;
    for loc in &schedule.locations {
        let t_dac = dac_time(loc.new_values);
        t_full += t_dac.max(t_cycle).max(t_adc);
        t_full_sequential += t_dac + t_cycle + t_adc;
        t_dac_total += t_dac;
        t_adc_total += t_adc;
    }

    let weight_values = spec.kernels * dims.kernel_values;
    let t_weight_load = weight_values.div_ceil(hw.n_weight_dac) as f64 / hw.f_dac;

    let bottleneck = if t_dac_steady >= t_adc && t_dac_steady >= t_cycle {
        Stage::Dac
    } else if t_adc >= t_cycle {
        Stage::Adc
    } else {
        Stage::Optical
    };

    Ok(TimingReport {
        layer: spec.name.clone(),
        n_locs: dims.locations,
        t_optical: dims.locations as f64 / hw.f_clock,
        t_optical_cycle: t_cycle,
        t_dac_steady,
        t_dac_rowstart,
        t_adc,
        t_dac_total,
        t_adc_total,
        t_full,
        t_full_sequential,
        t_weight_load,
        bottleneck,
        speedups: BTreeMap::new(),
        excluded: EXCLUDED_FROM_TIMING.iter().map(|s| s.to_string()).collect(),
        warnings,
    })
}

/// Published per-layer latencies of one electronic accelerator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Baseline {
    pub name: String,
    /// Seconds, one entry per layer of the table.
    pub latencies: Vec<f64>,
}

/// Electronic reference latencies for AlexNet conv1 to conv5.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineTable {
    pub layers: Vec<String>,
    pub baselines: Vec<Baseline>,
}

impl BaselineTable {
    /// Eyeriss and YodaNN on the five AlexNet convolution layers.
    pub fn alexnet() -> Self {
        let ms = |v: [f64; 5]| v.iter().map(|x| x * 1e-3).collect();
        Self {
            layers: ["conv1", "conv2", "conv3", "conv4", "conv5"]
                .map(String::from)
                .to_vec(),
            baselines: vec![
                Baseline {
                    name: "Eyeriss".into(),
                    latencies: ms([20.9, 41.9, 23.6, 18.4, 10.5]),
                },
                Baseline {
                    name: "YodaNN".into(),
                    latencies: ms([364.7, 101.7, 23.8, 16.0, 5.6]),
                },
            ],
        }
    }
}

/// Per-layer, per-baseline latency ratios.
pub fn speedup_vs_baselines(
    reports: &[TimingReport],
    baselines: &BaselineTable,
) -> Result<Vec<BTreeMap<String, Speedup>>> {
    if reports.len() != baselines.layers.len() {
        return Err(Error::BaselineLength {
            expected: baselines.layers.len(),
            actual: reports.len(),
        });
    }
    Ok(reports
        .iter()
        .enumerate()
        .map(|(i, r)| {
            baselines
                .baselines
                .iter()
                .map(|b| {
                    let lat = b.latencies[i];
                    (
                        b.name.clone(),
                        Speedup {
                            full: lat / r.t_full,
                            optical: lat / r.t_optical,
                        },
                    )
                })
                .collect()
        })
        .collect())
}

/// Fills `speedups` on each report from [`speedup_vs_baselines`].
pub fn attach_speedups(reports: &mut [TimingReport], baselines: &BaselineTable) -> Result<()> {
    let speedups = speedup_vs_baselines(reports, baselines)?;
    for (r, s) in reports.iter_mut().zip(speedups) {
        r.speedups = s;
    }
    Ok(())
}
