//! Microring counts and ring-bank area.
//!
//! Without receptive-field filtering every kernel needs a ring for every
//! input value at every one of its taps: `N_input · K · N_kernel` rings.
//! Filtering feeds each weight bank only the current receptive field, which
//! drops the count to one bank of `N_kernel` rings per kernel. A second mode
//! keeps only the `m·m` spatial taps per kernel, with channels time-shared
//! over the same rings.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::InvalidLayer;
use crate::hardware::HardwareConfig;
use crate::network::ConvLayerSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RingMode {
    /// `K · m · m · n_c` rings: one per kernel weight.
    PerChannelRings,
    /// `K · m · m` rings: channels multiplexed over one spatial bank.
    SpatialOnlyRings,
}

impl RingMode {
    pub const ALL: [RingMode; 2] = [RingMode::PerChannelRings, RingMode::SpatialOnlyRings];

    pub fn as_str(self) -> &'static str {
        match self {
            RingMode::PerChannelRings => "per-channel-rings",
            RingMode::SpatialOnlyRings => "spatial-only-rings",
        }
    }
}

impl fmt::Display for RingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RingMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "per-channel-rings" => Ok(RingMode::PerChannelRings),
            "spatial-only-rings" => Ok(RingMode::SpatialOnlyRings),
            other => Err(format!(
                "unknown ring mode `{other}` (expected per-channel-rings or spatial-only-rings)"
            )),
        }
    }
}

/// Area of the fixed electronic blocks, reported next to the rings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedBlockArea {
    /// All input and weight DACs.
    pub dac_mm2: f64,
    pub sram_mm2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResourceReport {
    pub mode: RingMode,
    pub rings_unfiltered: u64,
    pub rings_filtered: u64,
    /// `rings_unfiltered / rings_filtered`
    pub savings_ratio: f64,
    /// Rings only, densely packed at the configured pitch.
    pub ring_area_mm2: f64,
    pub fixed_area: FixedBlockArea,
}

/// Ring counts and area for one layer.
pub fn ring_counts(
    spec: &ConvLayerSpec,
    hw: &HardwareConfig,
    mode: RingMode,
) -> Result<ResourceReport, InvalidLayer> {
    let dims = spec.dims()?;
    let kernels = spec.kernels as u64;
    let rings_unfiltered = dims.input_values as u64 * kernels * dims.kernel_values as u64;
    let rings_filtered = match mode {
        RingMode::PerChannelRings => kernels * dims.kernel_values as u64,
        RingMode::SpatialOnlyRings => kernels * (spec.kernel_size * spec.kernel_size) as u64,
    };
    let pitch_mm = hw.ring_pitch * 1e3;
    Ok(ResourceReport {
        mode,
        rings_unfiltered,
        rings_filtered,
        savings_ratio: rings_unfiltered as f64 / rings_filtered as f64,
        ring_area_mm2: rings_filtered as f64 * pitch_mm * pitch_mm,
        fixed_area: FixedBlockArea {
            dac_mm2: (hw.n_input_dac + hw.n_weight_dac) as f64 * hw.dac_area_mm2,
            sram_mm2: hw.sram_area_mm2,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::alexnet_preset;
    use proptest::prelude::*;

    #[test]
    fn conv1_per_channel() {
        let hw = HardwareConfig::default();
        let r = ring_counts(&alexnet_preset().layers[0], &hw, RingMode::PerChannelRings).unwrap();
        assert_eq!(r.rings_unfiltered, 5_245_599_744);
        assert_eq!(r.rings_filtered, 34_848);
        assert_eq!(r.savings_ratio, 150_528.0);
    }

    #[test]
    fn conv4_spatial_only() {
        let hw = HardwareConfig::default();
        let net = alexnet_preset();
        let r = ring_counts(net.layer("conv4").unwrap(), &hw, RingMode::SpatialOnlyRings).unwrap();
        assert_eq!(r.rings_filtered, 3456);
        assert!((r.ring_area_mm2 - 2.16).abs() < 1e-9);
        // per-channel count for the same layer
        let r = ring_counts(net.layer("conv4").unwrap(), &hw, RingMode::PerChannelRings).unwrap();
        assert_eq!(r.rings_filtered, 1_327_104);
    }

    #[test]
    fn single_ring() {
        let hw = HardwareConfig::default();
        let spec = ConvLayerSpec::new("one", 1, 1, 0, 1, 1, 1);
        for mode in RingMode::ALL {
            assert_eq!(ring_counts(&spec, &hw, mode).unwrap().rings_filtered, 1);
        }
    }

    #[test]
    fn fixed_blocks() {
        let hw = HardwareConfig::default();
        let spec = ConvLayerSpec::new("one", 1, 1, 0, 1, 1, 1);
        let r = ring_counts(&spec, &hw, RingMode::PerChannelRings).unwrap();
        assert!((r.fixed_area.dac_mm2 - 11.0 * 0.52).abs() < 1e-12);
        assert_eq!(r.fixed_area.sram_mm2, 0.443);
    }

    #[test]
    fn mode_parsing() {
        for mode in RingMode::ALL {
            assert_eq!(mode.as_str().parse::<RingMode>().unwrap(), mode);
        }
        assert!("rings".parse::<RingMode>().is_err());
    }

    fn valid_spec() -> impl Strategy<Value = ConvLayerSpec> {
        (1usize..64, 1usize..12, 0usize..4, 1usize..5, 1usize..64, 1usize..64)
            .prop_filter("kernel fits", |(n, m, p, ..)| *m <= n + 2 * p)
            .prop_map(|(n, m, p, s, c, k)| ConvLayerSpec::new("l", n, m, p, s, c, k))
    }

    proptest! {
        #[test]
        fn filtered_rings_scale_linearly(spec in valid_spec()) {
            let hw = HardwareConfig::default();
            for mode in RingMode::ALL {
                let one = ring_counts(&spec.with_kernels(1), &hw, mode).unwrap().rings_filtered;
                let all = ring_counts(&spec, &hw, mode).unwrap().rings_filtered;
                prop_assert_eq!(all, spec.kernels as u64 * one);
            }
        }

        #[test]
        fn filtering_never_adds_rings(spec in valid_spec()) {
            let hw = HardwareConfig::default();
            let n_input = spec.input_size * spec.input_size * spec.channels;
            for mode in RingMode::ALL {
                let r = ring_counts(&spec, &hw, mode).unwrap();
                prop_assert!(r.rings_filtered <= r.rings_unfiltered);
                prop_assert_eq!(r.rings_filtered == r.rings_unfiltered, n_input == 1);
            }
        }

        #[test]
        fn per_channel_savings_is_input_size(spec in valid_spec()) {
            let hw = HardwareConfig::default();
            let r = ring_counts(&spec, &hw, RingMode::PerChannelRings).unwrap();
            let n_input = (spec.input_size * spec.input_size * spec.channels) as f64;
            prop_assert_eq!(r.savings_ratio, n_input);
        }
    }
}
