//! Hardware constants of the accelerator.
//!
//! Loaded from a JSON document whose keys are exactly the field names below;
//! omitted keys take the defaults, unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How output photocurrents are digitized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdcMode {
    /// One ADC per kernel output.
    PerKernel,
    /// A fixed pool of ADCs shared by all kernel outputs.
    Fixed(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HardwareConfig {
    /// Optical core clock (Hz).
    pub f_clock: f64,
    pub n_input_dac: usize,
    pub n_weight_dac: usize,
    /// DAC sample rate (Sa/s).
    pub f_dac: f64,
    /// ADC sample rate (Sa/s).
    pub f_adc: f64,
    pub adc_mode: AdcMode,
    /// Input buffer capacity in values.
    pub sram_value_capacity: usize,
    /// SRAM access time (s).
    pub t_sram_access: f64,
    /// Microring pitch (m), rings packed on a square grid.
    pub ring_pitch: f64,
    pub dac_area_mm2: f64,
    pub sram_area_mm2: f64,
    /// DAC/ADC resolution.
    pub bits: u32,
}

impl Default for HardwareConfig {
    fn default() -> Self {
        Self {
            f_clock: 5e9,
            n_input_dac: 10,
            n_weight_dac: 1,
            f_dac: 6e9,
            f_adc: 2.8e9,
            adc_mode: AdcMode::PerKernel,
            sram_value_capacity: 8000,
            t_sram_access: 7e-9,
            ring_pitch: 25e-6,
            dac_area_mm2: 0.52,
            sram_area_mm2: 0.443,
            bits: 16,
        }
    }
}

impl HardwareConfig {
    pub fn validate(&self) -> Result<()> {
        fn bad(field: &'static str, message: &str) -> Error {
            Error::InvalidHardware {
                field,
                message: message.to_string(),
            }
        }
        let rates = [
            ("f_clock", self.f_clock),
            ("f_dac", self.f_dac),
            ("f_adc", self.f_adc),
            ("ring_pitch", self.ring_pitch),
        ];
        for (field, v) in rates {
            if !(v.is_finite() && v > 0.0) {
                return Err(bad(field, "must be finite and positive"));
            }
        }
        let non_negative = [
            ("t_sram_access", self.t_sram_access),
            ("dac_area_mm2", self.dac_area_mm2),
            ("sram_area_mm2", self.sram_area_mm2),
        ];
        for (field, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return Err(bad(field, "must be finite and non-negative"));
            }
        }
        let counts = [
            ("n_input_dac", self.n_input_dac),
            ("n_weight_dac", self.n_weight_dac),
            ("sram_value_capacity", self.sram_value_capacity),
        ];
        for (field, v) in counts {
            if v == 0 {
                return Err(bad(field, "must be at least 1"));
            }
        }
        if self.adc_mode == AdcMode::Fixed(0) {
            return Err(bad("adc_mode", "fixed ADC count must be at least 1"));
        }
        if !(1..=crate::optical::MAX_BITS).contains(&self.bits) {
            return Err(bad("bits", "must be between 1 and 32"));
        }
        Ok(())
    }

    /// Number of ADCs digitizing the outputs of a layer with `kernels` kernels.
    pub fn adc_count(&self, kernels: usize) -> usize {
        match self.adc_mode {
            AdcMode::PerKernel => kernels,
            AdcMode::Fixed(n) => n,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let hw = Self::from_json(&text).map_err(|source| Error::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        hw.validate().map_err(|e| e.in_file(path))?;
        Ok(hw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        HardwareConfig::default().validate().unwrap();
    }

    #[test]
    fn omitted_fields_take_defaults() {
        let hw = HardwareConfig::from_json(r#"{"n_input_dac": 20}"#).unwrap();
        assert_eq!(hw.n_input_dac, 20);
        assert_eq!(hw.f_dac, 6e9);
        assert_eq!(hw.adc_mode, AdcMode::PerKernel);
    }

    #[test]
    fn adc_mode_encoding() {
        let hw = HardwareConfig::from_json(r#"{"adc_mode": {"fixed": 4}}"#).unwrap();
        assert_eq!(hw.adc_mode, AdcMode::Fixed(4));
        assert_eq!(hw.adc_count(384), 4);
        let hw = HardwareConfig::from_json(r#"{"adc_mode": "per-kernel"}"#).unwrap();
        assert_eq!(hw.adc_count(384), 384);
    }

    #[test]
    fn unknown_field_rejected() {
        let err = HardwareConfig::from_json(r#"{"f_dram": 1.0}"#).unwrap_err();
        assert!(err.to_string().contains("f_dram"));
    }

    #[test]
    fn invalid_values_name_the_field() {
        let hw = HardwareConfig {
            f_dac: 0.0,
            ..Default::default()
        };
        let err = hw.validate().unwrap_err();
        assert!(err.to_string().contains("f_dac"));
        let hw = HardwareConfig {
            adc_mode: AdcMode::Fixed(0),
            ..Default::default()
        };
        assert!(hw.validate().unwrap_err().to_string().contains("adc_mode"));
    }
}
