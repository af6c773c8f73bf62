//! Cost model and functional simulator for a photonic convolution accelerator
//! built from microring weight banks.
//!
//! The accelerator filters each kernel's inputs down to its receptive field,
//! so every kernel needs only one bank of `m·m·n_c` microrings. All kernels
//! evaluate the same receptive field in parallel on separate banks while the
//! field walks the input one location per optical clock cycle.
//!
//! - [`network`]: layer geometry, derived sizes and the AlexNet preset
//! - [`schedule`]: location walk, buffer loads and SRAM fit
//! - [`optical`]: quantized weight-bank MAC and whole-layer simulation
//! - [`resources`]: microring counts and area
//! - [`timing`]: optical-core and full-system execution time
//! - [`report`]: CSV/table/JSON reports, simulation and parameter sweeps
//!
//! ```
//! use pcnna::{alexnet_preset, ring_counts, HardwareConfig, RingMode};
//!
//! let conv1 = &alexnet_preset().layers[0];
//! let rings = ring_counts(conv1, &HardwareConfig::default(), RingMode::PerChannelRings).unwrap();
//! assert_eq!(rings.rings_filtered, 34_848);
//! ```

pub mod error;
pub mod hardware;
pub mod network;
pub mod optical;
pub mod report;
pub mod resources;
pub mod schedule;
pub mod timing;

pub use error::{Error, InvalidLayer, Result, Violation};
pub use hardware::{AdcMode, HardwareConfig};
pub use network::{alexnet_preset, derive_dims, validate_layer, ConvLayerSpec, LayerDims, LayerWarning, NetworkSpec};
pub use optical::{
    quantize, quantize_weight, reference_conv, simulate_layer, weight_bank_mac, LayerSimulation, QuantSpec,
    Tensor3, Tensor4,
};
pub use resources::{ring_counts, ResourceReport, RingMode};
pub use schedule::{build_schedule, check_working_set, receptive_field_coords, KernelLocation, Schedule};
pub use timing::{
    dac_conversions_per_location, full_system_time, optical_time, speedup_vs_baselines, BaselineTable, Stage,
    TimingReport,
};
