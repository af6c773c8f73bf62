//! Convolution layer geometry and network descriptions.
//!
//! A layer is a square `n × n × n_c` input convolved with `K` square
//! `m × m × n_c` kernels at stride `s` with `p` pixels of zero padding per
//! side. On disk a network is a JSON document:
//!
//! ```json
//! { "name": "tiny", "layers": [ { "name": "c1", "n": 8, "m": 3, "p": 1, "s": 1, "n_c": 1, "k": 4 } ] }
//! ```

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, InvalidLayer, Result, Violation};

/// Geometry of one convolution layer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvLayerSpec {
    pub name: String,
    /// Input spatial extent (square face).
    #[serde(rename = "n")]
    pub input_size: usize,
    /// Kernel spatial extent (square).
    #[serde(rename = "m")]
    pub kernel_size: usize,
    /// Zero padding per side.
    #[serde(rename = "p")]
    pub padding: usize,
    #[serde(rename = "s")]
    pub stride: usize,
    /// Input channels.
    #[serde(rename = "n_c")]
    pub channels: usize,
    /// Number of kernels (output channels).
    #[serde(rename = "k")]
    pub kernels: usize,
}

/// Sizes derived from a valid [`ConvLayerSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LayerDims {
    /// `n·n·n_c`
    pub input_values: usize,
    /// `m·m·n_c`, the receptive field of one kernel.
    pub kernel_values: usize,
    /// Output extent per side, `floor((n + 2p - m) / s) + 1`.
    pub output_size: usize,
    /// `o·o·K`
    pub output_values: usize,
    /// Number of kernel locations, `o·o`.
    pub locations: usize,
    /// Whether `(n + 2p - m)` divides evenly by `s`.
    pub stride_exact: bool,
}

/// Non-fatal findings from [`ConvLayerSpec::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LayerWarning {
    /// The last `remainder` padded rows/columns are never covered by a window.
    InexactStride { layer: String, remainder: usize },
}

impl std::fmt::Display for LayerWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LayerWarning::InexactStride { layer, remainder } => write!(
                f,
                "layer `{layer}`: (n + 2p - m) is not divisible by s (remainder {remainder}); output size is floored"
            ),
        }
    }
}

impl ConvLayerSpec {
    pub fn new(
        name: impl Into<String>,
        input_size: usize,
        kernel_size: usize,
        padding: usize,
        stride: usize,
        channels: usize,
        kernels: usize,
    ) -> Self {
        Self {
            name: name.into(),
            input_size,
            kernel_size,
            padding,
            stride,
            channels,
            kernels,
        }
    }

    /// Same layer with a different kernel count.
    pub fn with_kernels(&self, kernels: usize) -> Self {
        Self {
            kernels,
            ..self.clone()
        }
    }

    pub fn padded_size(&self) -> usize {
        self.input_size + 2 * self.padding
    }

    /// Checks every geometric invariant, collecting all violations.
    ///
    /// An inexact stride is reported as a warning rather than an error.
    pub fn validate(&self) -> Result<Vec<LayerWarning>, InvalidLayer> {
        let mut violations = Vec::new();
        let mut positive = |field: &'static str, value: usize| {
            if value == 0 {
                violations.push(Violation {
                    field,
                    message: "must be at least 1".into(),
                });
            }
        };
        positive("n", self.input_size);
        positive("m", self.kernel_size);
        positive("s", self.stride);
        positive("n_c", self.channels);
        positive("k", self.kernels);
        if self.kernel_size > self.padded_size() {
            violations.push(Violation {
                field: "m",
                message: format!(
                    "kernel exceeds padded input (m={} > n+2p={})",
                    self.kernel_size,
                    self.padded_size()
                ),
            });
        }
        if !violations.is_empty() {
            return Err(InvalidLayer {
                layer: self.name.clone(),
                violations,
            });
        }

        let remainder = (self.padded_size() - self.kernel_size) % self.stride;
        let mut warnings = Vec::new();
        if remainder != 0 {
            warnings.push(LayerWarning::InexactStride {
                layer: self.name.clone(),
                remainder,
            });
        }
        Ok(warnings)
    }

    /// Derived sizes; fails if the layer is invalid.
    pub fn dims(&self) -> Result<LayerDims, InvalidLayer> {
        self.validate()?;
        Ok(self.dims_unchecked())
    }

    /// Derived sizes for a layer already known to be valid.
    pub(crate) fn dims_unchecked(&self) -> LayerDims {
        let span = self.padded_size() - self.kernel_size;
        let output_size = span / self.stride + 1;
        let locations = output_size * output_size;
        LayerDims {
            input_values: self.input_size * self.input_size * self.channels,
            kernel_values: self.kernel_size * self.kernel_size * self.channels,
            output_size,
            output_values: locations * self.kernels,
            locations,
            stride_exact: span % self.stride == 0,
        }
    }
}

/// Free-function form of [`ConvLayerSpec::validate`].
pub fn validate_layer(spec: &ConvLayerSpec) -> Result<Vec<LayerWarning>, InvalidLayer> {
    spec.validate()
}

/// Free-function form of [`ConvLayerSpec::dims`].
pub fn derive_dims(spec: &ConvLayerSpec) -> Result<LayerDims, InvalidLayer> {
    spec.dims()
}

/// An ordered list of independently analyzed convolution layers.
///
/// No shape chaining is enforced between consecutive layers, since pooling
/// and other non-convolution layers sit between them in real networks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSpec {
    pub name: String,
    pub layers: Vec<ConvLayerSpec>,
}

impl NetworkSpec {
    /// Checks the network as a whole plus every layer in it.
    pub fn validate(&self) -> Result<Vec<LayerWarning>> {
        if self.layers.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        let mut seen = HashSet::new();
        let mut warnings = Vec::new();
        for layer in &self.layers {
            if !seen.insert(layer.name.as_str()) {
                return Err(Error::DuplicateLayer(layer.name.clone()));
            }
            warnings.extend(layer.validate()?);
        }
        Ok(warnings)
    }

    pub fn layer(&self, name: &str) -> Result<&ConvLayerSpec> {
        self.layers
            .iter()
            .find(|l| l.name == name)
            .ok_or_else(|| Error::UnknownLayer(name.to_string()))
    }

    /// Parses a network document without validating it.
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Reads, parses and validates a network file. Errors name the file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let net = Self::from_json(&text).map_err(|source| Error::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        net.validate().map_err(|e| e.in_file(path))?;
        Ok(net)
    }
}

/// The five AlexNet convolution layers, ungrouped.
///
/// These dimensions are inferred rather than quoted: conv1's input and kernel
/// shapes and conv4's `n_c = 384, m = 3, s = 1` are the anchors, and conv1's
/// padding of 2 is chosen so that `o = 55`. conv2, conv4 and conv5 are treated
/// as single groups (the original two-GPU split is ignored).
pub fn alexnet_preset() -> NetworkSpec {
    NetworkSpec {
        name: "alexnet".into(),
        layers: vec![
            ConvLayerSpec::new("conv1", 224, 11, 2, 4, 3, 96),
            ConvLayerSpec::new("conv2", 27, 5, 2, 1, 96, 256),
            ConvLayerSpec::new("conv3", 13, 3, 1, 1, 256, 384),
            ConvLayerSpec::new("conv4", 13, 3, 1, 1, 384, 384),
            ConvLayerSpec::new("conv5", 13, 3, 1, 1, 384, 256),
        ],
    }
}
