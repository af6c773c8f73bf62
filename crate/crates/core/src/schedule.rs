//! Kernel-parallel, location-sequential dataflow.
//!
//! All `K` kernels sit on the same receptive field at once; the field then
//! walks the padded input in row-major order. At the first location of each
//! output row the whole `m·m·n_c` window is loaded. Every later location in
//! the row only needs the `min(s, m)` newly uncovered columns, i.e.
//! `n_c·m·min(s, m)` values. There is no reuse across rows.

use serde::Serialize;

use crate::error::InvalidLayer;
use crate::hardware::HardwareConfig;
use crate::network::ConvLayerSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KernelLocation {
    /// Row-major position on the output grid.
    pub index: usize,
    pub row: usize,
    pub col: usize,
    /// Input-space row of the window's top edge (negative inside padding).
    pub top: i64,
    /// Input-space column of the window's left edge.
    pub left: i64,
    /// Input values loaded into the buffer for this location.
    pub new_values: usize,
    pub is_row_start: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Schedule {
    pub layer: ConvLayerSpec,
    pub locations: Vec<KernelLocation>,
    /// Sum of `new_values` over all locations.
    pub total_input_loads: usize,
    /// Values resident at any one time, `m·m·n_c`.
    pub working_set_values: usize,
}

/// Values loaded at a location that continues a row.
pub fn steady_state_new_values(spec: &ConvLayerSpec) -> usize {
    spec.channels * spec.kernel_size * spec.stride.min(spec.kernel_size)
}

/// Closed form of [`Schedule::total_input_loads`] for a valid layer.
pub fn total_input_loads(spec: &ConvLayerSpec) -> Result<usize, InvalidLayer> {
    let dims = spec.dims()?;
    let o = dims.output_size;
    Ok(o * dims.kernel_values + o * (o - 1) * steady_state_new_values(spec))
}

/// Row-major sequence of kernel locations for a layer.
pub fn build_schedule(spec: &ConvLayerSpec) -> Result<Schedule, InvalidLayer> {
    let dims = spec.dims()?;
    let o = dims.output_size;
    let steady = steady_state_new_values(spec);
    let (s, p) = (spec.stride as i64, spec.padding as i64);

    let locations: Vec<_> = (0..o)
        .flat_map(|row| (0..o).map(move |col| (row, col)))
        .map(|(row, col)| {
            let is_row_start = col == 0;
            KernelLocation {
                index: row * o + col,
                row,
                col,
                top: row as i64 * s - p,
                left: col as i64 * s - p,
                new_values: if is_row_start { dims.kernel_values } else { steady },
                is_row_start,
            }
        })
        .collect();
    let total_input_loads = locations.iter().map(|l| l.new_values).sum();

    Ok(Schedule {
        layer: spec.clone(),
        locations,
        total_input_loads,
        working_set_values: dims.kernel_values,
    })
}

/// One input position covered by a receptive field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct InputCoord {
    pub row: i64,
    pub col: i64,
    pub channel: usize,
    /// Lies in the zero-padding border.
    pub padded: bool,
}

/// The `m·m·n_c` input positions under the window at `loc`.
///
/// Order is channel-major, then row-major within the window.
pub fn receptive_field_coords(loc: &KernelLocation, spec: &ConvLayerSpec) -> Vec<InputCoord> {
    let m = spec.kernel_size as i64;
    let n = spec.input_size as i64;
    let mut coords = Vec::with_capacity(spec.kernel_size * spec.kernel_size * spec.channels);
    for channel in 0..spec.channels {
        for row in loc.top..loc.top + m {
            for col in loc.left..loc.left + m {
                let padded = row < 0 || row >= n || col < 0 || col >= n;
                coords.push(InputCoord {
                    row,
                    col,
                    channel,
                    padded,
                });
            }
        }
    }
    coords
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WorkingSetFit {
    pub working_set_values: usize,
    pub capacity: usize,
    pub fits: bool,
    /// `working_set / capacity` when it does not fit, 1.0 or less otherwise.
    pub overflow_factor: f64,
}

/// Whether one receptive field fits in the input SRAM.
pub fn check_working_set(spec: &ConvLayerSpec, hw: &HardwareConfig) -> WorkingSetFit {
    let working = spec.kernel_size * spec.kernel_size * spec.channels;
    let capacity = hw.sram_value_capacity;
    WorkingSetFit {
        working_set_values: working,
        capacity,
        fits: working <= capacity,
        overflow_factor: working as f64 / capacity as f64,
    }
}
