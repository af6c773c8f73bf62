//! Report generation behind the `pcnna` command line.
//!
//! Three runs are supported: `report` (resources and timing per layer),
//! `simulate` (one layer through the quantized datapath, checked against the
//! exact convolution) and `sweep` (one hardware or layer parameter varied over
//! a range). Output is CSV, an aligned text table, or JSON ("structured
//! text"). CSV stores raw seconds; tables auto-scale to ns/µs/ms.
//!
//! Output is a pure function of the inputs. Layers may be evaluated on
//! several threads but rows are always emitted in layer order.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hardware::HardwareConfig;
use crate::network::{alexnet_preset, ConvLayerSpec, LayerDims, NetworkSpec};
use crate::optical::{deviation, reference_conv, simulate_layer, QuantSpec, Tensor3, Tensor4};
use crate::resources::{ring_counts, ResourceReport, RingMode};
use crate::schedule::{check_working_set, WorkingSetFit};
use crate::timing::{attach_speedups, full_system_time, BaselineTable, TimingReport};

/// Column order of `report --format csv`.
pub const REPORT_COLUMNS: &[&str] = &[
    "layer",
    "n",
    "m",
    "p",
    "s",
    "n_c",
    "k",
    "n_input",
    "n_kernel",
    "n_locs",
    "mode",
    "rings_unfiltered",
    "rings_filtered",
    "savings_ratio",
    "ring_area_mm2",
    "rings_per_channel",
    "rings_spatial_only",
    "sram_fits",
    "t_optical_s",
    "t_full_s",
    "t_full_sequential_s",
    "t_weight_load_s",
    "bottleneck",
    "speedup_full_eyeriss",
    "speedup_optical_eyeriss",
    "speedup_full_yodann",
    "speedup_optical_yodann",
];

/// Column order of `sweep` output.
pub const SWEEP_COLUMNS: &[&str] = &[
    "layer",
    "axis",
    "value",
    "rings_filtered",
    "ring_area_mm2",
    "t_optical_s",
    "t_full_s",
    "t_full_sequential_s",
    "bottleneck",
    "output_error_bound",
];

/// Annotation printed next to the baseline latencies.
pub const BASELINE_SOURCE: &str = "published comparison data";

/// Process exit status of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    IoFailure = 1,
    ConfigError = 2,
    ToleranceFailure = 3,
}

impl ExitStatus {
    pub fn for_error(err: &Error) -> Self {
        if err.is_io() {
            ExitStatus::IoFailure
        } else {
            ExitStatus::ConfigError
        }
    }

    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Table,
    StructuredText,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "table" => Ok(Format::Table),
            "structured-text" | "json" => Ok(Format::StructuredText),
            other => Err(format!(
                "unknown format `{other}` (expected csv, table or structured-text)"
            )),
        }
    }
}

/// Where the network comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetworkSource {
    Builtin(String),
    File(PathBuf),
}

impl NetworkSource {
    /// `alexnet` names the built-in preset; anything else is a path.
    pub fn parse(arg: &str) -> Self {
        if arg.eq_ignore_ascii_case("alexnet") {
            NetworkSource::Builtin("alexnet".into())
        } else {
            NetworkSource::File(arg.into())
        }
    }

    pub fn load(&self) -> Result<NetworkSpec> {
        match self {
            NetworkSource::Builtin(_) => Ok(alexnet_preset()),
            NetworkSource::File(path) => NetworkSpec::load(path),
        }
    }
}

/// Options shared by every command.
#[derive(Debug, Clone)]
pub struct RunRequest {
    pub network: NetworkSource,
    pub hardware_path: Option<PathBuf>,
    pub mode: RingMode,
    pub format: Format,
    /// `None` writes to stdout.
    pub output_path: Option<PathBuf>,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl RunRequest {
    pub fn new(network: NetworkSource) -> Self {
        Self {
            network,
            hardware_path: None,
            mode: RingMode::PerChannelRings,
            format: Format::Csv,
            output_path: None,
            threads: None,
        }
    }

    pub fn hardware(&self) -> Result<HardwareConfig> {
        match &self.hardware_path {
            Some(path) => HardwareConfig::load(path),
            None => Ok(HardwareConfig::default()),
        }
    }

    fn in_pool<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        match self.threads {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .expect("thread pool")
                .install(f),
            None => f(),
        }
    }
}

/// Result of one command: rendered output, warnings and exit status.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub status: ExitStatus,
    pub output: String,
    pub warnings: Vec<String>,
}

impl RunOutcome {
    /// Writes the output to `path`, or returns it for stdout.
    pub fn emit(&self, path: Option<&Path>) -> Result<Option<&str>> {
        match path {
            Some(path) => {
                if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                    std::fs::create_dir_all(parent).map_err(|source| Error::Io {
                        path: parent.to_path_buf(),
                        source,
                    })?;
                }
                std::fs::write(path, &self.output).map_err(|source| Error::Io {
                    path: path.to_path_buf(),
                    source,
                })?;
                Ok(None)
            }
            None => Ok(Some(&self.output)),
        }
    }
}

/// Everything computed for one layer.
#[derive(Debug, Clone, Serialize)]
pub struct LayerAnalysis {
    pub spec: ConvLayerSpec,
    pub dims: LayerDims,
    pub per_channel: ResourceReport,
    pub spatial_only: ResourceReport,
    pub working_set: WorkingSetFit,
    pub timing: TimingReport,
}

impl LayerAnalysis {
    pub fn resources(&self, mode: RingMode) -> &ResourceReport {
        match mode {
            RingMode::PerChannelRings => &self.per_channel,
            RingMode::SpatialOnlyRings => &self.spatial_only,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BaselineSection {
    pub source: &'static str,
    pub table: BaselineTable,
}

#[derive(Debug, Clone, Serialize)]
pub struct NetworkReport {
    pub network: String,
    pub mode: RingMode,
    pub hardware: HardwareConfig,
    pub layers: Vec<LayerAnalysis>,
    /// Present when the layers are the AlexNet preset.
    pub baselines: Option<BaselineSection>,
    pub warnings: Vec<String>,
}

pub fn analyze_layer(spec: &ConvLayerSpec, hw: &HardwareConfig) -> Result<LayerAnalysis> {
    Ok(LayerAnalysis {
        spec: spec.clone(),
        dims: spec.dims()?,
        per_channel: ring_counts(spec, hw, RingMode::PerChannelRings)?,
        spatial_only: ring_counts(spec, hw, RingMode::SpatialOnlyRings)?,
        working_set: check_working_set(spec, hw),
        timing: full_system_time(spec, hw)?,
    })
}

/// Analyzes every layer in parallel, keeping layer order.
pub fn analyze_network(net: &NetworkSpec, hw: &HardwareConfig, mode: RingMode) -> Result<NetworkReport> {
    net.validate()?;
    hw.validate()?;
    let mut layers = net
        .layers
        .par_iter()
        .map(|l| analyze_layer(l, hw))
        .collect::<Result<Vec<_>>>()?;

    let preset = alexnet_preset();
    let same_geometry = |a: &ConvLayerSpec, b: &ConvLayerSpec| {
        (a.input_size, a.kernel_size, a.padding, a.stride, a.channels, a.kernels)
            == (b.input_size, b.kernel_size, b.padding, b.stride, b.channels, b.kernels)
    };
    let is_alexnet = net.layers.len() == preset.layers.len()
        && net.layers.iter().zip(&preset.layers).all(|(a, b)| same_geometry(a, b));
    let baselines = if is_alexnet {
        let table = BaselineTable::alexnet();
        let mut timings: Vec<_> = layers.iter().map(|l| l.timing.clone()).collect();
        attach_speedups(&mut timings, &table)?;
        for (layer, timing) in layers.iter_mut().zip(timings) {
            layer.timing = timing;
        }
        Some(BaselineSection {
            source: BASELINE_SOURCE,
            table,
        })
    } else {
        None
    };

    let warnings = layers.iter().flat_map(|l| l.timing.warnings.clone()).collect();
    Ok(NetworkReport {
        network: net.name.clone(),
        mode,
        hardware: hw.clone(),
        layers,
        baselines,
        warnings,
    })
}

#[derive(Debug, Clone)]
enum Cell {
    Int(u64),
    Fixed(f64, usize),
    Seconds(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Fixed(v, prec) => format!("{v:.prec$}"),
            Cell::Seconds(v) => format!("{v:.6e}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn human(&self) -> String {
        match self {
            Cell::Seconds(v) => format_seconds(*v),
            Cell::Empty => "-".into(),
            other => other.csv(),
        }
    }
}

/// Engineering notation with ns/µs/ms/s auto-scaling.
pub fn format_seconds(t: f64) -> String {
    let a = t.abs();
    if a == 0.0 {
        "0 s".into()
    } else if a < 1e-6 {
        format!("{:.1} ns", t * 1e9)
    } else if a < 1e-3 {
        format!("{:.2} µs", t * 1e6)
    } else if a < 1.0 {
        format!("{:.2} ms", t * 1e3)
    } else {
        format!("{t:.3} s")
    }
}

fn render_csv(columns: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut out = columns.join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(Cell::csv).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

fn render_table(columns: &[&str], rows: &[Vec<Cell>]) -> String {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(Cell::human).collect())
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| {
            body.iter()
                .map(|r| r[i].chars().count())
                .chain([c.len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}", w = *w))
            .collect();
        out.push_str(padded.join("  ").trim_end());
        out.push('\n');
    };
    line(columns.to_vec(), &mut out);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    line(rule.iter().map(String::as_str).collect(), &mut out);
    for r in &body {
        line(r.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn report_rows(report: &NetworkReport) -> Vec<Vec<Cell>> {
    report
        .layers
        .iter()
        .map(|l| {
            let s = &l.spec;
            let r = l.resources(report.mode);
            let t = &l.timing;
            let speedup = |name: &str| -> [Cell; 2] {
                match t.speedups.get(name) {
                    Some(sp) => [Cell::Fixed(sp.full, 1), Cell::Fixed(sp.optical, 1)],
                    None => [Cell::Empty, Cell::Empty],
                }
            };
            let [ef, eo] = speedup("Eyeriss");
            let [yf, yo] = speedup("YodaNN");
            vec![
                Cell::Text(s.name.clone()),
                Cell::Int(s.input_size as u64),
                Cell::Int(s.kernel_size as u64),
                Cell::Int(s.padding as u64),
                Cell::Int(s.stride as u64),
                Cell::Int(s.channels as u64),
                Cell::Int(s.kernels as u64),
                Cell::Int(l.dims.input_values as u64),
                Cell::Int(l.dims.kernel_values as u64),
                Cell::Int(l.dims.locations as u64),
                Cell::Text(report.mode.to_string()),
                Cell::Int(r.rings_unfiltered),
                Cell::Int(r.rings_filtered),
                Cell::Fixed(r.savings_ratio, 1),
                Cell::Fixed(r.ring_area_mm2, 4),
                Cell::Int(l.per_channel.rings_filtered),
                Cell::Int(l.spatial_only.rings_filtered),
                Cell::Text(l.working_set.fits.to_string()),
                Cell::Seconds(t.t_optical),
                Cell::Seconds(t.t_full),
                Cell::Seconds(t.t_full_sequential),
                Cell::Seconds(t.t_weight_load),
                Cell::Text(t.bottleneck.as_str().into()),
                ef,
                eo,
                yf,
                yo,
            ]
        })
        .collect()
}

/// Renders a computed report in the requested format.
pub fn render_report(report: &NetworkReport, format: Format) -> String {
    match format {
        Format::StructuredText => to_json(report),
        Format::Csv => render_csv(REPORT_COLUMNS, &report_rows(report)),
        Format::Table => {
            let mut out = format!("network: {}  mode: {}\n\n", report.network, report.mode);
            out.push_str(&render_table(REPORT_COLUMNS, &report_rows(report)));
            if let Some(b) = &report.baselines {
                let _ = writeln!(out, "\nbaseline latencies (source: {})", b.source);
                let mut cols = vec!["baseline"];
                cols.extend(b.table.layers.iter().map(String::as_str));
                let rows: Vec<Vec<Cell>> = b
                    .table
                    .baselines
                    .iter()
                    .map(|bl| {
                        std::iter::once(Cell::Text(bl.name.clone()))
                            .chain(bl.latencies.iter().map(|&v| Cell::Seconds(v)))
                            .collect()
                    })
                    .collect();
                out.push_str(&render_table(&cols, &rows));
            }
            out.push_str("\nexcluded from timing: dram transfers\n");
            out
        }
    }
}

/// `report`: resources and timing for every layer.
pub fn run_report(req: &RunRequest) -> Result<RunOutcome> {
    let net = req.network.load()?;
    let hw = req.hardware()?;
    let report = req.in_pool(|| analyze_network(&net, &hw, req.mode))?;
    Ok(RunOutcome {
        status: ExitStatus::Success,
        output: render_report(&report, req.format),
        warnings: report.warnings.clone(),
    })
}

/// Options for [`run_simulate`].
#[derive(Debug, Clone, Default)]
pub struct SimulateArgs {
    /// Layer to simulate; defaults to the first.
    pub layer: Option<String>,
    pub input: Option<PathBuf>,
    pub kernels: Option<PathBuf>,
    /// Converter resolution; defaults to the hardware config.
    pub bits: Option<u32>,
    /// Seed for tensors not given as files.
    pub seed: u64,
    /// DAC input range; defaults to a symmetric range covering the input.
    pub input_range: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationSummary {
    pub layer: String,
    pub bits: u32,
    pub weight_scale: f64,
    pub input_range: (f64, f64),
    pub output_range: (f64, f64),
    pub error_bound: f64,
    pub max_abs_deviation: f64,
    pub mean_abs_deviation: f64,
    pub within_bound: bool,
    pub simulated: Tensor3,
    pub reference: Tensor3,
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| Error::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// Simulates one layer and compares it with the exact convolution.
pub fn simulate_summary(
    spec: &ConvLayerSpec,
    fm: &Tensor3,
    kernels: &Tensor4,
    q: &QuantSpec,
) -> Result<SimulationSummary> {
    let bits = q.bits;
    let sim = simulate_layer(fm, kernels, spec, q)?;
    let reference = reference_conv(fm, kernels, spec)?;
    let (max, mean) = deviation(&sim.output, &reference);
    Ok(SimulationSummary {
        layer: spec.name.clone(),
        bits,
        weight_scale: sim.weight_scale,
        input_range: q.input_range,
        output_range: sim.output_range,
        error_bound: sim.error_bound,
        max_abs_deviation: max,
        mean_abs_deviation: mean,
        within_bound: max <= sim.error_bound,
        simulated: sim.output,
        reference,
    })
}

/// `simulate`: exit 3 when the deviation exceeds the quantization bound.
pub fn run_simulate(req: &RunRequest, args: &SimulateArgs) -> Result<RunOutcome> {
    let net = req.network.load()?;
    let hw = req.hardware()?;
    let spec = match &args.layer {
        Some(name) => net.layer(name)?.clone(),
        None => net.layers[0].clone(),
    };
    let warnings = spec.validate()?.iter().map(ToString::to_string).collect();
    let (n, m, c, k) = (spec.input_size, spec.kernel_size, spec.channels, spec.kernels);

    let fm = match &args.input {
        Some(path) => load_json::<Tensor3>(path)?,
        None => Tensor3::random([n, n, c], (-1.0, 1.0), args.seed),
    };
    let kernels = match &args.kernels {
        Some(path) => load_json::<Tensor4>(path)?,
        None => Tensor4::random([k, m, m, c], (-1.0, 1.0), args.seed.wrapping_add(1)),
    };
    let bits = args.bits.unwrap_or(hw.bits);
    let q = match args.input_range {
        Some(range) => QuantSpec::new(bits, range)?,
        None => QuantSpec::covering(bits, &fm)?,
    };
    let summary = req.in_pool(|| simulate_summary(&spec, &fm, &kernels, &q))?;

    let output = match req.format {
        Format::StructuredText => to_json(&summary),
        Format::Csv | Format::Table => {
            let columns = [
                "layer",
                "bits",
                "weight_scale",
                "error_bound",
                "max_abs_deviation",
                "mean_abs_deviation",
                "within_bound",
            ];
            let row = vec![
                Cell::Text(summary.layer.clone()),
                Cell::Int(bits as u64),
                Cell::Fixed(summary.weight_scale, 6),
                Cell::Fixed(summary.error_bound, 12),
                Cell::Fixed(summary.max_abs_deviation, 12),
                Cell::Fixed(summary.mean_abs_deviation, 12),
                Cell::Text(summary.within_bound.to_string()),
            ];
            if req.format == Format::Csv {
                render_csv(&columns, &[row])
            } else {
                render_table(&columns, &[row])
            }
        }
    };
    Ok(RunOutcome {
        status: if summary.within_bound {
            ExitStatus::Success
        } else {
            ExitStatus::ToleranceFailure
        },
        output,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Kernels,
    InputDacs,
    DacRate,
    Bits,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::Kernels => "k",
            SweepAxis::InputDacs => "n_input_dac",
            SweepAxis::DacRate => "f_dac",
            SweepAxis::Bits => "bits",
        }
    }

    fn integral(self) -> bool {
        self != SweepAxis::DacRate
    }
}

impl FromStr for SweepAxis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "k" | "K" => Ok(SweepAxis::Kernels),
            "n_input_dac" => Ok(SweepAxis::InputDacs),
            "f_dac" => Ok(SweepAxis::DacRate),
            "bits" => Ok(SweepAxis::Bits),
            other => Err(Error::UnknownSweepAxis(other.to_string())),
        }
    }
}

/// Options for [`run_sweep`].
#[derive(Debug, Clone)]
pub struct SweepArgs {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    /// Layer to sweep; defaults to the first.
    pub layer: Option<String>,
}

/// `from, from + step, ...` up to and including `to`.
pub fn sweep_range(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(from.is_finite() && to.is_finite() && step.is_finite()) || step <= 0.0 || to < from {
        return Err(Error::InvalidSweep(format!(
            "need finite from <= to and step > 0 (from={from}, to={to}, step={step})"
        )));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| from + i as f64 * step).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub layer: String,
    pub axis: &'static str,
    pub value: f64,
    pub rings_filtered: u64,
    pub ring_area_mm2: f64,
    pub t_optical: f64,
    pub t_full: f64,
    pub t_full_sequential: f64,
    pub bottleneck: &'static str,
    /// Per-output bound for unit-range inputs and weights.
    pub output_error_bound: f64,
}

/// Evaluates one row per swept value.
pub fn sweep(
    spec: &ConvLayerSpec,
    hw: &HardwareConfig,
    mode: RingMode,
    args: &SweepArgs,
) -> Result<Vec<SweepRow>> {
    if args.values.is_empty() {
        return Err(Error::InvalidSweep("no values to sweep".into()));
    }
    args.values
        .par_iter()
        .map(|&value| {
            if args.axis.integral() && (value.fract() != 0.0 || value < 1.0) {
                return Err(Error::InvalidSweep(format!(
                    "{} takes positive integers, got {value}",
                    args.axis.as_str()
                )));
            }
            let mut spec = spec.clone();
            let mut hw = hw.clone();
            match args.axis {
                SweepAxis::Kernels => spec.kernels = value as usize,
                SweepAxis::InputDacs => hw.n_input_dac = value as usize,
                SweepAxis::DacRate => hw.f_dac = value,
                SweepAxis::Bits => hw.bits = value as u32,
            }
            hw.validate()?;
            let rings = ring_counts(&spec, &hw, mode)?;
            let timing = full_system_time(&spec, &hw)?;
            let q = QuantSpec::new(hw.bits, (-1.0, 1.0))?;
            Ok(SweepRow {
                layer: spec.name.clone(),
                axis: args.axis.as_str(),
                value,
                rings_filtered: rings.rings_filtered,
                ring_area_mm2: rings.ring_area_mm2,
                t_optical: timing.t_optical,
                t_full: timing.t_full,
                t_full_sequential: timing.t_full_sequential,
                bottleneck: timing.bottleneck.as_str(),
                output_error_bound: q.error_bound(spec.dims_unchecked().kernel_values, 1.0),
            })
        })
        .collect()
}

/// `sweep`: CSV (or table/JSON) with one row per swept value.
pub fn run_sweep(req: &RunRequest, args: &SweepArgs) -> Result<RunOutcome> {
    let net = req.network.load()?;
    let hw = req.hardware()?;
    let spec = match &args.layer {
        Some(name) => net.layer(name)?.clone(),
        None => net.layers[0].clone(),
    };
    let rows = req.in_pool(|| sweep(&spec, &hw, req.mode, args))?;
    let output = match req.format {
        Format::StructuredText => to_json(&rows),
        Format::Csv | Format::Table => {
            let cells: Vec<Vec<Cell>> = rows
                .iter()
                .map(|r| {
                    vec![
                        Cell::Text(r.layer.clone()),
                        Cell::Text(r.axis.into()),
                        if args.axis.integral() {
                            Cell::Int(r.value as u64)
                        } else {
                            Cell::Text(format!("{:.6e}", r.value))
                        },
                        Cell::Int(r.rings_filtered),
                        Cell::Fixed(r.ring_area_mm2, 4),
                        Cell::Seconds(r.t_optical),
                        Cell::Seconds(r.t_full),
                        Cell::Seconds(r.t_full_sequential),
                        Cell::Text(r.bottleneck.into()),
                        Cell::Text(format!("{:.6e}", r.output_error_bound)),
                    ]
                })
                .collect();
            if req.format == Format::Csv {
                render_csv(SWEEP_COLUMNS, &cells)
            } else {
                render_table(SWEEP_COLUMNS, &cells)
            }
        }
    };
    Ok(RunOutcome {
        status: ExitStatus::Success,
        output,
        warnings: spec.validate()?.iter().map(ToString::to_string).collect(),
    })
}
