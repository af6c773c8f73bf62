use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pcnna::report::{
    run_report, run_simulate, run_sweep, sweep_range, ExitStatus, Format, NetworkSource, RunOutcome, RunRequest,
    SimulateArgs, SweepArgs, SweepAxis, REPORT_COLUMNS, SWEEP_COLUMNS,
};
use pcnna::{Error, RingMode};

#[derive(Parser)]
#[command(name = "pcnna", version, about = "Photonic convolution accelerator cost model and simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Network description file, or `alexnet` for the built-in preset.
    #[arg(long, default_value = "alexnet")]
    network: String,
    /// Hardware config file; omitted fields use the defaults.
    #[arg(long)]
    hardware: Option<PathBuf>,
    /// Ring-count mode.
    #[arg(long, default_value = "per-channel-rings")]
    mode: RingMode,
    /// csv, table or structured-text.
    #[arg(long)]
    format: Option<Format>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (output does not depend on this).
    #[arg(long)]
    threads: Option<usize>,
}

impl Common {
    fn request(&self, default_format: Format) -> RunRequest {
        RunRequest {
            network: NetworkSource::parse(&self.network),
            hardware_path: self.hardware.clone(),
            mode: self.mode,
            format: self.format.unwrap_or(default_format),
            output_path: self.out.clone(),
            threads: self.threads,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Per-layer ring counts, area, timing and speedups.
    #[command(after_help = report_help())]
    Report {
        #[command(flatten)]
        common: Common,
    },
    /// Run one layer through the quantized optical datapath and compare with
    /// the exact convolution. Exits 3 if the deviation exceeds the bound.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Layer name; defaults to the first layer.
        #[arg(long)]
        layer: Option<String>,
        /// Input feature map tensor file (random in [-1, 1) when omitted).
        #[arg(long)]
        input: Option<PathBuf>,
        /// Kernel tensor file (random in [-1, 1) when omitted).
        #[arg(long)]
        kernels: Option<PathBuf>,
        /// DAC/ADC resolution; defaults to the hardware config.
        #[arg(long)]
        bits: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// DAC input range as `lo,hi`; defaults to cover the input tensor.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
        input_range: Option<(f64, f64)>,
    },
    /// Vary one parameter over a range on a single layer.
    #[command(after_help = sweep_help())]
    Sweep {
        #[command(flatten)]
        common: Common,
        /// k, n_input_dac, f_dac or bits.
        #[arg(long = "sweep")]
        axis: String,
        #[arg(long, required_unless_present = "values")]
        from: Option<f64>,
        #[arg(long, required_unless_present = "values")]
        to: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        /// Explicit comma-separated values instead of a range.
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["from", "to"])]
        values: Option<Vec<f64>>,
        /// Layer name; defaults to the first layer.
        #[arg(long)]
        layer: Option<String>,
    },
}

fn report_help() -> String {
    format!("CSV columns: {}\n\nExit codes: 0 success, 1 I/O failure, 2 config error", REPORT_COLUMNS.join(","))
}

fn sweep_help() -> String {
    format!("CSV columns: {}", SWEEP_COLUMNS.join(","))
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected `lo,hi`")?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
    Ok((parse(lo)?, parse(hi)?))
}

fn run(command: Command) -> Result<(RunOutcome, RunRequest), Error> {
    match command {
        Command::Report { common } => {
            let req = common.request(Format::Csv);
            Ok((run_report(&req)?, req))
        }
        Command::Simulate {
            common,
            layer,
            input,
            kernels,
            bits,
            seed,
            input_range,
        } => {
            let req = common.request(Format::StructuredText);
            let args = SimulateArgs {
                layer,
                input,
                kernels,
                bits,
                seed,
                input_range,
            };
            Ok((run_simulate(&req, &args)?, req))
        }
        Command::Sweep {
            common,
            axis,
            from,
            to,
            step,
            values,
            layer,
        } => {
            let req = common.request(Format::Csv);
            let axis: SweepAxis = axis.parse()?;
            let values = match values {
                Some(v) => v,
                None => sweep_range(from.unwrap_or_default(), to.unwrap_or_default(), step)?,
            };
            let args = SweepArgs { axis, values, layer };
            Ok((run_sweep(&req, &args)?, req))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (outcome, req) = match run(cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(ExitStatus::for_error(&e).code() as u8);
        }
    };
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    match outcome.emit(req.output_path.as_deref()) {
        Ok(Some(text)) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(ExitStatus::for_error(&e).code() as u8);
        }
    }
    if outcome.status == ExitStatus::ToleranceFailure {
        eprintln!("error: simulated output deviates from the reference beyond the quantization bound");
    }
    ExitCode::from(outcome.status.code() as u8)
}
