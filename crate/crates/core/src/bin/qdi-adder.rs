//! Command-line front end: netlist generation, single transactions,
//! benchmark tables and hybrid-span sweeps.
//!
//! Exit codes: 1 I/O failure, 2 invalid configuration, 3 protocol
//! violation during simulation, 4 functional mismatch in a benchmark.

use clap::{Args, Parser, Subcommand};
use qdi_adder::adder::{build_adder, AdderConfig, Architecture};
use qdi_adder::delay::DelayTable;
use qdi_adder::metrics::{
    area_estimate, benchmark, latency_ordering_check, sweep_hybrid_span, MetricsError, WeightTable,
};
use qdi_adder::netlist::export_netlist;
use qdi_adder::report::{render, ReportFormat};
use qdi_adder::sim::TransactionRunner;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_IO: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_PROTOCOL: u8 = 3;
const EXIT_FUNCTIONAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "qdi-adder",
    about = "QDI dual-rail adder generator and simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// rca, bcla, bcla-red, hybrid or hybrid-red
    #[arg(long, default_value = "bcla-red")]
    arch: String,
    #[arg(long, default_value_t = 32)]
    width: u32,
    #[arg(long, default_value_t = 4)]
    block_size: u32,
    /// Bits handled by the LSB ripple adder (hybrid architectures)
    #[arg(long, default_value_t = 0)]
    lsb_rca_span: u32,
    /// File of `KIND fan_in delay` lines overriding the default delays
    #[arg(long)]
    delay_table: Option<PathBuf>,
}

impl ConfigArgs {
    /// Builds the config without validating; callers that fill in a swept
    /// span validate afterwards.
    fn build_raw(&self) -> Result<AdderConfig, String> {
        let architecture = Architecture::from_name(&self.arch)
            .ok_or_else(|| format!("unknown architecture `{}`", self.arch))?;
        let mut config = AdderConfig::new(architecture, self.width);
        config.block_size = self.block_size;
        config.lsb_rca_span = self.lsb_rca_span;
        if let Some(path) = &self.delay_table {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            config.delays = DelayTable::parse(&text).map_err(|e| e.to_string())?;
        }
        Ok(config)
    }

    fn build(&self) -> Result<AdderConfig, String> {
        let config = self.build_raw()?;
        config.validate().map_err(|e| e.to_string())?;
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a netlist document
    Gen {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate one 4-phase transaction
    Sim {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(short)]
        a: u64,
        #[arg(short)]
        b: u64,
        /// Carry-in bit (0 or 1)
        #[arg(long, default_value_t = 0)]
        cin: u8,
    },
    /// Benchmark one or more architectures and print a comparison table
    Bench {
        #[command(flatten)]
        config: ConfigArgs,
        /// Architectures to compare (defaults to all five)
        #[arg(long = "archs", value_delimiter = ',')]
        archs: Option<Vec<String>>,
        #[arg(long, default_value_t = 1000)]
        vectors: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// csv, md or structured-text
        #[arg(long, default_value = "md")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find the hybrid LSB-RCA span minimizing worst forward latency
    Sweep {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value_t = 1)]
        span_min: u32,
        #[arg(long)]
        span_max: Option<u32>,
        #[arg(long, default_value_t = 100)]
        vectors: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn write_out(out: Option<&PathBuf>, text: &str) -> Result<(), ExitCode> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", path.display());
            ExitCode::from(EXIT_IO)
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn config_err(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_CONFIG)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}

fn run(cli: Cli) -> Result<(), ExitCode> {
    match cli.command {
        Command::Gen { config, out } => {
            let cfg = config.build().map_err(config_err)?;
            let netlist = build_adder(&cfg).map_err(config_err)?;
            let text = export_netlist(&netlist).map_err(config_err)?;
            write_out(out.as_ref(), &text)?;
            let area = area_estimate(&netlist, &WeightTable::default()).map_err(config_err)?;
            eprintln!(
                "{} width {}: {} gates, area proxy {}",
                cfg.architecture.name(),
                cfg.width,
                netlist.gates().len(),
                area
            );
            Ok(())
        }
        Command::Sim { config, a, b, cin } => {
            let cfg = config.build().map_err(config_err)?;
            let width = cfg.width;
            let max = if width == 64 {
                u64::MAX
            } else {
                (1u64 << width) - 1
            };
            if a > max || b > max || cin > 1 {
                return Err(config_err(format!(
                    "operands must fit {width} bits, cin 0/1"
                )));
            }
            let netlist = build_adder(&cfg).map_err(config_err)?;
            let runner = TransactionRunner::new(&netlist).map_err(|e| {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_PROTOCOL)
            })?;
            let r = runner.run(a, b, cin == 1).map_err(|e| {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_PROTOCOL)
            })?;
            if !r.violations.is_empty() {
                eprintln!("protocol violations:");
                for v in &r.violations {
                    eprintln!(
                        "  t={} net={:?} port={:?} {:?}",
                        v.time, v.net, v.port, v.kind
                    );
                }
                return Err(ExitCode::from(EXIT_PROTOCOL));
            }
            println!("sum={} cout={}", r.sum, r.cout as u8);
            println!(
                "forward_latency={} reverse_latency={} cycle_time={} transitions={} (gate-delay units)",
                r.forward_latency, r.reverse_latency, r.cycle_time, r.transitions
            );
            Ok(())
        }
        Command::Bench {
            config,
            archs,
            vectors,
            seed,
            format,
            out,
        } => {
            let format = ReportFormat::from_name(&format)
                .ok_or_else(|| config_err(format!("unknown format `{format}`")))?;
            let names: Vec<String> = archs.unwrap_or_else(|| {
                Architecture::ALL
                    .iter()
                    .map(|a| a.name().to_string())
                    .collect()
            });
            let mut reports = Vec::new();
            for name in &names {
                let args = ConfigArgs {
                    arch: name.clone(),
                    width: config.width,
                    block_size: config.block_size,
                    lsb_rca_span: config.lsb_rca_span,
                    delay_table: config.delay_table.clone(),
                };
                let mut cfg = args.build_raw().map_err(config_err)?;
                if cfg.architecture.is_hybrid() && cfg.lsb_rca_span == 0 {
                    // default hybrid span: pick it by sweeping
                    let sweep = sweep_hybrid_span(&cfg, 1..cfg.width, 0, seed)
                        .map_err(bench_err)?
                        .ok_or_else(|| config_err("no feasible hybrid span"))?;
                    cfg.lsb_rca_span = sweep.best_span;
                }
                cfg.validate().map_err(config_err)?;
                let report = benchmark(&cfg, vectors, seed).map_err(bench_err)?;
                reports.push(report);
            }
            let mut text = render(&reports, format);
            let comparable = ["bcla", "bcla-red", "hybrid-red"]
                .iter()
                .all(|a| reports.iter().any(|r| r.arch == *a));
            // ordering comments would corrupt the JSON rendering
            if comparable && format != ReportFormat::StructuredText {
                match latency_ordering_check(&reports) {
                    Ok(lines) => {
                        for line in lines {
                            text.push_str(&format!("# ordering PASS: {line}\n"));
                        }
                    }
                    Err(MetricsError::OrderingViolated(detail)) => {
                        text.push_str(&format!("# ordering FAIL: {detail}\n"));
                    }
                    Err(e) => return Err(bench_err(e)),
                }
            }
            write_out(out.as_ref(), &text)
        }
        Command::Sweep {
            config,
            span_min,
            span_max,
            vectors,
            seed,
        } => {
            let mut args = config;
            if !Architecture::from_name(&args.arch).is_some_and(|a| a.is_hybrid()) {
                args.arch = "hybrid-red".to_string();
            }
            // span comes from the sweep; the template only carries the rest
            let template = args.build_raw().map_err(config_err)?;
            let span_max = span_max.unwrap_or(template.width.saturating_sub(1));
            let sweep = sweep_hybrid_span(&template, span_min..=span_max, vectors, seed)
                .map_err(bench_err)?;
            match sweep {
                Some(result) => {
                    for (span, fwd) in &result.entries {
                        println!("span {span}: worst forward latency {fwd}");
                    }
                    println!(
                        "best span {} (worst forward latency {})",
                        result.best_span, result.best_fwd_worst
                    );
                    Ok(())
                }
                None => Err(config_err(format!(
                    "no feasible span in {span_min}..={span_max}"
                ))),
            }
        }
    }
}

fn bench_err(e: MetricsError) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        MetricsError::Functional { .. } => ExitCode::from(EXIT_FUNCTIONAL),
        MetricsError::Protocol { .. } | MetricsError::Sim(_) => ExitCode::from(EXIT_PROTOCOL),
        _ => ExitCode::from(EXIT_CONFIG),
    }
}
