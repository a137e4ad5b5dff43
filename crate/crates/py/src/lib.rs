//! Python bindings: netlist generation, transaction simulation,
//! benchmarking and dual-rail encoding helpers.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use qdi_adder::adder::{build_adder, AdderConfig, Architecture};
use qdi_adder::encoding::{decode_word, encode_word, DualRail, WordStatus};
use qdi_adder::metrics::{benchmark as run_benchmark, sweep_hybrid_span};
use qdi_adder::netlist::export_netlist;
use qdi_adder::sim::TransactionRunner;

fn config(arch: &str, width: u32, block_size: u32, lsb_rca_span: u32) -> PyResult<AdderConfig> {
    let architecture = Architecture::from_name(arch)
        .ok_or_else(|| PyValueError::new_err(format!("unknown architecture `{arch}`")))?;
    let mut cfg = AdderConfig::new(architecture, width);
    cfg.block_size = block_size;
    cfg.lsb_rca_span = lsb_rca_span;
    cfg.validate()
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(cfg)
}

/// Names of every supported adder architecture.
#[pyfunction]
fn architectures() -> Vec<&'static str> {
    Architecture::ALL.iter().map(|a| a.name()).collect()
}

/// Generates the dual-rail netlist as a JSON document.
#[pyfunction]
#[pyo3(signature = (arch, width, block_size=4, lsb_rca_span=0))]
fn generate(arch: &str, width: u32, block_size: u32, lsb_rca_span: u32) -> PyResult<String> {
    let cfg = config(arch, width, block_size, lsb_rca_span)?;
    let netlist = build_adder(&cfg).map_err(|e| PyValueError::new_err(e.to_string()))?;
    export_netlist(&netlist).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Runs one 4-phase transaction and returns its result as a dict.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (arch, width, a, b, cin=false, block_size=4, lsb_rca_span=0))]
fn simulate(
    py: Python<'_>,
    arch: &str,
    width: u32,
    a: u64,
    b: u64,
    cin: bool,
    block_size: u32,
    lsb_rca_span: u32,
) -> PyResult<Py<PyDict>> {
    let cfg = config(arch, width, block_size, lsb_rca_span)?;
    let netlist = build_adder(&cfg).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let runner =
        TransactionRunner::new(&netlist).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let r = runner
        .run(a, b, cin)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    if !r.violations.is_empty() {
        return Err(PyValueError::new_err(format!(
            "protocol violations: {:?}",
            r.violations
        )));
    }
    let d = PyDict::new(py);
    d.set_item("sum", r.sum)?;
    d.set_item("cout", r.cout)?;
    d.set_item("forward_latency", r.forward_latency)?;
    d.set_item("reverse_latency", r.reverse_latency)?;
    d.set_item("cycle_time", r.cycle_time)?;
    d.set_item("transitions", r.transitions)?;
    Ok(d.into())
}

/// Benchmarks one architecture over random vectors; returns a dict of
/// the report fields. Latencies are gate-delay units.
#[pyfunction]
#[pyo3(signature = (arch, width, vectors=1000, seed=1, block_size=4, lsb_rca_span=0))]
fn benchmark(
    py: Python<'_>,
    arch: &str,
    width: u32,
    vectors: u64,
    seed: u64,
    block_size: u32,
    lsb_rca_span: u32,
) -> PyResult<Py<PyDict>> {
    let cfg = config(arch, width, block_size, lsb_rca_span)?;
    let report =
        run_benchmark(&cfg, vectors, seed).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let d = PyDict::new(py);
    d.set_item("arch", &report.arch)?;
    d.set_item("width", report.width)?;
    d.set_item("fwd_worst", report.fwd_worst)?;
    d.set_item("fwd_mean", report.fwd_mean)?;
    d.set_item("rev_worst", report.rev_worst)?;
    d.set_item("rev_mean", report.rev_mean)?;
    d.set_item("rev_stddev", report.rev_stddev)?;
    d.set_item("cycle_worst", report.cycle_worst)?;
    d.set_item("cycle_mean", report.cycle_mean)?;
    d.set_item("area", report.area)?;
    d.set_item("transitions_mean", report.transitions_mean)?;
    d.set_item("pass", report.pass)?;
    Ok(d.into())
}

/// (best_span, best_fwd_worst, [(span, fwd_worst), ...])
type SweepOutcome = (u32, u64, Vec<(u32, u64)>);

/// Sweeps the hybrid LSB ripple span and returns the best span with the
/// per-span worst forward latencies.
#[pyfunction]
#[pyo3(signature = (width, block_size=4, vectors=100, seed=1, redundant=true))]
fn sweep(
    width: u32,
    block_size: u32,
    vectors: u64,
    seed: u64,
    redundant: bool,
) -> PyResult<SweepOutcome> {
    let arch = if redundant {
        Architecture::HybridRed
    } else {
        Architecture::HybridReg
    };
    let mut template = AdderConfig::new(arch, width);
    template.block_size = block_size;
    let result = sweep_hybrid_span(&template, 1..width, vectors, seed)
        .map_err(|e| PyValueError::new_err(e.to_string()))?
        .ok_or_else(|| PyValueError::new_err("no feasible span"))?;
    Ok((result.best_span, result.best_fwd_worst, result.entries))
}

/// Dual-rail encodes a value: list of (rail1, rail0) pairs, LSB first.
#[pyfunction]
fn encode(value: u64, width: u32) -> PyResult<Vec<(u8, u8)>> {
    let word = encode_word(value, width).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(word
        .iter()
        .map(|r| (r.rail1 as u8, r.rail0 as u8))
        .collect())
}

/// Decodes (rail1, rail0) pairs; returns the value, or None while the
/// word is a spacer or only partially valid.
#[pyfunction]
fn decode(rails: Vec<(u8, u8)>) -> PyResult<Option<u64>> {
    let word: Vec<DualRail> = rails
        .iter()
        .map(|&(r1, r0)| DualRail {
            rail1: r1 != 0,
            rail0: r0 != 0,
        })
        .collect();
    match decode_word(&word) {
        WordStatus::Valid(v) => Ok(Some(v)),
        WordStatus::Spacer | WordStatus::Partial => Ok(None),
        WordStatus::Illegal => Err(PyValueError::new_err("illegal dual-rail code (1,1)")),
    }
}

#[pymodule]
fn qdi_adder_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(architectures, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(benchmark, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(encode, m)?)?;
    m.add_function(wrap_pyfunction!(decode, m)?)?;
    Ok(())
}
