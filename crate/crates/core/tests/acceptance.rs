//! Acceptance gate. Each criterion prints exactly one PASS/FAIL line;
//! the test fails if any criterion fails.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion lines.

use qdi_adder::adder::{build_adder, AdderConfig, Architecture};
use qdi_adder::metrics::{benchmark, oracle_add, random_vectors, sweep_hybrid_span};
use qdi_adder::report::{render, ReportFormat};
use qdi_adder::sim::{run_staggered_probe, TransactionRunner};

const SEED: u64 = 20260824;

fn config(arch: Architecture, width: u32, span: u32) -> AdderConfig {
    let mut cfg = AdderConfig::new(arch, width);
    cfg.lsb_rca_span = span;
    cfg
}

/// Width-4 hybrids need 2-bit blocks; everything else uses the defaults.
fn narrow_config(arch: Architecture) -> AdderConfig {
    let mut cfg = AdderConfig::new(arch, 4);
    if arch.is_hybrid() {
        cfg.block_size = 2;
        cfg.lsb_rca_span = 2;
    }
    cfg
}

struct Outcome {
    label: &'static str,
    result: Result<String, String>,
}

fn check(label: &'static str, result: Result<String, String>) -> Outcome {
    Outcome { label, result }
}

/// Criteria 1 and 2 share the simulation work: functional correctness and
/// protocol cleanliness over exhaustive width-4 plus random width-32 sets.
fn criteria_1_2() -> (Result<String, String>, Result<String, String>) {
    let mut checked: u64 = 0;
    let mut mismatches: u64 = 0;
    let mut violations: u64 = 0;

    let mut run_set = |cfg: &AdderConfig, vectors: &[(u64, u64, bool)]| {
        let netlist = build_adder(cfg).expect("build");
        let runner = TransactionRunner::new(&netlist).expect("runner");
        for &(a, b, cin) in vectors {
            let r = runner.run(a, b, cin).expect("transaction");
            checked += 1;
            if (r.sum, r.cout) != oracle_add(a, b, cin, cfg.width) {
                mismatches += 1;
            }
            violations += r.violations.len() as u64;
        }
    };

    let mut narrow = Vec::new();
    for a in 0..16u64 {
        for b in 0..16u64 {
            for cin in [false, true] {
                narrow.push((a, b, cin));
            }
        }
    }
    let wide = random_vectors(32, 1000, SEED);
    for arch in Architecture::ALL {
        run_set(&narrow_config(arch), &narrow);
        let span = if arch.is_hybrid() { 4 } else { 0 };
        run_set(&config(arch, 32, span), &wide);
    }

    let functional = if mismatches == 0 {
        Ok(format!("{checked} transactions, all sums match the oracle"))
    } else {
        Err(format!(
            "{mismatches} of {checked} transactions disagree with the oracle"
        ))
    };
    let protocol = if violations == 0 {
        Ok(format!(
            "{checked} transactions, zero QDI protocol violations"
        ))
    } else {
        Err(format!("{violations} protocol violations recorded"))
    };
    (functional, protocol)
}

/// Redundant-carry designs must report exactly zero reverse-latency
/// spread at width 32.
fn criterion_3() -> Result<String, String> {
    let mut notes = Vec::new();
    for arch in [Architecture::BclaRed, Architecture::HybridRed] {
        let span = if arch.is_hybrid() { 4 } else { 0 };
        let report = benchmark(&config(arch, 32, span), 200, SEED).map_err(|e| e.to_string())?;
        if report.rev_stddev != 0.0 {
            return Err(format!(
                "{} rev_stddev = {}",
                arch.name(),
                report.rev_stddev
            ));
        }
        notes.push(format!("{} rev_stddev = 0.0", arch.name()));
    }
    Ok(notes.join(", "))
}

/// Regular lookahead reverse latency grows with width and always exceeds
/// the redundant design's.
fn criterion_4() -> Result<String, String> {
    let rev = |arch: Architecture, width: u32| -> Result<u64, String> {
        let netlist = build_adder(&config(arch, width, 0)).map_err(|e| e.to_string())?;
        let runner = TransactionRunner::new(&netlist).map_err(|e| e.to_string())?;
        Ok(runner
            .run(0, 0, false)
            .map_err(|e| e.to_string())?
            .reverse_latency)
    };
    let widths = [8u32, 16, 32, 64];
    let mut reg = Vec::new();
    let mut red = Vec::new();
    for &w in &widths {
        reg.push(rev(Architecture::BclaReg, w)?);
        red.push(rev(Architecture::BclaRed, w)?);
    }
    for i in 1..widths.len() {
        if reg[i] <= reg[i - 1] {
            return Err(format!("regular reverse latency not increasing: {reg:?}"));
        }
    }
    for i in 0..widths.len() {
        if reg[i] <= red[i] {
            return Err(format!(
                "width {}: regular {} not above redundant {}",
                widths[i], reg[i], red[i]
            ));
        }
    }
    Ok(format!(
        "regular rev {reg:?} increasing and above redundant rev {red:?}"
    ))
}

/// Latency ordering at width 32: hybrid-red <= bcla-red < bcla for both
/// worst forward latency and worst cycle time, hybrid span chosen by sweep.
fn criterion_5() -> Result<String, String> {
    let template = config(Architecture::HybridRed, 32, 0);
    let sweep = sweep_hybrid_span(&template, 1..32, 0, SEED)
        .map_err(|e| e.to_string())?
        .ok_or("no feasible hybrid span")?;
    let hybrid = benchmark(
        &config(Architecture::HybridRed, 32, sweep.best_span),
        200,
        SEED,
    )
    .map_err(|e| e.to_string())?;
    let red =
        benchmark(&config(Architecture::BclaRed, 32, 0), 200, SEED).map_err(|e| e.to_string())?;
    let reg =
        benchmark(&config(Architecture::BclaReg, 32, 0), 200, SEED).map_err(|e| e.to_string())?;
    let fwd_ok = hybrid.fwd_worst <= red.fwd_worst && red.fwd_worst < reg.fwd_worst;
    let cycle_ok = hybrid.cycle_worst <= red.cycle_worst && red.cycle_worst < reg.cycle_worst;
    let detail = format!(
        "span {}: fwd {} <= {} < {}, cycle {} <= {} < {}",
        sweep.best_span,
        hybrid.fwd_worst,
        red.fwd_worst,
        reg.fwd_worst,
        hybrid.cycle_worst,
        red.cycle_worst,
        reg.cycle_worst
    );
    if fwd_ok && cycle_ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Early output: an all-generate operand pair validates cout before cin
/// arrives; an all-propagate pair validates nothing.
fn criterion_6() -> Result<String, String> {
    for arch in [Architecture::BclaReg, Architecture::BclaRed] {
        let netlist = build_adder(&config(arch, 32, 0)).map_err(|e| e.to_string())?;
        let generate =
            run_staggered_probe(&netlist, u32::MAX as u64, u32::MAX as u64, false, "cin")
                .map_err(|e| e.to_string())?;
        if generate["cout"].is_none() {
            return Err(format!("{}: all-generate cout waited for cin", arch.name()));
        }
        let propagate = run_staggered_probe(&netlist, u32::MAX as u64, 0, false, "cin")
            .map_err(|e| e.to_string())?;
        if propagate.values().any(|v| v.is_some()) {
            return Err(format!(
                "{}: all-propagate output valid without cin",
                arch.name()
            ));
        }
    }
    Ok("all-generate emits cout early, all-propagate withholds all outputs".into())
}

/// Data-dependent forward latency: the mean over random operands must sit
/// strictly below the worst case for every architecture.
fn criterion_7() -> Result<String, String> {
    let mut notes = Vec::new();
    for arch in Architecture::ALL {
        let span = if arch.is_hybrid() { 4 } else { 0 };
        let report = benchmark(&config(arch, 32, span), 500, SEED).map_err(|e| e.to_string())?;
        if report.fwd_mean >= report.fwd_worst as f64 {
            return Err(format!(
                "{}: mean {} not below worst {}",
                arch.name(),
                report.fwd_mean,
                report.fwd_worst
            ));
        }
        notes.push(format!(
            "{} {:.1}<{}",
            arch.name(),
            report.fwd_mean,
            report.fwd_worst
        ));
    }
    Ok(format!(
        "mean < worst forward latency: {}",
        notes.join(", ")
    ))
}

/// Determinism: repeating a seeded benchmark must reproduce the report
/// byte for byte.
fn criterion_8() -> Result<String, String> {
    let render_once = || -> Result<String, String> {
        let mut reports = Vec::new();
        for arch in Architecture::ALL {
            let span = if arch.is_hybrid() { 4 } else { 0 };
            reports.push(benchmark(&config(arch, 32, span), 100, SEED).map_err(|e| e.to_string())?);
        }
        Ok(render(&reports, ReportFormat::Csv))
    };
    let first = render_once()?;
    let second = render_once()?;
    if first == second {
        Ok(format!(
            "repeated seeded benchmark reports identical ({} bytes)",
            first.len()
        ))
    } else {
        Err("repeated benchmark reports differ".into())
    }
}

#[test]
fn acceptance() {
    let (c1, c2) = criteria_1_2();
    let outcomes = vec![
        check("1 functional correctness", c1),
        check("2 protocol cleanliness", c2),
        check("3 constant redundant reverse latency", criterion_3()),
        check("4 reverse latency scaling", criterion_4()),
        check("5 forward latency ordering", criterion_5()),
        check("6 early output", criterion_6()),
        check("7 data-dependent latency", criterion_7()),
        check("8 determinism", criterion_8()),
    ];
    let mut failed = false;
    for o in &outcomes {
        match &o.result {
            Ok(detail) => println!("PASS criterion {} — {detail}", o.label),
            Err(detail) => {
                failed = true;
                println!("FAIL criterion {} — {detail}", o.label);
            }
        }
    }
    assert!(!failed, "one or more acceptance criteria failed");
}
