//! Functional oracle, area/power proxies and benchmark aggregation.
//!
//! Latency figures are in gate-delay units throughout; area is a weighted
//! gate count (transistor-count proxy) and the power proxy is the mean
//! number of rail transitions per transaction.

use crate::adder::{build_adder, worst_case_vectors, AdderConfig, AdderError};
use crate::netlist::{GateKind, Netlist};
use crate::sim::{SimError, TransactionRunner, ViolationRecord};
use crate::stats::{mean, stddev};
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

/// Ground-truth integer addition: `(a + b + cin) mod 2^width` plus the
/// carry out of bit `width`.
pub fn oracle_add(a: u64, b: u64, cin: bool, width: u32) -> (u64, bool) {
    debug_assert!((1..=64).contains(&width));
    let total = a as u128 + b as u128 + cin as u128;
    let mask = if width == 64 {
        u64::MAX as u128
    } else {
        (1u128 << width) - 1
    };
    ((total & mask) as u64, total >> width != 0)
}

/// Per-kind area weights. Defaults are transistor-count proxies:
/// AND(n) = OR(n) = 2n, CELEM(n) = 4n, BUF = 2.
#[derive(Debug, Clone, Default)]
pub struct WeightTable {
    overrides: BTreeMap<(String, usize), u64>,
    /// When set, kinds without an explicit entry are an error.
    strict: bool,
}

impl WeightTable {
    pub fn strict(entries: BTreeMap<(String, usize), u64>) -> WeightTable {
        WeightTable {
            overrides: entries,
            strict: true,
        }
    }

    pub fn weight(&self, kind: GateKind) -> Option<u64> {
        let key = (kind.name().to_string(), kind.fan_in());
        if let Some(&w) = self.overrides.get(&key) {
            return Some(w);
        }
        if self.strict {
            return None;
        }
        Some(match kind {
            GateKind::And(n) | GateKind::Or(n) => 2 * n as u64,
            GateKind::CElem(n) => 4 * n as u64,
            GateKind::Buf => 2,
        })
    }
}

#[derive(Debug, Clone, Error)]
pub enum MetricsError {
    #[error("no area weight for {kind} fan-in {fan_in}")]
    MissingWeight { kind: &'static str, fan_in: usize },
    #[error("functional mismatch on a={a} b={b} cin={cin}: expected sum={expected_sum} cout={expected_cout}, got sum={got_sum} cout={got_cout}")]
    Functional {
        a: u64,
        b: u64,
        cin: bool,
        expected_sum: u64,
        expected_cout: bool,
        got_sum: u64,
        got_cout: bool,
    },
    #[error("protocol violations recorded on a={a} b={b} cin={cin}: {violations:?}")]
    Protocol {
        a: u64,
        b: u64,
        cin: bool,
        violations: Vec<ViolationRecord>,
    },
    #[error("latency ordering violated: {0}")]
    OrderingViolated(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Adder(#[from] AdderError),
}

/// Weighted gate count.
pub fn area_estimate(netlist: &Netlist, weights: &WeightTable) -> Result<u64, MetricsError> {
    netlist.gates().iter().try_fold(0u64, |acc, gate| {
        let w = weights
            .weight(gate.kind)
            .ok_or(MetricsError::MissingWeight {
                kind: gate.kind.name(),
                fan_in: gate.kind.fan_in(),
            })?;
        Ok(acc + w)
    })
}

/// Aggregate metrics of one architecture under one vector set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkReport {
    pub arch: String,
    pub width: u32,
    pub block_size: u32,
    pub lsb_rca_span: u32,
    pub n_vectors: u64,
    pub fwd_worst: u64,
    pub fwd_mean: f64,
    pub fwd_min: u64,
    pub rev_worst: u64,
    pub rev_mean: f64,
    pub rev_stddev: f64,
    pub cycle_worst: u64,
    pub cycle_mean: f64,
    /// Observed RTZ settling of the simulated transactions, for reference
    /// next to the handshake reverse latency above.
    pub rtz_settle_worst: u64,
    pub rtz_settle_mean: f64,
    pub transitions_mean: f64,
    pub area: u64,
    pub pass: u64,
}

/// The seeded vector stream: `ChaCha8` keyed with the 64-bit seed; each
/// vector draws `a`, `b` and the carry-in in that order, operands masked
/// to the adder width. The same seed yields the same vectors for every
/// architecture.
pub fn random_vectors(width: u32, n: u64, seed: u64) -> Vec<(u64, u64, bool)> {
    let mask = if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let a = rng.next_u64() & mask;
            let b = rng.next_u64() & mask;
            let cin = rng.next_u64() & 1 == 1;
            (a, b, cin)
        })
        .collect()
}

/// Builds the configured adder and runs the worst-case vectors plus
/// `n_vectors` seeded random transactions, checking every one against
/// [`oracle_add`].
pub fn benchmark(
    config: &AdderConfig,
    n_vectors: u64,
    seed: u64,
) -> Result<BenchmarkReport, MetricsError> {
    let netlist = build_adder(config)?;
    let runner = TransactionRunner::new(&netlist)?;
    let width = config.width;
    let mut vectors = worst_case_vectors(width);
    vectors.extend(random_vectors(width, n_vectors, seed));

    let mut fwd = Vec::with_capacity(vectors.len());
    let mut rev = Vec::with_capacity(vectors.len());
    let mut cycle = Vec::with_capacity(vectors.len());
    let mut rtz = Vec::with_capacity(vectors.len());
    let mut transitions = Vec::with_capacity(vectors.len());
    let mut pass = 0u64;
    for &(a, b, cin) in &vectors {
        let r = runner.run(a, b, cin)?;
        let (want_sum, want_cout) = oracle_add(a, b, cin, width);
        if r.sum != want_sum || r.cout != want_cout {
            return Err(MetricsError::Functional {
                a,
                b,
                cin,
                expected_sum: want_sum,
                expected_cout: want_cout,
                got_sum: r.sum,
                got_cout: r.cout,
            });
        }
        if !r.violations.is_empty() {
            return Err(MetricsError::Protocol {
                a,
                b,
                cin,
                violations: r.violations,
            });
        }
        pass += 1;
        fwd.push(r.forward_latency);
        rev.push(r.reverse_latency);
        cycle.push(r.cycle_time);
        rtz.push(r.rtz_settle);
        transitions.push(r.transitions);
    }

    Ok(BenchmarkReport {
        arch: config.architecture.name().to_string(),
        width,
        block_size: config.block_size,
        lsb_rca_span: config.lsb_rca_span,
        n_vectors: vectors.len() as u64,
        fwd_worst: fwd.iter().copied().max().unwrap_or(0),
        fwd_mean: mean(&fwd),
        fwd_min: fwd.iter().copied().min().unwrap_or(0),
        rev_worst: rev.iter().copied().max().unwrap_or(0),
        rev_mean: mean(&rev),
        rev_stddev: stddev(&rev),
        cycle_worst: cycle.iter().copied().max().unwrap_or(0),
        cycle_mean: mean(&cycle),
        rtz_settle_worst: rtz.iter().copied().max().unwrap_or(0),
        rtz_settle_mean: mean(&rtz),
        transitions_mean: mean(&transitions),
        area: area_estimate(&netlist, &WeightTable::default())?,
        pass,
    })
}

/// Asserts the headline trend: worst-case forward latency and cycle time
/// ordered `hybrid-red <= bcla-red < bcla`.
pub fn latency_ordering_check(reports: &[BenchmarkReport]) -> Result<Vec<String>, MetricsError> {
    let find = |arch: &str| {
        reports
            .iter()
            .find(|r| r.arch == arch)
            .ok_or_else(|| MetricsError::OrderingViolated(format!("missing report for {arch}")))
    };
    let reg = find("bcla")?;
    let red = find("bcla-red")?;
    let hybrid = find("hybrid-red")?;
    let mut lines = Vec::new();
    for (metric, h, r, g) in [
        (
            "forward latency",
            hybrid.fwd_worst,
            red.fwd_worst,
            reg.fwd_worst,
        ),
        (
            "cycle time",
            hybrid.cycle_worst,
            red.cycle_worst,
            reg.cycle_worst,
        ),
    ] {
        if !(h <= r && r < g) {
            return Err(MetricsError::OrderingViolated(format!(
                "worst {metric}: hybrid-red={h} bcla-red={r} bcla={g}, want hybrid-red <= bcla-red < bcla"
            )));
        }
        lines.push(format!(
            "worst {metric}: hybrid-red {h} <= bcla-red {r} < bcla {g}"
        ));
    }
    Ok(lines)
}

/// Outcome of a hybrid LSB-span sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub best_span: u32,
    pub best_fwd_worst: u64,
    /// (span, worst forward latency) for every feasible span tried.
    pub entries: Vec<(u32, u64)>,
}

/// Benchmarks each feasible `lsb_rca_span` in `spans` and picks the one
/// minimizing worst-case forward latency, ties broken toward the smaller
/// span. Returns `None` when no span in the range is feasible.
pub fn sweep_hybrid_span(
    template: &AdderConfig,
    spans: impl IntoIterator<Item = u32>,
    n_vectors: u64,
    seed: u64,
) -> Result<Option<SweepResult>, MetricsError> {
    let mut entries = Vec::new();
    let mut best: Option<(u32, u64)> = None;
    for span in spans {
        let mut cfg = template.clone();
        cfg.lsb_rca_span = span;
        if cfg.validate().is_err() {
            continue;
        }
        let report = benchmark(&cfg, n_vectors, seed)?;
        entries.push((span, report.fwd_worst));
        if best.is_none_or(|(_, fwd)| report.fwd_worst < fwd) {
            best = Some((span, report.fwd_worst));
        }
    }
    Ok(best.map(|(best_span, best_fwd_worst)| SweepResult {
        best_span,
        best_fwd_worst,
        entries,
    }))
}
