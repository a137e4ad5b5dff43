//! Gate-level netlist generation and event-driven simulation of
//! quasi-delay-insensitive dual-rail adders.
//!
//! The crate builds early-output block carry lookahead adders (with
//! regular and redundant lookahead carries), ripple carry adders and
//! BCLA/RCA hybrids as inverter-free dual-rail netlists, simulates them
//! under the 4-phase return-to-zero handshake with QDI protocol monitors,
//! and benchmarks forward latency, reverse latency and cycle time in
//! gate-delay units.

pub mod adder;
pub mod delay;
pub mod encoding;
pub mod metrics;
pub mod netlist;
pub mod report;
pub mod sim;
pub mod stats;

pub use adder::{build_adder, worst_case_vectors, AdderConfig, Architecture};
pub use delay::DelayTable;
pub use encoding::{decode_word, encode_word, DualRail, WordStatus};
pub use metrics::{benchmark, latency_ordering_check, oracle_add, BenchmarkReport};
pub use netlist::{export_netlist, import_netlist, GateKind, NetId, Netlist};
pub use sim::{
    evaluate_gate, run_staggered_probe, Simulator, TransactionResult, TransactionRunner,
};
