//! Deterministic event-driven simulation under the 4-phase RTZ handshake.
//!
//! Transport-delay semantics: when a net changes, every fanout gate is
//! re-evaluated and its new output scheduled `delay` units later; an event
//! whose value equals the net's current value at firing time is discarded.
//! Events fire in (time, net, insertion) order, so identical inputs always
//! produce identical traces.

use crate::adder::worst_case_vectors;
use crate::encoding::{decode_word, DualRail, WordStatus};
use crate::netlist::{DualRailPort, GateKind, NetId, Netlist};
use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use thiserror::Error;

/// Runaway-oscillation guard, per phase.
pub const DEFAULT_EVENT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Valid data being applied; every net may only rise.
    Valid,
    /// Return to zero; every net may only fall.
    Rtz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    IllegalDualRail,
    NonMonotonePhase,
    IncompleteOutput,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolationRecord {
    pub time: u64,
    pub net: NetId,
    pub port: Option<String>,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SimError {
    #[error("event budget exceeded after {0} events (oscillation?)")]
    EventBudgetExceeded(u64),
    #[error("output {port} never became {expected} ({got})")]
    OutputIncomplete {
        port: String,
        expected: &'static str,
        got: String,
    },
    #[error("input port {0} not found")]
    NoSuchPort(String),
}

/// Pure gate function. The C-element keeps its previous output while its
/// inputs disagree.
pub fn evaluate_gate(kind: GateKind, inputs: &[bool], previous: bool) -> bool {
    match kind {
        GateKind::And(_) => inputs.iter().all(|&v| v),
        GateKind::Or(_) => inputs.iter().any(|&v| v),
        GateKind::CElem(_) => {
            if inputs.iter().all(|&v| v) {
                true
            } else if inputs.iter().all(|&v| !v) {
                false
            } else {
                previous
            }
        }
        GateKind::Buf => inputs[0],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct EventKey {
    time: u64,
    net: u32,
    seq: u64,
}

/// One simulation state over an immutable netlist. Not shareable mid-run;
/// run concurrent transactions with one simulator each.
pub struct Simulator<'a> {
    netlist: &'a Netlist,
    values: Vec<bool>,
    last_change: Vec<u64>,
    fanout: Vec<Vec<usize>>,
    queue: BinaryHeap<Reverse<(EventKey, bool)>>,
    seq: u64,
    time: u64,
    transitions: u64,
    phase: Phase,
    violations: Vec<ViolationRecord>,
    /// port name indexed by rail net, for violation reports
    port_of_net: Vec<Option<(usize, bool)>>,
    event_budget: u64,
}

impl<'a> Simulator<'a> {
    pub fn new(netlist: &'a Netlist) -> Simulator<'a> {
        let n = netlist.net_count();
        let mut fanout: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (gi, gate) in netlist.gates().iter().enumerate() {
            for &i in &gate.inputs {
                fanout[i.index()].push(gi);
            }
        }
        let mut port_of_net = vec![None; n];
        let ports: Vec<&DualRailPort> = netlist
            .primary_inputs()
            .iter()
            .chain(netlist.primary_outputs())
            .collect();
        for (pi, port) in ports.iter().enumerate() {
            port_of_net[port.rail1.index()] = Some((pi, true));
            port_of_net[port.rail0.index()] = Some((pi, false));
        }
        Simulator {
            netlist,
            values: vec![false; n],
            last_change: vec![0; n],
            fanout,
            queue: BinaryHeap::new(),
            seq: 0,
            time: 0,
            transitions: 0,
            phase: Phase::Valid,
            violations: Vec::new(),
            port_of_net,
            event_budget: DEFAULT_EVENT_BUDGET,
        }
    }

    pub fn set_event_budget(&mut self, budget: u64) {
        self.event_budget = budget;
    }

    pub fn set_phase(&mut self, phase: Phase) {
        self.phase = phase;
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn transitions(&self) -> u64 {
        self.transitions
    }

    pub fn value(&self, net: NetId) -> bool {
        self.values[net.index()]
    }

    pub fn last_change(&self, net: NetId) -> u64 {
        self.last_change[net.index()]
    }

    pub fn violations(&self) -> &[ViolationRecord] {
        &self.violations
    }

    pub fn port_value(&self, port: &DualRailPort) -> DualRail {
        DualRail {
            rail1: self.value(port.rail1),
            rail0: self.value(port.rail0),
        }
    }

    /// Schedules an input change at the current time.
    pub fn drive(&mut self, net: NetId, value: bool) {
        self.schedule(self.time, net, value);
    }

    fn schedule(&mut self, time: u64, net: NetId, value: bool) {
        let key = EventKey {
            time,
            net: net.0,
            seq: self.seq,
        };
        self.seq += 1;
        self.queue.push(Reverse((key, value)));
    }

    /// Processes events until the queue drains. Returns the time of the
    /// last real transition relative to the phase start.
    pub fn run_until_quiescent(&mut self) -> Result<u64, SimError> {
        let start = self.time;
        let mut last_transition = start;
        let mut processed: u64 = 0;
        while let Some(Reverse((key, value))) = self.queue.pop() {
            processed += 1;
            if processed > self.event_budget {
                return Err(SimError::EventBudgetExceeded(processed - 1));
            }
            self.time = key.time;
            let net = NetId(key.net);
            if self.values[net.index()] == value {
                continue; // no transition
            }
            self.values[net.index()] = value;
            self.last_change[net.index()] = key.time;
            self.transitions += 1;
            last_transition = key.time;
            self.screen_transition(net, value);
            for gi in self.fanout[net.index()].clone() {
                let gate = &self.netlist.gates()[gi];
                let inputs: Vec<bool> = gate
                    .inputs
                    .iter()
                    .map(|&n| self.values[n.index()])
                    .collect();
                let prev = self.values[gate.output.index()];
                let new = evaluate_gate(gate.kind, &inputs, prev);
                self.schedule(key.time + gate.delay, gate.output, new);
            }
        }
        Ok(last_transition - start)
    }

    /// QDI monitors: both rails of a port high, or a transition against
    /// the phase direction. Violations are recorded, never thrown.
    fn screen_transition(&mut self, net: NetId, value: bool) {
        let against_phase = match self.phase {
            Phase::Valid => !value,
            Phase::Rtz => value,
        };
        if against_phase {
            self.violations.push(ViolationRecord {
                time: self.time,
                net,
                port: self.port_name(net),
                kind: ViolationKind::NonMonotonePhase,
            });
        }
        if value {
            if let Some((pi, is_rail1)) = self.port_of_net[net.index()] {
                let port = self.port_by_index(pi);
                let partner = if is_rail1 { port.rail0 } else { port.rail1 };
                if self.values[partner.index()] {
                    self.violations.push(ViolationRecord {
                        time: self.time,
                        net,
                        port: Some(port.name.clone()),
                        kind: ViolationKind::IllegalDualRail,
                    });
                }
            }
        }
    }

    fn port_by_index(&self, pi: usize) -> &'a DualRailPort {
        let n_in = self.netlist.primary_inputs().len();
        if pi < n_in {
            &self.netlist.primary_inputs()[pi]
        } else {
            &self.netlist.primary_outputs()[pi - n_in]
        }
    }

    fn port_name(&self, net: NetId) -> Option<String> {
        self.port_of_net[net.index()].map(|(pi, _)| self.port_by_index(pi).name.clone())
    }

    /// Advances the clock without processing events.
    pub fn advance_time(&mut self, delta: u64) {
        self.time += delta;
    }

    /// DSOP check: in the current state, no OR gate may see more than one
    /// high input.
    pub fn dsop_ok(&self) -> bool {
        self.netlist.gates().iter().all(|g| {
            !matches!(g.kind, GateKind::Or(_))
                || g.inputs.iter().filter(|&&n| self.values[n.index()]).count() <= 1
        })
    }
}

// ---------------------------------------------------------------------------
// Adder-level transactions

/// Named dual-rail input/output groups of a generated adder netlist.
pub struct AdderPorts<'a> {
    pub a: Vec<&'a DualRailPort>,
    pub b: Vec<&'a DualRailPort>,
    pub cin: &'a DualRailPort,
    pub sums: Vec<&'a DualRailPort>,
    pub cout: &'a DualRailPort,
}

impl<'a> AdderPorts<'a> {
    pub fn of(netlist: &'a Netlist) -> Option<AdderPorts<'a>> {
        let find = |name: &str| {
            netlist
                .primary_inputs()
                .iter()
                .chain(netlist.primary_outputs())
                .find(|p| p.name == name)
        };
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut sums = Vec::new();
        for i in 0.. {
            match (
                find(&format!("a{i}")),
                find(&format!("b{i}")),
                find(&format!("sum{i}")),
            ) {
                (Some(x), Some(y), Some(s)) => {
                    a.push(x);
                    b.push(y);
                    sums.push(s);
                }
                (None, None, None) => break,
                _ => return None,
            }
        }
        if a.is_empty() {
            return None;
        }
        Some(AdderPorts {
            a,
            b,
            cin: find("cin")?,
            sums,
            cout: find("cout")?,
        })
    }

    pub fn width(&self) -> u32 {
        self.a.len() as u32
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransactionResult {
    pub sum: u64,
    pub cout: bool,
    /// Time for the valid phase to settle, data-dependent.
    pub forward_latency: u64,
    /// RTZ time the handshake must allow before the next valid phase: the
    /// worst case over the carry-chain extreme vectors of the time for all
    /// outputs to return to spacer. A constant per netlist.
    pub reverse_latency: u64,
    pub cycle_time: u64,
    pub transitions: u64,
    /// Observed settling time of this transaction's RTZ phase (internal
    /// nets included), for comparison against the worst case.
    pub rtz_settle: u64,
    pub violations: Vec<ViolationRecord>,
}

struct RawTransaction {
    sum: u64,
    cout: bool,
    forward_latency: u64,
    /// max time for the output rails to reach spacer in the RTZ phase
    output_reset: u64,
    rtz_settle: u64,
    transitions: u64,
    violations: Vec<ViolationRecord>,
}

fn drive_word(sim: &mut Simulator, ports: &[&DualRailPort], value: u64, valid: bool) {
    for (i, port) in ports.iter().enumerate() {
        let dr = if valid {
            DualRail::valid(value >> i & 1 == 1)
        } else {
            DualRail::SPACER
        };
        sim.drive(port.rail1, dr.rail1);
        sim.drive(port.rail0, dr.rail0);
    }
}

fn run_raw(netlist: &Netlist, a: u64, b: u64, cin: bool) -> Result<RawTransaction, SimError> {
    let ports = AdderPorts::of(netlist).ok_or_else(|| SimError::NoSuchPort("a0".into()))?;
    let mut sim = Simulator::new(netlist);

    sim.set_phase(Phase::Valid);
    drive_word(&mut sim, &ports.a, a, true);
    drive_word(&mut sim, &ports.b, b, true);
    let cin_dr = DualRail::valid(cin);
    sim.drive(ports.cin.rail1, cin_dr.rail1);
    sim.drive(ports.cin.rail0, cin_dr.rail0);
    let forward_latency = sim.run_until_quiescent()?;

    let outputs: Vec<&DualRailPort> = ports.sums.iter().copied().chain([ports.cout]).collect();
    for port in &outputs {
        if sim.port_value(port).bit().is_none() {
            return Err(SimError::OutputIncomplete {
                port: port.name.clone(),
                expected: "valid",
                got: format!("{:?}", sim.port_value(port)),
            });
        }
    }
    let sum_rails: Vec<DualRail> = ports.sums.iter().map(|p| sim.port_value(p)).collect();
    let sum = match decode_word(&sum_rails) {
        WordStatus::Valid(v) => v,
        _ => unreachable!("all sum pairs checked valid"),
    };
    let cout = sim.port_value(ports.cout).bit().unwrap();

    sim.set_phase(Phase::Rtz);
    let rtz_start = sim.time();
    drive_word(&mut sim, &ports.a, 0, false);
    drive_word(&mut sim, &ports.b, 0, false);
    sim.drive(ports.cin.rail1, false);
    sim.drive(ports.cin.rail0, false);
    let rtz_settle = sim.run_until_quiescent()?;

    let mut output_reset = 0;
    for port in &outputs {
        if !sim.port_value(port).is_spacer() {
            return Err(SimError::OutputIncomplete {
                port: port.name.clone(),
                expected: "spacer",
                got: format!("{:?}", sim.port_value(port)),
            });
        }
        for rail in [port.rail1, port.rail0] {
            let t = sim.last_change(rail);
            if t > rtz_start {
                output_reset = output_reset.max(t - rtz_start);
            }
        }
    }

    Ok(RawTransaction {
        sum,
        cout,
        forward_latency,
        output_reset,
        rtz_settle,
        transitions: sim.transitions(),
        violations: sim.violations().to_vec(),
    })
}

/// Runs 4-phase transactions against one adder netlist. Construction
/// measures the netlist's reverse latency once, over the worst-case
/// carry-chain vectors.
pub struct TransactionRunner<'a> {
    netlist: &'a Netlist,
    width: u32,
    reverse_latency: u64,
}

impl<'a> TransactionRunner<'a> {
    pub fn new(netlist: &'a Netlist) -> Result<TransactionRunner<'a>, SimError> {
        let ports = AdderPorts::of(netlist).ok_or_else(|| SimError::NoSuchPort("a0".into()))?;
        let width = ports.width();
        let mut reverse_latency = 0;
        for (a, b, cin) in worst_case_vectors(width) {
            let raw = run_raw(netlist, a, b, cin)?;
            reverse_latency = reverse_latency.max(raw.output_reset);
        }
        Ok(TransactionRunner {
            netlist,
            width,
            reverse_latency,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// The netlist's worst-case RTZ output-reset time.
    pub fn reverse_latency(&self) -> u64 {
        self.reverse_latency
    }

    /// One full valid/RTZ transaction: apply the operands, wait for every
    /// output pair to become valid, return the bus to spacer, wait for
    /// every output pair to reset.
    pub fn run(&self, a: u64, b: u64, cin: bool) -> Result<TransactionResult, SimError> {
        let raw = run_raw(self.netlist, a, b, cin)?;
        Ok(TransactionResult {
            sum: raw.sum,
            cout: raw.cout,
            forward_latency: raw.forward_latency,
            reverse_latency: self.reverse_latency,
            cycle_time: raw.forward_latency + self.reverse_latency,
            transitions: raw.transitions,
            rtz_settle: raw.rtz_settle,
            violations: raw.violations,
        })
    }

    /// This transaction's observed output reset time, for tests that
    /// check the worst-case bound.
    pub fn observed_output_reset(&self, a: u64, b: u64, cin: bool) -> Result<u64, SimError> {
        Ok(run_raw(self.netlist, a, b, cin)?.output_reset)
    }
}

/// Applies every operand except `withhold` (kept at spacer) and reports
/// which outputs became valid anyway, with their time of validity.
pub fn run_staggered_probe(
    netlist: &Netlist,
    a: u64,
    b: u64,
    cin: bool,
    withhold: &str,
) -> Result<BTreeMap<String, Option<u64>>, SimError> {
    if !netlist.primary_inputs().iter().any(|p| p.name == withhold) {
        return Err(SimError::NoSuchPort(withhold.to_string()));
    }
    let mut sim = Simulator::new(netlist);
    sim.set_phase(Phase::Valid);
    for port in netlist.primary_inputs() {
        if port.name == withhold {
            continue;
        }
        let bit = if port.name == "cin" {
            cin
        } else if let Some(i) = port
            .name
            .strip_prefix('a')
            .and_then(|s| s.parse::<u32>().ok())
        {
            a >> i & 1 == 1
        } else if let Some(i) = port
            .name
            .strip_prefix('b')
            .and_then(|s| s.parse::<u32>().ok())
        {
            b >> i & 1 == 1
        } else {
            return Err(SimError::NoSuchPort(port.name.clone()));
        };
        let dr = DualRail::valid(bit);
        sim.drive(port.rail1, dr.rail1);
        sim.drive(port.rail0, dr.rail0);
    }
    sim.run_until_quiescent()?;
    let mut report = BTreeMap::new();
    for port in netlist.primary_outputs() {
        let value = sim.port_value(port);
        let at = value.bit().map(|bit| {
            let active = if bit { port.rail1 } else { port.rail0 };
            sim.last_change(active)
        });
        report.insert(port.name.clone(), at);
    }
    Ok(report)
}
