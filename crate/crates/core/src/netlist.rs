//! Combinational gate netlist over single-bit nets.
//!
//! Nets are single-bit wires; dual-rail is a port-level grouping of two
//! nets, not a primitive value. The datapath is inverter-free: AND, OR,
//! C-element and BUF are all monotone, which makes the all-zero state a
//! fixed point of every netlist built here.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of one single-bit wire. Dense within a netlist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NetId(pub u32);

impl NetId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

pub const MIN_FAN_IN: usize = 2;
/// Widest product term supported as a single gate; wider products are
/// built as trees by the generators.
pub const MAX_FAN_IN: usize = 5;

/// Gate primitive. `And`/`Or`/`CElem` carry their fan-in (2..=5).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    And(u8),
    Or(u8),
    CElem(u8),
    Buf,
}

impl GateKind {
    pub fn fan_in(self) -> usize {
        match self {
            GateKind::And(n) | GateKind::Or(n) | GateKind::CElem(n) => n as usize,
            GateKind::Buf => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::And(_) => "AND",
            GateKind::Or(_) => "OR",
            GateKind::CElem(_) => "CELEM",
            GateKind::Buf => "BUF",
        }
    }

    fn arity_ok(self) -> bool {
        match self {
            GateKind::Buf => true,
            _ => (MIN_FAN_IN..=MAX_FAN_IN).contains(&self.fan_in()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub inputs: Vec<NetId>,
    pub output: NetId,
    pub delay: u64,
}

/// A named dual-rail wire pair at the netlist boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualRailPort {
    pub name: String,
    pub rail1: NetId,
    pub rail0: NetId,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum NetlistError {
    #[error("gate {kind:?} expects {expected} inputs, got {got}")]
    FanInMismatch {
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("net {0:?} does not exist")]
    UnknownNet(NetId),
    #[error("net {0:?} has multiple drivers")]
    MultipleDrivers(NetId),
    #[error("combinational cycle through nets {0:?}")]
    Cycle(Vec<NetId>),
    #[error("port {0:?} is malformed (rail1 == rail0 or undriven rail)")]
    BadPort(String),
    #[error("net {0:?} is neither a primary input nor driven by a gate")]
    Undriven(NetId),
    #[error("malformed netlist document: {0}")]
    BadDocument(String),
}

/// Immutable after validation; construction is single-threaded.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Netlist {
    gates: Vec<Gate>,
    net_count: u32,
    primary_inputs: Vec<DualRailPort>,
    primary_outputs: Vec<DualRailPort>,
}

impl Netlist {
    pub fn new() -> Netlist {
        Netlist::default()
    }

    pub fn net_count(&self) -> usize {
        self.net_count as usize
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn primary_inputs(&self) -> &[DualRailPort] {
        &self.primary_inputs
    }

    pub fn primary_outputs(&self) -> &[DualRailPort] {
        &self.primary_outputs
    }

    /// Allocates a fresh undriven net.
    pub fn alloc_net(&mut self) -> NetId {
        let id = NetId(self.net_count);
        self.net_count += 1;
        id
    }

    /// Declares a primary input port, allocating both rails.
    pub fn add_input_port(&mut self, name: impl Into<String>) -> DualRailPort {
        let port = DualRailPort {
            name: name.into(),
            rail1: self.alloc_net(),
            rail0: self.alloc_net(),
        };
        self.primary_inputs.push(port.clone());
        port
    }

    /// Declares an existing rail pair as a primary output.
    pub fn add_output_port(&mut self, name: impl Into<String>, rail1: NetId, rail0: NetId) {
        self.primary_outputs.push(DualRailPort {
            name: name.into(),
            rail1,
            rail0,
        });
    }

    /// Appends a gate driving a freshly allocated output net.
    pub fn add_gate(
        &mut self,
        kind: GateKind,
        inputs: &[NetId],
        delay: u64,
    ) -> Result<NetId, NetlistError> {
        if !kind.arity_ok() || inputs.len() != kind.fan_in() {
            return Err(NetlistError::FanInMismatch {
                kind,
                expected: kind.fan_in(),
                got: inputs.len(),
            });
        }
        for &n in inputs {
            if n.0 >= self.net_count {
                return Err(NetlistError::UnknownNet(n));
            }
        }
        let output = self.alloc_net();
        self.gates.push(Gate {
            kind,
            inputs: inputs.to_vec(),
            output,
            delay,
        });
        Ok(output)
    }

    /// Checks single-driver, acyclicity and port sanity.
    pub fn validate(&self) -> Result<(), NetlistError> {
        let n = self.net_count as usize;
        let mut driver: Vec<Option<usize>> = vec![None; n];
        for (gi, gate) in self.gates.iter().enumerate() {
            if gate.inputs.len() != gate.kind.fan_in() || !gate.kind.arity_ok() {
                return Err(NetlistError::FanInMismatch {
                    kind: gate.kind,
                    expected: gate.kind.fan_in(),
                    got: gate.inputs.len(),
                });
            }
            for &i in &gate.inputs {
                if i.index() >= n {
                    return Err(NetlistError::UnknownNet(i));
                }
            }
            if gate.output.index() >= n {
                return Err(NetlistError::UnknownNet(gate.output));
            }
            let slot = &mut driver[gate.output.index()];
            if slot.is_some() {
                return Err(NetlistError::MultipleDrivers(gate.output));
            }
            *slot = Some(gi);
        }
        let mut is_input_net = vec![false; n];
        for port in &self.primary_inputs {
            for rail in [port.rail1, port.rail0] {
                if rail.index() >= n {
                    return Err(NetlistError::UnknownNet(rail));
                }
                is_input_net[rail.index()] = true;
            }
            if port.rail1 == port.rail0 {
                return Err(NetlistError::BadPort(port.name.clone()));
            }
            if driver[port.rail1.index()].is_some() || driver[port.rail0.index()].is_some() {
                return Err(NetlistError::BadPort(port.name.clone()));
            }
        }
        for port in &self.primary_outputs {
            if port.rail1.index() >= n || port.rail0.index() >= n {
                return Err(NetlistError::UnknownNet(port.rail1.max(port.rail0)));
            }
            if port.rail1 == port.rail0 {
                return Err(NetlistError::BadPort(port.name.clone()));
            }
        }
        for net in 0..n {
            if !is_input_net[net] && driver[net].is_none() {
                return Err(NetlistError::Undriven(NetId(net as u32)));
            }
        }
        self.check_acyclic(&driver)
    }

    /// Kahn's algorithm over the gate graph; leftover gates form a cycle.
    fn check_acyclic(&self, driver: &[Option<usize>]) -> Result<(), NetlistError> {
        let mut indegree = vec![0usize; self.gates.len()];
        let mut fanout: Vec<Vec<usize>> = vec![Vec::new(); self.gates.len()];
        for (gi, gate) in self.gates.iter().enumerate() {
            for &i in &gate.inputs {
                if let Some(src) = driver[i.index()] {
                    indegree[gi] += 1;
                    fanout[src].push(gi);
                }
            }
        }
        let mut ready: Vec<usize> = (0..self.gates.len())
            .filter(|&g| indegree[g] == 0)
            .collect();
        let mut seen = 0usize;
        while let Some(g) = ready.pop() {
            seen += 1;
            for &next in &fanout[g] {
                indegree[next] -= 1;
                if indegree[next] == 0 {
                    ready.push(next);
                }
            }
        }
        if seen == self.gates.len() {
            Ok(())
        } else {
            let stuck: Vec<NetId> = self
                .gates
                .iter()
                .enumerate()
                .filter(|(gi, _)| indegree[*gi] > 0)
                .map(|(_, g)| g.output)
                .collect();
            Err(NetlistError::Cycle(stuck))
        }
    }

    /// Map from net to the index of its driving gate, if any.
    pub fn drivers(&self) -> Vec<Option<usize>> {
        let mut driver = vec![None; self.net_count as usize];
        for (gi, gate) in self.gates.iter().enumerate() {
            driver[gate.output.index()] = Some(gi);
        }
        driver
    }
}

// ---------------------------------------------------------------------------
// Serialization. Field order is fixed; integers are decimal; a given
// construction sequence always produces byte-identical output.

#[derive(Serialize, Deserialize)]
struct GateDoc {
    kind: String,
    fan_in: usize,
    inputs: Vec<u32>,
    output: u32,
    delay: u64,
}

#[derive(Serialize, Deserialize)]
struct PortDoc {
    name: String,
    rail1: u32,
    rail0: u32,
}

#[derive(Serialize, Deserialize)]
struct NetlistDoc {
    net_count: u32,
    gates: Vec<GateDoc>,
    inputs: Vec<PortDoc>,
    outputs: Vec<PortDoc>,
}

/// Serializes a validated netlist; gate order equals construction order.
pub fn export_netlist(netlist: &Netlist) -> Result<String, NetlistError> {
    netlist.validate()?;
    let doc = NetlistDoc {
        net_count: netlist.net_count,
        gates: netlist
            .gates
            .iter()
            .map(|g| GateDoc {
                kind: g.kind.name().to_string(),
                fan_in: g.kind.fan_in(),
                inputs: g.inputs.iter().map(|n| n.0).collect(),
                output: g.output.0,
                delay: g.delay,
            })
            .collect(),
        inputs: netlist.primary_inputs.iter().map(port_doc).collect(),
        outputs: netlist.primary_outputs.iter().map(port_doc).collect(),
    };
    let mut text =
        serde_json::to_string_pretty(&doc).map_err(|e| NetlistError::BadDocument(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn port_doc(p: &DualRailPort) -> PortDoc {
    PortDoc {
        name: p.name.clone(),
        rail1: p.rail1.0,
        rail0: p.rail0.0,
    }
}

/// Parses an exported document back into a netlist and validates it.
pub fn import_netlist(text: &str) -> Result<Netlist, NetlistError> {
    let doc: NetlistDoc =
        serde_json::from_str(text).map_err(|e| NetlistError::BadDocument(e.to_string()))?;
    let mut netlist = Netlist {
        gates: Vec::with_capacity(doc.gates.len()),
        net_count: doc.net_count,
        primary_inputs: doc.inputs.into_iter().map(doc_port).collect(),
        primary_outputs: doc.outputs.into_iter().map(doc_port).collect(),
    };
    for g in doc.gates {
        let kind = match (g.kind.as_str(), g.fan_in) {
            ("AND", n @ 2..=5) => GateKind::And(n as u8),
            ("OR", n @ 2..=5) => GateKind::Or(n as u8),
            ("CELEM", n @ 2..=5) => GateKind::CElem(n as u8),
            ("BUF", 1) => GateKind::Buf,
            (kind, fan_in) => {
                return Err(NetlistError::BadDocument(format!(
                    "unknown gate kind {kind} with fan_in {fan_in}"
                )))
            }
        };
        netlist.gates.push(Gate {
            kind,
            inputs: g.inputs.into_iter().map(NetId).collect(),
            output: NetId(g.output),
            delay: g.delay,
        });
    }
    netlist.validate()?;
    Ok(netlist)
}

fn doc_port(p: PortDoc) -> DualRailPort {
    DualRailPort {
        name: p.name,
        rail1: NetId(p.rail1),
        rail0: NetId(p.rail0),
    }
}
