//! Generators for dual-rail early-output adders.
//!
//! Building blocks: the full adder (FA), the sum logic (SL, an FA without
//! the carry output), and the block carry lookahead generator (BCLG) with
//! regular and optionally redundant carry outputs. Architectures: plain
//! ripple carry (RCA), block carry lookahead (BCLA) where carries ripple
//! within blocks and a single lookahead carry links successive blocks, and
//! hybrids with an RCA in the least significant stages.
//!
//! All carry and sum logic is in disjoint sum-of-products form: the
//! product terms feeding any OR are mutually orthogonal, so every net
//! rises at most once per valid phase.

use crate::delay::DelayTable;
use crate::netlist::{GateKind, NetId, Netlist, NetlistError, MAX_FAN_IN};
use thiserror::Error;

/// An unnamed dual-rail net pair inside a netlist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RailPair {
    pub rail1: NetId,
    pub rail0: NetId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Architecture {
    Rca,
    BclaReg,
    BclaRed,
    HybridReg,
    HybridRed,
}

impl Architecture {
    pub const ALL: [Architecture; 5] = [
        Architecture::Rca,
        Architecture::BclaReg,
        Architecture::BclaRed,
        Architecture::HybridReg,
        Architecture::HybridRed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Architecture::Rca => "rca",
            Architecture::BclaReg => "bcla",
            Architecture::BclaRed => "bcla-red",
            Architecture::HybridReg => "hybrid",
            Architecture::HybridRed => "hybrid-red",
        }
    }

    pub fn from_name(name: &str) -> Option<Architecture> {
        Architecture::ALL.iter().copied().find(|a| a.name() == name)
    }

    pub fn is_hybrid(self) -> bool {
        matches!(self, Architecture::HybridReg | Architecture::HybridRed)
    }

    fn redundant(self) -> bool {
        matches!(self, Architecture::BclaRed | Architecture::HybridRed)
    }
}

#[derive(Debug, Clone)]
pub struct AdderConfig {
    pub architecture: Architecture,
    pub width: u32,
    pub block_size: u32,
    /// Bits covered by the least significant RCA; hybrid architectures only.
    pub lsb_rca_span: u32,
    pub delays: DelayTable,
}

impl AdderConfig {
    pub fn new(architecture: Architecture, width: u32) -> AdderConfig {
        AdderConfig {
            architecture,
            width,
            block_size: 4,
            lsb_rca_span: 0,
            delays: DelayTable::default(),
        }
    }

    pub fn validate(&self) -> Result<(), AdderError> {
        let invalid = |msg: String| Err(AdderError::ConfigInvalid(msg));
        if self.width < 1 || self.width > 64 {
            return invalid(format!("width {} not in 1..=64", self.width));
        }
        match self.architecture {
            Architecture::Rca => Ok(()),
            Architecture::BclaReg | Architecture::BclaRed => {
                if self.block_size < 2 {
                    return invalid(format!("block size {} < 2", self.block_size));
                }
                if !self.width.is_multiple_of(self.block_size) {
                    return invalid(format!(
                        "width {} not divisible by block size {}",
                        self.width, self.block_size
                    ));
                }
                Ok(())
            }
            Architecture::HybridReg | Architecture::HybridRed => {
                if self.block_size < 2 {
                    return invalid(format!("block size {} < 2", self.block_size));
                }
                if self.lsb_rca_span < 1 {
                    return invalid("hybrid needs lsb_rca_span >= 1".to_string());
                }
                if self.width <= self.lsb_rca_span
                    || !(self.width - self.lsb_rca_span).is_multiple_of(self.block_size)
                    || self.width - self.lsb_rca_span < self.block_size
                {
                    return invalid(format!(
                        "width {} minus span {} must be a positive multiple of block size {}",
                        self.width, self.lsb_rca_span, self.block_size
                    ));
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum AdderError {
    #[error("invalid adder config: {0}")]
    ConfigInvalid(String),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
}

struct Builder<'a> {
    nl: &'a mut Netlist,
    delays: &'a DelayTable,
}

impl<'a> Builder<'a> {
    fn gate(&mut self, kind: GateKind, inputs: &[NetId]) -> Result<NetId, NetlistError> {
        self.nl.add_gate(kind, inputs, self.delays.delay(kind))
    }

    fn and(&mut self, inputs: &[NetId]) -> Result<NetId, NetlistError> {
        self.gate(GateKind::And(inputs.len() as u8), inputs)
    }

    fn or(&mut self, inputs: &[NetId]) -> Result<NetId, NetlistError> {
        self.gate(GateKind::Or(inputs.len() as u8), inputs)
    }

    /// Wide conjunctions become balanced trees of fan-in <= 5 gates.
    fn and_tree(&mut self, inputs: &[NetId]) -> Result<NetId, NetlistError> {
        self.tree(inputs, true)
    }

    fn or_tree(&mut self, inputs: &[NetId]) -> Result<NetId, NetlistError> {
        self.tree(inputs, false)
    }

    fn tree(&mut self, inputs: &[NetId], conj: bool) -> Result<NetId, NetlistError> {
        debug_assert!(!inputs.is_empty());
        if inputs.len() == 1 {
            return Ok(inputs[0]);
        }
        if inputs.len() <= MAX_FAN_IN {
            return if conj {
                self.and(inputs)
            } else {
                self.or(inputs)
            };
        }
        let chunk = inputs.len().div_ceil(inputs.len().div_ceil(MAX_FAN_IN));
        let mut level = Vec::new();
        for part in inputs.chunks(chunk) {
            level.push(self.tree(part, conj)?);
        }
        self.tree(&level, conj)
    }
}

/// Shared sum rails of the FA and SL:
/// `SUM1 = A1 B0 C0 + A0 B1 C0 + A0 B0 C1 + A1 B1 C1` and the dual for
/// `SUM0`. The four products of each rail are mutually orthogonal.
fn sum_rails(
    b: &mut Builder,
    a: RailPair,
    bb: RailPair,
    cin: RailPair,
) -> Result<RailPair, NetlistError> {
    let s1 = [
        b.and(&[a.rail1, bb.rail0, cin.rail0])?,
        b.and(&[a.rail0, bb.rail1, cin.rail0])?,
        b.and(&[a.rail0, bb.rail0, cin.rail1])?,
        b.and(&[a.rail1, bb.rail1, cin.rail1])?,
    ];
    let s0 = [
        b.and(&[a.rail0, bb.rail0, cin.rail0])?,
        b.and(&[a.rail1, bb.rail1, cin.rail0])?,
        b.and(&[a.rail1, bb.rail0, cin.rail1])?,
        b.and(&[a.rail0, bb.rail1, cin.rail1])?,
    ];
    Ok(RailPair {
        rail1: b.or(&s1)?,
        rail0: b.or(&s0)?,
    })
}

/// Early output full adder: sum rails plus
/// `COUT1 = A1 B1 + C(P, CIN1)`, `COUT0 = A0 B0 + C(P, CIN0)` with
/// `P = A1 B0 + A0 B1`. The C-elements hold the carry until the incoming
/// carry rail resets, which is what makes ripple chains reset rail by rail.
pub fn build_full_adder(
    nl: &mut Netlist,
    a: RailPair,
    bb: RailPair,
    cin: RailPair,
    delays: &DelayTable,
) -> Result<(RailPair, RailPair), NetlistError> {
    let b = &mut Builder { nl, delays };
    let sum = sum_rails(b, a, bb, cin)?;
    let p1 = b.and(&[a.rail1, bb.rail0])?;
    let p2 = b.and(&[a.rail0, bb.rail1])?;
    let p = b.or(&[p1, p2])?;
    let gen = b.and(&[a.rail1, bb.rail1])?;
    let kill = b.and(&[a.rail0, bb.rail0])?;
    let c1 = b.gate(GateKind::CElem(2), &[p, cin.rail1])?;
    let c0 = b.gate(GateKind::CElem(2), &[p, cin.rail0])?;
    let cout = RailPair {
        rail1: b.or(&[gen, c1])?,
        rail0: b.or(&[kill, c0])?,
    };
    Ok((sum, cout))
}

/// Sum logic: identical to the FA minus the carry output gates.
pub fn build_sum_logic(
    nl: &mut Netlist,
    a: RailPair,
    bb: RailPair,
    cin: RailPair,
    delays: &DelayTable,
) -> Result<RailPair, NetlistError> {
    let b = &mut Builder { nl, delays };
    sum_rails(b, a, bb, cin)
}

/// Outputs of one block carry lookahead generator.
#[derive(Debug, Clone, Copy)]
pub struct BclgOutputs {
    /// Regular lookahead carry; its carry-in term goes through a C-element.
    pub carry: RailPair,
    /// Redundant carry with the same logic function whose carry-in term is
    /// a plain AND, so it resets from local signals alone.
    pub redundant: Option<RailPair>,
}

/// Block carry lookahead generator over `operands` (LSB first), following
/// the telescoping pattern `C1 = G_{n-1} + P_{n-1} G_{n-2} + ... +
/// P_{n-1}..P_0 CIN1` and its kill-based dual for the 0 rail.
pub fn build_bclg(
    nl: &mut Netlist,
    operands: &[(RailPair, RailPair)],
    carry_in: RailPair,
    redundant: bool,
    delays: &DelayTable,
) -> Result<BclgOutputs, NetlistError> {
    assert!(operands.len() >= 2, "BCLG needs a block of at least 2 bits");
    let b = &mut Builder { nl, delays };
    let n = operands.len();
    let mut gen = Vec::with_capacity(n);
    let mut kill = Vec::with_capacity(n);
    let mut prop = Vec::with_capacity(n);
    for &(a, bb) in operands {
        gen.push(b.and(&[a.rail1, bb.rail1])?);
        kill.push(b.and(&[a.rail0, bb.rail0])?);
        let p1 = b.and(&[a.rail1, bb.rail0])?;
        let p2 = b.and(&[a.rail0, bb.rail1])?;
        prop.push(b.or(&[p1, p2])?);
    }
    // Product terms shared by the regular and redundant outputs.
    let mut terms1 = Vec::with_capacity(n + 1);
    let mut terms0 = Vec::with_capacity(n + 1);
    for j in (0..n).rev() {
        let upper: Vec<NetId> = prop[j + 1..].iter().rev().copied().collect();
        let mut t1 = upper.clone();
        t1.push(gen[j]);
        let mut t0 = upper;
        t0.push(kill[j]);
        terms1.push(b.and_tree(&t1)?);
        terms0.push(b.and_tree(&t0)?);
    }
    let all_prop: Vec<NetId> = prop.iter().rev().copied().collect();
    let pp = b.and_tree(&all_prop)?;

    let reg1 = b.gate(GateKind::CElem(2), &[pp, carry_in.rail1])?;
    let reg0 = b.gate(GateKind::CElem(2), &[pp, carry_in.rail0])?;
    let mut with1 = terms1.clone();
    with1.push(reg1);
    let mut with0 = terms0.clone();
    with0.push(reg0);
    let carry = RailPair {
        rail1: b.or_tree(&with1)?,
        rail0: b.or_tree(&with0)?,
    };

    let redundant = if redundant {
        let red1 = b.and(&[pp, carry_in.rail1])?;
        let red0 = b.and(&[pp, carry_in.rail0])?;
        let mut with1 = terms1;
        with1.push(red1);
        let mut with0 = terms0;
        with0.push(red0);
        Some(RailPair {
            rail1: b.or_tree(&with1)?,
            rail0: b.or_tree(&with0)?,
        })
    } else {
        None
    };

    Ok(BclgOutputs { carry, redundant })
}

fn port_pair(nl: &mut Netlist, name: String) -> RailPair {
    let p = nl.add_input_port(name);
    RailPair {
        rail1: p.rail1,
        rail0: p.rail0,
    }
}

/// Builds the full adder netlist for `config`, with input ports
/// `a0..`, `b0..`, `cin` and output ports `sum0..`, `cout`.
pub fn build_adder(config: &AdderConfig) -> Result<Netlist, AdderError> {
    config.validate()?;
    let w = config.width as usize;
    let delays = &config.delays;
    let mut nl = Netlist::new();
    let a: Vec<RailPair> = (0..w)
        .map(|i| port_pair(&mut nl, format!("a{i}")))
        .collect();
    let b: Vec<RailPair> = (0..w)
        .map(|i| port_pair(&mut nl, format!("b{i}")))
        .collect();
    let cin = port_pair(&mut nl, "cin".to_string());

    let mut sums: Vec<RailPair> = Vec::with_capacity(w);
    let cout;

    match config.architecture {
        Architecture::Rca => {
            let mut carry = cin;
            for i in 0..w {
                let (s, c) = build_full_adder(&mut nl, a[i], b[i], carry, delays)?;
                sums.push(s);
                carry = c;
            }
            cout = carry;
        }
        _ => {
            let span = if config.architecture.is_hybrid() {
                config.lsb_rca_span as usize
            } else {
                0
            };
            let mut carry = cin; // regular carry rippling into the next stage
            for i in 0..span {
                let (s, c) = build_full_adder(&mut nl, a[i], b[i], carry, delays)?;
                sums.push(s);
                carry = c;
            }
            let block = config.block_size as usize;
            let nblocks = (w - span) / block;
            let redundant_mode = config.architecture.redundant();
            // Lookahead carry feeding the next BCLG: the redundant rail in
            // redundant mode, the regular rail otherwise. The first BCLG
            // consumes the RCA carry (or the primary carry-in).
            let mut lookahead = carry;
            for k in 0..nblocks {
                let lo = span + k * block;
                let chain_in = carry;
                let mut fa_carry = chain_in;
                for i in lo..lo + block - 1 {
                    let (s, c) = build_full_adder(&mut nl, a[i], b[i], fa_carry, delays)?;
                    sums.push(s);
                    fa_carry = c;
                }
                let top = lo + block - 1;
                sums.push(build_sum_logic(&mut nl, a[top], b[top], fa_carry, delays)?);
                let operands: Vec<(RailPair, RailPair)> =
                    (lo..lo + block).map(|i| (a[i], b[i])).collect();
                let last = k == nblocks - 1;
                let out = build_bclg(
                    &mut nl,
                    &operands,
                    lookahead,
                    redundant_mode && !last,
                    delays,
                )?;
                carry = out.carry;
                lookahead = if redundant_mode && !last {
                    out.redundant.unwrap()
                } else {
                    out.carry
                };
            }
            cout = carry;
        }
    }

    for (i, s) in sums.iter().enumerate() {
        nl.add_output_port(format!("sum{i}"), s.rail1, s.rail0);
    }
    nl.add_output_port("cout", cout.rail1, cout.rail0);
    nl.validate()?;
    Ok(nl)
}

/// Vectors that exercise the extremes of the carry chain: all-propagate,
/// generate-at-LSB with propagate above, and all-kill.
pub fn worst_case_vectors(width: u32) -> Vec<(u64, u64, bool)> {
    let mask = if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    };
    vec![(mask, 0, true), (mask, 1 & mask, false), (0, 0, false)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(nl: &mut Netlist, name: &str) -> RailPair {
        port_pair(nl, name.to_string())
    }

    // Component gate counts used as arithmetic oracles below.
    const FA_GATES: usize = 19;
    const SL_GATES: usize = 10;
    const BCLG4_REG_GATES: usize = 31;
    const BCLG4_RED_EXTRA: usize = 4;

    #[test]
    fn fa_gate_count() {
        let mut nl = Netlist::new();
        let d = DelayTable::default();
        let (a, b, c) = (pair(&mut nl, "a"), pair(&mut nl, "b"), pair(&mut nl, "c"));
        build_full_adder(&mut nl, a, b, c, &d).unwrap();
        assert_eq!(nl.gates().len(), FA_GATES);
    }

    #[test]
    fn sl_smaller_than_fa() {
        let mut nl = Netlist::new();
        let d = DelayTable::default();
        let (a, b, c) = (pair(&mut nl, "a"), pair(&mut nl, "b"), pair(&mut nl, "c"));
        build_sum_logic(&mut nl, a, b, c, &d).unwrap();
        assert_eq!(nl.gates().len(), SL_GATES);
    }

    #[test]
    fn bclg_gate_counts() {
        let d = DelayTable::default();
        for (redundant, expected) in [
            (false, BCLG4_REG_GATES),
            (true, BCLG4_REG_GATES + BCLG4_RED_EXTRA),
        ] {
            let mut nl = Netlist::new();
            let ops: Vec<_> = (0..4)
                .map(|i| {
                    (
                        pair(&mut nl, &format!("a{i}")),
                        pair(&mut nl, &format!("b{i}")),
                    )
                })
                .collect();
            let cin = pair(&mut nl, "cin");
            let out = build_bclg(&mut nl, &ops, cin, redundant, &d).unwrap();
            assert_eq!(nl.gates().len(), expected);
            assert_eq!(out.redundant.is_some(), redundant);
        }
    }

    #[test]
    fn rca4_structure() {
        let cfg = AdderConfig::new(Architecture::Rca, 4);
        let nl = build_adder(&cfg).unwrap();
        assert_eq!(nl.primary_inputs().len(), 9);
        assert_eq!(nl.primary_outputs().len(), 5);
        assert_eq!(nl.gates().len(), 4 * FA_GATES);
    }

    #[test]
    fn bcla32_structure() {
        let cfg = AdderConfig::new(Architecture::BclaReg, 32);
        let nl = build_adder(&cfg).unwrap();
        // 8 blocks: 24 FAs, 8 SLs, 8 BCLGs
        assert_eq!(
            nl.gates().len(),
            24 * FA_GATES + 8 * SL_GATES + 8 * BCLG4_REG_GATES
        );
    }

    #[test]
    fn redundant_adds_final_level_gates_only() {
        let reg = build_adder(&AdderConfig::new(Architecture::BclaReg, 32)).unwrap();
        let red = build_adder(&AdderConfig::new(Architecture::BclaRed, 32)).unwrap();
        // 7 chained BCLGs carry redundant outputs; the last one does not.
        assert_eq!(red.gates().len(), reg.gates().len() + 7 * BCLG4_RED_EXTRA);
    }

    #[test]
    fn config_divisibility() {
        let mut cfg = AdderConfig::new(Architecture::BclaReg, 10);
        assert!(matches!(cfg.validate(), Err(AdderError::ConfigInvalid(_))));
        cfg = AdderConfig::new(Architecture::HybridReg, 32);
        cfg.lsb_rca_span = 3;
        assert!(matches!(cfg.validate(), Err(AdderError::ConfigInvalid(_))));
        cfg.lsb_rca_span = 4;
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn all_generated_netlists_validate() {
        for arch in Architecture::ALL {
            for width in [4u32, 8, 16, 32] {
                let mut cfg = AdderConfig::new(arch, width);
                if arch.is_hybrid() {
                    if width == 4 {
                        cfg.block_size = 2;
                        cfg.lsb_rca_span = 2;
                    } else {
                        cfg.lsb_rca_span = 4;
                    }
                }
                if cfg.validate().is_err() {
                    continue;
                }
                let nl = build_adder(&cfg).unwrap();
                nl.validate().unwrap_or_else(|e| {
                    panic!("{} width {width}: {e}", arch.name());
                });
            }
        }
    }

    #[test]
    fn worst_case_vector_list() {
        let v = worst_case_vectors(4);
        assert!(v.contains(&(0xF, 0x0, true)));
        let v = worst_case_vectors(32);
        assert!(v.contains(&(u32::MAX as u64, 1, false)));
        assert!(v.contains(&(0, 0, false)));
        let v = worst_case_vectors(64);
        assert!(v.contains(&(u64::MAX, 0, true)));
    }

    #[test]
    fn wide_blocks_use_trees() {
        // block size 8 forces product terms wider than the fan-in cap
        let mut cfg = AdderConfig::new(Architecture::BclaReg, 16);
        cfg.block_size = 8;
        let nl = build_adder(&cfg).unwrap();
        nl.validate().unwrap();
        assert!(nl.gates().iter().all(|g| g.kind.fan_in() <= MAX_FAN_IN));
    }

    #[test]
    fn export_round_trip_bcla8() {
        use crate::netlist::{export_netlist, import_netlist};
        let nl = build_adder(&AdderConfig::new(Architecture::BclaReg, 8)).unwrap();
        let text = export_netlist(&nl).unwrap();
        let back = import_netlist(&text).unwrap();
        assert_eq!(export_netlist(&back).unwrap(), text);
        assert_eq!(back, nl);
    }
}
