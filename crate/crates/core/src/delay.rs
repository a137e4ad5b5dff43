//! Per-gate propagation delays, in gate-delay units.
//!
//! The default table charges wider gates more (a fan-in-`n` AND/OR costs
//! `2n - 3` units) and makes the state-holding C-element slower than a
//! plain AND of the same fan-in (`2n - 2`). Relative cell speeds are what
//! the latency comparisons rest on: a C-element cell is heavier than the
//! AND it replaces in the redundant carry path, and wide lookahead gates
//! are slower than the narrow gates of a ripple stage.

use crate::netlist::GateKind;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DelayTable {
    overrides: BTreeMap<(String, usize), u64>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DelayError {
    #[error("bad delay-table line {line}: {reason}")]
    BadLine { line: usize, reason: String },
}

impl DelayTable {
    pub fn unit() -> DelayTable {
        let mut t = DelayTable::default();
        for kind in ["AND", "OR", "CELEM"] {
            for n in 2..=5 {
                t.overrides.insert((kind.to_string(), n), 1);
            }
        }
        t.overrides.insert(("BUF".to_string(), 1), 1);
        t
    }

    pub fn set(&mut self, kind: &str, fan_in: usize, delay: u64) {
        self.overrides.insert((kind.to_string(), fan_in), delay);
    }

    pub fn delay(&self, kind: GateKind) -> u64 {
        let n = kind.fan_in();
        if let Some(&d) = self.overrides.get(&(kind.name().to_string(), n)) {
            return d;
        }
        match kind {
            GateKind::And(_) | GateKind::Or(_) => 2 * n as u64 - 3,
            GateKind::CElem(_) => 2 * n as u64 - 2,
            GateKind::Buf => 1,
        }
    }

    /// Parses `KIND fan_in delay` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<DelayTable, DelayError> {
        let mut table = DelayTable::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = |reason: &str| DelayError::BadLine {
                line: idx + 1,
                reason: reason.to_string(),
            };
            if parts.len() != 3 {
                return Err(bad("expected `KIND fan_in delay`"));
            }
            let kind = parts[0].to_ascii_uppercase();
            if !matches!(kind.as_str(), "AND" | "OR" | "CELEM" | "BUF") {
                return Err(bad("kind must be AND, OR, CELEM or BUF"));
            }
            let fan_in: usize = parts[1].parse().map_err(|_| bad("bad fan_in"))?;
            let delay: u64 = parts[2].parse().map_err(|_| bad("bad delay"))?;
            table.overrides.insert((kind, fan_in), delay);
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_scaling() {
        let t = DelayTable::default();
        assert_eq!(t.delay(GateKind::And(2)), 1);
        assert_eq!(t.delay(GateKind::Or(5)), 7);
        assert_eq!(t.delay(GateKind::CElem(2)), 2);
        assert_eq!(t.delay(GateKind::Buf), 1);
        // C-element strictly slower than AND at every fan-in
        for n in 2..=5u8 {
            assert!(t.delay(GateKind::CElem(n)) > t.delay(GateKind::And(n)));
        }
    }

    #[test]
    fn parse_overrides() {
        let t = DelayTable::parse("CELEM 2 9\n# comment\nand 3 4\n").unwrap();
        assert_eq!(t.delay(GateKind::CElem(2)), 9);
        assert_eq!(t.delay(GateKind::And(3)), 4);
        assert_eq!(t.delay(GateKind::And(2)), 1);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(DelayTable::parse("XOR 2 1").is_err());
        assert!(DelayTable::parse("AND two 1").is_err());
        assert!(DelayTable::parse("AND 2").is_err());
    }

    #[test]
    fn unit_table_is_flat() {
        let t = DelayTable::unit();
        assert_eq!(t.delay(GateKind::CElem(2)), 1);
        assert_eq!(t.delay(GateKind::Or(5)), 1);
    }
}
