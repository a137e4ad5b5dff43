//! Dual-rail encoding of binary words.
//!
//! One bit travels on two wires: `(rail1, rail0) = (1, 0)` is a valid 1,
//! `(0, 1)` is a valid 0, `(0, 0)` is the spacer separating successive
//! data words, and `(1, 1)` is illegal.

use thiserror::Error;

/// Value carried by one dual-rail wire pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DualRail {
    pub rail1: bool,
    pub rail0: bool,
}

impl DualRail {
    pub const SPACER: DualRail = DualRail {
        rail1: false,
        rail0: false,
    };

    pub fn valid(bit: bool) -> DualRail {
        DualRail {
            rail1: bit,
            rail0: !bit,
        }
    }

    pub fn is_spacer(self) -> bool {
        !self.rail1 && !self.rail0
    }

    pub fn is_illegal(self) -> bool {
        self.rail1 && self.rail0
    }

    /// The encoded bit, if this pair holds valid data.
    pub fn bit(self) -> Option<bool> {
        match (self.rail1, self.rail0) {
            (true, false) => Some(true),
            (false, true) => Some(false),
            _ => None,
        }
    }
}

/// Outcome of decoding a group of dual-rail pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordStatus {
    /// Every pair holds valid data.
    Valid(u64),
    /// Every pair is at spacer.
    Spacer,
    /// A mix of valid and spacer pairs.
    Partial,
    /// At least one pair has both rails high.
    Illegal,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error("value {value} does not fit in {width} bits")]
    ValueOutOfRange { value: u64, width: u32 },
}

/// Encodes `value` as `width` dual-rail pairs, LSB first.
pub fn encode_word(value: u64, width: u32) -> Result<Vec<DualRail>, EncodeError> {
    if width < 64 && value >> width != 0 {
        return Err(EncodeError::ValueOutOfRange { value, width });
    }
    Ok((0..width)
        .map(|i| DualRail::valid(value >> i & 1 == 1))
        .collect())
}

/// An all-spacer word of `width` pairs.
pub fn spacer_word(width: u32) -> Vec<DualRail> {
    vec![DualRail::SPACER; width as usize]
}

/// Decodes a group of dual-rail pairs, LSB first.
///
/// Illegality dominates: a single `(1, 1)` pair makes the whole word
/// illegal regardless of the other pairs.
pub fn decode_word(rails: &[DualRail]) -> WordStatus {
    if rails.iter().any(|r| r.is_illegal()) {
        return WordStatus::Illegal;
    }
    let spacers = rails.iter().filter(|r| r.is_spacer()).count();
    if spacers == rails.len() {
        return WordStatus::Spacer;
    }
    if spacers > 0 {
        return WordStatus::Partial;
    }
    let mut value = 0u64;
    for (i, r) in rails.iter().enumerate() {
        if r.bit() == Some(true) {
            value |= 1 << i;
        }
    }
    WordStatus::Valid(value)
}
