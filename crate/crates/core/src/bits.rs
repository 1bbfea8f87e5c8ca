//! Fixed-length bit strings.
//!
//! The leftmost bit is the most significant bit of the integer value and
//! corresponds to the first tensor factor when a string indexes qubits.

use std::fmt;

use crate::error::{Error, Result};

/// A bit string of length at most 64.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    value: u64,
    len: usize,
}

impl BitString {
    pub fn new(value: u64, len: usize) -> Result<Self> {
        if len > 64 {
            return Err(Error::InvalidArgument(format!("bit string length {len} > 64")));
        }
        if len < 64 && value >> len != 0 {
            return Err(Error::InvalidArgument(format!(
                "value {value:#x} does not fit in {len} bits"
            )));
        }
        Ok(Self { value, len })
    }

    pub fn zeros(len: usize) -> Self {
        Self { value: 0, len }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Bit at position `i`, counted from the left.
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.value >> (self.len - 1 - i)) & 1 == 1
    }

    /// Concatenation `self || other`.
    pub fn concat(&self, other: &BitString) -> Result<BitString> {
        BitString::new((self.value << other.len) | other.value, self.len + other.len)
    }

    /// Splits into the first `at` bits and the remainder.
    pub fn split(&self, at: usize) -> (BitString, BitString) {
        assert!(at <= self.len);
        let tail_len = self.len - at;
        let mask = if tail_len == 64 { u64::MAX } else { (1u64 << tail_len) - 1 };
        (
            BitString { value: self.value >> tail_len, len: at },
            BitString { value: self.value & mask, len: tail_len },
        )
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        if self.len != other.len {
            return Err(Error::DimensionMismatch(format!(
                "xor of {}-bit and {}-bit strings",
                self.len, other.len
            )));
        }
        Ok(BitString { value: self.value ^ other.value, len: self.len })
    }

    /// Lowercase hexadecimal encoding, zero-padded to the string length.
    pub fn to_hex(&self) -> String {
        let width = self.len.div_ceil(4).max(1);
        format!("{:0width$x}", self.value, width = width)
    }

    pub fn from_hex(s: &str, len: usize) -> Result<BitString> {
        let value = u64::from_str_radix(s.trim(), 16)
            .map_err(|e| Error::InvalidArgument(format!("bad hex string `{s}`: {e}")))?;
        BitString::new(value, len)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut value = 0u64;
        for c in s.chars() {
            value = (value << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::InvalidArgument(format!("bad bit string `{s}`"))),
                };
        }
        BitString::new(value, s.len())
    }
}

/// Inner product modulo 2 of two equal-length strings.
pub fn symplectic_dot(x: &BitString, y: &BitString) -> Result<bool> {
    if x.len != y.len {
        return Err(Error::DimensionMismatch(format!(
            "inner product of {}-bit and {}-bit strings",
            x.len, y.len
        )));
    }
    Ok(parity(x.value & y.value))
}

#[inline]
pub(crate) fn parity(v: u64) -> bool {
    v.count_ones() & 1 == 1
}
