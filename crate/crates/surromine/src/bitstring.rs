//! Fixed-length bitstrings packed into 64-bit words.

use std::fmt;

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Immutable-length bitstring; each position holds 0 or 1.
///
/// Bits are packed into `u64` words, least significant bit first, so
/// Hamming distance reduces to XOR plus popcount. Unused high bits of the
/// last word are kept at zero, which makes equality and hashing plain
/// word comparisons.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bitstring {
    words: Vec<u64>,
    len: usize,
}

impl Bitstring {
    /// All-zero bitstring of length `len`.
    pub fn zeros(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::invalid("bitstring length must be at least 1"));
        }
        Ok(Bitstring {
            words: vec![0; len.div_ceil(64)],
            len,
        })
    }

    /// Uniform random bitstring; consumes exactly `len` draws from `rng`.
    pub fn random(rng: &mut RngStream, len: usize) -> Result<Self> {
        let mut bits = Self::zeros(len)?;
        for i in 0..len {
            if rng.next_bool() {
                bits.set(i, 1);
            }
        }
        Ok(bits)
    }

    /// Build from a slice of 0/1 bytes.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut out = Self::zeros(bits.len())?;
        for (i, &b) in bits.iter().enumerate() {
            if b > 1 {
                return Err(Error::invalid(format!(
                    "bit value at position {i} must be 0 or 1, got {b}"
                )));
            }
            out.set(i, b);
        }
        Ok(out)
    }

    /// Build from a string of '0'/'1' characters.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let mut out = Self::zeros(s.len())?;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => out.set(i, 1),
                other => {
                    return Err(Error::invalid(format!(
                        "bit character at position {i} must be '0' or '1', got {other:?}"
                    )))
                }
            }
        }
        Ok(out)
    }

    /// Number of positions.
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false: zero-length bitstrings cannot be constructed.
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit at position `i` as 0 or 1.
    ///
    /// # Panics
    /// Panics if `i >= len()`.
    pub fn get(&self, i: usize) -> u8 {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        ((self.words[i / 64] >> (i % 64)) & 1) as u8
    }

    /// Set position `i` to `bit` (0 or 1).
    ///
    /// # Panics
    /// Panics if `i >= len()` or `bit > 1`.
    pub fn set(&mut self, i: usize, bit: u8) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        assert!(bit <= 1, "bit value must be 0 or 1, got {bit}");
        let mask = 1u64 << (i % 64);
        if bit == 1 {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    /// Invert the bit at position `i` in place.
    ///
    /// # Panics
    /// Panics if `i >= len()`.
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    /// Copy with the bit at position `i` inverted.
    pub fn flipped(&self, i: usize) -> Self {
        let mut out = self.clone();
        out.flip(i);
        out
    }

    /// Number of one bits.
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of positions where the two strings differ.
    ///
    /// # Panics
    /// Panics if the lengths differ.
    pub fn hamming(&self, other: &Self) -> usize {
        assert_eq!(
            self.len, other.len,
            "hamming distance requires equal lengths"
        );
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Iterate bits in position order.
    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Packed words backing this bitstring (low bit of word 0 is position 0).
    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            write!(f, "{bit}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitstring({self})")
    }
}
