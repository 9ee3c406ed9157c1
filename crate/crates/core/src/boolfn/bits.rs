use std::fmt;
use std::ops::BitXor;

use crate::error::{Error, Result};

pub const MAX_WIDTH: usize = 16;

pub(crate) fn check_width(width: usize) -> Result<()> {
    if (1..=MAX_WIDTH).contains(&width) {
        Ok(())
    } else {
        Err(Error::WidthOutOfRange(width))
    }
}

#[inline]
pub(crate) fn mask(width: usize) -> u32 {
    ((1u64 << width) - 1) as u32
}

/// A fixed-width bit string. Bit 0 is the least significant bit of `value`
/// and corresponds to qubit 0 of a register. `Display` prints the most
/// significant bit first, so `BitString::parse("01")` has value 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    width: u8,
    value: u32,
}

impl BitString {
    pub fn new(width: usize, value: u32) -> Result<Self> {
        check_width(width)?;
        if value > mask(width) {
            return Err(Error::InvalidParameter(format!(
                "value {value} does not fit in {width} bits"
            )));
        }
        Ok(Self {
            width: width as u8,
            value,
        })
    }

    /// Unchecked constructor for internal hot paths; masks the value.
    pub(crate) fn from_raw(width: usize, value: u32) -> Self {
        debug_assert!((1..=MAX_WIDTH).contains(&width));
        Self {
            width: width as u8,
            value: value & mask(width),
        }
    }

    pub fn zero(width: usize) -> Self {
        assert!((1..=MAX_WIDTH).contains(&width), "width {width} out of range");
        Self::from_raw(width, 0)
    }

    /// Parses an MSB-first binary string such as `"0110"`.
    pub fn parse(s: &str) -> Result<Self> {
        let width = s.len();
        check_width(width)?;
        let value = u32::from_str_radix(s, 2)
            .map_err(|_| Error::InvalidParameter(format!("not a binary string: {s:?}")))?;
        Self::new(width, value)
    }

    pub fn width(self) -> usize {
        self.width as usize
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn index(self) -> usize {
        self.value as usize
    }

    pub fn bit(self, i: usize) -> bool {
        assert!(i < self.width(), "bit {i} out of range for width {}", self.width);
        (self.value >> i) & 1 == 1
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Inner product over GF(2).
    pub fn dot(self, other: BitString) -> bool {
        assert_eq!(self.width, other.width, "width mismatch");
        (self.value & other.value).count_ones() % 2 == 1
    }

    pub fn weight(self) -> u32 {
        self.value.count_ones()
    }
}

impl BitXor for BitString {
    type Output = BitString;

    fn bitxor(self, rhs: BitString) -> BitString {
        assert_eq!(self.width, rhs.width, "width mismatch");
        BitString {
            width: self.width,
            value: self.value ^ rhs.value,
        }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0w$b}", self.value, w = self.width as usize)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

/// Zero-padded lowercase hex, one digit per started nibble of `width`.
pub fn to_hex(value: u32, width: usize) -> String {
    format!("{:0w$x}", value, w = width.div_ceil(4))
}

pub fn from_hex(s: &str, width: usize) -> Result<u32> {
    let value = u32::from_str_radix(s, 16)
        .map_err(|_| Error::Manifest(format!("invalid hex string {s:?}")))?;
    if value > mask(width) {
        return Err(Error::Manifest(format!(
            "hex value {s} does not fit in {width} bits"
        )));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_msb_first() {
        let b = BitString::new(3, 0b101).unwrap();
        assert_eq!(b.to_string(), "101");
        let one = BitString::parse("01").unwrap();
        assert_eq!(one.value(), 1);
        assert!(one.bit(0));
        assert!(!one.bit(1));
    }

    #[test]
    fn xor_and_dot() {
        let a = BitString::parse("110").unwrap();
        let b = BitString::parse("011").unwrap();
        assert_eq!((a ^ b).to_string(), "101");
        assert!(a.dot(b));
        assert!(!a.dot(BitString::zero(3)));
    }

    #[test]
    fn rejects_bad_widths_and_values() {
        assert!(BitString::new(0, 0).is_err());
        assert!(BitString::new(17, 0).is_err());
        assert!(BitString::new(2, 4).is_err());
        assert!(BitString::parse("012").is_err());
    }

    #[test]
    fn hex_roundtrip_is_padded() {
        assert_eq!(to_hex(0x2, 6), "02");
        assert_eq!(to_hex(0xabc, 12), "abc");
        assert_eq!(from_hex("02", 6).unwrap(), 2);
        assert!(from_hex("40", 6).is_err());
    }
}
