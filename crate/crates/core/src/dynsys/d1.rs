use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::{format_bits, low_mask, parse_bits, DynError, MAX_WIDTH};

/// `2n + 2` bits; bits `1..=n` form the incubator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct D1Seed {
    n: u32,
    bits: u64,
}

impl D1Seed {
    pub fn new(n: u32, bits: u64) -> Result<Self, DynError> {
        let width = 2 * n as usize + 2;
        if width > MAX_WIDTH {
            return Err(DynError::TooWide { width });
        }
        if bits & !low_mask(width) != 0 {
            return Err(DynError::InvalidState(format!("bits beyond column {width}")));
        }
        Ok(D1Seed { n, bits })
    }

    pub fn zero(n: u32) -> Result<Self, DynError> {
        Self::new(n, 0)
    }

    pub fn parse(n: u32, s: &str) -> Result<Self, DynError> {
        Self::new(n, parse_bits(s, 2 * n as usize + 2)?)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn width(&self) -> usize {
        2 * self.n as usize + 2
    }

    /// Packed bits, column `d` at bit `d - 1`.
    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn bit(&self, d: usize) -> bool {
        self.bits >> (d - 1) & 1 == 1
    }

    /// Pre-shift position of the 1 inserted by the next step, if the harvest
    /// is 0. May be `width + 1`: the string continues with zeros.
    pub fn insertion_position(&self) -> Option<usize> {
        if self.bits & 1 == 1 {
            return None;
        }
        let free = !self.bits & !low_mask(self.n as usize);
        Some(free.trailing_zeros() as usize + 1)
    }

    /// Harvest bit 1; on a 0 the leftmost 0 right of the incubator becomes a 1
    /// before everything shifts left.
    pub fn step(&self) -> D1Seed {
        let bits = match self.insertion_position() {
            None => self.bits >> 1,
            Some(q) => ((self.bits | 1 << (q - 1)) >> 1) & low_mask(self.width()),
        };
        D1Seed { n: self.n, bits }
    }

    /// Largest index, counted from the right end of the incubator, holding a 1.
    pub fn energy(&self) -> u32 {
        let top = 64 - self.bits.leading_zeros();
        top.saturating_sub(self.n)
    }

    pub fn is_simple(&self) -> bool {
        self.energy() == 0
    }
}

impl fmt::Display for D1Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_bits(self.bits, self.width()))
    }
}

impl FromStr for D1Seed {
    type Err = DynError;

    /// Infers `n` from the length.
    fn from_str(s: &str) -> Result<Self, DynError> {
        if s.len() < 4 || s.len() % 2 == 1 {
            return Err(DynError::InvalidState(format!("length {} is not 2n + 2", s.len())));
        }
        D1Seed::parse((s.len() as u32 - 2) / 2, s)
    }
}

impl Serialize for D1Seed {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seed(s: &str) -> D1Seed {
        s.parse().unwrap()
    }

    #[test]
    fn hand_iterated_cycle() {
        let mut s = seed("000000");
        let mut seen = vec![s.to_string()];
        for _ in 0..4 {
            s = s.step();
            seen.push(s.to_string());
        }
        assert_eq!(seen, ["000000", "010000", "110000", "100000", "000000"]);
    }

    #[test]
    fn insertion_past_the_end() {
        // every bit right of the incubator is set: the 1 lands on the virtual
        // column and shifts into the last real one
        let s = seed("001111");
        assert_eq!(s.insertion_position(), Some(7));
        assert_eq!(s.step().to_string(), "011111");
    }

    #[test]
    fn energy_examples() {
        assert_eq!(seed("000000").energy(), 0);
        assert_eq!(seed("001000").energy(), 1);
        assert_eq!(seed("000001").energy(), 4);
        assert!(seed("110000").is_simple());
        assert!(!seed("000100").is_simple());
    }

    #[test]
    fn parse_errors() {
        assert!("01".parse::<D1Seed>().is_err());
        assert!("0120".parse::<D1Seed>().is_err());
        assert!(D1Seed::parse(2, "00000").is_err());
        assert!(D1Seed::new(2, 1 << 6).is_err());
        assert!(D1Seed::new(40, 0).is_err());
    }
}
