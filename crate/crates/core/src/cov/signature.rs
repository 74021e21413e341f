use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Where a resolvent `(H_j - i)^{-1}` is placed relative to the comma at index `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Eps {
    L,
    Zero,
    R,
}

impl Eps {
    pub fn symbol(self) -> char {
        match self {
            Eps::L => 'L',
            Eps::Zero => '0',
            Eps::R => 'R',
        }
    }

    fn parse(c: char) -> Option<Self> {
        match c {
            'L' | 'l' => Some(Eps::L),
            '0' => Some(Eps::Zero),
            'R' | 'r' => Some(Eps::R),
            _ => None,
        }
    }
}

/// A word `(eps_0, ..., eps_m)` over `{L, 0, R}` with `eps_0 != L` and `eps_m != R`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EpsilonSignature {
    entries: Vec<Eps>,
}

impl EpsilonSignature {
    pub fn new(entries: Vec<Eps>) -> Result<Self> {
        if entries.is_empty() {
            return crate::error::invalid("signature needs at least one entry");
        }
        if entries[0] == Eps::L {
            return crate::error::invalid("first signature entry must not be L");
        }
        if entries[entries.len() - 1] == Eps::R {
            return crate::error::invalid("last signature entry must not be R");
        }
        Ok(Self { entries })
    }

    /// `(R, L, R, L, ...)` of length `m + 1`, followed by a trailing `0` when `trailing_zero` is set.
    pub fn alternating(len: usize, trailing_zero: bool) -> Result<Self> {
        let mut e: Vec<Eps> = (0..len).map(|i| if i % 2 == 0 { Eps::R } else { Eps::L }).collect();
        if trailing_zero {
            e.push(Eps::Zero);
        }
        Self::new(e)
    }

    pub fn entries(&self) -> &[Eps] {
        &self.entries
    }

    /// The order `m`, one less than the length.
    pub fn order(&self) -> usize {
        self.entries.len() - 1
    }

    /// `q = |eps^{-1}(0)|`.
    pub fn zero_count(&self) -> usize {
        self.entries.iter().filter(|e| **e == Eps::Zero).count()
    }

    pub fn zero_set(&self) -> Vec<usize> {
        zero_set(&self.entries)
    }

    /// Whether `check_j` carries resolvents on both sides.
    pub fn double_resolvented(&self, j: usize) -> bool {
        j >= 1 && j < self.entries.len() && self.entries[j - 1] == Eps::R && self.entries[j] == Eps::L
    }
}

pub(crate) fn zero_set(entries: &[Eps]) -> Vec<usize> {
    entries.iter().enumerate().filter(|(_, e)| **e == Eps::Zero).map(|(i, _)| i).collect()
}

impl fmt::Display for EpsilonSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            write!(f, "{}", e.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for EpsilonSignature {
    type Err = Error;

    /// Accepts words like `RL0` or `R,L,0`.
    fn from_str(s: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for c in s.chars().filter(|c| !c.is_whitespace() && *c != ',') {
            match Eps::parse(c) {
                Some(e) => entries.push(e),
                None => return Err(Error::Invalid(String::from("signature letters must be L, 0 or R"))),
            }
        }
        Self::new(entries)
    }
}

/// Signature in `{L, R}^{m+1}` with `eps_0 = R`, `eps_m = L` and both resolvents around every `j` in `J`.
///
/// Free positions are filled with `L`.
pub fn signature_for_j(j_set: &[usize], m: usize) -> Result<EpsilonSignature> {
    if m == 0 {
        return crate::error::invalid("signature order must be at least 1");
    }
    let mut sorted = j_set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.iter().any(|&j| j == 0 || j > m) {
        return crate::error::invalid("J must be a subset of 1..=m");
    }
    if sorted.windows(2).any(|w| w[1] - w[0] < 2) {
        return crate::error::invalid("elements of J must be at distance at least 2");
    }
    let mut e = alloc::vec![Eps::L; m + 1];
    e[0] = Eps::R;
    for &j in &sorted {
        e[j - 1] = Eps::R;
    }
    for &j in &sorted {
        e[j] = Eps::L;
    }
    let sig = EpsilonSignature::new(e)?;
    debug_assert!(sorted.iter().all(|&j| sig.double_resolvented(j)));
    Ok(sig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn endpoint_rules() {
        assert!("LR".parse::<EpsilonSignature>().is_err());
        assert!("RR".parse::<EpsilonSignature>().is_err());
        assert!("LL".parse::<EpsilonSignature>().is_err());
        let s: EpsilonSignature = "R, 0, L".parse().unwrap();
        assert_eq!(s.to_string(), "R0L");
        assert_eq!(s.zero_count(), 1);
    }

    #[test]
    fn examples_for_j() {
        assert_eq!(signature_for_j(&[2], 3).unwrap().to_string(), "RRLL");
        assert_eq!(signature_for_j(&[], 2).unwrap().to_string(), "RLL");
        let s = signature_for_j(&[1, 3], 4).unwrap();
        assert!(s.double_resolvented(1) && s.double_resolvented(3));
        assert!(signature_for_j(&[1, 2], 3).is_err());
        assert!(signature_for_j(&[0], 3).is_err());
    }
}
