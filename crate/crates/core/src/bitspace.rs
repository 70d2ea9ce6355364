//! Binary-hypercube primitives: bit strings, Hamming algebra, masked
//! projection and sphere enumeration.
//!
//! Bit 0 is the *leftmost* position: `"1000"` parses to the string whose
//! first bit is set. Enumerative operations (spheres, anything touching
//! all 2^n strings) are limited to [`ENUM_LIMIT`] bits; the closed-form
//! paths elsewhere in the crate accept any length because they never
//! enumerate strings.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor};
use std::str::FromStr;

/// Dimension limit for operations that enumerate the hypercube.
pub const ENUM_LIMIT: usize = 24;

/// A fixed-length binary word. Length is immutable after construction.
///
/// Positions are 0-indexed from the left; internally bit `i` lives in word
/// `i / 64`. Textual I/O is always leftmost-bit-first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    len: usize,
    words: Vec<u64>,
}

impl BitString {
    /// All-zeros string of length `n`.
    pub fn zeros(n: usize) -> Self {
        BitString {
            len: n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    /// All-ones string of length `n`.
    pub fn ones(n: usize) -> Self {
        let mut s = Self::zeros(n);
        for w in &mut s.words {
            *w = u64::MAX;
        }
        s.mask_tail();
        s
    }

    /// The string of length `n` with only position `pos` set
    /// (0-indexed from the left).
    pub fn unit(n: usize, pos: usize) -> Self {
        assert!(pos < n, "unit position {pos} out of range for length {n}");
        let mut s = Self::zeros(n);
        s.set(pos, true);
        s
    }

    /// Build from an index in `0..2^n`, where bit `i` of the index is
    /// position `i` of the string. Inverse of [`BitString::to_index`].
    pub fn from_index(index: usize, n: usize) -> Self {
        debug_assert!(n <= usize::BITS as usize);
        debug_assert!(n >= usize::BITS as usize || index < (1usize << n));
        let mut s = Self::zeros(n);
        if !s.words.is_empty() {
            s.words[0] = index as u64;
        }
        s
    }

    /// Pack the string into a table index (requires `n <= 64`).
    pub fn to_index(&self) -> usize {
        debug_assert!(self.len <= 64);
        self.words.first().copied().unwrap_or(0) as usize
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, pos: usize) -> bool {
        assert!(pos < self.len, "bit position {pos} out of range");
        (self.words[pos / 64] >> (pos % 64)) & 1 == 1
    }

    pub fn set(&mut self, pos: usize, value: bool) {
        assert!(pos < self.len, "bit position {pos} out of range");
        if value {
            self.words[pos / 64] |= 1 << (pos % 64);
        } else {
            self.words[pos / 64] &= !(1 << (pos % 64));
        }
    }

    /// Number of 1-bits.
    pub fn popcount(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Bitwise complement within the string length.
    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in &mut out.words {
            *w = !*w;
        }
        out.mask_tail();
        out
    }

    /// Iterate over bits, leftmost first.
    pub fn iter_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Positions of the 1-bits, ascending.
    pub fn one_positions(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    /// True when no bit is set.
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn mask_tail(&mut self) {
        let used = self.len % 64;
        if used != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
        if self.len == 0 {
            self.words.clear();
        }
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len != other.len {
            Err(Error::LengthMismatch {
                expected: self.len,
                got: other.len,
            })
        } else {
            Ok(())
        }
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = BitString::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => out.set(i, true),
                _ => {
                    return Err(Error::Parse(format!(
                        "invalid character {c:?} in bit string {s:?}"
                    )))
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter_bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

macro_rules! impl_bitop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&BitString> for &BitString {
            type Output = BitString;

            fn $method(self, rhs: &BitString) -> BitString {
                assert_eq!(self.len, rhs.len, "bit string length mismatch");
                let words = self
                    .words
                    .iter()
                    .zip(&rhs.words)
                    .map(|(a, b)| a $op b)
                    .collect();
                BitString { len: self.len, words }
            }
        }
    };
}

impl_bitop!(BitXor, bitxor, ^);
impl_bitop!(BitAnd, bitand, &);
impl_bitop!(BitOr, bitor, |);

/// Number of 1-bits of `x` (the Hamming weight |x|).
pub fn popcount(x: &BitString) -> usize {
    x.popcount()
}

/// Hamming distance |x xor y|.
pub fn hamming(x: &BitString, y: &BitString) -> Result<usize> {
    x.check_len(y)?;
    Ok((x ^ y).popcount())
}

/// Project `x` through the mask `t`: the string of length |t| made of the
/// bits of `x` at the positions where `t` is 1, in position order.
pub fn masked_project(x: &BitString, t: &BitString) -> Result<BitString> {
    x.check_len(t)?;
    let mut out = BitString::zeros(t.popcount());
    let mut k = 0;
    for i in 0..t.len() {
        if t.get(i) {
            out.set(k, x.get(i));
            k += 1;
        }
    }
    Ok(out)
}

/// The sphere of radius `r` around `center`: all strings at Hamming
/// distance exactly `r`.
#[derive(Clone, Debug)]
pub struct Sphere {
    center: BitString,
    radius: usize,
}

impl Sphere {
    pub fn new(center: BitString, radius: usize) -> Result<Self> {
        if radius > center.len() {
            return Err(Error::RadiusOutOfRange {
                radius,
                n: center.len(),
            });
        }
        Ok(Sphere { center, radius })
    }

    pub fn center(&self) -> &BitString {
        &self.center
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// binomial(n, r), the number of members.
    pub fn cardinality(&self) -> BigInt {
        crate::krawtchouk::binomial(self.center.len(), self.radius)
    }

    pub fn members(&self) -> SphereMembers {
        SphereMembers::new(self.center.clone(), self.radius)
    }
}

/// Lazily yield all strings at Hamming distance exactly `r` from `center`.
/// The members are never materialized as a whole.
pub fn sphere_members(center: &BitString, r: usize) -> Result<SphereMembers> {
    let n = center.len();
    if r > n {
        return Err(Error::RadiusOutOfRange { radius: r, n });
    }
    if n > ENUM_LIMIT {
        return Err(Error::DimensionOverLimit { n, limit: ENUM_LIMIT });
    }
    Ok(SphereMembers::new(center.clone(), r))
}

/// Iterator over sphere members: walks the size-`r` subsets of positions
/// in lexicographic order and flips them on the center.
pub struct SphereMembers {
    center: BitString,
    positions: Vec<usize>,
    done: bool,
}

impl SphereMembers {
    fn new(center: BitString, r: usize) -> Self {
        let n = center.len();
        SphereMembers {
            center,
            positions: (0..r).collect(),
            done: r > n,
        }
    }
}

impl Iterator for SphereMembers {
    type Item = BitString;

    fn next(&mut self) -> Option<BitString> {
        if self.done {
            return None;
        }
        let mut member = self.center.clone();
        for &p in &self.positions {
            member.set(p, !member.get(p));
        }

        // Advance to the next combination.
        let n = self.center.len();
        let r = self.positions.len();
        if r == 0 {
            self.done = true;
            return Some(member);
        }
        let mut i = r;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.positions[i] < n - (r - i) {
                self.positions[i] += 1;
                for j in i + 1..r {
                    self.positions[j] = self.positions[j - 1] + 1;
                }
                break;
            }
        }
        Some(member)
    }
}

/// All strings of length `n`, in index order (requires `n <= ENUM_LIMIT`).
pub fn all_strings(n: usize) -> Result<impl Iterator<Item = BitString>> {
    if n > ENUM_LIMIT {
        return Err(Error::DimensionOverLimit { n, limit: ENUM_LIMIT });
    }
    Ok((0usize..1 << n).map(move |i| BitString::from_index(i, n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use std::collections::HashSet;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn popcount_examples() {
        assert_eq!(popcount(&bs("0000")), 0);
        assert_eq!(popcount(&bs("0101")), 2);
        assert_eq!(popcount(&bs("1111")), 4);
    }

    #[test]
    fn parse_roundtrip_and_leftmost_convention() {
        let s = bs("1000");
        assert!(s.get(0));
        assert!(!s.get(3));
        assert_eq!(s.to_string(), "1000");
        assert_eq!(BitString::unit(4, 0), s);
        assert_eq!(BitString::unit(4, 2), bs("0010"));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("01x1".parse::<BitString>().is_err());
    }

    #[test]
    fn xor_self_is_zero() {
        let x = bs("1011001");
        assert!((&x ^ &x).is_zero());
    }

    #[test]
    fn masked_project_examples() {
        assert_eq!(masked_project(&bs("1010"), &bs("1100")).unwrap(), bs("10"));
        let empty = masked_project(&bs("1010"), &bs("0000")).unwrap();
        assert_eq!(empty.len(), 0);
        // positions 2 and 4 of x = 0110
        assert_eq!(masked_project(&bs("0110"), &bs("0101")).unwrap(), bs("10"));
        assert!(masked_project(&bs("10"), &bs("100")).is_err());
    }

    #[test]
    fn masked_popcount_identity() {
        let x = bs("1011010011");
        let t = bs("0111001100");
        assert_eq!(
            masked_project(&x, &t).unwrap().popcount(),
            (&x & &t).popcount()
        );
    }

    #[test]
    fn sphere_examples() {
        let members: Vec<_> = sphere_members(&bs("00"), 0)
            .unwrap()
            .map(|m| m.to_string())
            .collect();
        assert_eq!(members, vec!["00"]);

        let members: HashSet<_> = sphere_members(&bs("00"), 1)
            .unwrap()
            .map(|m| m.to_string())
            .collect();
        assert_eq!(members, HashSet::from(["10".to_string(), "01".to_string()]));

        let members: Vec<_> = sphere_members(&bs("101"), 3)
            .unwrap()
            .map(|m| m.to_string())
            .collect();
        assert_eq!(members, vec!["010"]);
    }

    #[test]
    fn sphere_radius_errors() {
        assert!(sphere_members(&bs("101"), 4).is_err());
        assert!(Sphere::new(bs("101"), 4).is_err());
    }

    #[test]
    fn sphere_cardinality_and_symmetry() {
        let x = bs("110100");
        for r in 0..=6 {
            let sphere = Sphere::new(x.clone(), r).unwrap();
            let members: Vec<_> = sphere.members().collect();
            assert_eq!(
                members.len(),
                sphere.cardinality().to_usize().unwrap(),
                "radius {r}"
            );
            // binomial symmetry with the complementary radius
            let other = Sphere::new(x.clone(), 6 - r).unwrap();
            assert_eq!(sphere.cardinality(), other.cardinality());
            for y in &members {
                assert_eq!(hamming(&x, y).unwrap(), r);
            }
        }
    }

    #[test]
    fn sphere_no_duplicates() {
        let x = bs("10110");
        let members: Vec<_> = sphere_members(&x, 2).unwrap().collect();
        let set: HashSet<_> = members.iter().cloned().collect();
        assert_eq!(set.len(), members.len());
        assert_eq!(members.len(), 10);
    }

    #[test]
    fn multiword_strings() {
        let mut x = BitString::zeros(130);
        x.set(0, true);
        x.set(64, true);
        x.set(129, true);
        assert_eq!(x.popcount(), 3);
        let y = x.complement();
        assert_eq!(y.popcount(), 127);
        assert_eq!((&x ^ &y).popcount(), 130);
        let s = x.to_string();
        assert_eq!(s.len(), 130);
        assert_eq!(s.parse::<BitString>().unwrap(), x);
    }
}
