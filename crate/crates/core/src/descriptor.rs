//! Target spectrum families.
//!
//! `S{i}n` is `{0,..,n} \ {i}`. `S{i,j}n^m` is `{0,..,n}` with `m` doubled and
//! `i`, `j` removed. Both have exactly `n` elements.

use std::fmt;
use std::str::FromStr;

use crate::error::DescriptorError;
use crate::spectra::{complement_spectrum, join_spectrum, SpectrumMultiset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SingleMissing {
    pub i: usize,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DoubledMissingPair {
    pub i: usize,
    pub j: usize,
    pub n: usize,
    pub m: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SetDescriptor {
    Single(SingleMissing),
    Pair(DoubledMissingPair),
}

impl SingleMissing {
    pub fn new(i: usize, n: usize) -> Result<Self, DescriptorError> {
        if i == 0 || i > n {
            return Err(DescriptorError::Invalid(format!("S{{{i}}}{n} needs 0 < i <= n")));
        }
        Ok(SingleMissing { i, n })
    }

    pub fn expand(&self) -> SpectrumMultiset {
        SpectrumMultiset::from_values((0..=self.n).filter(|&v| v != self.i))
    }
}

impl DoubledMissingPair {
    pub fn new(i: usize, j: usize, n: usize, m: usize) -> Result<Self, DescriptorError> {
        let d = DoubledMissingPair { i, j, n, m };
        if i == 0 || i >= j || j > n {
            return Err(DescriptorError::Invalid(format!("{d} needs 0 < i < j <= n")));
        }
        if m == 0 || m > n {
            return Err(DescriptorError::Invalid(format!("{d} needs 1 <= m <= n")));
        }
        if m == i || m == j {
            return Err(DescriptorError::Invalid(format!("{d} doubles a missing value")));
        }
        Ok(d)
    }

    pub fn expand(&self) -> SpectrumMultiset {
        let values = (0..=self.n)
            .filter(|&v| v != self.i && v != self.j)
            .chain(std::iter::once(self.m));
        SpectrumMultiset::from_values(values)
    }

    /// `S{n−j+1, n−i+1}_{n+1}^{n+1−m}`: the spectrum of `complement(G) ∨ K_1`
    /// when `G` realizes `self`.
    pub fn dual(&self) -> DoubledMissingPair {
        let n = self.n;
        DoubledMissingPair { i: n - self.j + 1, j: n - self.i + 1, n: n + 1, m: n + 1 - self.m }
    }

    pub fn parity_check(&self) -> ParityClass {
        let residue = self.n % 4;
        let same = (self.i + self.j) % 2 == self.m % 2;
        let compatible = if matches!(residue, 0 | 3) { same } else { !same };
        ParityClass {
            residue,
            verdict: if compatible { ParityVerdict::Compatible } else { ParityVerdict::Incompatible },
        }
    }

    /// Whether the symbolic dual agrees with the multiset transforms
    /// `σ(complement(G) ∨ K_1)` and `σ(complement(G ∪ K_1))`.
    pub fn transform_consistency(&self) -> bool {
        let s = self.expand();
        let target = self.dual().expand();
        let via_join = complement_spectrum(&s, self.n).and_then(|c| join_spectrum(&c, &SpectrumMultiset::from_values([0])));
        let via_union = complement_spectrum(&s.union(&SpectrumMultiset::from_values([0])), self.n + 1);
        via_join.as_ref() == Ok(&target) && via_union.as_ref() == Ok(&target)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityVerdict {
    Compatible,
    Incompatible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParityClass {
    /// `n mod 4`.
    pub residue: usize,
    pub verdict: ParityVerdict,
}

impl ParityClass {
    pub fn is_compatible(&self) -> bool {
        self.verdict == ParityVerdict::Compatible
    }
}

impl SetDescriptor {
    pub fn single(i: usize, n: usize) -> Result<Self, DescriptorError> {
        SingleMissing::new(i, n).map(SetDescriptor::Single)
    }

    pub fn pair(i: usize, j: usize, n: usize, m: usize) -> Result<Self, DescriptorError> {
        DoubledMissingPair::new(i, j, n, m).map(SetDescriptor::Pair)
    }

    pub fn order(&self) -> usize {
        match self {
            SetDescriptor::Single(d) => d.n,
            SetDescriptor::Pair(d) => d.n,
        }
    }

    pub fn expand(&self) -> SpectrumMultiset {
        match self {
            SetDescriptor::Single(d) => d.expand(),
            SetDescriptor::Pair(d) => d.expand(),
        }
    }

    /// `S{i}n → S{i+1,n+2}_{n+3}^1` and `S{i,j}n^m → S{i+1,j+1}_{n+2}^{m+1}`.
    pub fn shift(&self) -> SetDescriptor {
        match *self {
            SetDescriptor::Single(SingleMissing { i, n }) => {
                SetDescriptor::Pair(DoubledMissingPair { i: i + 1, j: n + 2, n: n + 3, m: 1 })
            }
            SetDescriptor::Pair(DoubledMissingPair { i, j, n, m }) => {
                SetDescriptor::Pair(DoubledMissingPair { i: i + 1, j: j + 1, n: n + 2, m: m + 1 })
            }
        }
    }
}

impl From<SingleMissing> for SetDescriptor {
    fn from(d: SingleMissing) -> Self {
        SetDescriptor::Single(d)
    }
}

impl From<DoubledMissingPair> for SetDescriptor {
    fn from(d: DoubledMissingPair) -> Self {
        SetDescriptor::Pair(d)
    }
}

/// Inverse of `expand`. `None` when the multiset has neither shape.
pub fn recognize(s: &SpectrumMultiset) -> Option<SetDescriptor> {
    let n = s.order();
    if n == 0 || s.multiplicity(0) != 1 || s.max_value()? > n {
        return None;
    }
    let doubled: Vec<usize> = s.entries().iter().filter(|&&(_, m)| m > 1).map(|&(v, _)| v).collect();
    let missing: Vec<usize> = (1..=n).filter(|&v| !s.contains(v)).collect();
    match (doubled.as_slice(), missing.as_slice()) {
        ([], &[i]) => Some(SetDescriptor::Single(SingleMissing { i, n })),
        (&[m], &[i, j]) if s.multiplicity(m) == 2 => {
            Some(SetDescriptor::Pair(DoubledMissingPair { i, j, n, m }))
        }
        _ => None,
    }
}

impl fmt::Display for SingleMissing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{{{}}}{}", self.i, self.n)
    }
}

impl fmt::Display for DoubledMissingPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{{{},{}}}{}^{}", self.i, self.j, self.n, self.m)
    }
}

impl fmt::Display for SetDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetDescriptor::Single(d) => d.fmt(f),
            SetDescriptor::Pair(d) => d.fmt(f),
        }
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
    base: usize,
}

impl Cursor<'_> {
    fn error(&self, reason: impl Into<String>) -> DescriptorError {
        DescriptorError::Parse { position: self.base + self.pos, reason: reason.into() }
    }

    fn expect(&mut self, c: u8) -> Result<(), DescriptorError> {
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        let hit = self.s.get(self.pos) == Some(&c);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn number(&mut self) -> Result<usize, DescriptorError> {
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| DescriptorError::Parse { position: self.base + start, reason: "number too large".into() })
    }
}

/// Parses a descriptor token at the start of `s`, returning it with the
/// number of bytes consumed. `base` offsets reported error positions.
pub(crate) fn parse_prefix(s: &str, base: usize) -> Result<(SetDescriptor, usize), DescriptorError> {
    let mut c = Cursor { s: s.as_bytes(), pos: 0, base };
    c.expect(b'S')?;
    c.expect(b'{')?;
    let i = c.number()?;
    let j = if c.eat(b',') { Some(c.number()?) } else { None };
    c.expect(b'}')?;
    let n = c.number()?;
    let d = match j {
        Some(j) => {
            c.expect(b'^')?;
            let m = c.number()?;
            SetDescriptor::pair(i, j, n, m)?
        }
        None => SetDescriptor::single(i, n)?,
    };
    Ok((d, c.pos))
}

impl FromStr for SetDescriptor {
    type Err = DescriptorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (d, used) = parse_prefix(s, 0)?;
        if used != s.len() {
            return Err(DescriptorError::Parse { position: used, reason: "trailing input".into() });
        }
        Ok(d)
    }
}
