//! Exact finite-set arithmetic: sumsets, difference sets, restricted sumsets
//! and the classification built on them.
//!
//! Every operation works on the characteristic vector of the set translated
//! to start at zero, so a set of diameter `d` costs `O(|A| * d / 64)` word
//! operations regardless of where it sits on the number line.

use std::fmt;
use std::str::FromStr;

use crate::bits::BitSet;
use crate::error::{Error, Result};

/// Finite set of non-negative integers, kept sorted and duplicate free.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntegerSet {
    elements: Vec<u64>,
}

impl IntegerSet {
    pub fn new(mut elements: Vec<u64>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Self { elements }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The interval `[lo, hi]`.
    pub fn interval(lo: u64, hi: u64) -> Self {
        Self {
            elements: (lo..=hi).collect(),
        }
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn min(&self) -> Option<u64> {
        self.elements.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.elements.last().copied()
    }

    /// `max - min`, or 0 for the empty set.
    pub fn diameter(&self) -> u64 {
        match (self.min(), self.max()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        }
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.elements.iter().copied()
    }

    pub fn is_subset(&self, other: &IntegerSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    /// Elements of `self` not in `other`.
    pub fn difference(&self, other: &IntegerSet) -> IntegerSet {
        Self {
            elements: self.iter().filter(|&x| !other.contains(x)).collect(),
        }
    }

    /// `max(A) - A`.
    pub fn reflect(&self) -> IntegerSet {
        let Some(hi) = self.max() else {
            return Self::empty();
        };
        Self {
            elements: self.elements.iter().rev().map(|&x| hi - x).collect(),
        }
    }

    /// `c * A + d`.
    pub fn affine_image(&self, c: u64, d: u64) -> Result<IntegerSet> {
        let elements = self
            .iter()
            .map(|x| x.checked_mul(c).and_then(|y| y.checked_add(d)))
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::Overflow("applying affine map"))?;
        Ok(Self::new(elements))
    }

    pub fn translate(&self, d: u64) -> Result<IntegerSet> {
        self.affine_image(1, d)
    }

    /// Characteristic vector of `A - min(A)`, together with `min(A)`.
    fn normalized_bits(&self) -> (u64, BitSet) {
        let lo = self.min().unwrap_or(0);
        let width = self.diameter() as usize + 1;
        let bits = BitSet::from_indices(width, self.iter().map(|x| (x - lo) as usize));
        (lo, bits)
    }

    fn from_bits(bits: &BitSet, offset: u64) -> Self {
        Self {
            elements: bits.iter().map(|i| i as u64 + offset).collect(),
        }
    }
}

impl FromIterator<u64> for IntegerSet {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

impl From<Vec<u64>> for IntegerSet {
    fn from(v: Vec<u64>) -> Self {
        Self::new(v)
    }
}

impl<const N: usize> From<[u64; N]> for IntegerSet {
    fn from(v: [u64; N]) -> Self {
        Self::new(v.to_vec())
    }
}

impl fmt::Display for IntegerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_braced(f, self.iter())
    }
}

fn write_braced<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    items: impl Iterator<Item = T>,
) -> fmt::Result {
    f.write_str("{")?;
    for (i, x) in items.enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("}")
}

/// Parses `{a1,a2,...}`. Order and duplicates are not significant.
impl FromStr for IntegerSet {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let err = |offset: usize, message: &str| Error::Parse {
            offset,
            message: message.to_string(),
        };
        let start = text.len() - text.trim_start().len();
        let trimmed = text.trim();
        let inner = trimmed
            .strip_prefix('{')
            .ok_or_else(|| err(start, "expected '{'"))?
            .strip_suffix('}')
            .ok_or_else(|| err(start + trimmed.len(), "expected '}'"))?;
        let mut elements = Vec::new();
        if inner.trim().is_empty() {
            return Ok(Self::empty());
        }
        let mut offset = start + 1;
        for piece in inner.split(',') {
            let lead = piece.len() - piece.trim_start().len();
            let token = piece.trim();
            let value = token
                .parse::<u64>()
                .map_err(|_| err(offset + lead, "expected a non-negative integer"))?;
            elements.push(value);
            offset += piece.len() + 1;
        }
        Ok(Self::new(elements))
    }
}

/// Finite set of integers. Difference sets live here.
///
/// Stored as a bit vector where element `x` occupies bit `x + shift`; for a
/// difference set `shift` is the diameter of the operand.
#[derive(Clone, Debug)]
pub struct SignedIntegerSet {
    shift: u64,
    bits: BitSet,
}

impl SignedIntegerSet {
    pub fn from_elements<I: IntoIterator<Item = i64>>(items: I) -> Self {
        let items: Vec<i64> = items.into_iter().collect();
        let lo = items.iter().copied().min().unwrap_or(0).min(0);
        let hi = items.iter().copied().max().unwrap_or(0).max(0);
        let shift = lo.unsigned_abs();
        let bits = BitSet::from_indices(
            (hi - lo) as usize + 1,
            items.iter().map(|&x| (x - lo) as usize),
        );
        Self { shift, bits }
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn contains(&self, x: i64) -> bool {
        let idx = x + self.shift as i64;
        idx >= 0 && self.bits.contains(idx as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        let shift = self.shift as i64;
        self.bits.iter().map(move |i| i as i64 - shift)
    }

    pub fn to_vec(&self) -> Vec<i64> {
        self.iter().collect()
    }

    /// The strictly positive elements.
    pub fn positive(&self) -> IntegerSet {
        IntegerSet {
            elements: self.iter().filter(|&x| x > 0).map(|x| x as u64).collect(),
        }
    }

    pub fn negate(&self) -> SignedIntegerSet {
        Self::from_elements(self.iter().map(|x| -x))
    }
}

impl PartialEq for SignedIntegerSet {
    fn eq(&self, other: &Self) -> bool {
        self.iter().eq(other.iter())
    }
}

impl Eq for SignedIntegerSet {}

impl fmt::Display for SignedIntegerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_braced(f, self.iter())
    }
}

/// `A + A`.
pub fn sumset(a: &IntegerSet) -> IntegerSet {
    if a.is_empty() {
        return IntegerSet::empty();
    }
    let (lo, bits) = a.normalized_bits();
    let mut out = BitSet::new(2 * bits.capacity() - 1);
    for x in bits.iter() {
        out.or_shifted(&bits, x);
    }
    IntegerSet::from_bits(&out, 2 * lo)
}

/// `A - A`, symmetric about zero.
pub fn difference_set(a: &IntegerSet) -> SignedIntegerSet {
    if a.is_empty() {
        return SignedIntegerSet {
            shift: 0,
            bits: BitSet::new(0),
        };
    }
    let (_, bits) = a.normalized_bits();
    let diam = bits.capacity() - 1;
    let mut out = BitSet::new(2 * diam + 1);
    for x in bits.iter() {
        out.or_shifted(&bits, diam - x);
    }
    SignedIntegerSet {
        shift: diam as u64,
        bits: out,
    }
}

/// `A +^ A`: sums of two distinct elements.
pub fn restricted_sumset(a: &IntegerSet) -> IntegerSet {
    if a.len() < 2 {
        return IntegerSet::empty();
    }
    let (lo, bits) = a.normalized_bits();
    let width = bits.capacity();
    let mut above = BitSet::new(width);
    let mut out = BitSet::new(2 * width - 1);
    let members: Vec<usize> = bits.iter().collect();
    for &x in members.iter().rev() {
        out.or_shifted(&above, x);
        above.insert(x);
    }
    IntegerSet::from_bits(&out, 2 * lo)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SetKind {
    Mstd,
    Balanced,
    DifferenceDominated,
}

impl fmt::Display for SetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SetKind::Mstd => "MSTD",
            SetKind::Balanced => "balanced",
            SetKind::DifferenceDominated => "difference-dominated",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub kind: SetKind,
    pub rsd: bool,
    /// `|A+A| - |A-A|`
    pub gap: i64,
    /// `|A+^A| - |A-A|`
    pub restricted_gap: i64,
    pub sum_card: usize,
    pub diff_card: usize,
    pub restricted_sum_card: usize,
}

pub fn classify(a: &IntegerSet) -> Result<Classification> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let sum_card = sumset(a).len();
    let diff_card = difference_set(a).len();
    let restricted_sum_card = restricted_sumset(a).len();
    let gap = sum_card as i64 - diff_card as i64;
    let kind = match gap {
        g if g > 0 => SetKind::Mstd,
        0 => SetKind::Balanced,
        _ => SetKind::DifferenceDominated,
    };
    let restricted_gap = restricted_sum_card as i64 - diff_card as i64;
    Ok(Classification {
        kind,
        rsd: restricted_gap > 0,
        gap,
        restricted_gap,
        sum_card,
        diff_card,
        restricted_sum_card,
    })
}

/// `ln|A+A| / ln|A-A|`.
pub fn ratio(a: &IntegerSet) -> Result<f64> {
    let diff_card = difference_set(a).len();
    if diff_card < 2 {
        return Err(Error::RatioUndefined(diff_card));
    }
    Ok((sumset(a).len() as f64).ln() / (diff_card as f64).ln())
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Canonical representative of the affine class of `A`: translated to start
/// at 0, divided by the gcd of its differences, then the lexicographically
/// smaller of itself and its reflection.
pub fn affine_normalize(a: &IntegerSet) -> IntegerSet {
    let Some(lo) = a.min() else {
        return IntegerSet::empty();
    };
    let g = a.iter().fold(0, |g, x| gcd(g, x - lo)).max(1);
    let shifted = IntegerSet {
        elements: a.iter().map(|x| (x - lo) / g).collect(),
    };
    let reflected = shifted.reflect();
    if reflected.elements < shifted.elements {
        reflected
    } else {
        shifted
    }
}

/// `A_{k,m} = { sum_i a_i m^(i-1) : a_i in A }`.
///
/// Requires `m >= 2 max(A) + 1`, which keeps every digit of a sum or
/// difference of two expansions inside `(-m, m)`.
pub fn base_expand(a: &IntegerSet, k: u32, m: u64) -> Result<IntegerSet> {
    if k == 0 {
        return Err(crate::error::invalid("expansion length k must be positive"));
    }
    let threshold = 2 * a.max().unwrap_or(0) + 1;
    if m < threshold {
        return Err(Error::BaseTooSmall { base: m, threshold });
    }
    let mut acc: Vec<u64> = vec![0];
    let mut place: u64 = 1;
    for i in 0..k {
        let mut next = Vec::with_capacity(acc.len() * a.len());
        for &partial in &acc {
            for digit in a.iter() {
                let term = digit
                    .checked_mul(place)
                    .and_then(|t| t.checked_add(partial))
                    .ok_or(Error::Overflow("expanding in base m"))?;
                next.push(term);
            }
        }
        acc = next;
        if i + 1 < k {
            place = place
                .checked_mul(m)
                .ok_or(Error::Overflow("expanding in base m"))?;
        }
    }
    Ok(IntegerSet::new(acc))
}
