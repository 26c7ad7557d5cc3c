//! Generators for the block-structured MSTD families and a membership
//! parser for the family grammar
//!
//! ```text
//! 1,1,2, M^{k1}, M^{k2}, ..., M^{kl}, tail      M^k = 1,4,...,4,3  (k fours)
//! tail in { 1,1 | 1,1,2 | 1,1,2,1 }
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::scd::Scd;
use crate::setcore::IntegerSet;

pub const PREFIX: [u64; 3] = [1, 1, 2];

/// The three periodic subfamilies, distinguished by their tail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// tail `1,1,2,1`
    S,
    /// tail `1,1,2`
    SPrime,
    /// tail `1,1`
    SDoublePrime,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::S, Variant::SPrime, Variant::SDoublePrime];

    pub fn tail(self) -> Tail {
        match self {
            Variant::S => Tail::T1121,
            Variant::SPrime => Tail::T112,
            Variant::SDoublePrime => Tail::T11,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::S => "S",
            Variant::SPrime => "S'",
            Variant::SDoublePrime => "S''",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "S" | "s" => Ok(Variant::S),
            "S'" | "s'" | "Sp" | "sp" | "S1" => Ok(Variant::SPrime),
            "S''" | "s''" | "Spp" | "spp" | "S2" => Ok(Variant::SDoublePrime),
            _ => Err(invalid(format!(
                "unknown variant {s:?} (expected S, Sp or Spp)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tail {
    T11,
    T112,
    T1121,
}

impl Tail {
    pub const ALL: [Tail; 3] = [Tail::T11, Tail::T112, Tail::T1121];

    pub fn diffs(self) -> &'static [u64] {
        match self {
            Tail::T11 => &[1, 1],
            Tail::T112 => &[1, 1, 2],
            Tail::T1121 => &[1, 1, 2, 1],
        }
    }

    fn matching(rest: &[u64]) -> Option<Tail> {
        Tail::ALL.into_iter().find(|t| t.diffs() == rest)
    }
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tail::T11 => "T11",
            Tail::T112 => "T112",
            Tail::T1121 => "T1121",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilyParams {
    pub k: u64,
    pub l: u64,
    pub variant: Variant,
}

impl FamilyParams {
    pub fn new(k: u64, l: u64, variant: Variant) -> Result<Self> {
        if k == 0 || l == 0 {
            return Err(invalid(format!(
                "k and l must be positive (got k={k}, l={l})"
            )));
        }
        Ok(Self { k, l, variant })
    }
}

/// `1, 4^k, 3`.
pub fn m_block(k: u64) -> Result<Vec<u64>> {
    if k == 0 {
        return Err(invalid("M-block needs at least one 4"));
    }
    let mut block = Vec::with_capacity(k as usize + 2);
    block.push(1);
    block.extend(std::iter::repeat_n(4, k as usize));
    block.push(3);
    Ok(block)
}

/// `S_{k,l}`, `S'_{k,l}` or `S''_{k,l}`: the prefix `1,1,2`, then `M^k`
/// repeated `l` times, then the variant's tail.
pub fn gen_periodic(params: FamilyParams) -> Scd {
    let block = m_block(params.k).expect("FamilyParams guarantees k >= 1");
    let mut diffs = PREFIX.to_vec();
    for _ in 0..params.l {
        diffs.extend_from_slice(&block);
    }
    diffs.extend_from_slice(params.variant.tail().diffs());
    Scd::new(0, diffs).expect("positive differences")
}

/// `A_{k,l}` for `k >= 4`: `1^(k-2),2`, then `1,k,(k+1)^(k-4),3` repeated
/// `l` times, then `1^(k-2),2,1`. `A_{4,l}` coincides with `S_{1,l}`.
pub fn gen_a(k: u64, l: u64) -> Result<Scd> {
    if k < 4 {
        return Err(invalid(format!("A_(k,l) needs k >= 4 (got {k})")));
    }
    if l == 0 {
        return Err(invalid("A_(k,l) needs l >= 1"));
    }
    let ones = (k - 2) as usize;
    let mut block = vec![1, k];
    block.extend(std::iter::repeat_n(k + 1, (k - 4) as usize));
    block.push(3);
    let mut diffs: Vec<u64> = std::iter::repeat_n(1, ones).collect();
    diffs.push(2);
    for _ in 0..l {
        diffs.extend_from_slice(&block);
    }
    diffs.extend(std::iter::repeat_n(1, ones));
    diffs.extend([2, 1]);
    Scd::new(0, diffs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedSet {
    S2,
    S4,
    A4,
    A12,
    A15,
}

impl NamedSet {
    pub const ALL: [NamedSet; 5] = [
        NamedSet::S2,
        NamedSet::S4,
        NamedSet::A4,
        NamedSet::A12,
        NamedSet::A15,
    ];
}

impl FromStr for NamedSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "S2" => Ok(NamedSet::S2),
            "S4" => Ok(NamedSet::S4),
            "A4" => Ok(NamedSet::A4),
            "A12" => Ok(NamedSet::A12),
            "A15" => Ok(NamedSet::A15),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

pub fn gen_named(name: NamedSet) -> IntegerSet {
    let elements: &[u64] = match name {
        NamedSet::S2 | NamedSet::A12 => &[0, 1, 2, 4, 5, 9, 12, 13, 14, 16, 17],
        NamedSet::S4 => &[0, 1, 2, 4, 5, 9, 12, 13, 17, 20, 21, 22, 24, 25],
        NamedSet::A4 => &[0, 1, 2, 4, 5, 9, 12, 13, 14],
        NamedSet::A15 => &[
            0, 1, 2, 4, 5, 9, 12, 13, 17, 20, 21, 22, 24, 25, 29, 32, 33, 37, 40, 41, 42, 44, 45,
        ],
    };
    IntegerSet::new(elements.to_vec())
}

/// `{start, start + step, ..., last}`.
fn progression(start: u64, step: u64, last: u64) -> impl Iterator<Item = u64> {
    (start..=last).step_by(step as usize)
}

/// `T'_j` (`primed`) or `T_j`, whose `1 mod 8` block runs one step further.
pub fn gen_t(j: u64, primed: bool) -> Result<IntegerSet> {
    if j == 0 {
        return Err(invalid("T_j needs j >= 1"));
    }
    let ones_end = if primed { 1 + 8 * j } else { 1 + 8 * (j + 1) };
    let elements = [0, 2]
        .into_iter()
        .chain(progression(1, 8, ones_end))
        .chain(progression(4, 8, 4 + 8 * j))
        .chain(progression(5, 8, 5 + 8 * j))
        .chain([6 + 8 * j, 8 * (j + 1)]);
    Ok(elements.collect())
}

pub fn gen_r(j: u64) -> Result<IntegerSet> {
    if j == 0 {
        return Err(invalid("R_j needs j >= 1"));
    }
    let elements = [1, 4]
        .into_iter()
        .chain(progression(0, 12, 12 * j))
        .chain(progression(2, 12, 2 + 12 * j))
        .chain(progression(7, 12, 7 + 12 * j))
        .chain(progression(8, 12, 8 + 12 * j))
        .chain([3 + 12 * j, 6 + 12 * j]);
    Ok(elements.collect())
}

const HIGH_RATIO_PREFIX: [u64; 10] = [1, 1, 2, 1, 4, 3, 1, 4, 4, 3];
const HIGH_RATIO_SUFFIX: [u64; 10] = [1, 4, 4, 3, 1, 4, 3, 1, 1, 2];

/// `1,1,2, M^1, M^2, (M^3)^l, M^2, M^1, 1,1,2[,1]`: the sets with
/// `log|A+A| / log|A-A|` above 1.03.
pub fn gen_high_ratio(l: u64, closed: bool) -> Result<Scd> {
    if l == 0 {
        return Err(invalid("l must be positive"));
    }
    let mut diffs = HIGH_RATIO_PREFIX.to_vec();
    for _ in 0..l {
        diffs.extend_from_slice(&[1, 4, 4, 4, 3]);
    }
    diffs.extend_from_slice(&HIGH_RATIO_SUFFIX);
    if closed {
        diffs.push(1);
    }
    Scd::new(0, diffs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tier {
    /// `1,1,2`, M-blocks, tail.
    Strict,
    /// Like strict, but further `1,1,2` separators may sit between M-blocks.
    Extended,
    None,
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tier::Strict => "strict",
            Tier::Extended => "extended",
            Tier::None => "none",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FMembership {
    pub member: bool,
    /// Number of fours in each M-block, in order.
    pub exponents: Vec<u64>,
    pub tail: Option<Tail>,
    pub tier: Tier,
    /// Indices into `exponents` of blocks preceded by an interior `1,1,2`.
    /// Empty unless the tier is extended.
    pub separators: Vec<usize>,
}

impl FMembership {
    fn none() -> Self {
        Self {
            member: false,
            exponents: Vec::new(),
            tail: None,
            tier: Tier::None,
            separators: Vec::new(),
        }
    }

    /// Rebuilds the SCD described by a positive membership.
    pub fn to_scd(&self) -> Option<Scd> {
        let tail = self.tail.filter(|_| self.member)?;
        let mut diffs = PREFIX.to_vec();
        for (i, &k) in self.exponents.iter().enumerate() {
            if self.separators.contains(&i) {
                diffs.extend_from_slice(&PREFIX);
            }
            diffs.extend(m_block(k).ok()?);
        }
        diffs.extend_from_slice(tail.diffs());
        Scd::new(0, diffs).ok()
    }
}

/// Parses an SCD against the family grammar. Only base 0 is admitted.
pub fn is_member_f(scd: &Scd) -> FMembership {
    let d = scd.diffs();
    if scd.base() != 0 || !d.starts_with(&PREFIX) {
        return FMembership::none();
    }
    let mut pos = PREFIX.len();
    let mut exponents = Vec::new();
    let mut separators = Vec::new();
    loop {
        let rest = &d[pos..];
        if rest.starts_with(&[1, 4]) {
            let fours = rest[1..].iter().take_while(|&&x| x == 4).count();
            if rest.get(1 + fours) != Some(&3) {
                return FMembership::none();
            }
            exponents.push(fours as u64);
            pos += fours + 2;
            continue;
        }
        if exponents.is_empty() {
            return FMembership::none();
        }
        if let Some(tail) = Tail::matching(rest) {
            let tier = if separators.is_empty() {
                Tier::Strict
            } else {
                Tier::Extended
            };
            return FMembership {
                member: true,
                exponents,
                tail: Some(tail),
                tier,
                separators,
            };
        }
        if rest.starts_with(&[1, 1, 2, 1, 4]) {
            separators.push(exponents.len());
            pos += PREFIX.len();
            continue;
        }
        return FMembership::none();
    }
}

/// Compositions of `total` into parts `>= 2`, lexicographic.
fn compositions_min2(total: u64, out: &mut Vec<Vec<u64>>, current: &mut Vec<u64>) {
    if total == 0 {
        if !current.is_empty() {
            out.push(current.clone());
        }
        return;
    }
    for part in 2..=total {
        if total - part == 1 {
            continue;
        }
        current.push(part);
        compositions_min2(total - part, out, current);
        current.pop();
    }
}

fn strict_members_of_diameter(diameter: u64) -> Vec<Scd> {
    let mut members = Vec::new();
    let prefix_sum: u64 = PREFIX.iter().sum();
    for tail in Tail::ALL {
        let tail_sum: u64 = tail.diffs().iter().sum();
        let Some(body) = diameter.checked_sub(prefix_sum + tail_sum) else {
            continue;
        };
        // each M^k sums to 4(k+1)
        if body % 4 != 0 || body < 8 {
            continue;
        }
        let mut parts = Vec::new();
        compositions_min2(body / 4, &mut parts, &mut Vec::new());
        for p in parts {
            let m = FMembership {
                member: true,
                exponents: p.iter().map(|x| x - 1).collect(),
                tail: Some(tail),
                tier: Tier::Strict,
                separators: Vec::new(),
            };
            members.push(m.to_scd().expect("valid membership"));
        }
    }
    members
}

/// Every strict-tier member with diameter `<= max_diameter`, in
/// nondecreasing diameter order. The smallest member, `(0|1,1,2,1,4,3,1,1)`,
/// has diameter 14.
pub fn enumerate_f(max_diameter: u64) -> impl Iterator<Item = Scd> {
    (0..=max_diameter).flat_map(strict_members_of_diameter)
}
