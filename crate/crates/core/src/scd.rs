//! Sequence-of-consecutive-differences notation `(a | d1,...,dn)`.
//!
//! A set `{a1 < a2 < ... < an}` is written as its minimum followed by the
//! gaps between neighbours. The difference between two elements is the sum
//! of the run of gaps between them, which is what makes the notation handy
//! for reasoning about difference sets.

use std::fmt;
use std::str::FromStr;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::setcore::IntegerSet;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scd {
    base: u64,
    diffs: Vec<u64>,
}

impl Scd {
    pub fn new(base: u64, diffs: Vec<u64>) -> Result<Self> {
        if let Some(pos) = diffs.iter().position(|&d| d == 0) {
            return Err(crate::error::invalid(format!(
                "difference #{pos} is zero; differences must be positive"
            )));
        }
        Ok(Self { base, diffs })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn diffs(&self) -> &[u64] {
        &self.diffs
    }

    pub fn diameter(&self) -> u64 {
        self.diffs.iter().sum()
    }

    /// Number of elements of the represented set.
    pub fn cardinality(&self) -> usize {
        self.diffs.len() + 1
    }

    pub fn to_set(&self) -> IntegerSet {
        let mut elements = Vec::with_capacity(self.diffs.len() + 1);
        let mut x = self.base;
        elements.push(x);
        for &d in &self.diffs {
            x += d;
            elements.push(x);
        }
        IntegerSet::new(elements)
    }

    pub fn from_set(a: &IntegerSet) -> Result<Self> {
        let base = a.min().ok_or(Error::EmptySet)?;
        let diffs = a.elements().windows(2).map(|w| w[1] - w[0]).collect();
        Ok(Self { base, diffs })
    }

    /// All sums of nonempty runs of consecutive differences. Equal to the
    /// positive part of the difference set of [`Scd::to_set`].
    pub fn run_sums(&self) -> IntegerSet {
        let diam = self.diameter() as usize;
        let mut seen = BitSet::new(diam + 1);
        for start in 0..self.diffs.len() {
            let mut total = 0usize;
            for &d in &self.diffs[start..] {
                total += d as usize;
                seen.insert(total);
            }
        }
        seen.iter().map(|x| x as u64).collect()
    }
}

impl fmt::Display for Scd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|", self.base)?;
        for (i, d) in self.diffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn fail<T>(&self, message: &str) -> Result<T> {
        Err(Error::Parse {
            offset: self.pos,
            message: message.to_string(),
        })
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&format!("expected '{}'", c as char))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail("expected an integer");
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        digits.parse().map_err(|_| Error::Parse {
            offset: start,
            message: "integer out of range".to_string(),
        })
    }
}

/// Grammar: `"(" INT "|" [ POSINT { "," POSINT } ] ")"`, whitespace allowed
/// between tokens.
impl FromStr for Scd {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut cur = Cursor {
            bytes: text.as_bytes(),
            pos: 0,
        };
        cur.expect(b'(')?;
        let base = cur.integer()?;
        cur.expect(b'|')?;
        let mut diffs = Vec::new();
        if cur.peek() != Some(b')') {
            loop {
                cur.skip_ws();
                let at = cur.pos;
                let d = cur.integer()?;
                if d == 0 {
                    return Err(Error::Parse {
                        offset: at,
                        message: "differences must be positive".to_string(),
                    });
                }
                diffs.push(d);
                match cur.peek() {
                    Some(b',') => cur.pos += 1,
                    _ => break,
                }
            }
        }
        cur.expect(b')')?;
        if cur.peek().is_some() {
            return cur.fail("trailing input");
        }
        Ok(Self { base, diffs })
    }
}
