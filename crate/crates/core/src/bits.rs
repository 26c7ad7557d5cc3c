//! Multi-word bit vector used as the characteristic vector of a finite set.

const WORD: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitSet {
    nbits: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(nbits: usize) -> Self {
        Self {
            nbits,
            words: vec![0; nbits.div_ceil(WORD)],
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(nbits: usize, indices: I) -> Self {
        let mut bits = Self::new(nbits);
        for i in indices {
            bits.insert(i);
        }
        bits
    }

    /// Capacity in bits.
    pub fn capacity(&self) -> usize {
        self.nbits
    }

    pub fn insert(&mut self, idx: usize) {
        assert!(
            idx < self.nbits,
            "bit {idx} outside capacity {}",
            self.nbits
        );
        self.words[idx / WORD] |= 1 << (idx % WORD);
    }

    pub fn contains(&self, idx: usize) -> bool {
        idx < self.nbits && self.words[idx / WORD] & (1 << (idx % WORD)) != 0
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// `self |= src << shift`. Bits pushed past the capacity are a caller bug.
    pub fn or_shifted(&mut self, src: &BitSet, shift: usize) {
        debug_assert!(
            src.last_one().is_none_or(|top| top + shift < self.nbits),
            "shifted bit outside capacity"
        );
        let (ws, bs) = (shift / WORD, shift % WORD);
        let len = self.words.len();
        for (i, &w) in src.words.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let j = i + ws;
            if j < len {
                self.words[j] |= w << bs;
            }
            if bs != 0 && j + 1 < len {
                self.words[j + 1] |= w >> (WORD - bs);
            }
        }
    }

    pub fn last_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * WORD + (WORD - 1 - w.leading_zeros() as usize))
    }

    pub fn iter(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }
}

/// Iterator over set bit positions in increasing order.
pub struct Ones<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let tz = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + tz);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}
