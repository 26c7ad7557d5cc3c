//! Exhaustive enumeration of the subsets of `[0, n]` that contain both
//! endpoints, looking for MSTD or RSD sets.
//!
//! The enumeration is a depth-first walk that decides interior elements in
//! mirrored pairs `(i, n - i)`, outermost first. Each step adds at most two
//! elements to a partial set and updates its sum and difference vectors
//! incrementally: with `n <= 40` a set fits in a `u64`, its sumset in a
//! `u128`, and its positive differences in a `u64`. Deciding pairs from the
//! outside in also lets the walk prune every reflection class down to one
//! canonical representative without ever visiting the other.
//!
//! The top levels of the walk are expanded into independent ranges that are
//! processed by a rayon pool and merged in range order, so results do not
//! depend on the number of workers.

use std::collections::HashMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::setcore::{affine_normalize, difference_set, restricted_sumset, sumset, IntegerSet};

pub const MAX_DIAMETER: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Predicate {
    Mstd,
    Rsd,
}

impl Predicate {
    /// Reference check through [`crate::setcore`].
    pub fn holds(self, a: &IntegerSet) -> bool {
        if a.is_empty() {
            return false;
        }
        let sums = match self {
            Predicate::Mstd => sumset(a).len(),
            Predicate::Rsd => restricted_sumset(a).len(),
        };
        sums > difference_set(a).len()
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Predicate::Mstd => "mstd",
            Predicate::Rsd => "rsd",
        })
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mstd" => Ok(Predicate::Mstd),
            "rsd" => Ok(Predicate::Rsd),
            _ => Err(invalid(format!("unknown predicate {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Count,
    Collect,
}

#[derive(Clone, Debug)]
pub struct SearchTask {
    /// Diameter; sets contain 0 and `n`.
    pub n: u32,
    pub predicate: Predicate,
    pub mode: Mode,
    /// Cap on the number of collected sets. Counting is never capped.
    pub limit: Option<usize>,
    pub threads: usize,
    /// Visit one representative per reflection class `A <-> n - A`.
    pub symmetry: bool,
    /// Resume file of `range_index completed_count` lines (count mode only).
    pub checkpoint: Option<PathBuf>,
}

impl SearchTask {
    pub fn new(n: u32, predicate: Predicate) -> Self {
        Self {
            n,
            predicate,
            mode: Mode::Count,
            limit: None,
            threads: default_threads(),
            symmetry: true,
            checkpoint: None,
        }
    }

    pub fn collect(mut self) -> Self {
        self.mode = Mode::Collect;
        self
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn symmetry(mut self, on: bool) -> Self {
        self.symmetry = on;
        self
    }
}

pub fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Found {
    pub set: IntegerSet,
    /// `set == n - set`; otherwise the reflection is a distinct solution.
    pub self_symmetric: bool,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub n: u32,
    pub symmetry: bool,
    /// Qualifying sets visited; reflection classes when `symmetry` is on.
    pub counted: u64,
    /// Qualifying sets equal to their own reflection.
    pub self_symmetric: u64,
    pub sets: Vec<Found>,
    pub elapsed: Duration,
    pub masks_tested: u64,
}

impl SearchResult {
    /// Number of qualifying sets of diameter `n`, reflections included.
    pub fn total(&self) -> u64 {
        if self.symmetry {
            2 * self.counted - self.self_symmetric
        } else {
            self.counted
        }
    }

    /// Collected sets with reflections restored.
    pub fn all_sets(&self) -> Vec<IntegerSet> {
        let mut out = Vec::with_capacity(2 * self.sets.len());
        for f in &self.sets {
            out.push(f.set.clone());
            if self.symmetry && !f.self_symmetric {
                out.push(f.set.reflect());
            }
        }
        out
    }
}

#[derive(Clone, Copy, Default)]
struct Partial {
    set: u64,
    /// bit `63 - x` for each element `x`
    rev: u64,
    /// sums (restricted sums when walking for RSD)
    sums: u128,
    /// positive differences
    diffs: u64,
}

impl Partial {
    #[inline(always)]
    fn add<const RESTRICTED: bool>(self, x: u32) -> Self {
        let cross = (self.set as u128) << x;
        let sums = if RESTRICTED {
            self.sums | cross
        } else {
            self.sums | cross | (1u128 << (2 * x))
        };
        Self {
            set: self.set | (1 << x),
            rev: self.rev | (1 << (63 - x)),
            sums,
            diffs: self.diffs | (self.set >> x) | (self.rev >> (63 - x)),
        }
    }

    #[inline(always)]
    fn qualifies(&self) -> bool {
        self.sums.count_ones() > 2 * self.diffs.count_ones() + 1
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Walk {
    /// every interior mask
    All,
    /// one mask per reflection class
    Canonical,
    /// only masks equal to their reflection
    Palindromic,
}

#[derive(Clone, Copy)]
struct Node {
    partial: Partial,
    depth: usize,
    /// all pairs decided so far are mirror images
    tied: bool,
}

struct Plan {
    pairs: Vec<(u32, u32)>,
    middle: Option<u32>,
    walk: Walk,
}

#[derive(Default)]
struct Tally {
    counted: u64,
    masks: u64,
    sets: Vec<u64>,
    keep: usize,
}

impl Plan {
    fn new(n: u32, walk: Walk) -> Self {
        let pairs = (1..n)
            .take_while(|&i| i < n - i)
            .map(|i| (i, n - i))
            .collect();
        let middle = (n.is_multiple_of(2) && n >= 2).then_some(n / 2);
        Self {
            pairs,
            middle,
            walk,
        }
    }

    fn children<const R: bool>(&self, node: Node, mut visit: impl FnMut(Node)) {
        let (lo, hi) = self.pairs[node.depth];
        let depth = node.depth + 1;
        let p = node.partial;
        visit(Node {
            partial: p,
            depth,
            tied: node.tied,
        });
        if self.walk != Walk::Palindromic {
            visit(Node {
                partial: p.add::<R>(hi),
                depth,
                tied: false,
            });
            if self.walk == Walk::All || !node.tied {
                visit(Node {
                    partial: p.add::<R>(lo),
                    depth,
                    tied: false,
                });
            }
        }
        visit(Node {
            partial: p.add::<R>(lo).add::<R>(hi),
            depth,
            tied: node.tied,
        });
    }

    #[inline(always)]
    fn leaf(&self, p: Partial, t: &mut Tally) {
        t.masks += 1;
        if p.qualifies() {
            t.counted += 1;
            if t.sets.len() < t.keep {
                t.sets.push(p.set);
            }
        }
    }

    fn walk<const R: bool>(&self, node: Node, t: &mut Tally) {
        if node.depth == self.pairs.len() {
            self.leaf(node.partial, t);
            if let Some(m) = self.middle {
                self.leaf(node.partial.add::<R>(m), t);
            }
            return;
        }
        self.children::<R>(node, |child| self.walk::<R>(child, t));
    }

    fn frontier<const R: bool>(&self, root: Node, depth: usize) -> Vec<Node> {
        let mut level = vec![root];
        for _ in 0..depth.min(self.pairs.len()) {
            let mut next = Vec::with_capacity(level.len() * 4);
            for node in level {
                self.children::<R>(node, |c| next.push(c));
            }
            level = next;
        }
        level
    }
}

fn root<const R: bool>(n: u32) -> Node {
    Node {
        partial: Partial::default().add::<R>(0).add::<R>(n),
        depth: 0,
        tied: true,
    }
}

fn mask_to_set(mask: u64) -> IntegerSet {
    (0..64).filter(|b| mask >> b & 1 == 1).collect()
}

struct Checkpoint {
    done: HashMap<usize, u64>,
    file: Mutex<File>,
}

impl Checkpoint {
    fn open(path: &PathBuf, header: &str) -> Result<Self> {
        let io = |e: std::io::Error| Error::Checkpoint(format!("{}: {e}", path.display()));
        let mut done = HashMap::new();
        let mut fresh = true;
        if path.exists() {
            for (lineno, line) in BufReader::new(File::open(path).map_err(io)?)
                .lines()
                .enumerate()
            {
                let line = line.map_err(io)?;
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                fresh = false;
                if let Some(meta) = line.strip_prefix('#') {
                    if meta.trim() != header {
                        return Err(Error::Checkpoint(format!(
                            "{} was written for `{}`, not `{header}`",
                            path.display(),
                            meta.trim()
                        )));
                    }
                    continue;
                }
                let bad = || Error::Checkpoint(format!("line {}: {line:?}", lineno + 1));
                let mut fields = line.split_whitespace();
                let range = fields.next().and_then(|f| f.parse().ok()).ok_or_else(bad)?;
                let count = fields.next().and_then(|f| f.parse().ok()).ok_or_else(bad)?;
                if fields.next().is_some() {
                    return Err(bad());
                }
                done.insert(range, count);
            }
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(io)?;
        if fresh {
            writeln!(file, "# {header}").map_err(io)?;
        }
        Ok(Self {
            done,
            file: Mutex::new(file),
        })
    }

    fn record(&self, range: usize, count: u64) -> Result<()> {
        let mut f = self.file.lock().expect("checkpoint writer poisoned");
        writeln!(f, "{range} {count}")
            .and_then(|_| f.flush())
            .map_err(|e| Error::Checkpoint(e.to_string()))
    }
}

/// Levels of mirrored pairs expanded into independent ranges.
fn split_depth(threads: usize, pairs: usize) -> usize {
    let bits = (threads.max(1) as f64).log2().ceil() as usize + 6;
    bits.div_ceil(2).min(pairs)
}

pub fn enumerate(task: &SearchTask) -> Result<SearchResult> {
    if !(2..=MAX_DIAMETER).contains(&task.n) {
        return Err(Error::DiameterOutOfRange(task.n));
    }
    match task.predicate {
        Predicate::Mstd => run::<false>(task),
        Predicate::Rsd => run::<true>(task),
    }
}

fn run<const R: bool>(task: &SearchTask) -> Result<SearchResult> {
    let start = Instant::now();
    let walk = if task.symmetry {
        Walk::Canonical
    } else {
        Walk::All
    };
    let plan = Plan::new(task.n, walk);
    let keep = match task.mode {
        Mode::Count => 0,
        Mode::Collect => task.limit.unwrap_or(usize::MAX),
    };
    let ranges = plan.frontier::<R>(
        root::<R>(task.n),
        split_depth(task.threads, plan.pairs.len()),
    );

    let checkpoint = match &task.checkpoint {
        Some(_) if task.mode == Mode::Collect => {
            return Err(invalid("checkpointing is only supported in count mode"))
        }
        Some(path) => {
            let header = format!(
                "n={} predicate={} symmetry={} ranges={}",
                task.n,
                task.predicate,
                task.symmetry,
                ranges.len()
            );
            Some(Checkpoint::open(path, &header)?)
        }
        None => None,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(task.threads.max(1))
        .build()
        .map_err(|e| invalid(format!("thread pool: {e}")))?;
    let tallies: Vec<Result<Tally>> = pool.install(|| {
        ranges
            .par_iter()
            .enumerate()
            .map(|(index, &node)| {
                if let Some(&count) = checkpoint.as_ref().and_then(|c| c.done.get(&index)) {
                    return Ok(Tally {
                        counted: count,
                        ..Tally::default()
                    });
                }
                let mut tally = Tally {
                    keep,
                    ..Tally::default()
                };
                plan.walk::<R>(node, &mut tally);
                if let Some(c) = &checkpoint {
                    c.record(index, tally.counted)?;
                }
                Ok(tally)
            })
            .collect()
    });

    let mut counted = 0;
    let mut masks_tested = 0;
    let mut sets = Vec::new();
    for tally in tallies {
        let tally = tally?;
        counted += tally.counted;
        masks_tested += tally.masks;
        for mask in tally.sets {
            if sets.len() < keep {
                let set = mask_to_set(mask);
                let self_symmetric = set.reflect() == set;
                sets.push(Found {
                    set,
                    self_symmetric,
                });
            }
        }
    }

    Ok(SearchResult {
        n: task.n,
        symmetry: task.symmetry,
        counted,
        self_symmetric: count_palindromic::<R>(task.n),
        sets,
        elapsed: start.elapsed(),
        masks_tested,
    })
}

/// Qualifying sets that equal their own reflection; at most `2^(n/2)` masks.
fn count_palindromic<const R: bool>(n: u32) -> u64 {
    let plan = Plan::new(n, Walk::Palindromic);
    let mut tally = Tally::default();
    plan.walk::<R>(root::<R>(n), &mut tally);
    tally.counted
}

/// Number of qualifying subsets of `[0, n]` of any diameter: a diameter-`d`
/// set has `n - d + 1` translates inside the interval.
pub fn count_in_interval(predicate: Predicate, n: u32, threads: usize) -> Result<u64> {
    let mut total = 0;
    for d in 2..=n {
        let r = enumerate(&SearchTask::new(d, predicate).threads(threads))?;
        total += (n - d + 1) as u64 * r.total();
    }
    Ok(total)
}

/// Number of qualifying subsets of `[0, n]` that contain 0, i.e. qualifying
/// sets of diameter `<= n` counted up to translation.
pub fn count_up_to_translation(predicate: Predicate, n: u32, threads: usize) -> Result<u64> {
    let mut total = 0;
    for d in 2..=n {
        total += enumerate(&SearchTask::new(d, predicate).threads(threads))?.total();
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallestCardinality {
    /// `None` when nothing qualifies with diameter `<= n_max`.
    pub cardinality: Option<usize>,
    /// Every qualifying set of that size with minimum 0 and diameter `<= n_max`.
    pub witnesses: Vec<IntegerSet>,
    /// The witnesses up to affine equivalence, via [`affine_normalize`].
    pub classes: Vec<IntegerSet>,
}

pub fn smallest_cardinality(
    predicate: Predicate,
    n_max: u32,
    threads: usize,
) -> Result<SmallestCardinality> {
    if n_max > MAX_DIAMETER {
        return Err(Error::DiameterOutOfRange(n_max));
    }
    let mut best: Option<usize> = None;
    let mut witnesses: Vec<IntegerSet> = Vec::new();
    for d in 2..=n_max {
        let r = enumerate(&SearchTask::new(d, predicate).collect().threads(threads))?;
        for set in r.all_sets() {
            match best {
                Some(b) if set.len() > b => {}
                Some(b) if set.len() == b => witnesses.push(set),
                _ => {
                    best = Some(set.len());
                    witnesses = vec![set];
                }
            }
        }
    }
    let mut classes: Vec<IntegerSet> = Vec::new();
    for w in &witnesses {
        let c = affine_normalize(w);
        if !classes.contains(&c) {
            classes.push(c);
        }
    }
    Ok(SmallestCardinality {
        cardinality: best,
        witnesses,
        classes,
    })
}

/// Least diameter `<= n_max` carrying an RSD set.
pub fn rsd_minimum_diameter(n_max: u32, threads: usize) -> Result<Option<u32>> {
    if n_max > MAX_DIAMETER {
        return Err(Error::DiameterOutOfRange(n_max));
    }
    for d in 2..=n_max {
        if enumerate(&SearchTask::new(d, Predicate::Rsd).threads(threads))?.counted > 0 {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcore::classify;

    fn naive_count(n: u32, predicate: Predicate) -> u64 {
        (0u64..1 << (n - 1))
            .filter(|interior| {
                let mask = 1 | (1 << n) | (interior << 1);
                predicate.holds(&mask_to_set(mask))
            })
            .count() as u64
    }

    #[test]
    fn incremental_update_matches_setcore() {
        let a: IntegerSet = [0, 2, 3, 4, 7, 11, 12, 14].into();
        let mut full = Partial::default();
        let mut restricted = Partial::default();
        for x in [14, 0, 7, 3, 12, 2, 11, 4] {
            full = full.add::<false>(x);
            restricted = restricted.add::<true>(x);
        }
        let c = classify(&a).unwrap();
        assert_eq!(full.sums.count_ones() as usize, c.sum_card);
        assert_eq!(restricted.sums.count_ones() as usize, c.restricted_sum_card);
        assert_eq!(2 * full.diffs.count_ones() as usize + 1, c.diff_card);
        assert!(full.qualifies());
    }

    #[test]
    fn plan_shapes() {
        let p = Plan::new(5, Walk::All);
        assert_eq!(p.pairs, vec![(1, 4), (2, 3)]);
        assert_eq!(p.middle, None);
        let p = Plan::new(6, Walk::All);
        assert_eq!(p.pairs, vec![(1, 5), (2, 4)]);
        assert_eq!(p.middle, Some(3));
        let p = Plan::new(2, Walk::All);
        assert!(p.pairs.is_empty());
        assert_eq!(p.middle, Some(1));
    }

    #[test]
    fn masks_tested_counts() {
        for n in 2..=12 {
            let all = enumerate(
                &SearchTask::new(n, Predicate::Mstd)
                    .symmetry(false)
                    .threads(1),
            )
            .unwrap();
            assert_eq!(all.masks_tested, 1 << (n - 1));
            let sym = enumerate(&SearchTask::new(n, Predicate::Mstd).threads(1)).unwrap();
            let palindromes = 1u64 << (n / 2);
            assert_eq!(2 * sym.masks_tested - palindromes, 1 << (n - 1), "n={n}");
        }
    }

    #[test]
    fn matches_naive_small() {
        for n in 2..=14 {
            for pred in [Predicate::Mstd, Predicate::Rsd] {
                let r = enumerate(&SearchTask::new(n, pred).threads(2)).unwrap();
                assert_eq!(r.total(), naive_count(n, pred), "n={n} {pred}");
            }
        }
    }

    #[test]
    fn range_errors() {
        assert_eq!(
            enumerate(&SearchTask::new(41, Predicate::Mstd)).unwrap_err(),
            Error::DiameterOutOfRange(41)
        );
        assert!(enumerate(&SearchTask::new(1, Predicate::Mstd)).is_err());
    }

    #[test]
    fn smallest_mstd_is_eight() {
        let s = smallest_cardinality(Predicate::Mstd, 14, 1).unwrap();
        assert_eq!(s.cardinality, Some(8));
        assert_eq!(
            s.classes,
            vec![IntegerSet::from([0, 2, 3, 4, 7, 11, 12, 14])]
        );
    }

    #[test]
    fn checkpoint_resume() {
        let dir = std::env::temp_dir().join(format!("mstd-ckpt-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ckpt.txt");
        let _ = std::fs::remove_file(&path);
        let mut task = SearchTask::new(18, Predicate::Mstd).threads(1);
        task.checkpoint = Some(path.clone());
        let first = enumerate(&task).unwrap();
        let lines = std::fs::read_to_string(&path).unwrap();
        assert!(lines.starts_with("# n=18 predicate=mstd"));
        let second = enumerate(&task).unwrap();
        assert_eq!(second.counted, first.counted);
        assert_eq!(second.masks_tested, 0);

        let mut other = SearchTask::new(17, Predicate::Mstd).threads(1);
        other.checkpoint = Some(path.clone());
        assert!(matches!(enumerate(&other), Err(Error::Checkpoint(_))));
        let mut collect = task.clone().collect();
        collect.checkpoint = Some(path);
        assert!(enumerate(&collect).is_err());
        std::fs::remove_dir_all(dir).unwrap();
    }
}
