//! The fringe pair `(L, U)` that forces a subset of `[0, n-1]` to be RSD
//! for almost every choice of middle, plus density estimates.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::scd::Scd;
use crate::search::Predicate;
use crate::setcore::{restricted_sumset, IntegerSet};

pub const MIN_N: u64 = 81;

const LOWER_SCD: &str = "(0|1,1,2,1,4,3,1,4,3,1,4,3,1,4,3,1,1,1)";
const UPPER_SCD: &str = "(0|1,1,1,1,4,3,1,4,3,1,4,3,1,4,3,1,1,2,1)";
/// `U = n - UPPER_OFFSETS`
const UPPER_OFFSETS: [u64; 20] = [
    41, 40, 39, 38, 37, 33, 30, 29, 25, 22, 21, 17, 14, 13, 9, 6, 5, 4, 2, 1,
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FringePair {
    pub n: u64,
    /// `L`, inside `[0, 39]`
    pub lower: IntegerSet,
    /// `U`, inside `[n-41, n-1]`
    pub upper: IntegerSet,
}

impl FringePair {
    /// The free interval `[40, n-42]`; `None` when `n = 81`.
    pub fn middle_span(&self) -> Option<(u64, u64)> {
        let (lo, hi) = (40, self.n - 42);
        (lo <= hi).then_some((lo, hi))
    }

    /// `L ∪ middle ∪ U`.
    pub fn assemble(&self, middle: &IntegerSet) -> IntegerSet {
        self.lower
            .iter()
            .chain(middle.iter())
            .chain(self.upper.iter())
            .collect()
    }

    /// The sums `S +^ S` may miss while `S` stays RSD:
    /// `{0, 8, 78, 2n-82, 2n-12, 2n-4, 2n-2}`.
    pub fn tolerated_missing_sums(&self) -> IntegerSet {
        let n = self.n;
        [0, 8, 78, 2 * n - 82, 2 * n - 12, 2 * n - 4, 2 * n - 2].into()
    }
}

pub fn fringe_pair(n: u64) -> Result<FringePair> {
    if n < MIN_N {
        return Err(Error::FringeTooShort(n));
    }
    let lower = LOWER_SCD.parse::<Scd>()?.to_set();
    let upper = UPPER_SCD.parse::<Scd>()?.to_set().translate(n - 41)?;
    Ok(FringePair { n, lower, upper })
}

/// `U` from its printed listing `n - {41, 40, ..., 1}`.
pub fn upper_from_listing(n: u64) -> IntegerSet {
    UPPER_OFFSETS.iter().map(|&o| n - o).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub statement: String,
    pub holds: bool,
    /// Elements on which the two sides disagree.
    pub mismatches: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FringeReport {
    pub n: u64,
    pub checks: Vec<IdentityCheck>,
    /// Whether `[n-41, n+38]` equals `L + U` (cross sums) and `U +^ U`.
    pub interval_is_cross_sum: bool,
    pub interval_is_upper_restricted_sum: bool,
    pub pass: bool,
}

impl fmt::Display for FringeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let verdict = if c.holds { "PASS" } else { "FAIL" };
            writeln!(f, "{verdict} n={} {}: {}", self.n, c.name, c.statement)?;
        }
        writeln!(
            f,
            "ATTRIBUTION n={} [n-41,n+38]: L+U={} U+^U={}",
            self.n, self.interval_is_cross_sum, self.interval_is_upper_restricted_sum
        )
    }
}

fn symmetric_mismatch(actual: &BTreeSet<u64>, expected: &BTreeSet<u64>) -> Vec<i64> {
    actual
        .symmetric_difference(expected)
        .map(|&x| x as i64)
        .collect()
}

fn interval_minus(lo: u64, hi: u64, holes: &[u64]) -> BTreeSet<u64> {
    (lo..=hi).filter(|x| !holes.contains(x)).collect()
}

fn cross_sums(a: &IntegerSet, b: &IntegerSet) -> BTreeSet<u64> {
    a.iter()
        .flat_map(|x| b.iter().filter(move |&y| y != x).map(move |y| x + y))
        .collect()
}

pub fn verify_fringe(n: u64) -> Result<FringeReport> {
    let pair = fringe_pair(n)?;
    let (l, u) = (&pair.lower, &pair.upper);
    let mut checks = Vec::new();

    let lhat: BTreeSet<u64> = restricted_sumset(l).iter().collect();
    let expect = interval_minus(0, 78, &[0, 8, 78]);
    checks.push(IdentityCheck {
        name: "lower-restricted-sum",
        statement: "L+^L = [0,78] \\ {0,8,78}".into(),
        holds: lhat == expect,
        mismatches: symmetric_mismatch(&lhat, &expect),
    });

    let interval = interval_minus(n - 41, n + 38, &[]);
    let cross = cross_sums(l, u);
    checks.push(IdentityCheck {
        name: "cross-sum",
        statement: format!("L+U = [n-41,n+38] = [{},{}]", n - 41, n + 38),
        holds: cross == interval,
        mismatches: symmetric_mismatch(&cross, &interval),
    });

    let uhat: BTreeSet<u64> = restricted_sumset(u).iter().collect();
    let holes = [2 * n - 2, 2 * n - 4, 2 * n - 12, 2 * n - 82];
    let expect = interval_minus(2 * n - 82, 2 * n - 2, &holes);
    checks.push(IdentityCheck {
        name: "upper-restricted-sum",
        statement: "U+^U = [2n-82,2n-2] \\ {2n-2,2n-4,2n-12,2n-82}".into(),
        holds: uhat == expect,
        mismatches: symmetric_mismatch(&uhat, &expect),
    });

    let ul: BTreeSet<u64> = u
        .iter()
        .flat_map(|y| l.iter().map(move |x| y - x))
        .collect();
    let absent = [n - 12, n - 20, n - 28, n - 36];
    let hit: Vec<i64> = absent
        .iter()
        .filter(|x| ul.contains(x))
        .map(|&x| x as i64)
        .collect();
    checks.push(IdentityCheck {
        name: "missing-differences",
        statement: "U-L misses n-12, n-20, n-28, n-36".into(),
        holds: hit.is_empty(),
        mismatches: hit,
    });

    let pass = checks.iter().all(|c| c.holds);
    Ok(FringeReport {
        n,
        checks,
        interval_is_cross_sum: cross == interval,
        interval_is_upper_restricted_sum: uhat == interval,
        pass,
    })
}

/// `(1 - 8(2^-19 + 2^-20)) * 2^-(40+41)`, exactly.
pub fn rsd_lower_bound_exact() -> BigRational {
    let pow2 = |e: u32| BigRational::from_integer(BigInt::one() << e);
    let one = BigRational::one();
    let eight = BigRational::from_integer(BigInt::from(8));
    let factor = one.clone() - eight * (one.clone() / pow2(19) + one.clone() / pow2(20));
    factor / pow2(40 + 41)
}

pub fn rsd_lower_bound() -> f64 {
    rsd_lower_bound_exact()
        .to_f64()
        .expect("bound is representable as f64")
}

/// Scientific notation truncated (not rounded) to `digits` significant
/// figures, e.g. `4.135e-25`.
pub fn format_truncated(value: &BigRational, digits: usize) -> String {
    assert!(digits >= 1 && *value > BigRational::from_integer(BigInt::from(0)));
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut exponent: i32 = 0;
    let mut m = value.clone();
    while m >= ten {
        m /= ten.clone();
        exponent += 1;
    }
    while m < BigRational::one() {
        m *= ten.clone();
        exponent -= 1;
    }
    let mut scaled = m;
    for _ in 1..digits {
        scaled *= ten.clone();
    }
    let mantissa = scaled.floor().to_integer().to_string();
    let (head, rest) = mantissa.split_at(1);
    if rest.is_empty() {
        format!("{head}e{exponent}")
    } else {
        format!("{head}.{rest}e{exponent}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityEstimate {
    pub predicate: Predicate,
    pub n: u64,
    pub trials: u64,
    pub hits: u64,
    pub proportion: f64,
    pub seed: u64,
    pub conditioned_on_fringe: bool,
}

const BATCH: u64 = 4096;

fn random_bits(rng: &mut ChaCha8Rng, lo: u64, hi: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut x = lo;
    while x <= hi {
        let mut word = rng.next_u64();
        let upto = (hi - x + 1).min(64);
        for b in 0..upto {
            if word & 1 == 1 {
                out.push(x + b);
            }
            word >>= 1;
        }
        x += upto;
    }
    out
}

/// Samples uniform subsets of `[0, n-1]` (or uniform middles between the
/// fringes) and counts how often `predicate` holds. Batch `i` draws from
/// ChaCha8 stream `i` of `seed`, so the result does not depend on `threads`.
pub fn monte_carlo(
    predicate: Predicate,
    n: u64,
    trials: u64,
    seed: u64,
    conditioned_on_fringe: bool,
    threads: usize,
) -> Result<DensityEstimate> {
    if trials == 0 || n == 0 {
        return Err(invalid("need n >= 1 and trials >= 1"));
    }
    let pair = if conditioned_on_fringe {
        Some(fringe_pair(n)?)
    } else {
        None
    };
    let batches = trials.div_ceil(BATCH);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| invalid(format!("thread pool: {e}")))?;
    let hits: u64 = pool.install(|| {
        (0..batches)
            .into_par_iter()
            .map(|batch| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(batch);
                let count = BATCH.min(trials - batch * BATCH);
                (0..count)
                    .filter(|_| {
                        let set = match &pair {
                            Some(p) => {
                                let middle = match p.middle_span() {
                                    Some((lo, hi)) => random_bits(&mut rng, lo, hi),
                                    None => Vec::new(),
                                };
                                p.assemble(&IntegerSet::new(middle))
                            }
                            None => IntegerSet::new(random_bits(&mut rng, 0, n - 1)),
                        };
                        predicate.holds(&set)
                    })
                    .count() as u64
            })
            .sum()
    });
    Ok(DensityEstimate {
        predicate,
        n,
        trials,
        hits,
        proportion: hits as f64 / trials as f64,
        seed,
        conditioned_on_fringe,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_listings_agree() {
        for n in [81, 100, 150] {
            let p = fringe_pair(n).unwrap();
            assert_eq!(
                p.lower.elements(),
                &[0, 1, 2, 4, 5, 9, 12, 13, 17, 20, 21, 25, 28, 29, 33, 36, 37, 38, 39]
            );
            assert_eq!(p.upper, upper_from_listing(n));
            assert_eq!((p.lower.len(), p.upper.len()), (19, 20));
            assert_eq!((p.upper.min(), p.upper.max()), (Some(n - 41), Some(n - 1)));
        }
        let p = fringe_pair(81).unwrap();
        assert_eq!(p.upper.min(), Some(p.lower.max().unwrap() + 1));
        assert_eq!(p.middle_span(), None);
        assert_eq!(fringe_pair(80), Err(Error::FringeTooShort(80)));
    }

    #[test]
    fn eight_needs_four_plus_four() {
        let l = fringe_pair(81).unwrap().lower;
        let pairs: Vec<(u64, u64)> = l
            .iter()
            .flat_map(|a| l.iter().map(move |b| (a, b)))
            .filter(|&(a, b)| a <= b && a + b == 8)
            .collect();
        assert_eq!(pairs, vec![(4, 4)]);
    }

    #[test]
    fn identities_hold() {
        for n in [81, 100] {
            let r = verify_fringe(n).unwrap();
            assert!(r.pass, "{r}");
            assert!(r.interval_is_cross_sum);
            assert!(!r.interval_is_upper_restricted_sum);
        }
    }

    #[test]
    fn bound_value() {
        let exact = rsd_lower_bound_exact();
        assert_eq!(format_truncated(&exact, 4), "4.135e-25");
        let b = rsd_lower_bound();
        assert!(b > 4.135e-25 && b < 4.136e-25);
        let factor = b * 2f64.powi(81);
        assert!(factor > 0.9999 && factor < 1.0);
        assert!((2f64.powi(-81) - 4.1359e-25).abs() < 1e-29);
        let seven = BigRational::from_integer(BigInt::from(7));
        assert_eq!(format_truncated(&seven, 1), "7e0");
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let a = monte_carlo(Predicate::Mstd, 20, 10_000, 7, false, 1).unwrap();
        let b = monte_carlo(Predicate::Mstd, 20, 10_000, 7, false, 3).unwrap();
        assert_eq!(a, b);
        let c = monte_carlo(Predicate::Mstd, 20, 10_000, 8, false, 1).unwrap();
        assert_eq!(c.trials, 10_000);
        assert!(monte_carlo(Predicate::Rsd, 50, 10, 1, true, 1).is_err());
        assert!(monte_carlo(Predicate::Rsd, 50, 0, 1, false, 1).is_err());
    }
}
