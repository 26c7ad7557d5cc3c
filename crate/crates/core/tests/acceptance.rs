//! One line per acceptance criterion. Run with
//! `cargo test -p mstd --test acceptance -- --nocapture`; exits nonzero if
//! any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use mstd::family::{self, FamilyParams, Variant};
use mstd::fringe;
use mstd::search::{self, Predicate, SearchTask};
use mstd::setcore::{affine_normalize, classify, difference_set, ratio, restricted_sumset, sumset};
use mstd::theorems;
use mstd::{IntegerSet, Scd};
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn threads() -> usize {
    search::default_threads()
}

fn periodic_sweep() -> Outcome {
    let reports = theorems::verify_sweep(10, 10);
    ensure(reports.len() == 300, || {
        format!("{} reports", reports.len())
    })?;
    for r in &reports {
        let FamilyParams { l, variant, .. } = r.params;
        let l = l as i64;
        let want = match variant {
            Variant::S => 2 * l,
            Variant::SPrime => 2 * l - 1,
            Variant::SDoublePrime => l,
        };
        ensure(r.actual_gap == want, || {
            format!("{:?}: gap {} != {want}", r.params, r.actual_gap)
        })?;
    }
    Ok("300 sets, gaps 2l / 2l-1 / l".into())
}

fn cardinalities() -> Outcome {
    for k in 1..=10u64 {
        for l in 1..=10u64 {
            let a = family::gen_periodic(FamilyParams::new(k, l, Variant::S).unwrap()).to_set();
            let d = difference_set(&a).len() as u64;
            let s = sumset(&a).len() as u64;
            ensure(d == 19 + l * (6 * k + 8), || {
                format!("k={k} l={l}: |A-A|={d}")
            })?;
            ensure(s == 19 + l * (6 * k + 10), || {
                format!("k={k} l={l}: |A+A|={s}")
            })?;
        }
    }
    let a = family::gen_periodic(FamilyParams::new(2, 3, Variant::S).unwrap()).to_set();
    let c = classify(&a).unwrap();
    ensure((c.diff_card, c.sum_card) == (79, 85), || {
        format!("(2,3): {c:?}")
    })?;
    Ok("k,l in 1..=10, anchor (2,3) -> 79, 85".into())
}

fn missing_elements() -> Outcome {
    for k in 1..=10u64 {
        for l in 1..=10u64 {
            let a = family::gen_periodic(FamilyParams::new(k, l, Variant::S).unwrap()).to_set();
            let m = a.max().unwrap();
            let diffs = difference_set(&a);
            let missing_d: IntegerSet = (1..=m).filter(|&x| !diffs.contains(x as i64)).collect();
            let pd = theorems::predicted_missing_diffs(k, l).unwrap();
            ensure(missing_d == pd, || {
                format!("k={k} l={l}: diffs {missing_d} vs {pd}")
            })?;
            if k >= 2 {
                let sums = sumset(&a);
                let missing_s: IntegerSet = (0..=2 * m).filter(|&x| !sums.contains(x)).collect();
                let ps = theorems::predicted_missing_sums(k, l).unwrap();
                ensure(missing_s == ps, || {
                    format!("k={k} l={l}: sums {missing_s} vs {ps}")
                })?;
            }
        }
    }
    let d = theorems::predicted_missing_diffs(2, 3).unwrap();
    let s = theorems::predicted_missing_sums(2, 3).unwrap();
    ensure(d == IntegerSet::from([6, 10, 18, 22, 30, 34]), || {
        format!("anchor diffs {d}")
    })?;
    ensure(s == IntegerSet::from([12, 24, 36, 52, 64, 76]), || {
        format!("anchor sums {s}")
    })?;
    Ok("grid matches, anchor (2,3) matches".into())
}

fn prescribed_gap() -> Outcome {
    for x in 1..=100u64 {
        let a = theorems::construct_for_gap(x).unwrap();
        ensure(a.min() == Some(0) && a.max().unwrap() <= 12 + 4 * x, || {
            format!("x={x}: {a}")
        })?;
        let gap = classify(&a).unwrap().gap;
        ensure(gap == x as i64, || format!("x={x}: gap {gap}"))?;
    }
    Ok("x in 1..=100 inside [0,12+4x]".into())
}

fn ratio_records() -> Outcome {
    let s16 = family::gen_periodic(FamilyParams::new(1, 6, Variant::S).unwrap()).to_set();
    let f = ratio(&s16).unwrap();
    ensure((f - 1.023777).abs() < 1e-5, || format!("f(S_1,6) = {f}"))?;
    let record = ratio(&family::gen_high_ratio(9, true).unwrap().to_set()).unwrap();
    ensure(record > 1.0305, || format!("record {record}"))?;
    let candidates: Vec<Scd> = (1..=30)
        .flat_map(|l| [false, true].map(|c| family::gen_high_ratio(l, c).unwrap()))
        .collect();
    let hits = theorems::ratio_census(candidates, 1.03);
    ensure(hits.len() >= 22, || format!("{} hits", hits.len()))?;
    Ok(format!(
        "f(S_1,6)={f:.7}, record {record:.6}, census {} hits",
        hits.len()
    ))
}

fn growth() -> Outcome {
    let check = |k: u64, start: usize, len: usize, want: Rational64| -> Result<(), String> {
        let base = family::gen_periodic(FamilyParams::new(k, 1, Variant::S).unwrap());
        let g = theorems::block_growth(&base, start, len, 12, 4).map_err(|e| e.to_string())?;
        ensure(g.ratio == Some(want), || {
            format!(
                "k={k} block {start}:{len}: {:?} {:?}",
                g.ratio, g.diagnostic
            )
        })
    };
    check(1, 4, 1, Rational64::from_integer(0))?;
    for k in 2..=8 {
        check(k, 3, k as usize + 2, Rational64::new(2, k as i64 + 2))?;
    }
    check(1, 3, 3, Rational64::new(2, 3))?;
    Ok("0, 2/(k+2) for k in 2..=8, 2/3".into())
}

fn rsd_search() -> Outcome {
    let t = threads();
    for d in 2..=29 {
        let r = search::enumerate(&SearchTask::new(d, Predicate::Rsd).threads(t)).unwrap();
        ensure(r.total() == 0, || format!("diameter {d}: {}", r.total()))?;
    }
    let r = search::enumerate(&SearchTask::new(30, Predicate::Rsd).threads(t).collect()).unwrap();
    let found: BTreeSet<Vec<u64>> = r.all_sets().into_iter().map(IntegerSet::into_vec).collect();
    let c = [
        IntegerSet::from([0, 1, 2, 3, 6, 8, 13, 16, 18, 23, 24, 26, 28, 29, 30]),
        IntegerSet::from([0, 1, 2, 3, 6, 9, 14, 15, 17, 22, 23, 26, 28, 29, 30]),
        IntegerSet::from([0, 1, 2, 4, 5, 8, 9, 14, 18, 21, 22, 26, 27, 28, 30]),
    ];
    let expected: BTreeSet<Vec<u64>> = c
        .iter()
        .flat_map(|a| [a.clone(), a.reflect()])
        .map(IntegerSet::into_vec)
        .collect();
    ensure(expected.len() == 6 && found == expected, || {
        format!("diameter 30: {found:?}")
    })?;
    // the stated difference of one is between the restricted sumset and the
    // difference set; the full sumset gains three or four more
    for (base, full_gap) in c.iter().zip([4, 3, 3]) {
        for a in [base.clone(), base.reflect()] {
            let cl = classify(&a).unwrap();
            ensure(cl.rsd && cl.restricted_gap == 1, || format!("{a}: {cl:?}"))?;
            ensure(cl.gap == full_gap, || format!("{a}: {cl:?}"))?;
        }
    }
    let upto31 = search::count_up_to_translation(Predicate::Rsd, 31, t).unwrap();
    ensure(upto31 == 16, || format!("[0,31]: {upto31}"))?;
    Ok("none below 30, C1..C6 at 30, 16 in [0,31] up to translation".into())
}

fn smallest_mstd() -> Outcome {
    let s = search::smallest_cardinality(Predicate::Mstd, 14, threads()).unwrap();
    ensure(s.cardinality == Some(8), || format!("{:?}", s.cardinality))?;
    ensure(s.classes.len() == 1, || {
        format!("{} classes", s.classes.len())
    })?;
    Ok(format!("size 8, one class {}", s.classes[0]))
}

fn abundance() -> Outcome {
    let count = search::count_in_interval(Predicate::Mstd, 29, threads()).unwrap();
    ensure(count as f64 >= 4.5e5, || format!("[0,29]: {count}"))?;
    let t = Instant::now();
    let e = fringe::monte_carlo(Predicate::Mstd, 30, 1_000_000, 2024, false, threads()).unwrap();
    let secs = t.elapsed().as_secs_f64();
    ensure((3e-4..=6e-4).contains(&e.proportion), || {
        format!("proportion {}", e.proportion)
    })?;
    ensure(secs < 30.0, || format!("Monte-Carlo took {secs:.1}s"))?;
    Ok(format!(
        "{count} MSTD subsets of [0,29], Monte-Carlo {:.2e}",
        e.proportion
    ))
}

fn fringe_identities() -> Outcome {
    for n in 81..=200 {
        let r = fringe::verify_fringe(n).unwrap();
        ensure(r.pass, || format!("{r}"))?;
    }
    let shown = fringe::format_truncated(&fringe::rsd_lower_bound_exact(), 4);
    ensure(shown == "4.135e-25", || shown.clone())?;
    Ok(format!("n in 81..=200, bound {shown}"))
}

fn naive(a: &[u64]) -> (usize, usize, usize) {
    let mut s = BTreeSet::new();
    let mut r = BTreeSet::new();
    let mut d = BTreeSet::new();
    for &x in a {
        for &y in a {
            s.insert(x + y);
            d.insert(x as i64 - y as i64);
            if x != y {
                r.insert(x + y);
            }
        }
    }
    (s.len(), d.len(), r.len())
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10_000 {
        let max = rng.random_range(0..=200u64);
        let len = rng.random_range(1..=40usize);
        let a: IntegerSet = (0..len).map(|_| rng.random_range(0..=max)).collect();
        let (s, d, r) = naive(a.elements());
        let got = (
            sumset(&a).len(),
            difference_set(&a).len(),
            restricted_sumset(&a).len(),
        );
        ensure(got == (s, d, r), || {
            format!("{a}: {got:?} vs {:?}", (s, d, r))
        })?;

        let scd = Scd::from_set(&a).unwrap();
        let back: Scd = scd.to_string().parse().map_err(|e| format!("{e}"))?;
        ensure(back == scd && back.to_set() == a, || {
            format!("round trip {scd}")
        })?;

        let gap = classify(&a).unwrap().gap;
        let c = rng.random_range(1..=5u64);
        let shift = rng.random_range(0..=50u64);
        let image = a.affine_image(c, shift).unwrap();
        let g2 = classify(&image).unwrap().gap;
        let g3 = classify(&a.reflect()).unwrap().gap;
        ensure(gap == g2 && gap == g3, || format!("{a}: {gap} {g2} {g3}"))?;
        ensure(affine_normalize(&image) == affine_normalize(&a), || {
            format!("normalize {a}")
        })?;
    }
    for pred in [Predicate::Mstd, Predicate::Rsd] {
        let counts: Vec<u64> = [1, 4, 8]
            .iter()
            .map(|&t| {
                search::enumerate(&SearchTask::new(20, pred).threads(t))
                    .unwrap()
                    .total()
            })
            .collect();
        ensure(counts.windows(2).all(|w| w[0] == w[1]), || {
            format!("{pred}: {counts:?}")
        })?;
    }
    Ok("10^4 random sets, thread counts 1/4/8 agree at n=20".into())
}

const CRITERIA: [Criterion; 11] = [
    ("periodic gaps", periodic_sweep),
    ("cardinality formulas", cardinalities),
    ("missing elements", missing_elements),
    ("prescribed gap", prescribed_gap),
    ("ratio records", ratio_records),
    ("block growth", growth),
    ("RSD exhaustive search", rsd_search),
    ("smallest MSTD set", smallest_mstd),
    ("MSTD abundance", abundance),
    ("fringe pair", fringe_identities),
    ("property suites", property_suites),
];

fn main() -> ExitCode {
    let mut failures = 0;
    let mut total = Duration::ZERO;
    for (i, (name, run)) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        total += took;
        match outcome {
            Ok(detail) => println!(
                "PASS {:>2} {name} ({:.2}s): {detail}",
                i + 1,
                took.as_secs_f64()
            ),
            Err(why) => {
                failures += 1;
                println!(
                    "FAIL {:>2} {name} ({:.2}s): {why}",
                    i + 1,
                    took.as_secs_f64()
                );
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.1}s",
        CRITERIA.len() - failures,
        CRITERIA.len(),
        total.as_secs_f64()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
