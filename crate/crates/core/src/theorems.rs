//! Closed-form predictions for the periodic families, checked against the
//! brute-force set arithmetic in [`crate::setcore`].

use num_rational::Rational64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::family::{enumerate_f, gen_periodic, FamilyParams, Variant};
use crate::scd::Scd;
use crate::setcore::{classify, difference_set, ratio, sumset, IntegerSet, SignedIntegerSet};

/// `[a, b]_4`: elements of `[a, b]` congruent to `a` mod 4.
fn residue_run(a: u64, b: u64) -> impl Iterator<Item = u64> {
    (a..=b).step_by(4)
}

/// Missing positive differences of `S_{k,l}`:
/// `U_{i=1..l} [6 + 8(i-1) + 4(i-1)(k-1), 6 + 8(i-1) + 4i(k-1)]_4`.
pub fn predicted_missing_diffs(k: u64, l: u64) -> Result<IntegerSet> {
    if k == 0 || l == 0 {
        return Err(invalid("k and l must be positive"));
    }
    Ok((1..=l)
        .flat_map(|i| {
            let base = 6 + 8 * (i - 1);
            residue_run(base + 4 * (i - 1) * (k - 1), base + 4 * i * (k - 1))
        })
        .collect())
}

/// Sums missing from `S_{k,l} + S_{k,l}` inside `[0, 8(k+1)l + 18]`, as two
/// unions of mod-4 runs. Proved for `k >= 2` only.
pub fn predicted_missing_sums(k: u64, l: u64) -> Result<IntegerSet> {
    if k < 2 {
        return Err(Error::FormulaRange(k));
    }
    if l == 0 {
        return Err(invalid("l must be positive"));
    }
    let low = (1..=l).flat_map(|i| {
        let base = 12 + 12 * (i - 1);
        residue_run(base + 4 * (i - 1) * (k - 2), base + 4 * i * (k - 2))
    });
    let high = (1..=l).flat_map(|i| {
        let base = 12 * l + 4 * l * (k - 2) + 16 + 12 * (i - 1);
        residue_run(base + 4 * (i - 1) * (k - 2), base + 4 * i * (k - 2))
    });
    Ok(low.chain(high).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PredictedCards {
    pub sum_card: Option<usize>,
    pub diff_card: Option<usize>,
    pub gap: i64,
    /// `sum_card` comes from the `k >= 2` formula evaluated at `k = 1`.
    pub extrapolated: bool,
}

/// `|S-S| = 19 + l(6k+8)`, `|S+S| = 19 + l(6k+10)` for the `S` variant, and
/// the gap `2l`, `2l-1` or `l` for `S`, `S'`, `S''`.
pub fn predicted_cards(params: FamilyParams) -> PredictedCards {
    let FamilyParams { k, l, variant } = params;
    let l_i = l as i64;
    match variant {
        Variant::S => PredictedCards {
            sum_card: Some((19 + l * (6 * k + 10)) as usize),
            diff_card: Some((19 + l * (6 * k + 8)) as usize),
            gap: 2 * l_i,
            extrapolated: k == 1,
        },
        Variant::SPrime => PredictedCards {
            sum_card: None,
            diff_card: None,
            gap: 2 * l_i - 1,
            extrapolated: false,
        },
        Variant::SDoublePrime => PredictedCards {
            sum_card: None,
            diff_card: None,
            gap: l_i,
            extrapolated: false,
        },
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub subject: Scd,
    pub params: FamilyParams,
    pub predicted_sum_card: Option<usize>,
    pub predicted_diff_card: Option<usize>,
    pub predicted_gap: i64,
    pub actual_sum_card: usize,
    pub actual_diff_card: usize,
    pub actual_gap: i64,
    /// `+-` the predicted missing positive differences.
    pub missing_diff_predicted: Option<SignedIntegerSet>,
    /// Elements of `[-max, max]` not in `S - S`.
    pub missing_diff_actual: SignedIntegerSet,
    pub missing_sum_predicted: Option<IntegerSet>,
    /// Elements of `[0, 2 max]` not in `S + S`.
    pub missing_sum_actual: IntegerSet,
    pub extrapolated: bool,
    pub pass: bool,
}

fn missing_diffs(a: &IntegerSet, diffs: &SignedIntegerSet) -> SignedIntegerSet {
    let m = a.diameter() as i64;
    SignedIntegerSet::from_elements((-m..=m).filter(|&x| !diffs.contains(x)))
}

fn symmetric(positive: &IntegerSet) -> SignedIntegerSet {
    SignedIntegerSet::from_elements(positive.iter().flat_map(|x| [x as i64, -(x as i64)]))
}

pub fn verify_periodic(params: FamilyParams) -> VerificationReport {
    let subject = gen_periodic(params);
    let set = subject.to_set();
    let sums = sumset(&set);
    let diffs = difference_set(&set);
    let predicted = predicted_cards(params);

    let (missing_diff_predicted, missing_sum_predicted) = match params.variant {
        Variant::S => (
            predicted_missing_diffs(params.k, params.l)
                .ok()
                .map(|p| symmetric(&p)),
            predicted_missing_sums(params.k, params.l).ok(),
        ),
        _ => (None, None),
    };
    let missing_diff_actual = missing_diffs(&set, &diffs);
    let missing_sum_actual = IntegerSet::interval(0, 2 * set.max().unwrap_or(0)).difference(&sums);

    let actual_sum_card = sums.len();
    let actual_diff_card = diffs.len();
    let actual_gap = actual_sum_card as i64 - actual_diff_card as i64;

    let pass = predicted.gap == actual_gap
        && predicted.sum_card.is_none_or(|c| c == actual_sum_card)
        && predicted.diff_card.is_none_or(|c| c == actual_diff_card)
        && missing_diff_predicted
            .as_ref()
            .is_none_or(|p| *p == missing_diff_actual)
        && missing_sum_predicted
            .as_ref()
            .is_none_or(|p| *p == missing_sum_actual);

    VerificationReport {
        subject,
        params,
        predicted_sum_card: predicted.sum_card,
        predicted_diff_card: predicted.diff_card,
        predicted_gap: predicted.gap,
        actual_sum_card,
        actual_diff_card,
        actual_gap,
        missing_diff_predicted,
        missing_diff_actual,
        missing_sum_predicted,
        missing_sum_actual,
        extrapolated: predicted.extrapolated,
        pass,
    }
}

/// [`verify_periodic`] over `k in [1, kmax]`, `l in [1, lmax]` and all
/// variants, ordered by `(k, l, variant)`.
pub fn verify_sweep(kmax: u64, lmax: u64) -> Vec<VerificationReport> {
    let grid: Vec<FamilyParams> = (1..=kmax)
        .flat_map(|k| {
            (1..=lmax).flat_map(move |l| {
                Variant::ALL
                    .into_iter()
                    .map(move |v| FamilyParams { k, l, variant: v })
            })
        })
        .collect();
    grid.into_par_iter().map(verify_periodic).collect()
}

/// A set inside `[0, 12 + 4x]` with `|A+A| - |A-A| = x`: `S_{1,x/2}` for even
/// `x`, `S'_{1,(x+1)/2}` for odd `x`.
pub fn construct_for_gap(x: u64) -> Result<IntegerSet> {
    if x == 0 {
        return Err(invalid("gap must be positive"));
    }
    let params = if x.is_multiple_of(2) {
        FamilyParams::new(1, x / 2, Variant::S)?
    } else {
        FamilyParams::new(1, x.div_ceil(2), Variant::SPrime)?
    };
    Ok(gen_periodic(params).to_set())
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockGrowth {
    pub block: Vec<u64>,
    pub block_len: usize,
    /// Smallest repetition count from which every built set is MSTD.
    pub start_rep: Option<usize>,
    /// `gaps[r-1]` is the gap with the block repeated `r` times.
    pub gaps: Vec<i64>,
    /// `deltas[r-1] = gaps[r] - gaps[r-1]`.
    pub deltas: Vec<i64>,
    pub t: Option<i64>,
    pub ratio: Option<Rational64>,
    pub stabilized: bool,
    pub diagnostic: Option<String>,
}

/// Repeats `diffs[block_start .. block_start + block_len]` 1..=`max_reps`
/// times and tracks how the gap grows.
pub fn block_growth(
    base: &Scd,
    block_start: usize,
    block_len: usize,
    max_reps: usize,
    window: usize,
) -> Result<BlockGrowth> {
    let diffs = base.diffs();
    if block_len == 0 || block_start + block_len > diffs.len() {
        return Err(invalid(format!(
            "block {block_start}:{block_len} outside {} differences",
            diffs.len()
        )));
    }
    if window < 2 || max_reps < window {
        return Err(invalid("need max_reps >= window >= 2"));
    }
    let (head, rest) = diffs.split_at(block_start);
    let (block, tail) = rest.split_at(block_len);

    let gaps: Vec<i64> = (1..=max_reps)
        .into_par_iter()
        .map(|reps| {
            let mut d = head.to_vec();
            for _ in 0..reps {
                d.extend_from_slice(block);
            }
            d.extend_from_slice(tail);
            let set = Scd::new(base.base(), d).expect("positive").to_set();
            classify(&set).expect("nonempty").gap
        })
        .collect();
    let deltas: Vec<i64> = gaps.windows(2).map(|w| w[1] - w[0]).collect();

    let start_rep = (0..gaps.len())
        .find(|&i| gaps[i..].iter().all(|&g| g > 0))
        .map(|i| i + 1);

    let mut diagnostic = None;
    let mut stabilized = false;
    if deltas.len() < window {
        diagnostic = Some(format!(
            "only {} increments for a window of {window}; raise max_reps",
            deltas.len()
        ));
    } else {
        let recent = &deltas[deltas.len() - window..];
        let tail_sets = &gaps[gaps.len() - window - 1..];
        if let Some(pos) = tail_sets.iter().position(|&g| g <= 0) {
            let reps = gaps.len() - window + pos;
            diagnostic = Some(format!("not MSTD with the block repeated {reps} times"));
        } else if recent.iter().all(|&x| x == recent[0]) {
            stabilized = true;
        } else {
            diagnostic = Some(format!(
                "increments not constant over last {window}: {recent:?}"
            ));
        }
    }
    let t = stabilized.then(|| *deltas.last().expect("window >= 2"));
    let ratio = t.map(|t| Rational64::new(t, block_len as i64));
    Ok(BlockGrowth {
        block: block.to_vec(),
        block_len,
        start_rep,
        gaps,
        deltas,
        t,
        ratio,
        stabilized,
        diagnostic,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureReport {
    pub checked: usize,
    pub counterexamples: Vec<Scd>,
}

/// Classifies every strict family member up to `max_diameter`; anything not
/// MSTD is a counterexample.
pub fn check_conjecture(max_diameter: u64) -> ConjectureReport {
    let members: Vec<Scd> = enumerate_f(max_diameter).collect();
    let flags: Vec<bool> = members
        .par_iter()
        .map(|s| classify(&s.to_set()).expect("nonempty").gap > 0)
        .collect();
    let counterexamples = members
        .iter()
        .zip(&flags)
        .filter(|(_, &mstd)| !mstd)
        .map(|(s, _)| s.clone())
        .collect();
    ConjectureReport {
        checked: members.len(),
        counterexamples,
    }
}

/// Candidates with `log|A+A| / log|A-A| > threshold`, best first.
pub fn ratio_census<I: IntoIterator<Item = Scd>>(candidates: I, threshold: f64) -> Vec<(Scd, f64)> {
    let mut hits: Vec<(Scd, f64)> = candidates
        .into_iter()
        .filter_map(|s| {
            let f = ratio(&s.to_set()).ok()?;
            (f > threshold).then_some((s, f))
        })
        .collect();
    hits.sort_by(|a, b| b.1.total_cmp(&a.1));
    hits
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_diff_examples() {
        assert_eq!(
            predicted_missing_diffs(2, 3).unwrap().elements(),
            &[6, 10, 18, 22, 30, 34]
        );
        assert_eq!(predicted_missing_diffs(1, 1).unwrap().elements(), &[6]);
        for k in 1..=6 {
            for l in 1..=6 {
                assert_eq!(predicted_missing_diffs(k, l).unwrap().len() as u64, k * l);
            }
        }
    }

    #[test]
    fn missing_sum_examples() {
        assert_eq!(
            predicted_missing_sums(2, 3).unwrap().elements(),
            &[12, 24, 36, 52, 64, 76]
        );
        assert_eq!(predicted_missing_sums(1, 3), Err(Error::FormulaRange(1)));
        for k in 2..=6 {
            for l in 1..=6 {
                assert_eq!(
                    predicted_missing_sums(k, l).unwrap().len() as u64,
                    2 * (k - 1) * l
                );
            }
        }
    }

    #[test]
    fn cards_examples() {
        let c = predicted_cards(FamilyParams::new(2, 3, Variant::S).unwrap());
        assert_eq!((c.diff_card, c.sum_card, c.gap), (Some(79), Some(85), 6));
        assert_eq!(
            predicted_cards(FamilyParams::new(3, 2, Variant::SPrime).unwrap()).gap,
            3
        );
        let c = predicted_cards(FamilyParams::new(1, 6, Variant::S).unwrap());
        assert_eq!(
            (c.diff_card, c.sum_card, c.extrapolated),
            (Some(103), Some(115), true)
        );
    }

    #[test]
    fn verify_examples() {
        let r = verify_periodic(FamilyParams::new(2, 3, Variant::S).unwrap());
        assert!(r.pass);
        assert_eq!(r.actual_gap, 6);
        assert_eq!(r.missing_sum_actual.elements(), &[12, 24, 36, 52, 64, 76]);
        let r = verify_periodic(FamilyParams::new(3, 2, Variant::SDoublePrime).unwrap());
        assert!(r.pass);
        assert_eq!(
            (r.actual_sum_card, r.actual_diff_card, r.actual_gap),
            (67, 65, 2)
        );
        let r = verify_periodic(FamilyParams::new(3, 2, Variant::SPrime).unwrap());
        assert_eq!((r.actual_sum_card, r.actual_diff_card), (72, 69));
    }

    #[test]
    fn construct_examples() {
        let a = construct_for_gap(2).unwrap();
        assert_eq!((a.max(), classify(&a).unwrap().gap), (Some(17), 2));
        let a = construct_for_gap(3).unwrap();
        assert_eq!((a.max(), classify(&a).unwrap().gap), (Some(24), 3));
        let a = construct_for_gap(1).unwrap();
        assert_eq!((a.max(), classify(&a).unwrap().gap), (Some(16), 1));
        assert!(construct_for_gap(0).is_err());
    }

    #[test]
    fn growth_examples() {
        let s11 = gen_periodic(FamilyParams::new(1, 1, Variant::S).unwrap());
        let g = block_growth(&s11, 4, 1, 12, 4).unwrap();
        assert_eq!((g.t, g.ratio), (Some(0), Some(Rational64::new(0, 1))));
        let g = block_growth(&s11, 3, 3, 12, 4).unwrap();
        assert_eq!(g.ratio, Some(Rational64::new(2, 3)));
        assert_eq!(g.start_rep, Some(1));
        assert!(block_growth(&s11, 9, 2, 12, 4).is_err());
        assert!(block_growth(&s11, 3, 3, 3, 4).is_err());
    }

    #[test]
    fn growth_reports_non_mstd_window() {
        // an arithmetic progression never becomes MSTD
        let ap: Scd = "(0|1,1,1,1)".parse().unwrap();
        let g = block_growth(&ap, 1, 1, 8, 3).unwrap();
        assert!(!g.stabilized);
        assert!(g.diagnostic.unwrap().contains("not MSTD"));
        assert_eq!(g.start_rep, None);
    }

    #[test]
    fn conjecture_small() {
        assert_eq!(
            check_conjecture(13),
            ConjectureReport {
                checked: 0,
                counterexamples: vec![]
            }
        );
        let r = check_conjecture(14);
        assert_eq!(r.checked, 1);
        assert!(r.counterexamples.is_empty());
    }

    #[test]
    fn census_orders_descending() {
        let cands = (1..=8).map(|l| gen_periodic(FamilyParams::new(1, l, Variant::S).unwrap()));
        let hits = ratio_census(cands, 1.0);
        assert!(hits.windows(2).all(|w| w[0].1 >= w[1].1));
        assert!(ratio_census(hits.into_iter().map(|h| h.0), 2.0).is_empty());
    }
}
