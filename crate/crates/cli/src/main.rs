//! `mstd`: generate, evaluate, verify and search MSTD and RSD sets.

mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use mstd::family::{self, FamilyParams, NamedSet, Variant};
use mstd::fringe;
use mstd::search::{self, Predicate, SearchTask};
use mstd::setcore::{classify, ratio};
use mstd::theorems;
use mstd::{IntegerSet, Scd};
use serde_json::json;

use input::gather_sets;
use output::{scd_text, set_record, Format, Out};

#[derive(Parser)]
#[command(
    name = "mstd",
    version,
    about = "Sum-dominant and restricted-sum-dominant sets"
)]
struct Cli {
    /// Output notation for sets and reports.
    #[arg(long, global = true, value_enum, default_value_t)]
    format: Format,
    /// Worker threads (MSTD_THREADS takes precedence).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a family member or a named set.
    Gen(GenArgs),
    /// Sumset, difference set and restricted sumset sizes.
    Eval {
        /// Sets in SCD or `{..}` notation; read from stdin when absent.
        sets: Vec<String>,
    },
    /// Parse sets against the family grammar.
    Member { sets: Vec<String> },
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Classify every strict family member up to a diameter.
    Conjecture {
        #[arg(long = "max-diam")]
        max_diam: u64,
    },
    /// Log-ratio census over the high-ratio family.
    Census {
        #[arg(long, default_value_t = 30)]
        lmax: u64,
        #[arg(long, default_value_t = 1.03)]
        threshold: f64,
    },
    /// Gap growth as one block of differences is repeated.
    Growth {
        set: String,
        /// `start:len`, an index range into the differences.
        #[arg(long)]
        block: String,
        #[arg(long, default_value_t = 12)]
        reps: usize,
        #[arg(long, default_value_t = 3)]
        window: usize,
    },
    /// A set with a prescribed gap.
    Construct {
        #[arg(long)]
        gap: u64,
    },
    /// Exhaustive search over sets with minimum 0 and maximum n.
    Search(SearchArgs),
    #[command(subcommand)]
    Fringe(FringeCommand),
}

#[derive(Args)]
struct GenArgs {
    /// S, Sp, Spp, A, T, Tp, R, high-ratio or F.
    #[arg(long, conflicts_with = "named", required_unless_present = "named")]
    family: Option<String>,
    /// S2, S4, A4, A12 or A15.
    #[arg(long)]
    named: Option<String>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    l: Option<u64>,
    #[arg(long)]
    j: Option<u64>,
    /// Closing `1` on high-ratio sets.
    #[arg(long)]
    closed: bool,
    /// Largest diameter when listing family F.
    #[arg(long = "max-diam")]
    max_diam: Option<u64>,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Predicted against computed gaps, sizes and missing elements.
    Periodic {
        #[arg(long, default_value_t = 10)]
        kmax: u64,
        #[arg(long, default_value_t = 10)]
        lmax: u64,
    },
    /// Same as the `conjecture` command.
    Conjecture {
        #[arg(long = "max-diam")]
        max_diam: u64,
    },
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, default_value = "mstd")]
    predicate: Predicate,
    /// Print every qualifying set, not only the count.
    #[arg(long)]
    collect: bool,
    /// Stop collecting after this many reflection classes.
    #[arg(long)]
    limit: Option<usize>,
    /// Visit both members of each reflection pair.
    #[arg(long = "no-symmetry")]
    no_symmetry: bool,
    /// Resume file (count mode only).
    #[arg(long)]
    checkpoint: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FringeCommand {
    /// Check the fringe identities for n (or every n up to --n-max).
    Verify {
        #[arg(long)]
        n: u64,
        #[arg(long = "n-max")]
        n_max: Option<u64>,
    },
    /// The lower bound on the RSD proportion.
    Bound,
    /// Monte-Carlo proportion of sets satisfying a predicate.
    Mc {
        #[arg(long, default_value = "rsd")]
        predicate: Predicate,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Fix the fringe pair and sample only the middle.
        #[arg(long)]
        conditioned: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn resolve_threads(flag: Option<usize>) -> Result<usize> {
    if let Ok(v) = std::env::var("MSTD_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .with_context(|| format!("MSTD_THREADS={v:?}"))?;
        return Ok(n.max(1));
    }
    Ok(flag.unwrap_or_else(search::default_threads).max(1))
}

/// `Ok(false)` means a verification failed.
fn run(cli: Cli) -> Result<bool> {
    let threads = resolve_threads(cli.threads)?;
    // Only fails if a pool already exists, which cannot happen here.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    let mut out = Out::new(cli.format);
    let ok = match cli.command {
        Command::Gen(args) => gen(&mut out, args)?,
        Command::Eval { sets } => eval(&mut out, &sets)?,
        Command::Member { sets } => member(&mut out, &sets)?,
        Command::Verify(VerifyCommand::Periodic { kmax, lmax }) => {
            verify_periodic(&mut out, kmax, lmax)?
        }
        Command::Verify(VerifyCommand::Conjecture { max_diam })
        | Command::Conjecture { max_diam } => conjecture(&mut out, max_diam)?,
        Command::Census { lmax, threshold } => census(&mut out, lmax, threshold)?,
        Command::Growth {
            set,
            block,
            reps,
            window,
        } => growth(&mut out, &set, &block, reps, window)?,
        Command::Construct { gap } => construct(&mut out, gap)?,
        Command::Search(args) => search_cmd(&mut out, args, threads)?,
        Command::Fringe(cmd) => fringe_cmd(&mut out, cmd, threads)?,
    };
    out.flush()?;
    Ok(ok)
}

fn need(value: Option<u64>, flag: &str, family: &str) -> Result<u64> {
    value.ok_or_else(|| anyhow!("--family {family} needs --{flag}"))
}

fn gen(out: &mut Out, args: GenArgs) -> Result<bool> {
    if let Some(name) = &args.named {
        let name: NamedSet = name.parse()?;
        out.set(&family::gen_named(name))?;
        return Ok(true);
    }
    let fam = args
        .family
        .as_deref()
        .expect("clap requires family or named");
    let set = match fam {
        "A" | "a" => family::gen_a(need(args.k, "k", fam)?, need(args.l, "l", fam)?)?.to_set(),
        "T" | "t" => family::gen_t(need(args.j, "j", fam)?, false)?,
        "Tp" | "tp" | "T'" => family::gen_t(need(args.j, "j", fam)?, true)?,
        "R" | "r" => family::gen_r(need(args.j, "j", fam)?)?,
        "high-ratio" => family::gen_high_ratio(need(args.l, "l", fam)?, args.closed)?.to_set(),
        "F" | "f" => {
            for scd in family::enumerate_f(need(args.max_diam, "max-diam", fam)?) {
                out.set(&scd.to_set())?;
            }
            return Ok(true);
        }
        other => {
            let variant: Variant = other.parse()?;
            let params =
                FamilyParams::new(need(args.k, "k", fam)?, need(args.l, "l", fam)?, variant)?;
            family::gen_periodic(params).to_set()
        }
    };
    out.set(&set)?;
    Ok(true)
}

fn label(out: &Out, a: &IntegerSet) -> String {
    match out.format {
        Format::Set => a.to_string(),
        _ => scd_text(a),
    }
}

fn eval(out: &mut Out, sets: &[String]) -> Result<bool> {
    for a in gather_sets(sets)? {
        let c = classify(&a)?;
        let f = ratio(&a).ok();
        let mut text = format!(
            "{}  |A+A| = {}, |A-A| = {}, gap {}, {}, |A+^A| = {}, {}",
            label(out, &a),
            c.sum_card,
            c.diff_card,
            c.gap,
            c.kind,
            c.restricted_sum_card,
            if c.rsd { "RSD" } else { "not RSD" },
        );
        if let Some(f) = f {
            text.push_str(&format!(", f = {f:.6}"));
        }
        let record = json!({
            "kind": "eval",
            "scd": scd_text(&a),
            "elements": a.elements(),
            "sum_card": c.sum_card,
            "diff_card": c.diff_card,
            "restricted_sum_card": c.restricted_sum_card,
            "gap": c.gap,
            "restricted_gap": c.restricted_gap,
            "classification": c.kind.to_string(),
            "rsd": c.rsd,
            "ratio": f,
        });
        out.record(text, record)?;
    }
    Ok(true)
}

fn member(out: &mut Out, sets: &[String]) -> Result<bool> {
    for a in gather_sets(sets)? {
        let scd = Scd::from_set(&a)?;
        let m = family::is_member_f(&scd);
        let joined = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        let text = if m.member {
            let seps: Vec<u64> = m.separators.iter().map(|&i| i as u64).collect();
            format!(
                "{}  member tier={} exponents={} tail={} separators={}",
                label(out, &a),
                m.tier,
                joined(&m.exponents),
                m.tail.map(|t| t.to_string()).unwrap_or_default(),
                joined(&seps),
            )
        } else {
            format!("{}  not a member", label(out, &a))
        };
        let record = json!({
            "kind": "member",
            "scd": scd.to_string(),
            "member": m.member,
            "tier": m.tier.to_string(),
            "exponents": m.exponents,
            "tail": m.tail.map(|t| t.to_string()),
            "separators": m.separators,
        });
        out.record(text, record)?;
    }
    Ok(true)
}

fn verify_periodic(out: &mut Out, kmax: u64, lmax: u64) -> Result<bool> {
    if kmax == 0 || lmax == 0 {
        bail!("--kmax and --lmax must be at least 1");
    }
    let reports = theorems::verify_sweep(kmax, lmax);
    let failed = reports.iter().filter(|r| !r.pass).count();
    for r in &reports {
        let p = r.params;
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        let mut text = format!(
            "{verdict} k={} l={} variant={} gap={} predicted_gap={}",
            p.k, p.l, p.variant, r.actual_gap, r.predicted_gap
        );
        if let (Some(s), Some(d)) = (r.predicted_sum_card, r.predicted_diff_card) {
            text.push_str(&format!(
                " sums={}/{s} diffs={}/{d}",
                r.actual_sum_card, r.actual_diff_card
            ));
        }
        if r.extrapolated {
            text.push_str(" extrapolated");
        }
        let record = json!({
            "kind": "verify",
            "scd": r.subject.to_string(),
            "k": p.k,
            "l": p.l,
            "variant": p.variant.to_string(),
            "predicted_gap": r.predicted_gap,
            "actual_gap": r.actual_gap,
            "predicted_sum_card": r.predicted_sum_card,
            "actual_sum_card": r.actual_sum_card,
            "predicted_diff_card": r.predicted_diff_card,
            "actual_diff_card": r.actual_diff_card,
            "missing_diffs": r.missing_diff_actual.to_vec(),
            "missing_sums": r.missing_sum_actual.elements(),
            "extrapolated": r.extrapolated,
            "pass": r.pass,
        });
        out.record(text, record)?;
    }
    if out.format != Format::Jsonl {
        out.line(format!("CHECKED={} FAILED={failed}", reports.len()))?;
    }
    Ok(failed == 0)
}

fn conjecture(out: &mut Out, max_diam: u64) -> Result<bool> {
    let report = theorems::check_conjecture(max_diam);
    for s in &report.counterexamples {
        let gap = classify(&s.to_set())?.gap;
        out.record(
            format!("COUNTEREXAMPLE {s} gap={gap}"),
            json!({"kind": "counterexample", "scd": s.to_string(), "gap": gap}),
        )?;
    }
    out.record(
        format!(
            "CHECKED={} COUNTEREXAMPLES={}",
            report.checked,
            report.counterexamples.len()
        ),
        json!({
            "kind": "conjecture",
            "max_diameter": max_diam,
            "checked": report.checked,
            "counterexamples": report.counterexamples.len(),
        }),
    )?;
    Ok(report.counterexamples.is_empty())
}

fn census(out: &mut Out, lmax: u64, threshold: f64) -> Result<bool> {
    let mut candidates = Vec::new();
    for l in 1..=lmax {
        for closed in [false, true] {
            candidates.push(family::gen_high_ratio(l, closed)?);
        }
    }
    let total = candidates.len();
    let hits = theorems::ratio_census(candidates, threshold);
    for (s, f) in &hits {
        out.record(
            format!("{s} f={f:.6}"),
            json!({"kind": "census", "scd": s.to_string(), "ratio": f}),
        )?;
    }
    if out.format != Format::Jsonl {
        out.line(format!(
            "HITS={} CANDIDATES={total} THRESHOLD={threshold}",
            hits.len()
        ))?;
    }
    Ok(true)
}

fn parse_block(text: &str) -> Result<(usize, usize)> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| anyhow!("--block wants start:len, got {text:?}"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn growth(out: &mut Out, set: &str, block: &str, reps: usize, window: usize) -> Result<bool> {
    let (start, len) = parse_block(block)?;
    let scd = Scd::from_set(&input::parse_set(set)?)?;
    let g = theorems::block_growth(&scd, start, len, reps, window)?;
    let list = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
    let ratio_text = g.ratio.map(|r| r.to_string());
    let mut text = format!(
        "block={:?} gaps={} deltas={}",
        g.block,
        list(&g.gaps),
        list(&g.deltas)
    );
    match (g.t, &ratio_text) {
        (Some(t), Some(r)) => text.push_str(&format!(" T={t} |B|={} T/|B|={r}", g.block_len)),
        _ => text.push_str(" T=undetermined"),
    }
    if let Some(n) = g.start_rep {
        text.push_str(&format!(" mstd_from={n}"));
    }
    if let Some(d) = &g.diagnostic {
        text.push_str(&format!(" note=\"{d}\""));
    }
    let record = json!({
        "kind": "growth",
        "scd": scd.to_string(),
        "block": g.block,
        "block_len": g.block_len,
        "gaps": g.gaps,
        "deltas": g.deltas,
        "t": g.t,
        "ratio": ratio_text,
        "start_rep": g.start_rep,
        "stabilized": g.stabilized,
        "diagnostic": g.diagnostic,
    });
    out.record(text, record)?;
    Ok(g.stabilized)
}

fn construct(out: &mut Out, gap: u64) -> Result<bool> {
    let a = theorems::construct_for_gap(gap)?;
    let actual = classify(&a)?.gap;
    match out.format {
        Format::Jsonl => {
            let mut r = set_record(&a);
            r["gap"] = json!(actual);
            out.line(r.to_string())?;
        }
        _ => out.set(&a)?,
    }
    if actual != gap as i64 {
        eprintln!("constructed set has gap {actual}, wanted {gap}");
        return Ok(false);
    }
    Ok(true)
}

fn search_cmd(out: &mut Out, args: SearchArgs, threads: usize) -> Result<bool> {
    let mut task = SearchTask::new(args.n, args.predicate)
        .threads(threads)
        .symmetry(!args.no_symmetry);
    if args.collect {
        task = task.collect();
    }
    task.limit = args.limit;
    task.checkpoint = args.checkpoint;
    let result = search::enumerate(&task)?;
    for a in result.all_sets() {
        out.set(&a)?;
    }
    let secs = result.elapsed.as_secs_f64();
    out.record(
        format!(
            "FOUND={} MASKS={} SECS={secs:.3}",
            result.total(),
            result.masks_tested
        ),
        json!({
            "kind": "search",
            "n": result.n,
            "predicate": args.predicate.to_string(),
            "found": result.total(),
            "classes": result.counted,
            "self_symmetric": result.self_symmetric,
            "masks": result.masks_tested,
            "secs": secs,
            "symmetry": result.symmetry,
        }),
    )?;
    Ok(true)
}

fn fringe_cmd(out: &mut Out, cmd: FringeCommand, threads: usize) -> Result<bool> {
    match cmd {
        FringeCommand::Verify { n, n_max } => {
            let mut ok = true;
            for n in n..=n_max.unwrap_or(n) {
                let r = fringe::verify_fringe(n)?;
                ok &= r.pass;
                for c in &r.checks {
                    let verdict = if c.holds { "PASS" } else { "FAIL" };
                    out.record(
                        format!("{verdict} n={n} {}: {}", c.name, c.statement),
                        json!({
                            "kind": "fringe",
                            "n": n,
                            "check": c.name,
                            "statement": c.statement,
                            "holds": c.holds,
                            "mismatches": c.mismatches,
                        }),
                    )?;
                }
                out.record(
                    format!(
                        "ATTRIBUTION n={n} [n-41,n+38]: L+U={} U+^U={}",
                        r.interval_is_cross_sum, r.interval_is_upper_restricted_sum
                    ),
                    json!({
                        "kind": "attribution",
                        "n": n,
                        "cross_sum": r.interval_is_cross_sum,
                        "upper_restricted_sum": r.interval_is_upper_restricted_sum,
                    }),
                )?;
            }
            Ok(ok)
        }
        FringeCommand::Bound => {
            let exact = fringe::rsd_lower_bound_exact();
            let shown = fringe::format_truncated(&exact, 4);
            out.record(
                format!("BOUND={shown} EXACT={exact}"),
                json!({
                    "kind": "bound",
                    "display": shown,
                    "exact": exact.to_string(),
                    "value": fringe::rsd_lower_bound(),
                }),
            )?;
            Ok(true)
        }
        FringeCommand::Mc {
            predicate,
            n,
            trials,
            seed,
            conditioned,
        } => {
            let e = fringe::monte_carlo(predicate, n, trials, seed, conditioned, threads)?;
            out.record(
                format!(
                    "PROPORTION={} HITS={} TRIALS={} N={n} PREDICATE={predicate} SEED={seed} CONDITIONED={conditioned}",
                    e.proportion, e.hits, e.trials
                ),
                json!({
                    "kind": "density",
                    "predicate": predicate.to_string(),
                    "n": n,
                    "trials": e.trials,
                    "hits": e.hits,
                    "proportion": e.proportion,
                    "seed": seed,
                    "conditioned": conditioned,
                }),
            )?;
            Ok(true)
        }
    }
}
