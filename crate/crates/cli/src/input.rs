use std::io::{self, BufRead};

use anyhow::{anyhow, bail, Context, Result};
use mstd::{IntegerSet, Scd};

/// SCD text `(a|d,...)`, a set literal `{a,b,...}`, or a json-lines record
/// carrying an `scd` field. Chosen by the leading character.
pub fn parse_set(text: &str) -> Result<IntegerSet> {
    let t = text.trim();
    match t.chars().next() {
        Some('(') => Ok(t
            .parse::<Scd>()
            .with_context(|| format!("bad SCD {t:?}"))?
            .to_set()),
        Some('{') if t[1..].trim_start().starts_with('"') => {
            let v: serde_json::Value = serde_json::from_str(t).context("bad json record")?;
            let scd = v
                .get("scd")
                .and_then(|s| s.as_str())
                .ok_or_else(|| anyhow!("json record has no \"scd\" string"))?;
            parse_set(scd)
        }
        Some('{') => t
            .parse::<IntegerSet>()
            .with_context(|| format!("bad set literal {t:?}")),
        Some(c) => bail!("expected '(' or '{{' at start of set, found {c:?}"),
        None => bail!("empty set argument"),
    }
}

/// The positional sets, or every non-blank stdin line when none are given.
pub fn gather_sets(args: &[String]) -> Result<Vec<IntegerSet>> {
    if !args.is_empty() && args != ["-"] {
        return args.iter().map(|a| parse_set(a)).collect();
    }
    let mut out = Vec::new();
    for line in io::stdin().lock().lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(parse_set(&line)?);
        }
    }
    if out.is_empty() {
        bail!("no sets given on the command line or stdin");
    }
    Ok(out)
}
