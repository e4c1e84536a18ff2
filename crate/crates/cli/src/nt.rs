use dqt_core::numtheory::{
    a000229_verify, nth_prime, resolve_a000229_par, Prime, SearchBudget, SearchOutcome,
};
use dqt_core::ordered::allowed_amplitudes_for;
use serde_json::json;

use crate::report::{gaussian, table as render_table, CliError, Report, EXIT_BUDGET};

pub const DEFAULT_BUDGET: u64 = SearchBudget::DEFAULT.0;

/// Inclusive range of dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dims {
    pub lo: u64,
    pub hi: u64,
}

pub fn parse_dims(s: &str) -> Result<Dims, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|e| format!("bad dimension {t:?}: {e}"))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let d = num(s)?;
            (d, d)
        }
    };
    if lo == 0 || lo > hi {
        return Err(format!("dimension range {s:?} must satisfy 1 <= lo <= hi"));
    }
    Ok(Dims { lo, hi })
}

pub fn table(rows: u64, budget: u64) -> Result<Report, CliError> {
    if rows == 0 {
        return Err(CliError::usage("--rows must be at least 1"));
    }
    let mut cells = Vec::new();
    let mut records = Vec::new();
    let mut missing = 0;
    for i in 1..=rows {
        let k = nth_prime(i)?.get();
        let p = resolve_a000229_par(k, SearchBudget(budget))?
            .found()
            .map(Prime::get);
        missing += p.is_none() as usize;
        cells.push(vec![
            i.to_string(),
            k.to_string(),
            p.map_or_else(|| "-".into(), |p| p.to_string()),
        ]);
        records.push(json!({"pi_k": i, "k": k, "p": p}));
    }
    let mut text = render_table(&["pi(k)", "k", "p"], &cells);
    if missing > 0 {
        text += &format!("{missing} row(s) not resolved within budget {budget}\n");
    }
    let report = Report::new(
        "nt table",
        text,
        json!({"budget": budget, "rows": records, "unresolved": missing}),
    );
    Ok(if missing > 0 {
        report.with_exit(EXIT_BUDGET)
    } else {
        report
    })
}

pub fn find_p(k: u64, budget: u64) -> Result<Report, CliError> {
    match resolve_a000229_par(k, SearchBudget(budget))? {
        SearchOutcome::Found(p) => Ok(Report::new(
            "nt find-p",
            format!("k = {k}\np = {p}\n"),
            json!({"k": k, "p": p.get(), "budget": budget}),
        )),
        SearchOutcome::Exhausted { budget } => Err(CliError::budget(format!(
            "no prime up to {budget} has least quadratic non-residue {k}"
        ))),
    }
}

pub fn verify(p: u64, k: u64) -> Result<Report, CliError> {
    let ok = a000229_verify(p, k);
    let verdict = if ok { "holds" } else { "fails" };
    Ok(Report::new(
        "nt verify",
        format!("least quadratic non-residue of {p} is {k}: {verdict}\n"),
        json!({"p": p, "k": k, "verified": ok}),
    ))
}

fn sorted_amplitudes(k: u64, d: u64) -> Vec<(i64, i64)> {
    let mut set = allowed_amplitudes_for(k, d);
    set.sort_by_key(|&(a, b)| (a * a + b * b, b.abs(), b < 0, a < 0));
    set
}

pub fn amplitudes(k: u64, dims: Dims) -> Result<Report, CliError> {
    if k < 2 {
        return Err(CliError::usage("--k must be at least 2"));
    }
    if dims.hi - dims.lo >= 1 << 16 {
        return Err(CliError::usage("at most 65536 dimensions per call"));
    }
    let mut text = String::new();
    let mut rows = Vec::new();
    for d in dims.lo..=dims.hi {
        let set = sorted_amplitudes(k, d);
        let labels: Vec<String> = set.iter().map(|&(a, b)| gaussian(a, b)).collect();
        text += &format!("F^{d}({k}) [{}] = {{{}}}\n", set.len(), labels.join(", "));
        rows.push(json!({
            "d": d,
            "count": set.len(),
            "amplitudes": set.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
        }));
    }
    Ok(Report::new(
        "amplitudes",
        text,
        json!({"k": k, "rows": rows}),
    ))
}
