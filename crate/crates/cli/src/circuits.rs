use std::path::Path;

use dqt_core::algorithms::{self, DjVerdict, ResourceEstimate};
use dqt_core::gfield::{FieldCtx, Fp, GaussianElem, Scalar};
use dqt_core::linalg::StateVector;
use dqt_core::modal::{
    admissible_oracles, format_bits, measure_outcomes, usat_decide, usat_run, Oracle, OracleSpec,
    Satisfiability,
};
use dqt_core::numtheory::SearchBudget;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::{ket, table, CliError, Report, EXIT_BUDGET, EXIT_FAILURE};

/// Largest oracle width accepted on the command line.
pub const MAX_CLI_BITS: usize = 12;

pub const SAMPLE_NOTE: &str =
    "extrapolation: modal measurement defines no distribution over outcomes";

pub fn load_oracle(path: &Path) -> Result<Oracle, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let spec: OracleSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("bad oracle file {}: {e}", path.display())))?;
    check_width(spec.n)?;
    Ok(Oracle::from_spec(&spec)?)
}

fn check_width(n: usize) -> Result<(), CliError> {
    if n == 0 || n > MAX_CLI_BITS {
        return Err(CliError::usage(format!(
            "oracle width must be in 1..={MAX_CLI_BITS}, got {n}"
        )));
    }
    Ok(())
}

fn ones(f: &Oracle) -> Vec<String> {
    f.ones().map(|x| format_bits(x, f.n())).collect()
}

fn list_or_none(items: &[String]) -> String {
    if items.is_empty() {
        "none".into()
    } else {
        items.join(", ")
    }
}

fn kets(indices: &[usize], n: usize) -> Vec<String> {
    indices.iter().map(|&i| ket(i, n)).collect()
}

/// Signed integers beyond `i64` are emitted as decimal strings.
fn int(x: i128) -> Value {
    i64::try_from(x).map_or_else(|_| json!(x.to_string()), |v| json!(v))
}

fn verdict_word(s: Satisfiability) -> &'static str {
    match s {
        Satisfiability::Satisfiable => "satisfiable",
        Satisfiability::Unsatisfiable => "unsatisfiable",
    }
}

pub fn modal_usat_file(path: &Path, sample: Option<u64>) -> Result<Report, CliError> {
    let f = load_oracle(path)?;
    let n = f.n();
    let outcomes: Vec<usize> = measure_outcomes(&usat_run(&f)?)?.into_iter().collect();
    let verdict = usat_decide(&f)?;
    let labels = kets(&outcomes, n);
    let mut text = format!(
        "oracle: n = {n}, satisfying inputs: {}\noutcomes: {}\nverdict: {}\n",
        list_or_none(&ones(&f)),
        labels.join(", "),
        verdict_word(verdict),
    );
    let mut payload = json!({
        "n": n,
        "ones": ones(&f),
        "outcomes": labels,
        "outcome_indices": outcomes,
        "verdict": verdict,
    });
    if let Some(seed) = sample {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pick = *outcomes.choose(&mut rng).expect("outcome set is non-empty");
        text += &format!("sample (seed {seed}): {} [{SAMPLE_NOTE}]\n", ket(pick, n));
        payload["sample"] =
            json!({"seed": seed, "outcome": ket(pick, n), "index": pick, "note": SAMPLE_NOTE});
    }
    Ok(Report::new("modal usat", text, payload))
}

pub fn modal_usat_exhaustive(n: usize) -> Result<Report, CliError> {
    check_width(n)?;
    let mut rows = Vec::new();
    let mut records = Vec::new();
    let mut mismatches = 0;
    for f in admissible_oracles(n) {
        let marked = f.ones().next();
        let verdict = usat_decide(&f)?;
        let expected = if marked.is_some() {
            Satisfiability::Satisfiable
        } else {
            Satisfiability::Unsatisfiable
        };
        let agree = verdict == expected;
        mismatches += !agree as usize;
        let label = marked.map_or_else(|| "none".to_string(), |x| format_bits(x, n));
        rows.push(vec![
            label.clone(),
            verdict_word(verdict).into(),
            if agree { "yes" } else { "NO" }.into(),
        ]);
        records.push(json!({"marked": marked.map(|x| format_bits(x, n)), "verdict": verdict, "correct": agree}));
    }
    let total = rows.len();
    let mut text = table(&["marked", "verdict", "correct"], &rows);
    text += &format!(
        "{} of {total} oracles decided correctly\n",
        total - mismatches
    );
    let report = Report::new(
        "modal usat",
        text,
        json!({"n": n, "oracles": records, "total": total, "mismatches": mismatches}),
    );
    Ok(if mismatches > 0 {
        report.with_exit(EXIT_FAILURE)
    } else {
        report
    })
}

/// Runs `body` over `F_{p^2}` when `p = 3 mod 4`, and over `F_p` otherwise.
fn with_field<T>(
    p: u64,
    complex: impl FnOnce(FieldCtx) -> Result<T, CliError>,
    real: impl FnOnce(FieldCtx) -> Result<T, CliError>,
) -> Result<(T, String), CliError> {
    let ctx = FieldCtx::new(p)?;
    if ctx.is_complexifiable() {
        Ok((complex(ctx)?, format!("F_{p}^2")))
    } else {
        Ok((real(ctx)?, format!("F_{p}")))
    }
}

fn rendered<S: Scalar>(psi: &StateVector<S>, i: usize) -> String {
    psi.get(i).render(true)
}

struct Dqc1Summary {
    amplitude_00: String,
    support: Vec<usize>,
    supernatural: bool,
}

fn dqc1_in<S: Scalar>(f: &Oracle, ctx: S::Ctx) -> Result<Dqc1Summary, CliError> {
    let run = algorithms::dqc1_usat_run::<S>(f, ctx)?;
    Ok(Dqc1Summary {
        amplitude_00: run.amplitude_00.render(true),
        support: run.state.support(),
        supernatural: run.supernatural,
    })
}

pub fn dqc1_usat(path: &Path, p: u64) -> Result<Report, CliError> {
    let f = load_oracle(path)?;
    let n = f.n();
    let (run, field) = with_field(
        p,
        |ctx| dqc1_in::<GaussianElem>(&f, ctx),
        |ctx| dqc1_in::<Fp>(&f, ctx),
    )?;
    let divides = algorithms::dqc1_divisibility(p, n as u32);
    let outcomes = kets(&run.support, n);
    let yes = |b: bool| if b { "yes" } else { "no" };
    let text = format!(
        "field: {field}\noracle: n = {n}, satisfying inputs: {}\namplitude of {}: {}\noutcomes: {}\n\
         supernatural: {}\np divides 2^n - 1: {}\n",
        list_or_none(&ones(&f)),
        ket(0, n),
        run.amplitude_00,
        outcomes.join(", "),
        yes(run.supernatural),
        yes(divides),
    );
    Ok(Report::new(
        "dqc1 usat",
        text,
        json!({
            "p": p,
            "field": field,
            "n": n,
            "ones": ones(&f),
            "amplitude_00": run.amplitude_00,
            "outcomes": outcomes,
            "supernatural": run.supernatural,
            "p_divides_2n_minus_1": divides,
        }),
    ))
}

struct DjSummary {
    verdict: DjVerdict,
    amp0: String,
    amp1: String,
    support: Vec<usize>,
}

fn dj_in<S: Scalar>(f: &Oracle, ctx: S::Ctx) -> Result<DjSummary, CliError> {
    let psi = algorithms::dj_final_state::<S>(f, ctx)?;
    let verdict = algorithms::dj_decide::<S>(f, ctx)?;
    Ok(DjSummary {
        verdict,
        amp0: rendered(&psi, 0),
        amp1: rendered(&psi, psi.dim() / 2),
        support: psi.support(),
    })
}

pub fn dj_run(path: &Path, p: u64) -> Result<Report, CliError> {
    let f = load_oracle(path)?;
    let n = f.n();
    if p == 2 {
        return Err(CliError::usage(
            "characteristic 2 cannot separate constant from balanced oracles",
        ));
    }
    let (run, field) = with_field(
        p,
        |ctx| dj_in::<GaussianElem>(&f, ctx),
        |ctx| dj_in::<Fp>(&f, ctx),
    )?;
    let verdict = match run.verdict {
        DjVerdict::Constant => "constant",
        DjVerdict::Balanced => "balanced",
    };
    let outcomes = kets(&run.support, n);
    let half = 1usize << n;
    let text = format!(
        "field: {field}\noracle: n = {n}, satisfying inputs: {}\namplitude of {}: {}\namplitude of {}: {}\n\
         outcomes: {}\nverdict: {verdict}\n",
        list_or_none(&ones(&f)),
        ket(0, n),
        run.amp0,
        ket(half, n),
        run.amp1,
        outcomes.join(", "),
    );
    Ok(Report::new(
        "dj run",
        text,
        json!({
            "p": p,
            "field": field,
            "n": n,
            "ones": ones(&f),
            "amplitudes_at_zero": [run.amp0, run.amp1],
            "outcomes": outcomes,
            "verdict": run.verdict,
        }),
    ))
}

fn resources_report(command: &str, size_label: &str, est: ResourceEstimate, budget: u64) -> Report {
    let opt = |v: Option<u64>, none: &str| v.map_or_else(|| none.to_string(), |x| x.to_string());
    let p = est.p.map(|p| p.get());
    let rows = [
        vec!["input bits".into(), est.n.to_string()],
        vec![size_label.into(), est.d.to_string()],
        vec!["max |amplitude|^2".into(), est.amplitude_bound.to_string()],
        vec!["k bound".into(), est.k_bound.to_string()],
        vec!["k".into(), est.k.to_string()],
        vec!["pi(k)".into(), opt(est.pi_k, "not computed")],
        vec!["p".into(), opt(p, &format!("not found up to {budget}"))],
    ];
    let width = rows.iter().map(|r| r[0].len()).max().unwrap_or(0);
    let text: String = rows
        .iter()
        .map(|r| format!("{:<width$}  {}\n", r[0], r[1]))
        .collect();
    let report = Report::new(
        command,
        text,
        json!({
            "n": est.n,
            "d": est.d,
            "amplitude_bound": est.amplitude_bound,
            "k_bound": est.k_bound,
            "k": est.k,
            "pi_k": est.pi_k,
            "p": p,
            "budget": budget,
        }),
    );
    if p.is_none() {
        report.with_exit(EXIT_BUDGET)
    } else {
        report
    }
}

pub fn dj_resources(n: u32, budget: u64) -> Result<Report, CliError> {
    let est = algorithms::dj_resources(n, SearchBudget(budget))?;
    Ok(resources_report("dj resources", "dimension", est, budget))
}

fn grover_size(n: u32) -> Result<u64, CliError> {
    if !(2..=62).contains(&n) {
        return Err(CliError::usage(format!("--n must be in 2..=62, got {n}")));
    }
    Ok(1 << n)
}

pub fn grover_resources(n: u32, budget: u64) -> Result<Report, CliError> {
    let est = algorithms::grover_resources(grover_size(n)?, SearchBudget(budget))?;
    Ok(resources_report(
        "grover resources",
        "entries N",
        est,
        budget,
    ))
}

pub fn grover_trace(n: u32, target: usize, p: Option<u64>) -> Result<Report, CliError> {
    let size = grover_size(n)?;
    let field = p.map(FieldCtx::new).transpose()?;
    let t = algorithms::grover_trace(size, target, field)?;
    let rows: Vec<Vec<String>> = (0..t.raw.len())
        .map(|l| {
            vec![
                l.to_string(),
                t.raw[l].0.to_string(),
                t.raw[l].1.to_string(),
                t.weights[l].to_string(),
                t.scaled[l].0.to_string(),
                t.scaled[l].1.to_string(),
                t.target_probs[l].to_string(),
                t.other_probs[l].to_string(),
                t.scales[l].to_string(),
            ]
        })
        .collect();
    let mut text = format!("N = {size}, target = {target}, j = {}\n", t.j);
    text += &table(
        &[
            "step",
            "a",
            "b",
            "weight",
            "scaled a",
            "scaled b",
            "P(target)",
            "P(other)",
            "mu",
        ],
        &rows,
    );
    text += &format!("needed k = {}\n", t.needed_k);
    if let Some(p) = p {
        text += &format!("fits the ordered range of p = {p}\n");
    }
    let pairs = |v: &[(i128, i128)]| {
        v.iter()
            .map(|&(a, b)| json!([int(a), int(b)]))
            .collect::<Vec<_>>()
    };
    Ok(Report::new(
        "grover trace",
        text,
        json!({
            "N": size,
            "target": target,
            "j": t.j,
            "raw": pairs(&t.raw),
            "weights": t.weights,
            "scaled": pairs(&t.scaled),
            "scales": t.scales,
            "mu": t.mu(),
            "target_probs": t.target_probs,
            "other_probs": t.other_probs,
            "needed_k": t.needed_k,
            "p": p,
        }),
    ))
}
