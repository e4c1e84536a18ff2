use clap::Args;
use dqt_core::cardinal::{
    reference_probabilities, rescale_states, scale_with_weights, validate_realization,
    CardinalRealization, PairComparison,
};
use dqt_core::gfield::{center_lift, FieldCtx, GaussianElem};
use dqt_core::linalg::StateVector;
use dqt_core::numtheory::{
    ceil_sqrt, least_prime_with_range, least_qnr, SearchBudget, SearchOutcome,
};
use serde_json::json;

use crate::report::{gaussian, table, CliError, Report};

#[derive(Args, Debug)]
pub struct RescaleArgs {
    /// Comma-separated norms-squared of one-qubit states, e.g. `1,2,3,4`.
    #[arg(long, value_delimiter = ',', required = true)]
    norms: Vec<u64>,
    /// Common norm to rescale toward; defaults to the lcm of the norms.
    #[arg(long)]
    target: Option<u64>,
    /// Decimal digits carried by each approximate square root.
    #[arg(long, default_value_t = 0)]
    precision: u32,
    /// Explicit per-state weights instead of derived ones.
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<u64>>,
    /// Field characteristic; by default the least prime whose ordered range
    /// holds every amplitude.
    #[arg(long)]
    p: Option<u64>,
}

/// Amplitudes `(a + bi, c + di)` of a one-qubit state with norm-squared `m`.
/// Norms 1..4 use `(1, 0)`, `(1, 1)`, `(1, 1+i)` and `(1-i, 1+i)`; other
/// norms take the first four-square decomposition with the largest leading
/// term.
pub fn base_amplitudes(m: u64) -> Option<[(i64, i64); 2]> {
    match m {
        0 => None,
        1 => Some([(1, 0), (0, 0)]),
        2 => Some([(1, 0), (1, 0)]),
        3 => Some([(1, 0), (1, 1)]),
        4 => Some([(1, -1), (1, 1)]),
        _ => {
            let top = ceil_sqrt(m) as i64;
            let m = m as i64;
            for a in (0..=top).rev() {
                for b in (0..=a).rev() {
                    for c in (0..=top).rev() {
                        let rest = m - a * a - b * b - c * c;
                        if rest < 0 {
                            continue;
                        }
                        let d = (rest as f64).sqrt().round() as i64;
                        if d * d == rest {
                            return Some([(a, b), (c, d)]);
                        }
                    }
                }
            }
            None
        }
    }
}

fn state_label(psi: &StateVector<GaussianElem>) -> String {
    let parts: Vec<String> = psi
        .amps()
        .iter()
        .map(|&x| {
            let (a, b) = center_lift(x);
            gaussian(a, b)
        })
        .collect();
    format!("({})", parts.join(", "))
}

fn choose_field(p: Option<u64>, max_amp_sq: u64) -> Result<FieldCtx, CliError> {
    // two outcomes: 2 |alpha|^2 <= (k - 1) / 2
    let min_k = 4 * max_amp_sq + 1;
    let p = match p {
        Some(p) => p,
        None => match least_prime_with_range(min_k, true, SearchBudget::DEFAULT) {
            SearchOutcome::Found(p) => p.get(),
            SearchOutcome::Exhausted { budget } => {
                return Err(CliError::budget(format!(
                    "no prime up to {budget} has an ordered range of size {min_k}"
                )))
            }
        },
    };
    let ctx = FieldCtx::new(p)?;
    if !ctx.is_complexifiable() {
        return Err(CliError::usage(format!(
            "{p} is not 3 mod 4, so F_{p}^2 is not available"
        )));
    }
    Ok(ctx)
}

fn describe(c: &PairComparison) -> String {
    format!(
        "state {} outcome {} ({}) vs state {} outcome {} ({}): exact {} < {}",
        c.lower.state + 1,
        c.lower.outcome,
        c.lower.cardinal,
        c.upper.state + 1,
        c.upper.outcome,
        c.upper.cardinal,
        c.lower.reference,
        c.upper.reference,
    )
}

pub fn rescale(args: RescaleArgs) -> Result<Report, CliError> {
    let bases = args
        .norms
        .iter()
        .map(|&m| base_amplitudes(m).ok_or_else(|| CliError::usage("norms must be positive")))
        .collect::<Result<Vec<_>, _>>()?;
    let max_amp_sq = bases
        .iter()
        .flatten()
        .map(|&(a, b)| (a * a + b * b) as u64)
        .max()
        .unwrap_or(0);
    let ctx = choose_field(args.p, max_amp_sq)?;
    let states = bases
        .iter()
        .map(|amps| {
            let elems = amps
                .iter()
                .map(|&(a, b)| ctx.elem(a, b))
                .collect::<Result<Vec<_>, _>>()?;
            StateVector::new(ctx, elems)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let scaled = match &args.weights {
        Some(w) => scale_with_weights(&states, w)?,
        None => rescale_states(&states, args.target, args.precision)?,
    };
    let real = CardinalRealization::from_states(&scaled)?;
    let reference = reference_probabilities(&states)?;
    let report = validate_realization(&real, &reference)?;
    let k = least_qnr(ctx.prime())?.k;

    let rows: Vec<Vec<String>> = scaled
        .iter()
        .zip(&real.probs)
        .zip(&reference)
        .map(|((s, probs), exact)| {
            let ps: Vec<String> = probs.iter().map(u64::to_string).collect();
            let es: Vec<String> = exact.iter().map(|r| r.to_string()).collect();
            vec![
                state_label(&s.base),
                s.norm.to_string(),
                s.weight.to_string(),
                s.mu.to_string(),
                ps.join(", "),
                es.join(", "),
            ]
        })
        .collect();
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut text = format!("field: F_{}^2 (k = {k})\n", ctx.p());
    text += &match &args.weights {
        Some(_) => "weights: given\n".to_string(),
        None => format!(
            "target: {}, precision: {}\n",
            args.target.map_or_else(|| "lcm".into(), |t| t.to_string()),
            args.precision
        ),
    };
    text += &table(&["state", "m", "weight", "mu", "cardinal", "exact"], &rows);
    text += &format!(
        "valid: {}\nstrict: {}\npreserved pairs: {}, tied pairs: {}\n",
        yes(report.valid),
        yes(report.strict),
        report.preserved,
        report.ties
    );
    for (label, list) in [
        ("collapsed", &report.collapsed),
        ("reversed", &report.reversed),
    ] {
        if list.is_empty() {
            text += &format!("{label}: none\n");
        }
        for c in list.iter() {
            text += &format!("{label}: {}\n", describe(c));
        }
    }

    let state_records: Vec<_> = scaled
        .iter()
        .zip(&real.probs)
        .zip(&reference)
        .zip(&bases)
        .map(|(((s, probs), exact), amps)| {
            json!({
                "amplitudes": amps.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
                "norm": s.norm,
                "weight": s.weight,
                "mu": s.mu,
                "cardinal": probs,
                "exact": exact.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(Report::new(
        "cardinal rescale",
        text,
        json!({
            "p": ctx.p(),
            "k": k,
            "target": args.target,
            "precision": args.precision,
            "weights_given": args.weights.is_some(),
            "states": state_records,
            "valid": report.valid,
            "strict": report.strict,
            "preserved": report.preserved,
            "ties": report.ties,
            "collapsed": report.collapsed,
            "reversed": report.reversed,
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_states_have_their_norm() {
        for m in 1..200u64 {
            let amps = base_amplitudes(m).unwrap();
            let norm: i64 = amps.iter().map(|&(a, b)| a * a + b * b).sum();
            assert_eq!(norm as u64, m);
        }
        assert_eq!(base_amplitudes(0), None);
    }

    #[test]
    fn small_norms_pick_the_least_field() {
        assert_eq!(choose_field(None, 2).unwrap().p(), 311);
        assert_eq!(choose_field(None, 1).unwrap().p(), 23);
    }
}
