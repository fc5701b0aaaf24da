use std::fs;
use std::path::PathBuf;

use super::{parse_with_env, Failure, Input, Io, EXIT_DISAGREEMENT, EXIT_NORMALIZED, EXIT_PARSE_ERROR};
use crate::normalizers::{normalize, Strategy};
use crate::oracle::{oracle_normalize, Budget, NormOutcome};
use crate::syntax::{alpha_eq, is_strict_cps, pretty_with, Style, Term};

/// Outcome of one strategy on one term.
#[derive(Clone, Debug)]
pub(crate) struct Row {
    pub name: &'static str,
    pub outcome: Option<NormOutcome>,
}

/// Runs the oracle and every normalizing strategy on `t`. The CPS strategy
/// only runs on strict-CPS terms.
pub(crate) fn cross_check(t: &Term, fuel: u64) -> Vec<Row> {
    let mut rows = vec![Row { name: "oracle", outcome: Some(oracle_normalize(t, &Budget::new(fuel))) }];
    for strategy in [Strategy::Cbn, Strategy::Cbv, Strategy::Nbe, Strategy::Cps] {
        let outcome = if strategy == Strategy::Cps && !is_strict_cps(t) {
            None
        } else {
            normalize(t, strategy, &Budget::new(fuel)).ok()
        };
        rows.push(Row { name: strategy.name(), outcome });
    }
    rows
}

/// True when every normalized result is alpha-equivalent to every other.
pub(crate) fn agree(rows: &[Row]) -> bool {
    let mut results = rows.iter().filter_map(|r| r.outcome.as_ref().and_then(NormOutcome::term));
    match results.next() {
        Some(first) => results.all(|t| alpha_eq(first, t)),
        None => true,
    }
}

fn corpus_lines(text: &str) -> Vec<(usize, String)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let content = line.split('#').next().unwrap_or("").trim();
            (!content.is_empty()).then(|| (i + 1, content.to_owned()))
        })
        .collect()
}

pub(super) fn run(
    input: &Input,
    corpus: Option<&PathBuf>,
    fuel: u64,
    style: Style,
    io: &mut Io,
) -> Result<i32, Failure> {
    let env = input.env()?;
    let terms = match (corpus, &input.expr) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
            corpus_lines(&text)
        }
        (None, Some(expr)) => vec![(1, expr.clone())],
        (None, None) => corpus_lines(&input.text(io)?),
    };

    let (mut checked, mut disagreements, mut parse_errors) = (0, 0, 0);
    for (line, source) in &terms {
        let term = match parse_with_env(source, &env) {
            Ok(t) => t,
            Err(e) => {
                parse_errors += 1;
                let _ = writeln!(io.stderr, "line {line}: {e}");
                continue;
            }
        };
        checked += 1;
        let rows = cross_check(&term, fuel);
        let ok = agree(&rows);
        if !ok {
            disagreements += 1;
        }
        let _ = writeln!(io.stdout, "{}", pretty_with(&term, style));
        for row in &rows {
            let status = match &row.outcome {
                None if row.name == "cps" => "skipped (not strict CPS)".to_owned(),
                None => "not_cps".to_owned(),
                Some(NormOutcome::Normalized { term, steps }) => {
                    format!("normalized {steps:>7}  {}", pretty_with(term, style))
                }
                Some(NormOutcome::Diverged { steps }) => format!("diverged   {steps:>7}"),
            };
            let _ = writeln!(io.stdout, "  {:<7} {status}", row.name);
        }
        let _ = writeln!(io.stdout, "  {}", if ok { "agree" } else { "DISAGREE" });
    }
    let _ = writeln!(io.stdout, "{checked} checked, {disagreements} disagreements");
    Ok(if disagreements > 0 {
        EXIT_DISAGREEMENT
    } else if parse_errors > 0 {
        EXIT_PARSE_ERROR
    } else {
        EXIT_NORMALIZED
    })
}
