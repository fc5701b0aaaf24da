//! Church arithmetic benchmark: beta steps, wall time and result size per
//! strategy.

use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use super::{Failure, Io, EXIT_DISAGREEMENT, EXIT_DIVERGED, EXIT_NORMALIZED};
use crate::church;
use crate::normalizers::{normalize, Strategy};
use crate::oracle::{oracle_normalize, Budget, NormOutcome};
use crate::syntax::{alpha_eq, Term};

pub const DEFAULT_FUEL: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {s:?} (expected text or json)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub case: String,
    pub strategy: String,
    pub beta_steps: u64,
    /// Milliseconds.
    pub wall_time: f64,
    pub result_size: usize,
}

/// The algorithms compared by the benchmark.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Contender {
    Oracle,
    Strategy(Strategy),
}

impl Contender {
    pub const ALL: [Contender; 4] = [
        Contender::Oracle,
        Contender::Strategy(Strategy::Cbn),
        Contender::Strategy(Strategy::Cbv),
        Contender::Strategy(Strategy::Nbe),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Contender::Oracle => "oracle",
            Contender::Strategy(s) => s.name(),
        }
    }

    pub fn run(self, t: &Term, fuel: &Budget) -> NormOutcome {
        match self {
            Contender::Oracle => oracle_normalize(t, fuel),
            Contender::Strategy(s) => normalize(t, s, fuel).expect("benchmark strategies never report NotCps"),
        }
    }
}

/// `plus n n`, `mul n n` and `exp 2 n` for `n` in `1..=max`.
pub fn church_suite(max: u64) -> Vec<(String, Term)> {
    let mut cases = Vec::new();
    for n in 1..=max {
        cases.push((format!("plus {n} {n}"), church::plus(n, n)));
        cases.push((format!("mul {n} {n}"), church::mul(n, n)));
        cases.push((format!("exp 2 {n}"), church::exp(2, n)));
    }
    cases
}

/// Runs one contender, timing it. `None` if it ran out of fuel.
pub fn measure(case: &str, t: &Term, contender: Contender, fuel: u64) -> Option<(BenchRecord, Term)> {
    let start = Instant::now();
    let outcome = contender.run(t, &Budget::new(fuel));
    let wall_time = start.elapsed().as_secs_f64() * 1e3;
    let NormOutcome::Normalized { term, steps } = outcome else { return None };
    let record = BenchRecord {
        case: case.to_owned(),
        strategy: contender.name().to_owned(),
        beta_steps: steps,
        wall_time,
        result_size: term.size(),
    };
    Some((record, term))
}

pub(super) fn run(suite: &str, max: u64, format: Format, fuel: u64, io: &mut Io) -> Result<i32, Failure> {
    if suite != "church" {
        return Err(Failure::parse(format!("unknown suite {suite:?} (expected church)")));
    }
    if format == Format::Text {
        let _ = writeln!(io.stdout, "{:<14} {:<8} {:>10} {:>12} {:>8}", "case", "strategy", "beta", "ms", "size");
    }
    let mut code = EXIT_NORMALIZED;
    for (case, term) in church_suite(max) {
        let mut first: Option<Term> = None;
        for contender in Contender::ALL {
            let Some((record, result)) = measure(&case, &term, contender, fuel) else {
                let _ = writeln!(io.stderr, "{case}: {} diverged within {fuel} beta steps", contender.name());
                code = code.max(EXIT_DIVERGED);
                continue;
            };
            match format {
                Format::Json => {
                    let line = serde_json::to_string(&record).expect("record serializes");
                    let _ = writeln!(io.stdout, "{line}");
                }
                Format::Text => {
                    let _ = writeln!(
                        io.stdout,
                        "{:<14} {:<8} {:>10} {:>12.3} {:>8}",
                        record.case, record.strategy, record.beta_steps, record.wall_time, record.result_size
                    );
                }
            }
            match &first {
                None => first = Some(result),
                Some(expected) if !alpha_eq(expected, &result) => {
                    let _ = writeln!(io.stderr, "{case}: {} disagrees with {}", contender.name(), Contender::ALL[0].name());
                    code = EXIT_DISAGREEMENT;
                }
                Some(_) => {}
            }
        }
    }
    Ok(code)
}
