//! The `lamnorm` command line.
//!
//! [`run`] takes the arguments and the three standard streams explicitly so
//! that tests can drive it in-process. The exit code depends only on the
//! outcome: 0 normalized, 1 parse or usage error, 2 diverged, 3 not in strict
//! CPS, 4 strategies disagree.

pub mod bench;
mod check;
mod repl;

use std::ffi::OsString;
use std::fs;
use std::io::{BufRead, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::cps::{cps, CpsVariant};
use crate::normalizers::{normalize, Strategy};
use crate::oracle::{Budget, NormOutcome};
use crate::syntax::{inline_env, parse, parse_env, pretty_with, Name, Style, Term};

pub const EXIT_NORMALIZED: i32 = 0;
pub const EXIT_PARSE_ERROR: i32 = 1;
pub const EXIT_DIVERGED: i32 = 2;
pub const EXIT_NOT_CPS: i32 = 3;
pub const EXIT_DISAGREEMENT: i32 = 4;

pub const DEFAULT_FUEL: u64 = 100_000;

const AFTER_HELP: &str = "\
Syntax: `\\x. t` or `λx. t` for abstraction, juxtaposition for application.
Application is left-associative and binds tighter than an abstraction body,
which extends as far right as possible. `#` starts a comment. Identifiers
match [a-zA-Z][a-zA-Z0-9_']*; names starting with `_` are reserved for
generated binders.

Strategies: whnf (weak head), cbn (call-by-name, complete), cbv
(call-by-value), cps (strict CPS terms only), nbe (normalization by
evaluation, default). cbv and nbe evaluate arguments before applying, so they
diverge on terms such as `(\\a.\\b.a) (\\z.z) ((\\w.w w)(\\w.w w))` that cbn
normalizes.

Exit codes: 0 normalized, 1 parse error, 2 diverged, 3 not in strict CPS,
4 strategies disagree.";

#[derive(Debug, Parser)]
#[command(name = "lamnorm", version, about = "Normalize untyped lambda terms", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print abstractions as `\x. t` (the default)
    #[arg(long, global = true, conflicts_with = "unicode")]
    ascii: bool,

    /// Print abstractions as `λx. t`
    #[arg(long, global = true)]
    unicode: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normalize a term with the chosen strategy
    Normalize {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "nbe")]
        strategy: Strategy,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        /// Print a single JSON report instead of the term
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a term to weak head normal form
    Whnf {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        #[arg(long)]
        json: bool,
    },
    /// Print the continuation-passing image of a term
    Cps {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "cbn")]
        variant: CpsVariant,
    },
    /// Cross-check every strategy against the normal-order oracle
    Check {
        #[command(flatten)]
        input: Input,
        /// File with one term per line
        #[arg(long, conflicts_with = "expr")]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
    },
    /// Time every strategy on a benchmark suite
    Bench {
        #[arg(long, default_value = "church")]
        suite: String,
        #[arg(long, default_value_t = 10)]
        max: u64,
        #[arg(long, default_value = "text")]
        format: bench::Format,
        #[arg(long, default_value_t = bench::DEFAULT_FUEL)]
        fuel: u64,
    },
    /// Read terms interactively
    Repl {
        #[arg(long, default_value = "nbe")]
        strategy: Strategy,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        #[arg(long)]
        env: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Input {
    /// The term; read from standard input with --stdin
    expr: Option<String>,
    #[arg(long, conflicts_with = "expr")]
    stdin: bool,
    /// File of `name = term` definitions inlined into the input
    #[arg(long)]
    env: Option<PathBuf>,
    /// Reject definitions that mention undefined names
    #[arg(long)]
    strict_env: bool,
}

/// Standard streams handed to [`run`].
pub struct Io<'a> {
    pub stdin: &'a mut dyn BufRead,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

/// One normalization request, as printed by `--json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub input: String,
    pub strategy: String,
    pub fuel_limit: u64,
    pub steps_used: u64,
    pub outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<String>,
}

/// Failure of the command itself, reported on stderr with an exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn parse(message: impl ToString) -> Self {
        Failure { code: EXIT_PARSE_ERROR, message: message.to_string() }
    }
}

type Env = Vec<(Name, Term)>;

fn load_env(path: Option<&PathBuf>, strict: bool) -> Result<Env, Failure> {
    let Some(path) = path else { return Ok(Vec::new()) };
    let text = fs::read_to_string(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    parse_env(&text, strict).map_err(|e| Failure::parse(format!("{}:{e}", path.display())))
}

impl Input {
    fn text(&self, io: &mut Io) -> Result<String, Failure> {
        if let Some(expr) = &self.expr {
            return Ok(expr.clone());
        }
        if !self.stdin {
            return Err(Failure::parse("no term given (pass one as an argument or use --stdin)"));
        }
        let mut text = String::new();
        io.stdin.read_to_string(&mut text).map_err(|e| Failure::parse(format!("stdin: {e}")))?;
        Ok(text)
    }

    fn env(&self) -> Result<Env, Failure> {
        load_env(self.env.as_ref(), self.strict_env)
    }
}

pub(crate) fn parse_with_env(text: &str, env: &[(Name, Term)]) -> Result<Term, crate::syntax::ParseError> {
    parse(text).map(|t| inline_env(&t, env))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, io: &mut Io) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE_ERROR } else { EXIT_NORMALIZED };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { io.stderr } else { io.stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let style = if cli.unicode { Style::Unicode } else { Style::Ascii };
    let result = match cli.command {
        Command::Normalize { input, strategy, fuel, json } => cmd_normalize(&input, strategy, fuel, json, style, io),
        Command::Whnf { input, fuel, json } => cmd_normalize(&input, Strategy::Whnf, fuel, json, style, io),
        Command::Cps { input, variant } => cmd_cps(&input, variant, style, io),
        Command::Check { input, corpus, fuel } => check::run(&input, corpus.as_ref(), fuel, style, io),
        Command::Bench { suite, max, format, fuel } => bench::run(&suite, max, format, fuel, io),
        Command::Repl { strategy, fuel, env } => {
            load_env(env.as_ref(), false).and_then(|env| repl::run(strategy, fuel, env, style, io))
        }
    };
    match result {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            let _ = writeln!(io.stderr, "error: {message}");
            code
        }
    }
}

fn cmd_normalize(
    input: &Input,
    strategy: Strategy,
    fuel: u64,
    json: bool,
    style: Style,
    io: &mut Io,
) -> Result<i32, Failure> {
    let text = input.text(io)?;
    let env = input.env()?;
    let mut report = RunReport {
        input: text.trim().to_owned(),
        strategy: strategy.name().to_owned(),
        fuel_limit: fuel,
        steps_used: 0,
        outcome: "parse_error",
        result: None,
    };
    let emit = |report: &RunReport, io: &mut Io| {
        let line = serde_json::to_string(report).expect("report serializes");
        let _ = writeln!(io.stdout, "{line}");
    };

    let term = match parse_with_env(&text, &env) {
        Ok(term) => term,
        Err(e) if json => {
            emit(&report, io);
            let _ = writeln!(io.stderr, "error: {e}");
            return Ok(EXIT_PARSE_ERROR);
        }
        Err(e) => return Err(Failure::parse(e)),
    };

    let budget = Budget::new(fuel);
    let code = match normalize(&term, strategy, &budget) {
        Ok(NormOutcome::Normalized { term, steps }) => {
            report.outcome = "normalized";
            report.steps_used = steps;
            report.result = Some(pretty_with(&term, style));
            EXIT_NORMALIZED
        }
        Ok(NormOutcome::Diverged { steps }) => {
            report.outcome = "diverged";
            report.steps_used = steps;
            EXIT_DIVERGED
        }
        Err(not_cps) => {
            report.outcome = "not_cps";
            if !json {
                let _ = writeln!(io.stderr, "error: {not_cps}");
            }
            EXIT_NOT_CPS
        }
    };
    if json {
        emit(&report, io);
    } else if let Some(result) = &report.result {
        let _ = writeln!(io.stdout, "{result}");
    } else if code == EXIT_DIVERGED {
        let _ = writeln!(io.stderr, "diverged: no normal form within {} beta steps", report.steps_used);
    }
    Ok(code)
}

fn cmd_cps(input: &Input, variant: CpsVariant, style: Style, io: &mut Io) -> Result<i32, Failure> {
    let text = input.text(io)?;
    let env = input.env()?;
    let term = parse_with_env(&text, &env).map_err(Failure::parse)?;
    let _ = writeln!(io.stdout, "{}", pretty_with(&cps(&term, variant), style));
    Ok(EXIT_NORMALIZED)
}

/// Runs [`run`] against in-memory streams, returning the exit code, stdout
/// and stderr.
pub fn run_captured<I, T>(args: I, stdin: &str) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut input = std::io::Cursor::new(stdin.as_bytes().to_vec());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(args, &mut Io { stdin: &mut input, stdout: &mut out, stderr: &mut err });
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, parse_generated};

    fn lamnorm(args: &[&str]) -> (i32, String, String) {
        run_captured(std::iter::once("lamnorm").chain(args.iter().copied()), "")
    }

    #[test]
    fn normalize_prints_term() {
        let (code, out, _) = lamnorm(&["normalize", "--strategy", "nbe", r"(\x.x) (\y.y)"]);
        assert_eq!((code, out.as_str()), (0, "\\_0. _0\n"));
        assert!(alpha_eq(&parse_generated(&out).unwrap(), &parse(r"\y. y").unwrap()));
        let (_, out, _) = lamnorm(&["normalize", "--unicode", r"(\x.x) (\y.y)"]);
        assert_eq!(out, "λ_0. _0\n");
    }

    #[test]
    fn exit_codes() {
        let kio = r"(\a.\b.a) (\z.z) ((\w.w w)(\w.w w))";
        assert_eq!(lamnorm(&["normalize", "--strategy", "cbv", "--fuel", "1000", kio]).0, 2);
        assert_eq!(lamnorm(&["normalize", "--strategy", "cps", "(x y) z"]).0, 3);
        assert_eq!(lamnorm(&["normalize", r"\x."]).0, 1);
        assert_eq!(lamnorm(&["normalize", "--strategy", "fast", "x"]).0, 1);
        assert_eq!(lamnorm(&["frobnicate"]).0, 1);
        assert_eq!(lamnorm(&["--help"]).0, 0);
    }

    #[test]
    fn json_report() {
        let (code, out, _) = lamnorm(&["normalize", "--json", r"(\x.x) y"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["outcome"], "normalized");
        assert_eq!(v["strategy"], "nbe");
        assert_eq!(v["steps_used"], 1);
        assert_eq!(v["fuel_limit"], DEFAULT_FUEL);
        assert_eq!(v["result"], "y");

        let (code, out, _) = lamnorm(&["normalize", "--json", "--fuel", "7", r"(\x.x x)(\x.x x)"]);
        assert_eq!(code, 2);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["outcome"], "diverged");
        assert_eq!(v["steps_used"], 7);
        assert!(v.get("result").is_none());

        let (code, out, _) = lamnorm(&["normalize", "--json", "(x"]);
        assert_eq!(code, 1);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["outcome"], "parse_error");
    }

    #[test]
    fn stdin_and_env() {
        let dir = std::env::temp_dir().join(format!("lamnorm-cli-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let env = dir.join("defs.lam");
        fs::write(&env, "two = \\f.\\x.f (f x)\nfour = two two\n").unwrap();
        let args = ["lamnorm", "normalize", "--stdin", "--env", env.to_str().unwrap()];
        let (code, out, _) = run_captured(args, "four # from stdin\n");
        assert_eq!(code, 0);
        assert!(alpha_eq(&parse_generated(&out).unwrap(), &crate::church::encode(4)));
        let (code, _, err) = lamnorm(&["normalize", "--env", "/nonexistent/defs.lam", "x"]);
        assert_eq!(code, 1);
        assert!(err.contains("nonexistent"));
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn cps_subcommand() {
        assert_eq!(lamnorm(&["cps", "--variant", "cbn", "x y"]).1, "\\_k0. x (\\_m1. _m1 y _k0)\n");
        assert_eq!(lamnorm(&["cps", "--variant", "cbv", "x"]).1, "\\_k0. _k0 x\n");
        assert_eq!(lamnorm(&["cps", "x"]).1, "x\n");
    }
}
