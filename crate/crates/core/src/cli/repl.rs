use super::{parse_with_env, Failure, Io, EXIT_NORMALIZED};
use crate::normalizers::{normalize, Strategy};
use crate::oracle::{Budget, NormOutcome};
use crate::syntax::{parse_env, pretty_with, Name, Style, Term};

const HELP: &str = "\
:strategy <whnf|cbn|cbv|cps|nbe>   select the normalizer
:fuel <n>                          set the beta-step budget
:let <name> = <term>               define a name
:quit                              leave";

struct Session {
    strategy: Strategy,
    fuel: u64,
    env: Vec<(Name, Term)>,
    style: Style,
}

enum Reply {
    Say(String),
    Quit,
}

impl Session {
    fn handle(&mut self, line: &str) -> Reply {
        let line = line.trim();
        let Some(directive) = line.strip_prefix(':') else {
            return Reply::Say(self.evaluate(line));
        };
        let (command, rest) = directive.split_once(char::is_whitespace).unwrap_or((directive, ""));
        let rest = rest.trim();
        Reply::Say(match command {
            "q" | "quit" => return Reply::Quit,
            "h" | "help" => HELP.to_owned(),
            "strategy" if rest.is_empty() => format!("strategy {}", self.strategy),
            "strategy" => match rest.parse() {
                Ok(s) => {
                    self.strategy = s;
                    format!("strategy {s}")
                }
                Err(e) => format!("error: {e}"),
            },
            "fuel" if rest.is_empty() => format!("fuel {}", self.fuel),
            "fuel" => match rest.parse() {
                Ok(n) => {
                    self.fuel = n;
                    format!("fuel {n}")
                }
                Err(_) => format!("error: {rest:?} is not a number"),
            },
            "let" => self.define(rest),
            _ => format!("error: unknown directive :{command} (try :help)"),
        })
    }

    fn define(&mut self, binding: &str) -> String {
        match parse_env(binding, false) {
            Ok(mut parsed) if parsed.len() == 1 => {
                let (name, term) = parsed.pop().expect("one binding");
                let term = crate::syntax::inline_env(&term, &self.env);
                self.env.retain(|(n, _)| *n != name);
                let reply = format!("{name} = {}", pretty_with(&term, self.style));
                self.env.push((name, term));
                reply
            }
            Ok(_) => "error: expected :let <name> = <term>".to_owned(),
            Err(e) => format!("error: {e}"),
        }
    }

    fn evaluate(&self, source: &str) -> String {
        let term = match parse_with_env(source, &self.env) {
            Ok(t) => t,
            Err(e) => return format!("error: {e}"),
        };
        match normalize(&term, self.strategy, &Budget::new(self.fuel)) {
            Ok(NormOutcome::Normalized { term, .. }) => pretty_with(&term, self.style),
            Ok(NormOutcome::Diverged { steps }) => format!("diverged: no normal form within {steps} beta steps"),
            Err(e) => format!("error: {e}"),
        }
    }
}

pub(super) fn run(
    strategy: Strategy,
    fuel: u64,
    env: Vec<(Name, Term)>,
    style: Style,
    io: &mut Io,
) -> Result<i32, Failure> {
    let mut session = Session { strategy, fuel, env, style };
    let mut line = String::new();
    loop {
        let _ = write!(io.stdout, "> ");
        let _ = io.stdout.flush();
        line.clear();
        match io.stdin.read_line(&mut line) {
            Ok(0) => break,
            Ok(_) => {}
            Err(e) => return Err(Failure::parse(format!("stdin: {e}"))),
        }
        let content = line.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        match session.handle(content) {
            Reply::Say(text) => {
                let _ = writeln!(io.stdout, "{text}");
            }
            Reply::Quit => break,
        }
    }
    let _ = writeln!(io.stdout);
    Ok(EXIT_NORMALIZED)
}

#[cfg(test)]
mod tests {
    use super::super::run_captured;

    fn session(input: &str) -> Vec<String> {
        let (code, out, _) = run_captured(["lamnorm", "repl"], input);
        assert_eq!(code, 0);
        out.split("> ").map(|s| s.trim().to_owned()).filter(|s| !s.is_empty()).collect()
    }

    #[test]
    fn evaluates_lines() {
        assert_eq!(session("(\\x.x) y\n"), ["y"]);
    }

    #[test]
    fn strategy_switch() {
        let out = session(":strategy cbv\n(\\a.\\b.a) (\\z.z) ((\\w.w w)(\\w.w w))\n");
        assert_eq!(out[0], "strategy cbv");
        assert!(out[1].starts_with("diverged"), "{out:?}");
    }

    #[test]
    fn definitions() {
        assert_eq!(session(":let id = \\x.x\nid z\n"), ["id = \\x. x", "z"]);
    }

    #[test]
    fn errors_are_not_fatal() {
        let out = session("(x\n:fuel many\n:bogus\n:fuel 3\n(\\x.x x)(\\x.x x)\n:quit\nnever reached\n");
        assert!(out[0].starts_with("error:"));
        assert!(out[1].starts_with("error:"));
        assert!(out[2].starts_with("error: unknown directive"));
        assert_eq!(out[3], "fuel 3");
        assert_eq!(out[4], "diverged: no normal form within 3 beta steps");
        assert_eq!(out.len(), 5);
    }
}
