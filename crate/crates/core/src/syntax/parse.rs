use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use super::{free_vars, is_ident_continue, Name, Term};
use crate::grow;
use crate::oracle::subst;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
    #[error("identifier {0:?} is reserved (names starting with '_' are machine-generated)")]
    ReservedName(String),
    #[error("expected `name = term`")]
    MissingBinding,
    #[error("{0:?} is defined twice")]
    DuplicateBinding(String),
    #[error("unknown name {0:?}")]
    UnknownName(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Lambda,
    Dot,
    LParen,
    RParen,
    Ident(String),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Lambda => f.write_str("`\\`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

impl Pos {
    fn error(self, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, column: self.column, kind }
    }
}

fn lex(text: &str, start: Pos, reserved_ok: bool) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut pos = start;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let here = pos;
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                pos.line += 1;
                pos.column = 1;
            } else {
                pos.column += 1;
            }
        };
        match c {
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump(&mut chars);
                }
            }
            c if c.is_whitespace() => bump(&mut chars),
            '\\' | 'λ' => {
                bump(&mut chars);
                out.push((Tok::Lambda, here));
            }
            '.' => {
                bump(&mut chars);
                out.push((Tok::Dot, here));
            }
            '(' => {
                bump(&mut chars);
                out.push((Tok::LParen, here));
            }
            ')' => {
                bump(&mut chars);
                out.push((Tok::RParen, here));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if !is_ident_continue(c) {
                        break;
                    }
                    ident.push(c);
                    bump(&mut chars);
                }
                if ident.starts_with('_') && !reserved_ok {
                    return Err(here.error(ParseErrorKind::ReservedName(ident)));
                }
                out.push((Tok::Ident(ident), here));
            }
            c => return Err(here.error(ParseErrorKind::UnexpectedChar(c))),
        }
    }
    out.push((Tok::End, pos));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn next(&mut self) -> Tok {
        let tok = self.toks[self.at].0.clone();
        if tok != Tok::End {
            self.at += 1;
        }
        tok
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        self.pos().error(ParseErrorKind::Unexpected { expected, found: self.peek().to_string() })
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    // term := lambda | atom+ lambda?
    fn term(&mut self) -> Result<Term, ParseError> {
        grow(|| {
            if *self.peek() == Tok::Lambda {
                return self.lambda();
            }
            let mut head = self.atom()?;
            loop {
                match self.peek() {
                    Tok::Ident(_) | Tok::LParen => {
                        let arg = self.atom()?;
                        head = Term::app(head, arg);
                    }
                    Tok::Lambda => {
                        let arg = self.lambda()?;
                        return Ok(Term::app(head, arg));
                    }
                    _ => return Ok(head),
                }
            }
        })
    }

    fn lambda(&mut self) -> Result<Term, ParseError> {
        self.expect(Tok::Lambda, "`\\`")?;
        let binder = match self.next() {
            Tok::Ident(x) => Name::new(x),
            _ => {
                self.at -= 1;
                return Err(self.unexpected("a binder name"));
            }
        };
        self.expect(Tok::Dot, "`.`")?;
        let body = self.term()?;
        Ok(Term::Lam(binder, body.into()))
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.next();
                Ok(Term::var(x.as_str()))
            }
            Tok::LParen => {
                self.next();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(self.unexpected("a term")),
        }
    }
}

fn parse_at(text: &str, start: Pos, reserved_ok: bool) -> Result<Term, ParseError> {
    let mut parser = Parser { toks: lex(text, start, reserved_ok)?, at: 0 };
    let t = parser.term()?;
    if *parser.peek() != Tok::End {
        return Err(parser.unexpected("end of input"));
    }
    Ok(t)
}

/// Parses a single term.
///
/// Abstraction is written `\x.t` or `λx.t` and its body extends as far right
/// as possible. Application is juxtaposition, left-associative. `#` starts a
/// comment running to the end of the line.
pub fn parse(text: &str) -> Result<Term, ParseError> {
    parse_at(text, Pos { line: 1, column: 1 }, false)
}

/// Like [`parse`], but also accepts the reserved `_` names that readback and
/// the CPS transforms generate. Meant for reading printed results back in.
pub fn parse_generated(text: &str) -> Result<Term, ParseError> {
    parse_at(text, Pos { line: 1, column: 1 }, true)
}

/// Substitutes every binding's term for its free occurrences in `t`.
pub fn inline_env(t: &Term, env: &[(Name, Term)]) -> Term {
    let free = free_vars(t);
    env.iter()
        .filter(|(name, _)| free.contains(name))
        .fold(t.clone(), |acc, (name, def)| subst(&acc, name, def))
}

/// Parses an environment file: one `name = term` binding per line.
///
/// Each binding may refer to earlier ones, which are inlined so that a
/// self-contained file yields closed definitions. With `strict`, a free name
/// that is not an earlier binding is an error.
pub fn parse_env(text: &str, strict: bool) -> Result<Vec<(Name, Term)>, ParseError> {
    let mut env: Vec<(Name, Term)> = Vec::new();
    let mut seen = HashSet::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(eq) = content.find('=') else {
            return Err(Pos { line, column: 1 }.error(ParseErrorKind::MissingBinding));
        };
        let lhs = &content[..eq];
        let name_col = lhs.len() - lhs.trim_start().len() + 1;
        let name = lhs.trim();
        if name.starts_with('_') {
            return Err(Pos { line, column: name_col }.error(ParseErrorKind::ReservedName(name.into())));
        }
        if !Name::is_valid_user(name) {
            return Err(Pos { line, column: name_col }.error(ParseErrorKind::MissingBinding));
        }
        if !seen.insert(name.to_owned()) {
            return Err(Pos { line, column: name_col }.error(ParseErrorKind::DuplicateBinding(name.into())));
        }
        let rhs_start = Pos { line, column: content[..eq + 1].chars().count() + 1 };
        let term = parse_at(&content[eq + 1..], rhs_start, false)?;
        if strict {
            if let Some(unknown) = free_vars(&term).into_iter().find(|x| !seen.contains(x.as_str()) || x.as_str() == name) {
                return Err(rhs_start.error(ParseErrorKind::UnknownName(unknown.to_string())));
            }
        }
        let term = inline_env(&term, &env);
        env.push((Name::new(name), term));
    }
    Ok(env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, pretty};

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    #[test]
    fn basic_shapes() {
        assert_eq!(parse(r"\x.x").unwrap(), Term::lam("x", v("x")));
        assert_eq!(parse("λx.x").unwrap(), Term::lam("x", v("x")));
        assert_eq!(parse("f x y").unwrap(), Term::app(Term::app(v("f"), v("x")), v("y")));
        assert_eq!(
            parse(r"\f.\x.f (f x)").unwrap(),
            Term::lam("f", Term::lam("x", Term::app(v("f"), Term::app(v("f"), v("x")))))
        );
    }

    #[test]
    fn body_extends_right() {
        assert_eq!(
            parse(r"\x. x y").unwrap(),
            Term::lam("x", Term::app(v("x"), v("y")))
        );
        assert_eq!(
            parse(r"f \x. x y").unwrap(),
            Term::app(v("f"), Term::lam("x", Term::app(v("x"), v("y"))))
        );
    }

    #[test]
    fn comments_and_whitespace() {
        let t = parse("# identity\n(\\x. x) # applied\n  y\n").unwrap();
        assert_eq!(t, Term::app(Term::lam("x", v("x")), v("y")));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse(r"\x. (x").unwrap_err();
        assert_eq!((e.line, e.column), (1, 7));
        assert!(matches!(e.kind, ParseErrorKind::Unexpected { .. }));

        let e = parse("x\n  _y").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert_eq!(e.kind, ParseErrorKind::ReservedName("_y".into()));

        assert!(parse("").is_err());
        assert!(parse(r"\.x").is_err());
        assert!(parse("x )").is_err());
        assert!(matches!(parse("x + y").unwrap_err().kind, ParseErrorKind::UnexpectedChar('+')));
    }

    #[test]
    fn env_inlining() {
        let env = parse_env("id = \\x.x\n", false).unwrap();
        assert_eq!(env, vec![(Name::new("id"), Term::lam("x", v("x")))]);

        let env = parse_env("two = \\f.\\x.f (f x)\n# doubled\nfour = two two\n", true).unwrap();
        let two = parse(r"\f.\x.f (f x)").unwrap();
        assert_eq!(env[1].0, Name::new("four"));
        assert!(alpha_eq(&env[1].1, &Term::app(two.clone(), two)));
    }

    #[test]
    fn env_errors() {
        let e = parse_env("a = x\na = y\n", false).unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(e.kind, ParseErrorKind::DuplicateBinding("a".into()));

        assert!(parse_env("a = b\n", false).is_ok());
        let e = parse_env("a = b\n", true).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownName("b".into()));
        // a binding cannot refer to itself
        assert!(parse_env("a = a\n", true).is_err());

        assert_eq!(parse_env("just a term\n", false).unwrap_err().kind, ParseErrorKind::MissingBinding);
        let e = parse_env("x = (y\n", false).unwrap_err();
        assert_eq!((e.line, e.column), (1, 7));
    }

    #[test]
    fn printed_form_reparses() {
        for src in [r"\x.x", "f x y", r"(\x.x) y", r"x (\y.y) z", r"\a.\b. a (b a) (\c. c)"] {
            let t = parse(src).unwrap();
            assert_eq!(parse(&pretty(&t)).unwrap(), t, "{src}");
        }
    }

    #[test]
    fn generated_names_only_through_parse_generated() {
        assert!(parse(r"\_0. _0").is_err());
        assert_eq!(parse_generated(r"\_k0. _k0 x").unwrap(), Term::lam("_k0", Term::app(v("_k0"), v("x"))));
    }
}
