use super::Term;
use crate::grow;

/// How abstractions are printed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Style {
    /// `\x. t`
    #[default]
    Ascii,
    /// `λx. t`
    Unicode,
}

/// Prints `t` in ASCII style with as few parentheses as re-parsing allows.
pub fn pretty(t: &Term) -> String {
    pretty_with(t, Style::Ascii)
}

pub fn pretty_with(t: &Term, style: Style) -> String {
    let mut out = String::new();
    Printer { out: &mut out, style }.term(t);
    out
}

struct Printer<'a> {
    out: &'a mut String,
    style: Style,
}

impl Printer<'_> {
    fn term(&mut self, t: &Term) {
        grow(|| match t {
            Term::Lam(x, body) => {
                self.out.push_str(match self.style {
                    Style::Ascii => "\\",
                    Style::Unicode => "λ",
                });
                self.out.push_str(x.as_str());
                self.out.push_str(". ");
                self.term(body);
            }
            Term::App(f, a) => {
                self.fun(f);
                self.out.push(' ');
                self.arg(a);
            }
            Term::Var(x) => self.out.push_str(x.as_str()),
        })
    }

    fn fun(&mut self, t: &Term) {
        match t {
            Term::Lam(..) => self.parens(t),
            _ => self.term(t),
        }
    }

    fn arg(&mut self, t: &Term) {
        match t {
            Term::Var(x) => self.out.push_str(x.as_str()),
            _ => self.parens(t),
        }
    }

    fn parens(&mut self, t: &Term) {
        self.out.push('(');
        self.term(t);
        self.out.push(')');
    }
}
