//! Church numerals and the arithmetic prelude used by the benchmark suite.

use thiserror::Error;

use crate::syntax::{parse_env, Name, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("not a Church numeral: {0}")]
pub struct NotNumeral(pub String);

/// Addition, multiplication and exponentiation (`exp b e` is `b` to the `e`).
pub const PRELUDE: &str = r"
plus = \m.\n.\f.\x. m f (n f x)
mul = \m.\n.\f. m (n f)
exp = \b.\e. e b
";

/// `\f.\x. f (f (... x))` with `n` applications.
pub fn encode(n: u64) -> Term {
    let mut body = Term::var("x");
    for _ in 0..n {
        body = Term::app(Term::var("f"), body);
    }
    Term::lam("f", Term::lam("x", body))
}

/// Inverse of [`encode`] up to renaming of the two binders.
pub fn decode(t: &Term) -> Result<u64, NotNumeral> {
    let not_numeral = || NotNumeral(t.to_string());
    let Term::Lam(f, inner) = t else { return Err(not_numeral()) };
    let Term::Lam(x, body) = &**inner else { return Err(not_numeral()) };
    if f == x {
        return Err(not_numeral());
    }
    let mut n = 0;
    let mut cursor = &**body;
    loop {
        match cursor {
            Term::Var(y) if y == x => return Ok(n),
            Term::App(g, arg) if matches!(&**g, Term::Var(y) if y == f) => {
                n += 1;
                cursor = arg;
            }
            _ => return Err(not_numeral()),
        }
    }
}

/// The closed arithmetic definitions from [`PRELUDE`].
pub fn prelude() -> Vec<(Name, Term)> {
    parse_env(PRELUDE, true).expect("prelude parses")
}

fn definition(name: &str) -> Term {
    prelude()
        .into_iter()
        .find(|(n, _)| n.as_str() == name)
        .map(|(_, t)| t)
        .expect("defined in prelude")
}

pub fn plus(m: u64, n: u64) -> Term {
    Term::apps(definition("plus"), [encode(m), encode(n)])
}

pub fn mul(m: u64, n: u64) -> Term {
    Term::apps(definition("mul"), [encode(m), encode(n)])
}

pub fn exp(base: u64, exponent: u64) -> Term {
    Term::apps(definition("exp"), [encode(base), encode(exponent)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, parse};

    #[test]
    fn encode_small() {
        assert!(alpha_eq(&encode(0), &parse(r"\f.\x.x").unwrap()));
        assert!(alpha_eq(&encode(2), &parse(r"\s.\z.s (s z)").unwrap()));
    }

    #[test]
    fn decode_inverts_encode() {
        for n in [0, 1, 7, 100] {
            assert_eq!(decode(&encode(n)), Ok(n));
        }
        assert_eq!(decode(&parse(r"\a.\b.a (a b)").unwrap()), Ok(2));
    }

    #[test]
    fn decode_rejects() {
        for src in [r"\x.x", r"\f.\f.f", r"\f.\x.f", r"\f.\x.x f", r"\f.\x.f (x x)", "y"] {
            assert!(decode(&parse(src).unwrap()).is_err(), "{src}");
        }
    }

    #[test]
    fn prelude_is_closed() {
        for (name, t) in prelude() {
            assert!(crate::syntax::free_vars(&t).is_empty(), "{name}");
        }
    }
}
