//! Named first-order syntax, its nameless form, and the grammar predicates
//! for normal, neutral and strict continuation-passing terms.

mod parse;
mod pretty;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::grow;

pub use parse::{inline_env, parse, parse_env, parse_generated, ParseError, ParseErrorKind};
pub use pretty::{pretty, pretty_with, Style};

/// A variable name.
///
/// User-facing names match `[a-zA-Z][a-zA-Z0-9_']*`. Names starting with `_`
/// are reserved for machine-generated binders and never come out of the
/// parser.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

impl Name {
    /// Wraps a string without validating it.
    pub fn new(text: impl AsRef<str>) -> Self {
        Name(Arc::from(text.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True for names in the reserved `_` namespace.
    pub fn is_reserved(&self) -> bool {
        self.0.starts_with('_')
    }

    /// Checks the user identifier alphabet.
    pub fn is_valid_user(text: &str) -> bool {
        let mut chars = text.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => return false,
        }
        chars.all(is_ident_continue)
    }
}

pub(crate) fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

/// A lambda term with named variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    Lam(Name, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
}

impl Term {
    pub fn var(name: impl Into<Name>) -> Term {
        Term::Var(name.into())
    }

    pub fn lam(binder: impl Into<Name>, body: Term) -> Term {
        Term::Lam(binder.into(), Arc::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Arc::new(fun), Arc::new(arg))
    }

    /// Left-nested application of `head` to every argument in turn.
    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    /// Number of nodes (variables, abstractions and applications).
    pub fn size(&self) -> usize {
        let mut count = 0;
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            count += 1;
            match t {
                Term::Var(_) => {}
                Term::Lam(_, body) => stack.push(body),
                Term::App(f, a) => {
                    stack.push(f);
                    stack.push(a);
                }
            }
        }
        count
    }

    /// Every name occurring in the term, bound or free, binders included.
    pub fn names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                Term::Var(x) => {
                    out.insert(x.clone());
                }
                Term::Lam(x, body) => {
                    out.insert(x.clone());
                    stack.push(body);
                }
                Term::App(f, a) => {
                    stack.push(f);
                    stack.push(a);
                }
            }
        }
        out
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(self))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", pretty(self))
    }
}

/// Nameless form of [`Term`]: bound variables are de Bruijn indices, free
/// variables keep their names.
#[derive(Clone, Debug, Eq)]
pub enum DbTerm {
    BVar(usize),
    FVar(Name),
    DLam(Box<DbTerm>),
    DApp(Box<DbTerm>, Box<DbTerm>),
}

// Iterative so that very deep normal forms compare without recursion.
impl PartialEq for DbTerm {
    fn eq(&self, other: &Self) -> bool {
        let mut stack = vec![(self, other)];
        while let Some(pair) = stack.pop() {
            match pair {
                (DbTerm::BVar(i), DbTerm::BVar(j)) if i == j => {}
                (DbTerm::FVar(x), DbTerm::FVar(y)) if x == y => {}
                (DbTerm::DLam(a), DbTerm::DLam(b)) => stack.push((a, b)),
                (DbTerm::DApp(f, a), DbTerm::DApp(g, b)) => {
                    stack.push((f, g));
                    stack.push((a, b));
                }
                _ => return false,
            }
        }
        true
    }
}

pub fn free_vars(t: &Term) -> BTreeSet<Name> {
    fn go(t: &Term, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        grow(|| match t {
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Lam(x, body) => {
                bound.push(x.clone());
                go(body, bound, out);
                bound.pop();
            }
            Term::App(f, a) => {
                go(f, bound, out);
                go(a, bound, out);
            }
        })
    }
    let mut out = BTreeSet::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

pub fn to_debruijn(t: &Term) -> DbTerm {
    fn go(t: &Term, scope: &mut Vec<Name>) -> DbTerm {
        grow(|| match t {
            Term::Var(x) => match scope.iter().rev().position(|y| y == x) {
                Some(index) => DbTerm::BVar(index),
                None => DbTerm::FVar(x.clone()),
            },
            Term::Lam(x, body) => {
                scope.push(x.clone());
                let body = go(body, scope);
                scope.pop();
                DbTerm::DLam(Box::new(body))
            }
            Term::App(f, a) => DbTerm::DApp(Box::new(go(f, scope)), Box::new(go(a, scope))),
        })
    }
    go(t, &mut Vec::new())
}

/// Equality up to renaming of bound variables. Free names are significant.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    to_debruijn(a) == to_debruijn(b)
}

/// Membership in the normal-form grammar `t_n ::= t_a | \x.t_n`.
pub fn is_normal(t: &Term) -> bool {
    let mut t = t;
    while let Term::Lam(_, body) = t {
        t = body;
    }
    is_neutral(t)
}

/// Membership in the neutral grammar `t_a ::= x | t_a t_n`.
pub fn is_neutral(t: &Term) -> bool {
    grow(|| {
        let mut head = t;
        loop {
            match head {
                Term::Var(_) => return true,
                Term::Lam(..) => return false,
                Term::App(f, a) => {
                    if !is_normal(a) {
                        return false;
                    }
                    head = f;
                }
            }
        }
    })
}

/// One move from a node to a child.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathStep {
    LamBody,
    AppFun,
    AppArg,
}

impl fmt::Display for PathStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PathStep::LamBody => "body",
            PathStep::AppFun => "fun",
            PathStep::AppArg => "arg",
        })
    }
}

/// Membership in the strict CPS grammar `t_c ::= v | v v`, `v ::= x | \x.t_c`.
pub fn is_strict_cps(t: &Term) -> bool {
    strict_cps_violation(t).is_none()
}

/// Path from the root to the first node breaking the strict CPS grammar:
/// an application sitting where a value (variable or abstraction) must be.
pub fn strict_cps_violation(t: &Term) -> Option<Vec<PathStep>> {
    fn serious(t: &Term, path: &mut Vec<PathStep>) -> bool {
        grow(|| match t {
            Term::App(f, a) => {
                path.push(PathStep::AppFun);
                if !value(f, path) {
                    return false;
                }
                path.pop();
                path.push(PathStep::AppArg);
                if !value(a, path) {
                    return false;
                }
                path.pop();
                true
            }
            _ => value(t, path),
        })
    }
    fn value(t: &Term, path: &mut Vec<PathStep>) -> bool {
        match t {
            Term::Var(_) => true,
            Term::Lam(_, body) => {
                path.push(PathStep::LamBody);
                let ok = serious(body, path);
                if ok {
                    path.pop();
                }
                ok
            }
            Term::App(..) => false,
        }
    }
    let mut path = Vec::new();
    if serious(t, &mut path) {
        None
    } else {
        Some(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn free_variables() {
        assert!(free_vars(&p(r"\x.x")).is_empty());
        assert_eq!(free_vars(&p(r"\x.x y")), BTreeSet::from([Name::new("y")]));
        assert_eq!(free_vars(&p(r"x (\x.x)")), BTreeSet::from([Name::new("x")]));
    }

    #[test]
    fn de_bruijn_conversion() {
        use DbTerm::*;
        assert_eq!(to_debruijn(&p(r"\x.x")), DLam(Box::new(BVar(0))));
        assert_eq!(to_debruijn(&p(r"\x.\y.x")), DLam(Box::new(DLam(Box::new(BVar(1))))));
        assert_eq!(to_debruijn(&p(r"\x.y")), DLam(Box::new(FVar(Name::new("y")))));
        // shadowing picks the innermost binder
        assert_eq!(to_debruijn(&p(r"\x.\x.x")), DLam(Box::new(DLam(Box::new(BVar(0))))));
    }

    #[test]
    fn alpha_equivalence() {
        assert!(alpha_eq(&p(r"\x.x"), &p(r"\y.y")));
        assert!(!alpha_eq(&p(r"\x.\y.x"), &p(r"\x.\y.y")));
        assert!(!alpha_eq(&p("x"), &p("y")));
        assert!(!alpha_eq(&p(r"\x.y"), &p(r"\y.y")));
    }

    #[test]
    fn normal_and_neutral() {
        assert!(is_normal(&p(r"\x.x y")));
        assert!(!is_normal(&p(r"(\x.x) y")));
        assert!(!is_normal(&p(r"\x.x ((\y.y) z)")));

        assert!(is_neutral(&p("x")));
        assert!(is_neutral(&p(r"x (\y.y)")));
        assert!(!is_neutral(&p(r"\x.x")));
        assert!(!is_neutral(&p(r"x ((\y.y) z)")));
    }

    #[test]
    fn strict_cps() {
        assert!(is_strict_cps(&p(r"\k. k (\x.x)")));
        assert!(is_strict_cps(&p("x y")));
        assert!(!is_strict_cps(&p("(x y) z")));
        assert_eq!(strict_cps_violation(&p("(x y) z")), Some(vec![PathStep::AppFun]));
        assert_eq!(
            strict_cps_violation(&p(r"\k. k (\x. x (y z))")),
            Some(vec![
                PathStep::LamBody,
                PathStep::AppArg,
                PathStep::LamBody,
                PathStep::AppArg
            ])
        );
    }

    #[test]
    fn names_and_size() {
        let t = p(r"\f.\x.f (f x)");
        assert_eq!(t.size(), 7);
        assert_eq!(t.names(), BTreeSet::from([Name::new("f"), Name::new("x")]));
    }

    #[test]
    fn user_identifier_alphabet() {
        assert!(Name::is_valid_user("x"));
        assert!(Name::is_valid_user("plus'"));
        assert!(Name::is_valid_user("n_10"));
        assert!(!Name::is_valid_user("_0"));
        assert!(!Name::is_valid_user("1x"));
        assert!(!Name::is_valid_user(""));
    }
}
