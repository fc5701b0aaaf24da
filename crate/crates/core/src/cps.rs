//! Plotkin-style continuation-passing transforms.
//!
//! Continuation and intermediate-value binders are named `_k<n>`, `_m<n>`
//! and `_n<n>` from one counter per call, skipping any number whose name
//! already occurs in the input. Administrative redexes are left in place.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::grow;
use crate::oracle::{oracle_normalize, Budget, NormOutcome};
use crate::syntax::{Name, Term};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum CpsVariant {
    #[default]
    ByName,
    ByValue,
}

impl fmt::Display for CpsVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CpsVariant::ByName => "cbn",
            CpsVariant::ByValue => "cbv",
        })
    }
}

impl FromStr for CpsVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cbn" | "byname" | "by-name" => Ok(CpsVariant::ByName),
            "cbv" | "byvalue" | "by-value" => Ok(CpsVariant::ByValue),
            _ => Err(format!("unknown CPS variant {s:?} (expected cbn or cbv)")),
        }
    }
}

struct Gensym {
    next: usize,
    taken: BTreeSet<Name>,
}

impl Gensym {
    fn new(t: &Term) -> Self {
        Gensym { next: 0, taken: t.names() }
    }

    fn fresh(&mut self, prefix: &str) -> Name {
        loop {
            let name = Name::new(format!("_{prefix}{}", self.next));
            self.next += 1;
            if !self.taken.contains(&name) {
                return name;
            }
        }
    }
}

/// Call-by-name transform:
///
/// ```text
/// C[x]     = x
/// C[\x.M]  = \k. k (\x. C[M])
/// C[M N]   = \k. C[M] (\m. m C[N] k)
/// ```
pub fn cps_cbn(t: &Term) -> Term {
    fn go(t: &Term, g: &mut Gensym) -> Term {
        grow(|| match t {
            Term::Var(_) => t.clone(),
            Term::Lam(x, body) => {
                let k = g.fresh("k");
                let body = go(body, g);
                Term::lam(k.clone(), Term::app(Term::Var(k), Term::lam(x.clone(), body)))
            }
            Term::App(f, a) => {
                let k = g.fresh("k");
                let f = go(f, g);
                let m = g.fresh("m");
                let a = go(a, g);
                let call = Term::apps(Term::Var(m.clone()), [a, Term::Var(k.clone())]);
                Term::lam(k, Term::app(f, Term::lam(m, call)))
            }
        })
    }
    go(t, &mut Gensym::new(t))
}

/// Call-by-value transform:
///
/// ```text
/// C[x]     = \k. k x
/// C[\x.M]  = \k. k (\x. C[M])
/// C[M N]   = \k. C[M] (\m. C[N] (\n. m n k))
/// ```
pub fn cps_cbv(t: &Term) -> Term {
    fn go(t: &Term, g: &mut Gensym) -> Term {
        grow(|| match t {
            Term::Var(_) => {
                let k = g.fresh("k");
                Term::lam(k.clone(), Term::app(Term::Var(k), t.clone()))
            }
            Term::Lam(x, body) => {
                let k = g.fresh("k");
                let body = go(body, g);
                Term::lam(k.clone(), Term::app(Term::Var(k), Term::lam(x.clone(), body)))
            }
            Term::App(f, a) => {
                let k = g.fresh("k");
                let f = go(f, g);
                let m = g.fresh("m");
                let a = go(a, g);
                let n = g.fresh("n");
                let call = Term::apps(Term::Var(m.clone()), [Term::Var(n.clone()), Term::Var(k.clone())]);
                let inner = Term::lam(m, Term::app(a, Term::lam(n, call)));
                Term::lam(k, Term::app(f, inner))
            }
        })
    }
    go(t, &mut Gensym::new(t))
}

pub fn cps(t: &Term, variant: CpsVariant) -> Term {
    match variant {
        CpsVariant::ByName => cps_cbn(t),
        CpsVariant::ByValue => cps_cbv(t),
    }
}

/// The transformed term applied to the identity continuation `\a.a`.
pub fn with_identity_continuation(t: &Term, variant: CpsVariant) -> Term {
    Term::app(cps(t, variant), Term::lam("a", Term::var("a")))
}

/// Oracle normal form of the transformed term run with the identity
/// continuation.
pub fn observe_cps(t: &Term, variant: CpsVariant, fuel: &Budget) -> NormOutcome {
    oracle_normalize(&with_identity_continuation(t, variant), fuel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, free_vars, parse, pretty};

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn by_name_images() {
        assert_eq!(pretty(&cps_cbn(&p("x"))), "x");
        assert_eq!(pretty(&cps_cbn(&p(r"\x.x"))), r"\_k0. _k0 (\x. x)");
        assert_eq!(pretty(&cps_cbn(&p("x y"))), r"\_k0. x (\_m1. _m1 y _k0)");
    }

    #[test]
    fn by_value_images() {
        assert_eq!(pretty(&cps_cbv(&p("x"))), r"\_k0. _k0 x");
        assert_eq!(pretty(&cps_cbv(&p(r"\x.x"))), r"\_k0. _k0 (\x. \_k1. _k1 x)");
        assert_eq!(
            pretty(&cps_cbv(&p("x y"))),
            r"\_k0. (\_k1. _k1 x) (\_m2. (\_k3. _k3 y) (\_n4. _m2 _n4 _k0))"
        );
    }

    #[test]
    fn generated_names_skip_existing_ones() {
        // transforming an image again must not reuse its binders
        let once = cps_cbn(&p(r"\x.x"));
        let twice = cps_cbn(&once);
        assert_eq!(free_vars(&twice), free_vars(&once));
        assert!(!pretty(&twice).starts_with(r"\_k0."));
    }

    #[test]
    fn observation() {
        let fuel = || Budget::new(1_000);
        let expected = p(r"y (\a.a)");
        let redex = observe_cps(&p(r"(\x.x) y"), CpsVariant::ByName, &fuel());
        let plain = observe_cps(&p("y"), CpsVariant::ByName, &fuel());
        assert!(alpha_eq(redex.term().unwrap(), &expected));
        assert!(alpha_eq(plain.term().unwrap(), &expected));
        let id = observe_cps(&p(r"\x.x"), CpsVariant::ByName, &fuel());
        assert!(alpha_eq(id.term().unwrap(), &p(r"\x.x")));
    }

    #[test]
    fn variant_names() {
        assert_eq!("cbn".parse(), Ok(CpsVariant::ByName));
        assert_eq!("CBV".parse(), Ok(CpsVariant::ByValue));
        assert!("x".parse::<CpsVariant>().is_err());
    }
}
