//! Higher-order representation of terms.
//!
//! [`quote`] maps a term to its representation, with each abstraction body
//! held as a host closure from representations to representations. No
//! reduction happens while quoting. [`readback`] goes the other way,
//! instantiating every closure with a fresh variable numbered by de Bruijn
//! level; on anything `quote` produced it returns the original term up to
//! renaming of bound variables.

use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::grow;
use crate::normalizers::{norm_cbn, NotCps};
use crate::oracle::{Budget, Diverged, NormOutcome};
use crate::syntax::{Name, Term};

/// Failure while computing or reading back a representation.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NormError {
    #[error(transparent)]
    Diverged(#[from] Diverged),
    #[error(transparent)]
    NotCps(#[from] NotCps),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VarId {
    Free(Name),
    /// A variable introduced by readback, identified by its de Bruijn level.
    Bound(usize),
}

/// Body of an abstraction. Normalizers wrap bodies in further work, which may
/// run out of fuel, hence the `Result`.
pub type Body = dyn Fn(Rep) -> Result<Rep, NormError>;

/// An abstraction body.
///
/// A closure built by a normalizer remembers which one, so that normalizing
/// it again under the same normalizer can return it as is instead of stacking
/// another identical layer on top. This matters for call-by-value, which
/// would otherwise re-wrap the same argument once per beta step.
#[derive(Clone)]
pub struct Closure {
    body: Rc<Body>,
    normal_under: Option<Normalizer>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Normalizer {
    Cbn,
    Cbv,
    Cps,
    Residual,
}

impl Closure {
    pub fn new(body: impl Fn(Rep) -> Result<Rep, NormError> + 'static) -> Self {
        Closure { body: Rc::new(body), normal_under: None }
    }

    pub(crate) fn normalizing(
        normalizer: Normalizer,
        body: impl Fn(Rep) -> Result<Rep, NormError> + 'static,
    ) -> Self {
        Closure { body: Rc::new(body), normal_under: Some(normalizer) }
    }

    pub(crate) fn is_normal_under(&self, normalizer: Normalizer) -> bool {
        self.normal_under == Some(normalizer)
    }

    pub fn apply(&self, arg: Rep) -> Result<Rep, NormError> {
        grow(|| (self.body)(arg))
    }
}

#[derive(Clone)]
pub enum Rep {
    Var(VarId),
    Lam(Closure),
    App(Rc<Rep>, Rc<Rep>),
}

impl Rep {
    pub fn free(name: impl Into<Name>) -> Rep {
        Rep::Var(VarId::Free(name.into()))
    }

    pub fn lam(body: impl Fn(Rep) -> Result<Rep, NormError> + 'static) -> Rep {
        Rep::Lam(Closure::new(body))
    }

    pub fn app(fun: Rep, arg: Rep) -> Rep {
        Rep::App(Rc::new(fun), Rc::new(arg))
    }
}

impl fmt::Debug for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rep::Var(VarId::Free(x)) => write!(f, "Var({x})"),
            Rep::Var(VarId::Bound(l)) => write!(f, "Var(#{l})"),
            Rep::Lam(_) => f.write_str("Lam(<closure>)"),
            Rep::App(g, a) => f.debug_tuple("App").field(g).field(a).finish(),
        }
    }
}

/// Persistent environment binding names to representations.
///
/// Closures capture it by cheap clone.
#[derive(Clone, Default)]
pub struct Env(Option<Rc<EnvNode>>);

struct EnvNode {
    name: Name,
    value: Rep,
    rest: Env,
}

impl Env {
    pub fn new() -> Self {
        Env(None)
    }

    pub fn extend(&self, name: Name, value: Rep) -> Env {
        Env(Some(Rc::new(EnvNode { name, value, rest: self.clone() })))
    }

    pub fn lookup(&self, name: &Name) -> Option<&Rep> {
        let mut cursor = self.0.as_deref();
        while let Some(node) = cursor {
            if node.name == *name {
                return Some(&node.value);
            }
            cursor = node.rest.0.as_deref();
        }
        None
    }

    /// The binding for `name`, or the free variable of that name.
    pub(crate) fn resolve(&self, name: &Name) -> Rep {
        self.lookup(name).cloned().unwrap_or_else(|| Rep::free(name.clone()))
    }
}

pub fn quote(t: &Term) -> Rep {
    quote_in(t, &Env::new())
}

fn quote_in(t: &Term, env: &Env) -> Rep {
    grow(|| match t {
        Term::Var(x) => env.resolve(x),
        Term::Lam(x, body) => {
            let (x, body, env) = (x.clone(), body.clone(), env.clone());
            Rep::lam(move |r| Ok(quote_in(&body, &env.extend(x.clone(), r))))
        }
        Term::App(f, a) => Rep::app(quote_in(f, env), quote_in(a, env)),
    })
}

/// Name given to the variable bound at `level`.
pub fn level_name(level: usize) -> Name {
    Name::new(format!("_{level}"))
}

/// Converts a representation back to syntax. `depth` is the number of
/// readback binders already in scope, 0 at the top.
///
/// Errors come only from work that normalizers have suspended inside
/// abstraction bodies; reading back a quoted term always succeeds.
pub fn readback(r: &Rep, depth: usize) -> Result<Term, NormError> {
    grow(|| match r {
        Rep::Var(VarId::Free(x)) => Ok(Term::Var(x.clone())),
        Rep::Var(VarId::Bound(level)) => Ok(Term::Var(level_name(*level))),
        Rep::Lam(body) => {
            let opened = body.apply(Rep::Var(VarId::Bound(depth)))?;
            Ok(Term::lam(level_name(depth), readback(&opened, depth + 1)?))
        }
        Rep::App(f, a) => Ok(Term::app(readback(f, depth)?, readback(a, depth)?)),
    })
}

/// True if some application in `r`, under any number of binders, has an
/// abstraction in operator position.
pub fn contains_beta_redex(r: &Rep) -> Result<bool, NormError> {
    fn go(r: &Rep, depth: usize) -> Result<bool, NormError> {
        grow(|| match r {
            Rep::Var(_) => Ok(false),
            Rep::Lam(body) => go(&body.apply(Rep::Var(VarId::Bound(depth)))?, depth + 1),
            Rep::App(f, a) => {
                Ok(matches!(**f, Rep::Lam(_)) || go(f, depth)? || go(a, depth)?)
            }
        })
    }
    go(r, 0)
}

/// Packages the result of a normalization call together with the fuel it
/// consumed. `NotCps` is the only error passed through.
pub(crate) fn outcome(result: Result<Term, NormError>, fuel: &Budget) -> Result<NormOutcome, NotCps> {
    match result {
        Ok(term) => Ok(NormOutcome::Normalized { term, steps: fuel.used() }),
        Err(NormError::Diverged(d)) => Ok(NormOutcome::Diverged { steps: d.steps }),
        Err(NormError::NotCps(e)) => Err(e),
    }
}

/// Self-interpreter over the output of the call-by-name self-reducer: reads
/// back `norm_cbn(quote(t))`, which is the normal form of `t` when one exists.
pub fn e_nf(t: &Term, fuel: &Budget) -> NormOutcome {
    let result = norm_cbn(&quote(t), fuel).and_then(|r| readback(&r, 0));
    outcome(result, fuel).expect("call-by-name normalization never reports NotCps")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::church;
    use crate::syntax::{alpha_eq, parse};

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn quote_is_structural() {
        assert!(matches!(quote(&p("x")), Rep::Var(VarId::Free(x)) if x.as_str() == "x"));
        match quote(&p("x y")) {
            Rep::App(f, a) => {
                assert!(matches!(&*f, Rep::Var(VarId::Free(x)) if x.as_str() == "x"));
                assert!(matches!(&*a, Rep::Var(VarId::Free(y)) if y.as_str() == "y"));
            }
            other => panic!("expected App, got {other:?}"),
        }
        // the identity's closure hands back its argument unchanged
        let Rep::Lam(body) = quote(&p(r"\x.x")) else { panic!("expected Lam") };
        assert!(matches!(body.apply(Rep::free("z")).unwrap(), Rep::Var(VarId::Free(z)) if z.as_str() == "z"));
    }

    #[test]
    fn quote_does_not_reduce() {
        let t = p(r"(\x.x) y");
        assert!(matches!(quote(&t), Rep::App(..)));
        assert!(alpha_eq(&readback(&quote(&t), 0).unwrap(), &t));
    }

    #[test]
    fn readback_examples() {
        assert_eq!(readback(&Rep::free("x"), 0).unwrap(), p("x"));
        let id = readback(&quote(&p(r"\x.x")), 0).unwrap();
        assert_eq!(id, Term::lam("_0", Term::var("_0")));
        let t = p(r"\f.\x.f x");
        assert!(alpha_eq(&readback(&quote(&t), 0).unwrap(), &t));
        // readback below existing binders starts numbering at depth
        assert_eq!(readback(&quote(&p(r"\x.x")), 3).unwrap(), Term::lam("_3", Term::var("_3")));
    }

    #[test]
    fn shadowed_binders_resolve_innermost() {
        let t = p(r"\x.\x.x");
        assert!(alpha_eq(&readback(&quote(&t), 0).unwrap(), &t));
        let t = p(r"\x.(\x.x) x");
        assert!(alpha_eq(&readback(&quote(&t), 0).unwrap(), &t));
    }

    #[test]
    fn env_lookup() {
        let env = Env::new().extend(Name::new("x"), Rep::free("a")).extend(Name::new("x"), Rep::free("b"));
        assert!(matches!(env.lookup(&Name::new("x")), Some(Rep::Var(VarId::Free(b))) if b.as_str() == "b"));
        assert!(env.lookup(&Name::new("y")).is_none());
    }

    #[test]
    fn e_nf_examples() {
        let out = e_nf(&p(r"\x.x"), &Budget::new(10));
        assert!(alpha_eq(out.term().unwrap(), &p(r"\x.x")));
        assert_eq!(e_nf(&p(r"(\x.x) y"), &Budget::new(10)), NormOutcome::Normalized { term: p("y"), steps: 1 });
        let out = e_nf(&church::plus(2, 3), &Budget::new(10_000));
        assert_eq!(church::decode(out.term().unwrap()), Ok(5));
        assert_eq!(e_nf(&p(r"(\x.x x)(\x.x x)"), &Budget::new(100)), NormOutcome::Diverged { steps: 100 });
    }

    #[test]
    fn redex_detection() {
        assert!(contains_beta_redex(&quote(&p(r"\y.(\x.x) y"))).unwrap());
        assert!(!contains_beta_redex(&quote(&p(r"\y.y (\x.x)"))).unwrap());
    }
}
