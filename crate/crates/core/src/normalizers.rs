//! Evaluators and normalizers over [`Rep`].
//!
//! Each function transcribes one algorithm clause by clause:
//!
//! * [`eval_whnf`]: call-by-name evaluation that stops at abstractions.
//! * [`norm_cbn`] and [`norm_cbv`]: the evaluator with its recursive call
//!   moved under the binder, differing only in whether an argument is
//!   normalized before it is passed.
//! * [`norm_cps`] with [`app_cps`]: the normalizer specialised to the strict
//!   CPS grammar, where only one reduction order exists.
//! * [`interp`] with [`app_sem`] and [`norm_residual`]: normalization by
//!   evaluation. Applications are performed while the term is being
//!   interpreted, so only neutral applications are left for the residual
//!   normalizer.
//!
//! Every beta contraction (an abstraction body applied to an argument) costs
//! one unit of [`Budget`], whatever the algorithm.

use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use thiserror::Error;

use crate::grow;
use crate::oracle::{Budget, NormOutcome};
use crate::representation::{outcome, quote, readback, Closure, Env, NormError, Normalizer, Rep};
use crate::syntax::{strict_cps_violation, PathStep, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Whnf,
    Cbn,
    Cbv,
    Cps,
    Nbe,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [Strategy::Whnf, Strategy::Cbn, Strategy::Cbv, Strategy::Cps, Strategy::Nbe];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Whnf => "whnf",
            Strategy::Cbn => "cbn",
            Strategy::Cbv => "cbv",
            Strategy::Cps => "cps",
            Strategy::Nbe => "nbe",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown strategy {0:?} (expected whnf, cbn, cbv, cps or nbe)")]
pub struct UnknownStrategy(pub String);

impl FromStr for Strategy {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownStrategy(s.to_owned()))
    }
}

/// An application whose operator is itself an application, which the strict
/// CPS grammar rules out.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct NotCps {
    /// Moves from the root to the offending node.
    pub path: Vec<PathStep>,
}

impl fmt::Display for NotCps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("term is not in strict CPS: application in value position at ")?;
        if self.path.is_empty() {
            return f.write_str("root");
        }
        for (i, step) in self.path.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{step}")?;
        }
        Ok(())
    }
}

/// Weak-head evaluator. Abstractions are values; the argument of a stuck
/// application is still evaluated.
pub fn eval_whnf(r: &Rep, fuel: &Budget) -> Result<Rep, NormError> {
    grow(|| match r {
        Rep::Var(_) | Rep::Lam(_) => Ok(r.clone()),
        Rep::App(t0, t1) => match eval_whnf(t0, fuel)? {
            Rep::Lam(body) => {
                fuel.tick()?;
                eval_whnf(&body.apply((**t1).clone())?, fuel)
            }
            head => Ok(Rep::app(head, eval_whnf(t1, fuel)?)),
        },
    })
}

// Lam(x ↦ norm(f x)), shared by every normalizer.
fn under_binder(
    body: &Closure,
    fuel: &Budget,
    tag: Normalizer,
    norm: fn(&Rep, &Budget) -> Result<Rep, NormError>,
) -> Rep {
    if body.is_normal_under(tag) {
        return Rep::Lam(body.clone());
    }
    let (body, fuel) = (body.clone(), fuel.clone());
    Rep::Lam(Closure::normalizing(tag, move |x| norm(&body.apply(x)?, &fuel)))
}

/// Call-by-name normalizer: a redex passes its argument along untouched.
///
/// The abstraction returned for an operator already normalizes its body, so
/// applying it is the whole of the reduct's normalization.
pub fn norm_cbn(r: &Rep, fuel: &Budget) -> Result<Rep, NormError> {
    grow(|| match r {
        Rep::Var(_) => Ok(r.clone()),
        Rep::Lam(body) => Ok(under_binder(body, fuel, Normalizer::Cbn, norm_cbn)),
        Rep::App(t0, t1) => match norm_cbn(t0, fuel)? {
            Rep::Lam(body) => {
                fuel.tick()?;
                body.apply((**t1).clone())
            }
            head => Ok(Rep::app(head, norm_cbn(t1, fuel)?)),
        },
    })
}

/// Call-by-value normalizer: a redex's argument is normalized first.
/// Incomplete: it diverges on terms that discard a divergent argument.
pub fn norm_cbv(r: &Rep, fuel: &Budget) -> Result<Rep, NormError> {
    grow(|| match r {
        Rep::Var(_) => Ok(r.clone()),
        Rep::Lam(body) => Ok(under_binder(body, fuel, Normalizer::Cbv, norm_cbv)),
        Rep::App(t0, t1) => match norm_cbv(t0, fuel)? {
            Rep::Lam(body) => {
                let arg = norm_cbv(t1, fuel)?;
                fuel.tick()?;
                body.apply(arg)
            }
            head => Ok(Rep::app(head, norm_cbv(t1, fuel)?)),
        },
    })
}

/// Application of a strict-CPS operator: an abstraction consumes its argument,
/// a variable builds an applicative form. The caller pays the fuel.
pub fn app_cps(f: &Rep, a: &Rep) -> Result<Rep, NormError> {
    match f {
        Rep::Lam(body) => body.apply(a.clone()),
        Rep::Var(_) => Ok(Rep::app(f.clone(), a.clone())),
        Rep::App(..) => Err(NotCps { path: Vec::new() }.into()),
    }
}

/// Persistent path from the root of the residual term, for `NotCps` reports.
#[derive(Clone, Default)]
struct Path(Option<Rc<(PathStep, Path)>>);

impl Path {
    fn push(&self, step: PathStep) -> Path {
        Path(Some(Rc::new((step, self.clone()))))
    }

    fn to_vec(&self) -> Vec<PathStep> {
        let mut out = Vec::new();
        let mut cursor = &self.0;
        while let Some(node) = cursor {
            out.push(node.0);
            cursor = &node.1 .0;
        }
        out.reverse();
        out
    }
}

/// Normalizer for representations of strict-CPS terms.
pub fn norm_cps(r: &Rep, fuel: &Budget) -> Result<Rep, NormError> {
    norm_cps_at(r, fuel, &Path::default())
}

fn norm_cps_at(r: &Rep, fuel: &Budget, path: &Path) -> Result<Rep, NormError> {
    grow(|| match r {
        Rep::Var(_) => Ok(r.clone()),
        Rep::Lam(body) if body.is_normal_under(Normalizer::Cps) => Ok(r.clone()),
        Rep::Lam(body) => {
            let (body, fuel, path) = (body.clone(), fuel.clone(), path.push(PathStep::LamBody));
            Ok(Rep::Lam(Closure::normalizing(Normalizer::Cps, move |x| {
                norm_cps_at(&body.apply(x)?, &fuel, &path)
            })))
        }
        Rep::App(t0, t1) => {
            let variable_head = matches!(**t0, Rep::Var(_));
            if matches!(**t0, Rep::Lam(_)) {
                fuel.tick()?;
            }
            let applied = app_cps(t0, t1).map_err(|e| match e {
                NormError::NotCps(_) => NotCps { path: path.push(PathStep::AppFun).to_vec() }.into(),
                other => other,
            })?;
            match applied {
                // An applicative form `x v`: its normal form is `x` applied to
                // the normal form of `v`. Feeding it back through norm would
                // rebuild the same node forever.
                Rep::App(head, arg) if variable_head => {
                    Ok(Rep::App(head, Rc::new(norm_cps_at(&arg, fuel, &path.push(PathStep::AppArg))?)))
                }
                reduct => norm_cps_at(&reduct, fuel, path),
            }
        }
    })
}

/// Interpretation of a term as a representation, performing every
/// application it meets through [`app_sem`].
pub fn interp(t: &Term, env: &Env, fuel: &Budget) -> Result<Rep, NormError> {
    grow(|| match t {
        Term::Var(x) => Ok(env.resolve(x)),
        Term::Lam(x, body) => {
            let (x, body, env, fuel) = (x.clone(), body.clone(), env.clone(), fuel.clone());
            Ok(Rep::lam(move |r| interp(&body, &env.extend(x.clone(), r), &fuel)))
        }
        Term::App(f, a) => {
            let f = interp(f, env, fuel)?;
            let a = interp(a, env, fuel)?;
            app_sem(&f, &a, fuel)
        }
    })
}

/// Semantic application. Unlike [`app_cps`] any non-abstraction operator is
/// accepted, since direct-style terms build neutral spines `x a b ...`.
pub fn app_sem(f: &Rep, a: &Rep, fuel: &Budget) -> Result<Rep, NormError> {
    match f {
        Rep::Lam(body) => {
            fuel.tick()?;
            body.apply(a.clone())
        }
        _ => Ok(Rep::app(f.clone(), a.clone())),
    }
}

/// Residual normalizer for the output of [`interp`], where every remaining
/// application is neutral.
///
/// Both sides of an application are normalized: a direct-style spine
/// `x a b` nests its first argument inside the operator. Fuel is drawn by the
/// interpretation closures this forces, not by this function.
pub fn norm_residual(r: &Rep) -> Result<Rep, NormError> {
    grow(|| match r {
        Rep::Var(_) => Ok(r.clone()),
        Rep::Lam(body) if body.is_normal_under(Normalizer::Residual) => Ok(r.clone()),
        Rep::Lam(body) => {
            let body = body.clone();
            Ok(Rep::Lam(Closure::normalizing(Normalizer::Residual, move |x| norm_residual(&body.apply(x)?))))
        }
        Rep::App(t0, t1) => Ok(Rep::app(norm_residual(t0)?, norm_residual(t1)?)),
    })
}

/// Normalization by evaluation: read back the residual normal form of the
/// term's interpretation.
///
/// Arguments are interpreted before they are applied, so like [`norm_cbv`]
/// this diverges on terms that discard a divergent argument.
pub fn nbe(t: &Term, fuel: &Budget) -> NormOutcome {
    let result = interp(t, &Env::new(), fuel)
        .and_then(|r| norm_residual(&r))
        .and_then(|r| readback(&r, 0));
    outcome(result, fuel).expect("nbe never reports NotCps")
}

/// Runs one strategy end to end: quote, normalize, read back.
///
/// The `Cps` strategy first checks the input against the strict CPS grammar
/// and reports the first violation.
pub fn normalize(t: &Term, strategy: Strategy, fuel: &Budget) -> Result<NormOutcome, NotCps> {
    let run = |norm: fn(&Rep, &Budget) -> Result<Rep, NormError>| {
        let result = norm(&quote(t), fuel).and_then(|r| readback(&r, 0));
        outcome(result, fuel)
    };
    match strategy {
        Strategy::Whnf => run(eval_whnf),
        Strategy::Cbn => run(norm_cbn),
        Strategy::Cbv => run(norm_cbv),
        Strategy::Cps => {
            if let Some(path) = strict_cps_violation(t) {
                return Err(NotCps { path });
            }
            run(norm_cps)
        }
        Strategy::Nbe => Ok(nbe(t, fuel)),
    }
}
