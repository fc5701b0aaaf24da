//! Reference semantics: capture-avoiding substitution and leftmost-outermost
//! reduction on named terms.
//!
//! Nothing here shares code with the higher-order normalizers. Normal order is
//! complete, so whenever a term has a normal form with enough fuel this
//! module finds it.

use std::cell::Cell;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;
use std::sync::Arc;

use thiserror::Error;

use crate::grow;
use crate::syntax::{Name, Term};

/// Fuel for beta contractions.
///
/// Clones share one counter, so the closures built during a normalization
/// call all draw from the budget of that call.
#[derive(Clone)]
pub struct Budget(Rc<Fuel>);

struct Fuel {
    limit: u64,
    used: Cell<u64>,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget(Rc::new(Fuel { limit, used: Cell::new(0) }))
    }

    pub fn limit(&self) -> u64 {
        self.0.limit
    }

    pub fn used(&self) -> u64 {
        self.0.used.get()
    }

    pub fn is_exhausted(&self) -> bool {
        self.used() >= self.limit()
    }

    /// Pays for one beta contraction.
    pub fn tick(&self) -> Result<(), Diverged> {
        let used = self.used();
        if used >= self.limit() {
            return Err(Diverged { steps: used });
        }
        self.0.used.set(used + 1);
        Ok(())
    }
}

impl fmt::Debug for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Budget({}/{})", self.used(), self.limit())
    }
}

/// Fuel ran out before a normal form was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("no normal form within {steps} beta steps")]
pub struct Diverged {
    pub steps: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormOutcome {
    Normalized { term: Term, steps: u64 },
    Diverged { steps: u64 },
}

impl NormOutcome {
    pub fn term(&self) -> Option<&Term> {
        match self {
            NormOutcome::Normalized { term, .. } => Some(term),
            NormOutcome::Diverged { .. } => None,
        }
    }

    pub fn into_term(self) -> Option<Term> {
        match self {
            NormOutcome::Normalized { term, .. } => Some(term),
            NormOutcome::Diverged { .. } => None,
        }
    }

    pub fn steps(&self) -> u64 {
        match *self {
            NormOutcome::Normalized { steps, .. } | NormOutcome::Diverged { steps } => steps,
        }
    }

    pub fn is_normalized(&self) -> bool {
        matches!(self, NormOutcome::Normalized { .. })
    }
}

/// Supplies `_0`, `_1`, ... skipping anything in the avoid set.
#[derive(Debug, Default)]
pub(crate) struct Fresh {
    next: usize,
}

impl Fresh {
    pub(crate) fn name(&mut self, avoid: &BTreeSet<Name>) -> Name {
        loop {
            let candidate = Name::new(format!("_{}", self.next));
            self.next += 1;
            if !avoid.contains(&candidate) {
                return candidate;
            }
        }
    }
}

/// Per-call tables keyed by node identity.
///
/// After a few beta steps a term shares most of its subtrees, and walking it
/// as a tree becomes exponential in the number of steps. Entries keep their
/// node alive so an address is never reused while it is a key.
#[derive(Default)]
struct Memo {
    free: HashMap<*const Term, (Arc<Term>, Rc<BTreeSet<Name>>)>,
    normal: HashMap<*const Term, Arc<Term>>,
}

impl Memo {
    const MAX_ENTRIES: usize = 1 << 20;

    fn trim(&mut self) {
        if self.free.len() + self.normal.len() > Self::MAX_ENTRIES {
            *self = Memo::default();
        }
    }

    fn free_vars(&mut self, t: &Arc<Term>) -> Rc<BTreeSet<Name>> {
        if let Some((_, fv)) = self.free.get(&Arc::as_ptr(t)) {
            return fv.clone();
        }
        let fv = self.free_vars_of(t);
        self.free.insert(Arc::as_ptr(t), (t.clone(), fv.clone()));
        fv
    }

    fn free_vars_of(&mut self, t: &Term) -> Rc<BTreeSet<Name>> {
        grow(|| match t {
            Term::Var(x) => Rc::new(BTreeSet::from([x.clone()])),
            Term::Lam(x, body) => {
                let inner = self.free_vars(body);
                if !inner.contains(x) {
                    return inner;
                }
                let mut fv = (*inner).clone();
                fv.remove(x);
                Rc::new(fv)
            }
            Term::App(f, a) => {
                let (f, a) = (self.free_vars(f), self.free_vars(a));
                if a.is_subset(&f) {
                    f
                } else if f.is_subset(&a) {
                    a
                } else {
                    Rc::new(f.union(&a).cloned().collect())
                }
            }
        })
    }
}

/// Replaces the free occurrences of `x` in `t` by `s`, renaming binders that
/// would capture a free variable of `s`.
pub fn subst(t: &Term, x: &Name, s: &Term) -> Term {
    subst_in(t, x, s, &mut Fresh::default(), &mut Memo::default())
}

fn subst_in(t: &Term, x: &Name, s: &Term, fresh: &mut Fresh, memo: &mut Memo) -> Term {
    let fv_s = memo.free_vars_of(s);
    let mut pass = Subst { x, s, fv_s, fresh, memo, done: HashMap::new() };
    pass.go(t).unwrap_or_else(|| t.clone())
}

struct Subst<'a> {
    x: &'a Name,
    s: &'a Term,
    fv_s: Rc<BTreeSet<Name>>,
    fresh: &'a mut Fresh,
    memo: &'a mut Memo,
    done: HashMap<*const Term, (Arc<Term>, Option<Term>)>,
}

impl Subst<'_> {
    // None means unchanged, so untouched subtrees stay shared.
    fn go(&mut self, t: &Term) -> Option<Term> {
        grow(|| match t {
            Term::Var(y) => (y == self.x).then(|| self.s.clone()),
            Term::App(f, a) => {
                let f2 = self.child(f);
                let a2 = self.child(a);
                if f2.is_none() && a2.is_none() {
                    return None;
                }
                Some(Term::App(
                    f2.map(Into::into).unwrap_or_else(|| f.clone()),
                    a2.map(Into::into).unwrap_or_else(|| a.clone()),
                ))
            }
            Term::Lam(y, _) if y == self.x => None,
            Term::Lam(y, body) if self.fv_s.contains(y) => {
                let fv_body = self.memo.free_vars(body);
                if !fv_body.contains(self.x) {
                    return None;
                }
                let mut avoid = (*fv_body).clone();
                avoid.extend(self.fv_s.iter().cloned());
                avoid.insert(self.x.clone());
                let z = self.fresh.name(&avoid);
                let renamed = subst_in(body, y, &Term::Var(z.clone()), self.fresh, self.memo);
                let body = self.go(&renamed).unwrap_or(renamed);
                Some(Term::lam(z, body))
            }
            Term::Lam(y, body) => self.child(body).map(|b| Term::lam(y.clone(), b)),
        })
    }

    fn child(&mut self, t: &Arc<Term>) -> Option<Term> {
        if !self.memo.free_vars(t).contains(self.x) {
            return None;
        }
        if let Some((_, result)) = self.done.get(&Arc::as_ptr(t)) {
            return result.clone();
        }
        let result = self.go(t);
        self.done.insert(Arc::as_ptr(t), (t.clone(), result.clone()));
        result
    }
}

/// Contracts the leftmost-outermost redex. `None` when `t` is normal.
pub fn beta_step_normal_order(t: &Term) -> Option<Term> {
    step_normal_order(t, &mut Fresh::default(), &mut Memo::default())
}

fn step_normal_order(t: &Term, fresh: &mut Fresh, memo: &mut Memo) -> Option<Term> {
    fn child(t: &Arc<Term>, fresh: &mut Fresh, memo: &mut Memo) -> Option<Arc<Term>> {
        if memo.normal.contains_key(&Arc::as_ptr(t)) {
            return None;
        }
        let next = step_normal_order(t, fresh, memo);
        if next.is_none() {
            memo.normal.insert(Arc::as_ptr(t), t.clone());
        }
        next.map(Arc::new)
    }
    grow(|| match t {
        Term::Var(_) => None,
        Term::Lam(x, body) => child(body, fresh, memo).map(|b| Term::Lam(x.clone(), b)),
        Term::App(f, a) => {
            if let Term::Lam(x, body) = &**f {
                return Some(subst_in(body, x, a, fresh, memo));
            }
            if let Some(f2) = child(f, fresh, memo) {
                return Some(Term::App(f2, a.clone()));
            }
            child(a, fresh, memo).map(|a2| Term::App(f.clone(), a2))
        }
    })
}

/// Reduction state for the oracle: the head of the current spine and its
/// arguments, the first argument on top.
///
/// Contracting the leftmost-outermost redex one step at a time copies the
/// path down to it on every step, which is quadratic once a spine grows with
/// each contraction, as `(\y. y y) (\z. z (z z))` does. Keeping the spine
/// unwound contracts the same redexes in the same order.
struct Machine<'a> {
    fuel: &'a Budget,
    fresh: Fresh,
    memo: Memo,
}

impl Machine<'_> {
    fn head_reduce(&mut self, t: &Term) -> Result<(Term, Vec<Arc<Term>>), Diverged> {
        let mut head = t.clone();
        let mut args: Vec<Arc<Term>> = Vec::new();
        loop {
            head = match &head {
                Term::App(f, a) => {
                    args.push(a.clone());
                    (**f).clone()
                }
                Term::Lam(x, body) if !args.is_empty() => {
                    self.fuel.tick()?;
                    let a = args.pop().expect("checked non-empty");
                    let next = subst_in(body, x, &a, &mut self.fresh, &mut self.memo);
                    self.memo.trim();
                    next
                }
                _ => return Ok((head, args)),
            };
        }
    }

    fn normalize(&mut self, t: &Term) -> Result<Term, Diverged> {
        grow(|| {
            let (head, mut args) = self.head_reduce(t)?;
            let mut result = match head {
                Term::Lam(x, body) => Term::lam(x, self.normalize(&body)?),
                head => head,
            };
            while let Some(a) = args.pop() {
                result = Term::app(result, self.normalize(&a)?);
            }
            Ok(result)
        })
    }
}

fn run(t: &Term, fuel: &Budget, drive: fn(&mut Machine, &Term) -> Result<Term, Diverged>) -> NormOutcome {
    let mut machine = Machine { fuel, fresh: Fresh::default(), memo: Memo::default() };
    match drive(&mut machine, t) {
        Ok(term) => NormOutcome::Normalized { term, steps: fuel.used() },
        Err(Diverged { steps }) => NormOutcome::Diverged { steps },
    }
}

/// Normal-order reduction to beta-normal form: the same contractions as
/// iterating [`beta_step_normal_order`], one beta step of fuel each.
pub fn oracle_normalize(t: &Term, fuel: &Budget) -> NormOutcome {
    run(t, fuel, |machine, t| machine.normalize(t))
}

/// Head reduction only: stops at an abstraction or a variable-headed spine,
/// leaving arguments and abstraction bodies untouched.
pub fn oracle_whnf(t: &Term, fuel: &Budget) -> NormOutcome {
    run(t, fuel, |machine, t| {
        let (head, mut args) = machine.head_reduce(t)?;
        let mut result = head;
        while let Some(a) = args.pop() {
            result = Term::App(result.into(), a);
        }
        Ok(result)
    })
}
