//! Random term generators for property tests and corpora.
//!
//! Sizes count nodes and are upper bounds. Binder names come from a small
//! pool so shadowing is common, and variables refer either to one of the
//! `scope_depth` innermost distinct binders or to a name from the free pool.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::syntax::{Name, Term};

#[derive(Clone, Debug)]
pub struct TermGen {
    pub max_size: usize,
    pub free_pool: Vec<Name>,
    pub binder_pool: Vec<Name>,
    pub scope_depth: usize,
    /// Chance that a variable refers to a binder when one is in scope.
    pub bound_bias: f64,
}

impl Default for TermGen {
    fn default() -> Self {
        TermGen {
            max_size: 30,
            free_pool: ["a", "b", "c"].map(Name::new).to_vec(),
            binder_pool: ["x", "y", "z", "u", "v"].map(Name::new).to_vec(),
            scope_depth: 4,
            bound_bias: 0.8,
        }
    }
}

impl TermGen {
    pub fn with_max_size(mut self, max_size: usize) -> Self {
        self.max_size = max_size;
        self
    }

    /// Any term, of uniformly chosen size.
    pub fn term<R: Rng + ?Sized>(&self, rng: &mut R) -> Term {
        let size = rng.gen_range(1..=self.max_size.max(1));
        self.any(rng, size, &mut Vec::new())
    }

    /// A beta-normal term, built from the normal-form grammar.
    pub fn normal_term<R: Rng + ?Sized>(&self, rng: &mut R) -> Term {
        let size = rng.gen_range(1..=self.max_size.max(1));
        self.normal(rng, size, &mut Vec::new())
    }

    /// A term of the strict CPS grammar `t ::= v | v v`, `v ::= x | \x.t`.
    pub fn strict_cps_term<R: Rng + ?Sized>(&self, rng: &mut R) -> Term {
        let size = rng.gen_range(1..=self.max_size.max(1));
        self.serious(rng, size, &mut Vec::new())
    }

    fn var<R: Rng + ?Sized>(&self, rng: &mut R, scope: &[Name]) -> Term {
        let mut visible: Vec<&Name> = Vec::new();
        for name in scope.iter().rev() {
            if visible.len() == self.scope_depth {
                break;
            }
            if !visible.contains(&name) {
                visible.push(name);
            }
        }
        let use_bound = !visible.is_empty() && (self.free_pool.is_empty() || rng.gen_bool(self.bound_bias));
        let name = if use_bound {
            visible.choose(rng).copied()
        } else {
            self.free_pool.choose(rng)
        };
        Term::Var(name.cloned().unwrap_or_else(|| Name::new("a")))
    }

    fn binder<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        scope: &mut Vec<Name>,
        body: impl FnOnce(&mut R, &mut Vec<Name>) -> Term,
    ) -> Term {
        let x = self.binder_pool.choose(rng).cloned().unwrap_or_else(|| Name::new("x"));
        scope.push(x.clone());
        let body = body(rng, scope);
        scope.pop();
        Term::lam(x, body)
    }

    fn any<R: Rng + ?Sized>(&self, rng: &mut R, size: usize, scope: &mut Vec<Name>) -> Term {
        if size <= 1 {
            return self.var(rng, scope);
        }
        if size == 2 || rng.gen_bool(0.35) {
            return self.binder(rng, scope, |rng, scope| self.any(rng, size - 1, scope));
        }
        let left = rng.gen_range(1..=size - 2);
        let f = self.any(rng, left, scope);
        let a = self.any(rng, size - 1 - left, scope);
        Term::app(f, a)
    }

    fn normal<R: Rng + ?Sized>(&self, rng: &mut R, size: usize, scope: &mut Vec<Name>) -> Term {
        if size >= 2 && (size == 2 || rng.gen_bool(0.35)) {
            return self.binder(rng, scope, |rng, scope| self.normal(rng, size - 1, scope));
        }
        self.neutral(rng, size, scope)
    }

    fn neutral<R: Rng + ?Sized>(&self, rng: &mut R, size: usize, scope: &mut Vec<Name>) -> Term {
        if size < 3 {
            return self.var(rng, scope);
        }
        let left = rng.gen_range(1..=size - 2);
        let f = self.neutral(rng, left, scope);
        let a = self.normal(rng, size - 1 - left, scope);
        Term::app(f, a)
    }

    fn serious<R: Rng + ?Sized>(&self, rng: &mut R, size: usize, scope: &mut Vec<Name>) -> Term {
        if size >= 3 && rng.gen_bool(0.5) {
            let left = rng.gen_range(1..=size - 2);
            let f = self.value(rng, left, scope);
            let a = self.value(rng, size - 1 - left, scope);
            return Term::app(f, a);
        }
        self.value(rng, size, scope)
    }

    fn value<R: Rng + ?Sized>(&self, rng: &mut R, size: usize, scope: &mut Vec<Name>) -> Term {
        if size <= 1 {
            return self.var(rng, scope);
        }
        self.binder(rng, scope, |rng, scope| self.serious(rng, size - 1, scope))
    }
}
