#![allow(dead_code)]

use lamnorm::gen::TermGen;
use lamnorm::Term;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

const NAMES: [&str; 6] = ["x", "y", "z", "a", "b", "c"];

/// Arbitrary terms over a small alphabet, so that both shadowing and free
/// variables are common. Shrinks structurally.
pub fn term() -> impl Strategy<Value = Term> {
    let leaf = prop::sample::select(&NAMES[..]).prop_map(Term::var);
    leaf.prop_recursive(6, 30, 2, |inner| {
        prop_oneof![
            (prop::sample::select(&NAMES[..3]), inner.clone()).prop_map(|(x, body)| Term::lam(x, body)),
            (inner.clone(), inner).prop_map(|(f, a)| Term::app(f, a)),
        ]
    })
}

fn seeded(pick: fn(&TermGen, &mut StdRng) -> Term) -> impl Strategy<Value = Term> {
    any::<u64>().prop_map(move |seed| pick(&TermGen::default(), &mut StdRng::seed_from_u64(seed)))
}

pub fn normal_term() -> impl Strategy<Value = Term> {
    seeded(|g, rng| g.normal_term(rng))
}

pub fn strict_cps_term() -> impl Strategy<Value = Term> {
    seeded(|g, rng| g.strict_cps_term(rng))
}

/// Renames every binder to a fresh `v<n>` name; the result is alpha-equivalent.
pub fn rename_binders(t: &Term) -> Term {
    fn go(t: &Term, scope: &mut Vec<(String, String)>, next: &mut usize) -> Term {
        match t {
            Term::Var(x) => match scope.iter().rev().find(|(from, _)| from == x.as_str()) {
                Some((_, to)) => Term::var(to.as_str()),
                None => t.clone(),
            },
            Term::Lam(x, body) => {
                let fresh = format!("v{next}");
                *next += 1;
                scope.push((x.as_str().to_owned(), fresh.clone()));
                let body = go(body, scope, next);
                scope.pop();
                Term::lam(fresh.as_str(), body)
            }
            Term::App(f, a) => Term::app(go(f, scope, next), go(a, scope, next)),
        }
    }
    go(t, &mut Vec::new(), &mut 0)
}
