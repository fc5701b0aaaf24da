//! Normalizers for the untyped lambda calculus.
//!
//! Every algorithm here runs over [`Rep`](representation::Rep), a higher-order
//! representation in which abstraction bodies are host closures. The chain goes
//! from a weak-head evaluator, through call-by-name and call-by-value
//! normalizers and a normalizer specialised to continuation-passing terms, to
//! normalization by evaluation. A deliberately naive substitution-based
//! normal-order reducer in [`oracle`] serves as ground truth for all of them.
//!
//! ```
//! use lamnorm::{normalize, parse, Budget, Strategy};
//!
//! let term = parse(r"(\f.\x.f (f x)) (\f.\x.f (f x))").unwrap();
//! let outcome = normalize(&term, Strategy::Nbe, &Budget::new(1_000)).unwrap();
//! assert_eq!(lamnorm::church::decode(outcome.term().unwrap()), Ok(4));
//! ```

pub mod church;
pub mod cps;
pub mod gen;
pub mod normalizers;
pub mod oracle;
pub mod representation;
pub mod syntax;

#[cfg(feature = "cli")]
pub mod cli;

pub use cps::CpsVariant;
pub use normalizers::{normalize, NotCps, Strategy};
pub use oracle::{oracle_normalize, oracle_whnf, Budget, Diverged, NormOutcome};
pub use representation::{quote, readback, Rep, VarId};
pub use syntax::{alpha_eq, parse, parse_env, parse_generated, pretty, Name, ParseError, Term};

/// Runs `f`, growing the stack first if less than the red zone remains.
///
/// Every recursive walk in the crate goes through here: normal forms of
/// Church arithmetic nest tens of thousands of applications deep, and a
/// diverging normalizer recurses once per beta step until its fuel runs out.
#[inline]
pub(crate) fn grow<R>(f: impl FnOnce() -> R) -> R {
    stacker::maybe_grow(256 * 1024, 8 * 1024 * 1024, f)
}
