//! Effective descent for finite filtered preorders and lax comma categories.
//!
//! The crate decides, for a morphism `p : E → B` in one of five concrete
//! categories over a finite base preorder `X`, whether `p` is an effective
//! descent morphism, using chain-lifting characterizations; it constructs
//! the explicit two-element counterexamples behind the negative answers;
//! and it cross-checks every verdict against a brute-force monadicity
//! oracle that enumerates descent data up to a size bound.
//!
//! Module map:
//!
//! * [`order`]   — finite preorders, monotone maps, lattice predicates;
//! * [`cat`]     — the five categories, chosen pullbacks/coequalizers, the
//!                 filtration functor `F1` and its partial inverse;
//! * [`check`]   — condition checkers and the theorem dispatcher;
//! * [`witness`] — counterexample constructions from the proofs;
//! * [`oracle`]  — descent monad, algebra enumeration, bounded verdicts;
//! * [`enumerate`] — exhaustive small-structure enumeration up to
//!                 isomorphism (shared by the oracle and the test suites);
//! * [`universal`] — brute-force universal-property verification;
//! * [`fixtures`] — canonical micro instances.

pub mod cat;
pub mod check;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod oracle;
pub mod order;
pub mod universal;
pub mod verdict;
pub mod witness;

pub use error::{Error, Result};
