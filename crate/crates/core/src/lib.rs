//! Kolmogorov complexities of integer representations.
//!
//! A strongly universal machine `U` over binary words, evaluators for the
//! effective Church, cardinal and ordinal representations, program-to-program
//! reductions between them, and a budgeted enumeration harness.

pub mod church;
pub mod combinators;
pub mod config;
pub mod dovetail;
pub mod estimator;
pub mod evaluators;
pub mod fixtures;
pub mod numerals;
pub mod obs;
pub mod oracle;
pub mod order;
pub mod overshoot;
pub mod report;
pub mod universe;
pub mod vm;
pub mod word;

/// Unbounded natural number.
pub type Nat = num_bigint::BigUint;

pub fn nat(n: u64) -> Nat {
    Nat::from(n)
}

pub use combinators::{universal_decode, Combinator};
pub use oracle::{Certainty, Oracle, OracleSource, Query, Registry};
pub use universe::{EvalError, Universe};
pub use word::{couple_decode, couple_encode, nat_to_word, word_to_nat, Pair, Word, WordError};
