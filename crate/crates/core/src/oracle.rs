//! Reference expansion by literal subtract-and-invert on surd values.
//!
//! Every step takes the floor of the current value, subtracts it and inverts
//! the remainder through its conjugate, building a fresh normalised surd each
//! time. No `(mu, lambda)` bookkeeping and no period detection; this is what
//! the engine is checked against.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::surd::{floor_surd, QuadraticSurd};

/// The first `steps` quotients of `s`, fewer if `s` is rational and runs out.
pub fn oracle_expand(s: &QuadraticSurd, steps: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(steps);
    let mut x = s.normalize();
    while out.len() < steps {
        let k = floor_surd(&x);
        let rest = x.sub_integer(&k).normalize();
        out.push(k);
        if rest.rational_value().is_some_and(|v| v.is_zero()) {
            break;
        }
        x = match rest.reciprocal() {
            Ok(next) => next.normalize(),
            Err(_) => break,
        };
    }
    out
}

pub fn oracle_is_palindrome<T: PartialEq>(seq: &[T]) -> bool {
    seq.iter().eq(seq.iter().rev())
}
