//! Exact anthyphairesis of quadratic surds.
//!
//! The expansion of `alpha : beta` with `alpha^2 = N*beta^2` is driven by the
//! integer state `(mu, lambda)` of its increment factors, periodicity is
//! detected by repetition of that state, and the palindromic shape of the
//! period is confirmed both on the quotients and through the mirror sequence
//! of inverted conjugates. Everything is exact big-integer and rational
//! arithmetic.
//!
//! ```
//! use anth_core::{expand_sqrt, verify_palindrome, StepLimit};
//! use num_bigint::BigInt;
//!
//! let e = expand_sqrt(&BigInt::from(19), &StepLimit::default()).unwrap();
//! let period: Vec<u32> = e.period.iter().map(|q| q.try_into().unwrap()).collect();
//! assert_eq!(period, [2, 1, 3, 1, 2, 8]);
//! assert!(verify_palindrome(&e, &BigInt::from(4)).unwrap().holds);
//! ```

pub mod bookx;
pub mod convergents;
pub mod engine;
pub mod error;
pub mod oracle;
pub mod palindrome;
pub mod surd;

pub use bookx::{
    classify, conjugate, euler_trace, inverse_wrt_beta_squared, line_mul, logos_cross_check,
    render_trace, LineClass, SurdArea, SurdLine, TraceStep,
};
pub use convergents::{
    convergents, pell_from_expansion, pell_fundamental, Convergent, PellSolution,
};
pub use engine::{
    expand_sqrt, expand_sqrt_rational, expand_surd, increment_factors, pigeonhole_bound,
    remainders, AnthState, Expansion, IncrementFactor, Origin, StepLimit, SurdQuotients,
};
pub use error::{Error, Result};
pub use oracle::{oracle_expand, oracle_is_palindrome};
pub use palindrome::{
    find_reflection, omega_sequence, period_stats, reflection_matchings, reflection_of,
    verify_palindrome, OmegaState, PalindromeReport, PeriodStats, Reflection, ReflectionCase,
};
pub use surd::{exact_sqrt, floor_surd, isqrt, normalize, sign_of, QuadraticSurd, Rational};
