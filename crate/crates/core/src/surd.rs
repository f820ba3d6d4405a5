//! Exact integer square roots, quadratic surds `(p + sqrt(d)) / q` and
//! exact sign decisions for linear combinations of two commensurable-in-square
//! lines. Nothing in here touches floating point.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Reduced fraction with a positive denominator.
pub type Rational = BigRational;

/// Floor of the square root, by Newton iteration with a final correction.
pub fn isqrt(n: &BigInt) -> Result<BigInt> {
    if n.is_negative() {
        return Err(Error::NegativeInput(n.clone()));
    }
    Ok(isqrt_unchecked(n))
}

fn isqrt_unchecked(n: &BigInt) -> BigInt {
    if *n < BigInt::from(2) {
        return n.clone();
    }
    // 2^ceil(bits/2) is at least sqrt(n), so the iteration decreases monotonically.
    let shift = n.bits().div_ceil(2);
    let mut x = BigInt::one() << shift;
    loop {
        let y = (&x + n / &x) >> 1u32;
        if y >= x {
            break;
        }
        x = y;
    }
    while &x * &x > *n {
        x -= 1;
    }
    loop {
        let next = &x + 1;
        if &next * &next <= *n {
            x = next;
        } else {
            break;
        }
    }
    x
}

/// `Some(root)` when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = isqrt_unchecked(n);
    (&r * &r == *n).then_some(r)
}

/// True when the rational `r` is the square of a rational.
pub fn is_rational_square(r: &Rational) -> bool {
    exact_sqrt(r.numer()).is_some() && exact_sqrt(r.denom()).is_some()
}

/// The real number `(p + sqrt(d)) / q`.
///
/// A perfect-square radicand makes the value rational; such surds are
/// flagged at construction and canonicalised to `d = 0` by [`normalize`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    p: BigInt,
    d: BigInt,
    q: BigInt,
    rational: bool,
}

impl QuadraticSurd {
    pub fn new(p: impl Into<BigInt>, d: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (p, d, q) = (p.into(), d.into(), q.into());
        if q.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if d.is_negative() {
            return Err(Error::NegativeRadicand(d));
        }
        let rational = exact_sqrt(&d).is_some();
        Ok(Self { p, d, q, rational })
    }

    /// `sqrt(n)` as the surd `(0 + sqrt(n)) / 1`.
    pub fn sqrt(n: impl Into<BigInt>) -> Result<Self> {
        Self::new(0, n, 1)
    }

    /// `sqrt(r)` for a non-negative rational `r = a/b`, written as `sqrt(a*b) / b`.
    pub fn sqrt_rational(r: &Rational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::NegativeRadicand(r.numer().clone()));
        }
        Self::new(0, r.numer() * r.denom(), r.denom().clone())
    }

    pub fn from_rational(r: &Rational) -> Self {
        Self {
            p: r.numer().clone(),
            d: BigInt::zero(),
            q: r.denom().clone(),
            rational: true,
        }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn is_rational(&self) -> bool {
        self.rational
    }

    /// Exact value when the radicand is a perfect square.
    pub fn rational_value(&self) -> Option<Rational> {
        if !self.rational {
            return None;
        }
        let root = isqrt_unchecked(&self.d);
        Some(Rational::new(&self.p + root, self.q.clone()))
    }

    pub fn is_normalized(&self) -> bool {
        if self.rational {
            return self.d.is_zero() && self.q.is_positive() && self.p.gcd(&self.q).is_one();
        }
        (&self.d - &self.p * &self.p).is_multiple_of(&self.q)
    }

    pub fn normalize(&self) -> Self {
        if let Some(v) = self.rational_value() {
            return Self::from_rational(&v);
        }
        if self.is_normalized() {
            return self.clone();
        }
        let aq = self.q.abs();
        Self {
            p: &self.p * &aq,
            d: &self.d * &self.q * &self.q,
            q: &self.q * &aq,
            rational: false,
        }
    }

    pub fn floor(&self) -> BigInt {
        floor_surd(self)
    }

    /// `self - k`
    pub fn sub_integer(&self, k: &BigInt) -> Self {
        Self {
            p: &self.p - k * &self.q,
            d: self.d.clone(),
            q: self.q.clone(),
            rational: self.rational,
        }
    }

    /// `1 / self`, by multiplying through with the conjugate `p - sqrt(d)`.
    pub fn reciprocal(&self) -> Result<Self> {
        if let Some(v) = self.rational_value() {
            if v.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            return Ok(Self::from_rational(&v.recip()));
        }
        // q / (p + sqrt d) = (q*sqrt d - q*p) / (d - p^2)
        let norm = &self.d - &self.p * &self.p;
        Ok(Self::from_linear(
            -&self.q * &self.p,
            self.q.clone(),
            &self.d,
            norm,
        ))
    }

    /// Canonical surd for `(a + b*sqrt(d)) / c` with `b != 0`, `c != 0`.
    fn from_linear(a: BigInt, b: BigInt, d: &BigInt, c: BigInt) -> Self {
        let g = a.gcd(&b).gcd(&c);
        let (mut a, mut b, mut c) = (a / &g, b / &g, c / &g);
        if b.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let d = &b * &b * d;
        let rational = exact_sqrt(&d).is_some();
        Self {
            p: a,
            d,
            q: c,
            rational,
        }
        .normalize()
    }

    /// Exact value equality, independent of representation.
    pub fn same_value(&self, other: &Self) -> bool {
        match (self.rational_value(), other.rational_value()) {
            (Some(a), Some(b)) => a == b,
            (None, None) => {
                self.q.signum() == other.q.signum()
                    && &other.q * &other.q * &self.d == &self.q * &self.q * &other.d
                    && &other.q * &self.p == &self.q * &other.p
            }
            _ => false,
        }
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}+sqrt({}))/{}", self.p, self.d, self.q)
    }
}

/// Normalised copy of `s`.
pub fn normalize(s: &QuadraticSurd) -> QuadraticSurd {
    s.normalize()
}

/// The integer `f` with `f <= s < f + 1`.
pub fn floor_surd(s: &QuadraticSurd) -> BigInt {
    if let Some(v) = s.rational_value() {
        return v.floor().to_integer();
    }
    let root = isqrt_unchecked(&s.d);
    let top = &s.p + &root;
    if s.q.is_positive() {
        top.div_floor(&s.q)
    } else {
        // s = -(p + sqrt d)/|q|, never an integer, so floor = -ceil(...) = -(floor(...) + 1)
        -(top.div_floor(&-&s.q) + BigInt::one())
    }
}

/// Exact sign of `c_a*alpha + c_b*beta` where `alpha^2 = ratio * beta^2`, `beta > 0`.
pub fn sign_of(c_a: &Rational, c_b: &Rational, ratio: &Rational) -> Result<Ordering> {
    if !ratio.is_positive() {
        return Err(Error::NonPositiveRatio(ratio.to_string()));
    }
    if is_rational_square(ratio) {
        return Err(Error::SquareRatio(ratio.to_string()));
    }
    let sa = c_a.cmp(&Rational::zero());
    let sb = c_b.cmp(&Rational::zero());
    use Ordering::*;
    Ok(match (sa, sb) {
        (Equal, s) | (s, Equal) => s,
        (Greater, Greater) => Greater,
        (Less, Less) => Less,
        (Greater, Less) => (c_a * c_a * ratio).cmp(&(c_b * c_b)),
        (Less, Greater) => (c_b * c_b).cmp(&(c_a * c_a * ratio)),
    })
}
