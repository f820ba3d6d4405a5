//! The anthyphairesis driver.
//!
//! For `alpha^2 = N*beta^2` the remainders are tracked through their increment
//! factors `lambda_k*phi_k = alpha - mu_k*beta`. Each division step is the pair of
//! integer recurrences
//!
//! ```text
//! lambda_{k+1} * lambda_k = N - mu_k^2
//! mu_{k+1} + mu_k         = I_k * lambda_{k+1}
//! ```
//!
//! with `I_k = floor((isqrt(N) + mu_k) / lambda_{k+1})`. The period closes at the
//! first repeated `(mu, lambda)` pair. Rational radicands `p/q` run the same
//! recurrence on `D = p*q` starting from `lambda_1 = q`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bookx::{line_mul, SurdArea, SurdLine};
use crate::error::{Error, Result};
use crate::surd::{exact_sqrt, isqrt, QuadraticSurd, Rational};

/// Cap on the number of division steps an expansion may take.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StepLimit {
    /// `None` selects the default derived from the pigeonhole bound.
    pub max_steps: Option<u64>,
}

impl StepLimit {
    pub fn steps(max_steps: u64) -> Self {
        Self {
            max_steps: Some(max_steps),
        }
    }

    pub(crate) fn resolve(&self, default: BigInt) -> u64 {
        self.max_steps
            .unwrap_or_else(|| default.to_u64().unwrap_or(u64::MAX))
    }
}

/// Upper bound on the number of `(mu, lambda)` states: `isqrt(N) * (N - 1)`.
pub fn pigeonhole_bound(n: &BigInt) -> Result<BigInt> {
    let m = isqrt(n)?;
    Ok(m * (n - 1u32).max(BigInt::zero()))
}

/// One increment-factor state `lambda*phi = alpha - mu*beta`, recorded after a
/// division step. `step_index` is 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AnthState {
    pub mu: BigInt,
    pub lambda: BigInt,
    pub step_index: usize,
}

impl AnthState {
    /// Logos criterion: two factors are the same line iff their `(mu, lambda)` agree.
    pub fn same_logos(&self, other: &AnthState) -> bool {
        self.mu == other.mu && self.lambda == other.lambda
    }
}

/// What an [`Expansion`] was computed from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    /// `sqrt(r)`: the anthyphairesis of `alpha, beta` with `alpha^2 = r*beta^2`.
    SquareRoot(Rational),
    Surd(QuadraticSurd),
    /// Built directly from quotient lists; carries no states.
    Quotients,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub origin: Origin,
    /// Integer radicand `D` the states refer to (`N` for `sqrt(N)`, `p*q` for `sqrt(p/q)`).
    pub radicand: BigInt,
    pub preperiod: Vec<BigInt>,
    pub period: Vec<BigInt>,
    /// Rational input: `preperiod` is the whole finite expansion.
    pub terminated: bool,
    /// One state per emitted quotient; `states[i]` is the remainder left after
    /// quotient `i`, written `(sqrt(D) - mu) / lambda`.
    pub states: Vec<AnthState>,
}

impl Expansion {
    pub fn from_quotients(preperiod: Vec<BigInt>, period: Vec<BigInt>) -> Self {
        let terminated = period.is_empty();
        Self {
            origin: Origin::Quotients,
            radicand: BigInt::zero(),
            preperiod,
            period,
            terminated,
            states: Vec::new(),
        }
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// Whole part of the expanded value.
    pub fn integer_part(&self) -> Option<&BigInt> {
        self.preperiod.first().or_else(|| self.period.first())
    }

    /// Quotient `i` (0-based) of the infinite expansion, cycling the period.
    pub fn quotient(&self, i: usize) -> Option<&BigInt> {
        if i < self.preperiod.len() {
            return self.preperiod.get(i);
        }
        if self.period.is_empty() {
            return None;
        }
        Some(&self.period[(i - self.preperiod.len()) % self.period.len()])
    }

    /// All quotients, the period repeated forever (finite for rational input).
    pub fn quotients(&self) -> impl Iterator<Item = &BigInt> + '_ {
        let cycle: Box<dyn Iterator<Item = &BigInt>> = if self.period.is_empty() {
            Box::new(std::iter::empty())
        } else {
            Box::new(self.period.iter().cycle())
        };
        self.preperiod.iter().chain(cycle)
    }

    /// Ratio `r` when this is the expansion of `sqrt(r)` for irrational `sqrt(r)`.
    pub fn sqrt_ratio(&self) -> Option<&Rational> {
        match &self.origin {
            Origin::SquareRoot(r) if !self.terminated => Some(r),
            _ => None,
        }
    }
}

/// Expansion of `sqrt(n)`.
pub fn expand_sqrt(n: &BigInt, limits: &StepLimit) -> Result<Expansion> {
    if n.is_negative() {
        return Err(Error::NegativeInput(n.clone()));
    }
    expand_sqrt_rational(&Rational::from_integer(n.clone()), limits)
}

/// Expansion of `sqrt(r)` for a non-negative rational `r`.
pub fn expand_sqrt_rational(r: &Rational, limits: &StepLimit) -> Result<Expansion> {
    if r.is_negative() {
        return Err(Error::NegativeInput(r.numer().clone()));
    }
    let origin = Origin::SquareRoot(r.clone());
    let den = r.denom().clone();
    let d = r.numer() * &den;
    if let Some(root) = exact_sqrt(&d) {
        return Ok(finite_expansion(&Rational::new(root, den), origin));
    }

    let m = isqrt(&d)?;
    let limit = limits.resolve(pigeonhole_bound(&d)? + 2u32);

    let a0 = m.div_floor(&den);
    let mut mu = &a0 * &den;
    let mut lambda = den;
    let mut quotients = vec![a0];
    let mut states = vec![AnthState {
        mu: mu.clone(),
        lambda: lambda.clone(),
        step_index: 1,
    }];
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    seen.insert((mu.clone(), lambda.clone()), 1);

    let first = loop {
        let step = states.len() + 1;
        if step as u64 > limit {
            return Err(Error::StepLimit { limit });
        }
        let (next_lambda, rem) = (&d - &mu * &mu).div_rem(&lambda);
        if !rem.is_zero() {
            return Err(Error::Falsified(format!(
                "lambda_{} = {lambda} does not divide {d} - {mu}^2",
                step - 1
            )));
        }
        let quotient = (&m + &mu).div_floor(&next_lambda);
        let next_mu = &quotient * &next_lambda - &mu;
        quotients.push(quotient);
        mu = next_mu;
        lambda = next_lambda;
        states.push(AnthState {
            mu: mu.clone(),
            lambda: lambda.clone(),
            step_index: step,
        });
        if let Some(&j) = seen.get(&(mu.clone(), lambda.clone())) {
            break j;
        }
        seen.insert((mu.clone(), lambda.clone()), step);
    };

    // phi_first == phi_last: the period is the quotients read off phi_first .. phi_{last-1}
    let period = quotients.split_off(first);
    Ok(Expansion {
        origin,
        radicand: d,
        preperiod: quotients,
        period,
        terminated: false,
        states,
    })
}

/// Euclid on a rational value.
fn finite_expansion(v: &Rational, origin: Origin) -> Expansion {
    let (mut num, mut den) = (v.numer().clone(), v.denom().clone());
    let mut quotients = Vec::new();
    while !den.is_zero() {
        let (q, r) = num.div_mod_floor(&den);
        quotients.push(q);
        num = std::mem::replace(&mut den, r);
    }
    Expansion {
        origin,
        radicand: BigInt::zero(),
        preperiod: quotients,
        period: Vec::new(),
        terminated: true,
        states: Vec::new(),
    }
}

/// Streams the quotients of a general surd with the complete-quotient recurrence,
/// without period detection.
#[derive(Clone, Debug)]
pub struct SurdQuotients {
    p: BigInt,
    q: BigInt,
    d: BigInt,
    root: BigInt,
    finite: Option<std::vec::IntoIter<BigInt>>,
}

impl SurdQuotients {
    pub fn new(s: &QuadraticSurd) -> Self {
        let s = s.normalize();
        let finite = s.rational_value().map(|v| {
            finite_expansion(&v, Origin::Quotients)
                .preperiod
                .into_iter()
        });
        Self {
            root: isqrt(s.d()).expect("non-negative radicand"),
            p: s.p().clone(),
            q: s.q().clone(),
            d: s.d().clone(),
            finite,
        }
    }

    /// `(p, q)` of the current complete quotient `(p + sqrt d)/q`.
    fn key(&self) -> (BigInt, BigInt) {
        (self.p.clone(), self.q.clone())
    }

    /// Emit one quotient and return it with the remainder state `(mu, lambda)`.
    fn advance(&mut self) -> (BigInt, BigInt, BigInt) {
        let top = &self.p + &self.root;
        let a = if self.q.is_positive() {
            top.div_floor(&self.q)
        } else {
            -(top.div_floor(&-&self.q) + BigInt::one())
        };
        let mu = &a * &self.q - &self.p;
        let lambda = self.q.clone();
        // q | d - p^2 is preserved: the next denominator is exact
        self.q = (&self.d - &mu * &mu) / &lambda;
        self.p = mu.clone();
        (a, mu, lambda)
    }
}

impl Iterator for SurdQuotients {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        if let Some(finite) = &mut self.finite {
            return finite.next();
        }
        Some(self.advance().0)
    }
}

/// Expansion of an arbitrary quadratic surd: preperiod plus minimal period,
/// split at the first complete quotient that recurs.
pub fn expand_surd(s: &QuadraticSurd, limits: &StepLimit) -> Result<Expansion> {
    let s = s.normalize();
    let origin = Origin::Surd(s.clone());
    if let Some(v) = s.rational_value() {
        return Ok(finite_expansion(&v, origin));
    }
    let limit = limits.resolve(pigeonhole_bound(s.d())? * 10u32);
    let mut walker = SurdQuotients::new(&s);
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut quotients = Vec::new();
    let mut states = Vec::new();
    let first = loop {
        let key = walker.key();
        if let Some(&j) = seen.get(&key) {
            break j;
        }
        if quotients.len() as u64 >= limit {
            return Err(Error::StepLimit { limit });
        }
        seen.insert(key, quotients.len());
        let (a, mu, lambda) = walker.advance();
        quotients.push(a);
        states.push(AnthState {
            mu,
            lambda,
            step_index: states.len() + 1,
        });
    };
    let period = quotients.split_off(first);
    Ok(Expansion {
        origin,
        radicand: s.d().clone(),
        preperiod: quotients,
        period,
        terminated: false,
        states,
    })
}

/// The line `phi = (alpha - mu*beta)/lambda` behind a state of `sqrt(ratio)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncrementFactor {
    pub state: AnthState,
    pub ratio: Rational,
}

impl IncrementFactor {
    /// `(q*alpha - mu*beta) / lambda` where `ratio = p/q`, so `(q*alpha)^2 = D*beta^2`.
    pub fn line(&self) -> SurdLine {
        state_line(&self.state.mu, &self.state.lambda, &self.ratio)
    }

    /// `phi < beta`, i.e. `D < (mu + lambda)^2`.
    pub fn is_below_beta(&self) -> bool {
        let d = self.ratio.numer() * self.ratio.denom();
        let s = &self.state.mu + &self.state.lambda;
        s.is_positive() && d < &s * &s
    }
}

/// `(q*alpha - mu*beta) / lambda` over `alpha^2 = ratio*beta^2`, `ratio = p/q`.
pub(crate) fn state_line(mu: &BigInt, lambda: &BigInt, ratio: &Rational) -> SurdLine {
    SurdLine::scaled(ratio.denom(), &-mu, lambda, ratio).expect("irrational ratio, non-zero lambda")
}

/// Increment factors of an expansion of `sqrt(ratio)`, with `phi_n < beta` and
/// `phi_n * (I_n*beta + phi_{n+1}) = beta^2` checked for every consecutive pair.
pub fn increment_factors(e: &Expansion, ratio: &Rational) -> Result<Vec<IncrementFactor>> {
    if e.sqrt_ratio() != Some(ratio) {
        return Err(Error::MismatchedExpansion(ratio.numer().clone()));
    }
    if e.states.is_empty() {
        return Err(Error::MissingStates);
    }
    let factors: Vec<IncrementFactor> = e
        .states
        .iter()
        .map(|s| IncrementFactor {
            state: s.clone(),
            ratio: ratio.clone(),
        })
        .collect();
    let beta = SurdLine::beta(ratio)?;
    let unit = SurdArea::beta_squared(Rational::one());
    for (n, f) in factors.iter().enumerate() {
        let phi = f.line();
        if !f.is_below_beta() || !phi.is_positive() || !beta.sub(&phi)?.is_positive() {
            return Err(Error::Falsified(format!(
                "phi_{} = {phi} is not inside (0, beta)",
                n + 1
            )));
        }
        if let Some(next) = factors.get(n + 1) {
            // quotient I_{n+1} (1-based) sits at position n + 1 of the quotient list
            let i_n = Rational::from_integer(e.quotient(n + 1).expect("periodic").clone());
            let whole = beta.times(&i_n).add(&next.line())?;
            if line_mul(&phi, &whole)? != unit {
                return Err(Error::Falsified(format!(
                    "phi_{0} * (I_{0} beta + phi_{1}) != beta^2",
                    n + 1,
                    n + 2
                )));
            }
        }
    }
    Ok(factors)
}

/// The first `count` remainders `e_1, e_2, ...` of `alpha, beta` with
/// `alpha^2 = n*beta^2`, as integer combinations of `alpha` and `beta`.
pub fn remainders(n: &BigInt, count: usize) -> Result<Vec<SurdLine>> {
    let e = expand_sqrt(n, &StepLimit::default())?;
    if e.terminated {
        return Err(Error::PerfectSquare(n.clone()));
    }
    let ratio = Rational::from_integer(n.clone());
    // e_{-1} = alpha, e_0 = beta, e_{k+1} = e_{k-1} - I_k e_k
    let mut prev = SurdLine::alpha(&ratio)?;
    let mut cur = SurdLine::beta(&ratio)?;
    let mut out = Vec::with_capacity(count);
    for (k, q) in e.quotients().take(count).enumerate() {
        let next = prev.sub(&cur.times(&Rational::from_integer(q.clone())))?;
        if !next.is_positive() || !cur.sub(&next)?.is_positive() {
            return Err(Error::Falsified(format!(
                "e_{} = {next} is not a proper remainder",
                k + 1
            )));
        }
        out.push(next.clone());
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_expand;
    use crate::surd::floor_surd;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|x| x.try_into().unwrap()).collect()
    }

    fn sqrt(n: i64) -> Expansion {
        expand_sqrt(&big(n), &StepLimit::default()).unwrap()
    }

    #[test]
    fn known_square_roots() {
        for (n, pre, per) in [
            (19, vec![4], vec![2, 1, 3, 1, 2, 8]),
            (54, vec![7], vec![2, 1, 6, 1, 2, 14]),
            (46, vec![6], vec![1, 3, 1, 1, 2, 6, 2, 1, 1, 3, 1, 12]),
            (13, vec![3], vec![1, 1, 1, 1, 6]),
            (2, vec![1], vec![2]),
        ] {
            let e = sqrt(n);
            assert_eq!(ints(&e.preperiod), pre, "N = {n}");
            assert_eq!(ints(&e.period), per, "N = {n}");
            assert!(!e.terminated);
            assert_eq!(e.states.len(), pre.len() + per.len());
            assert!(e.states[pre.len() + per.len() - 1].same_logos(&e.states[pre.len() - 1]));
        }
    }

    #[test]
    fn perfect_square_terminates() {
        let e = sqrt(4);
        assert!(e.terminated);
        assert_eq!(ints(&e.preperiod), vec![2]);
        assert!(e.period.is_empty());
        assert!(matches!(
            expand_sqrt(&big(-3), &StepLimit::default()),
            Err(Error::NegativeInput(_))
        ));
    }

    #[test]
    fn step_limit_is_reported() {
        let err = expand_sqrt(&big(46), &StepLimit::steps(5)).unwrap_err();
        assert_eq!(err, Error::StepLimit { limit: 5 });
    }

    #[test]
    fn states_of_54() {
        let e = sqrt(54);
        let lm: Vec<(i64, i64)> = e
            .states
            .iter()
            .map(|s| ((&s.lambda).try_into().unwrap(), (&s.mu).try_into().unwrap()))
            .collect();
        assert_eq!(
            lm,
            vec![(1, 7), (5, 3), (9, 6), (2, 6), (9, 3), (5, 7), (1, 7)]
        );
    }

    #[test]
    fn surd_examples() {
        let e = expand_surd(
            &QuadraticSurd::new(7, 54, 5).unwrap(),
            &StepLimit::default(),
        )
        .unwrap();
        assert!(e.preperiod.is_empty());
        assert_eq!(ints(&e.period), vec![2, 1, 6, 1, 2, 14]);

        let e = expand_surd(&QuadraticSurd::new(3, 0, 2).unwrap(), &StepLimit::default()).unwrap();
        assert!(e.terminated);
        assert_eq!(ints(&e.preperiod), vec![1, 2]);

        // sqrt(7/3) = sqrt(21)/3
        let e = expand_surd(
            &QuadraticSurd::new(0, 21, 3).unwrap(),
            &StepLimit::default(),
        )
        .unwrap();
        let a0 = e.preperiod[0].clone();
        let last = e.period.last().unwrap();
        assert_eq!(*last, &a0 * 2);
        let interior = &e.period[..e.period.len() - 1];
        assert!(interior.iter().eq(interior.iter().rev()));
        let oracle = oracle_expand(
            &QuadraticSurd::new(0, 21, 3).unwrap(),
            1 + 3 * e.period.len(),
        );
        let ours: Vec<BigInt> = e.quotients().take(oracle.len()).cloned().collect();
        assert_eq!(ours, oracle);
    }

    #[test]
    fn surd_with_negative_denominator() {
        // -(1 + sqrt 2) = [-3; 1, (1, 2)]... checked against the oracle
        let s = QuadraticSurd::new(1, 2, -1).unwrap();
        let e = expand_surd(&s, &StepLimit::default()).unwrap();
        let oracle = oracle_expand(&s, 20);
        let ours: Vec<BigInt> = e.quotients().take(20).cloned().collect();
        assert_eq!(ours, oracle);
        assert_eq!(e.preperiod[0], big(-3));
    }

    #[test]
    fn sqrt_and_surd_engines_agree() {
        for n in 2..300i64 {
            if exact_sqrt(&big(n)).is_some() {
                continue;
            }
            let a = sqrt(n);
            let b = expand_surd(&QuadraticSurd::sqrt(n).unwrap(), &StepLimit::default()).unwrap();
            assert_eq!(a.preperiod, b.preperiod, "N = {n}");
            assert_eq!(a.period, b.period, "N = {n}");
        }
    }

    #[test]
    fn quotient_rule_matches_floor_surd() {
        for n in 2..400i64 {
            let e = sqrt(n);
            if e.terminated {
                continue;
            }
            // I_k = floor(psi_k) where psi_k = (mu_k + sqrt N)/lambda_{k+1}
            for k in 0..e.states.len() - 1 {
                let psi =
                    QuadraticSurd::new(e.states[k].mu.clone(), n, e.states[k + 1].lambda.clone())
                        .unwrap();
                assert_eq!(
                    &floor_surd(&psi),
                    e.quotient(k + 1).unwrap(),
                    "N = {n}, k = {k}"
                );
            }
        }
    }

    #[test]
    fn purely_periodic_tail() {
        for n in 2..500i64 {
            let e = sqrt(n);
            if e.terminated {
                continue;
            }
            let tail =
                QuadraticSurd::new(e.states[0].mu.clone(), n, e.states[1].lambda.clone()).unwrap();
            let t = expand_surd(&tail, &StepLimit::default()).unwrap();
            assert!(t.preperiod.is_empty(), "N = {n}");
            assert_eq!(t.period, e.period, "N = {n}");
        }
    }

    #[test]
    fn bounds() {
        assert_eq!(pigeonhole_bound(&big(2)).unwrap(), big(1));
        assert_eq!(pigeonhole_bound(&big(54)).unwrap(), big(371));
        assert_eq!(pigeonhole_bound(&big(19)).unwrap(), big(72));
        assert_eq!(sqrt(19).period_len(), 6);
    }

    #[test]
    fn increment_factor_examples() {
        let r54 = Rational::from_integer(big(54));
        let f = increment_factors(&sqrt(54), &r54).unwrap();
        assert_eq!(f.len(), 7);
        assert_eq!(f[1].line().to_string(), "(alpha - 3beta)/5");
        assert_eq!(f[3].line().to_string(), "(alpha - 6beta)/2");

        let f = increment_factors(&sqrt(19), &Rational::from_integer(big(19))).unwrap();
        assert_eq!(f[0].line().to_string(), "alpha - 4beta");

        let f = increment_factors(&sqrt(2), &Rational::from_integer(big(2))).unwrap();
        assert!(f.iter().all(|x| x.line().to_string() == "alpha - beta"));

        assert!(matches!(
            increment_factors(&sqrt(19), &r54),
            Err(Error::MismatchedExpansion(_))
        ));
    }

    #[test]
    fn remainder_examples() {
        let e: Vec<String> = remainders(&big(19), 7)
            .unwrap()
            .iter()
            .map(|l| l.to_string())
            .collect();
        assert_eq!(
            e,
            vec![
                "alpha - 4beta",
                "9beta - 2alpha",
                "3alpha - 13beta",
                "48beta - 11alpha",
                "14alpha - 61beta",
                "170beta - 39alpha",
                "326alpha - 1421beta",
            ]
        );
        let e: Vec<String> = remainders(&big(2), 2)
            .unwrap()
            .iter()
            .map(|l| l.to_string())
            .collect();
        assert_eq!(e, vec!["alpha - beta", "3beta - 2alpha"]);
        assert!(matches!(
            remainders(&big(25), 2),
            Err(Error::PerfectSquare(_))
        ));
    }

    #[test]
    fn remainders_of_13_by_substitution() {
        // e_1 = a - 3b; b = 1*e_1 + e_2 -> e_2 = 4b - a; e_1 = 1*e_2 + e_3 -> e_3 = 2a - 7b.
        // Each quotient is the floor of the previous ratio, checked with floor_surd.
        let e = remainders(&big(13), 3).unwrap();
        let shown: Vec<String> = e.iter().map(|l| l.to_string()).collect();
        assert_eq!(
            shown,
            vec!["alpha - 3beta", "4beta - alpha", "2alpha - 7beta"]
        );
        // beta / e_1 = 1/(sqrt13 - 3) = (3 + sqrt 13)/4, floor 1
        assert_eq!(floor_surd(&QuadraticSurd::new(3, 13, 4).unwrap()), big(1));
        // e_1 / e_2 = (sqrt13 - 3)/(4 - sqrt13) = (1 + sqrt13)/3, floor 1
        assert_eq!(floor_surd(&QuadraticSurd::new(1, 13, 3).unwrap()), big(1));
    }
}
