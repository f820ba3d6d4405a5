//! Palindromic structure of the period of `sqrt(r)`, checked two ways.
//!
//! The direct way reads the quotient list. The second way goes through the
//! mirror sequence `omega_n`, defined by `phi_n^* * omega_n = beta^2`, which
//! satisfies `lambda_{n+1} * omega_n = alpha - mu_n*beta`. Interleaving
//! `phi_1, omega_1, phi_2, omega_2, ...`, the first element equal to an
//! earlier one is either `phi_k = omega_{k-1}` (case I) or `omega_k = phi_k`
//! (case II); from that meeting point the quotients are forced to mirror each
//! other and the last one to be twice the whole part.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::bookx::{conjugate, inverse_wrt_beta_squared, line_mul, SurdArea, SurdLine};
use crate::engine::{increment_factors, state_line, Expansion, IncrementFactor};
use crate::error::{Error, Result};
use crate::surd::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReflectionCase {
    /// `omega_{k-1} = phi_k`: odd interior with a middle quotient.
    I,
    /// `phi_k = omega_k`: even interior.
    II,
}

impl fmt::Display for ReflectionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReflectionCase::I => "I",
            ReflectionCase::II => "II",
        })
    }
}

/// `omega_n` with `lambda_{n+1} * omega_n = alpha - mu_n*beta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaState {
    pub index: usize,
    pub mu: BigInt,
    pub lambda_next: BigInt,
    pub ratio: Rational,
}

impl OmegaState {
    pub fn line(&self) -> SurdLine {
        state_line(&self.mu, &self.lambda_next, &self.ratio)
    }

    fn key(&self) -> (&BigInt, &BigInt) {
        (&self.mu, &self.lambda_next)
    }
}

fn phi_key(f: &IncrementFactor) -> (&BigInt, &BigInt) {
    (&f.state.mu, &f.state.lambda)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reflection {
    pub case: ReflectionCase,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PalindromeReport {
    pub holds: bool,
    /// Filled in when the omega route could be run (expansions of `sqrt(r)`, `r > 1`).
    pub case: Option<ReflectionCase>,
    pub center_index: Option<usize>,
    pub last_quotient_is_double: bool,
    /// 1-based quotient indices `(i, j)` with `I_i = I_j`.
    pub matched_pairs: Vec<(usize, usize)>,
}

/// Checks that the period is `(k_1, ..., k_1, 2m)` with a palindromic interior.
/// For expansions of `sqrt(r)` the omega route is run on the integer states as
/// well and must agree; [`reflection_of`] also checks the line identities.
pub fn verify_palindrome(e: &Expansion, m: &BigInt) -> Result<PalindromeReport> {
    let period = &e.period;
    let l = period.len();
    if l == 0 {
        return Err(Error::EmptyPeriod);
    }
    let doubled = period[l - 1] == m * 2;
    let mut matched_pairs = Vec::new();
    let mut symmetric = true;
    // I_i = period[i - 1]; the interior is I_1 .. I_{l-1}
    for i in 1..=(l - 1) / 2 {
        let j = l - i;
        if period[i - 1] == period[j - 1] {
            matched_pairs.push((i, j));
        } else {
            symmetric = false;
        }
    }
    let holds = symmetric && doubled;

    let mut report = PalindromeReport {
        holds,
        case: None,
        center_index: None,
        last_quotient_is_double: doubled,
        matched_pairs,
    };

    let omega_route = match e.sqrt_ratio() {
        Some(r) => *r > Rational::one() && e.integer_part() == Some(m) && !e.states.is_empty(),
        None => false,
    };
    if omega_route {
        let ratio = e.sqrt_ratio().expect("checked").clone();
        let reflection = reflect(e, &ratio, false);
        match (holds, reflection) {
            (true, Ok((refl, _))) => {
                report.case = Some(refl.case);
                report.center_index = Some(refl.k);
            }
            (true, Err(err)) => return Err(err),
            (false, Ok(_)) => {
                return Err(Error::Falsified(
                    "omega reflection succeeded on a non-palindromic period".into(),
                ))
            }
            (false, Err(_)) => {}
        }
    }
    Ok(report)
}

/// With `checked` the line identities behind every factor are verified in area
/// algebra first; without it only the integer states are compared.
fn reflect(
    e: &Expansion,
    ratio: &Rational,
    checked: bool,
) -> Result<(Reflection, Vec<(usize, usize)>)> {
    let (phis, omegas) = if checked {
        (increment_factors(e, ratio)?, omega_sequence(e, ratio)?)
    } else {
        let phis = e
            .states
            .iter()
            .map(|s| IncrementFactor {
                state: s.clone(),
                ratio: ratio.clone(),
            })
            .collect();
        (phis, omegas_of(e, ratio))
    };
    let refl = find_reflection(&phis, &omegas)?;
    let pairs = reflection_matchings(e, &refl)?;
    Ok((refl, pairs))
}

/// `omega_n` for every recorded step, with
/// `phi_n^* * omega_n = beta^2`, `omega_n < beta`,
/// `omega_1 * (phi_1 + 2*a_0*beta) = beta^2` and
/// `omega_{n+1} * (I_n*beta + omega_n) = beta^2` checked in area algebra.
pub fn omega_sequence(e: &Expansion, ratio: &Rational) -> Result<Vec<OmegaState>> {
    let phis = increment_factors(e, ratio)?;
    let omegas = omegas_of(e, ratio);

    let beta = SurdLine::beta(ratio)?;
    let unit = SurdArea::beta_squared(Rational::one());
    let a0 = Rational::from_integer(e.integer_part().ok_or(Error::MissingStates)?.clone());

    for (i, omega) in omegas.iter().enumerate() {
        let n = i + 1;
        let line = omega.line();
        let by_definition = inverse_wrt_beta_squared(&conjugate(&phis[i].line()))?;
        if by_definition != line {
            return Err(Error::Falsified(format!(
                "omega_{n}: 1/phi_{n}^* = {by_definition} but lambda_{} form gives {line}",
                n + 1
            )));
        }
        if !line.is_positive() || !beta.sub(&line)?.is_positive() {
            return Err(Error::Falsified(format!(
                "omega_{n} = {line} is not inside (0, beta)"
            )));
        }
        let whole = if n == 1 {
            phis[0]
                .line()
                .add(&beta.times(&(&a0 * Rational::from_integer(2.into()))))?
        } else {
            let i_prev = Rational::from_integer(e.quotient(n - 1).expect("periodic").clone());
            beta.times(&i_prev).add(&omegas[i - 1].line())?
        };
        if line_mul(&line, &whole)? != unit {
            return Err(Error::Falsified(format!(
                "omega_{n} fails its inversion identity"
            )));
        }
    }
    Ok(omegas)
}

fn omegas_of(e: &Expansion, ratio: &Rational) -> Vec<OmegaState> {
    e.states
        .windows(2)
        .enumerate()
        .map(|(i, w)| OmegaState {
            index: i + 1,
            mu: w[0].mu.clone(),
            lambda_next: w[1].lambda.clone(),
            ratio: ratio.clone(),
        })
        .collect()
}

/// First repeat in `phi_1, omega_1, phi_2, omega_2, ...`.
pub fn find_reflection(phis: &[IncrementFactor], omegas: &[OmegaState]) -> Result<Reflection> {
    #[derive(Clone, Copy, PartialEq, Eq, Debug)]
    enum Slot {
        Phi(usize),
        Omega(usize),
    }
    let mut seen: HashMap<(&BigInt, &BigInt), Slot> = HashMap::new();
    for (i, phi) in phis.iter().enumerate() {
        let k = i + 1;
        if let Some(&slot) = seen.get(&phi_key(phi)) {
            if k >= 2 && slot == Slot::Omega(k - 1) {
                return Ok(Reflection {
                    case: ReflectionCase::I,
                    k,
                });
            }
            return Err(Error::Falsified(format!(
                "phi_{k} first meets {slot:?}, not omega_{}",
                k - 1
            )));
        }
        seen.insert(phi_key(phi), Slot::Phi(k));

        let Some(omega) = omegas.get(i) else { break };
        if let Some(&slot) = seen.get(&omega.key()) {
            if slot == Slot::Phi(k) {
                return Ok(Reflection {
                    case: ReflectionCase::II,
                    k,
                });
            }
            return Err(Error::Falsified(format!(
                "omega_{k} first meets {slot:?}, not phi_{k}"
            )));
        }
        seen.insert(omega.key(), Slot::Omega(k));
    }
    Err(Error::Falsified(
        "no reflection inside the recorded states".into(),
    ))
}

/// The equalities forced by a reflection at `k`: the mirrored quotient pairs,
/// `I_l = 2*a_0` and `phi_{l+1} = phi_1`, with `l = 2k - 2` (case I) or
/// `2k - 1` (case II). Returns the mirrored pairs.
pub fn reflection_matchings(e: &Expansion, refl: &Reflection) -> Result<Vec<(usize, usize)>> {
    let k = refl.k;
    let (l, offset) = match refl.case {
        ReflectionCase::I => (2 * k - 2, 2),
        ReflectionCase::II => (2 * k - 1, 1),
    };
    if e.preperiod.len() != 1 || e.period.len() != l {
        return Err(Error::Falsified(format!(
            "reflection at k = {k} predicts period {l}, found {}",
            e.period.len()
        )));
    }
    let q = |i: usize| e.quotient(i).expect("periodic");
    let mut pairs = Vec::new();
    // I_{k+j} = I_{k-offset-j} down to I_1, with phi_{k+j+1} = omega_{k-offset-j}
    for j in 0..k.saturating_sub(offset) {
        let (hi, lo) = (k + j, k - offset - j);
        if q(hi) != q(lo) {
            return Err(Error::Falsified(format!("I_{hi} != I_{lo}")));
        }
        let phi = &e.states[hi];
        let omega_mu = &e.states[lo - 1].mu;
        let omega_lambda = &e.states[lo].lambda;
        if &phi.mu != omega_mu || &phi.lambda != omega_lambda {
            return Err(Error::Falsified(format!("phi_{} != omega_{lo}", hi + 1)));
        }
        pairs.push((hi, lo));
    }
    let a0 = &e.preperiod[0];
    if *q(l) != a0 * 2 {
        return Err(Error::Falsified(format!("I_{l} != 2 * {a0}")));
    }
    if !e.states[l].same_logos(&e.states[0]) {
        return Err(Error::Falsified(format!("phi_{} != phi_1", l + 1)));
    }
    Ok(pairs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodStats {
    pub period_length: usize,
    /// Distinct `(mu, lambda)` states inside one period.
    pub distinct_logoi: usize,
    /// `distinct_logoi + 1`.
    pub platonic_number: usize,
}

pub fn period_stats(e: &Expansion) -> Result<PeriodStats> {
    let l = e.period.len();
    if l == 0 {
        return Err(Error::EmptyPeriod);
    }
    let start = e.preperiod.len();
    let window = e.states.get(start..start + l).ok_or(Error::MissingStates)?;
    let distinct: HashSet<(&BigInt, &BigInt)> = window.iter().map(|s| (&s.mu, &s.lambda)).collect();
    Ok(PeriodStats {
        period_length: l,
        distinct_logoi: distinct.len(),
        platonic_number: distinct.len() + 1,
    })
}

/// Full omega-route analysis of an expansion of `sqrt(r)`: the reflection and
/// the mirrored quotient pairs it forces.
pub fn reflection_of(e: &Expansion) -> Result<(Reflection, Vec<(usize, usize)>)> {
    let ratio = e.sqrt_ratio().ok_or(Error::MissingStates)?.clone();
    if !(ratio > Rational::one())
        || e.states.is_empty()
        || e.integer_part().is_none_or(|a| !a.is_positive())
    {
        return Err(Error::MissingStates);
    }
    reflect(e, &ratio, true)
}
