//! Convergents `p_k / q_k` of an expansion and the fundamental Pell solution
//! read off the end of the period.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::engine::{expand_sqrt, Expansion, StepLimit};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigInt,
    pub q: BigInt,
    pub index: usize,
}

/// The first `count` convergents (fewer if the expansion is finite).
pub fn convergents(e: &Expansion, count: usize) -> Vec<Convergent> {
    // seeds p_{-1}/q_{-1} = 1/0, p_{-2}/q_{-2} = 0/1
    let (mut p1, mut p2) = (BigInt::one(), BigInt::zero());
    let (mut q1, mut q2) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::with_capacity(count);
    for (index, a) in e.quotients().take(count).enumerate() {
        let p = a * &p1 + &p2;
        let q = a * &q1 + &q2;
        p2 = std::mem::replace(&mut p1, p.clone());
        q2 = std::mem::replace(&mut q1, q.clone());
        out.push(Convergent { p, q, index });
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PellSolution {
    pub x: BigInt,
    pub y: BigInt,
    /// Solution of `x^2 - N*y^2 = -1`, present exactly when the period is odd.
    pub negative: Option<(BigInt, BigInt)>,
}

/// Smallest positive `(x, y)` with `x^2 - n*y^2 = 1`.
pub fn pell_fundamental(n: &BigInt) -> Result<PellSolution> {
    let e = expand_sqrt(n, &StepLimit::default())?;
    pell_from_expansion(n, &e)
}

/// As [`pell_fundamental`], reusing an expansion of `sqrt(n)`.
pub fn pell_from_expansion(n: &BigInt, e: &Expansion) -> Result<PellSolution> {
    if e.terminated {
        return Err(Error::PerfectSquare(n.clone()));
    }
    let l = e.period_len();
    let end = if l.is_multiple_of(2) { l } else { 2 * l };
    let cs = convergents(e, end);
    let c = cs.last().ok_or(Error::EmptyPeriod)?;
    if &c.p * &c.p - n * &c.q * &c.q != BigInt::one() {
        return Err(Error::Falsified(format!("{}^2 - {n}*{}^2 != 1", c.p, c.q)));
    }
    let negative = if l % 2 == 1 {
        let h = &cs[l - 1];
        if &h.p * &h.p - n * &h.q * &h.q != -BigInt::one() {
            return Err(Error::Falsified(format!("{}^2 - {n}*{}^2 != -1", h.p, h.q)));
        }
        Some((h.p.clone(), h.q.clone()))
    } else {
        None
    };
    Ok(PellSolution {
        x: c.p.clone(),
        y: c.q.clone(),
        negative,
    })
}
