//! Symbolic lines and areas over two lines `alpha`, `beta` with
//! `alpha^2 = ratio * beta^2`, `ratio` a positive non-square rational.
//!
//! A [`SurdLine`] is `c_alpha*alpha + c_beta*beta`. Multiplying two lines gives
//! a [`SurdArea`] `c_ab*alpha*beta + c_bb*beta^2`, with `alpha^2` always folded
//! back into `beta^2`. Equality of areas is coefficient-wise, which is exactly
//! the cross-multiplication form of "same ratio".
//!
//! Apotomes (`zeta - eta`) and binomials (`zeta + eta`) are conjugate: their
//! product is a rational multiple of `beta^2`, which is what makes exact
//! inversion possible.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::engine::{pigeonhole_bound, StepLimit};
use crate::error::{Error, Result};
use crate::surd::{
    exact_sqrt, floor_surd, is_rational_square, isqrt, sign_of, QuadraticSurd, Rational,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurdLine {
    c_alpha: Rational,
    c_beta: Rational,
    ratio: Rational,
}

impl SurdLine {
    pub fn new(c_alpha: Rational, c_beta: Rational, ratio: Rational) -> Result<Self> {
        if !ratio.is_positive() {
            return Err(Error::NonPositiveRatio(ratio.to_string()));
        }
        if is_rational_square(&ratio) {
            return Err(Error::SquareRatio(ratio.to_string()));
        }
        Ok(Self {
            c_alpha,
            c_beta,
            ratio,
        })
    }

    /// Integer combination `a*alpha + b*beta`.
    pub fn integer(a: impl Into<BigInt>, b: impl Into<BigInt>, ratio: &Rational) -> Result<Self> {
        Self::new(
            Rational::from_integer(a.into()),
            Rational::from_integer(b.into()),
            ratio.clone(),
        )
    }

    /// `(a*alpha + b*beta) / lambda`
    pub fn scaled(a: &BigInt, b: &BigInt, lambda: &BigInt, ratio: &Rational) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Self::new(
            Rational::new(a.clone(), lambda.clone()),
            Rational::new(b.clone(), lambda.clone()),
            ratio.clone(),
        )
    }

    pub fn beta(ratio: &Rational) -> Result<Self> {
        Self::integer(0, 1, ratio)
    }

    pub fn alpha(ratio: &Rational) -> Result<Self> {
        Self::integer(1, 0, ratio)
    }

    pub fn c_alpha(&self) -> &Rational {
        &self.c_alpha
    }

    pub fn c_beta(&self) -> &Rational {
        &self.c_beta
    }

    pub fn ratio(&self) -> &Rational {
        &self.ratio
    }

    pub fn is_zero(&self) -> bool {
        self.c_alpha.is_zero() && self.c_beta.is_zero()
    }

    /// Sign of the real length.
    pub fn sign(&self) -> Ordering {
        // the ratio was validated at construction
        sign_of(&self.c_alpha, &self.c_beta, &self.ratio).expect("validated ratio")
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    fn check_ratio(&self, other: &Self) -> Result<()> {
        if self.ratio != other.ratio {
            return Err(Error::MismatchedRatio(
                self.ratio.to_string(),
                other.ratio.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ratio(other)?;
        Ok(Self {
            c_alpha: &self.c_alpha + &other.c_alpha,
            c_beta: &self.c_beta + &other.c_beta,
            ratio: self.ratio.clone(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_ratio(other)?;
        Ok(Self {
            c_alpha: &self.c_alpha - &other.c_alpha,
            c_beta: &self.c_beta - &other.c_beta,
            ratio: self.ratio.clone(),
        })
    }

    pub fn times(&self, k: &Rational) -> Self {
        Self {
            c_alpha: &self.c_alpha * k,
            c_beta: &self.c_beta * k,
            ratio: self.ratio.clone(),
        }
    }

    /// Whole number of `beta`s contained in a positive line (its anthyphairetic quotient).
    pub fn beta_floor(&self) -> BigInt {
        // c_a*alpha + c_b*beta = (b + sqrt(ratio * a^2)) / L with a = c_a*L, b = c_b*L
        // integers; sqrt(u/v) = sqrt(u*v)/v. Only valid for c_a >= 0.
        debug_assert!(!self.c_alpha.is_negative());
        let l = self.c_alpha.denom().lcm(self.c_beta.denom());
        let a = &self.c_alpha * Rational::from_integer(l.clone());
        let b = (&self.c_beta * Rational::from_integer(l.clone())).to_integer();
        let rad = &self.ratio * &a * &a;
        let v = rad.denom();
        let surd =
            QuadraticSurd::new(b * v, rad.numer() * v, &l * v).expect("non-zero denominator");
        floor_surd(&surd)
    }
}

impl fmt::Display for SurdLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // common denominator form: (a*alpha + b*beta)/l
        let l = self.c_alpha.denom().lcm(self.c_beta.denom());
        let a = (&self.c_alpha * Rational::from_integer(l.clone())).to_integer();
        let b = (&self.c_beta * Rational::from_integer(l.clone())).to_integer();
        let body = render_combination(&a, &b);
        if l.is_one() {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{l}")
        }
    }
}

/// `alpha - 7beta`, `9beta - 2alpha`, `beta`, `0` ... in the order the positive term leads.
pub fn render_combination(a: &BigInt, b: &BigInt) -> String {
    fn term(c: &BigInt, name: &str) -> String {
        let mag = c.abs();
        if mag.is_one() {
            name.to_string()
        } else {
            format!("{mag}{name}")
        }
    }
    match (a.is_zero(), b.is_zero()) {
        (true, true) => "0".to_string(),
        (false, true) => format!(
            "{}{}",
            if a.is_negative() { "-" } else { "" },
            term(a, "alpha")
        ),
        (true, false) => format!(
            "{}{}",
            if b.is_negative() { "-" } else { "" },
            term(b, "beta")
        ),
        (false, false) => {
            if a.is_negative() && b.is_positive() {
                format!("{} - {}", term(b, "beta"), term(a, "alpha"))
            } else {
                let lead = if a.is_negative() { "-" } else { "" };
                let op = if b.is_negative() { "-" } else { "+" };
                format!("{lead}{} {op} {}", term(a, "alpha"), term(b, "beta"))
            }
        }
    }
}

/// `c_ab*alpha*beta + c_bb*beta^2`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurdArea {
    pub c_ab: Rational,
    pub c_bb: Rational,
}

impl SurdArea {
    /// `k * beta^2`
    pub fn beta_squared(k: Rational) -> Self {
        Self {
            c_ab: Rational::zero(),
            c_bb: k,
        }
    }

    /// `Some(k)` when the area is a pure multiple `k * beta^2`.
    pub fn as_beta_squared(&self) -> Option<&Rational> {
        self.c_ab.is_zero().then_some(&self.c_bb)
    }
}

impl fmt::Display for SurdArea {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*alpha*beta + {}*beta^2", self.c_ab, self.c_bb)
    }
}

pub fn line_mul(u: &SurdLine, v: &SurdLine) -> Result<SurdArea> {
    u.check_ratio(v)?;
    Ok(SurdArea {
        c_ab: &u.c_alpha * &v.c_beta + &u.c_beta * &v.c_alpha,
        c_bb: &u.c_alpha * &v.c_alpha * &u.ratio + &u.c_beta * &v.c_beta,
    })
}

/// Apotome <-> line of two names.
pub fn conjugate(u: &SurdLine) -> SurdLine {
    SurdLine {
        c_alpha: u.c_alpha.clone(),
        c_beta: -&u.c_beta,
        ratio: u.ratio.clone(),
    }
}

/// The line `v` with `u * v = beta^2`: the conjugate of `u` divided by the
/// rational `u * u^*`.
pub fn inverse_wrt_beta_squared(u: &SurdLine) -> Result<SurdLine> {
    if u.is_zero() {
        return Err(Error::ZeroLine);
    }
    let norm = &u.c_alpha * &u.c_alpha * &u.ratio - &u.c_beta * &u.c_beta;
    // norm == 0 would need ratio to be a rational square
    debug_assert!(!norm.is_zero());
    Ok(conjugate(u).times(&norm.recip()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LineClass {
    Apotome,
    Binomial,
    RationalMultiple,
    Other,
}

impl fmt::Display for LineClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LineClass::Apotome => "apotome",
            LineClass::Binomial => "binomial",
            LineClass::RationalMultiple => "rational multiple",
            LineClass::Other => "other",
        })
    }
}

pub fn classify(u: &SurdLine) -> LineClass {
    if u.c_alpha.is_zero() || u.c_beta.is_zero() {
        return LineClass::RationalMultiple;
    }
    if !u.is_positive() {
        return LineClass::Other;
    }
    match (u.c_alpha.is_positive(), u.c_beta.is_positive()) {
        (true, true) => LineClass::Binomial,
        _ => LineClass::Apotome,
    }
}

/// `a1 : a2 = b1 : b2`, decided as `a1 * b2 == a2 * b1`.
pub fn logos_cross_check(
    a1: &SurdLine,
    a2: &SurdLine,
    b1: &SurdLine,
    b2: &SurdLine,
) -> Result<bool> {
    a1.check_ratio(a2)?;
    a1.check_ratio(b1)?;
    a1.check_ratio(b2)?;
    Ok(line_mul(a1, b2)? == line_mul(a2, b1)?)
}

/// The inversion half of a division step: `phi -> phi^* -> psi = 1/phi -> I, next phi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inversion {
    /// Index `k` of the factor being inverted.
    pub inverted: usize,
    /// `lambda_k * phi_k^* = alpha + mu_k*beta`
    pub conjugate: SurdLine,
    /// `(alpha - mu_k*beta)(alpha + mu_k*beta) = conjugacy_product * beta^2`
    pub conjugacy_product: BigInt,
    /// `lambda_{k+1} * psi_k = alpha + mu_k*beta`
    pub psi: SurdLine,
    pub psi_lambda: BigInt,
    /// `I_k` is the integral part of `floor_numerator / psi_lambda`.
    pub floor_numerator: BigInt,
}

/// One division step of the trace. Step 1 produces `phi_1 = alpha - mu_1*beta`;
/// every later step inverts the previous factor and reads off the next one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub index: usize,
    /// `mu_1` on step 1, `I_{index-1}` afterwards.
    pub quotient: BigInt,
    pub inversion: Option<Inversion>,
    /// `phi_index`, with `lambda * phi = alpha - mu*beta`.
    pub phi: SurdLine,
    pub lambda: BigInt,
    pub mu: BigInt,
    pub class: LineClass,
    /// Earlier step whose factor equals this one.
    pub repeats: Option<usize>,
}

/// Symbolic replay of the anthyphairesis of `alpha, beta` with `alpha^2 = n*beta^2`,
/// done purely with line algebra (conjugate, invert, take whole betas).
pub fn euler_trace(n: &BigInt, limits: &StepLimit) -> Result<Vec<TraceStep>> {
    if n.is_negative() {
        return Err(Error::NegativeInput(n.clone()));
    }
    if exact_sqrt(n).is_some() {
        return Err(Error::PerfectSquare(n.clone()));
    }
    let ratio = Rational::from_integer(n.clone());
    let limit = limits.resolve(pigeonhole_bound(n)? + 1u32);
    let m = isqrt(n)?;
    let alpha = SurdLine::alpha(&ratio)?;
    let beta = SurdLine::beta(&ratio)?;

    let mut phi = alpha.sub(&beta.times(&Rational::from_integer(m.clone())))?;
    let mut seen: HashMap<SurdLine, usize> = HashMap::new();
    let mut steps = Vec::new();
    let mut quotient = m.clone();
    let mut inversion = None;
    for index in 1.. {
        if index as u64 > limit {
            return Err(Error::StepLimit { limit });
        }
        let (lambda, mu) = apotome_parameters(&phi)?;
        let repeats = seen.get(&phi).copied();
        steps.push(TraceStep {
            index,
            quotient: quotient.clone(),
            inversion: inversion.take(),
            phi: phi.clone(),
            lambda: lambda.clone(),
            mu: mu.clone(),
            class: classify(&phi),
            repeats,
        });
        if repeats.is_some() {
            break;
        }
        seen.insert(phi.clone(), index);

        let conj = conjugate(&phi);
        let psi = inverse_wrt_beta_squared(&phi)?;
        let i_k = psi.beta_floor();
        let psi_lambda = psi.c_alpha().recip().to_integer();
        inversion = Some(Inversion {
            inverted: index,
            conjugate: conj,
            conjugacy_product: (n - &mu * &mu),
            psi: psi.clone(),
            psi_lambda,
            floor_numerator: &m + &mu,
        });
        phi = psi.sub(&beta.times(&Rational::from_integer(i_k.clone())))?;
        quotient = i_k;
    }
    Ok(steps)
}

/// `(lambda, mu)` with `lambda * phi = alpha - mu*beta`.
fn apotome_parameters(phi: &SurdLine) -> Result<(BigInt, BigInt)> {
    let lambda_r = phi.c_alpha().recip();
    if !lambda_r.is_integer() || !lambda_r.is_positive() {
        return Err(Error::Falsified(format!(
            "{phi} is not of the form (alpha - mu*beta)/lambda"
        )));
    }
    let mu_r = -(phi.c_beta() * &lambda_r);
    if !mu_r.is_integer() {
        return Err(Error::Falsified(format!("{phi} has a fractional mu")));
    }
    Ok((lambda_r.to_integer(), mu_r.to_integer()))
}

fn scaled_name(k: &BigInt, name: &str) -> String {
    if k.is_one() {
        name.to_string()
    } else {
        format!("{k}{name}")
    }
}

/// Text table of a trace, one row per division step and a closing Logos row.
pub fn render_trace(n: &BigInt, steps: &[TraceStep]) -> String {
    let mut out = format!("anthyphairesis of alpha, beta with alpha^2 = {n}beta^2\n");
    for step in steps {
        let k = step.index;
        let phi = format!(
            "{} = {}",
            scaled_name(&step.lambda, &format!("phi_{k}")),
            render_combination(&BigInt::one(), &-&step.mu)
        );
        let row = match &step.inversion {
            None => format!(
                "step {k} | mu_{k} = {} | {phi} | {}",
                step.quotient, step.class
            ),
            Some(inv) => {
                let j = inv.inverted;
                let mu_prev = &steps[j - 1].mu;
                let conj = render_combination(&BigInt::one(), mu_prev);
                format!(
                    "step {k} | ({})({conj}) = {} | {} = {conj} | I_{j} = [{}/{}] = {} | {phi} | {}",
                    render_combination(&BigInt::one(), &-mu_prev),
                    scaled_name(&inv.conjugacy_product, "beta^2"),
                    scaled_name(&inv.psi_lambda, &format!("psi_{j}")),
                    inv.floor_numerator,
                    inv.psi_lambda,
                    step.quotient,
                    step.class
                )
            }
        };
        out.push_str(&row);
        out.push('\n');
    }
    if let Some(last) = steps.last() {
        if let Some(first) = last.repeats {
            out.push_str(&format!(
                "phi_{} = phi_{first} (Logos criterion: period {})\n",
                last.index,
                last.index - first
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn line(a: i64, b: i64, ratio: i64) -> SurdLine {
        SurdLine::integer(a, b, &r(ratio)).unwrap()
    }

    #[test]
    fn products() {
        let p = line_mul(&line(1, -7, 54), &line(1, 7, 54)).unwrap();
        assert_eq!(p, SurdArea::beta_squared(r(5)));

        let p = line_mul(&line(1, -4, 19), &line(-39, 170, 19)).unwrap();
        assert_eq!(p.c_ab, r(326));
        assert_eq!(p.c_bb, r(-1421));

        let p = line_mul(&line(0, 1, 7), &line(0, 1, 7)).unwrap();
        assert_eq!(p, SurdArea::beta_squared(r(1)));

        assert!(matches!(
            line_mul(&line(1, 1, 2), &line(1, 1, 3)),
            Err(Error::MismatchedRatio(_, _))
        ));
    }

    #[test]
    fn conjugates() {
        assert_eq!(conjugate(&line(1, -7, 54)), line(1, 7, 54));
        let u = line(3, -11, 13);
        assert_eq!(conjugate(&conjugate(&u)), u);
        assert_eq!(conjugate(&line(0, 3, 5)), line(0, -3, 5));
        assert!(line_mul(&u, &conjugate(&u)).unwrap().c_ab.is_zero());
    }

    #[test]
    fn inverses() {
        let psi1 = inverse_wrt_beta_squared(&line(1, -7, 54)).unwrap();
        assert_eq!(
            psi1,
            line(1, 7, 54).times(&Rational::new(1.into(), 5.into()))
        );
        assert_eq!(psi1.to_string(), "(alpha + 7beta)/5");

        let phi3 = SurdLine::scaled(&1.into(), &(-6).into(), &9.into(), &r(54)).unwrap();
        let psi3 = inverse_wrt_beta_squared(&phi3).unwrap();
        assert_eq!(psi3.to_string(), "(alpha + 6beta)/2");

        let v = inverse_wrt_beta_squared(&line(0, 2, 3)).unwrap();
        assert_eq!(v, line(0, 1, 3).times(&Rational::new(1.into(), 2.into())));

        assert_eq!(
            inverse_wrt_beta_squared(&line(0, 0, 3)),
            Err(Error::ZeroLine)
        );
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&line(1, -7, 54)), LineClass::Apotome);
        assert_eq!(classify(&line(1, 7, 54)), LineClass::Binomial);
        assert_eq!(classify(&line(-1, 7, 54)), LineClass::Other);
        assert_eq!(classify(&line(0, 3, 54)), LineClass::RationalMultiple);
        assert_eq!(classify(&line(-1, -7, 54)), LineClass::Other);
        // 9beta - 2alpha is positive for ratio 19 and has a negative alpha part
        assert_eq!(classify(&line(-2, 9, 19)), LineClass::Apotome);
    }

    #[test]
    fn square_ratio_rejected() {
        assert!(matches!(
            SurdLine::integer(1, 1, &r(16)),
            Err(Error::SquareRatio(_))
        ));
        assert!(matches!(
            SurdLine::integer(1, 1, &r(0)),
            Err(Error::NonPositiveRatio(_))
        ));
    }

    #[test]
    fn logos_check_for_19() {
        let b = SurdLine::beta(&r(19)).unwrap();
        let e1 = line(1, -4, 19);
        let e5 = line(14, -61, 19);
        let e6 = line(-39, 170, 19);
        let e7 = line(326, -1421, 19);
        assert!(logos_cross_check(&b, &e1, &e6, &e7).unwrap());
        // b*e7 = 326ab - 1421b^2 but e1*e5 = 510b^2 - 117ab
        assert_eq!(line_mul(&e1, &e5).unwrap().c_ab, r(-117));
        assert!(!logos_cross_check(&b, &e1, &e5, &e7).unwrap());
        assert!(logos_cross_check(&e1, &e6, &e1, &e6).unwrap());
    }

    #[test]
    fn beta_floor_matches_known_quotients() {
        let psi1 = inverse_wrt_beta_squared(&line(1, -7, 54)).unwrap();
        assert_eq!(psi1.beta_floor(), BigInt::from(2));
        assert_eq!(line(1, 0, 19).beta_floor(), BigInt::from(4));
        let half = SurdLine::new(
            Rational::new(1.into(), 3.into()),
            r(0),
            Rational::new(7.into(), 2.into()),
        )
        .unwrap();
        // sqrt(7/2)/3 = 0.62...
        assert_eq!(half.beta_floor(), BigInt::from(0));
    }

    #[test]
    fn trace_of_54() {
        let steps = euler_trace(&BigInt::from(54), &StepLimit::default()).unwrap();
        assert_eq!(steps.len(), 7);
        let lm: Vec<(i64, i64)> = steps
            .iter()
            .map(|s| {
                (
                    s.lambda.clone().try_into().unwrap(),
                    s.mu.clone().try_into().unwrap(),
                )
            })
            .collect();
        assert_eq!(
            lm,
            vec![(1, 7), (5, 3), (9, 6), (2, 6), (9, 3), (5, 7), (1, 7)]
        );
        let q: Vec<i64> = steps
            .iter()
            .skip(1)
            .map(|s| s.quotient.clone().try_into().unwrap())
            .collect();
        assert_eq!(q, vec![2, 1, 6, 1, 2, 14]);
        assert_eq!(steps[6].repeats, Some(1));
        assert!(steps.iter().all(|s| s.class == LineClass::Apotome));
        let text = render_trace(&BigInt::from(54), &steps);
        assert!(text.contains("5psi_1 = alpha + 7beta"));
        assert!(text.contains("I_1 = [14/5] = 2"));
        assert!(text.contains("5phi_2 = alpha - 3beta"));
        assert!(text.contains("2psi_3 = alpha + 6beta"));
        assert!(text.ends_with("phi_7 = phi_1 (Logos criterion: period 6)\n"));
    }

    #[test]
    fn trace_of_2() {
        let steps = euler_trace(&BigInt::from(2), &StepLimit::default()).unwrap();
        assert_eq!(steps.len(), 2);
        assert_eq!(steps[1].repeats, Some(1));
        assert!(matches!(
            euler_trace(&BigInt::from(9), &StepLimit::default()),
            Err(Error::PerfectSquare(_))
        ));
    }

    proptest! {
        #[test]
        fn inverse_is_involutive(
            a in -500i64..500, b in -500i64..500,
            da in 1i64..50, db in 1i64..50, n in 2i64..300,
        ) {
            prop_assume!(!is_rational_square(&r(n)));
            prop_assume!(a != 0 || b != 0);
            let u = SurdLine::new(
                Rational::new(a.into(), da.into()),
                Rational::new(b.into(), db.into()),
                r(n),
            ).unwrap();
            let v = inverse_wrt_beta_squared(&u).unwrap();
            prop_assert_eq!(line_mul(&u, &v).unwrap(), SurdArea::beta_squared(r(1)));
            prop_assert_eq!(inverse_wrt_beta_squared(&v).unwrap(), u);
        }
    }
}
