//! Dense univariate polynomials in q over an exact coefficient ring, and
//! quotients of them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficients in ascending powers of q, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

/// Exact coefficient rings.
pub trait Ring: Clone + Zero + One + PartialEq + Sub<Output = Self> {}
impl<T: Clone + Zero + One + PartialEq + Sub<Output = T>> Ring for T {}

pub type CountPolynomial = Poly<BigInt>;
pub type RatPoly = Poly<BigRational>;

impl<T> Poly<T>
where
    T: Ring,
{
    pub fn from_coeffs(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// c·q^n.
    pub fn monomial(c: T, n: usize) -> Self {
        let mut v = vec![T::zero(); n + 1];
        v[n] = c;
        Self::from_coeffs(v)
    }

    /// q^n − c.
    pub fn q_pow_minus(n: usize, c: T) -> Self {
        &Self::monomial(T::one(), n) - &Self::constant(c)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, q: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * q.clone() + c.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn product<'a>(items: impl IntoIterator<Item = &'a Self>) -> Self
    where
        T: 'a,
    {
        items.into_iter().fold(Self::one(), |acc, p| &acc * p)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = T::zero();
        Self::from_coeffs((0..n).map(|i| f(self.coeffs.get(i).unwrap_or(&z), other.coeffs.get(i).unwrap_or(&z))).collect())
    }
}

impl<'a, T> Add<&'a Poly<T>> for &'a Poly<T>
where
    T: Ring,
{
    type Output = Poly<T>;
    fn add(self, other: &'a Poly<T>) -> Poly<T> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }
}

impl<'a, T> Sub<&'a Poly<T>> for &'a Poly<T>
where
    T: Ring,
{
    type Output = Poly<T>;
    fn sub(self, other: &'a Poly<T>) -> Poly<T> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }
}

impl<'a, T> Mul<&'a Poly<T>> for &'a Poly<T>
where
    T: Ring,
{
    type Output = Poly<T>;
    fn mul(self, other: &'a Poly<T>) -> Poly<T> {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(out)
    }
}

impl<T> Neg for &Poly<T>
where
    T: Ring,
{
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        &Poly::zero() - self
    }
}

impl RatPoly {
    /// (quotient, remainder) of Euclidean division.
    pub fn div_rem(&self, d: &RatPoly) -> Result<(RatPoly, RatPoly)> {
        let dd = d.degree().ok_or_else(|| Error::Precondition("division by the zero polynomial".into()))?;
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap() / &lead;
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] = &rem[k + i] - &(&c * dc);
            }
            quo[k] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        Ok((Poly::from_coeffs(quo), Poly::from_coeffs(rem)))
    }

    /// self / d when the division leaves no remainder.
    pub fn div_exact(&self, d: &RatPoly) -> Result<RatPoly> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::NonIntegral(format!("({self}) / ({d}) leaves remainder {r}")));
        }
        Ok(q)
    }

    /// The same polynomial when every coefficient is an integer.
    pub fn to_integer(&self) -> Result<CountPolynomial> {
        self.coeffs
            .iter()
            .map(|c| if c.is_integer() { Ok(c.to_integer()) } else { Err(Error::NonIntegral(format!("coefficient {c} in {self}"))) })
            .collect::<Result<Vec<_>>>()
            .map(Poly::from_coeffs)
    }
}

impl From<&CountPolynomial> for RatPoly {
    fn from(p: &CountPolynomial) -> RatPoly {
        Poly::from_coeffs(p.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }
}

impl CountPolynomial {
    pub fn eval_u64(&self, q: u64) -> BigInt {
        self.eval(&BigInt::from(q))
    }
}

/// num/den over ℚ, kept unreduced; [`RationalCount::to_polynomial`] divides exactly.
#[derive(Clone, Debug)]
pub struct RationalCount {
    pub num: RatPoly,
    pub den: RatPoly,
}

impl RationalCount {
    pub fn new(num: RatPoly, den: RatPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Precondition("zero denominator".into()));
        }
        Ok(RationalCount { num, den })
    }

    pub fn from_poly(p: RatPoly) -> Self {
        RationalCount { num: p, den: RatPoly::one() }
    }

    pub fn from_count(p: &CountPolynomial) -> Self {
        Self::from_poly(p.into())
    }

    pub fn zero() -> Self {
        Self::from_poly(RatPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(RatPoly::one())
    }

    pub fn mul(&self, other: &RationalCount) -> RationalCount {
        RationalCount { num: &self.num * &other.num, den: &self.den * &other.den }
    }

    pub fn div(&self, other: &RationalCount) -> Result<RationalCount> {
        RationalCount::new(&self.num * &other.den, &self.den * &other.num)
    }

    pub fn add(&self, other: &RationalCount) -> RationalCount {
        if self.den == other.den {
            return RationalCount { num: &self.num + &other.num, den: self.den.clone() };
        }
        RationalCount { num: &(&self.num * &other.den) + &(&other.num * &self.den), den: &self.den * &other.den }
    }

    pub fn scale(&self, c: &BigRational) -> RationalCount {
        RationalCount { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Equality as rational functions.
    pub fn same_as(&self, other: &RationalCount) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    /// Exact quotient in ℚ[q].
    pub fn to_polynomial(&self) -> Result<RatPoly> {
        self.num.div_exact(&self.den)
    }

    /// Exact quotient with integer coefficients.
    pub fn to_count_polynomial(&self) -> Result<CountPolynomial> {
        self.to_polynomial()?.to_integer()
    }
}

fn render<T: fmt::Display + Signed + One + PartialEq>(coeffs: &[T], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if coeffs.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        let unit = a.is_one();
        match (i, unit) {
            (0, _) => write!(f, "{a}")?,
            (1, true) => write!(f, "q")?,
            (1, false) => write!(f, "{a}*q")?,
            (_, true) => write!(f, "q^{i}")?,
            (_, false) => write!(f, "{a}*q^{i}")?,
        }
    }
    Ok(())
}

impl fmt::Display for CountPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        render(&self.coeffs, f)
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        render(&self.coeffs, f)
    }
}
