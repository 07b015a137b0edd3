//! Exact point counts as polynomials in q: orders of classical groups,
//! nondegenerate subspace and flag counts, |E²_*|, and piece cardinalities.

mod oracle;
mod poly;
mod suite;

pub use oracle::*;
pub use suite::*;
pub use poly::{CountPolynomial, Poly, RatPoly, RationalCount};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::filtration::PieceLabel;
use crate::quadspace::FormType;

fn int(c: i64) -> BigInt {
    BigInt::from(c)
}

fn q_pow_minus(n: usize, c: i64) -> CountPolynomial {
    Poly::q_pow_minus(n, int(c))
}

fn q_pow(n: usize) -> CountPolynomial {
    Poly::monomial(int(1), n)
}

fn parity_error(what: &str, m: usize) -> Error {
    Error::Precondition(format!("{what} is undefined at m = {m}"))
}

/// P_m = q^((m−1)²/4)(q²−1)(q⁴−1)⋯(q^(m−1)−1) for odd m.
pub fn poly_p(m: usize) -> Result<CountPolynomial> {
    if m % 2 == 0 {
        return Err(parity_error("P_m", m));
    }
    let h = (m - 1) / 2;
    let factors: Vec<_> = (1..=h).map(|i| q_pow_minus(2 * i, 1)).collect();
    Ok(&q_pow(h * h) * &Poly::product(&factors))
}

/// P_m^δ = q^(m(m−2)/4)(q²−1)⋯(q^(m−2)−1)(q^(m/2)−δ) for even m ≥ 2.
pub fn poly_pd(m: usize, delta: i8) -> Result<CountPolynomial> {
    if m % 2 == 1 || m < 2 || delta.abs() != 1 {
        return Err(parity_error("P_m^δ", m));
    }
    let h = m / 2;
    let factors: Vec<_> = (1..h).map(|i| q_pow_minus(2 * i, 1)).collect();
    Ok(&(&q_pow(h * (h - 1)) * &Poly::product(&factors)) * &q_pow_minus(h, delta as i64))
}

/// R_m = q^(m²/4)(q²−1)⋯(q^m−1) = |Sp_m(q)| for even m.
pub fn poly_r(m: usize) -> Result<CountPolynomial> {
    if m % 2 == 1 {
        return Err(parity_error("R_m", m));
    }
    let h = m / 2;
    let factors: Vec<_> = (1..=h).map(|i| q_pow_minus(2 * i, 1)).collect();
    Ok(&q_pow(h * h) * &Poly::product(&factors))
}

/// A_m = q^(m(m−1)/2)(q−1)⋯(q^m−1) = |GL_m(q)|.
pub fn poly_a(m: usize) -> CountPolynomial {
    let factors: Vec<_> = (1..=m).map(|i| q_pow_minus(i, 1)).collect();
    &q_pow(m * m.saturating_sub(1) / 2) * &Poly::product(&factors)
}

/// The isometry type recorded for a nondegenerate space: η for even
/// dimension, `Star` for odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Eta(i8),
    Star,
}

impl Side {
    fn fits(self, dim: usize) -> bool {
        match self {
            Side::Star => dim % 2 == 1,
            Side::Eta(e) => dim % 2 == 0 && e.abs() == 1,
        }
    }

    pub fn of_type(t: FormType) -> Side {
        t.eta().map_or(Side::Star, Side::Eta)
    }
}

/// Deliberate corruptions of the formulas, used to show that the oracle
/// comparisons can fail.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FormulaMutation {
    /// Use P_(s/2−k) in place of P_(s−k) when counting odd subspaces of an even space.
    pub literal_t_minus_k: bool,
}

/// Evaluates the count formulas, optionally with a [`FormulaMutation`].
#[derive(Clone, Copy, Debug, Default)]
pub struct Counter {
    pub mutation: FormulaMutation,
}

fn rc(p: CountPolynomial) -> RationalCount {
    RationalCount::from_count(&p)
}

fn half() -> BigRational {
    BigRational::new(int(1), int(2))
}

impl Counter {
    pub fn mutated(mutation: FormulaMutation) -> Self {
        Counter { mutation }
    }

    /// The number of k-dimensional subspaces with nondegenerate restriction of
    /// type `right` inside a nondegenerate s-dimensional space of type `left`.
    pub fn count_n(&self, s: usize, k: usize, left: Side, right: Side) -> Result<RationalCount> {
        if !left.fits(s) || k > s {
            return Err(Error::Precondition(format!("no count N_({s},{k}) with types {left:?}, {right:?}")));
        }
        if k == 0 {
            return Ok(RationalCount::one());
        }
        if !right.fits(k) {
            return Err(Error::Precondition(format!("type {right:?} does not fit dimension {k}")));
        }
        if k == s {
            let same = left == right || matches!(left, Side::Star);
            return Ok(if same { RationalCount::one() } else { RationalCount::zero() });
        }
        match (left, right) {
            (Side::Eta(eps), Side::Star) => {
                let rest = if self.mutation.literal_t_minus_k {
                    let t = s / 2;
                    let m = t.checked_sub(k).ok_or_else(|| parity_error("P_(t−k)", 0))?;
                    poly_p(m)?
                } else {
                    poly_p(s - k)?
                };
                rc(poly_pd(s, eps)?).div(&rc(&poly_p(k)? * &rest))
            }
            (Side::Eta(eps), Side::Eta(delta)) => {
                let den = &poly_pd(k, delta)? * &poly_pd(s - k, eps * delta)?;
                Ok(rc(poly_pd(s, eps)?).div(&rc(den))?.scale(&half()))
            }
            (Side::Star, Side::Star) => {
                let mut sum = RationalCount::zero();
                for delta in [1, -1] {
                    sum = sum.add(&rc(poly_p(s)?).div(&rc(&poly_p(k)? * &poly_pd(s - k, delta)?))?);
                }
                Ok(sum.scale(&half()))
            }
            (Side::Star, Side::Eta(delta)) => {
                let den = &poly_pd(k, delta)? * &poly_p(s - k)?;
                Ok(rc(poly_p(s)?).div(&rc(den))?.scale(&half()))
            }
        }
    }

    /// Chains U_0 ⊇ U_2 ⊇ … of nondegenerate subspaces with dim U_2n = r_2n,
    /// U_0 the whole space of type `first`.
    fn flags(&self, first: Side, r: &[usize]) -> Result<CountPolynomial> {
        ensure_descending(r)?;
        let mut seq: Vec<usize> = r.iter().copied().filter(|&x| x > 0).collect();
        seq.dedup();
        if seq.is_empty() || !first.fits(seq[0]) {
            return Err(Error::Precondition(format!("type {first:?} does not fit the sequence {r:?}")));
        }
        if seq.len() == 1 {
            return Ok(CountPolynomial::one());
        }
        // An odd interior entry cuts the flag into two independent pieces.
        if let Some(n) = (1..seq.len() - 1).find(|&n| seq[n] % 2 == 1) {
            let head = self.flags(first, &seq[..=n])?;
            let tail = self.flags(Side::Star, &seq[n..])?;
            return Ok(&head * &tail);
        }
        let even: Vec<usize> = (1..seq.len()).filter(|&i| seq[i] % 2 == 0).collect();
        let mut total = RationalCount::zero();
        for mask in 0u32..1 << even.len() {
            let mut sides = vec![first];
            for i in 1..seq.len() {
                sides.push(match even.iter().position(|&j| j == i) {
                    Some(bit) => Side::Eta(if mask >> bit & 1 == 0 { 1 } else { -1 }),
                    None => Side::Star,
                });
            }
            let mut term = RationalCount::one();
            for i in 1..seq.len() {
                term = term.mul(&self.count_n(seq[i - 1], seq[i], sides[i - 1], sides[i])?);
            }
            total = total.add(&term);
        }
        total.to_count_polynomial()
    }

    /// ν(r_0, r_2, …) for odd r_0.
    pub fn nu(&self, r: &[usize]) -> Result<CountPolynomial> {
        self.flags(Side::Star, r)
    }

    /// ν^ε(r_0, r_2, …) for even r_0 ≥ 2.
    pub fn nu_eps(&self, eps: i8, r: &[usize]) -> Result<CountPolynomial> {
        self.flags(Side::Eta(eps), r)
    }

    /// |E²_* gr| for a graded space with dimensions `label` whose degree-0 part
    /// has the type forced by `form_type`.
    pub fn card_e2star(&self, label: &PieceLabel, form_type: FormType) -> Result<CountPolynomial> {
        check_label(label, form_type)?;
        let f = |a: usize| label.f.get(a).copied().unwrap_or(0);
        let xi = match f(0) {
            0 => CountPolynomial::one(),
            f0 if f0 % 2 == 1 => self.nu(&evens(label))?,
            _ => self.nu_eps(form_type.eta().expect("even f_0 forces even dimension"), &evens(label))?,
        };
        let a_prod: Vec<_> = (1..label.f.len()).map(|a| poly_a(f(a))).collect();
        let num = &(&Poly::product(&a_prod) * &xi) * &nu_prime(&odds(label))?;
        rc(num).div(&rc(poly_r(f(1))?))?.to_count_polynomial()
    }

    /// |Ξ_φ|: the number of unipotent elements whose canonical filtration has label φ.
    pub fn card_piece(&self, label: &PieceLabel, form_type: FormType) -> Result<CountPolynomial> {
        check_label(label, form_type)?;
        if label.f[0] == 0 && form_type == FormType::NonSplit {
            return Err(Error::Precondition(format!("label {label} does not occur for a nonsplit form")));
        }
        let mut n = label.dim();
        let mut flags = CountPolynomial::one();
        for a in (1..label.f.len()).rev() {
            flags = &flags * &ts_count(n, form_type, label.f[a])?;
            n -= 2 * label.f[a];
        }
        let e2 = self.card_e2star(label, form_type)?;
        let total = &(&flags * &q_pow(dim_d(label))) * &e2;
        if label.component.is_some() {
            return rc(total).scale(&half()).to_count_polynomial();
        }
        Ok(total)
    }
}

fn ensure_descending(r: &[usize]) -> Result<()> {
    if r.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Precondition(format!("sequence {r:?} is not descending")));
    }
    Ok(())
}

fn check_label(label: &PieceLabel, form_type: FormType) -> Result<()> {
    form_type.check_dim(label.dim())?;
    if !label.is_admissible() {
        return Err(Error::Precondition(format!("label {label} is not admissible")));
    }
    if label.component.is_some() != (label.f[0] == 0 && label.dim() > 0 && form_type == FormType::Split) {
        return Err(Error::Precondition(format!("label {label} has the wrong component data for {form_type:?}")));
    }
    Ok(())
}

fn evens(label: &PieceLabel) -> Vec<usize> {
    label.f.iter().step_by(2).copied().collect()
}

fn odds(label: &PieceLabel) -> Vec<usize> {
    label.f.iter().skip(1).step_by(2).copied().collect()
}

pub fn count_n(s: usize, k: usize, left: Side, right: Side) -> Result<RationalCount> {
    Counter::default().count_n(s, k, left, right)
}

pub fn nu(r: &[usize]) -> Result<CountPolynomial> {
    Counter::default().nu(r)
}

pub fn nu_eps(eps: i8, r: &[usize]) -> Result<CountPolynomial> {
    Counter::default().nu_eps(eps, r)
}

pub fn card_e2star(label: &PieceLabel, form_type: FormType) -> Result<CountPolynomial> {
    Counter::default().card_e2star(label, form_type)
}

pub fn card_piece(label: &PieceLabel, form_type: FormType) -> Result<CountPolynomial> {
    Counter::default().card_piece(label, form_type)
}

/// ν′(r_1, r_3, …) = R_(r_1) R_(r_1−r_3)⁻¹ R_(r_3−r_5)⁻¹ ⋯, the number of chains
/// of nondegenerate subspaces of a symplectic space.
pub fn nu_prime(r: &[usize]) -> Result<CountPolynomial> {
    ensure_descending(r)?;
    let Some(&top) = r.first() else {
        return Ok(CountPolynomial::one());
    };
    let mut den = CountPolynomial::one();
    for (i, &x) in r.iter().enumerate() {
        let next = r.get(i + 1).copied().unwrap_or(0);
        den = &den * &poly_r(x - next)?;
    }
    rc(poly_r(top)?).div(&rc(den))?.to_count_polynomial()
}

/// Σ_(a<a′, −a−a′≥3) f_a f_a′ + Σ_(−2a≥4) f_a(f_a−1)/2.
pub fn dim_d(label: &PieceLabel) -> usize {
    let top = label.max_degree();
    let mut d = 0;
    for a in -top..=top {
        for b in a + 1..=top {
            if -a - b >= 3 {
                d += label.f(a) * label.f(b);
            }
        }
        if -2 * a >= 4 {
            let fa = label.f(a);
            d += fa * fa.saturating_sub(1) / 2;
        }
    }
    d
}

/// Σ_(a<a′, a+a′=−2) f_a f_a′ + f_1(f_1−1)/2 = dim E² gr.
pub fn dim_e2(label: &PieceLabel) -> usize {
    let top = label.max_degree();
    let mut d = label.f(1) * label.f(1).saturating_sub(1) / 2;
    for a in -top..=top {
        for b in a + 1..=top {
            if a + b == -2 {
                d += label.f(a) * label.f(b);
            }
        }
    }
    d
}

/// Gaussian binomial [m choose k]_q.
pub fn gaussian_binomial(m: usize, k: usize) -> Result<CountPolynomial> {
    if k > m {
        return Ok(CountPolynomial::zero());
    }
    let num: Vec<_> = (0..k).map(|i| q_pow_minus(m - i, 1)).collect();
    let den: Vec<_> = (1..=k).map(|i| q_pow_minus(i, 1)).collect();
    rc(Poly::product(&num)).div(&rc(Poly::product(&den)))?.to_count_polynomial()
}

/// The number of k-dimensional totally singular subspaces of a nondegenerate
/// n-dimensional space of the given type.
pub fn ts_count(n: usize, form_type: FormType, k: usize) -> Result<CountPolynomial> {
    form_type.check_dim(n)?;
    let m = form_type.witt_index(n);
    if k > m {
        return Ok(CountPolynomial::zero());
    }
    let shift = match form_type {
        FormType::Split => 0,
        FormType::Odd => 1,
        FormType::NonSplit => 2,
    };
    let factors: Vec<_> = (0..k).map(|i| q_pow_minus(m - i + shift - 1, -1)).collect();
    Ok(&gaussian_binomial(m, k)? * &Poly::product(&factors))
}

/// Checks, as an identity of rational functions in q,
/// 2^(−m) Σ_δ ∏_i (q^((r_(i−1)−r_i)/2) − δ_(i−1)δ_i)⁻¹ (q^(r_m/2) − δ_m)⁻¹
///   = (q^(r_0/2) + ε) ∏_i (q^(r_(i−1)−r_i) − 1)⁻¹ (q^(r_m) − 1)⁻¹
/// for a strictly descending sequence of positive even r, with δ_0 = ε.
pub fn case_one_identity(eps: i8, r: &[usize]) -> Result<bool> {
    let ok = r.len() >= 2 && r.iter().all(|&x| x > 0 && x % 2 == 0) && r.windows(2).all(|w| w[0] > w[1]);
    if !ok {
        return Err(Error::Precondition(format!("case-one identity needs two or more distinct positive even entries, got {r:?}")));
    }
    let m = r.len() - 1;
    let rat = |p: CountPolynomial| RationalCount::from_count(&p);
    let mut lhs = RationalCount::zero();
    for mask in 0u32..1 << m {
        let delta = |i: usize| -> i64 {
            if i == 0 {
                eps as i64
            } else if mask >> (i - 1) & 1 == 0 {
                1
            } else {
                -1
            }
        };
        let mut den = CountPolynomial::one();
        for i in 1..=m {
            den = &den * &q_pow_minus((r[i - 1] - r[i]) / 2, delta(i - 1) * delta(i));
        }
        den = &den * &q_pow_minus(r[m] / 2, delta(m));
        lhs = lhs.add(&RationalCount::one().div(&rat(den))?);
    }
    let lhs = lhs.scale(&BigRational::new(int(1), BigInt::one() << m));
    let mut den = CountPolynomial::one();
    for i in 1..=m {
        den = &den * &q_pow_minus(r[i - 1] - r[i], 1);
    }
    den = &den * &q_pow_minus(r[m], 1);
    let rhs = rat(Poly::q_pow_minus(r[0] / 2, int(-(eps as i64)))).div(&rat(den))?;
    Ok(lhs.same_as(&rhs))
}

impl RationalCount {
    /// Value at an integer q.
    pub fn eval_at(&self, q: u64) -> Result<BigRational> {
        let x = BigRational::from_integer(BigInt::from(q));
        let den = self.den.eval(&x);
        if den.is_zero() {
            return Err(Error::Precondition(format!("denominator vanishes at q = {q}")));
        }
        Ok(self.num.eval(&x) / den)
    }
}
