//! Table-driven arithmetic in GF(p^k) for q = p^k ≤ 64.
//!
//! Elements are encoded as integers in `[0, q)`: the base-p digits of the
//! encoding are the coefficients of the representing polynomial, lowest degree
//! first.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 64;

/// Raw element encoding; always `< q` for the owning context.
pub type Elem = u8;

/// Immutable arithmetic context for one finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldCtx {
    p: u8,
    k: u8,
    q: u8,
    /// Monic modulus, coefficients lowest degree first (length k+1).
    modulus: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    /// Square roots; only populated in characteristic 2.
    sqrt: Vec<u8>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}) [modulus {}]", self.q, self.modulus_string())
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn digits(mut x: u32, p: u32, k: usize) -> Vec<u32> {
    let mut out = vec![0; k];
    for d in out.iter_mut() {
        *d = x % p;
        x /= p;
    }
    out
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p); both low-first.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - lead * c % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let k = m.len() - 1;
    for d in 1..=k / 2 {
        for low in 0..p.pow(d as u32) {
            let mut cand = digits(low, p, d);
            cand.push(1);
            if poly_rem(m, &cand, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Build GF(p^k) with the lexicographically smallest irreducible monic modulus
/// (ordering by the integer encoding of the lower coefficients).
pub fn make_field(p: u32, k: u32) -> Result<FieldCtx> {
    if !is_prime(p) {
        return Err(Error::InvalidField(format!("{p} is not prime")));
    }
    if k == 0 {
        return Err(Error::InvalidField("extension degree must be at least 1".into()));
    }
    let q = p.checked_pow(k).filter(|&q| q <= MAX_ORDER).ok_or_else(|| {
        Error::InvalidField(format!("{p}^{k} exceeds the supported order {MAX_ORDER}"))
    })?;
    let ku = k as usize;
    let modulus = (0..q)
        .map(|low| {
            let mut m = digits(low, p, ku);
            m.push(1);
            m
        })
        .find(|m| is_irreducible(m, p))
        .expect("an irreducible polynomial of every degree exists");

    let qu = q as usize;
    let mut add = vec![0u8; qu * qu];
    let mut mul = vec![0u8; qu * qu];
    for a in 0..q {
        let da = digits(a, p, ku);
        for b in 0..q {
            let db = digits(b, p, ku);
            let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            add[(a * q + b) as usize] = undigits(&s, p) as u8;
            let mut prod = vec![0u32; 2 * ku - 1];
            for (i, x) in da.iter().enumerate() {
                for (j, y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            let r = poly_rem(&prod, &modulus, p);
            mul[(a * q + b) as usize] = undigits(&r, p) as u8;
        }
    }
    let mut neg = vec![0u8; qu];
    let mut inv = vec![0u8; qu];
    for a in 0..qu {
        neg[a] = (0..qu).find(|&b| add[a * qu + b] == 0).unwrap() as u8;
        if a != 0 {
            inv[a] = (1..qu).find(|&b| mul[a * qu + b] == 1).unwrap() as u8;
        }
    }
    let mut sqrt = Vec::new();
    if p == 2 {
        sqrt = vec![0u8; qu];
        for y in 0..qu {
            sqrt[mul[y * qu + y] as usize] = y as u8;
        }
    }
    Ok(FieldCtx {
        p: p as u8,
        k: k as u8,
        q: q as u8,
        modulus: modulus.iter().map(|&c| c as u8).collect(),
        add,
        mul,
        neg,
        inv,
        sqrt,
    })
}

/// Build the field of order `q` (a prime power ≤ 64).
pub fn field_of_order(q: u32) -> Result<FieldCtx> {
    for p in 2..=q {
        if is_prime(p) && q % p == 0 {
            let mut k = 0;
            let mut r = q;
            while r % p == 0 {
                r /= p;
                k += 1;
            }
            if r != 1 {
                break;
            }
            return make_field(p, k);
        }
    }
    Err(Error::InvalidField(format!("{q} is not a prime power")))
}

impl FieldCtx {
    #[inline]
    pub fn p(&self) -> u32 {
        self.p as u32
    }
    #[inline]
    pub fn k(&self) -> u32 {
        self.k as u32
    }
    #[inline]
    pub fn q(&self) -> u32 {
        self.q as u32
    }
    #[inline]
    pub fn is_char2(&self) -> bool {
        self.p == 2
    }

    /// Modulus coefficients, lowest degree first.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// Modulus rendered as a polynomial in x, e.g. `x^2 + x + 1`.
    pub fn modulus_string(&self) -> String {
        let mut terms = Vec::new();
        for (d, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match d {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{d}"),
            };
            terms.push(match (c, d) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        terms.join(" + ")
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        0..self.q
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q as usize + b as usize]
    }
    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }
    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q as usize + b as usize]
    }
    /// Multiplicative inverse; `inv(0)` is a logic error.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        debug_assert!(a != 0, "inverse of zero");
        self.inv[a as usize]
    }
    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The image of an integer under Z → GF(p) ⊆ GF(q).
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p as i64) as Elem
    }

    /// Square root in characteristic 2 (x^{2^{k−1}}).
    pub fn sqrt_char2(&self, a: Elem) -> Result<Elem> {
        if self.p != 2 {
            return Err(Error::Precondition("square root needs characteristic 2".into()));
        }
        Ok(self.sqrt[a as usize])
    }

    /// x + x^p + … + x^{p^{k−1}}, an element of the prime field.
    pub fn trace(&self, a: Elem) -> Elem {
        let mut acc = 0;
        let mut y = a;
        for _ in 0..self.k {
            acc = self.add(acc, y);
            y = self.pow(y, self.p as u64);
        }
        acc
    }

    pub fn is_square(&self, a: Elem) -> bool {
        a == 0 || self.p == 2 || self.pow(a, (self.q as u64 - 1) / 2) == 1
    }

    pub fn elem(&self, value: Elem) -> FieldElement<'_> {
        assert!((value as u32) < self.q(), "encoding {value} out of range for GF({})", self.q);
        FieldElement { ctx: self, value }
    }
}

/// A field element bundled with its context, for operator-style arithmetic.
#[derive(Clone, Copy)]
pub struct FieldElement<'a> {
    ctx: &'a FieldCtx,
    value: Elem,
}

impl<'a> FieldElement<'a> {
    pub fn value(self) -> Elem {
        self.value
    }
    pub fn ctx(self) -> &'a FieldCtx {
        self.ctx
    }
    pub fn is_zero(self) -> bool {
        self.value == 0
    }
    pub fn inv(self) -> Option<Self> {
        (self.value != 0).then(|| self.ctx.elem(self.ctx.inv(self.value)))
    }
    pub fn pow(self, e: u64) -> Self {
        self.ctx.elem(self.ctx.pow(self.value, e))
    }
    pub fn sqrt_char2(self) -> Result<Self> {
        Ok(self.ctx.elem(self.ctx.sqrt_char2(self.value)?))
    }
    pub fn trace(self) -> Self {
        self.ctx.elem(self.ctx.trace(self.value))
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.ctx, other.ctx) && self.value == other.value
    }
}
impl Eq for FieldElement<'_> {}

impl fmt::Debug for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $ctxm:ident) => {
        impl<'a> $tr for FieldElement<'a> {
            type Output = FieldElement<'a>;
            fn $m(self, rhs: Self) -> Self::Output {
                debug_assert!(std::ptr::eq(self.ctx, rhs.ctx), "mixed fields");
                FieldElement { ctx: self.ctx, value: self.ctx.$ctxm(self.value, rhs.value) }
            }
        }
    };
}
binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl<'a> Div for FieldElement<'a> {
    type Output = FieldElement<'a>;
    fn div(self, rhs: Self) -> Self::Output {
        assert!(rhs.value != 0, "division by zero");
        FieldElement { ctx: self.ctx, value: self.ctx.div(self.value, rhs.value) }
    }
}

impl<'a> Neg for FieldElement<'a> {
    type Output = FieldElement<'a>;
    fn neg(self) -> Self::Output {
        FieldElement { ctx: self.ctx, value: self.ctx.neg(self.value) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_fields_use_x() {
        let f = make_field(2, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.add(1, 1), 0);
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(f5.mul(3, 4), 2);
        assert_eq!(f5.inv(2), 3);
    }

    #[test]
    fn gf4_modulus_and_generator() {
        let f = make_field(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert_eq!(f.modulus_string(), "x^2 + x + 1");
        let g = 2;
        assert_eq!(f.pow(g, 3), 1);
        assert_eq!(f.sqrt_char2(g).unwrap(), f.mul(g, g));
    }

    #[test]
    fn smallest_moduli() {
        assert_eq!(make_field(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(make_field(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(make_field(2, 6).unwrap().q(), 64);
    }

    #[test]
    fn gf9_lagrange() {
        let f = make_field(3, 2).unwrap();
        for x in 1..9 {
            assert_eq!(f.pow(x, 8), 1);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(make_field(4, 1).is_err());
        assert!(make_field(2, 7).is_err());
        assert!(make_field(3, 4).is_err());
        assert!(field_of_order(6).is_err());
        assert!(make_field(3, 1).unwrap().sqrt_char2(1).is_err());
    }

    #[test]
    fn traces() {
        let f2 = make_field(2, 1).unwrap();
        assert_eq!((f2.trace(0), f2.trace(1)), (0, 1));
        let f4 = make_field(2, 2).unwrap();
        let t: Vec<_> = (0..4).map(|x| f4.trace(x)).collect();
        assert_eq!(t, vec![0, 0, 1, 1]);
        let f9 = make_field(3, 2).unwrap();
        assert_eq!((0..9).filter(|&x| f9.trace(x) == 0).count(), 3);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = field_of_order(q).unwrap();
            let p = f.p() as u8;
            for a in f.elements() {
                let mut s = 0;
                for _ in 0..p {
                    s = f.add(s, a);
                }
                assert_eq!(s, 0, "characteristic in GF({q})");
                assert_eq!(f.pow(a, q as u64), a, "Frobenius fixes GF({q})");
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn sqrt_is_multiplicative_frobenius_inverse() {
        for k in 1..=6 {
            let f = make_field(2, k).unwrap();
            for x in f.elements() {
                let r = f.sqrt_char2(x).unwrap();
                assert_eq!(f.mul(r, r), x);
                assert_eq!(r, f.pow(x, 1 << (k - 1)));
                for y in f.elements() {
                    assert_eq!(
                        f.sqrt_char2(f.mul(x, y)).unwrap(),
                        f.mul(r, f.sqrt_char2(y).unwrap())
                    );
                }
            }
        }
    }

    #[test]
    fn modulus_is_irreducible_by_trial_division() {
        for (p, k) in [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let f = make_field(p, k).unwrap();
            let m: Vec<u32> = f.modulus().iter().map(|&c| c as u32).collect();
            assert!(is_irreducible(&m, p));
        }
    }

    #[test]
    fn element_operators() {
        let f = make_field(3, 2).unwrap();
        let a = f.elem(4);
        let b = f.elem(7);
        assert_eq!((a * b) / b, a);
        assert_eq!(a - a, f.elem(0));
        assert_eq!(-(-a), a);
        assert_eq!(a + (-a), f.elem(0));
        assert!(f.elem(0).inv().is_none());
    }
}
