//! Nilpotent endomorphisms N with Q(Nx) = −⟨x,Nx⟩, their Jordan and
//! characteristic-2 invariants, the line L_N, and the reduction to L^⊥/L.

use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::gf::Elem;
use crate::linalg::{image, kernel, unit_vector, Mat, Quotient, Subspace, Vector};
use crate::quadspace::QuadSpace;

/// Where N sits relative to 𝔪_Q ⊆ 𝔪̃_Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Membership {
    NotIn,
    /// In 𝔪̃_Q but not in 𝔪_Q (characteristic 2, even D, dim ker N odd).
    InTcm,
    InCm,
}

/// Largest q^D for which the quadratic identity is also checked on every vector.
const EXHAUSTIVE_VECTORS: u64 = 32;

/// Q(Nx) + ⟨x,Nx⟩, a quadratic form in x that vanishes iff N ∈ 𝔪̃_Q.
fn defect(space: &QuadSpace, n: &Mat, x: &[Elem]) -> Elem {
    let ctx = space.ctx();
    let nx = n.mul_vec(ctx, x);
    ctx.add(space.q(&nx), space.b(x, &nx))
}

/// Classify N. The quadratic identity is certified on basis vectors and pairwise
/// sums (which determine a quadratic form), and on every vector for small spaces.
pub fn membership(space: &QuadSpace, n: &Mat) -> Result<Membership> {
    let ctx = space.ctx();
    let d = space.dim();
    if n.rows() != d || n.cols() != d {
        return Err(Error::Dimension(format!("{}x{} matrix on a {d}-dimensional space", n.rows(), n.cols())));
    }
    if n.nilpotency_index(ctx).is_none() {
        return Ok(Membership::NotIn);
    }
    let units: Vec<Vector> = (0..d).map(|i| unit_vector(d, i)).collect();
    let mut in_tcm = units.iter().all(|u| defect(space, n, u) == 0);
    for i in 0..d {
        for j in i + 1..d {
            let s: Vector = units[i].iter().zip(&units[j]).map(|(&a, &b)| ctx.add(a, b)).collect();
            in_tcm &= defect(space, n, &s) == 0;
        }
    }
    // ⟨x,Ny⟩ + ⟨Nx,y⟩ + ⟨Nx,Ny⟩ = 0, i.e. BN + NᵀB + NᵀBN = 0.
    let b = space.bilinear();
    let bn = b.mul(ctx, n);
    let nt = n.transpose();
    let polar = bn.add(ctx, &nt.mul(ctx, b)).add(ctx, &nt.mul(ctx, &bn));
    ensure!(!in_tcm || polar.is_zero(), "quadratic identity holds but its polarization does not");
    if in_tcm && (ctx.q() as u64).checked_pow(d as u32).is_some_and(|n| n <= EXHAUSTIVE_VECTORS) {
        let mut all = true;
        crate::linalg::for_each_vector(ctx, d, |x| all &= defect(space, n, x) == 0);
        ensure!(all, "certificate passed but the quadratic identity fails on some vector");
    }
    if !in_tcm {
        return Ok(Membership::NotIn);
    }
    let in_cm = !(ctx.is_char2() && d % 2 == 0 && kernel(ctx, n).dim() % 2 == 1);
    let result = if in_cm { Membership::InCm } else { Membership::InTcm };
    if space.form_type().is_some() {
        let special = space.so_membership(&n.add_identity(ctx, 1))?;
        ensure!(special == in_cm, "1+N in SO is {special} but membership says {result:?}");
    }
    Ok(result)
}

/// Jordan block counts c_i (index = block size) and, in characteristic 2, the bits
/// ε_i; both trimmed of trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct JordanData {
    pub c: Vec<usize>,
    pub eps: Vec<u8>,
}

impl JordanData {
    pub fn new(mut c: Vec<usize>, mut eps: Vec<u8>) -> Self {
        if c.is_empty() {
            c.push(0);
        }
        while c.len() > 1 && *c.last().unwrap() == 0 {
            c.pop();
        }
        while eps.last() == Some(&0) {
            eps.pop();
        }
        JordanData { c, eps }
    }

    pub fn c(&self, i: usize) -> usize {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn eps(&self, i: usize) -> u8 {
        self.eps.get(i).copied().unwrap_or(0)
    }

    /// Largest block size (0 for the zero map).
    pub fn e(&self) -> usize {
        self.c.len() - 1
    }

    /// Block sizes with multiplicity, descending.
    pub fn partition(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for i in (1..self.c.len()).rev() {
            out.extend(std::iter::repeat_n(i, self.c[i]));
        }
        out
    }
}

/// Which branch of the line construction applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LineCase {
    /// Odd characteristic: L = N^{e−1}V.
    OddP,
    /// λ_e = 0: L = N^{e−1}V.
    LambdaZero,
    /// λ_e ≠ 0, R = 0: L = (ker λ)^⊥.
    LambdaNonzero,
    /// λ_e ≠ 0, R ≠ 0: the singular line in (ker λ)^⊥.
    LambdaNonzeroRadical,
}

impl LineCase {
    pub fn lambda_nonzero(self) -> bool {
        matches!(self, LineCase::LambdaNonzero | LineCase::LambdaNonzeroRadical)
    }
}

/// A nilpotent N ∈ 𝔪̃_Q together with its space and Jordan data.
#[derive(Clone, Debug)]
pub struct NilpotentWitness {
    space: QuadSpace,
    n: Mat,
    e: usize,
    c: Vec<usize>,
}

/// One reduction step: L, the quotient L^⊥ → L^⊥/L, and N′ on it.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub line: Subspace,
    pub case: LineCase,
    pub quotient: Quotient,
    pub reduced: NilpotentWitness,
}

impl NilpotentWitness {
    /// Requires N ∈ 𝔪̃_Q.
    pub fn new(space: QuadSpace, n: Mat) -> Result<Self> {
        match membership(&space, &n)? {
            Membership::NotIn => Err(Error::Precondition("N is not nilpotent with Q(Nx) = −⟨x,Nx⟩".into())),
            _ => Ok(Self::new_unchecked(space, n)),
        }
    }

    /// The witness of a unipotent isometry u, with N = u − 1.
    pub fn from_unipotent(space: QuadSpace, u: &Mat) -> Result<Self> {
        let n = u.add_identity(space.ctx(), space.ctx().neg(1));
        Self::new(space, n)
    }

    pub(crate) fn new_unchecked(space: QuadSpace, n: Mat) -> Self {
        let ctx = space.ctx();
        let d = space.dim();
        let mut ranks = vec![d];
        let mut p = Mat::identity(d);
        while *ranks.last().unwrap() > 0 {
            p = p.mul(ctx, &n);
            ranks.push(p.rank(ctx));
            assert!(ranks.len() <= d + 2, "nilpotent matrix expected");
        }
        let blocks = ranks.len() - 1;
        // The zero map has e = 0 by convention, while c_1 = D.
        let e = if n.is_zero() { 0 } else { blocks };
        let r = |k: usize| ranks.get(k).copied().unwrap_or(0);
        let mut c = vec![0; blocks + 1];
        for (k, ck) in c.iter_mut().enumerate().skip(1) {
            *ck = r(k - 1) + r(k + 1) - 2 * r(k);
        }
        NilpotentWitness { space, n, e, c }
    }

    pub fn space(&self) -> &QuadSpace {
        &self.space
    }
    pub fn n(&self) -> &Mat {
        &self.n
    }
    /// Least e ≥ 0 with N^e = 0.
    pub fn e(&self) -> usize {
        self.e
    }
    pub fn c(&self, i: usize) -> usize {
        self.c.get(i).copied().unwrap_or(0)
    }
    pub fn is_zero(&self) -> bool {
        self.e == 0
    }

    pub fn membership(&self) -> Result<Membership> {
        membership(&self.space, &self.n)
    }

    /// λ_i on a basis of ker N^i (characteristic 2): values sqrt⟨x, N^{i−1}x⟩,
    /// after checking that x ↦ ⟨x, N^{i−1}x⟩ is additive there.
    pub fn lambda(&self, i: usize) -> Result<(Subspace, Vector)> {
        let ctx = self.space.ctx();
        if !ctx.is_char2() || i == 0 {
            return Err(Error::Precondition("λ_i is defined for p = 2 and i ≥ 1".into()));
        }
        let ni = self.n.pow(ctx, i as u32);
        let ker = kernel(ctx, &ni);
        let basis = ker.basis_vectors();
        let m = self.n.pow(ctx, i as u32 - 1);
        let images: Vec<Vector> = basis.iter().map(|x| m.mul_vec(ctx, x)).collect();
        for j in 0..basis.len() {
            for k in j + 1..basis.len() {
                let s = ctx.add(self.space.b(&basis[j], &images[k]), self.space.b(&basis[k], &images[j]));
                ensure!(s == 0, "x ↦ ⟨x, N^{}x⟩ is not additive on ker N^{i}", i - 1);
            }
        }
        let values = basis
            .iter()
            .zip(&images)
            .map(|(x, y)| ctx.sqrt_char2(self.space.b(x, y)))
            .collect::<Result<Vector>>()?;
        Ok((ker, values))
    }

    /// λ_e as a row vector on V = ker N^e.
    fn lambda_top(&self) -> Result<Vector> {
        let ctx = self.space.ctx();
        let d = self.space.dim();
        let m = self.n.pow(ctx, self.e as u32 - 1);
        (0..d)
            .map(|j| {
                let u = unit_vector(d, j);
                ctx.sqrt_char2(self.space.b(&u, &m.mul_vec(ctx, &u)))
            })
            .collect()
    }

    /// ε_i for i = 1..=e (index 0 unused); characteristic 2 only.
    pub fn eps(&self) -> Result<Vec<u8>> {
        let mut out = vec![0; self.e.max(1) + 1];
        for (i, slot) in out.iter_mut().enumerate().skip(1) {
            let (_, values) = self.lambda(i)?;
            *slot = u8::from(values.iter().any(|&v| v != 0));
        }
        Ok(out)
    }

    pub fn jordan_data(&self) -> Result<JordanData> {
        let eps = if self.space.ctx().is_char2() { self.eps()? } else { Vec::new() };
        Ok(JordanData::new(self.c.clone(), eps))
    }

    /// The line L_N (N ≠ 0, N ∈ 𝔪_Q) and which construction produced it.
    pub fn line(&self) -> Result<(Subspace, LineCase)> {
        if self.is_zero() {
            return Err(Error::Precondition("L_N is defined for N ≠ 0".into()));
        }
        let ctx = self.space.ctx();
        let top = self.n.pow(ctx, self.e as u32 - 1);
        if !ctx.is_char2() {
            return Ok((image(ctx, &top), LineCase::OddP));
        }
        let lambda = self.lambda_top()?;
        if lambda.iter().all(|&v| v == 0) {
            return Ok((image(ctx, &top), LineCase::LambdaZero));
        }
        let d = self.space.dim();
        let ker_lambda = kernel(ctx, &Mat::from_rows(d, &[lambda]));
        let k = self.space.perp(&ker_lambda);
        let radical = self.space.radical();
        if radical.is_zero() {
            ensure!(k.dim() == 1, "(ker λ)^⊥ has dimension {}", k.dim());
            return Ok((k, LineCase::LambdaNonzero));
        }
        ensure!(k.dim() == 2 && radical.is_subspace_of(ctx, &k), "(ker λ)^⊥ is not a plane through R");
        let r = radical.basis().row(0).to_vec();
        let other = radical.complement_in(ctx, &k).pop().expect("plane through a line");
        // Q(αr + k) = α²Q(r) + Q(k), since ⟨r, k⟩ = 0.
        let alpha = ctx.sqrt_char2(ctx.div(self.space.q(&other), self.space.q(&r)))?;
        let x = crate::linalg::axpy(ctx, alpha, &r, &other);
        ensure!(self.space.q(&x) == 0, "no singular vector in (ker λ)^⊥");
        Ok((Subspace::from_vectors(ctx, d, &[x]), LineCase::LambdaNonzeroRadical))
    }

    /// L_N together with the checks that L is totally singular inside L^⊥, killed by
    /// N, with N-stable perp, contained in N^{e−1}V + R, a line when λ ≠ 0, and
    /// (λ ≠ 0) that L ⊆ N^{e−1}(L^⊥) exactly when dim N^{e−1}V is even.
    pub fn line_checked(&self) -> Result<(Subspace, LineCase)> {
        if self.space.ctx().is_char2() && self.membership()? != Membership::InCm {
            return Err(Error::Precondition("L_N needs N ∈ 𝔪_Q".into()));
        }
        let (l, case) = self.line()?;
        let ctx = self.space.ctx();
        let lp = self.space.perp(&l);
        ensure!(l.is_subspace_of(ctx, &lp), "L ⊄ L^⊥");
        ensure!(self.space.is_totally_singular(&l), "Q|_L ≠ 0");
        ensure!(l.image_under(ctx, &self.n).is_zero(), "NL ≠ 0");
        ensure!(lp.image_under(ctx, &self.n).is_subspace_of(ctx, &lp), "N(L^⊥) ⊄ L^⊥");
        let top = self.n.pow(ctx, self.e as u32 - 1);
        let top_image = image(ctx, &top);
        ensure!(l.is_subspace_of(ctx, &top_image.sum(ctx, self.space.radical())?), "L ⊄ N^(e-1)V + R");
        if case.lambda_nonzero() {
            ensure!(l.dim() == 1, "L is not a line");
            let contained = l.is_subspace_of(ctx, &lp.image_under(ctx, &top));
            ensure!(contained == (top_image.dim() % 2 == 0), "L ⊆ N^(e-1)(L^⊥) is {contained}, dim N^(e-1)V = {}", top_image.dim());
        }
        Ok((l, case))
    }

    /// One step V ↦ V′ = L^⊥/L with Q′ and N′ induced (no extra checks).
    pub fn reduce_step(&self) -> Result<Reduction> {
        let (line, case) = self.line()?;
        let ctx = self.space.ctx();
        let (qspace, quotient) = self.space.quotient_form_untyped(&line)?;
        let n1 = quotient.induced(ctx, &self.n);
        let reduced = NilpotentWitness::new_unchecked(qspace, n1);
        Ok(Reduction { line, case, quotient, reduced })
    }

    /// [`Self::reduce_step`] plus: N′ ∈ 𝔪_{Q′}, dim V′ < D, e′ bounded as expected,
    /// and in characteristic 2 the predicted invariants of N′ match.
    pub fn reduce(&self) -> Result<Reduction> {
        let (_, case) = self.line_checked()?;
        let red = self.reduce_step()?;
        ensure!(red.case == case, "line case changed between calls");
        let ctx = self.space.ctx();
        let (typed, _) = self.space.quotient_form(&red.line)?;
        let reduced = NilpotentWitness::new_unchecked(typed, red.reduced.n.clone());
        ensure!(reduced.membership()? == Membership::InCm, "N′ ∉ 𝔪_Q′");
        ensure!(reduced.space.dim() < self.space.dim(), "reduction did not shrink the space");
        let bound = if case.lambda_nonzero() { self.e } else { self.e - 1 };
        ensure!(reduced.e <= bound, "e′ = {} exceeds {bound}", reduced.e);
        if ctx.is_char2() {
            let predicted = predict_reduced(&self.jordan_data()?, case.lambda_nonzero());
            let actual = reduced.jordan_data()?;
            ensure!(predicted == actual, "predicted {predicted:?}, recomputed {actual:?}");
        }
        Ok(Reduction { reduced, ..red })
    }

    /// N† = (1+N)⁻¹ − 1, checked to satisfy ⟨x,Ny⟩ = ⟨N†x,y⟩ and N† ∈ 𝔪̃_Q.
    pub fn dagger(&self) -> Result<Mat> {
        let ctx = self.space.ctx();
        let u = self.n.add_identity(ctx, 1);
        let dag = u.inverse(ctx).expect("unipotent").add_identity(ctx, ctx.neg(1));
        let b = self.space.bilinear();
        ensure!(b.mul(ctx, &self.n) == dag.transpose().mul(ctx, b), "⟨x,Ny⟩ ≠ ⟨N†x,y⟩");
        ensure!(membership(&self.space, &dag)? != Membership::NotIn, "N† ∉ 𝔪̃_Q");
        Ok(dag)
    }

    /// Checks NV ∩ R = 0, NR = 0, (ker N^i)^⊥ = N^iV + R and (N^iV)^⊥ = ker N^i.
    pub fn verify_perp_identities(&self) -> Result<()> {
        let ctx = self.space.ctx();
        let r = self.space.radical();
        ensure!(image(ctx, &self.n).intersect(ctx, r)?.is_zero(), "NV ∩ R ≠ 0");
        ensure!(r.image_under(ctx, &self.n).is_zero(), "NR ≠ 0");
        let mut p = Mat::identity(self.space.dim());
        for i in 1..=self.e {
            p = p.mul(ctx, &self.n);
            let ker = kernel(ctx, &p);
            let img = image(ctx, &p);
            ensure!(self.space.perp(&ker) == img.sum(ctx, r)?, "(ker N^{i})^⊥ ≠ N^{i}V + R");
            ensure!(self.space.perp(&img) == ker, "(N^{i}V)^⊥ ≠ ker N^{i}");
        }
        Ok(())
    }

    /// V = W ⊕ Y with W = E + NE + … + N^{e−1}E for a complement E of ker N^{e−1}
    /// and Y = W^⊥; checks nondegeneracy of (x,y) ↦ ⟨x,N^{e−1}y⟩ on E, injectivity
    /// of the assembly, R ⊆ Y, NY ⊆ Y and N^{e−1}Y = 0.
    pub fn wy_split(&self) -> Result<(Subspace, Subspace)> {
        if self.is_zero() {
            return Err(Error::Precondition("W ⊕ Y split needs N ≠ 0".into()));
        }
        let ctx = self.space.ctx();
        let d = self.space.dim();
        let top = self.n.pow(ctx, self.e as u32 - 1);
        let es = kernel(ctx, &top).complement(ctx);
        let k = es.len();
        let mut pairing = Mat::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                pairing.set(i, j, self.space.b(&es[i], &top.mul_vec(ctx, &es[j])));
            }
        }
        ensure!(pairing.rank(ctx) == k, "⟨x, N^(e-1)y⟩ is degenerate on the complement");
        let mut ws = Vec::with_capacity(k * self.e);
        let mut p = Mat::identity(d);
        for _ in 0..self.e {
            ws.extend(es.iter().map(|x| p.mul_vec(ctx, x)));
            p = p.mul(ctx, &self.n);
        }
        let w = Subspace::from_vectors(ctx, d, &ws);
        ensure!(w.dim() == k * self.e, "E ⊕ NE ⊕ … is not direct");
        let y = self.space.perp(&w);
        ensure!(w.intersect(ctx, &y)?.is_zero() && w.dim() + y.dim() == d, "V ≠ W ⊕ Y");
        ensure!(self.space.radical().is_subspace_of(ctx, &y), "R ⊄ Y");
        ensure!(y.image_under(ctx, &self.n).is_subspace_of(ctx, &y), "NY ⊄ Y");
        ensure!(y.image_under(ctx, &top).is_zero(), "N^(e-1)Y ≠ 0");
        Ok((w, y))
    }
}

/// Invariants of N′ predicted from those of N (characteristic 2, N ≠ 0).
pub fn predict_reduced(data: &JordanData, lambda_nonzero: bool) -> JordanData {
    let e = data.e();
    let mut c = data.c.clone();
    c.resize(e + 1, 0);
    let mut eps = data.eps.clone();
    eps.resize(e + 1, 0);
    if !lambda_nonzero {
        let ce = c[e];
        c[e] = 0;
        if e > 2 {
            c[e - 2] += ce;
        }
    } else if c[e] % 2 == 0 {
        c[e] -= 2;
        c[e - 1] += 2;
        eps[e] = 0;
    } else {
        c[e] -= 1;
        if e > 2 {
            c[e - 2] += 1;
            eps[e - 2] = 1;
        }
        eps[e] = 0;
    }
    JordanData::new(c, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_of_order;
    use crate::quadspace::{standard_space, FormType};
    use std::sync::Arc;

    fn space(q: u32, d: usize, t: FormType) -> QuadSpace {
        standard_space(&Arc::new(field_of_order(q).unwrap()), d, t).unwrap()
    }

    /// D = 3 over GF(2): N f = e + r on the basis (e, f, r).
    pub(crate) fn beta_one() -> NilpotentWitness {
        let s = space(2, 3, FormType::Odd);
        let n = Mat::from_rows(3, &[vec![0, 1, 0], vec![0, 0, 0], vec![0, 1, 0]]);
        NilpotentWitness::new(s, n).unwrap()
    }

    #[test]
    fn membership_examples() {
        let s = space(2, 2, FormType::Split);
        assert_eq!(membership(&s, &Mat::zeros(2, 2)).unwrap(), Membership::InCm);
        // N x = ⟨x, v⟩ v with v = (1, 1), Q(v) = 1.
        let v = [1, 1];
        let bv = s.bilinear().mul_vec(s.ctx(), &v);
        let n = Mat::from_cols(2, &[vec![bv[0], bv[0]], vec![bv[1], bv[1]]]);
        assert_eq!(membership(&s, &n).unwrap(), Membership::InTcm);
        assert_eq!(beta_one().membership().unwrap(), Membership::InCm);
        let bad = Mat::from_rows(2, &[vec![0, 1], vec![0, 0]]);
        assert_eq!(membership(&s, &bad).unwrap(), Membership::NotIn);
        assert!(membership(&s, &Mat::identity(3)).is_err());
    }

    #[test]
    fn jordan_examples() {
        let s = space(2, 3, FormType::Odd);
        let z = NilpotentWitness::new(s, Mat::zeros(3, 3)).unwrap();
        assert_eq!((z.e(), z.c(1)), (0, 3));
        let w = beta_one();
        assert_eq!((w.e(), w.c(2), w.c(1)), (2, 1, 1));
        let jd = w.jordan_data().unwrap();
        assert_eq!(jd.eps, vec![0, 0, 1]);
        assert_eq!(jd.partition(), vec![2, 1]);
    }

    #[test]
    fn lambda_of_example() {
        let w = beta_one();
        let (ker, values) = w.lambda(2).unwrap();
        assert!(ker.is_full());
        // λ_2(f) = 1.
        assert_eq!(values, vec![0, 1, 0]);
        let s3 = space(3, 3, FormType::Odd);
        assert!(NilpotentWitness::new(s3, Mat::zeros(3, 3)).unwrap().lambda(1).is_err());
    }

    #[test]
    fn line_of_example() {
        let w = beta_one();
        let (l, case) = w.line_checked().unwrap();
        assert_eq!(case, LineCase::LambdaNonzeroRadical);
        assert_eq!(l.basis_vectors(), vec![vec![1, 0, 0]]);
        let red = w.reduce().unwrap();
        assert_eq!(red.reduced.space().dim(), 1);
        assert!(red.reduced.is_zero());
    }

    #[test]
    fn lambda_zero_two_by_two_blocks() {
        let s = space(2, 4, FormType::Split);
        // Basis (e1, f1, e2, f2): N f1 = e2, N f2 = e1.
        let mut n = Mat::zeros(4, 4);
        n.set(2, 1, 1);
        n.set(0, 3, 1);
        let w = NilpotentWitness::new(s, n).unwrap();
        assert_eq!(w.membership().unwrap(), Membership::InCm);
        let (l, case) = w.line_checked().unwrap();
        assert_eq!(case, LineCase::LambdaZero);
        assert_eq!(l.dim(), 2);
        assert_eq!(w.reduce().unwrap().reduced.space().dim(), 0);
    }

    #[test]
    fn odd_characteristic_lines() {
        for q in [3, 5] {
            let s = space(q, 4, FormType::Split);
            let f = s.ctx();
            let mut n = Mat::zeros(4, 4);
            n.set(2, 1, 1);
            n.set(0, 3, f.neg(1));
            let w = NilpotentWitness::new(s, n).unwrap();
            let (l, case) = w.line_checked().unwrap();
            assert_eq!((case, l.dim()), (LineCase::OddP, 2));
        }
    }

    #[test]
    fn predictions_from_the_rules() {
        let iii = predict_reduced(&JordanData::new(vec![0, 1, 1], vec![0, 0, 1]), true);
        assert_eq!(iii, JordanData::new(vec![0, 1], vec![]));
        let i = predict_reduced(&JordanData::new(vec![0, 1, 0, 1], vec![]), false);
        assert_eq!(i, JordanData::new(vec![0, 2], vec![]));
        let ii = predict_reduced(&JordanData::new(vec![0, 0, 2], vec![0, 0, 1]), true);
        assert_eq!(ii, JordanData::new(vec![0, 2], vec![]));
    }

    #[test]
    fn wy_split_examples() {
        let w = beta_one();
        let (ww, y) = w.wy_split().unwrap();
        assert_eq!(ww, Subspace::from_vectors(w.space().ctx(), 3, &[vec![0, 1, 0], vec![1, 0, 1]]));
        assert_eq!(y.basis_vectors(), vec![vec![0, 0, 1]]);
    }

    #[test]
    fn dagger_and_perp_identities() {
        let w = beta_one();
        let dag = w.dagger().unwrap();
        let ctx = w.space().ctx();
        assert_eq!(w.n().add_identity(ctx, 1).mul(ctx, &dag.add_identity(ctx, 1)), Mat::identity(3));
        w.verify_perp_identities().unwrap();
    }
}
