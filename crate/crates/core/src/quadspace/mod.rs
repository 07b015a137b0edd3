//! Quadratic forms Q(x) = xᵀMx with M upper triangular, their polar forms
//! ⟨x,y⟩ = Q(x+y) − Q(x) − Q(y), standard models, and Witt decompositions.

mod group;

pub use group::*;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::gf::{Elem, FieldCtx};
use crate::linalg::{dot, for_each_vector, solve, vec_scale, Mat, Quotient, Subspace, Vector};

/// Isometry type of a nondegenerate form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FormType {
    /// Even dimension, η = +1.
    Split,
    /// Even dimension, η = −1.
    NonSplit,
    /// Odd dimension.
    Odd,
}

impl FormType {
    pub fn eta(self) -> Option<i8> {
        match self {
            FormType::Split => Some(1),
            FormType::NonSplit => Some(-1),
            FormType::Odd => None,
        }
    }

    pub fn from_eta(eta: i8) -> FormType {
        if eta > 0 {
            FormType::Split
        } else {
            FormType::NonSplit
        }
    }

    /// Witt index of the standard model of dimension `d`.
    pub fn witt_index(self, d: usize) -> usize {
        match self {
            FormType::Split => d / 2,
            FormType::NonSplit => d / 2 - 1,
            FormType::Odd => (d - 1) / 2,
        }
    }

    pub fn check_dim(self, d: usize) -> Result<()> {
        let ok = match self {
            FormType::Split => d % 2 == 0,
            FormType::NonSplit => d % 2 == 0 && d >= 2,
            FormType::Odd => d % 2 == 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!("dimension {d} does not fit form type {self:?}")))
        }
    }
}

/// A standard-space descriptor such as `D4+`, `D4-` or `D5`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpaceDescriptor {
    pub dim: usize,
    pub form_type: FormType,
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.form_type {
            FormType::Split => "+",
            FormType::NonSplit => "-",
            FormType::Odd => "",
        };
        write!(f, "D{}{}", self.dim, sign)
    }
}

impl FromStr for SpaceDescriptor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad space descriptor `{s}` (expected e.g. D4+, D4-, D5)"));
        let body = s.strip_prefix('D').or_else(|| s.strip_prefix('d')).ok_or_else(bad)?;
        let (digits, form_type) = match body.chars().last() {
            Some('+') => (&body[..body.len() - 1], FormType::Split),
            Some('-') => (&body[..body.len() - 1], FormType::NonSplit),
            _ => (body, FormType::Odd),
        };
        let dim: usize = digits.parse().map_err(|_| bad())?;
        if dim < 2 {
            return Err(bad());
        }
        form_type.check_dim(dim).map_err(|_| bad())?;
        Ok(SpaceDescriptor { dim, form_type })
    }
}

/// Quadratic space over GF(q). The form may be degenerate only for values produced
/// by [`QuadSpace::restrict`]; every other constructor enforces nondegeneracy.
#[derive(Clone)]
pub struct QuadSpace {
    ctx: Arc<FieldCtx>,
    gram: Mat,
    bilinear: Mat,
    radical: Subspace,
    nondegenerate: bool,
    form_type: Option<FormType>,
    /// Span of the first vector of each hyperbolic pair of the Witt basis.
    reference_ts: Option<Subspace>,
}

impl fmt::Debug for QuadSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuadSpace")
            .field("q", &self.ctx.q())
            .field("dim", &self.dim())
            .field("type", &self.form_type)
            .field("gram", &self.gram)
            .finish()
    }
}

/// δ with x² + xy + δy² anisotropic: trace(δ) = 1 in characteristic 2,
/// 1 − 4δ a nonsquare otherwise. Smallest such encoding.
pub fn anisotropic_delta(ctx: &FieldCtx) -> Elem {
    ctx.elements()
        .find(|&d| {
            if ctx.is_char2() {
                ctx.trace(d) == 1
            } else {
                !ctx.is_square(ctx.sub(1, ctx.mul(ctx.from_int(4), d)))
            }
        })
        .expect("an anisotropic parameter exists")
}

/// Upper-triangular matrix of the standard model: hyperbolic planes x_i y_i in
/// coordinates (2i, 2i+1), then the anisotropic part.
pub fn standard_gram(ctx: &FieldCtx, dim: usize, form_type: FormType) -> Result<Mat> {
    form_type.check_dim(dim)?;
    let mut m = Mat::zeros(dim, dim);
    for i in 0..form_type.witt_index(dim) {
        m.set(2 * i, 2 * i + 1, 1);
    }
    match form_type {
        FormType::Split => {}
        FormType::NonSplit => {
            let a = dim - 2;
            m.set(a, a, 1);
            m.set(a, a + 1, 1);
            m.set(a + 1, a + 1, anisotropic_delta(ctx));
        }
        FormType::Odd => m.set(dim - 1, dim - 1, 1),
    }
    Ok(m)
}

pub fn standard_space(ctx: &Arc<FieldCtx>, dim: usize, form_type: FormType) -> Result<QuadSpace> {
    let gram = standard_gram(ctx, dim, form_type)?;
    let s = QuadSpace::new(ctx.clone(), gram)?;
    ensure!(s.form_type == Some(form_type), "standard model of type {form_type:?} classified as {:?}", s.form_type);
    Ok(s)
}

pub fn standard_space_from(ctx: &Arc<FieldCtx>, d: SpaceDescriptor) -> Result<QuadSpace> {
    standard_space(ctx, d.dim, d.form_type)
}

impl QuadSpace {
    /// A nondegenerate quadratic space with the given upper-triangular matrix.
    pub fn new(ctx: Arc<FieldCtx>, gram_upper: Mat) -> Result<QuadSpace> {
        let mut s = Self::from_gram(ctx, gram_upper)?;
        if !s.nondegenerate {
            return Err(Error::Degenerate(format!("radical of dimension {} is not injective under Q", s.radical.dim())));
        }
        let decomposition = s.witt_decomposition(&[])?;
        s.form_type = Some(match decomposition.anisotropic.len() {
            0 => FormType::Split,
            1 => FormType::Odd,
            _ => FormType::NonSplit,
        });
        if s.dim() > 0 {
            let es: Vec<Vector> = decomposition.pairs.iter().map(|(e, _)| e.clone()).collect();
            s.reference_ts = Some(Subspace::from_vectors(&s.ctx, s.dim(), &es));
        }
        Ok(s)
    }

    /// Nondegenerate space without computing its type or reference subspace.
    pub(crate) fn new_untyped(ctx: Arc<FieldCtx>, gram_upper: Mat) -> Result<QuadSpace> {
        let s = Self::from_gram(ctx, gram_upper)?;
        if !s.nondegenerate {
            return Err(Error::Degenerate(format!("radical of dimension {} is not injective under Q", s.radical.dim())));
        }
        Ok(s)
    }

    /// Whether the form with this upper-triangular matrix is nondegenerate.
    pub fn gram_is_nondegenerate(ctx: &Arc<FieldCtx>, gram_upper: Mat) -> bool {
        Self::from_gram(ctx.clone(), gram_upper).is_ok_and(|s| s.nondegenerate)
    }

    fn from_gram(ctx: Arc<FieldCtx>, gram: Mat) -> Result<QuadSpace> {
        if !gram.is_square() {
            return Err(Error::Dimension("gram matrix must be square".into()));
        }
        let d = gram.rows();
        for i in 0..d {
            for j in 0..i {
                if gram.get(i, j) != 0 {
                    return Err(Error::Precondition("gram matrix must be upper triangular".into()));
                }
            }
        }
        let bilinear = gram.add(&ctx, &gram.transpose());
        let radical = crate::linalg::kernel(&ctx, &bilinear);
        let mut s = QuadSpace {
            ctx,
            gram,
            bilinear,
            radical,
            nondegenerate: false,
            form_type: None,
            reference_ts: None,
        };
        s.nondegenerate = match s.radical.dim() {
            0 => true,
            1 => s.q(s.radical.basis().row(0)) != 0,
            _ => false,
        };
        Ok(s)
    }

    #[inline]
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn ctx_arc(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }
    #[inline]
    pub fn dim(&self) -> usize {
        self.gram.rows()
    }
    pub fn gram(&self) -> &Mat {
        &self.gram
    }
    pub fn bilinear(&self) -> &Mat {
        &self.bilinear
    }
    pub fn radical(&self) -> &Subspace {
        &self.radical
    }
    pub fn is_nondegenerate(&self) -> bool {
        self.nondegenerate
    }
    pub fn form_type(&self) -> Option<FormType> {
        self.form_type
    }
    pub fn eta(&self) -> Option<i8> {
        self.form_type.and_then(FormType::eta)
    }
    /// Fixed maximal totally singular subspace (span of the Witt basis' first vectors).
    pub fn reference_ts(&self) -> Option<&Subspace> {
        self.reference_ts.as_ref()
    }
    pub fn descriptor(&self) -> Option<SpaceDescriptor> {
        self.form_type.map(|t| SpaceDescriptor { dim: self.dim(), form_type: t })
    }

    /// Q(x).
    pub fn q(&self, x: &[Elem]) -> Elem {
        let ctx = &*self.ctx;
        let d = self.dim();
        let mut s = 0;
        for i in 0..d {
            if x[i] == 0 {
                continue;
            }
            let mut row = 0;
            for j in i..d {
                let m = self.gram.get(i, j);
                if m != 0 && x[j] != 0 {
                    row = ctx.add(row, ctx.mul(m, x[j]));
                }
            }
            s = ctx.add(s, ctx.mul(x[i], row));
        }
        s
    }

    /// ⟨x, y⟩.
    pub fn b(&self, x: &[Elem], y: &[Elem]) -> Elem {
        dot(&self.ctx, x, &self.bilinear.mul_vec(&self.ctx, y))
    }

    /// W^⊥ = {x : ⟨x, W⟩ = 0}.
    pub fn perp(&self, w: &Subspace) -> Subspace {
        crate::linalg::kernel(&self.ctx, &w.basis().mul(&self.ctx, &self.bilinear))
    }

    pub fn is_totally_singular(&self, w: &Subspace) -> bool {
        let vs = w.basis_vectors();
        vs.iter().all(|v| self.q(v) == 0)
            && vs.iter().enumerate().all(|(i, v)| vs[i + 1..].iter().all(|u| self.b(v, u) == 0))
    }

    /// Upper-triangular matrix of Q restricted to span(vectors), in that basis.
    pub fn gram_on(&self, vectors: &[Vector]) -> Mat {
        let k = vectors.len();
        let mut m = Mat::zeros(k, k);
        for i in 0..k {
            m.set(i, i, self.q(&vectors[i]));
            for j in i + 1..k {
                m.set(i, j, self.b(&vectors[i], &vectors[j]));
            }
        }
        m
    }

    /// Q|_w in the RREF basis of w, and whether it is nondegenerate.
    pub fn restrict(&self, w: &Subspace) -> (QuadSpace, bool) {
        let gram = self.gram_on(&w.basis_vectors());
        let mut s = Self::from_gram(self.ctx.clone(), gram).expect("gram_on is upper triangular");
        if s.nondegenerate {
            let t = s.witt_type_by_invariant();
            s.form_type = Some(t);
        }
        let nd = s.nondegenerate;
        (s, nd)
    }

    /// The induced form on L^⊥/L for a totally singular L.
    pub fn quotient_form(&self, l: &Subspace) -> Result<(QuadSpace, Quotient)> {
        if !self.is_totally_singular(l) {
            return Err(Error::Precondition("quotient by a subspace that is not totally singular".into()));
        }
        let lp = self.perp(l);
        ensure!(l.is_subspace_of(&self.ctx, &lp), "totally singular subspace not inside its perp");
        let quo = Quotient::new(&self.ctx, &lp, l)?;
        let gram = self.gram_on(&quo.section.col_vectors());
        let s = QuadSpace::new(self.ctx.clone(), gram)?;
        Ok((s, quo))
    }

    /// [`Self::quotient_form`] without classifying the quotient.
    pub(crate) fn quotient_form_untyped(&self, l: &Subspace) -> Result<(QuadSpace, Quotient)> {
        if !self.is_totally_singular(l) {
            return Err(Error::Precondition("quotient by a subspace that is not totally singular".into()));
        }
        let quo = Quotient::new(&self.ctx, &self.perp(l), l)?;
        let gram = self.gram_on(&quo.section.col_vectors());
        Ok((QuadSpace::new_untyped(self.ctx.clone(), gram)?, quo))
    }

    /// Type from the discriminant (odd p) or the Arf invariant (p = 2); even
    /// dimension, nondegenerate only.
    pub fn witt_type_by_invariant(&self) -> FormType {
        let ctx = &*self.ctx;
        let d = self.dim();
        if d % 2 == 1 {
            return FormType::Odd;
        }
        if d == 0 {
            return FormType::Split;
        }
        if !ctx.is_char2() {
            let mut disc = self.bilinear.det(ctx);
            if (d / 2) % 2 == 1 {
                disc = ctx.neg(disc);
            }
            return if ctx.is_square(disc) { FormType::Split } else { FormType::NonSplit };
        }
        let mut rest: Vec<Vector> = (0..d).map(|i| crate::linalg::unit_vector(d, i)).collect();
        let mut arf = 0;
        while let Some(x) = rest.pop() {
            let Some(pos) = rest.iter().position(|y| self.b(&x, y) != 0) else {
                unreachable!("alternating nondegenerate form has a partner for every vector")
            };
            let y0 = rest.swap_remove(pos);
            let y = vec_scale(ctx, ctx.inv(self.b(&x, &y0)), &y0);
            arf = ctx.add(arf, ctx.mul(self.q(&x), self.q(&y)));
            // Project the remaining vectors onto {x, y}^⊥.
            for z in rest.iter_mut() {
                let bx = self.b(z, &x);
                let by = self.b(z, &y);
                // z ↦ z − ⟨z,y⟩x − ⟨z,x⟩y  (since ⟨x,y⟩ = 1, char 2)
                *z = z
                    .iter()
                    .zip(&x)
                    .zip(&y)
                    .map(|((&zi, &xi), &yi)| ctx.add(zi, ctx.add(ctx.mul(by, xi), ctx.mul(bx, yi))))
                    .collect();
            }
        }
        if ctx.trace(arf) == 0 {
            FormType::Split
        } else {
            FormType::NonSplit
        }
    }

    /// Type by greedy Witt decomposition (split off hyperbolic planes).
    pub fn witt_type(&self) -> Result<i8> {
        if self.dim() % 2 == 1 {
            return Err(Error::Precondition("Witt type is defined for even dimension".into()));
        }
        let dec = self.witt_decomposition(&[])?;
        Ok(if dec.anisotropic.is_empty() { 1 } else { -1 })
    }

    fn find_singular(&self, w: &Subspace) -> Option<Vector> {
        let ctx = &*self.ctx;
        let basis = w.basis_vectors();
        let k = basis.len().min(3);
        let mut found = None;
        for_each_vector(ctx, k, |c| {
            if found.is_none() && c.iter().any(|&x| x != 0) {
                let v = crate::linalg::combine(ctx, self.dim(), c, &basis[..k]);
                if self.q(&v) == 0 {
                    found = Some(v);
                }
            }
        });
        found
    }

    /// Hyperbolic pairs (the first ones completing `isotropic`) plus an
    /// anisotropic remainder of dimension 0, 1 or 2.
    pub fn witt_decomposition(&self, isotropic: &[Vector]) -> Result<WittDecomposition> {
        let ctx = &*self.ctx;
        let d = self.dim();
        let mut pairs: Vec<(Vector, Vector)> = Vec::new();
        for (i, e) in isotropic.iter().enumerate() {
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for (j, ej) in isotropic.iter().enumerate() {
                rows.push(self.bilinear.mul_vec(ctx, ej));
                rhs.push(if i == j { 1 } else { 0 });
            }
            for (_, fk) in &pairs {
                rows.push(self.bilinear.mul_vec(ctx, fk));
                rhs.push(0);
            }
            let f = solve(ctx, &Mat::from_rows(d, &rows), &rhs)?
                .ok_or_else(|| Error::Precondition("vectors are not independent and totally singular".into()))?;
            let qf = self.q(&f);
            let f = crate::linalg::axpy(ctx, ctx.neg(qf), e, &f);
            pairs.push((e.clone(), f));
        }
        let span_of = |pairs: &[(Vector, Vector)]| {
            let vs: Vec<Vector> = pairs.iter().flat_map(|(e, f)| [e.clone(), f.clone()]).collect();
            Subspace::from_vectors(ctx, d, &vs)
        };
        let mut w = self.perp(&span_of(&pairs));
        loop {
            let nonrad = w.dim() - self.radical.dim();
            if nonrad < 2 {
                break;
            }
            let Some(v) = self.find_singular(&w) else { break };
            let b = w
                .basis_vectors()
                .into_iter()
                .find(|b| self.b(&v, b) != 0)
                .ok_or_else(|| Error::Check("singular vector in the radical".into()))?;
            let b = vec_scale(ctx, ctx.inv(self.b(&v, &b)), &b);
            let f = crate::linalg::axpy(ctx, ctx.neg(self.q(&b)), &v, &b);
            pairs.push((v, f));
            w = w.intersect(ctx, &self.perp(&span_of(&pairs[pairs.len() - 1..])))?;
        }
        ensure!(w.dim() <= 2, "anisotropic remainder of dimension {}", w.dim());
        Ok(WittDecomposition { pairs, anisotropic: w.basis_vectors() })
    }

    /// Basis (as columns) carrying the standard model of this space's type onto Q,
    /// beginning with hyperbolic partners of `isotropic`.
    pub fn witt_basis_from(&self, isotropic: &[Vector]) -> Result<Mat> {
        let ctx = &*self.ctx;
        let form_type = self
            .form_type
            .ok_or_else(|| Error::Precondition("Witt basis of a form without a type".into()))?;
        let dec = self.witt_decomposition(isotropic)?;
        let d = self.dim();
        let target = standard_gram(ctx, d, form_type)?;
        let a = dec.anisotropic;
        let mut cols: Vec<Vector> = dec.pairs.iter().flat_map(|(e, f)| [e.clone(), f.clone()]).collect();
        let start = cols.len();
        ensure!(start + a.len() == d, "Witt decomposition does not span");
        match a.len() {
            0 => {}
            1 => {
                let want = target.get(start, start);
                let q0 = self.q(&a[0]);
                let t = ctx
                    .elements()
                    .find(|&t| t != 0 && ctx.mul(ctx.mul(t, t), q0) == want)
                    .ok_or_else(|| Error::Precondition("form is not isometric to the standard model".into()))?;
                cols.push(vec_scale(ctx, t, &a[0]));
            }
            _ => {
                let (t11, t12, t22) = (target.get(start, start), target.get(start, start + 1), target.get(start + 1, start + 1));
                let mut vecs = Vec::new();
                for_each_vector(ctx, 2, |c| vecs.push(crate::linalg::combine(ctx, d, c, &a)));
                let found = vecs.iter().filter(|u| self.q(u) == t11).find_map(|u1| {
                    vecs.iter().find(|u2| self.q(u2) == t22 && self.b(u1, u2) == t12).map(|u2| (u1.clone(), u2.clone()))
                });
                let (u1, u2) = found.ok_or_else(|| Error::Check("anisotropic planes failed to match".into()))?;
                cols.push(u1);
                cols.push(u2);
            }
        }
        let p = Mat::from_cols(d, &cols);
        ensure!(self.gram_on(&cols) == target, "Witt basis does not reproduce the standard model");
        Ok(p)
    }

    pub fn witt_basis(&self) -> Result<Mat> {
        self.witt_basis_from(&[])
    }

    /// Some isometry from `self` onto `other` (both nondegenerate, same type).
    pub fn isometry_to(&self, other: &QuadSpace) -> Result<Mat> {
        if self.dim() != other.dim() || self.form_type != other.form_type {
            return Err(Error::Precondition("spaces of different dimension or type".into()));
        }
        let a = self.witt_basis()?;
        let b = other.witt_basis()?;
        Ok(b.mul(&self.ctx, &a.inverse(&self.ctx).expect("basis")))
    }

    /// All totally singular subspaces of dimension k (exhaustive; small spaces).
    pub fn totally_singular_subspaces(&self, k: usize) -> Vec<Subspace> {
        let ctx = &*self.ctx;
        let d = self.dim();
        let mut singular = Vec::new();
        for_each_vector(ctx, d, |v| {
            if v.iter().any(|&x| x != 0) && self.q(v) == 0 {
                singular.push(v.to_vec());
            }
        });
        let mut level: std::collections::BTreeSet<Subspace> = std::collections::BTreeSet::new();
        level.insert(Subspace::zero(d));
        for _ in 0..k {
            let mut next = std::collections::BTreeSet::new();
            for s in &level {
                let sp = self.perp(s);
                for v in &singular {
                    if sp.contains(ctx, v) && !s.contains(ctx, v) {
                        let mut rows = s.basis_vectors();
                        rows.push(v.clone());
                        next.insert(Subspace::from_vectors(ctx, d, &rows));
                    }
                }
            }
            level = next;
        }
        level.into_iter().collect()
    }
}

#[derive(Clone, Debug)]
pub struct WittDecomposition {
    pub pairs: Vec<(Vector, Vector)>,
    pub anisotropic: Vec<Vector>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_of_order;

    fn ctx(q: u32) -> Arc<FieldCtx> {
        Arc::new(field_of_order(q).unwrap())
    }

    #[test]
    fn descriptors() {
        let d: SpaceDescriptor = "D4+".parse().unwrap();
        assert_eq!((d.dim, d.form_type), (4, FormType::Split));
        assert_eq!("D6-".parse::<SpaceDescriptor>().unwrap().form_type, FormType::NonSplit);
        assert_eq!("D5".parse::<SpaceDescriptor>().unwrap().form_type, FormType::Odd);
        assert!("D5+".parse::<SpaceDescriptor>().is_err());
        assert!("D4".parse::<SpaceDescriptor>().is_err());
        assert!("X4+".parse::<SpaceDescriptor>().is_err());
        assert_eq!(d.to_string(), "D4+");
    }

    #[test]
    fn small_standard_models() {
        let f = ctx(2);
        let s = standard_space(&f, 2, FormType::Split).unwrap();
        assert_eq!(s.totally_singular_subspaces(1).len(), 2);
        let n = standard_space(&f, 2, FormType::NonSplit).unwrap();
        assert_eq!(n.totally_singular_subspaces(1).len(), 0);
        for v in [[0, 1], [1, 0], [1, 1]] {
            assert_eq!(n.q(&v), 1);
        }
        let o = standard_space(&f, 3, FormType::Odd).unwrap();
        assert_eq!(o.radical().basis_vectors(), vec![vec![0, 0, 1]]);
        assert_eq!(o.q(&[0, 0, 1]), 1);
        assert!(standard_space(&f, 3, FormType::Split).is_err());
    }

    #[test]
    fn polarization_identity_and_alternation() {
        for q in [2, 3, 4, 5] {
            let f = ctx(q);
            for (d, t) in [(4, FormType::Split), (4, FormType::NonSplit), (3, FormType::Odd)] {
                let s = standard_space(&f, d, t).unwrap();
                let mut vs = Vec::new();
                for_each_vector(&f, d, |v| vs.push(v.to_vec()));
                for x in vs.iter().step_by(7) {
                    if f.is_char2() {
                        assert_eq!(s.b(x, x), 0);
                    }
                    for y in vs.iter().step_by(5) {
                        let xy: Vec<Elem> = x.iter().zip(y).map(|(&a, &b)| f.add(a, b)).collect();
                        assert_eq!(s.b(x, y), f.sub(f.sub(s.q(&xy), s.q(x)), s.q(y)));
                    }
                }
            }
        }
    }

    #[test]
    fn radical_dimension_by_characteristic() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = ctx(q);
            for d in 2..=7 {
                let t = if d % 2 == 1 { FormType::Odd } else { FormType::Split };
                let s = standard_space(&f, d, t).unwrap();
                let expect = usize::from(d % 2 == 1 && f.is_char2());
                assert_eq!(s.radical().dim(), expect);
            }
        }
    }

    #[test]
    fn witt_types_agree_with_invariants() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = ctx(q);
            for d in [2, 4, 6] {
                for t in [FormType::Split, FormType::NonSplit] {
                    let s = standard_space(&f, d, t).unwrap();
                    assert_eq!(s.witt_type().unwrap(), t.eta().unwrap());
                    assert_eq!(s.witt_type_by_invariant(), t);
                }
            }
        }
    }

    #[test]
    fn x2_plus_y2_over_gf3_is_nonsplit() {
        let f = ctx(3);
        let s = QuadSpace::new(f.clone(), Mat::from_rows(2, &[vec![1, 0], vec![0, 1]])).unwrap();
        assert_eq!(s.witt_type().unwrap(), -1);
        assert_eq!(s.witt_type_by_invariant(), FormType::NonSplit);
    }

    #[test]
    fn degenerate_forms_rejected() {
        let f = ctx(2);
        assert!(QuadSpace::new(f.clone(), Mat::zeros(2, 2)).is_err());
        let f3 = ctx(3);
        assert!(QuadSpace::new(f3, Mat::from_rows(3, &[vec![0, 1, 0], vec![0, 0, 0], vec![0, 0, 0]])).is_err());
    }

    #[test]
    fn perp_examples() {
        let f = ctx(2);
        let s = standard_space(&f, 4, FormType::Split).unwrap();
        assert!(s.perp(&Subspace::zero(4)).is_full());
        let plane = Subspace::from_vectors(&f, 4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        let other = Subspace::from_vectors(&f, 4, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
        assert_eq!(s.perp(&plane), other);
        let o = standard_space(&f, 3, FormType::Odd).unwrap();
        assert!(o.perp(o.radical()).is_full());
    }

    #[test]
    fn restrict_examples() {
        let f = ctx(2);
        let s = standard_space(&f, 2, FormType::Split).unwrap();
        assert!(s.restrict(&Subspace::full(2)).1);
        assert!(!s.restrict(&Subspace::from_vectors(&f, 2, &[vec![1, 0]])).1);
        let s4 = standard_space(&f, 4, FormType::Split).unwrap();
        assert!(s4.restrict(&Subspace::from_vectors(&f, 4, &[vec![1, 1, 0, 0]])).1);
    }

    #[test]
    fn quotient_forms() {
        let f = ctx(2);
        let s = standard_space(&f, 4, FormType::Split).unwrap();
        let (same, _) = s.quotient_form(&Subspace::zero(4)).unwrap();
        assert_eq!(same.dim(), 4);
        let line = Subspace::from_vectors(&f, 4, &[vec![1, 0, 0, 0]]);
        let (qf, quo) = s.quotient_form(&line).unwrap();
        assert_eq!((qf.dim(), qf.eta()), (2, Some(1)));
        // Q is constant on cosets of the line inside its perp.
        for v in quo.outer.basis_vectors() {
            let w: Vec<Elem> = v.iter().zip([1, 0, 0, 0]).map(|(&a, b)| f.add(a, b)).collect();
            assert_eq!(s.q(&v), s.q(&w));
        }
        let o = standard_space(&f, 3, FormType::Odd).unwrap();
        let (q1, _) = o.quotient_form(&Subspace::from_vectors(&f, 3, &[vec![1, 0, 0]])).unwrap();
        assert_eq!(q1.dim(), 1);
        assert_eq!(q1.radical().dim(), 1);
        assert!(s.quotient_form(&Subspace::from_vectors(&f, 4, &[vec![1, 1, 0, 0]])).is_err());
    }

    #[test]
    fn witt_basis_reproduces_standard_model() {
        for q in [2, 3, 4, 5] {
            let f = ctx(q);
            for (d, t) in [(2, FormType::NonSplit), (4, FormType::Split), (4, FormType::NonSplit), (5, FormType::Odd), (6, FormType::NonSplit)] {
                let s = standard_space(&f, d, t).unwrap();
                let p = s.witt_basis().unwrap();
                assert!(p.inverse(&f).is_some());
            }
        }
    }

    #[test]
    fn reference_subspace_is_maximal_totally_singular() {
        let f = ctx(3);
        let s = standard_space(&f, 6, FormType::Split).unwrap();
        let r = s.reference_ts().unwrap();
        assert_eq!(r.dim(), 3);
        assert!(s.is_totally_singular(r));
    }
}
