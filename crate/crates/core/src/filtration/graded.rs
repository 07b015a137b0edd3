//! The associated graded space gr = ⊕ gr^a with Q̄, degree-two maps T on it, and
//! the sets E² ⊇ E²_*.

use std::ops::Range;
use std::sync::Arc;

use super::{PieceLabel, QFiltration};
use crate::error::{ensure, Error, Result};
use crate::gf::FieldCtx;
use crate::linalg::{kernel, unit_vector, vector_from_index, Mat, Subspace, Vector};
use crate::quadspace::{standard_gram, FormType, QuadSpace};

/// A graded quadratic space: coordinates split into consecutive blocks of
/// ascending degree, with Q̄(x) = Q̄(x₀) + Σ_{a≥1} ⟨x_{−a}, x_a⟩.
#[derive(Clone, Debug)]
pub struct GradedSpace {
    pub qbar: QuadSpace,
    blocks: Vec<(i32, Range<usize>)>,
}

impl GradedSpace {
    fn from_blocks(ctx: &Arc<FieldCtx>, blocks: Vec<(i32, Range<usize>)>, gram: Mat, typed: bool) -> Result<Self> {
        let qbar = if typed { QuadSpace::new(ctx.clone(), gram)? } else { QuadSpace::new_untyped(ctx.clone(), gram)? };
        Ok(GradedSpace { qbar, blocks })
    }

    /// The standard graded model with dim gr^a = f_a: identity pairings between
    /// gr^{−a} and gr^a, and the standard form of the right type on gr^0.
    pub fn model(ctx: &Arc<FieldCtx>, label: &PieceLabel, form_type: FormType) -> Result<Self> {
        let top = label.max_degree();
        let d = label.dim();
        form_type.check_dim(d)?;
        let zero_type = match form_type {
            FormType::Odd => FormType::Odd,
            t if label.f(0) > 0 => t,
            FormType::Split => FormType::Split,
            FormType::NonSplit => return Err(Error::Precondition("f_0 = 0 needs a split space".into())),
        };
        let mut blocks = Vec::new();
        let mut at = 0;
        for a in -top..=top {
            let fa = label.f(a);
            if fa > 0 {
                blocks.push((a, at..at + fa));
                at += fa;
            }
        }
        let mut gram = Mat::zeros(d, d);
        let find = |a: i32| blocks.iter().find(|(b, _)| *b == a).map(|(_, r)| r.clone());
        if let Some(r) = find(0) {
            let g0 = standard_gram(ctx, r.len(), zero_type)?;
            for i in 0..r.len() {
                for j in 0..r.len() {
                    gram.set(r.start + i, r.start + j, g0.get(i, j));
                }
            }
        }
        for a in 1..=top {
            if let (Some(neg), Some(pos)) = (find(-a), find(a)) {
                for i in 0..neg.len() {
                    gram.set(neg.start + i, pos.start + i, 1);
                }
            }
        }
        Self::from_blocks(ctx, blocks, gram, true)
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.qbar.ctx()
    }

    pub fn dim(&self) -> usize {
        self.qbar.dim()
    }

    /// Coordinates of gr^a (empty if gr^a = 0).
    pub fn block(&self, a: i32) -> Range<usize> {
        self.blocks.iter().find(|(b, _)| *b == a).map(|(_, r)| r.clone()).unwrap_or(0..0)
    }

    pub fn f(&self, a: i32) -> usize {
        self.block(a).len()
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.blocks.iter().map(|(a, _)| *a).collect()
    }

    pub fn max_degree(&self) -> i32 {
        self.blocks.iter().map(|(a, _)| a.abs()).max().unwrap_or(0)
    }

    pub fn label(&self) -> PieceLabel {
        let top = self.max_degree();
        PieceLabel::new((0..=top).map(|a| self.f(a)).collect(), None)
    }

    /// X^{≥a} = ⊕_{b≥a} gr^b.
    pub fn filtration(&self) -> QFiltration {
        let d = self.dim();
        let ctx = self.ctx();
        let top = self.max_degree();
        let levels = (-top..=top + 1)
            .map(|a| {
                let vs: Vec<Vector> =
                    self.blocks.iter().filter(|(b, _)| *b >= a).flat_map(|(_, r)| r.clone()).map(|i| unit_vector(d, i)).collect();
                Subspace::from_vectors(ctx, d, &vs)
            })
            .collect();
        QFiltration::new(d, -top, levels)
    }

    /// Unit vectors of gr^a.
    pub fn block_vectors(&self, a: i32) -> Vec<Vector> {
        self.block(a).map(|i| unit_vector(self.dim(), i)).collect()
    }

    /// T(gr^a) ⊆ gr^{a+2}.
    pub fn is_degree_two(&self, t: &Mat) -> bool {
        self.blocks.iter().all(|(a, cols)| {
            let target = self.block(a + 2);
            cols.clone().all(|j| (0..self.dim()).all(|i| t.get(i, j) == 0 || target.contains(&i)))
        })
    }

    /// Degree two, ⟨Tx,y⟩ + ⟨x,Ty⟩ = 0, and ⟨x,Tx⟩ = 0 on gr^{−1}.
    pub fn in_e2(&self, t: &Mat) -> bool {
        if !self.is_degree_two(t) {
            return false;
        }
        let ctx = self.ctx();
        let b = self.qbar.bilinear();
        let bt = b.mul(ctx, t);
        if !bt.add(ctx, &t.transpose().mul(ctx, b)).is_zero() {
            return false;
        }
        self.block(-1).all(|i| bt.get(i, i) == 0)
    }

    /// x ↦ Q̄(T^{a/2}x) nondegenerate on gr^{−a} for even a ≥ 2, and
    /// (x, y) ↦ ⟨x, T^a y⟩ nondegenerate on gr^{−a} for odd a.
    pub fn star_conditions(&self, t: &Mat) -> bool {
        let ctx = self.ctx();
        let mut power = t.clone();
        for a in 1..=self.max_degree() {
            if a > 1 {
                power = power.mul(ctx, t);
            }
            if self.f(a) == 0 {
                continue;
            }
            let xs = self.block_vectors(-a);
            let ok = if a % 2 == 1 {
                let images: Vec<Vector> = xs.iter().map(|x| power.mul_vec(ctx, x)).collect();
                let m = Mat::from_rows(xs.len(), &xs.iter().map(|x| images.iter().map(|y| self.qbar.b(x, y)).collect()).collect::<Vec<_>>());
                m.rank(ctx) == xs.len()
            } else {
                let half = t.pow(ctx, (a / 2) as u32);
                let images: Vec<Vector> = xs.iter().map(|x| half.mul_vec(ctx, x)).collect();
                QuadSpace::gram_is_nondegenerate(self.qbar.ctx_arc(), self.qbar.gram_on(&images))
            };
            if !ok {
                return false;
            }
        }
        true
    }

    pub fn in_e2_star(&self, t: &Mat) -> bool {
        self.in_e2(t) && self.star_conditions(t)
    }

    /// dim ker(T^a : gr^{−a} → gr^a) for a = 1..=max degree (index 0 unused).
    pub fn kernel_dims(&self, t: &Mat) -> Vec<usize> {
        let ctx = self.ctx();
        let top = self.max_degree().max(0) as usize;
        let mut out = vec![0; top + 1];
        for (a, slot) in out.iter_mut().enumerate().skip(1) {
            let cols = self.block(-(a as i32));
            if cols.is_empty() {
                continue;
            }
            let m = t.pow(ctx, a as u32).col_block(cols);
            *slot = m.cols() - m.rank(ctx);
        }
        out
    }

    /// A basis of E² as a vector space of matrices.
    pub fn e2_basis(&self) -> Vec<Mat> {
        let ctx = self.ctx();
        let d = self.dim();
        let vars: Vec<(usize, usize)> = self
            .blocks
            .iter()
            .flat_map(|(a, cols)| {
                let rows = self.block(a + 2);
                cols.clone().flat_map(move |j| rows.clone().map(move |i| (i, j)))
            })
            .collect();
        let b = self.qbar.bilinear();
        let mut constraints = Vec::new();
        // (BT + TᵀB)_{rs} = Σ_i B_{ri} T_{is} + Σ_i T_{ir} B_{is}.
        for r in 0..d {
            for s in 0..d {
                let row: Vector = vars
                    .iter()
                    .map(|&(i, j)| {
                        let mut c = 0;
                        if j == s {
                            c = ctx.add(c, b.get(r, i));
                        }
                        if j == r {
                            c = ctx.add(c, b.get(i, s));
                        }
                        c
                    })
                    .collect();
                constraints.push(row);
            }
        }
        if ctx.is_char2() {
            for r in self.block(-1) {
                constraints.push(vars.iter().map(|&(i, j)| if j == r { b.get(r, i) } else { 0 }).collect());
            }
        }
        let sol = kernel(ctx, &Mat::from_rows(vars.len(), &constraints));
        sol.basis_vectors()
            .into_iter()
            .map(|v| {
                let mut t = Mat::zeros(d, d);
                for (&(i, j), &c) in vars.iter().zip(&v) {
                    t.set(i, j, c);
                }
                t
            })
            .collect()
    }

    /// Visit every element of E², refusing more than `guard` of them.
    pub fn for_each_e2(&self, guard: u64, mut f: impl FnMut(&Mat)) -> Result<()> {
        let ctx = self.ctx();
        let basis = self.e2_basis();
        let total = (ctx.q() as u64).checked_pow(basis.len() as u32).filter(|&n| n <= guard);
        let total = total.ok_or_else(|| Error::Guard(format!("E² has q^{} elements", basis.len())))?;
        let d = self.dim();
        for idx in 0..total {
            let coeffs = vector_from_index(ctx, basis.len(), idx);
            let mut t = Mat::zeros(d, d);
            for (c, m) in coeffs.iter().zip(&basis) {
                if *c != 0 {
                    t = t.add(ctx, &m.scale(ctx, *c));
                }
            }
            f(&t);
        }
        Ok(())
    }

    /// The L_i of a class label: for every odd i = f_a with a ≥ 0 even, the radical
    /// of ⟨,⟩ on T^{a/2}(gr^{−a}) ⊆ gr^0 (a line). Returns (i, line) pairs.
    pub fn class_lines(&self, t: &Mat) -> Result<Vec<(usize, Subspace)>> {
        let ctx = self.ctx();
        let d = self.dim();
        let mut out: Vec<(usize, Subspace)> = Vec::new();
        for a in (0..=self.max_degree()).step_by(2) {
            let i = self.f(a);
            if i % 2 == 0 {
                continue;
            }
            let half = t.pow(ctx, (a / 2) as u32);
            let zs: Vec<Vector> = self.block_vectors(-a).iter().map(|x| half.mul_vec(ctx, x)).collect();
            let z = Subspace::from_vectors(ctx, d, &zs);
            ensure!(z.dim() == i, "T^{} is not injective on gr^{}", a / 2, -a);
            let zb = z.basis_vectors();
            let gram = Mat::from_rows(zb.len(), &zb.iter().map(|x| zb.iter().map(|y| self.qbar.b(x, y)).collect()).collect::<Vec<_>>());
            let rad = kernel(ctx, &gram);
            ensure!(rad.dim() == 1, "radical of ⟨,⟩ on Z_{i} has dimension {}", rad.dim());
            let coeffs = rad.basis().row(0).to_vec();
            let line = Subspace::from_vectors(ctx, d, &[crate::linalg::combine(ctx, d, &coeffs, &zb)]);
            if let Some((_, prev)) = out.iter().find(|(j, _)| *j == i) {
                ensure!(*prev == line, "L_{i} depends on the degree chosen");
            } else {
                out.push((i, line));
            }
        }
        Ok(out)
    }
}

/// gr of a Q-filtration realized on an adapted basis of V: column block a of
/// `basis` spans a complement of X^{≥a+1} in X^{≥a}.
#[derive(Clone, Debug)]
pub struct GradedView {
    pub graded: GradedSpace,
    pub basis: Mat,
    pub basis_inv: Mat,
}

impl GradedView {
    pub fn new(space: &QuadSpace, filt: &QFiltration) -> Result<Self> {
        Self::with_offsets(space, filt, &[])
    }

    /// As [`Self::new`], with the complement of degree a shifted by the given
    /// vectors of X^{≥a+1} (to test independence of the section).
    pub fn with_offsets(space: &QuadSpace, filt: &QFiltration, offsets: &[(i32, Vector)]) -> Result<Self> {
        let ctx = space.ctx();
        let d = space.dim();
        let mut blocks = Vec::new();
        let mut cols: Vec<Vector> = Vec::with_capacity(d);
        let mut chosen: Vec<(i32, Vec<Vector>)> = Vec::new();
        for a in filt.degrees() {
            let mut c = filt.at(a + 1).complement_in(ctx, filt.at(a));
            for (b, v) in offsets {
                if *b == a {
                    ensure!(filt.at(a + 1).contains(ctx, v), "offset is not in X^(≥{})", a + 1);
                    for x in c.iter_mut() {
                        *x = crate::linalg::axpy(ctx, 1, v, x);
                    }
                }
            }
            blocks.push((a, cols.len()..cols.len() + c.len()));
            cols.extend(c.iter().cloned());
            chosen.push((a, c));
        }
        ensure!(cols.len() == d, "complements do not fill V");
        let basis = Mat::from_cols(d, &cols);
        let basis_inv = basis.inverse(ctx).ok_or_else(|| Error::Check("adapted basis is singular".into()))?;
        let mut gram = Mat::zeros(d, d);
        let range = |a: i32| blocks.iter().find(|(b, _)| *b == a).map(|(_, r): &(i32, Range<usize>)| r.clone());
        for (a, c) in &chosen {
            if *a == 0 {
                let g = space.gram_on(c);
                let r = range(0).unwrap();
                for i in 0..c.len() {
                    for j in 0..c.len() {
                        gram.set(r.start + i, r.start + j, g.get(i, j));
                    }
                }
            } else if *a > 0 {
                let (Some(neg), Some((_, cneg))) = (range(-a), chosen.iter().find(|(b, _)| *b == -a)) else {
                    return Err(Error::Check(format!("gr^{a} ≠ 0 but gr^{} = 0", -a)));
                };
                let pos = range(*a).unwrap();
                for (i, x) in cneg.iter().enumerate() {
                    for (j, y) in c.iter().enumerate() {
                        gram.set(neg.start + i, pos.start + j, space.b(x, y));
                    }
                }
            }
        }
        let graded = GradedSpace::from_blocks(space.ctx_arc(), blocks, gram, false)?;
        Ok(GradedView { graded, basis, basis_inv })
    }

    /// P⁻¹ N P in adapted coordinates.
    pub fn adapted_coords(&self, n: &Mat) -> Mat {
        let ctx = self.graded.ctx();
        self.basis_inv.mul(ctx, n).mul(ctx, &self.basis)
    }

    /// N̄ : gr^a → gr^{a+2}, or None if N X^{≥a} ⊄ X^{≥a+2} for some a.
    pub fn graded_part(&self, n: &Mat) -> Option<Mat> {
        let m = self.adapted_coords(n);
        let g = &self.graded;
        let d = g.dim();
        let mut t = Mat::zeros(d, d);
        for a in g.degrees() {
            for b in g.degrees() {
                let (rows, cols) = (g.block(b), g.block(a));
                for i in rows.clone() {
                    for j in cols.clone() {
                        let v = m.get(i, j);
                        if v == 0 {
                            continue;
                        }
                        if b < a + 2 {
                            return None;
                        }
                        if b == a + 2 {
                            t.set(i, j, v);
                        }
                    }
                }
            }
        }
        Some(t)
    }
}

/// Whether a filtration is a Q-filtration with N X^{≥a} ⊆ X^{≥a+2} and N̄ ∈ E²_*.
pub fn is_adapted(space: &QuadSpace, filt: &QFiltration, n: &Mat) -> Result<bool> {
    if !filt.is_q_filtration(space) {
        return Ok(false);
    }
    let view = GradedView::new(space, filt)?;
    Ok(view.graded_part(n).is_some_and(|t| view.graded.in_e2_star(&t)))
}
