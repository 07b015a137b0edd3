//! Splittings V = ⊕ X^a of a Q-filtration, and lifting a graded map T ∈ E² to
//! some N ∈ 𝔪_Q with N X^{≥a} ⊆ X^{≥a+2} and N̄ = T.

use std::collections::BTreeMap;

use super::{GradedSpace, QFiltration};
use crate::error::{ensure, Error, Result};
use crate::linalg::{solve, Mat, Subspace, Vector};
use crate::nilpotent::{Membership, NilpotentWitness};
use crate::quadspace::QuadSpace;

/// V = ⊕ X^a with X^{≥a} = ⊕_{b≥a} X^b, ⟨X^a, X^b⟩ = 0 unless a + b = 0, and Q
/// zero on X^a for a ≠ 0. For a > 0 the bases of X^a and X^{−a} are dual.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub parts: BTreeMap<i32, Vec<Vector>>,
}

impl Splitting {
    pub fn part(&self, a: i32) -> &[Vector] {
        self.parts.get(&a).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All basis vectors as columns, ascending degree.
    pub fn basis(&self, d: usize) -> Mat {
        Mat::from_cols(d, &self.parts.values().flatten().cloned().collect::<Vec<_>>())
    }

    /// The graded model of this splitting: gr^a = X^a with Q̄ in the chosen basis.
    pub fn graded(&self, space: &QuadSpace) -> Result<(GradedSpace, Mat)> {
        let filt_label = {
            let top = self.parts.keys().map(|a| a.abs()).max().unwrap_or(0);
            super::PieceLabel::new((0..=top).map(|a| self.part(a).len()).collect(), None)
        };
        let form_type = space.form_type().ok_or_else(|| Error::Precondition("typed space expected".into()))?;
        let model = GradedSpace::model(space.ctx_arc(), &filt_label, form_type)?;
        Ok((model, self.basis(space.dim())))
    }
}

pub fn split_filtration(space: &QuadSpace, filt: &QFiltration) -> Result<Splitting> {
    filt.check_q_filtration(space)?;
    let ctx = space.ctx();
    let d = space.dim();
    let mut parts: BTreeMap<i32, Vec<Vector>> = BTreeMap::new();
    let mut done: Vec<Vector> = Vec::new();
    for a in (1..=filt.max_degree()).rev() {
        let h = Subspace::from_vectors(ctx, d, &done);
        let u = space.perp(&h);
        let c = filt.at(a).intersect(ctx, &u)?.basis_vectors();
        ensure!(c.len() == filt.f(a), "X^(≥{a}) ∩ H^⊥ has the wrong dimension");
        let mut duals: Vec<Vector> = Vec::with_capacity(c.len());
        for i in 0..c.len() {
            // ⟨x, h⟩ = 0 on H, ⟨x, c_j⟩ = δ_ij, ⟨x, d_k⟩ = 0 for earlier duals.
            let mut rows: Vec<Vector> = Vec::new();
            let mut rhs: Vec<u8> = Vec::new();
            let b = space.bilinear();
            for v in done.iter().chain(duals.iter()) {
                rows.push(b.mul_vec(ctx, v));
                rhs.push(0);
            }
            for (j, cj) in c.iter().enumerate() {
                rows.push(b.mul_vec(ctx, cj));
                rhs.push(u8::from(i == j));
            }
            let x = solve(ctx, &Mat::from_rows(d, &rows), &rhs)?
                .ok_or_else(|| Error::Check(format!("no dual vector in degree {}", -a)))?;
            let qx = space.q(&x);
            duals.push(crate::linalg::axpy(ctx, ctx.neg(qx), &c[i], &x));
        }
        done.extend(c.iter().cloned());
        done.extend(duals.iter().cloned());
        if !c.is_empty() {
            parts.insert(a, c);
            parts.insert(-a, duals);
        }
    }
    let h = Subspace::from_vectors(ctx, d, &done);
    let rest = space.perp(&h).basis_vectors();
    if !rest.is_empty() {
        parts.insert(0, rest);
    }
    let split = Splitting { parts };
    check_splitting(space, filt, &split)?;
    Ok(split)
}

fn check_splitting(space: &QuadSpace, filt: &QFiltration, s: &Splitting) -> Result<()> {
    let ctx = space.ctx();
    let d = space.dim();
    for a in filt.lo() - 1..=filt.hi() {
        let vs: Vec<Vector> = s.parts.range(a..).flat_map(|(_, v)| v.iter().cloned()).collect();
        ensure!(vs.len() == filt.at(a).dim() && Subspace::from_vectors(ctx, d, &vs) == *filt.at(a), "⊕_(b≥{a}) X^b ≠ X^(≥{a})");
    }
    for (&a, xs) in &s.parts {
        for (&b, ys) in &s.parts {
            for (i, x) in xs.iter().enumerate() {
                for (j, y) in ys.iter().enumerate() {
                    let v = space.b(x, y);
                    if a + b != 0 {
                        ensure!(v == 0, "⟨X^{a}, X^{b}⟩ ≠ 0");
                    } else if a > 0 {
                        ensure!(v == u8::from(i == j), "X^{a} and X^{b} bases are not dual");
                    }
                }
            }
            if a != 0 {
                ensure!(xs.iter().all(|x| space.q(x) == 0), "Q ≠ 0 on X^{a}");
            }
        }
    }
    Ok(())
}

/// Build N with N̄ = T (T given in splitting coordinates, degree two) by solving
/// the pairing equations level by level; at each level one unknown of every pair
/// is set to zero.
pub fn lift_to_filtration(space: &QuadSpace, split: &Splitting, t: &Mat) -> Result<NilpotentWitness> {
    let ctx = space.ctx();
    let d = space.dim();
    let p = split.basis(d);
    let pinv = p.inverse(ctx).ok_or_else(|| Error::Check("splitting basis is singular".into()))?;
    let mut ranges: BTreeMap<i32, std::ops::Range<usize>> = BTreeMap::new();
    let mut at = 0;
    for (&a, v) in &split.parts {
        ranges.insert(a, at..at + v.len());
        at += v.len();
    }
    let bp = p.transpose().mul(ctx, space.bilinear()).mul(ctx, &p);
    let gram = |a: i32, b: i32| bp.block(ranges[&a].clone(), ranges[&b].clone());
    let degs: Vec<i32> = ranges.keys().copied().collect();
    let mut blocks: BTreeMap<(i32, i32), Mat> = BTreeMap::new();
    for &a in &degs {
        if ranges.contains_key(&(a + 2)) {
            blocks.insert((a, a + 2), t.block(ranges[&(a + 2)].clone(), ranges[&a].clone()));
        }
    }
    let blk = |blocks: &BTreeMap<(i32, i32), Mat>, a: i32, b: i32| -> Mat {
        blocks.get(&(a, b)).cloned().unwrap_or_else(|| Mat::zeros(ranges[&b].len(), ranges[&a].len()))
    };
    let top = degs.iter().map(|a| a.abs()).max().unwrap_or(0);
    let x0 = split.part(0).to_vec();
    for k in 3..=2 * top {
        for &a in &degs {
            for &a2 in &degs {
                // Unknowns N^{a2}_{−a} and N^a_{−a2}, both of shift k = −a − a2.
                if -a - a2 != k || a >= a2 {
                    continue;
                }
                let mut rhs = Mat::zeros(ranges[&a].len(), ranges[&a2].len());
                for &b in &degs {
                    if b >= a + 2 && -b >= a2 + 2 && ranges.contains_key(&-b) {
                        let term = blk(&blocks, a, b).transpose().mul(ctx, &gram(b, -b)).mul(ctx, &blk(&blocks, a2, -b));
                        rhs = rhs.sub(ctx, &term);
                    }
                }
                if a2 != 0 {
                    // (N^a_{−a2})ᵀ G_{−a2,a2} = rhs.
                    let g = gram(-a2, a2).inverse(ctx).ok_or_else(|| Error::Check("singular pairing".into()))?;
                    blocks.insert((a, -a2), rhs.mul(ctx, &g).transpose());
                } else {
                    // G_{a,−a} N^{a2}_{−a} = rhs.
                    let g = gram(a, -a).inverse(ctx).ok_or_else(|| Error::Check("singular pairing".into()))?;
                    blocks.insert((a2, -a), g.mul(ctx, &rhs));
                }
            }
            if k % 2 == 0 && a == -k / 2 && ranges.contains_key(&-a) {
                // ⟨x, N^a_{−a} x⟩ = −Q(N^a_0 x) − Σ_{b<0} ⟨N^a_b x, N^a_{−b} x⟩.
                let f = ranges[&a].len();
                let n0 = ranges.contains_key(&0).then(|| blk(&blocks, a, 0));
                let target = |x: &[u8]| -> u8 {
                    let mut s = 0;
                    if let Some(n0) = &n0 {
                        let y = crate::linalg::combine(ctx, d, &n0.mul_vec(ctx, x), &x0);
                        s = ctx.sub(s, space.q(&y));
                    }
                    for &b in &degs {
                        if b < 0 && b >= a + 2 && ranges.contains_key(&-b) {
                            let u = blk(&blocks, a, b).mul_vec(ctx, x);
                            let v = blk(&blocks, a, -b).mul_vec(ctx, x);
                            let g = gram(b, -b);
                            s = ctx.sub(s, crate::linalg::dot(ctx, &u, &g.mul_vec(ctx, &v)));
                        }
                    }
                    s
                };
                let units: Vec<Vector> = (0..f).map(|i| crate::linalg::unit_vector(f, i)).collect();
                let mut upper = Mat::zeros(f, f);
                for i in 0..f {
                    let fi = target(&units[i]);
                    upper.set(i, i, fi);
                    for j in i + 1..f {
                        let s: Vector = units[i].iter().zip(&units[j]).map(|(&x, &y)| ctx.add(x, y)).collect();
                        upper.set(i, j, ctx.sub(ctx.sub(target(&s), fi), target(&units[j])));
                    }
                }
                let g = gram(a, -a).inverse(ctx).ok_or_else(|| Error::Check("singular pairing".into()))?;
                blocks.insert((a, -a), g.mul(ctx, &upper));
            }
        }
    }
    let mut m = Mat::zeros(d, d);
    for ((a, b), blk) in &blocks {
        let (rows, cols) = (ranges[b].clone(), ranges[a].clone());
        for (i, r) in rows.enumerate() {
            for (j, c) in cols.clone().enumerate() {
                m.set(r, c, blk.get(i, j));
            }
        }
    }
    let n = p.mul(ctx, &m).mul(ctx, &pinv);
    let w = NilpotentWitness::new(space.clone(), n)?;
    if ctx.is_char2() && space.dim() % 2 == 0 {
        ensure!(w.membership()? == Membership::InCm, "lift is not in 𝔪_Q");
    }
    Ok(w)
}
