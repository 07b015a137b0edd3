//! The nilpotent shadow of a unipotent element in characteristic 2: N̄ on gr,
//! transported to V by an isometry gr ≅ V.

use serde::Serialize;

use super::{canonical_filtration, GradedView};
use crate::error::{ensure, Error, Result};
use crate::linalg::{kernel, Mat};
use crate::nilpotent::NilpotentWitness;
use crate::quadspace::QuadSpace;

/// Conjugation invariants of ∇ under the full orthogonal group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ShadowInvariants {
    /// rank ∇^k for k = 0, 1, …, D.
    pub ranks: Vec<usize>,
    /// For 0 ≤ j < k ≤ e: whether Q vanishes on ∇^j(ker ∇^k).
    pub q_vanishes: Vec<Vec<bool>>,
    /// For 0 ≤ j < k ≤ e: rank of (x, y) ↦ ⟨x, ∇^j y⟩ on ker ∇^k.
    pub pairing_ranks: Vec<Vec<usize>>,
}

impl ShadowInvariants {
    /// Jordan block sizes, largest first.
    pub fn partition(&self) -> Vec<usize> {
        let r = &self.ranks;
        let mut out = Vec::new();
        for k in 1..r.len() {
            let at_least_k = r[k - 1] - r[k];
            let at_least_next = r[k] - r.get(k + 1).copied().unwrap_or(0);
            out.extend(std::iter::repeat_n(k, at_least_k - at_least_next));
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

/// ∇ ∈ 𝔫_Q together with its invariants.
#[derive(Clone, Debug)]
pub struct Shadow {
    pub nabla: Mat,
    pub invariants: ShadowInvariants,
}

/// Whether ∇ is nilpotent with ⟨x,∇y⟩ + ⟨∇x,y⟩ = 0 and ⟨x,∇x⟩ = 0.
pub fn in_nilpotent_lie(space: &QuadSpace, nabla: &Mat) -> bool {
    let ctx = space.ctx();
    let b = space.bilinear();
    let bn = b.mul(ctx, nabla);
    let skew = bn.add(ctx, &nabla.transpose().mul(ctx, b));
    // ⟨x,∇x⟩ = Σ_ij x_i (B∇)_ij x_j vanishes for all x iff B∇ is alternating.
    let alternating = skew.is_zero() && (0..space.dim()).all(|i| bn.get(i, i) == 0);
    alternating && nabla.nilpotency_index(ctx).is_some()
}

pub fn shadow_invariants(space: &QuadSpace, nabla: &Mat) -> ShadowInvariants {
    let ctx = space.ctx();
    let d = space.dim();
    let powers: Vec<Mat> = (0..=d).map(|k| nabla.pow(ctx, k as u32)).collect();
    let ranks: Vec<usize> = powers.iter().map(|p| p.rank(ctx)).collect();
    let e = ranks.iter().position(|&r| r == 0).unwrap_or(d);
    let mut q_vanishes = Vec::new();
    let mut pairing_ranks = Vec::new();
    for k in 1..=e {
        let ker = kernel(ctx, &powers[k]).basis_vectors();
        let mut qv = Vec::new();
        let mut pr = Vec::new();
        for pj in &powers[..k] {
            let img: Vec<_> = ker.iter().map(|x| pj.mul_vec(ctx, x)).collect();
            qv.push(space.gram_on(&img).is_zero());
            let pairing = Mat::from_data(ker.len(), ker.len(), {
                let mut v = Vec::with_capacity(ker.len() * ker.len());
                for x in &ker {
                    for y in &img {
                        v.push(space.b(x, y));
                    }
                }
                v
            });
            pr.push(pairing.rank(ctx));
        }
        q_vanishes.push(qv);
        pairing_ranks.push(pr);
    }
    ShadowInvariants { ranks, q_vanishes, pairing_ranks }
}

/// The shadow of a unipotent u ∈ SO_Q (characteristic 2). The isometry gr ≅ V is
/// any isometry; it is not chosen to match components of maximal totally
/// singular subspaces.
pub fn nilpotent_shadow(space: &QuadSpace, u: &Mat) -> Result<Shadow> {
    let ctx = space.ctx();
    if !ctx.is_char2() {
        return Err(Error::Precondition("the nilpotent shadow is defined in characteristic 2".into()));
    }
    let w = NilpotentWitness::from_unipotent(space.clone(), u)?;
    let filt = canonical_filtration(&w)?;
    let view = GradedView::new(space, &filt)?;
    let t = view.graded_part(w.n()).ok_or_else(|| Error::Check("N does not raise its canonical filtration by 2".into()))?;
    let qbar = QuadSpace::new(space.ctx_arc().clone(), view.graded.qbar.gram().clone())?;
    ensure!(in_nilpotent_lie(&qbar, &t), "N̄ ∉ 𝔫 of the graded form");
    let iso = qbar.isometry_to(space)?;
    let iso_inv = iso.inverse(ctx).ok_or_else(|| Error::Check("isometry is singular".into()))?;
    let nabla = iso.mul(ctx, &t).mul(ctx, &iso_inv);
    ensure!(in_nilpotent_lie(space, &nabla), "∇ ∉ 𝔫_Q");
    let invariants = shadow_invariants(space, &nabla);
    Ok(Shadow { nabla, invariants })
}
