//! Brute-force counts by literal enumeration, independent of the formulas.

use std::collections::HashMap;

use super::Side;
use crate::error::{ensure, Error, Result};
use crate::filtration::GradedSpace;
use crate::gf::FieldCtx;
use crate::linalg::{for_each_subspace, vector_from_index, Mat, Subspace};
use crate::nilpotent::{membership, Membership};
use crate::quadspace::{FormType, IsometrySearch, QuadSpace};

fn nondegenerate_type(space: &QuadSpace, w: &Subspace) -> Option<Side> {
    let (sub, nd) = space.restrict(w);
    nd.then(|| Side::of_type(sub.form_type().expect("nondegenerate restrictions are typed")))
}

/// The number of k-dimensional subspaces on which Q is nondegenerate, of type
/// `filter` when given.
pub fn bf_count_subspaces(space: &QuadSpace, k: usize, filter: Option<Side>) -> u64 {
    if k == 0 {
        return 1;
    }
    let ctx = space.ctx();
    let mut count = 0;
    for_each_subspace(ctx, space.dim(), k, |m| {
        let w = Subspace::from_matrix_rows(ctx, m.clone());
        if let Some(t) = nondegenerate_type(space, &w) {
            if filter.is_none_or(|f| f == t) {
                count += 1;
            }
        }
    });
    count
}

/// The number of chains U_0 = V ⊇ U_1 ⊇ … of nondegenerate subspaces with the
/// given dimensions (the first entry must be dim V). Counts below a subspace
/// are cached by its dimension and isometry type.
pub fn bf_count_flags(space: &QuadSpace, dims: &[usize]) -> Result<u64> {
    ensure!(dims.first() == Some(&space.dim()), "flag dimensions {dims:?} must start at dim V = {}", space.dim());
    let mut memo = HashMap::new();
    Ok(flags_below(space, dims, &mut memo))
}

fn flags_below(space: &QuadSpace, dims: &[usize], memo: &mut HashMap<(Option<FormType>, Vec<usize>), u64>) -> u64 {
    let rest: Vec<usize> = dims[1..].iter().copied().filter(|&x| x > 0).collect();
    if rest.is_empty() {
        return 1;
    }
    let key = (space.form_type(), rest.clone());
    if let Some(&c) = memo.get(&key) {
        return c;
    }
    let ctx = space.ctx();
    let mut total = 0;
    let mut subs = Vec::new();
    for_each_subspace(ctx, space.dim(), rest[0], |m| subs.push(Subspace::from_matrix_rows(ctx, m.clone())));
    for w in subs {
        let (sub, nd) = space.restrict(&w);
        if nd {
            total += flags_below(&sub, &rest, memo);
        }
    }
    memo.insert(key, total);
    total
}

/// The standard alternating form on GF(q)^m (m even).
pub fn standard_symplectic(ctx: &FieldCtx, m: usize) -> Mat {
    let h = m / 2;
    let mut j = Mat::zeros(m, m);
    for i in 0..h {
        j.set(i, i + h, 1);
        j.set(i + h, i, ctx.neg(1));
    }
    j
}

/// The number of chains of nondegenerate subspaces of a symplectic space of
/// dimension dims[0] with the given dimensions.
pub fn bf_count_symplectic_flags(ctx: &FieldCtx, dims: &[usize]) -> Result<u64> {
    let Some(&top) = dims.first() else { return Ok(1) };
    if top % 2 == 1 || dims.iter().any(|&x| x % 2 == 1) || dims.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Precondition(format!("symplectic flag dimensions {dims:?} must be even and descending")));
    }
    let rest: Vec<usize> = dims[1..].iter().copied().filter(|&x| x > 0).collect();
    let Some(&k) = rest.first() else { return Ok(1) };
    let form = standard_symplectic(ctx, top);
    let mut here = 0;
    for_each_subspace(ctx, top, k, |m| {
        if m.mul(ctx, &form).mul(ctx, &m.transpose()).rank(ctx) == k {
            here += 1;
        }
    });
    // Every nondegenerate alternating space of dimension k is isometric to the standard one.
    Ok(here * bf_count_symplectic_flags(ctx, &rest)?)
}

/// |GL_m(q)| by scanning all m×m matrices.
pub fn bf_gl_order(ctx: &FieldCtx, m: usize, guard: u64) -> Result<u64> {
    let total = (ctx.q() as u64).checked_pow((m * m) as u32).filter(|&n| n <= guard);
    let total = total.ok_or_else(|| Error::Guard(format!("GL_{m}({}) scan", ctx.q())))?;
    let mut count = 0;
    for idx in 0..total {
        let g = Mat::from_data(m, m, vector_from_index(ctx, m * m, idx));
        if g.rank(ctx) == m {
            count += 1;
        }
    }
    Ok(count)
}

/// |Sp_m(q)| by isometry search.
pub fn bf_sp_order(ctx: &FieldCtx, m: usize) -> u64 {
    IsometrySearch::new(ctx, standard_symplectic(ctx, m), Some(Mat::zeros(m, m))).count()
}

/// |O_Q| by isometry search.
pub fn bf_orthogonal_order(space: &QuadSpace) -> u64 {
    IsometrySearch::for_space(space).count()
}

/// |E²_*| of a graded space, by enumerating E².
pub fn bf_count_e2star(graded: &GradedSpace, guard: u64) -> Result<u64> {
    let mut count = 0;
    graded.for_each_e2(guard, |t| {
        if graded.in_e2_star(t) {
            count += 1;
        }
    })?;
    Ok(count)
}

/// |E^{≥2}_* X*| for the filtration of the graded model: all N ∈ 𝔪̃_Q raising
/// the filtration by 2 whose graded part lies in E²_*. Also checks 1 + N ∈ SO_Q
/// for every N raising the filtration by 2.
pub fn bf_count_e_ge2_star(graded: &GradedSpace, guard: u64) -> Result<u64> {
    let space = &graded.qbar;
    let ctx = space.ctx();
    let d = space.dim();
    let degrees = graded.degrees();
    let mut slots = Vec::new();
    let mut shift_two = Vec::new();
    for &a in &degrees {
        for &b in &degrees {
            if b - a >= 2 {
                for r in graded.block(b) {
                    for c in graded.block(a) {
                        slots.push((r, c));
                        shift_two.push(b - a == 2);
                    }
                }
            }
        }
    }
    let total = (ctx.q() as u64).checked_pow(slots.len() as u32).filter(|&n| n <= guard);
    let total = total.ok_or_else(|| Error::Guard(format!("E^(≥2) scan over q^{} maps", slots.len())))?;
    let mut count = 0;
    for idx in 0..total {
        let vals = vector_from_index(ctx, slots.len(), idx);
        let mut n = Mat::zeros(d, d);
        let mut t = Mat::zeros(d, d);
        for ((&(r, c), &v), &two) in slots.iter().zip(&vals).zip(&shift_two) {
            n.set(r, c, v);
            if two {
                t.set(r, c, v);
            }
        }
        if membership(space, &n)? == Membership::NotIn {
            continue;
        }
        ensure!(space.so_membership(&n.add_identity(ctx, 1))?, "1 + N ∉ SO_Q for N raising the filtration by 2");
        if graded.in_e2_star(&t) {
            count += 1;
        }
    }
    Ok(count)
}
