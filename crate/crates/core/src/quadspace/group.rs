//! Isometry groups: reflections, generation, Dickson invariant, classical orders,
//! a column-by-column isometry search, and enumeration of unipotent elements.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use num_bigint::BigUint;
use rayon::prelude::*;

use super::{standard_space, QuadSpace};
use crate::error::{ensure, Error, Result};
use crate::gf::{Elem, FieldCtx};
use crate::linalg::{combine, for_each_vector, kernel, solve, unit_vector, Mat, Subspace, Vector};

/// Default cap on the size of any group or orbit built by breadth-first search.
pub const DEFAULT_GROUP_GUARD: usize = 10_000_000;

/// xᵀMx for an upper-triangular (or arbitrary square) M.
pub fn quad_eval(ctx: &FieldCtx, m: &Mat, x: &[Elem]) -> Elem {
    let d = m.rows();
    let mut s = 0;
    for i in 0..d {
        if x[i] == 0 {
            continue;
        }
        let mut row = 0;
        for j in 0..d {
            let c = m.get(i, j);
            if c != 0 && x[j] != 0 {
                row = ctx.add(row, ctx.mul(c, x[j]));
            }
        }
        s = ctx.add(s, ctx.mul(x[i], row));
    }
    s
}

pub fn is_unipotent(ctx: &FieldCtx, g: &Mat) -> bool {
    g.add_identity(ctx, ctx.neg(1)).nilpotency_index(ctx).is_some()
}

/// Order of O_Q for the standard model of the given dimension and type.
pub fn orthogonal_order(d: usize, eta: Option<i8>, q: u32) -> BigUint {
    let q = BigUint::from(q);
    let one = BigUint::from(1u32);
    match eta {
        Some(eta) => {
            let m = (d / 2) as u32;
            let mut n = BigUint::from(2u32) * q.pow(m * m.saturating_sub(1));
            let qm = q.pow(m);
            n *= if eta > 0 { qm - &one } else { qm + &one };
            for i in 1..m {
                n *= q.pow(2 * i) - &one;
            }
            n
        }
        None => {
            let m = ((d - 1) / 2) as u32;
            let two_torsion = if q.bit(0) { 2u32 } else { 1 };
            let mut n = BigUint::from(two_torsion) * q.pow(m * m);
            for i in 1..=m {
                n *= q.pow(2 * i) - &one;
            }
            n
        }
    }
}

/// Order of SO_Q; equal to |O_Q| for odd dimension in characteristic 2.
pub fn special_orthogonal_order(d: usize, eta: Option<i8>, q: u32) -> BigUint {
    let o = orthogonal_order(d, eta, q);
    if eta.is_none() && q % 2 == 0 {
        o
    } else {
        o / 2u32
    }
}

/// Breadth-first closure of `gens` containing the identity; sorted output.
pub fn group_closure(ctx: &FieldCtx, n: usize, gens: &[Mat], guard: usize) -> Result<Vec<Mat>> {
    let mut seen: HashSet<Mat> = HashSet::new();
    let mut queue = VecDeque::new();
    let id = Mat::identity(n);
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = s.mul(ctx, &g);
            if !seen.contains(&h) {
                if seen.len() >= guard {
                    return Err(Error::Guard(format!("group closure exceeds {guard} elements")));
                }
                seen.insert(h.clone());
                queue.push_back(h);
            }
        }
    }
    let mut out: Vec<Mat> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// {g u g⁻¹ : g ∈ ⟨gens⟩}, sorted.
pub fn conjugacy_orbit(ctx: &FieldCtx, gens: &[Mat], u: &Mat, guard: usize) -> Result<Vec<Mat>> {
    let inverses: Vec<Mat> = gens
        .iter()
        .map(|g| g.inverse(ctx).ok_or_else(|| Error::Precondition("generator not invertible".into())))
        .collect::<Result<_>>()?;
    let mut seen: HashSet<Mat> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(u.clone());
    queue.push_back(u.clone());
    while let Some(x) = queue.pop_front() {
        for (g, gi) in gens.iter().zip(&inverses) {
            let y = g.mul(ctx, &x).mul(ctx, gi);
            if !seen.contains(&y) {
                if seen.len() >= guard {
                    return Err(Error::Guard(format!("orbit exceeds {guard} elements")));
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<Mat> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Partition of `elements` (closed under conjugation by `gens`) into orbits, as
/// sorted index lists ordered by smallest member.
pub fn conjugation_orbits(ctx: &FieldCtx, gens: &[Mat], elements: &[Mat]) -> Result<Vec<Vec<usize>>> {
    let index: HashMap<&Mat, usize> = elements.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let inverses: Vec<Mat> = gens
        .iter()
        .map(|g| g.inverse(ctx).ok_or_else(|| Error::Precondition("generator not invertible".into())))
        .collect::<Result<_>>()?;
    let images: Vec<Vec<usize>> = elements
        .par_iter()
        .map(|x| {
            gens.iter()
                .zip(&inverses)
                .map(|(g, gi)| index.get(&g.mul(ctx, x).mul(ctx, gi)).copied().ok_or(()))
                .collect::<std::result::Result<Vec<usize>, ()>>()
        })
        .collect::<std::result::Result<_, ()>>()
        .map_err(|_| Error::Precondition("element set not closed under conjugation".into()))?;
    let mut parent: Vec<usize> = (0..elements.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, imgs) in images.iter().enumerate() {
        for &j in imgs {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..elements.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    Ok(groups.into_values().collect())
}

/// Greedy subset of `gens` generating a group of the given order, together with the
/// order actually reached.
pub fn generating_subset(ctx: &FieldCtx, n: usize, gens: &[Mat], order: usize, guard: usize) -> Result<(Vec<Mat>, usize)> {
    let mut kept: Vec<Mat> = Vec::new();
    let mut group: HashSet<Mat> = HashSet::from([Mat::identity(n)]);
    for g in gens {
        if group.len() >= order {
            break;
        }
        if group.contains(g) {
            continue;
        }
        kept.push(g.clone());
        group = group_closure(ctx, n, &kept, guard)?.into_iter().collect();
    }
    Ok((kept, group.len()))
}

/// Column-by-column search for matrices g with gᵀBg = B and, when a quadratic
/// matrix M is given, Q_M(g e_j) = M_jj.
pub struct IsometrySearch<'a> {
    ctx: &'a FieldCtx,
    bilinear: Mat,
    quadratic: Option<Mat>,
    constraints: Vec<Vec<(Vector, Elem)>>,
}

impl<'a> IsometrySearch<'a> {
    pub fn new(ctx: &'a FieldCtx, bilinear: Mat, quadratic: Option<Mat>) -> Self {
        let n = bilinear.rows();
        IsometrySearch { ctx, bilinear, quadratic, constraints: vec![Vec::new(); n] }
    }

    pub fn for_space(space: &'a QuadSpace) -> Self {
        Self::new(space.ctx(), space.bilinear().clone(), Some(space.gram().clone()))
    }

    /// Extra affine conditions ⟨row, g e_j⟩ = value on column j.
    pub fn with_column_constraints(mut self, constraints: Vec<Vec<(Vector, Elem)>>) -> Self {
        assert_eq!(constraints.len(), self.bilinear.rows());
        self.constraints = constraints;
        self
    }

    fn diagonal_ok(&self, j: usize, x: &[Elem]) -> bool {
        match &self.quadratic {
            Some(m) => quad_eval(self.ctx, m, x) == m.get(j, j),
            None => quad_eval(self.ctx, &self.bilinear, x) == self.bilinear.get(j, j),
        }
    }

    fn candidates(&self, cols: &[Vector]) -> Vec<Vector> {
        let ctx = self.ctx;
        let n = self.bilinear.rows();
        let j = cols.len();
        let bt = self.bilinear.transpose();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (i, gi) in cols.iter().enumerate() {
            rows.push(bt.mul_vec(ctx, gi));
            rhs.push(self.bilinear.get(i, j));
            rows.push(self.bilinear.mul_vec(ctx, gi));
            rhs.push(self.bilinear.get(j, i));
        }
        for (row, v) in &self.constraints[j] {
            rows.push(row.clone());
            rhs.push(*v);
        }
        let a = Mat::from_rows(n, &rows);
        let Some(p) = solve(ctx, &a, &rhs).expect("shapes agree") else { return Vec::new() };
        let ker = kernel(ctx, &a).basis_vectors();
        let mut out = Vec::new();
        for_each_vector(ctx, ker.len(), |c| {
            let k = combine(ctx, n, c, &ker);
            let x: Vector = p.iter().zip(&k).map(|(&a, &b)| ctx.add(a, b)).collect();
            if self.diagonal_ok(j, &x) {
                out.push(x);
            }
        });
        out
    }

    pub fn for_each(&self, mut f: impl FnMut(&Mat)) {
        let n = self.bilinear.rows();
        let mut cols: Vec<Vector> = Vec::with_capacity(n);
        self.recurse(&mut cols, &mut f);
    }

    fn recurse(&self, cols: &mut Vec<Vector>, f: &mut impl FnMut(&Mat)) {
        let n = self.bilinear.rows();
        if cols.len() == n {
            let g = Mat::from_cols(n, cols);
            if g.rank(self.ctx) == n {
                f(&g);
            }
            return;
        }
        for x in self.candidates(cols) {
            cols.push(x);
            self.recurse(cols, f);
            cols.pop();
        }
    }

    pub fn count(&self) -> u64 {
        let mut c = 0;
        self.for_each(|_| c += 1);
        c
    }

    pub fn collect(&self) -> Vec<Mat> {
        let mut v = Vec::new();
        self.for_each(|g| v.push(g.clone()));
        v
    }
}

impl QuadSpace {
    pub fn is_isometry(&self, g: &Mat) -> bool {
        let d = self.dim();
        g.rows() == d && g.cols() == d && self.gram_on(&g.col_vectors()) == *self.gram() && g.rank(self.ctx()) == d
    }

    /// x ↦ x − (⟨x,v⟩/Q(v))·v; `None` when Q(v) = 0 or v is in the radical.
    pub fn reflection(&self, v: &[Elem]) -> Option<Mat> {
        let ctx = self.ctx();
        let qv = self.q(v);
        if qv == 0 || self.radical().contains(ctx, v) {
            return None;
        }
        let d = self.dim();
        let c = ctx.neg(ctx.inv(qv));
        // Columns: e_i − (⟨e_i,v⟩/Q(v)) v.
        let bv = self.bilinear().mul_vec(ctx, v);
        let mut m = Mat::identity(d);
        for i in 0..d {
            let t = ctx.mul(c, bv[i]);
            if t != 0 {
                for r in 0..d {
                    m.set(r, i, ctx.add(m.get(r, i), ctx.mul(t, v[r])));
                }
            }
        }
        Some(m)
    }

    /// One reflection per projective class of nonsingular, non-radical vectors.
    pub fn reflection_generators(&self) -> Vec<Mat> {
        let ctx = self.ctx();
        let mut out = Vec::new();
        for_each_vector(ctx, self.dim(), |v| {
            // Projective representative: first nonzero coordinate is 1.
            if v.iter().find(|&&x| x != 0) == Some(&1) {
                if let Some(r) = self.reflection(v) {
                    out.push(r);
                }
            }
        });
        out
    }

    /// Permutations of a Witt basis: swaps of consecutive hyperbolic pairs.
    fn hyperbolic_permutations(&self) -> Result<Vec<Mat>> {
        let ctx = self.ctx();
        let p = self.witt_basis()?;
        let pinv = p.inverse(ctx).expect("Witt basis is a basis");
        let d = self.dim();
        let m = self.form_type().map_or(0, |t| t.witt_index(d));
        let mut out = Vec::new();
        for i in 0..m.saturating_sub(1) {
            let mut perm: Vec<usize> = (0..d).collect();
            perm.swap(2 * i, 2 * i + 2);
            perm.swap(2 * i + 1, 2 * i + 3);
            let cols: Vec<Vector> = perm.iter().map(|&k| unit_vector(d, k)).collect();
            let s = Mat::from_cols(d, &cols);
            out.push(p.mul(ctx, &s).mul(ctx, &pinv));
        }
        Ok(out)
    }

    pub fn orthogonal_order(&self) -> BigUint {
        orthogonal_order(self.dim(), self.eta(), self.ctx().q())
    }

    pub fn special_orthogonal_order(&self) -> BigUint {
        special_orthogonal_order(self.dim(), self.eta(), self.ctx().q())
    }

    /// A small generating set of O_Q, verified by closure against the classical
    /// order. Reflections are used first; hyperbolic-basis permutations are
    /// appended only if the reflections fall short.
    pub fn orthogonal_generators(&self, guard: usize) -> Result<Vec<Mat>> {
        let order = bounded(&self.orthogonal_order(), guard)?;
        let d = self.dim();
        let mut gens = self.reflection_generators();
        let (kept, reached) = generating_subset(self.ctx(), d, &gens, order, guard)?;
        if reached == order {
            return Ok(kept);
        }
        gens.extend(self.hyperbolic_permutations()?);
        let (kept, reached) = generating_subset(self.ctx(), d, &gens, order, guard)?;
        ensure!(reached == order, "generators reach order {reached}, expected {order}");
        Ok(kept)
    }

    /// A small generating set of SO_Q (Schreier generators of the index-2
    /// subgroup, then reduced and verified by order).
    pub fn special_orthogonal_generators(&self, guard: usize) -> Result<Vec<Mat>> {
        let ctx = self.ctx();
        let d = self.dim();
        let order = bounded(&self.special_orthogonal_order(), guard)?;
        let ogens = self.orthogonal_generators(guard)?;
        let mut member = Vec::with_capacity(ogens.len());
        for g in &ogens {
            member.push(self.so_membership(g)?);
        }
        let mut schreier = Vec::new();
        match ogens.iter().zip(&member).find(|(_, &m)| !m).map(|(g, _)| g.clone()) {
            None => schreier = ogens.clone(),
            Some(t) => {
                let tinv = t.inverse(ctx).expect("isometry");
                for (s, &m) in ogens.iter().zip(&member) {
                    if m {
                        schreier.push(s.clone());
                        schreier.push(t.mul(ctx, s).mul(ctx, &tinv));
                    } else {
                        schreier.push(s.mul(ctx, &tinv));
                        schreier.push(t.mul(ctx, s));
                    }
                }
            }
        }
        schreier.retain(|g| *g != Mat::identity(d));
        let (kept, reached) = generating_subset(ctx, d, &schreier, order, guard)?;
        ensure!(reached == order, "SO generators reach order {reached}, expected {order}");
        Ok(kept)
    }

    /// Dickson invariant δ_g ∈ {0,1}: rank(g−1) mod 2 in characteristic 2 (checked
    /// against dim(S/(S∩gS)) mod 2 for the reference maximal totally singular S
    /// when one exists), 0 in odd dimension and characteristic 2, and
    /// [det g ≠ 1] for odd p.
    pub fn dickson(&self, g: &Mat) -> Result<u8> {
        if !self.is_isometry(g) {
            return Err(Error::Precondition("not an isometry".into()));
        }
        let ctx = self.ctx();
        let d = self.dim();
        if !ctx.is_char2() {
            return Ok(u8::from(g.det(ctx) != 1));
        }
        if d % 2 == 1 {
            return Ok(0);
        }
        let delta = (g.add_identity(ctx, 1).rank(ctx) % 2) as u8;
        if self.eta() == Some(1) {
            if let Some(s) = self.reference_ts() {
                let gs = s.image_under(ctx, g);
                let by_subspace = ((s.dim() - s.intersect(ctx, &gs)?.dim()) % 2) as u8;
                ensure!(by_subspace == delta, "Dickson invariant: rank route {delta}, subspace route {by_subspace}");
            }
        }
        Ok(delta)
    }

    /// δ_g in characteristic 2 and even dimension from the reference maximal
    /// totally singular S of V ⊥ P, with P a plane of the same type as V (so
    /// V ⊥ P is split) and g extended by the identity on P.
    pub fn dickson_by_embedding(&self, g: &Mat) -> Result<u8> {
        let ctx = self.ctx();
        let d = self.dim();
        let form_type = self.form_type().filter(|_| ctx.is_char2() && d % 2 == 0);
        let form_type = form_type.ok_or_else(|| Error::Precondition("needs an even-dimensional space in characteristic 2".into()))?;
        if !self.is_isometry(g) {
            return Err(Error::Precondition("not an isometry".into()));
        }
        let plane = super::standard_gram(ctx, 2, form_type)?;
        let mut gram = Mat::zeros(d + 2, d + 2);
        let mut big_g = Mat::identity(d + 2);
        for i in 0..d {
            for j in 0..d {
                gram.set(i, j, self.gram().get(i, j));
                big_g.set(i, j, g.get(i, j));
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                gram.set(d + i, d + j, plane.get(i, j));
            }
        }
        let big = QuadSpace::new(self.ctx_arc().clone(), gram)?;
        ensure!(big.form_type() == Some(super::FormType::Split), "V ⊥ P is not split");
        let s = big.reference_ts().ok_or_else(|| Error::Check("split space without a reference subspace".into()))?;
        let moved = s.image_under(ctx, &big_g);
        Ok(((s.dim() - s.intersect(ctx, &moved)?.dim()) % 2) as u8)
    }

    pub fn so_membership(&self, g: &Mat) -> Result<bool> {
        Ok(self.dickson(g)? == 0)
    }

    /// Unipotent isometries that are upper unitriangular in the basis
    /// e_1..e_m, (anisotropic part), f_m..f_1 of the standard model and act
    /// trivially on the anisotropic part; intersected with SO. Returned in the
    /// standard model's coordinates.
    pub fn standard_unipotent_radical(&self) -> Result<Vec<Mat>> {
        let form_type = self.form_type().ok_or_else(|| Error::Precondition("space has no type".into()))?;
        let d = self.dim();
        let std = standard_space(self.ctx_arc(), d, form_type)?;
        let ctx = self.ctx();
        let m = form_type.witt_index(d);
        let mut perm: Vec<usize> = (0..m).map(|i| 2 * i).collect();
        perm.extend(2 * m..d);
        perm.extend((0..m).rev().map(|i| 2 * i + 1));
        let pi = Mat::from_cols(d, &perm.iter().map(|&k| unit_vector(d, k)).collect::<Vec<_>>());
        let gram = std.gram_on(&pi.col_vectors());
        let bil = gram.add(ctx, &gram.transpose());
        let aniso = m..d - m;
        let constraints: Vec<Vec<(Vector, Elem)>> = (0..d)
            .map(|k| {
                let mut c: Vec<(Vector, Elem)> = (k + 1..d).map(|l| (unit_vector(d, l), 0)).collect();
                c.push((unit_vector(d, k), 1));
                if aniso.contains(&k) {
                    c.extend((aniso.start..k).map(|l| (unit_vector(d, l), 0)));
                }
                c
            })
            .collect();
        let search = IsometrySearch::new(ctx, bil, Some(gram)).with_column_constraints(constraints);
        let pit = pi.transpose();
        let mut out = Vec::new();
        for u in search.collect() {
            let g = pi.mul(ctx, &u).mul(ctx, &pit);
            if std.so_membership(&g)? {
                out.push(g);
            }
        }
        Ok(out)
    }

    /// All flags W_1 ⊂ … ⊂ W_m of totally singular subspaces with dim W_k = k and
    /// m the Witt index, each given by an adapted basis.
    pub fn maximal_ts_flags(&self) -> Vec<Vec<Vector>> {
        let ctx = self.ctx();
        let d = self.dim();
        let m = self.form_type().map_or(0, |t| t.witt_index(d));
        let mut singular = Vec::new();
        for_each_vector(ctx, d, |v| {
            if v.iter().find(|&&x| x != 0) == Some(&1) && self.q(v) == 0 {
                singular.push(v.to_vec());
            }
        });
        let mut out = Vec::new();
        let mut chain = Vec::new();
        self.extend_flag(&singular, m, &mut chain, &mut out);
        out
    }

    fn extend_flag(&self, singular: &[Vector], m: usize, chain: &mut Vec<Vector>, out: &mut Vec<Vec<Vector>>) {
        if chain.len() == m {
            out.push(chain.clone());
            return;
        }
        let ctx = self.ctx();
        let d = self.dim();
        let w = Subspace::from_vectors(ctx, d, chain);
        let wp = self.perp(&w);
        let mut seen = BTreeSet::new();
        for v in singular {
            if wp.contains(ctx, v) && !w.contains(ctx, v) {
                let mut next = chain.clone();
                next.push(v.clone());
                if seen.insert(Subspace::from_vectors(ctx, d, &next)) {
                    chain.push(v.clone());
                    self.extend_flag(singular, m, chain, out);
                    chain.pop();
                }
            }
        }
    }

    /// Every unipotent element of SO_Q, sorted: the union of the conjugates of the
    /// standard unipotent radical over all maximal totally singular flags.
    pub fn unipotent_elements(&self) -> Result<Vec<Mat>> {
        let ctx = self.ctx();
        let u_std = self.standard_unipotent_radical()?;
        let flags = self.maximal_ts_flags();
        let conj: Vec<(Mat, Mat)> = flags
            .iter()
            .map(|f| {
                let p = self.witt_basis_from(f)?;
                let pinv = p.inverse(ctx).expect("Witt basis");
                Ok((p, pinv))
            })
            .collect::<Result<_>>()?;
        let set = conj
            .par_iter()
            .fold(HashSet::new, |mut acc, (p, pinv)| {
                for u in &u_std {
                    acc.insert(p.mul(ctx, u).mul(ctx, pinv));
                }
                acc
            })
            .reduce(HashSet::new, |mut a, b| {
                if a.len() < b.len() {
                    return b.into_iter().chain(a).collect();
                }
                a.extend(b);
                a
            });
        let mut out: Vec<Mat> = set.into_iter().collect();
        out.sort();
        Ok(out)
    }

    /// Unipotent elements of SO_Q by full group closure (oracle for small groups).
    pub fn unipotent_elements_by_closure(&self, guard: usize) -> Result<Vec<Mat>> {
        let gens = self.special_orthogonal_generators(guard)?;
        let group = group_closure(self.ctx(), self.dim(), &gens, guard)?;
        Ok(group.into_iter().filter(|g| is_unipotent(self.ctx(), g)).collect())
    }
}

fn bounded(order: &BigUint, guard: usize) -> Result<usize> {
    match usize::try_from(order.clone()) {
        Ok(n) if n <= guard => Ok(n),
        _ => Err(Error::Guard(format!("group order {order} exceeds guard {guard}"))),
    }
}

/// q^(dim SO − rank SO): the number of unipotent elements of SO_Q.
pub fn unipotent_count(d: usize, q: u32) -> BigUint {
    let e = d * (d - 1) / 2 - d / 2;
    BigUint::from(q).pow(e as u32)
}
