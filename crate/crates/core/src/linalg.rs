//! Dense exact linear algebra over a [`FieldCtx`].
//!
//! Vectors are plain `Vec<Elem>` column vectors. A [`Subspace`] stores its basis in
//! reduced row-echelon form, so derived equality is equality of subspaces.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};

pub type Vector = Vec<Elem>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<Elem>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows·cols");
        Mat { rows, cols, data }
    }

    /// Matrix with the given rows; `cols` is needed when `rows` is empty.
    pub fn from_rows(cols: usize, rows: &[Vector]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Mat { rows: rows.len(), cols, data }
    }

    /// Matrix with the given columns, each of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vector]) -> Self {
        let mut m = Mat::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x;
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn data(&self) -> &[Elem] {
        &self.data
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }
    #[inline]
    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }
    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
    pub fn col_vectors(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    if b != 0 {
                        *o = ctx.add(*o, ctx.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, ctx: &FieldCtx, v: &[Elem]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows).map(|i| dot(ctx, self.row(i), v)).collect()
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| ctx.add(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| ctx.sub(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self, ctx: &FieldCtx) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| ctx.neg(a)).collect() }
    }

    pub fn scale(&self, ctx: &FieldCtx, c: Elem) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| ctx.mul(c, a)).collect() }
    }

    pub fn add_identity(&self, ctx: &FieldCtx, c: Elem) -> Mat {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = m.get(i, i);
            m.set(i, i, ctx.add(v, c));
        }
        m
    }

    pub fn pow(&self, ctx: &FieldCtx, e: u32) -> Mat {
        assert!(self.is_square());
        let mut acc = Mat::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(ctx, self);
        }
        acc
    }

    /// Columns `range` as a new matrix.
    pub fn col_block(&self, cols: std::ops::Range<usize>) -> Mat {
        let mut m = Mat::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, j) in cols.clone().enumerate() {
                m.set(i, jj, self.get(i, j));
            }
        }
        m
    }

    /// Rows `range` as a new matrix.
    pub fn row_block(&self, rows: std::ops::Range<usize>) -> Mat {
        Mat {
            rows: rows.len(),
            cols: self.cols,
            data: self.data[rows.start * self.cols..rows.end * self.cols].to_vec(),
        }
    }

    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat {
        self.row_block(rows).col_block(cols)
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut m = Mat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            m.data[i * m.cols..i * m.cols + self.cols].copy_from_slice(self.row(i));
            m.data[i * m.cols + self.cols..(i + 1) * m.cols].copy_from_slice(other.row(i));
        }
        m
    }

    /// Reduce to reduced row-echelon form in place; returns pivot columns.
    pub fn rref_in_place(&mut self, ctx: &FieldCtx) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(i) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else { continue };
            if i != r {
                for j in 0..cols {
                    self.data.swap(i * cols + j, r * cols + j);
                }
            }
            let s = ctx.inv(self.data[r * cols + c]);
            if s != 1 {
                for j in c..cols {
                    self.data[r * cols + j] = ctx.mul(s, self.data[r * cols + j]);
                }
            }
            for i2 in 0..rows {
                if i2 == r {
                    continue;
                }
                let f = self.data[i2 * cols + c];
                if f == 0 {
                    continue;
                }
                let nf = ctx.neg(f);
                for j in c..cols {
                    let x = self.data[r * cols + j];
                    if x != 0 {
                        self.data[i2 * cols + j] = ctx.add(self.data[i2 * cols + j], ctx.mul(nf, x));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        self.clone().rref_in_place(ctx).len()
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> Option<Mat> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Some(Mat::zeros(0, 0));
        }
        let mut aug = self.hstack(&Mat::identity(n));
        let piv = aug.rref_in_place(ctx);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(aug.col_block(n..2 * n))
    }

    pub fn det(&self, ctx: &FieldCtx) -> Elem {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1;
        for c in 0..n {
            let Some(i) = (c..n).find(|&i| m.get(i, c) != 0) else { return 0 };
            if i != c {
                for j in 0..n {
                    m.data.swap(i * n + j, c * n + j);
                }
                det = ctx.neg(det);
            }
            let pv = m.get(c, c);
            det = ctx.mul(det, pv);
            let inv = ctx.inv(pv);
            for i2 in c + 1..n {
                let f = ctx.mul(m.get(i2, c), inv);
                if f == 0 {
                    continue;
                }
                for j in c..n {
                    let x = ctx.sub(m.get(i2, j), ctx.mul(f, m.get(c, j)));
                    m.set(i2, j, x);
                }
            }
        }
        det
    }

    /// Least e ≥ 0 with self^e = 0, if the matrix is nilpotent.
    pub fn nilpotency_index(&self, ctx: &FieldCtx) -> Option<u32> {
        assert!(self.is_square());
        let mut p = Mat::identity(self.rows);
        for e in 0..=self.rows as u32 {
            if p.is_zero() {
                return Some(e);
            }
            p = p.mul(ctx, self);
        }
        None
    }

    /// Parse the text format: a header line `rows cols q`, then row-major entries.
    pub fn parse(text: &str, ctx: &FieldCtx) -> Result<Mat> {
        let mut tokens = text.split_whitespace();
        let mut next = |what: &str| -> Result<u32> {
            let t = tokens.next().ok_or_else(|| Error::Parse(format!("missing {what}")))?;
            t.parse::<u32>().map_err(|_| Error::Parse(format!("bad {what} `{t}`")))
        };
        let rows = next("row count")? as usize;
        let cols = next("column count")? as usize;
        let q = next("field order")?;
        if q != ctx.q() {
            return Err(Error::Parse(format!("matrix is over GF({q}) but the field is GF({})", ctx.q())));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            let v = next("entry")?;
            if v >= q {
                return Err(Error::Parse(format!("entry {v} out of range for GF({q})")));
            }
            data.push(v as Elem);
        }
        if tokens.next().is_some() {
            return Err(Error::Parse("trailing entries".into()));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn to_text(&self, ctx: &FieldCtx) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, ctx.q());
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }
}

pub fn dot(ctx: &FieldCtx, a: &[Elem], b: &[Elem]) -> Elem {
    debug_assert_eq!(a.len(), b.len());
    let mut s = 0;
    for (&x, &y) in a.iter().zip(b) {
        if x != 0 && y != 0 {
            s = ctx.add(s, ctx.mul(x, y));
        }
    }
    s
}

/// `y + c·x`.
pub fn axpy(ctx: &FieldCtx, c: Elem, x: &[Elem], y: &[Elem]) -> Vector {
    x.iter().zip(y).map(|(&a, &b)| ctx.add(b, ctx.mul(c, a))).collect()
}

pub fn vec_scale(ctx: &FieldCtx, c: Elem, x: &[Elem]) -> Vector {
    x.iter().map(|&a| ctx.mul(c, a)).collect()
}

pub fn vec_sub(ctx: &FieldCtx, x: &[Elem], y: &[Elem]) -> Vector {
    x.iter().zip(y).map(|(&a, &b)| ctx.sub(a, b)).collect()
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Linear combination Σ coeffs[i]·vectors[i] of length-`n` vectors.
pub fn combine(ctx: &FieldCtx, n: usize, coeffs: &[Elem], vectors: &[Vector]) -> Vector {
    let mut out = vec![0; n];
    for (&c, v) in coeffs.iter().zip(vectors) {
        if c != 0 {
            for (o, &x) in out.iter_mut().zip(v) {
                *o = ctx.add(*o, ctx.mul(c, x));
            }
        }
    }
    out
}

/// The vector with index `idx` in base-q little-endian order.
pub fn vector_from_index(ctx: &FieldCtx, n: usize, mut idx: u64) -> Vector {
    let q = ctx.q() as u64;
    (0..n)
        .map(|_| {
            let d = (idx % q) as Elem;
            idx /= q;
            d
        })
        .collect()
}

/// Calls `f` on every vector of GF(q)^n (q^n of them).
pub fn for_each_vector(ctx: &FieldCtx, n: usize, mut f: impl FnMut(&[Elem])) {
    let q = ctx.q() as Elem;
    let mut v = vec![0 as Elem; n];
    loop {
        f(&v);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            v[i] += 1;
            if v[i] < q {
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

/// Right kernel {x : m·x = 0}.
pub fn kernel(ctx: &FieldCtx, m: &Mat) -> Subspace {
    let mut r = m.clone();
    let pivots = r.rref_in_place(ctx);
    let n = m.cols;
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for f in (0..n).filter(|&c| !is_pivot[c]) {
        let mut x = vec![0; n];
        x[f] = 1;
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = ctx.neg(r.get(i, f));
        }
        basis.push(x);
    }
    Subspace::from_vectors(ctx, n, &basis)
}

/// Column space of `m`.
pub fn image(ctx: &FieldCtx, m: &Mat) -> Subspace {
    Subspace::from_vectors(ctx, m.rows, &m.col_vectors())
}

/// Some x with m·x = rhs, if one exists.
pub fn solve(ctx: &FieldCtx, m: &Mat, rhs: &[Elem]) -> Result<Option<Vector>> {
    if rhs.len() != m.rows {
        return Err(Error::Dimension(format!("{} equations but rhs of length {}", m.rows, rhs.len())));
    }
    let aug = m.hstack(&Mat::from_cols(m.rows, &[rhs.to_vec()]));
    let mut r = aug;
    let pivots = r.rref_in_place(ctx);
    if pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = vec![0; m.cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r.get(i, m.cols);
    }
    Ok(Some(x))
}

/// A subspace of GF(q)^n with its basis in reduced row-echelon form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Subspace {
    basis: Mat,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { basis: Mat::zeros(0, n), pivots: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Subspace { basis: Mat::identity(n), pivots: (0..n).collect() }
    }

    pub fn from_vectors(ctx: &FieldCtx, n: usize, vectors: &[Vector]) -> Self {
        Self::from_matrix_rows(ctx, Mat::from_rows(n, vectors))
    }

    /// Row space of `m`.
    pub fn from_matrix_rows(ctx: &FieldCtx, mut m: Mat) -> Self {
        let pivots = m.rref_in_place(ctx);
        let basis = m.row_block(0..pivots.len());
        Subspace { basis, pivots }
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.basis.cols
    }
    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.rows
    }
    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }
    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient()
    }
    /// RREF basis as the rows of a matrix.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }
    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.row_vectors()
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after elimination against the basis; zero iff v ∈ self.
    pub fn reduce(&self, ctx: &FieldCtx, v: &[Elem]) -> Vector {
        let mut w = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            let c = w[p];
            if c != 0 {
                let nc = ctx.neg(c);
                for (x, &b) in w.iter_mut().zip(self.basis.row(i)) {
                    if b != 0 {
                        *x = ctx.add(*x, ctx.mul(nc, b));
                    }
                }
            }
        }
        w
    }

    pub fn contains(&self, ctx: &FieldCtx, v: &[Elem]) -> bool {
        self.reduce(ctx, v).iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, ctx: &FieldCtx, other: &Subspace) -> bool {
        self.dim() <= other.dim() && (0..self.dim()).all(|i| other.contains(ctx, self.basis.row(i)))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient() != other.ambient() {
            return Err(Error::Dimension(format!(
                "subspaces of GF(q)^{} and GF(q)^{}",
                self.ambient(),
                other.ambient()
            )));
        }
        Ok(())
    }

    pub fn sum(&self, ctx: &FieldCtx, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Self::from_matrix_rows(ctx, self.basis.vstack(&other.basis)))
    }

    pub fn intersect(&self, ctx: &FieldCtx, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let ann = self.annihilator(ctx).vstack(&other.annihilator(ctx));
        Ok(kernel(ctx, &ann))
    }

    /// Rows spanning {h : h·x = 0 for all x in self} under the dot product.
    pub fn annihilator(&self, ctx: &FieldCtx) -> Mat {
        kernel(ctx, &self.basis).basis
    }

    /// The image M(self).
    pub fn image_under(&self, ctx: &FieldCtx, m: &Mat) -> Subspace {
        let vs: Vec<Vector> = (0..self.dim()).map(|i| m.mul_vec(ctx, self.basis.row(i))).collect();
        Subspace::from_vectors(ctx, m.rows, &vs)
    }

    /// The preimage {x : M x ∈ self}.
    pub fn preimage_under(&self, ctx: &FieldCtx, m: &Mat) -> Subspace {
        kernel(ctx, &self.annihilator(ctx).mul(ctx, m))
    }

    /// Vectors of `outer` extending a basis of `self` to a basis of `outer`.
    pub fn complement_in(&self, ctx: &FieldCtx, outer: &Subspace) -> Vec<Vector> {
        let mut acc = self.clone();
        let mut out = Vec::new();
        for v in outer.basis_vectors() {
            if !acc.contains(ctx, &v) {
                acc = Self::from_matrix_rows(ctx, acc.basis.vstack(&Mat::from_rows(v.len(), &[v.clone()])));
                out.push(v);
            }
        }
        out
    }

    /// Standard unit vectors completing a basis of `self` to the ambient space.
    pub fn complement(&self, ctx: &FieldCtx) -> Vec<Vector> {
        self.complement_in(ctx, &Subspace::full(self.ambient()))
    }
}

/// The quotient `outer / inner` with explicit coordinates.
///
/// `section` has the chosen complement vectors as columns; `proj` maps vectors of
/// `outer` to quotient coordinates and kills `inner`; `proj · section = I`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub outer: Subspace,
    pub inner: Subspace,
    pub section: Mat,
    pub proj: Mat,
}

impl Quotient {
    pub fn new(ctx: &FieldCtx, outer: &Subspace, inner: &Subspace) -> Result<Quotient> {
        if !inner.is_subspace_of(ctx, outer) {
            return Err(Error::Precondition("quotient by a subspace not contained in the outer one".into()));
        }
        let n = outer.ambient();
        let comp = inner.complement_in(ctx, outer);
        let rest = outer.complement(ctx);
        let r = comp.len();
        let mut cols = inner.basis_vectors();
        cols.extend(comp.iter().cloned());
        cols.extend(rest);
        let full = Mat::from_cols(n, &cols);
        let inv = full.inverse(ctx).expect("extended basis is invertible");
        let proj = inv.row_block(inner.dim()..inner.dim() + r);
        let section = Mat::from_cols(n, &comp);
        Ok(Quotient { outer: outer.clone(), inner: inner.clone(), section, proj })
    }

    pub fn dim(&self) -> usize {
        self.section.cols()
    }

    /// ρ⁻¹(w′) ⊆ outer for a subspace w′ of the quotient.
    pub fn preimage(&self, ctx: &FieldCtx, w: &Subspace) -> Subspace {
        let lifted = w.image_under(ctx, &self.section);
        lifted.sum(ctx, &self.inner).expect("same ambient")
    }

    /// Induced map on the quotient of an endomorphism preserving outer and inner.
    pub fn induced(&self, ctx: &FieldCtx, m: &Mat) -> Mat {
        self.proj.mul(ctx, &m.mul(ctx, &self.section))
    }
}

/// Projection and section for GF(q)^n / sub.
pub fn quotient_map(ctx: &FieldCtx, n: usize, sub: &Subspace) -> Result<(Mat, Mat)> {
    if sub.ambient() != n {
        return Err(Error::Dimension(format!("subspace of GF(q)^{} in GF(q)^{n}", sub.ambient())));
    }
    let q = Quotient::new(ctx, &Subspace::full(n), sub)?;
    Ok((q.proj, q.section))
}

/// Calls `f` with the RREF basis (k×n) of every k-dimensional subspace of GF(q)^n.
pub fn for_each_subspace(ctx: &FieldCtx, n: usize, k: usize, mut f: impl FnMut(&Mat)) {
    if k > n {
        return;
    }
    let q = ctx.q() as Elem;
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // Free positions: (row i, column c) with c > pivot_i and c not a pivot.
        let mut free = Vec::new();
        for (i, &p) in pivots.iter().enumerate() {
            for c in p + 1..n {
                if !pivots.contains(&c) {
                    free.push((i, c));
                }
            }
        }
        let mut m = Mat::zeros(k, n);
        for (i, &p) in pivots.iter().enumerate() {
            m.set(i, p, 1);
        }
        let mut vals = vec![0 as Elem; free.len()];
        'inner: loop {
            for (&(i, c), &v) in free.iter().zip(&vals) {
                m.set(i, c, v);
            }
            f(&m);
            for v in vals.iter_mut() {
                *v += 1;
                if *v < q {
                    continue 'inner;
                }
                *v = 0;
            }
            break;
        }
        // Next pivot combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if pivots[i] < n - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{field_of_order, make_field};

    fn jordan_block(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n - 1 {
            m.set(i, i + 1, 1);
        }
        m
    }

    #[test]
    fn kernel_and_image_basics() {
        let f = make_field(2, 1).unwrap();
        let z = Mat::zeros(3, 3);
        assert!(kernel(&f, &z).is_full());
        assert!(image(&f, &z).is_zero());
        assert!(kernel(&f, &Mat::identity(3)).is_zero());
        let j = jordan_block(3);
        assert_eq!(kernel(&f, &j).dim(), 1);
        assert_eq!(kernel(&f, &j.mul(&f, &j)).dim(), 2);
        assert_eq!(j.nilpotency_index(&f), Some(3));
    }

    #[test]
    fn rank_nullity_over_random_matrices() {
        let f = field_of_order(3).unwrap();
        let mut seed = 7u64;
        for _ in 0..200 {
            let data: Vec<Elem> = (0..12)
                .map(|_| {
                    seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    ((seed >> 33) % 3) as Elem
                })
                .collect();
            let m = Mat::from_data(3, 4, data);
            assert_eq!(kernel(&f, &m).dim() + image(&f, &m).dim(), 4);
            for v in kernel(&f, &m).basis_vectors() {
                assert!(m.mul_vec(&f, &v).iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn solve_finds_solutions_exactly_when_consistent() {
        let f = field_of_order(5).unwrap();
        let m = Mat::from_rows(3, &[vec![1, 2, 3], vec![2, 4, 2]]);
        let x = solve(&f, &m, &[4, 1]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&f, &x), vec![4, 1]);
        let sing = Mat::from_rows(2, &[vec![1, 2], vec![2, 4]]);
        assert!(solve(&f, &sing, &[1, 1]).unwrap().is_none());
        assert!(solve(&f, &sing, &[1]).is_err());
    }

    #[test]
    fn inverse_and_det() {
        let f = field_of_order(7).unwrap();
        let m = Mat::from_rows(3, &[vec![1, 2, 0], vec![3, 1, 4], vec![0, 5, 6]]);
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&f, &inv), Mat::identity(3));
        assert_ne!(m.det(&f), 0);
        let s = Mat::from_rows(2, &[vec![1, 2], vec![2, 4]]);
        assert!(s.inverse(&f).is_none());
        assert_eq!(s.det(&f), 0);
    }

    #[test]
    fn canonical_equality() {
        let f = field_of_order(3).unwrap();
        let a = Subspace::from_vectors(&f, 3, &[vec![1, 1, 0], vec![0, 1, 1]]);
        let b = Subspace::from_vectors(&f, 3, &[vec![1, 2, 1], vec![2, 2, 0], vec![1, 0, 2]]);
        assert_eq!(a, b);
    }

    #[test]
    fn lattice_operations() {
        let f = field_of_order(3).unwrap();
        let a = Subspace::from_vectors(&f, 2, &[vec![1, 0]]);
        let b = Subspace::from_vectors(&f, 2, &[vec![1, 1]]);
        assert!(a.sum(&f, &b).unwrap().is_full());
        assert!(a.intersect(&f, &b).unwrap().is_zero());
        assert_eq!(a.intersect(&f, &a).unwrap(), a);
        assert_eq!(a.sum(&f, &Subspace::zero(2)).unwrap(), a);
        assert!(a.sum(&f, &Subspace::zero(3)).is_err());
    }

    #[test]
    fn dimension_formula_exhaustive_gf2_4() {
        let f = make_field(2, 1).unwrap();
        let mut subs = Vec::new();
        for k in 0..=4 {
            for_each_subspace(&f, 4, k, |m| subs.push(Subspace::from_matrix_rows(&f, m.clone())));
        }
        assert_eq!(subs.len(), 1 + 15 + 35 + 15 + 1);
        for a in &subs {
            for b in &subs {
                let s = a.sum(&f, b).unwrap();
                let i = a.intersect(&f, b).unwrap();
                assert_eq!(a.dim() + b.dim(), s.dim() + i.dim());
                assert!(i.is_subspace_of(&f, a) && i.is_subspace_of(&f, b));
            }
        }
    }

    #[test]
    fn quotient_map_examples() {
        let f = make_field(2, 1).unwrap();
        let (p, s) = quotient_map(&f, 3, &Subspace::zero(3)).unwrap();
        assert_eq!(p, Mat::identity(3));
        assert_eq!(s, Mat::identity(3));
        let (p, _) = quotient_map(&f, 3, &Subspace::full(3)).unwrap();
        assert_eq!(p.rows(), 0);
        let sub = Subspace::from_vectors(&f, 4, &[vec![1, 1, 0, 0]]);
        let (p, s) = quotient_map(&f, 4, &sub).unwrap();
        assert_eq!(p.rows(), 3);
        assert_eq!(p.rank(&f), 3);
        assert_eq!(p.mul(&f, &s), Mat::identity(3));
        assert!(p.mul_vec(&f, &[1, 1, 0, 0]).iter().all(|&x| x == 0));
    }

    #[test]
    fn preimage_and_image() {
        let f = field_of_order(3).unwrap();
        let j = jordan_block(3);
        let line = Subspace::from_vectors(&f, 3, &[vec![1, 0, 0]]);
        let pre = line.preimage_under(&f, &j);
        assert_eq!(pre, Subspace::from_vectors(&f, 3, &[vec![1, 0, 0], vec![0, 1, 0]]));
        assert_eq!(pre.image_under(&f, &j), line);
    }

    #[test]
    fn subspace_enumeration_counts() {
        let f = field_of_order(3).unwrap();
        let mut c = 0;
        for_each_subspace(&f, 4, 2, |_| c += 1);
        assert_eq!(c, 130);
    }

    #[test]
    fn text_round_trip() {
        let f = field_of_order(4).unwrap();
        let m = Mat::from_rows(2, &[vec![0, 3], vec![2, 1]]);
        let t = m.to_text(&f);
        assert_eq!(Mat::parse(&t, &f).unwrap(), m);
        assert!(Mat::parse("2 2 4\n0 1 2", &f).is_err());
        assert!(Mat::parse("1 1 3\n0", &f).is_err());
        assert!(Mat::parse("1 1 4\n7", &f).is_err());
    }
}
