//! Q-filtrations X^{≥a} of a quadratic space, the canonical filtration of a
//! nilpotent N ∈ 𝔪_Q, and everything computed from it: the graded space, piece and
//! class labels, splittings and lifts, and the exhaustive verifications.

mod graded;
mod invariants;
mod labels;
mod report;
mod shadow;
mod split;
mod verify;

pub use graded::*;
pub use invariants::*;
pub use labels::*;
pub use report::*;
pub use split::*;
pub use shadow::*;
pub use verify::*;

use crate::error::{ensure, Error, Result};
use crate::linalg::{image, kernel, Mat, Subspace};
use crate::nilpotent::NilpotentWitness;
use crate::quadspace::QuadSpace;

/// A descending chain X^{≥a}: X^{≥a} = V for a < lo, `levels[k]` = X^{≥lo+k},
/// and 0 beyond the stored levels. Normalized so the first stored level is not V
/// and the last is not 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QFiltration {
    lo: i32,
    levels: Vec<Subspace>,
    full: Subspace,
    zero: Subspace,
}

impl QFiltration {
    pub fn new(dim: usize, lo: i32, levels: Vec<Subspace>) -> Self {
        let full = Subspace::full(dim);
        let zero = Subspace::zero(dim);
        let mut lo = lo;
        let mut levels: std::collections::VecDeque<Subspace> = levels.into();
        while levels.front().is_some_and(|s| s.dim() == dim && dim > 0) {
            levels.pop_front();
            lo += 1;
        }
        while levels.back().is_some_and(Subspace::is_zero) {
            levels.pop_back();
        }
        if levels.is_empty() {
            lo = if dim == 0 { 0 } else { lo };
        }
        QFiltration { lo, levels: levels.into(), full, zero }
    }

    /// V for a ≤ 0 and 0 for a ≥ 1.
    pub fn trivial(dim: usize) -> Self {
        QFiltration::new(dim, 1, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.full.ambient()
    }

    pub fn at(&self, a: i32) -> &Subspace {
        if a < self.lo {
            return &self.full;
        }
        self.levels.get((a - self.lo) as usize).unwrap_or(&self.zero)
    }

    /// Smallest a with X^{≥a} ≠ V.
    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Smallest a with X^{≥a} = 0.
    pub fn hi(&self) -> i32 {
        self.lo + self.levels.len() as i32
    }

    /// dim gr^a = dim X^{≥a} − dim X^{≥a+1}.
    pub fn f(&self, a: i32) -> usize {
        self.at(a).dim() - self.at(a + 1).dim()
    }

    /// Degrees a with gr^a ≠ 0, ascending.
    pub fn degrees(&self) -> Vec<i32> {
        (self.lo - 1..self.hi()).filter(|&a| self.f(a) > 0).collect()
    }

    /// Largest |a| with gr^a ≠ 0.
    pub fn max_degree(&self) -> i32 {
        self.degrees().into_iter().map(i32::abs).max().unwrap_or(0)
    }

    /// Q|_{X^{≥a}} = 0 and X^{≥1−a} = (X^{≥a})^⊥ for every a ≥ 1, plus monotonicity.
    pub fn check_q_filtration(&self, space: &QuadSpace) -> Result<()> {
        let ctx = space.ctx();
        ensure!(self.dim() == space.dim(), "filtration of the wrong dimension");
        for a in self.lo - 1..self.hi() {
            ensure!(self.at(a + 1).is_subspace_of(ctx, self.at(a)), "X^(≥{}) ⊄ X^(≥{a})", a + 1);
        }
        let top = self.lo.unsigned_abs().max(self.hi().unsigned_abs()) as i32 + 1;
        for a in 1..=top {
            ensure!(space.is_totally_singular(self.at(a)), "Q does not vanish on X^(≥{a})");
            ensure!(*self.at(1 - a) == space.perp(self.at(a)), "X^(≥{}) ≠ (X^(≥{a}))^⊥", 1 - a);
        }
        Ok(())
    }

    pub fn is_q_filtration(&self, space: &QuadSpace) -> bool {
        self.check_q_filtration(space).is_ok()
    }

    /// N X^{≥a} ⊆ X^{≥a+2} for every a.
    pub fn shifts_by_two(&self, space: &QuadSpace, n: &Mat) -> bool {
        let ctx = space.ctx();
        (self.lo - 1..self.hi()).all(|a| self.at(a).image_under(ctx, n).is_subspace_of(ctx, self.at(a + 2)))
    }

    /// (X^{≥a})^⊥ = X^{≥1−a} ⊕ R for a ≤ 0.
    pub fn check_perp_with_radical(&self, space: &QuadSpace) -> Result<()> {
        let ctx = space.ctx();
        let r = space.radical();
        for a in self.lo - 1..=0 {
            let other = self.at(1 - a);
            ensure!(other.intersect(ctx, r)?.is_zero(), "X^(≥{}) meets R", 1 - a);
            ensure!(space.perp(self.at(a)) == other.sum(ctx, r)?, "(X^(≥{a}))^⊥ ≠ X^(≥{}) ⊕ R", 1 - a);
        }
        Ok(())
    }
}

/// Test-only corruptions of the construction, used to show the suites can fail.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FiltrationMutation {
    /// Use the λ = 0 index window also when λ ≠ 0.
    pub drop_lambda_shift: bool,
}

/// The canonical filtration of N, by recursion through V′ = L^⊥/L.
pub fn canonical_filtration(w: &NilpotentWitness) -> Result<QFiltration> {
    canonical_filtration_with(w, FiltrationMutation::default())
}

pub fn canonical_filtration_with(w: &NilpotentWitness, mutation: FiltrationMutation) -> Result<QFiltration> {
    let d = w.space().dim();
    if w.is_zero() {
        return Ok(QFiltration::trivial(d));
    }
    let ctx = w.space().ctx();
    let red = w.reduce_step()?;
    let sub = canonical_filtration_with(&red.reduced, mutation)?;
    let e = w.e() as i32;
    let (from, to) = if red.case.lambda_nonzero() && !mutation.drop_lambda_shift { (1 - e, e) } else { (2 - e, e - 1) };
    let levels = (from..=to).map(|a| red.quotient.preimage(ctx, sub.at(a))).collect();
    Ok(QFiltration::new(d, from, levels))
}

/// The canonical filtration together with the Q-filtration law and N X^{≥a} ⊆ X^{≥a+2}.
pub fn canonical_filtration_checked(w: &NilpotentWitness) -> Result<QFiltration> {
    let f = canonical_filtration(w)?;
    f.check_q_filtration(w.space())?;
    ensure!(f.shifts_by_two(w.space(), w.n()), "N does not raise the canonical filtration by 2");
    Ok(f)
}

/// Σ_{j≥0} N^j(ker N^{2j+1−a}): the weight filtration of a nilpotent map, which
/// the canonical filtration reproduces in odd characteristic.
pub fn weight_filtration(space: &QuadSpace, n: &Mat) -> Result<QFiltration> {
    let ctx = space.ctx();
    let d = space.dim();
    let e = n.nilpotency_index(ctx).ok_or_else(|| Error::Precondition("N is not nilpotent".into()))? as i32;
    let mut powers = vec![Mat::identity(d)];
    for _ in 0..e {
        powers.push(powers.last().unwrap().mul(ctx, n));
    }
    // ker N^r = V for r ≥ e and N^j = 0 for j ≥ e.
    let kernels: Vec<Subspace> = powers.iter().map(|p| kernel(ctx, p)).collect();
    let lo = -e;
    let levels = (lo..=e)
        .map(|a| {
            let mut acc = Subspace::zero(d);
            for j in 0..e {
                let r = 2 * j + 1 - a;
                if r <= 0 {
                    continue;
                }
                let ker = &kernels[r.min(e) as usize];
                acc = acc.sum(ctx, &ker.image_under(ctx, &powers[j as usize]))?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QFiltration::new(d, lo, levels))
}

/// Explicit layers of the canonical filtration in characteristic 2: λ ≠ 0 gives
/// V^{≥e} = L and V^{≥1−e} = L^⊥; λ = 0 gives V^{≥e−1} = N^{e−1}V and
/// V^{≥2−e} = ker N^{e−1} unless e′ = e−1 with λ′ ≠ 0, where V^{≥e−1} is
/// N^{e−1}V plus one line.
pub fn check_explicit_layers(w: &NilpotentWitness, f: &QFiltration) -> Result<()> {
    if w.is_zero() || !w.space().ctx().is_char2() {
        return Ok(());
    }
    let ctx = w.space().ctx();
    let e = w.e() as i32;
    let red = w.reduce_step()?;
    let top = w.n().pow(ctx, (e - 1) as u32);
    if red.case.lambda_nonzero() {
        ensure!(*f.at(e) == red.line, "V^(≥e) ≠ L");
        ensure!(*f.at(1 - e) == w.space().perp(&red.line), "V^(≥1-e) ≠ L^⊥");
        return Ok(());
    }
    let img = image(ctx, &top);
    let r2 = &red.reduced;
    let lambda_prime = if r2.e() as i32 == e - 1 && r2.e() >= 2 { r2.reduce_step()?.case.lambda_nonzero() } else { false };
    if lambda_prime {
        ensure!(img.is_subspace_of(ctx, f.at(e - 1)) && f.at(e - 1).dim() == img.dim() + 1, "V^(≥e-1) is not N^(e-1)V plus a line");
    } else {
        ensure!(*f.at(e - 1) == img, "V^(≥e-1) ≠ N^(e-1)V");
        ensure!(*f.at(2 - e) == kernel(ctx, &top), "V^(≥2-e) ≠ ker N^(e-1)");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_of_order;
    use crate::quadspace::{standard_space, FormType};
    use std::sync::Arc;

    pub(crate) fn beta_one() -> NilpotentWitness {
        let s = standard_space(&Arc::new(field_of_order(2).unwrap()), 3, FormType::Odd).unwrap();
        let n = Mat::from_rows(3, &[vec![0, 1, 0], vec![0, 0, 0], vec![0, 1, 0]]);
        NilpotentWitness::new(s, n).unwrap()
    }

    #[test]
    fn trivial_filtration() {
        let t = QFiltration::trivial(2);
        assert!(t.at(0).is_full() && t.at(1).is_zero());
        assert_eq!(t.f(0), 2);
        assert_eq!(t.degrees(), vec![0]);
    }

    #[test]
    fn zero_map_gives_trivial_filtration() {
        let s = standard_space(&Arc::new(field_of_order(2).unwrap()), 2, FormType::Split).unwrap();
        let w = NilpotentWitness::new(s, Mat::zeros(2, 2)).unwrap();
        assert_eq!(canonical_filtration(&w).unwrap(), QFiltration::trivial(2));
    }

    #[test]
    fn worked_example_in_dimension_three() {
        let w = beta_one();
        let f = canonical_filtration_checked(&w).unwrap();
        let ctx = w.space().ctx();
        let e = Subspace::from_vectors(ctx, 3, &[vec![1, 0, 0]]);
        let er = Subspace::from_vectors(ctx, 3, &[vec![1, 0, 0], vec![0, 0, 1]]);
        assert_eq!((f.at(1), f.at(2)), (&e, &e));
        assert_eq!((f.at(0), f.at(-1)), (&er, &er));
        assert!(f.at(3).is_zero() && f.at(-2).is_full());
        assert_eq!((-2..=2).map(|a| f.f(a)).collect::<Vec<_>>(), vec![1, 0, 1, 0, 1]);
        f.check_perp_with_radical(w.space()).unwrap();
        check_explicit_layers(&w, &f).unwrap();
    }

    #[test]
    fn shifted_filtration_is_not_a_q_filtration() {
        let w = beta_one();
        let f = canonical_filtration(&w).unwrap();
        let shifted = QFiltration::new(3, f.lo() + 1, (f.lo()..f.hi()).map(|a| f.at(a).clone()).collect());
        assert!(!shifted.is_q_filtration(w.space()));
    }

    #[test]
    fn mutation_breaks_the_worked_example() {
        let w = beta_one();
        let f = canonical_filtration_with(&w, FiltrationMutation { drop_lambda_shift: true }).unwrap();
        assert!(!f.is_q_filtration(w.space()) || !f.shifts_by_two(w.space(), w.n()) || f != canonical_filtration(&w).unwrap());
    }
}
