//! Exhaustive checks over a finite space: uniqueness of adapted filtrations,
//! per-element invariants, the piece census, and class partitions.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use super::{
    canonical_filtration, canonical_filtration_with, check_explicit_layers, class_label, is_adapted, piece_label, weight_filtration, ClassLabel,
    FiltrationMutation, GradedView, PieceLabel, QFiltration,
};
use crate::error::{ensure, Error, Result};
use crate::linalg::{Mat, Subspace};
use crate::nilpotent::{Membership, NilpotentWitness};
use crate::quadspace::{conjugation_orbits, QuadSpace};

/// Every totally singular subspace, with containments, for brute-force searches.
pub struct TsLattice {
    subspaces: Vec<Subspace>,
    below: Vec<Vec<usize>>,
}

impl TsLattice {
    pub fn new(space: &QuadSpace) -> Self {
        let ctx = space.ctx();
        let top = space.form_type().map(|t| t.witt_index(space.dim())).unwrap_or(space.dim() / 2);
        let subspaces: Vec<Subspace> = (0..=top).flat_map(|k| space.totally_singular_subspaces(k)).collect();
        let below = subspaces
            .iter()
            .map(|s| (0..subspaces.len()).filter(|&j| subspaces[j].is_subspace_of(ctx, s)).collect())
            .collect();
        TsLattice { subspaces, below }
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }
}

/// All adapted filtrations of N, found by running over chains
/// X^{≥1} ⊇ X^{≥2} ⊇ … of totally singular subspaces (X^{≥1−a} = (X^{≥a})^⊥).
/// Only degrees |a| < 2e can occur in an adapted filtration.
pub fn adapted_filtrations(w: &NilpotentWitness, lattice: &TsLattice) -> Result<Vec<QFiltration>> {
    let space = w.space();
    let ctx = space.ctx();
    let len = (2 * w.e()).saturating_sub(1).max(1);
    let mut found = Vec::new();
    let mut chain: Vec<usize> = Vec::with_capacity(len);
    fn dfs(
        w: &NilpotentWitness,
        lattice: &TsLattice,
        len: usize,
        chain: &mut Vec<usize>,
        found: &mut Vec<QFiltration>,
    ) -> Result<()> {
        let space = w.space();
        let ctx = space.ctx();
        if chain.len() == len {
            let ts: Vec<&Subspace> = chain.iter().map(|&i| &lattice.subspaces[i]).collect();
            let lo = 1 - len as i32;
            let levels = (lo..=len as i32)
                .map(|a| if a >= 1 { ts[(a - 1) as usize].clone() } else { space.perp(ts[(-a) as usize]) })
                .collect();
            let f = QFiltration::new(space.dim(), lo, levels);
            if is_adapted(space, &f, w.n())? {
                found.push(f);
            }
            return Ok(());
        }
        let candidates: Vec<usize> = match chain.last() {
            Some(&i) => lattice.below[i].clone(),
            None => (0..lattice.len()).collect(),
        };
        for j in candidates {
            // N X^{≥a−2} ⊆ X^{≥a} among the positive degrees.
            if chain.len() >= 2 {
                let src = &lattice.subspaces[chain[chain.len() - 2]];
                if !src.image_under(ctx, w.n()).is_subspace_of(ctx, &lattice.subspaces[j]) {
                    continue;
                }
            }
            chain.push(j);
            dfs(w, lattice, len, chain, found)?;
            chain.pop();
        }
        Ok(())
    }
    let _ = ctx;
    dfs(w, lattice, len, &mut chain, &mut found)?;
    Ok(found)
}

/// Exactly one adapted filtration exists and it is the canonical one.
pub fn verify_uniqueness(w: &NilpotentWitness, lattice: &TsLattice) -> Result<()> {
    let all = adapted_filtrations(w, lattice)?;
    ensure!(all.len() == 1, "{} adapted filtrations", all.len());
    ensure!(all[0] == canonical_filtration(w)?, "the adapted filtration is not the canonical one");
    Ok(())
}

/// The rule for ξ_a = dim ker(N̄^a : gr^{−a} → gr^a), a ≥ 2 even, in terms of
/// c_b and ε_a (characteristic 2).
pub fn check_xi_rule(w: &NilpotentWitness, filt: &QFiltration) -> Result<()> {
    let space = w.space();
    if !space.ctx().is_char2() {
        return Ok(());
    }
    let view = GradedView::new(space, filt)?;
    let t = view.graded_part(w.n()).ok_or_else(|| Error::Check("N does not raise the filtration by 2".into()))?;
    let kd = view.graded.kernel_dims(&t);
    let eps = w.eps()?;
    let d = space.dim();
    for a in (2..=d).step_by(2) {
        let xi = kd.get(a).copied().unwrap_or(0);
        let phi = (a + 1..=d).filter(|b| b % 2 == 0 && w.c(*b) % 2 == 1).count();
        let expect = if w.c(a) % 2 == 1 || phi % 2 == 1 { 1 } else { usize::from(eps.get(a).copied().unwrap_or(0)) };
        ensure!(xi == expect, "ξ_{a} = {xi}, expected {expect}");
    }
    for a in (1..kd.len()).step_by(2) {
        ensure!(kd[a] == 0, "K_{a} ≠ 0 for odd a");
    }
    Ok(())
}

/// Which checks [`analyze`] runs beyond computing the filtration and label.
#[derive(Clone, Copy, Debug)]
pub struct Checks {
    pub filtration_laws: bool,
    pub adapted: bool,
    /// Reduction predictions, line properties, ξ rule and explicit layers (p = 2),
    /// weight-filtration agreement (odd p).
    pub structure: bool,
}

impl Checks {
    pub const ALL: Checks = Checks { filtration_laws: true, adapted: true, structure: true };
    pub const NONE: Checks = Checks { filtration_laws: false, adapted: false, structure: false };
}

/// Canonical filtration and piece label of a unipotent u, with the chosen checks.
pub fn analyze(space: &QuadSpace, u: &Mat, checks: Checks) -> Result<(QFiltration, PieceLabel)> {
    analyze_with(space, u, checks, FiltrationMutation::default())
}

pub fn analyze_with(space: &QuadSpace, u: &Mat, checks: Checks, mutation: FiltrationMutation) -> Result<(QFiltration, PieceLabel)> {
    let ctx = space.ctx();
    let n = u.add_identity(ctx, ctx.neg(1));
    let w = NilpotentWitness::new(space.clone(), n)?;
    if ctx.is_char2() {
        ensure!(w.membership()? == Membership::InCm, "u − 1 ∉ 𝔪_Q for u ∈ SO");
    }
    let f = canonical_filtration_with(&w, mutation)?;
    if checks.filtration_laws {
        f.check_q_filtration(space)?;
        f.check_perp_with_radical(space)?;
        ensure!(f.shifts_by_two(space, w.n()), "N X^(≥a) ⊄ X^(≥a+2)");
    }
    if checks.adapted {
        ensure!(is_adapted(space, &f, w.n())?, "canonical filtration is not adapted");
    }
    if checks.structure && !w.is_zero() {
        if ctx.is_char2() {
            w.reduce()?;
            check_xi_rule(&w, &f)?;
            check_explicit_layers(&w, &f)?;
        } else {
            ensure!(weight_filtration(space, w.n())? == f, "canonical filtration differs from the weight filtration");
        }
    }
    let label = piece_label(space, &f)?;
    Ok((f, label))
}

/// Observed size of one piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceObservation {
    pub label: PieceLabel,
    pub observed: u64,
}

/// Census of unipotent elements by piece label.
#[derive(Clone, Debug, Serialize)]
pub struct PieceCensus {
    pub total: u64,
    pub pieces: Vec<PieceObservation>,
}

impl PieceCensus {
    pub fn observed(&self, label: &PieceLabel) -> u64 {
        self.pieces.iter().find(|p| p.label == *label).map_or(0, |p| p.observed)
    }
}

/// Run [`analyze`] on every unipotent element and tally labels.
pub fn piece_census(space: &QuadSpace, unipotents: &[Mat], checks: Checks) -> Result<PieceCensus> {
    piece_census_with(space, unipotents, checks, FiltrationMutation::default())
}

pub fn piece_census_with(space: &QuadSpace, unipotents: &[Mat], checks: Checks, mutation: FiltrationMutation) -> Result<PieceCensus> {
    let tally = unipotents
        .par_iter()
        .map(|u| analyze_with(space, u, checks, mutation).map(|(_, l)| l))
        .try_fold(BTreeMap::new, |mut m: BTreeMap<PieceLabel, u64>, l| {
            *m.entry(l?).or_default() += 1;
            Ok::<_, Error>(m)
        })
        .try_reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            Ok(a)
        })?;
    Ok(PieceCensus {
        total: unipotents.len() as u64,
        pieces: tally.into_iter().map(|(label, observed)| PieceObservation { label, observed }).collect(),
    })
}

/// For one class label: how many unipotents carry it and how many conjugacy
/// classes they form.
#[derive(Clone, Debug, Serialize)]
pub struct ClassObservation {
    pub label: ClassLabel,
    pub elements: u64,
    pub orbits: usize,
}

/// Conjugacy classes grouped by label. `constant` records that every orbit has a
/// single label; `separating` that distinct orbits in one piece have distinct
/// class labels.
#[derive(Clone, Debug, Serialize)]
pub struct ClassPartition {
    pub classes: Vec<ClassObservation>,
    pub orbits: usize,
    pub constant: bool,
    pub separating: bool,
}

/// Orbits of `gens` on the unipotent elements, compared with class labels.
pub fn class_partition(space: &QuadSpace, unipotents: &[Mat], gens: &[Mat]) -> Result<ClassPartition> {
    let ctx = space.ctx();
    let labels = unipotents
        .par_iter()
        .map(|u| {
            let w = NilpotentWitness::from_unipotent(space.clone(), u)?;
            let f = canonical_filtration(&w)?;
            class_label(space, &f, w.n())
        })
        .collect::<Result<Vec<_>>>()?;
    let orbits = conjugation_orbits(ctx, gens, unipotents)?;
    let mut constant = true;
    let mut by_label: BTreeMap<ClassLabel, (u64, usize)> = BTreeMap::new();
    for orbit in &orbits {
        let first = &labels[orbit[0]];
        constant &= orbit.iter().all(|&i| labels[i] == *first);
        let slot = by_label.entry(first.clone()).or_default();
        slot.0 += orbit.len() as u64;
        slot.1 += 1;
    }
    let separating = constant && by_label.values().all(|&(_, k)| k == 1);
    let distinct: BTreeSet<&ClassLabel> = labels.iter().collect();
    ensure!(distinct.len() == by_label.len(), "labels seen on elements but not on orbits");
    Ok(ClassPartition {
        orbits: orbits.len(),
        classes: by_label.into_iter().map(|(label, (elements, orbits))| ClassObservation { label, elements, orbits }).collect(),
        constant,
        separating,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_of_order;
    use crate::quadspace::{standard_space, FormType, DEFAULT_GROUP_GUARD};
    use std::sync::Arc;

    #[test]
    fn uniqueness_in_small_spaces() {
        for q in [2, 3] {
            let ctx = Arc::new(field_of_order(q).unwrap());
            for (d, t) in [(2, FormType::Split), (3, FormType::Odd), (4, FormType::NonSplit)] {
                let s = standard_space(&ctx, d, t).unwrap();
                let lattice = TsLattice::new(&s);
                for u in s.unipotent_elements().unwrap() {
                    let w = NilpotentWitness::from_unipotent(s.clone(), &u).unwrap();
                    verify_uniqueness(&w, &lattice).unwrap();
                }
            }
        }
    }

    #[test]
    fn census_of_so3_over_gf2() {
        let s = standard_space(&Arc::new(field_of_order(2).unwrap()), 3, FormType::Odd).unwrap();
        let us = s.unipotent_elements().unwrap();
        let c = piece_census(&s, &us, Checks::ALL).unwrap();
        assert_eq!(c.total, 4);
        let labels: Vec<String> = c.pieces.iter().map(|p| format!("{}:{}", p.label, p.observed)).collect();
        assert_eq!(labels, vec!["(1,0,1,0,1):3", "(3):1"]);
    }

    #[test]
    fn class_labels_are_constant_on_orbits_in_so5_over_gf2() {
        let s = standard_space(&Arc::new(field_of_order(2).unwrap()), 5, FormType::Odd).unwrap();
        let us = s.unipotent_elements().unwrap();
        let gens = s.special_orthogonal_generators(DEFAULT_GROUP_GUARD).unwrap();
        let p = class_partition(&s, &us, &gens).unwrap();
        assert!(p.constant, "{p:?}");
        assert_eq!(p.orbits, 6);
        // The regular class splits into two rational classes.
        assert!(!p.separating);
    }
}
