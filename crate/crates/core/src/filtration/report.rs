//! Enumerated piece sizes of a whole space against the predicted polynomials.

use rayon::prelude::*;
use serde::Serialize;

use super::{
    admissible_labels, class_partition, piece_census_with, verify_uniqueness, Checks, FiltrationMutation, PieceLabel, TsLattice,
};
use crate::counting::Counter;
use crate::error::Result;
use crate::linalg::Mat;
use crate::nilpotent::NilpotentWitness;
use crate::quadspace::{unipotent_count, QuadSpace, DEFAULT_GROUP_GUARD};

#[derive(Clone, Debug, Default)]
pub struct BijectionOptions {
    pub checks: Option<Checks>,
    /// Search all Q-filtrations for each element (small spaces only).
    pub uniqueness: bool,
    /// Split pieces into conjugacy classes.
    pub orbits: bool,
    pub counter: Counter,
    pub mutation: FiltrationMutation,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitRecord {
    /// Blocks of the class-label partition (characteristic 2, f_0 > 0).
    pub partition: Vec<Vec<usize>>,
    pub elements: u64,
    pub orbits: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PieceRecord {
    pub phi: String,
    pub f: Vec<usize>,
    pub component: Option<u8>,
    pub predicted_poly: Option<String>,
    pub predicted_at_q: Option<String>,
    pub observed: u64,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbits: Option<Vec<OrbitRecord>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BijectionReport {
    pub dim: usize,
    pub q: u32,
    pub form_type: String,
    pub unipotents: u64,
    /// q^(dim SO − rank SO).
    pub expected_unipotents: String,
    pub pieces: Vec<PieceRecord>,
    /// Labels produced by the census that are not admissible for this space.
    pub stray_labels: Vec<String>,
    /// Whether the uniqueness search ran, and its outcome.
    pub uniqueness: Option<bool>,
    /// Whether every conjugacy class carries one label (when orbits were computed).
    pub labels_constant_on_orbits: Option<bool>,
    pub passed: bool,
}

impl BijectionReport {
    /// Mismatching pieces, for printing counterexamples.
    pub fn failures(&self) -> impl Iterator<Item = &PieceRecord> {
        self.pieces.iter().filter(|p| !p.ok)
    }
}

fn orbit_records(space: &QuadSpace, unipotents: &[Mat]) -> Result<(Vec<(PieceLabel, OrbitRecord)>, bool)> {
    let gens = space.special_orthogonal_generators(DEFAULT_GROUP_GUARD)?;
    let part = class_partition(space, unipotents, &gens)?;
    let records = part
        .classes
        .into_iter()
        .map(|c| (c.label.piece, OrbitRecord { partition: c.label.partition, elements: c.elements, orbits: c.orbits }))
        .collect();
    Ok((records, part.constant))
}

/// Enumerates the unipotent elements of SO_Q, labels each by its canonical
/// filtration and compares piece sizes with the predicted polynomials.
pub fn bijection_report(space: &QuadSpace, opts: &BijectionOptions) -> Result<BijectionReport> {
    let form_type = space.form_type().ok_or_else(|| crate::Error::Precondition("space must be nondegenerate".into()))?;
    let q = space.ctx().q();
    let unipotents = space.unipotent_elements()?;
    let census = piece_census_with(space, &unipotents, opts.checks.unwrap_or(Checks::ALL), opts.mutation)?;
    let labels = admissible_labels(space.dim(), form_type);
    let orbit_data = if opts.orbits { Some(orbit_records(space, &unipotents)?) } else { None };
    let mut pieces = Vec::new();
    for label in &labels {
        let predicted = opts.counter.card_piece(label, form_type);
        let observed = census.observed(label);
        let at_q = predicted.as_ref().ok().map(|p| p.eval_u64(q as u64));
        let ok = at_q.as_ref().is_some_and(|v| *v == observed.into());
        let orbits = orbit_data.as_ref().map(|(recs, _)| {
            recs.iter().filter(|(l, _)| l == label).map(|(_, r)| r.clone()).collect::<Vec<_>>()
        });
        pieces.push(PieceRecord {
            phi: label.to_string(),
            f: label.f.clone(),
            component: label.component,
            predicted_poly: predicted.as_ref().ok().map(|p| p.to_string()),
            predicted_at_q: at_q.map(|v| v.to_string()),
            observed,
            ok,
            orbits,
        });
    }
    let stray_labels: Vec<String> =
        census.pieces.iter().filter(|p| !labels.contains(&p.label)).map(|p| p.label.to_string()).collect();
    let uniqueness = if opts.uniqueness {
        let lattice = TsLattice::new(space);
        let ok = unipotents.par_iter().all(|u| {
            NilpotentWitness::from_unipotent(space.clone(), u).and_then(|w| verify_uniqueness(&w, &lattice)).is_ok()
        });
        Some(ok)
    } else {
        None
    };
    let expected = unipotent_count(space.dim(), q);
    let constant = orbit_data.as_ref().map(|(_, c)| *c);
    let passed = pieces.iter().all(|p| p.ok)
        && stray_labels.is_empty()
        && expected == (census.total).into()
        && uniqueness != Some(false)
        && constant != Some(false);
    Ok(BijectionReport {
        dim: space.dim(),
        q,
        form_type: format!("{form_type:?}"),
        unipotents: census.total,
        expected_unipotents: expected.to_string(),
        pieces,
        stray_labels,
        uniqueness,
        labels_constant_on_orbits: constant,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_of_order;
    use crate::quadspace::{standard_space, FormType};
    use std::sync::Arc;

    #[test]
    fn small_spaces_match_predictions() {
        for q in [2, 3] {
            let ctx = Arc::new(field_of_order(q).unwrap());
            for (d, t) in [(2, FormType::Split), (2, FormType::NonSplit), (3, FormType::Odd), (4, FormType::Split)] {
                let s = standard_space(&ctx, d, t).unwrap();
                let opts = BijectionOptions { uniqueness: true, orbits: true, ..Default::default() };
                let r = bijection_report(&s, &opts).unwrap();
                assert!(r.passed, "{r:#?}");
            }
        }
    }

    #[test]
    fn regular_piece_in_dimension_three() {
        for (q, want) in [(2, 3), (3, 8)] {
            let s = standard_space(&Arc::new(field_of_order(q).unwrap()), 3, FormType::Odd).unwrap();
            let r = bijection_report(&s, &BijectionOptions::default()).unwrap();
            let reg = r.pieces.iter().find(|p| p.phi == "(1,0,1,0,1)").unwrap();
            assert_eq!((reg.observed, reg.predicted_poly.as_deref()), (want, Some("q^2 - 1")));
        }
    }
}
