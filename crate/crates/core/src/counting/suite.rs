//! Formula-versus-enumeration comparisons over a range of fields.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::*;
use crate::filtration::{admissible_labels, GradedSpace};
use crate::gf::field_of_order;
use crate::linalg::{for_each_subspace, Subspace};
use crate::quadspace::{standard_space, FormType, QuadSpace};

/// One formula value against one enumerated value. `predicted` is `None` when
/// the formula could not be evaluated.
#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub quantity: String,
    /// Ambient and subspace dimension, for subspace counts.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub q: u32,
    pub predicted: Option<String>,
    pub observed: u64,
    pub ok: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ComparisonReport {
    pub comparisons: Vec<Comparison>,
}

impl ComparisonReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &Comparison> {
        self.comparisons.iter().filter(|c| !c.ok)
    }

    pub fn passed(&self) -> bool {
        self.comparisons.iter().all(|c| c.ok)
    }

    fn push(&mut self, quantity: String, q: u32, predicted: Result<BigRational>, observed: u64) {
        self.push_sk(quantity, None, q, predicted, observed);
    }

    fn push_sk(&mut self, quantity: String, sk: Option<(usize, usize)>, q: u32, predicted: Result<BigRational>, observed: u64) {
        let (predicted, ok) = match predicted {
            Ok(v) => {
                let ok = v == BigRational::from_integer(BigInt::from(observed));
                (Some(v.to_string()), ok)
            }
            Err(_) => (None, false),
        };
        self.comparisons.push(Comparison { quantity, s: sk.map(|x| x.0), k: sk.map(|x| x.1), q, predicted, observed, ok });
    }
}

/// Limits for the enumerations.
#[derive(Clone, Copy, Debug)]
pub struct SuiteLimits {
    /// Largest ambient dimension for subspace and flag counts.
    pub smax: usize,
    /// Largest group order or matrix count to enumerate.
    pub guard: u64,
    /// Largest D for the |E²_*| comparisons.
    pub e2_dmax: usize,
}

impl Default for SuiteLimits {
    fn default() -> Self {
        SuiteLimits { smax: 6, guard: 300_000, e2_dmax: 5 }
    }
}

fn at(p: &CountPolynomial, q: u32) -> BigRational {
    BigRational::from_integer(p.eval_u64(q as u64))
}

fn types_for(d: usize) -> Vec<FormType> {
    if d % 2 == 1 {
        vec![FormType::Odd]
    } else {
        vec![FormType::Split, FormType::NonSplit]
    }
}

fn type_name(t: FormType) -> &'static str {
    match t {
        FormType::Split => "+",
        FormType::NonSplit => "-",
        FormType::Odd => "",
    }
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::Eta(1) => "+",
        Side::Eta(_) => "-",
        Side::Star => "*",
    }
}

/// Nondegenerate subspaces of every dimension, tallied by dimension and type.
pub fn bf_subspace_census(space: &QuadSpace) -> BTreeMap<(usize, Side), u64> {
    let ctx = space.ctx();
    let mut out = BTreeMap::new();
    for k in 1..=space.dim() {
        for_each_subspace(ctx, space.dim(), k, |m| {
            let w = Subspace::from_matrix_rows(ctx, m.clone());
            let (sub, nd) = space.restrict(&w);
            if nd {
                let side = Side::of_type(sub.form_type().expect("nondegenerate restrictions are typed"));
                *out.entry((k, side)).or_insert(0) += 1;
            }
        });
    }
    out
}

fn descending_sequences(top: usize, even_only: bool) -> Vec<Vec<usize>> {
    fn go(prev: usize, even_only: bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for x in (1..prev).rev() {
            if even_only && x % 2 == 1 {
                continue;
            }
            cur.push(x);
            go(x, even_only, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(top, even_only, &mut vec![top], &mut out);
    out
}

/// Compares P_m, P_m^δ, R_m, A_m, N, ν, ν^ε, ν′ and |E²_*| against enumeration
/// over each GF(q) in `qs`.
pub fn formula_oracle_comparisons(counter: &Counter, qs: &[u32], limits: SuiteLimits) -> Result<ComparisonReport> {
    let mut report = ComparisonReport::default();
    for &q in qs {
        let ctx = Arc::new(field_of_order(q)?);
        let char2 = ctx.is_char2();
        for s in 1..=limits.smax {
            for t in types_for(s) {
                let space = standard_space(&ctx, s, t)?;
                let left = Side::of_type(t);
                let census = bf_subspace_census(&space);
                for k in 1..=s {
                    let rights = if k % 2 == 1 { vec![Side::Star] } else { vec![Side::Eta(1), Side::Eta(-1)] };
                    for right in rights {
                        let observed = census.get(&(k, right)).copied().unwrap_or(0);
                        let predicted = counter.count_n(s, k, left, right).and_then(|c| c.eval_at(q as u64));
                        report.push_sk(format!("N[{s}{},{k}{}]", side_name(left), side_name(right)), Some((s, k)), q, predicted, observed);
                    }
                }
                // Group orders: |O| = 2P for even dimension and for odd dimension in odd characteristic.
                let order_poly = match t {
                    FormType::Odd => poly_p(s),
                    _ => poly_pd(s, t.eta().unwrap()),
                };
                let factor = if t == FormType::Odd && char2 { 1 } else { 2 };
                let predicted = order_poly.map(|p| at(&p, q) * BigRational::from_integer(BigInt::from(factor)));
                if predicted.as_ref().is_ok_and(|v| *v <= BigRational::from_integer(BigInt::from(limits.guard))) {
                    let name = if t == FormType::Odd { format!("P_{s}") } else { format!("P_{s}^{}", type_name(t)) };
                    report.push(format!("|O| via {name}"), q, predicted, bf_orthogonal_order(&space));
                }
                for r in descending_sequences(s, false) {
                    if r.len() < 2 {
                        continue;
                    }
                    let predicted = match t.eta() {
                        Some(e) => counter.nu_eps(e, &r),
                        None => counter.nu(&r),
                    };
                    if at(&gaussian_binomial(s, r[1])?, q) > BigRational::from_integer(BigInt::from(limits.guard)) {
                        continue;
                    }
                    let observed = bf_count_flags(&space, &r)?;
                    report.push(format!("nu{}{r:?}", type_name(t)), q, predicted.map(|p| at(&p, q)), observed);
                }
            }
        }
        for m in (2..=limits.smax).step_by(2) {
            let r = poly_r(m)?;
            if at(&r, q) <= BigRational::from_integer(BigInt::from(limits.guard)) {
                report.push(format!("R_{m}"), q, Ok(at(&r, q)), bf_sp_order(&ctx, m));
            }
            for seq in descending_sequences(m, true) {
                if seq.len() < 2 {
                    continue;
                }
                let observed = bf_count_symplectic_flags(&ctx, &seq)?;
                report.push(format!("nu'{seq:?}"), q, nu_prime(&seq).map(|p| at(&p, q)), observed);
            }
        }
        for m in 1..=4 {
            if let Ok(observed) = bf_gl_order(&ctx, m, limits.guard.max(1 << 16)) {
                report.push(format!("A_{m}"), q, Ok(at(&poly_a(m), q)), observed);
            }
        }
        for d in 2..=limits.e2_dmax {
            for t in types_for(d) {
                for label in admissible_labels(d, t) {
                    let graded = GradedSpace::model(&ctx, &label, t)?;
                    let Ok(observed) = bf_count_e2star(&graded, limits.guard) else { continue };
                    let predicted = counter.card_e2star(&label, t).map(|p| at(&p, q));
                    report.push(format!("|E2*| D{d}{} {label}", type_name(t)), q, predicted, observed);
                }
            }
        }
    }
    Ok(report)
}

/// Compares |E^{≥2}_*| with q^d·|E²_*|, both enumerated on the graded model,
/// for every admissible label with D ≤ `dmax`.
pub fn fibration_comparisons(qs: &[u32], dmax: usize, guard: u64) -> Result<ComparisonReport> {
    let mut report = ComparisonReport::default();
    for &q in qs {
        let ctx = Arc::new(field_of_order(q)?);
        for d in 2..=dmax {
            for t in types_for(d) {
                for label in admissible_labels(d, t) {
                    let graded = GradedSpace::model(&ctx, &label, t)?;
                    let (Ok(total), Ok(base)) = (bf_count_e_ge2_star(&graded, guard), bf_count_e2star(&graded, guard)) else {
                        continue;
                    };
                    let predicted = BigRational::from_integer(BigInt::from(q).pow(dim_d(&label) as u32) * BigInt::from(base));
                    report.push(format!("|E>=2*| D{d}{} {label} (d = {})", type_name(t), dim_d(&label)), q, Ok(predicted), total);
                }
            }
        }
    }
    Ok(report)
}
