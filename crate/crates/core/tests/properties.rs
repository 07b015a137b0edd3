use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use uniclass_core::filtration::{admissible_labels, analyze, Checks, PieceLabel};
use uniclass_core::linalg::kernel;
use uniclass_core::quadspace::{standard_space, DEFAULT_GROUP_GUARD};
use uniclass_core::{field_of_order, CountPolynomial, FieldCtx, FormType, Mat, RatPoly, Subspace};

const ORDERS: [u32; 7] = [2, 3, 4, 5, 7, 8, 9];

fn field(q: u32) -> FieldCtx {
    field_of_order(q).unwrap()
}

fn mat(ctx: &FieldCtx, n: usize, raw: &[u32]) -> Mat {
    Mat::from_data(n, n, raw.iter().take(n * n).map(|&x| (x % ctx.q()) as u8).collect())
}

fn poly(coeffs: &[i64]) -> CountPolynomial {
    CountPolynomial::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
}

proptest! {
    #[test]
    fn field_axioms(qi in 0..ORDERS.len(), a in 0u32..9, b in 0u32..9, c in 0u32..9) {
        let ctx = field(ORDERS[qi]);
        let [a, b, c] = [a, b, c].map(|x| (x % ctx.q()) as u8);
        prop_assert_eq!(ctx.mul(a, ctx.add(b, c)), ctx.add(ctx.mul(a, b), ctx.mul(a, c)));
        prop_assert_eq!(ctx.add(a, ctx.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(ctx.mul(a, ctx.inv(a)), 1);
        }
        prop_assert_eq!(ctx.pow(a, ctx.q() as u64), a);
    }

    #[test]
    fn determinant_is_multiplicative(qi in 0..ORDERS.len(), n in 1usize..5, x in prop::collection::vec(0u32..9, 16), y in prop::collection::vec(0u32..9, 16)) {
        let ctx = field(ORDERS[qi]);
        let (a, b) = (mat(&ctx, n, &x), mat(&ctx, n, &y));
        prop_assert_eq!(a.mul(&ctx, &b).det(&ctx), ctx.mul(a.det(&ctx), b.det(&ctx)));
        prop_assert_eq!(a.rank(&ctx) + kernel(&ctx, &a).dim(), n);
        prop_assert_eq!(a.inverse(&ctx).is_some(), a.det(&ctx) != 0);
    }

    #[test]
    fn subspace_dimension_formula(qi in 0..ORDERS.len(), x in prop::collection::vec(0u32..9, 16), y in prop::collection::vec(0u32..9, 16), ru in 0usize..4, rw in 0usize..4) {
        let ctx = field(ORDERS[qi]);
        let u = Subspace::from_matrix_rows(&ctx, mat(&ctx, 4, &x).row_block(0..ru));
        let w = Subspace::from_matrix_rows(&ctx, mat(&ctx, 4, &y).row_block(0..rw));
        let sum = u.sum(&ctx, &w).unwrap();
        let meet = u.intersect(&ctx, &w).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), u.dim() + w.dim());
        prop_assert!(meet.is_subspace_of(&ctx, &u) && u.is_subspace_of(&ctx, &sum));
    }

    #[test]
    fn polynomial_evaluation_is_a_ring_map(a in prop::collection::vec(-9i64..9, 0..6), b in prop::collection::vec(-9i64..9, 1..6), q in 2u64..9) {
        let (p, r) = (poly(&a), poly(&b));
        let at = |x: &CountPolynomial| x.eval_u64(q);
        prop_assert_eq!(at(&(&p * &r)), at(&p) * at(&r));
        prop_assert_eq!(at(&(&p + &r)), at(&p) + at(&r));
        if !r.is_zero() {
            let back = RatPoly::from(&(&p * &r)).div_exact(&RatPoly::from(&r)).unwrap().to_integer().unwrap();
            prop_assert_eq!(back, p);
        }
    }

    #[test]
    fn piece_labels_round_trip(d in 1usize..9, split in any::<bool>(), pick in any::<prop::sample::Index>()) {
        let t = if d % 2 == 1 { FormType::Odd } else if split { FormType::Split } else { FormType::NonSplit };
        let labels = admissible_labels(d, t);
        let label = pick.get(&labels);
        prop_assert_eq!(label.dim(), d);
        prop_assert_eq!(&label.to_string().parse::<PieceLabel>().unwrap(), label);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Conjugating by a random product of SO generators preserves the piece label
    /// and the Dickson invariant is additive.
    #[test]
    fn labels_are_conjugation_invariant(which in 0usize..4, pick in any::<prop::sample::Index>(), word in prop::collection::vec(any::<prop::sample::Index>(), 1..6)) {
        let (q, d, t) = [(2, 4, FormType::Split), (2, 5, FormType::Odd), (3, 4, FormType::NonSplit), (4, 3, FormType::Odd)][which];
        let ctx = Arc::new(field(q));
        let s = standard_space(&ctx, d, t).unwrap();
        let unis = s.unipotent_elements().unwrap();
        let gens = s.orthogonal_generators(DEFAULT_GROUP_GUARD).unwrap();
        let mut g = Mat::identity(d);
        let mut delta = 0;
        for w in &word {
            let h = w.get(&gens);
            delta ^= s.dickson(h).unwrap();
            g = g.mul(&ctx, h);
        }
        prop_assert_eq!(s.dickson(&g).unwrap(), delta);
        let u = pick.get(&unis);
        let v = g.mul(&ctx, u).mul(&ctx, &g.inverse(&ctx).unwrap());
        let (_, a) = analyze(&s, u, Checks::ALL).unwrap();
        let (_, b) = analyze(&s, &v, Checks::ALL).unwrap();
        // O∖SO swaps the two f_0 = 0 components.
        let b = if delta == 1 { PieceLabel { component: b.component.map(|j| 1 - j), ..b } } else { b };
        prop_assert_eq!(a, b);
    }
}
