//! Property-based tests for the algebraic invariants: Bezout identities,
//! cancellation replay, Smith normal form soundness, determinant invariance
//! under elementary scripts, and the Whitehead factorization.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use unirow::ring::int_xgcd as xgcd;
use unirow::{
    apply_script, are_e_equivalent, determinant, is_unimodular, normalize_row,
    smith_normal_form, whitehead_ops, Elem, ElementaryOp, ElementaryScript, ExactMatrix,
    InvariantFactorModule, PrincipalIdeal, Ring, RowTuple, Side,
};

fn small_int() -> impl Strategy<Value = i64> {
    -30i64..=30
}

proptest! {
    #[test]
    fn bezout_identity(a in any::<i32>(), b in any::<i32>()) {
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        let (g, x, y) = xgcd(&a, &b);
        prop_assert!(g >= BigInt::zero());
        prop_assert_eq!(&x * &a + &y * &b, g);
    }

    #[test]
    fn row_cancel_replays_to_the_gcd(entries in prop::collection::vec(small_int(), 2..=5)) {
        let row: Vec<Elem> = entries.iter().map(|&v| Elem::int(v)).collect();
        let (d, script) = unirow::row_cancel(&row).unwrap();
        let mat = ExactMatrix::from_rows(Ring::Int, vec![row]).unwrap();
        let out = apply_script(&mat, &script, Side::Columns).unwrap();
        prop_assert_eq!(out.at(0, 0), &d);
        for j in 1..entries.len() {
            prop_assert!(out.at(0, j).is_zero());
        }
        let expected = entries
            .iter()
            .fold(BigInt::zero(), |g, &v| xgcd(&g, &BigInt::from(v)).0);
        prop_assert_eq!(d, Elem::Int(expected));
    }

    #[test]
    fn smith_normal_form_soundness(
        rows in 1usize..=4,
        cols in 1usize..=4,
        seed in prop::collection::vec(small_int(), 16),
    ) {
        let entries: Vec<Elem> = (0..rows * cols).map(|i| Elem::int(seed[i])).collect();
        let a = ExactMatrix::new(Ring::Int, rows, cols, entries).unwrap();
        let (p, d, q) = smith_normal_form(&a).unwrap();
        prop_assert_eq!(p.mul(&a).unwrap().mul(&q).unwrap(), d.clone());
        prop_assert!(determinant(&p).unwrap().is_unit());
        prop_assert!(determinant(&q).unwrap().is_unit());
        prop_assert!(d.is_diagonal());
        for i in 1..rows.min(cols) {
            let prev = d.at(i - 1, i - 1);
            let next = d.at(i, i);
            prop_assert!(unirow::ring::divides(prev, next).unwrap(),
                "divisibility broken: {} does not divide {}", prev, next);
        }
    }

    #[test]
    fn script_matrices_are_unimodular(
        ops in prop::collection::vec((0usize..3, 0usize..3, -5i64..=5), 0..8),
    ) {
        let ops: Vec<ElementaryOp> = ops
            .into_iter()
            .filter(|(s, t, _)| s != t)
            .map(|(s, t, c)| ElementaryOp::new(s, t, Elem::int(c)))
            .collect();
        let script = ElementaryScript::new(3, ops).unwrap();
        let m = script.matrix(&Ring::Int).unwrap();
        prop_assert_eq!(determinant(&m).unwrap(), Elem::int(1));
    }

    #[test]
    fn delta_is_invariant_under_elementary_scripts(
        a in 1i64..5, b in 0i64..5, c in 0i64..5, d in 1i64..5,
        ops in prop::collection::vec((0usize..2, 0usize..2, -4i64..=4), 0..6),
    ) {
        let m = InvariantFactorModule::cyclic_factors(&[5, 5]).unwrap();
        let row = RowTuple::from_i64(&m, &[&[a, b], &[c, d]]);
        prop_assume!(is_unimodular(&row).unwrap());
        let before = normalize_row(&row).unwrap().delta;
        let ops: Vec<ElementaryOp> = ops
            .into_iter()
            .filter(|(s, t, _)| s != t)
            .map(|(s, t, coeff)| ElementaryOp::new(s, t, Elem::int(coeff)))
            .collect();
        let script = ElementaryScript::new(2, ops).unwrap();
        let moved = row.apply_script(&script).unwrap();
        let after = normalize_row(&moved).unwrap().delta;
        prop_assert_eq!(before.clone(), after);
        // and the equivalence decision agrees, with a replaying witness
        let (verdict, witness) = are_e_equivalent(&row, &moved).unwrap();
        prop_assert!(verdict);
        prop_assert_eq!(row.apply_script(&witness.unwrap()).unwrap(), moved);
    }

    #[test]
    fn whitehead_ops_give_the_unit_diagonal(p_idx in 0usize..4, u_raw in 1u64..11) {
        let p = [3u64, 5, 7, 11][p_idx];
        let u_val = u_raw % p;
        prop_assume!(u_val != 0);
        let ring = Ring::int_mod(p).unwrap();
        let u = Elem::int_mod(p, u_val);
        let v = u.inv().unwrap();
        let script = ElementaryScript::new(2, whitehead_ops(&u, &v, 0, 1)).unwrap();
        let m = script.matrix(&ring).unwrap();
        prop_assert_eq!(m.at(0, 0), &u);
        prop_assert_eq!(m.at(1, 1), &v);
        prop_assert!(m.at(0, 1).is_zero());
        prop_assert!(m.at(1, 0).is_zero());
    }

    #[test]
    fn ideal_canonicalization_is_idempotent(v in any::<i32>(), n in 2u32..60) {
        let ideal = PrincipalIdeal::new(Elem::int_mod(n, v));
        let again = PrincipalIdeal::new(ideal.generator().clone());
        prop_assert_eq!(ideal.generator(), again.generator());
        let int_ideal = PrincipalIdeal::new(Elem::int(v));
        prop_assert!(!matches!(int_ideal.generator(), Elem::Int(g) if g.is_negative()));
    }

    #[test]
    fn normalization_is_idempotent_on_canonical_rows(a in 1i64..5) {
        prop_assume!(a % 5 != 0);
        let m = InvariantFactorModule::cyclic_factors(&[5, 5]).unwrap();
        let canon = unirow::canonical_row(&m, &Elem::int(a), 2).unwrap();
        let res = normalize_row(&canon).unwrap();
        prop_assert_eq!(res.canonical, canon);
        prop_assert_eq!(res.delta, Elem::int(a));
    }
}
