//! The determinant invariant decides elementary equivalence of minimal
//! generating tuples, and true verdicts come with replayable witnesses.

use unirow::{are_e_equivalent, det_invariant, orbit_count, InvariantFactorModule, RowTuple};

fn main() {
    let m = InvariantFactorModule::cyclic_factors(&[5, 5]).unwrap();

    let a = RowTuple::from_i64(&m, &[&[2, 0], &[0, 1]]);
    let b = RowTuple::from_i64(&m, &[&[0, 1], &[3, 0]]);
    let c = RowTuple::from_i64(&m, &[&[3, 0], &[0, 1]]);

    for (name, row) in [("a", &a), ("b", &b), ("c", &c)] {
        let d = det_invariant(&m, row).unwrap();
        println!("det({}) = {} (mod {})", name, d.value, d.quotient.generator());
    }

    let (verdict, witness) = are_e_equivalent(&a, &b).unwrap();
    println!("a ~ b: {}", verdict);
    let w = witness.unwrap();
    assert_eq!(a.apply_script(&w).unwrap(), b);
    println!("witness of {} transvections replays a to b: ok", w.len());

    let (verdict, _) = are_e_equivalent(&a, &c).unwrap();
    println!("a ~ c: {}", verdict);

    println!("number of classes at minimal length: {}", orbit_count(&m, 2).unwrap());
}
