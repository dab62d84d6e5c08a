//! Nielsen equivalence of generating tuples of a finite Abelian group:
//! class counting by the extended totient, and explicit L/I move witnesses.

use unirow::{
    are_nielsen_equivalent, nielsen_class_count, nielsen_classes, InvariantFactorModule, RowTuple,
};

fn main() {
    let m = InvariantFactorModule::cyclic_factors(&[5, 5]).unwrap();

    // max(phi(5)/2, 1) = 2 classes of generating pairs
    println!("classes at n = 2: {}", nielsen_class_count(&m, 2).unwrap());
    println!("classes at n = 3: {}", nielsen_class_count(&m, 3).unwrap());

    let report = nielsen_classes(&m, 2).unwrap();
    for (i, rep) in report.representatives.iter().enumerate() {
        println!("class {} representative delta: {}", i + 1, rep.at(0, 0));
    }

    // 3 = -2 mod 5, so these two tuples are Nielsen equivalent
    let a = RowTuple::from_i64(&m, &[&[2, 0], &[0, 1]]);
    let b = RowTuple::from_i64(&m, &[&[3, 0], &[0, 1]]);
    let (verdict, witness) = are_nielsen_equivalent(&a, &b).unwrap();
    println!("(2e1, e2) ~ (3e1, e2): {}", verdict);

    let moves = witness.unwrap().expand(10_000).unwrap();
    println!("expanded witness: {} moves", moves.len());
    assert_eq!(moves.replay(&a).unwrap(), b);
    println!("move replay: ok");
}
