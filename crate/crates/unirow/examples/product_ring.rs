//! The quasi-Euclidean (but not Euclidean) case: a product of two copies of
//! the integers. Cancellation and normalization work componentwise with
//! embedded coefficients.

use unirow::{
    normalize_row, row_cancel, Elem, InvariantFactorModule, PrincipalIdeal, Ring, RowTuple,
};

fn main() {
    let ring = Ring::product(vec![Ring::Int, Ring::Int]).unwrap();
    let pe = |a: i64, b: i64| Elem::product(vec![Elem::int(a), Elem::int(b)]);

    // cancellation of a row of pairs: the head is the componentwise gcd
    let row = vec![pe(2, 0), pe(0, 3)];
    let (d, script) = row_cancel(&row).unwrap();
    println!("cancelled head: {} ({} ops)", d, script.len());

    // M = (Z x Z) / ((2, 3)): a cyclic module over the product ring
    let m = InvariantFactorModule::new(ring, vec![PrincipalIdeal::new(pe(2, 3))]).unwrap();
    let row = RowTuple::new(
        m.clone(),
        vec![
            m.element(vec![pe(0, 1)]).unwrap(),
            m.element(vec![pe(1, 0)]).unwrap(),
        ],
    )
    .unwrap();
    let res = normalize_row(&row).unwrap();
    println!("delta: {}", res.delta);
    println!("script: {} transvections", res.script.len());
    assert_eq!(row.apply_script(&res.script).unwrap(), res.canonical);
    println!("replay: ok");
}
