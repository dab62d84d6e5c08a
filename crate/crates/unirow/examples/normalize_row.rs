//! Normalize a unimodular row to the canonical form
//! (delta e_1, e_2, ..., e_k, 0, ..., 0) and replay the witness script.

use unirow::{normalize_row, InvariantFactorModule, RowTuple};

fn show(row: &RowTuple) -> String {
    let entries: Vec<String> = row
        .entries()
        .iter()
        .map(|e| {
            let cs: Vec<String> = e.coords().iter().map(|c| c.to_string()).collect();
            format!("({})", cs.join(", "))
        })
        .collect();
    format!("[{}]", entries.join(", "))
}

fn main() {
    let m = InvariantFactorModule::cyclic_factors(&[5, 5]).unwrap();

    // a generating pair of Z_5 x Z_5 at minimal length: delta survives
    let row = RowTuple::from_i64(&m, &[&[2, 1], &[0, 3]]);
    let res = normalize_row(&row).unwrap();
    println!("row:        {}", show(&row));
    println!("canonical:  {}", show(&res.canonical));
    println!("delta:      {}", res.delta);
    println!("script:     {} transvections", res.script.len());
    assert_eq!(row.apply_script(&res.script).unwrap(), res.canonical);
    println!("replay:     ok");

    // one slot above the rank: the unit can always be absorbed
    let longer = RowTuple::from_i64(&m, &[&[2, 1], &[0, 3], &[0, 0]]);
    let res = normalize_row(&longer).unwrap();
    println!("with an extra slot, delta = {}", res.delta);
    assert!(res.delta.is_one());
}
