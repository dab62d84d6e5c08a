//! Reduce a row over a quasi-Euclidean ring to (d, 0, ..., 0) using only
//! elementary operations, and replay the witness script to verify it.

use unirow::{apply_script, row_cancel, Elem, ExactMatrix, Ring, Side};

fn main() {
    let row = vec![Elem::int(6), Elem::int(4), Elem::int(3)];
    println!("input row: {:?}", [6, 4, 3]);

    let (d, script) = row_cancel(&row).unwrap();
    println!("head after cancellation: {}", d);
    println!("script length: {} transvections", script.len());

    // replay the script on the row and confirm the result
    let mat = ExactMatrix::from_rows(Ring::Int, vec![row]).unwrap();
    let out = apply_script(&mat, &script, Side::Columns).unwrap();
    print!("replayed row: [");
    for j in 0..out.cols() {
        if j > 0 {
            print!(", ");
        }
        print!("{}", out.at(0, j));
    }
    println!("]");
    assert_eq!(out.at(0, 0), &d);
    assert!((1..out.cols()).all(|j| out.at(0, j).is_zero()));
    println!("replay check: ok");
}
