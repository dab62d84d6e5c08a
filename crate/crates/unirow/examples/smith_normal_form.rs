//! Compute the Smith normal form P * A * Q = D of an integer matrix with
//! exact transformation matrices and a divisibility chain on the diagonal.

use unirow::{determinant, smith_normal_form, ExactMatrix};

fn print_matrix(name: &str, m: &ExactMatrix) {
    println!("{} =", name);
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| m.at(i, j).to_string()).collect();
        println!("  [{}]", row.join(", "));
    }
}

fn main() {
    let a = ExactMatrix::from_i64(&[&[2, 4], &[6, 8]]);
    print_matrix("A", &a);

    let (p, d, q) = smith_normal_form(&a).unwrap();
    print_matrix("P", &p);
    print_matrix("D", &d);
    print_matrix("Q", &q);

    assert_eq!(p.mul(&a).unwrap().mul(&q).unwrap(), d);
    println!("P*A*Q = D: ok");
    println!(
        "det(P) = {}, det(Q) = {} (units)",
        determinant(&p).unwrap(),
        determinant(&q).unwrap()
    );
}
