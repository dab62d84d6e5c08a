//! Decompose the cokernel of a relation matrix into its invariant factor
//! module R/a_1 x ... x R/a_k.

use unirow::{module_from_relations, ExactMatrix};

fn main() {
    // relations 2x + 4y = 0 and 6x + 8y = 0 on Z^2
    let relations = ExactMatrix::from_i64(&[&[2, 4], &[6, 8]]);
    let (module, basis) = module_from_relations(&relations).unwrap();

    let factors: Vec<String> = module
        .factors()
        .iter()
        .map(|f| f.generator().to_string())
        .collect();
    println!("invariant factors: ({})", factors.join(") >= ("));
    println!("rank (minimal generators): {}", module.rank());
    match module.size() {
        Some(size) => println!("module size: {}", size),
        None => println!("module is infinite"),
    }
    println!(
        "change of basis: {} ambient coordinates -> {} decomposition coordinates",
        basis.rows(),
        basis.cols()
    );
}
