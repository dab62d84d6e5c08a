//! Brute-force ground truth: enumerate every unimodular row of a small
//! finite module and partition them into orbits by breadth-first search.

use unirow::{
    enumerate_unimodular, orbit_partition, GeneratorSet, InvariantFactorModule, DEFAULT_BUDGET,
};

fn main() {
    let m = InvariantFactorModule::cyclic_factors(&[5, 5]).unwrap();

    let rows = enumerate_unimodular(&m, 2, DEFAULT_BUDGET).unwrap();
    println!("unimodular pairs in Z_5 x Z_5: {}", rows.len());

    for set in [GeneratorSet::Elementary, GeneratorSet::Nielsen] {
        let part = orbit_partition(&m, 2, set, DEFAULT_BUDGET).unwrap();
        println!("{:?} generators -> {} classes", set, part.classes.len());
        for (i, class) in part.classes.iter().enumerate() {
            println!("  class {}: {} rows", i + 1, class.len());
        }
    }

    // one slot above the rank the elementary action is transitive
    let part = orbit_partition(&m, 3, GeneratorSet::Elementary, DEFAULT_BUDGET).unwrap();
    println!("classes at n = 3: {}", part.classes.len());
}
