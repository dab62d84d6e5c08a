//! Brute-force ground truth on small finite modules: enumerate the
//! unimodular rows, partition them into orbits by breadth-first search under
//! elementary or Nielsen generators, and certify counts independently of the
//! constructive pipeline.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::module::{InvariantFactorModule, ModuleElement, RowTuple};
use crate::ring::Ring;

/// Default search budget: enumerated states (|M|^n) must stay below this.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Which generators drive the orbit search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorSet {
    /// Transvections e_ij(r) over all residues r modulo the annihilator
    /// (the full E_n(R)-action on a module killed by the annihilator).
    Elementary,
    /// Transvections e_ij(+-1) only; over the integers these generate the
    /// same orbits as the full set.
    ElementaryUnitCoefficients,
    /// Nielsen moves L_ij and I_i (integer modules).
    Nielsen,
}

/// The orbit partition of the unimodular rows, classes ordered by their
/// least member in enumeration order, members sorted the same way.
#[derive(Debug, Clone)]
pub struct OrbitPartition {
    pub module: InvariantFactorModule,
    pub n: usize,
    pub generator_set: GeneratorSet,
    pub classes: Vec<Vec<RowTuple>>,
    /// Number of unimodular rows (the sum of the class sizes).
    pub state_count: usize,
}

/// Lookup tables over the (finite) module: elements in a fixed enumeration
/// order, plus addition, negation and scalar-multiplication as index maps.
struct ModuleTable {
    module: InvariantFactorModule,
    elems: Vec<ModuleElement>,
    add: Vec<u32>,
    neg: Vec<u32>,
    /// One index map per nonzero residue modulo the annihilator.
    scalars: Vec<Vec<u32>>,
}

impl ModuleTable {
    fn build(m: &InvariantFactorModule, budget: u64) -> Result<ModuleTable> {
        let elems = enumerate_module_elements(m, budget)?;
        let size = elems.len();
        let mut index: HashMap<ModuleElement, u32> = HashMap::with_capacity(size);
        for (i, e) in elems.iter().enumerate() {
            index.insert(e.clone(), i as u32);
        }
        let mut add = Vec::with_capacity(size * size);
        for a in &elems {
            for b in &elems {
                add.push(index[&m.add(a, b)?]);
            }
        }
        let mut neg = Vec::with_capacity(size);
        for a in &elems {
            neg.push(index[&m.neg(a)?]);
        }
        let ann = m.annihilator();
        let mut scalars = Vec::new();
        for r in ann.residues(budget)? {
            if r.is_zero() {
                continue;
            }
            let mut table = Vec::with_capacity(size);
            for a in &elems {
                table.push(index[&m.scale(&r, a)?]);
            }
            scalars.push(table);
        }
        Ok(ModuleTable { module: m.clone(), elems, add, neg, scalars })
    }

    fn size(&self) -> usize {
        self.elems.len()
    }

    fn add_idx(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.size() + b as usize]
    }

    /// True iff the given elements generate M as a module: the additive
    /// closure of all their scalar multiples (the module is killed by the
    /// annihilator, so residues modulo it exhaust the scalar action).
    fn generates(&self, gens: &[u32]) -> bool {
        let size = self.size();
        let mut multiples: Vec<u32> = Vec::with_capacity(gens.len() * self.scalars.len());
        for &g in gens {
            for table in &self.scalars {
                multiples.push(table[g as usize]);
            }
        }
        multiples.sort_unstable();
        multiples.dedup();
        let mut seen = vec![false; size];
        let zero = 0usize; // enumeration starts at the zero element
        seen[zero] = true;
        let mut stack: Vec<u32> = vec![zero as u32];
        let mut count = 1usize;
        while let Some(x) = stack.pop() {
            for &g in &multiples {
                let y = self.add_idx(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    count += 1;
                    if count == size {
                        return true;
                    }
                    stack.push(y);
                }
            }
        }
        count == size
    }

    fn row_tuple(&self, state: &[u32]) -> Result<RowTuple> {
        let entries = state.iter().map(|&i| self.elems[i as usize].clone()).collect();
        RowTuple::new(self.module.clone(), entries)
    }
}

/// All module elements in a deterministic order: the zero element first,
/// coordinates varying odometer-style with the last coordinate fastest.
pub fn enumerate_module_elements(
    m: &InvariantFactorModule,
    budget: u64,
) -> Result<Vec<ModuleElement>> {
    let size = m
        .size()
        .ok_or_else(|| Error::BudgetExceeded("module is infinite".into()))?;
    if size > BigInt::from(budget) {
        return Err(Error::BudgetExceeded(format!(
            "module has {} elements, budget is {}",
            size, budget
        )));
    }
    let per_factor: Vec<Vec<_>> = m
        .factors()
        .iter()
        .map(|f| f.residues(budget))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(size.to_usize().unwrap_or(0));
    let k = m.rank();
    let mut idx = vec![0usize; k];
    loop {
        let coords = idx.iter().zip(&per_factor).map(|(&i, r)| r[i].clone()).collect();
        out.push(m.element(coords)?);
        let mut c = k;
        loop {
            if c == 0 {
                return Ok(out);
            }
            c -= 1;
            idx[c] += 1;
            if idx[c] < per_factor[c].len() {
                break;
            }
            idx[c] = 0;
        }
    }
}

/// All unimodular n-rows of a finite module, in enumeration order, by
/// exhaustive generation testing (additive closure of the entries).
pub fn enumerate_unimodular(
    m: &InvariantFactorModule,
    n: usize,
    budget: u64,
) -> Result<Vec<RowTuple>> {
    let table = ModuleTable::build(m, budget)?;
    let states = enumerate_states(&table, n, budget)?;
    states.iter().map(|s| table.row_tuple(s)).collect()
}

/// Unimodular states as index vectors, lexicographic in enumeration order.
fn enumerate_states(table: &ModuleTable, n: usize, budget: u64) -> Result<Vec<Vec<u32>>> {
    if n == 0 {
        return Err(Error::RowTooShort("orbit search needs n >= 1".into()));
    }
    let size = table.size() as u64;
    let total = size
        .checked_pow(n as u32)
        .filter(|&t| t <= budget)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!(
                "{}^{} states exceed the budget of {}",
                size, n, budget
            ))
        })?;
    let mut out = Vec::new();
    let mut state = vec![0u32; n];
    for _ in 0..total {
        if table.generates(&state) {
            out.push(state.clone());
        }
        let mut c = n;
        loop {
            if c == 0 {
                return Ok(out);
            }
            c -= 1;
            state[c] += 1;
            if (state[c] as u64) < size {
                break;
            }
            state[c] = 0;
        }
    }
    Ok(out)
}

fn encode(state: &[u32], size: u64) -> u64 {
    state.iter().fold(0u64, |acc, &i| acc * size + i as u64)
}

/// Partitions the unimodular rows into orbits under the chosen generators.
pub fn orbit_partition(
    m: &InvariantFactorModule,
    n: usize,
    generator_set: GeneratorSet,
    budget: u64,
) -> Result<OrbitPartition> {
    if generator_set == GeneratorSet::Nielsen && *m.ring() != Ring::Int {
        return Err(Error::Unsupported(
            "Nielsen generators are defined over the integers only".into(),
        ));
    }
    let table = ModuleTable::build(m, budget)?;
    let states = enumerate_states(&table, n, budget)?;
    let size = table.size() as u64;

    let mut position: HashMap<u64, usize> = HashMap::with_capacity(states.len());
    for (i, s) in states.iter().enumerate() {
        position.insert(encode(s, size), i);
    }

    // collect neighbor states of one state under the generator set
    let scalar_tables: Vec<&Vec<u32>> = match generator_set {
        GeneratorSet::Elementary => table.scalars.iter().collect(),
        GeneratorSet::ElementaryUnitCoefficients => {
            // the tables for +1 and -1: scalar by one is the identity map,
            // scalar by minus one is the negation map
            Vec::new()
        }
        GeneratorSet::Nielsen => Vec::new(),
    };

    let neighbors = |state: &[u32], out: &mut Vec<Vec<u32>>| {
        out.clear();
        match generator_set {
            GeneratorSet::Elementary => {
                for s in 0..n {
                    for t in 0..n {
                        if s == t {
                            continue;
                        }
                        for tab in &scalar_tables {
                            let mut next = state.to_vec();
                            next[t] = table.add_idx(next[t], tab[state[s] as usize]);
                            out.push(next);
                        }
                    }
                }
            }
            GeneratorSet::ElementaryUnitCoefficients => {
                for s in 0..n {
                    for t in 0..n {
                        if s == t {
                            continue;
                        }
                        let mut plus = state.to_vec();
                        plus[t] = table.add_idx(plus[t], state[s]);
                        out.push(plus);
                        let mut minus = state.to_vec();
                        minus[t] = table.add_idx(minus[t], table.neg[state[s] as usize]);
                        out.push(minus);
                    }
                }
            }
            GeneratorSet::Nielsen => {
                for i in 0..n {
                    for j in 0..n {
                        if i == j {
                            continue;
                        }
                        let mut next = state.to_vec();
                        next[i] = table.add_idx(next[j], next[i]);
                        out.push(next);
                    }
                    let mut next = state.to_vec();
                    next[i] = table.neg[next[i] as usize];
                    out.push(next);
                }
            }
        }
    };

    let mut visited = vec![false; states.len()];
    let mut classes_idx: Vec<Vec<usize>> = Vec::new();
    let mut scratch: Vec<Vec<u32>> = Vec::new();
    for start in 0..states.len() {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut class = vec![start];
        let mut frontier = vec![start];
        while let Some(cur) = frontier.pop() {
            neighbors(&states[cur], &mut scratch);
            for next in &scratch {
                let pos = position[&encode(next, size)];
                if !visited[pos] {
                    visited[pos] = true;
                    class.push(pos);
                    frontier.push(pos);
                }
            }
        }
        class.sort_unstable();
        classes_idx.push(class);
    }

    let classes = classes_idx
        .iter()
        .map(|class| class.iter().map(|&i| table.row_tuple(&states[i])).collect())
        .collect::<Result<Vec<Vec<RowTuple>>>>()?;
    Ok(OrbitPartition { module: m.clone(), n, generator_set, classes, state_count: states.len() })
}

impl OrbitPartition {
    /// Index of the class containing the given row, if any.
    pub fn class_of(&self, row: &RowTuple) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(row))
    }
}
