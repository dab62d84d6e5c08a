//! Invariant-factor modules R/a_1 x ... x R/a_k with a_1 containing a_2
//! containing ... (zero ideals, i.e. free factors, last), their elements and
//! row tuples, decomposition of relation presentations, unimodularity testing
//! and the relation ideal.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::matrix::{smith_normal_form, ElementaryOp, ElementaryScript, ExactMatrix};
use crate::ring::{Elem, PrincipalIdeal, Ring};

/// A module presented by its invariant factor decomposition. The stored
/// chain uses the statement-facing ordering: a_1 is the first invariant
/// factor and contains every later ideal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InvariantFactorModule {
    ring: Ring,
    factors: Vec<PrincipalIdeal>,
}

impl InvariantFactorModule {
    pub fn new(ring: Ring, factors: Vec<PrincipalIdeal>) -> Result<InvariantFactorModule> {
        for f in &factors {
            if f.ring() != ring {
                return Err(Error::RingMismatch("factor ideal not over the module ring".into()));
            }
        }
        if let Some(first) = factors.first() {
            if first.is_whole() {
                return Err(Error::IdealChainViolation(
                    "first invariant factor must be a proper ideal".into(),
                ));
            }
        }
        for pair in factors.windows(2) {
            if !pair[0].contains(&pair[1])? {
                return Err(Error::IdealChainViolation(format!(
                    "({}) does not contain ({})",
                    pair[0].generator(),
                    pair[1].generator()
                )));
            }
        }
        Ok(InvariantFactorModule { ring, factors })
    }

    /// Convenience constructor for Z_{d_1} x ... x Z_{d_k} as a Z-module.
    pub fn cyclic_factors(ds: &[i64]) -> Result<InvariantFactorModule> {
        let factors = ds.iter().map(|&d| PrincipalIdeal::new(Elem::int(d))).collect();
        InvariantFactorModule::new(Ring::Int, factors)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn factors(&self) -> &[PrincipalIdeal] {
        &self.factors
    }

    /// Minimal number of generators.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// The annihilator of the module: the last (smallest) invariant factor,
    /// or the whole ring for the trivial module.
    pub fn annihilator(&self) -> PrincipalIdeal {
        match self.factors.last() {
            Some(f) => f.clone(),
            None => PrincipalIdeal::new(self.ring.one()),
        }
    }

    /// Number of module elements, if finite.
    pub fn size(&self) -> Option<BigInt> {
        let mut total = BigInt::from(1);
        for f in &self.factors {
            total *= f.quotient_size()?;
        }
        Some(total)
    }

    pub fn zero_element(&self) -> ModuleElement {
        ModuleElement { coords: self.factors.iter().map(|_| self.ring.zero()).collect() }
    }

    /// The canonical generator e_i (1-based): 1 in R/a_i, 0 elsewhere.
    pub fn generator(&self, i: usize) -> ModuleElement {
        let mut e = self.zero_element();
        e.coords[i - 1] = self.ring.one();
        e
    }

    /// Builds an element from ambient ring coordinates, reducing coordinate j
    /// modulo a_j.
    pub fn element(&self, coords: Vec<Elem>) -> Result<ModuleElement> {
        if coords.len() != self.rank() {
            return Err(Error::DimensionMismatch(format!(
                "element needs {} coordinates, got {}",
                self.rank(),
                coords.len()
            )));
        }
        let reduced = coords
            .iter()
            .zip(&self.factors)
            .map(|(c, f)| f.reduce(c))
            .collect::<Result<_>>()?;
        Ok(ModuleElement { coords: reduced })
    }

    /// Z-module element from machine integers, for tests and examples.
    pub fn elem_i64(&self, coords: &[i64]) -> ModuleElement {
        self.element(coords.iter().map(|&c| self.ring.from_int(c)).collect())
            .expect("elem_i64")
    }

    pub fn add(&self, a: &ModuleElement, b: &ModuleElement) -> Result<ModuleElement> {
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.factors)
            .map(|((x, y), f)| f.reduce(&x.add(y)?))
            .collect::<Result<_>>()?;
        Ok(ModuleElement { coords })
    }

    pub fn neg(&self, a: &ModuleElement) -> Result<ModuleElement> {
        let coords = a
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(x, f)| f.reduce(&x.neg()))
            .collect::<Result<_>>()?;
        Ok(ModuleElement { coords })
    }

    /// Scalar action r * a with r in the base ring.
    pub fn scale(&self, r: &Elem, a: &ModuleElement) -> Result<ModuleElement> {
        let coords = a
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(x, f)| f.reduce(&r.mul(x)?))
            .collect::<Result<_>>()?;
        Ok(ModuleElement { coords })
    }
}

/// An element of the module: coordinate j is the canonical residue mod a_j.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleElement {
    coords: Vec<Elem>,
}

impl ModuleElement {
    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// An n-tuple of module elements, equivalently the n x k residue matrix of
/// its coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RowTuple {
    module: InvariantFactorModule,
    entries: Vec<ModuleElement>,
}

impl RowTuple {
    pub fn new(module: InvariantFactorModule, entries: Vec<ModuleElement>) -> Result<RowTuple> {
        if entries.is_empty() {
            return Err(Error::RowTooShort("row tuple needs n >= 1".into()));
        }
        for e in &entries {
            if e.coords.len() != module.rank() {
                return Err(Error::ModuleMismatch(
                    "entry coordinate count differs from module rank".into(),
                ));
            }
        }
        Ok(RowTuple { module, entries })
    }

    /// Z-module row from machine integers, for tests and examples.
    pub fn from_i64(module: &InvariantFactorModule, rows: &[&[i64]]) -> RowTuple {
        let entries = rows.iter().map(|r| module.elem_i64(r)).collect();
        RowTuple::new(module.clone(), entries).expect("from_i64")
    }

    pub fn module(&self) -> &InvariantFactorModule {
        &self.module
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ModuleElement] {
        &self.entries
    }

    pub fn entry(&self, slot: usize) -> &ModuleElement {
        &self.entries[slot]
    }

    /// Residue at (slot, coordinate), both 0-based.
    pub fn at(&self, slot: usize, coord: usize) -> &Elem {
        &self.entries[slot].coords[coord]
    }

    /// Applies one transvection: slot(target) += coefficient * slot(source).
    pub fn apply_op(&mut self, op: &ElementaryOp) -> Result<()> {
        if op.coefficient().ring() != self.module.ring {
            return Err(Error::RingMismatch("op coefficient not in the module ring".into()));
        }
        let delta = self.module.scale(op.coefficient(), &self.entries[op.source()])?;
        self.entries[op.target()] = self.module.add(&self.entries[op.target()], &delta)?;
        Ok(())
    }

    /// Replays a script, returning the transformed row.
    pub fn apply_script(&self, script: &ElementaryScript) -> Result<RowTuple> {
        if script.dimension() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "script dimension {} vs row length {}",
                script.dimension(),
                self.len()
            )));
        }
        let mut out = self.clone();
        for op in script.ops() {
            out.apply_op(op)?;
        }
        Ok(out)
    }
}

/// Decomposes coker(a) acting on R^n (n = columns of a, rows of a are the
/// relations) into its invariant factor module, dropping unit factors and
/// appending zero ideals for the free rank. Also returns the change of basis
/// from ambient coordinates to decomposition coordinates (n x k).
pub fn module_from_relations(
    a: &ExactMatrix,
) -> Result<(InvariantFactorModule, ExactMatrix)> {
    let ring = a.ring().clone();
    let n = a.cols();
    let (_, d, q) = smith_normal_form(a)?;
    let steps = a.rows().min(n);
    let mut retained = Vec::new();
    let mut factors = Vec::new();
    for j in 0..n {
        let gen = if j < steps { d.at(j, j).clone() } else { ring.zero() };
        let ideal = PrincipalIdeal::new(gen);
        if ideal.is_whole() {
            continue;
        }
        retained.push(j);
        factors.push(ideal);
    }
    let module = InvariantFactorModule::new(ring.clone(), factors)?;
    let mut cols = Vec::with_capacity(n * retained.len());
    for i in 0..n {
        for &j in &retained {
            cols.push(q.at(i, j).clone());
        }
    }
    let change_of_basis = ExactMatrix::new(ring, n, retained.len(), cols)?;
    Ok((module, change_of_basis))
}

/// True iff the entries of the row generate the module: decided by running
/// the triangularization sweep and testing every diagonal residue for
/// unit-ness in its quotient.
pub fn is_unimodular(row: &RowTuple) -> Result<bool> {
    let k = row.module().rank();
    if k == 0 {
        return Ok(true);
    }
    if row.len() < k {
        return Ok(false);
    }
    crate::normalize::pivots_are_units(row)
}

/// The relation ideal r(M): the first invariant factor a_1, or the whole
/// ring for the trivial module.
pub fn relation_ideal(m: &InvariantFactorModule) -> PrincipalIdeal {
    match m.factors().first() {
        Some(f) => f.clone(),
        None => PrincipalIdeal::new(m.ring().one()),
    }
}

/// The canonical row (delta e_1, e_2, ..., e_k, 0, ..., 0) of length n.
pub fn canonical_row(
    m: &InvariantFactorModule,
    delta: &Elem,
    n: usize,
) -> Result<RowTuple> {
    let k = m.rank();
    if n < k {
        return Err(Error::RowTooShort(format!("n = {} < rank {}", n, k)));
    }
    if n == 0 {
        return Err(Error::RowTooShort("canonical row needs n >= 1".into()));
    }
    let mut entries = Vec::with_capacity(n);
    if k >= 1 {
        let a1 = &m.factors()[0];
        crate::ring::inverse_mod(delta, a1)?;
        entries.push(m.scale(delta, &m.generator(1))?);
        for i in 2..=k {
            entries.push(m.generator(i));
        }
    }
    while entries.len() < n {
        entries.push(m.zero_element());
    }
    RowTuple::new(m.clone(), entries)
}
