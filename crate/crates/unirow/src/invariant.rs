//! The determinant invariant of E_n(R)-equivalence, the equivalence decision
//! with elementary witnesses, and orbit counting.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::matrix::{determinant, ElementaryScript, ExactMatrix};
use crate::module::{InvariantFactorModule, RowTuple};
use crate::normalize::normalize_row;
use crate::ring::{extended_gcd, Elem, PrincipalIdeal};

/// The determinant of the residue matrix of a k-row, taken in R/b where b is
/// the sum of the factor ideals (the first invariant factor when the
/// decomposition is minimal). A complete invariant at n = k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetInvariant {
    pub quotient: PrincipalIdeal,
    pub value: Elem,
}

/// Sum of the module's factor ideals: generated by the gcd of the factor
/// generators.
fn sum_ideal(m: &InvariantFactorModule) -> Result<PrincipalIdeal> {
    let mut g = match m.factors().first() {
        Some(f) => f.generator().clone(),
        None => m.ring().one(),
    };
    for f in &m.factors()[1..] {
        let (gg, _, _) = extended_gcd(&g, f.generator())?;
        g = gg;
    }
    Ok(PrincipalIdeal::new(g))
}

/// The determinant invariant of a row of length k = number of factors.
pub fn det_invariant(m: &InvariantFactorModule, row: &RowTuple) -> Result<DetInvariant> {
    let k = m.rank();
    if row.module() != m {
        return Err(Error::ModuleMismatch("det_invariant row module".into()));
    }
    if row.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "det_invariant needs a square row (length {} = rank), got {}",
            k,
            row.len()
        )));
    }
    let quotient = sum_ideal(m)?;
    let mut entries = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            entries.push(quotient.reduce(row.at(i, j))?);
        }
    }
    let matrix = ExactMatrix::new(m.ring().clone(), k, k, entries)?;
    let value = quotient.reduce(&determinant(&matrix)?)?;
    Ok(DetInvariant { quotient, value })
}

/// Decides E_n(R)-equivalence of two unimodular rows. At n = k the verdict is
/// determinant-invariant equality; for n > k the action is transitive. A true
/// verdict comes with a replayable elementary witness.
pub fn are_e_equivalent(
    row_a: &RowTuple,
    row_b: &RowTuple,
) -> Result<(bool, Option<ElementaryScript>)> {
    if row_a.module() != row_b.module() {
        return Err(Error::ModuleMismatch("rows live in different modules".into()));
    }
    if row_a.len() != row_b.len() {
        return Err(Error::ModuleMismatch(format!(
            "row lengths differ: {} vs {}",
            row_a.len(),
            row_b.len()
        )));
    }
    let res_a = normalize_row(row_a)?;
    let res_b = normalize_row(row_b)?;
    if res_a.delta != res_b.delta {
        return Ok((false, None));
    }
    let witness = res_a.script.then(&res_b.script.inverse())?;
    Ok((true, Some(witness)))
}

/// Cardinality of an orbit set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cardinal {
    Finite(BigInt),
    Infinite,
}

impl std::fmt::Display for Cardinal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cardinal::Finite(v) => write!(f, "{}", v),
            Cardinal::Infinite => write!(f, "infinite"),
        }
    }
}

/// Number of E_n(R)-orbits on Um_n(M): one for n > rank, and the unit count
/// of R/a_1 at n = rank.
pub fn orbit_count(m: &InvariantFactorModule, n: usize) -> Result<Cardinal> {
    let k = m.rank();
    if n < k {
        return Err(Error::RowTooShort(format!("n = {} below rank {}", n, k)));
    }
    if n > k || k == 0 {
        return Ok(Cardinal::Finite(BigInt::one()));
    }
    Ok(Cardinal::Finite(m.factors()[0].unit_count()?))
}

/// One canonical representative per unit class of R/a_1; the list length is
/// orbit_count(m, rank).
pub fn unit_class_representatives(m: &InvariantFactorModule) -> Result<Vec<Elem>> {
    if m.rank() == 0 {
        return Ok(vec![m.ring().one()]);
    }
    m.factors()[0]
        .unit_representatives(1_000_000)
        .map_err(|e| match e {
            Error::BudgetExceeded(msg) => Error::Unsupported(msg),
            other => other,
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::canonical_row;

    fn z55() -> InvariantFactorModule {
        InvariantFactorModule::cyclic_factors(&[5, 5]).unwrap()
    }

    #[test]
    fn det_of_a_canonical_row_is_its_delta() {
        let m = z55();
        for delta in 1..5 {
            let row = canonical_row(&m, &Elem::int(delta), 2).unwrap();
            let d = det_invariant(&m, &row).unwrap();
            assert_eq!(d.value, Elem::int(delta));
            assert_eq!(d.quotient.generator(), &Elem::int(5));
        }
    }

    #[test]
    fn det_lives_in_the_first_invariant_factor_quotient() {
        let m = InvariantFactorModule::cyclic_factors(&[2, 4]).unwrap();
        let row = crate::module::RowTuple::from_i64(&m, &[&[1, 0], &[0, 1]]);
        let d = det_invariant(&m, &row).unwrap();
        assert_eq!(d.quotient.generator(), &Elem::int(2));
        assert_eq!(d.value, Elem::int(1));
    }

    #[test]
    fn det_requires_a_minimal_length_row() {
        let m = z55();
        let row = crate::module::RowTuple::from_i64(&m, &[&[1, 0], &[0, 1], &[0, 0]]);
        assert!(matches!(det_invariant(&m, &row), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn equivalence_verdicts_follow_the_determinant() {
        let m = z55();
        let a = crate::module::RowTuple::from_i64(&m, &[&[2, 0], &[0, 1]]);
        let b = crate::module::RowTuple::from_i64(&m, &[&[0, 1], &[3, 0]]);
        let c = crate::module::RowTuple::from_i64(&m, &[&[3, 0], &[0, 1]]);
        // det(a) = 2, det(b) = -3 = 2, det(c) = 3
        let (v, w) = are_e_equivalent(&a, &b).unwrap();
        assert!(v);
        assert_eq!(a.apply_script(&w.unwrap()).unwrap(), b);
        let (v, w) = are_e_equivalent(&a, &c).unwrap();
        assert!(!v);
        assert!(w.is_none());
    }

    #[test]
    fn longer_rows_are_always_equivalent() {
        let m = z55();
        let a = crate::module::RowTuple::from_i64(&m, &[&[2, 0], &[0, 1], &[1, 1]]);
        let b = crate::module::RowTuple::from_i64(&m, &[&[4, 3], &[0, 1], &[1, 0]]);
        let (v, w) = are_e_equivalent(&a, &b).unwrap();
        assert!(v);
        assert_eq!(a.apply_script(&w.unwrap()).unwrap(), b);
    }

    #[test]
    fn orbit_counts() {
        let m = z55();
        assert_eq!(orbit_count(&m, 2).unwrap(), Cardinal::Finite(BigInt::from(4)));
        assert_eq!(orbit_count(&m, 3).unwrap(), Cardinal::Finite(BigInt::from(1)));
        assert!(matches!(orbit_count(&m, 1), Err(Error::RowTooShort(_))));
        let m24 = InvariantFactorModule::cyclic_factors(&[2, 4]).unwrap();
        assert_eq!(orbit_count(&m24, 2).unwrap(), Cardinal::Finite(BigInt::from(1)));
    }

    #[test]
    fn unit_class_representative_lists() {
        let m = z55();
        let reps = unit_class_representatives(&m).unwrap();
        assert_eq!(reps.len(), 4);
        let free = InvariantFactorModule::cyclic_factors(&[0]).unwrap();
        let reps = unit_class_representatives(&free).unwrap();
        assert_eq!(reps, vec![Elem::int(1), Elem::int(-1)]);
    }
}
