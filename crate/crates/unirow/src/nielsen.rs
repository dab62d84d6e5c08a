//! Nielsen equivalence of generating tuples of finitely generated Abelian
//! groups (Z-modules): moves L_ij (g_i <- g_j + g_i) and I_i (g_i <- -g_i),
//! class counting via the extended Euler totient, the equivalence decision
//! modulo GL_n(Z) = D_n({+-1}) E_n(Z), and expansion of sign-plus-script
//! witnesses into explicit move sequences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::{ElementaryOp, ElementaryScript};
use crate::module::{canonical_row, InvariantFactorModule, RowTuple};
use crate::normalize::normalize_row;
use crate::ring::{totient, Elem, Ring};

/// A single Nielsen move on an n-tuple of group elements, 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NielsenMove {
    /// g_i <- g_j + g_i (i != j).
    L { i: usize, j: usize },
    /// g_i <- -g_i.
    I { i: usize },
}

/// An ordered, replayable sequence of Nielsen moves.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NielsenMoveSequence {
    moves: Vec<NielsenMove>,
}

impl NielsenMoveSequence {
    pub fn new(moves: Vec<NielsenMove>) -> NielsenMoveSequence {
        NielsenMoveSequence { moves }
    }

    pub fn moves(&self) -> &[NielsenMove] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Replays the moves left-to-right on a row tuple.
    pub fn replay(&self, row: &RowTuple) -> Result<RowTuple> {
        let m = row.module().clone();
        let mut entries: Vec<_> = row.entries().to_vec();
        for mv in &self.moves {
            match mv {
                NielsenMove::L { i, j } => {
                    if *i >= entries.len() || *j >= entries.len() || i == j {
                        return Err(Error::DimensionMismatch(format!(
                            "move L({}, {}) on a row of length {}",
                            i + 1,
                            j + 1,
                            entries.len()
                        )));
                    }
                    entries[*i] = m.add(&entries[*j], &entries[*i])?;
                }
                NielsenMove::I { i } => {
                    if *i >= entries.len() {
                        return Err(Error::DimensionMismatch(format!(
                            "move I({}) on a row of length {}",
                            i + 1,
                            entries.len()
                        )));
                    }
                    entries[*i] = m.neg(&entries[*i])?;
                }
            }
        }
        RowTuple::new(m, entries)
    }
}

/// Euler's totient extended by phi(0) = 0 (no units in an infinite cyclic
/// quotient beyond +-1, which the Nielsen count handles separately).
pub fn euler_phi(d: &BigInt) -> BigInt {
    if d.is_zero() {
        return BigInt::zero();
    }
    totient(&d.abs())
}

/// A true Nielsen-equivalence verdict in compressed form: a sign diagonal
/// (the D_n({+-1}) part) followed by an elementary script (the E_n(Z) part).
/// Replaying the expanded move sequence on the first row yields the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NielsenWitness {
    pub signs: Vec<i8>,
    pub script: ElementaryScript,
}

impl NielsenWitness {
    /// Expands into explicit moves, failing if the move count exceeds `cap`.
    pub fn expand(&self, cap: u64) -> Result<NielsenMoveSequence> {
        expand_script_capped(&self.script, &self.signs, cap)
    }
}

fn require_int_ring(ring: &Ring, what: &str) -> Result<()> {
    if *ring != Ring::Int {
        return Err(Error::Unsupported(format!(
            "{} is defined for modules over the integers only",
            what
        )));
    }
    Ok(())
}

/// Number of Nielsen classes of generating n-tuples: 1 for n > rank, and
/// max(phi(d_1)/2, 1) at n = rank where d_1 generates the first invariant
/// factor.
pub fn nielsen_class_count(m: &InvariantFactorModule, n: usize) -> Result<BigInt> {
    require_int_ring(m.ring(), "nielsen_class_count")?;
    let k = m.rank();
    if n < k {
        return Err(Error::RowTooShort(format!("n = {} below rank {}", n, k)));
    }
    if n > k || k == 0 {
        return Ok(BigInt::one());
    }
    let d1 = match m.factors()[0].generator() {
        Elem::Int(v) => v.clone(),
        _ => unreachable!("integer module"),
    };
    let half = euler_phi(&d1) / BigInt::from(2);
    Ok(half.max(BigInt::one()))
}

/// Class report: the count together with one canonical representative per
/// class, delta drawn from unit residues modulo sign (the smaller of
/// {delta, d_1 - delta}; +1 when d_1 = 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NielsenClassReport {
    pub module: InvariantFactorModule,
    pub n: usize,
    pub class_count: BigInt,
    pub representatives: Vec<RowTuple>,
}

/// Builds the class report for generating n-tuples of the group.
pub fn nielsen_classes(m: &InvariantFactorModule, n: usize) -> Result<NielsenClassReport> {
    require_int_ring(m.ring(), "nielsen_classes")?;
    let k = m.rank();
    let class_count = nielsen_class_count(m, n)?;
    let mut deltas: Vec<BigInt> = Vec::new();
    if n > k || k == 0 {
        deltas.push(BigInt::one());
    } else {
        let d1 = match m.factors()[0].generator() {
            Elem::Int(v) => v.clone(),
            _ => unreachable!("integer module"),
        };
        if d1.is_zero() {
            deltas.push(BigInt::one());
        } else {
            let mut u = BigInt::one();
            while &u + &u <= d1 {
                if u.gcd(&d1).is_one() {
                    deltas.push(u.clone());
                }
                u += 1;
            }
        }
    }
    let representatives = deltas
        .iter()
        .map(|d| canonical_row(m, &Elem::Int(d.clone()), n))
        .collect::<Result<Vec<_>>>()?;
    if BigInt::from(representatives.len()) != class_count {
        return Err(Error::Unsupported(format!(
            "representative count {} disagrees with class count {}",
            representatives.len(),
            class_count
        )));
    }
    Ok(NielsenClassReport { module: m.clone(), n, class_count, representatives })
}

/// Conjugates a transvection past the sign diagonal: the coefficient flips
/// sign exactly when one of the two slots carries a -1.
fn conjugate_by_signs(op: &ElementaryOp, signs: &[i8]) -> ElementaryOp {
    let flip = (signs[op.source()] < 0) != (signs[op.target()] < 0);
    let coeff = if flip { op.coefficient().neg() } else { op.coefficient().clone() };
    ElementaryOp::new(op.source(), op.target(), coeff)
}

/// Decides Nielsen equivalence of two generating tuples of a Z-module.
/// At n = rank the verdict is delta(a) = +-delta(b) mod d_1; for n > rank the
/// action is transitive. A true verdict comes with a compressed witness.
pub fn are_nielsen_equivalent(
    row_a: &RowTuple,
    row_b: &RowTuple,
) -> Result<(bool, Option<NielsenWitness>)> {
    let m = row_a.module().clone();
    require_int_ring(m.ring(), "are_nielsen_equivalent")?;
    if row_b.module() != &m {
        return Err(Error::ModuleMismatch("rows live in different modules".into()));
    }
    if row_a.len() != row_b.len() {
        return Err(Error::ModuleMismatch(format!(
            "row lengths differ: {} vs {}",
            row_a.len(),
            row_b.len()
        )));
    }
    let n = row_a.len();
    let res_a = normalize_row(row_a)?;
    let res_b = normalize_row(row_b)?;

    let flip = if res_a.delta == res_b.delta {
        Some(false)
    } else {
        let neg_b = if m.rank() >= 1 {
            m.factors()[0].reduce(&res_b.delta.neg())?
        } else {
            res_b.delta.neg()
        };
        if res_a.delta == neg_b {
            Some(true)
        } else {
            None
        }
    };
    let flip = match flip {
        Some(f) => f,
        None => return Ok((false, None)),
    };

    let mut signs = vec![1i8; n];
    let mut ops: Vec<ElementaryOp> = Vec::new();
    if flip {
        // row_a * E_a * D * E_b^{-1} = row_b with D = diag(-1, 1, ..., 1);
        // rewrite as D * (D E_a D) * E_b^{-1} so the signs come first.
        signs[0] = -1;
        ops.extend(res_a.script.ops().iter().map(|op| conjugate_by_signs(op, &signs)));
    } else {
        ops.extend(res_a.script.ops().iter().cloned());
    }
    ops.extend(res_b.script.inverse().ops().iter().cloned());
    let script = ElementaryScript::new(n, ops)?;

    let witness = NielsenWitness { signs, script };
    Ok((true, Some(witness)))
}

/// Expands a sign diagonal plus integer elementary script into Nielsen
/// moves: I_i for each -1 sign, then each transvection (source s, target t,
/// coefficient c) as |c| repetitions of L_ts, wrapped in I_s when c < 0.
pub fn expand_script(script: &ElementaryScript, signs: &[i8]) -> Result<NielsenMoveSequence> {
    expand_script_capped(script, signs, u64::MAX)
}

/// As expand_script, but fails with a budget error beyond `cap` moves.
pub fn expand_script_capped(
    script: &ElementaryScript,
    signs: &[i8],
    cap: u64,
) -> Result<NielsenMoveSequence> {
    if signs.len() != script.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "{} signs for a script on {} slots",
            signs.len(),
            script.dimension()
        )));
    }
    let mut moves = Vec::new();
    let spend = |moves: &mut Vec<NielsenMove>, mv: NielsenMove| -> Result<()> {
        if moves.len() as u64 >= cap {
            return Err(Error::BudgetExceeded(format!(
                "expanded move sequence exceeds the cap of {} moves",
                cap
            )));
        }
        moves.push(mv);
        Ok(())
    };
    for (i, s) in signs.iter().enumerate() {
        if *s < 0 {
            spend(&mut moves, NielsenMove::I { i })?;
        }
    }
    for op in script.ops() {
        let c = match op.coefficient() {
            Elem::Int(v) => v.clone(),
            other => {
                return Err(Error::Unsupported(format!(
                    "expand_script needs integer coefficients, got {}",
                    other
                )))
            }
        };
        if c.is_zero() {
            continue;
        }
        let reps = c.abs().to_u64().ok_or_else(|| {
            Error::BudgetExceeded(format!("coefficient {} too large to expand", c))
        })?;
        let negative = c.is_negative();
        if negative {
            spend(&mut moves, NielsenMove::I { i: op.source() })?;
        }
        for _ in 0..reps {
            spend(&mut moves, NielsenMove::L { i: op.target(), j: op.source() })?;
        }
        if negative {
            spend(&mut moves, NielsenMove::I { i: op.source() })?;
        }
    }
    Ok(NielsenMoveSequence::new(moves))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn z55() -> InvariantFactorModule {
        InvariantFactorModule::cyclic_factors(&[5, 5]).unwrap()
    }

    #[test]
    fn extended_totient() {
        assert_eq!(euler_phi(&BigInt::from(0)), BigInt::from(0));
        assert_eq!(euler_phi(&BigInt::from(1)), BigInt::from(1));
        assert_eq!(euler_phi(&BigInt::from(5)), BigInt::from(4));
        assert_eq!(euler_phi(&BigInt::from(8)), BigInt::from(4));
    }

    #[test]
    fn class_counts_at_and_above_the_rank() {
        assert_eq!(nielsen_class_count(&z55(), 2).unwrap(), BigInt::from(2));
        assert_eq!(nielsen_class_count(&z55(), 3).unwrap(), BigInt::one());
        let m24 = InvariantFactorModule::cyclic_factors(&[2, 4]).unwrap();
        assert_eq!(nielsen_class_count(&m24, 2).unwrap(), BigInt::one());
        let m8 = InvariantFactorModule::cyclic_factors(&[8]).unwrap();
        assert_eq!(nielsen_class_count(&m8, 1).unwrap(), BigInt::from(2));
        let free = InvariantFactorModule::cyclic_factors(&[0]).unwrap();
        assert_eq!(nielsen_class_count(&free, 1).unwrap(), BigInt::one());
    }

    #[test]
    fn class_reports_carry_representatives() {
        let report = nielsen_classes(&z55(), 2).unwrap();
        assert_eq!(report.class_count, BigInt::from(2));
        assert_eq!(report.representatives.len(), 2);
        assert_eq!(report.representatives[0].at(0, 0), &Elem::int(1));
        assert_eq!(report.representatives[1].at(0, 0), &Elem::int(2));
    }

    #[test]
    fn expansion_of_positive_coefficients() {
        // add 3 x slot 1 to slot 0 (0-based internal indices)
        let script = ElementaryScript::new(
            2,
            vec![ElementaryOp::new(1, 0, Elem::int(3))],
        )
        .unwrap();
        let moves = expand_script(&script, &[1, 1]).unwrap();
        assert_eq!(
            moves.moves(),
            &[
                NielsenMove::L { i: 0, j: 1 },
                NielsenMove::L { i: 0, j: 1 },
                NielsenMove::L { i: 0, j: 1 }
            ]
        );
    }

    #[test]
    fn expansion_of_sign_diagonals() {
        let script = ElementaryScript::empty(2);
        let moves = expand_script(&script, &[-1, 1]).unwrap();
        assert_eq!(moves.moves(), &[NielsenMove::I { i: 0 }]);
    }

    #[test]
    fn expansion_of_negative_coefficients() {
        // add -2 x slot 0 to slot 1
        let script = ElementaryScript::new(
            2,
            vec![ElementaryOp::new(0, 1, Elem::int(-2))],
        )
        .unwrap();
        let moves = expand_script(&script, &[1, 1]).unwrap();
        assert_eq!(
            moves.moves(),
            &[
                NielsenMove::I { i: 0 },
                NielsenMove::L { i: 1, j: 0 },
                NielsenMove::L { i: 1, j: 0 },
                NielsenMove::I { i: 0 }
            ]
        );
        // replay agrees with the transvection matrix on a free module pair
        let free = InvariantFactorModule::cyclic_factors(&[0, 0]).unwrap();
        let row = RowTuple::from_i64(&free, &[&[1, 0], &[0, 1]]);
        let by_moves = moves.replay(&row).unwrap();
        let by_script = row.apply_script(&script).unwrap();
        assert_eq!(by_moves, by_script);
    }

    #[test]
    fn expansion_cap_is_a_hard_error() {
        let script = ElementaryScript::new(
            2,
            vec![ElementaryOp::new(0, 1, Elem::int(100))],
        )
        .unwrap();
        assert!(matches!(
            expand_script_capped(&script, &[1, 1], 10),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn sign_flips_relate_opposite_deltas() {
        let m = z55();
        let a = RowTuple::from_i64(&m, &[&[2, 0], &[0, 1]]);
        let b = RowTuple::from_i64(&m, &[&[3, 0], &[0, 1]]);
        let (v, w) = are_nielsen_equivalent(&a, &b).unwrap();
        assert!(v);
        let moves = w.unwrap().expand(10_000).unwrap();
        assert_eq!(moves.replay(&a).unwrap(), b);
        // 1 and 2 are not related: 2 != +-1 mod 5
        let c = RowTuple::from_i64(&m, &[&[1, 0], &[0, 1]]);
        let (v, w) = are_nielsen_equivalent(&a, &c).unwrap();
        assert!(!v);
        assert!(w.is_none());
    }

    #[test]
    fn single_generator_case_compares_units_up_to_sign() {
        let m8 = InvariantFactorModule::cyclic_factors(&[8]).unwrap();
        let one = RowTuple::from_i64(&m8, &[&[1]]);
        let three = RowTuple::from_i64(&m8, &[&[3]]);
        let five = RowTuple::from_i64(&m8, &[&[5]]);
        let seven = RowTuple::from_i64(&m8, &[&[7]]);
        assert!(!are_nielsen_equivalent(&one, &three).unwrap().0);
        let (v, w) = are_nielsen_equivalent(&three, &five).unwrap();
        assert!(v);
        let moves = w.unwrap().expand(100).unwrap();
        assert_eq!(moves.replay(&three).unwrap(), five);
        assert!(are_nielsen_equivalent(&one, &seven).unwrap().0);
    }

    #[test]
    fn witnesses_replay_on_longer_rows() {
        let m = z55();
        let a = RowTuple::from_i64(&m, &[&[2, 3], &[0, 1], &[1, 1]]);
        let b = RowTuple::from_i64(&m, &[&[0, 1], &[4, 0], &[2, 2]]);
        let (v, w) = are_nielsen_equivalent(&a, &b).unwrap();
        assert!(v);
        let moves = w.unwrap().expand(10_000).unwrap();
        assert_eq!(moves.replay(&a).unwrap(), b);
    }

    #[test]
    fn non_integer_rings_are_rejected() {
        let ring = crate::ring::Ring::int_mod(4).unwrap();
        let m = InvariantFactorModule::new(
            ring.clone(),
            vec![crate::ring::PrincipalIdeal::new(Elem::int_mod(4, 2))],
        )
        .unwrap();
        assert!(matches!(nielsen_class_count(&m, 1), Err(Error::Unsupported(_))));
    }
}
