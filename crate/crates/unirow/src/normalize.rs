//! The constructive normalization pipeline: triangularize a unimodular row
//! by elementary cancellation, verify the diagonal residues are units, make
//! the pivots 1, clear the remaining entries and read off the unit delta —
//! always returning a replayable witness script.
//!
//! Coordinates are processed from the smallest invariant factor upwards
//! (a_k, ..., a_1), with the pivot for coordinate j placed in slot j, so the
//! pipeline terminates directly on (delta e_1, e_2, ..., e_k, 0, ..., 0).

use crate::error::{Error, Result};
use crate::matrix::{ElementaryOp, ElementaryScript};
use crate::module::{canonical_row, InvariantFactorModule, RowTuple};
use crate::ring::{inverse_mod, row_cancel, whitehead_ops, Elem};

/// Outcome of a full normalization: replaying `script` on the input row
/// yields `canonical` = canonical_row(m, delta, n), and delta = 1 whenever
/// n > rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationResult {
    pub delta: Elem,
    pub script: ElementaryScript,
    pub canonical: RowTuple,
}

struct Sweep {
    work: RowTuple,
    ops: Vec<ElementaryOp>,
    /// First pivot whose residue is not a unit: (coordinate, residue).
    nonunit: Option<(usize, Elem)>,
}

/// Phase 1: for each coordinate j = k-1 down to 0, cancel the column across
/// the still-available slots into slot j, then make the pivot 1 via
/// inverse_mod and the (d,0) -> (d,1) -> (1,1) -> (1,0) transvection pattern
/// whenever a helper slot exists.
fn sweep(row: &RowTuple) -> Result<Sweep> {
    let m = row.module().clone();
    let ring = m.ring().clone();
    let k = m.rank();
    let n = row.len();
    if n < k {
        return Err(Error::RowTooShort(format!("row length {} below rank {}", n, k)));
    }
    let mut work = row.clone();
    let mut ops: Vec<ElementaryOp> = Vec::new();
    let mut nonunit = None;

    let push = |work: &mut RowTuple, ops: &mut Vec<ElementaryOp>, op: ElementaryOp| -> Result<()> {
        work.apply_op(&op)?;
        ops.push(op);
        Ok(())
    };

    for j in (0..k).rev() {
        // available slots: pivot j first, then the not-yet-locked slots
        let mut slots: Vec<usize> = vec![j];
        slots.extend(0..j);
        slots.extend(k..n);

        if slots.len() >= 2 {
            let col: Vec<Elem> = slots.iter().map(|&s| work.at(s, j).clone()).collect();
            let (_, local) = row_cancel(&col)?;
            for op in local.ops() {
                let global = ElementaryOp::new(
                    slots[op.source()],
                    slots[op.target()],
                    op.coefficient().clone(),
                );
                push(&mut work, &mut ops, global)?;
            }
        }

        let ideal = m.factors()[j].clone();
        let pivot = work.at(j, j).clone();
        if pivot.is_one() {
            continue;
        }
        match inverse_mod(&pivot, &ideal) {
            Ok(v) => {
                let helper = if j >= 1 {
                    Some(j - 1)
                } else if n > k {
                    Some(k)
                } else {
                    None // n = k: the surviving pivot is delta
                };
                if let Some(h) = helper {
                    let one = ring.one();
                    push(&mut work, &mut ops, ElementaryOp::new(j, h, v))?;
                    push(&mut work, &mut ops, ElementaryOp::new(h, j, one.sub(&pivot)?))?;
                    push(&mut work, &mut ops, ElementaryOp::new(j, h, one.neg()))?;
                }
            }
            Err(_) => {
                if nonunit.is_none() {
                    nonunit = Some((j, pivot));
                }
            }
        }
    }
    Ok(Sweep { work, ops, nonunit })
}

/// Whether every diagonal residue produced by the sweep is a unit in its
/// quotient. This is the unimodularity criterion used by the modules layer.
pub(crate) fn pivots_are_units(row: &RowTuple) -> Result<bool> {
    Ok(sweep(row)?.nonunit.is_none())
}

/// Triangularizes a row: after the returned script, slot j is supported on
/// coordinates j and below (processed ordering), with unit pivots made 1
/// wherever a helper slot exists. Runs on non-unimodular input too.
pub fn triangularize(row: &RowTuple) -> Result<(ElementaryScript, RowTuple)> {
    let s = sweep(row)?;
    let script = ElementaryScript::new(row.len(), s.ops)?;
    Ok((script, s.work))
}

/// Normalizes a unimodular row to (delta e_1, e_2, ..., e_k, 0, ..., 0),
/// returning the unit delta, the witness script and the canonical row.
pub fn normalize_row(row: &RowTuple) -> Result<NormalizationResult> {
    let m = row.module().clone();
    let ring = m.ring().clone();
    let k = m.rank();
    let n = row.len();

    if k == 0 {
        // trivial module: every row is vacuously unimodular and canonical
        return Ok(NormalizationResult {
            delta: ring.one(),
            script: ElementaryScript::empty(n),
            canonical: row.clone(),
        });
    }

    let mut s = sweep(row)?;
    if let Some((coord, residue)) = s.nonunit {
        return Err(Error::NotUnimodular(format!(
            "diagonal residue {} in coordinate {} is not a unit",
            residue,
            coord + 1
        )));
    }

    // Phase 2: clear the remaining sub-triangular entries, column by column
    // with increasing coordinate, so each pivot slot is clean when used.
    for j in 0..k {
        let ideal = m.factors()[j].clone();
        let pivot = s.work.at(j, j).clone();
        let pivot_inv = if pivot.is_one() { ring.one() } else { inverse_mod(&pivot, &ideal)? };
        for i in j + 1..n {
            let e = s.work.at(i, j).clone();
            if e.is_zero() {
                continue;
            }
            let coeff = ideal.reduce(&e.mul(&pivot_inv)?)?.neg();
            let op = ElementaryOp::new(j, i, coeff);
            s.work.apply_op(&op)?;
            s.ops.push(op);
        }
    }

    let delta = s.work.at(0, 0).clone();
    let script = ElementaryScript::new(n, s.ops)?;
    let canonical = s.work;

    debug_assert_eq!(canonical, canonical_row(&m, &delta, n)?);
    debug_assert_eq!(row.apply_script(&script)?, canonical);

    Ok(NormalizationResult { delta, script, canonical })
}

/// Transfers a diagonal unit u from slot j into slot k_idx of a row that is
/// diagonal in the processed ordering, using the six-transvection Whitehead
/// pattern with the lift v = inverse of u modulo the ideal at slot j. Slot j
/// becomes 1 and slot k_idx is multiplied by u; the residual cross-terms
/// vanish because u*v - 1 lies in the ideal at j, which is contained in the
/// ideal at k_idx.
pub fn unit_transfer(
    row: &RowTuple,
    j: usize,
    k_idx: usize,
    u: &Elem,
) -> Result<(ElementaryScript, RowTuple)> {
    let m = row.module().clone();
    let k = m.rank();
    let n = row.len();
    if j == k_idx || j >= n || k_idx >= n || j >= k || k_idx >= k {
        return Err(Error::DimensionMismatch(format!(
            "unit_transfer slots ({}, {}) for rank {} and length {}",
            j, k_idx, k, n
        )));
    }
    // processed slot s carries paper coordinate k - 1 - s
    let coord_of = |s: usize| k - 1 - s;
    for s in 0..n {
        for c in 0..k {
            let expect_zero = s >= k || c != coord_of(s);
            if expect_zero && !row.at(s, c).is_zero() {
                return Err(Error::Unsupported(
                    "unit_transfer requires a row diagonal in the processed ordering".into(),
                ));
            }
        }
    }
    let ideal_j = m.factors()[coord_of(j)].clone();
    let ideal_k = m.factors()[coord_of(k_idx)].clone();
    if !ideal_k.contains(&ideal_j)? {
        return Err(Error::IdealChainViolation(format!(
            "ideal ({}) at slot {} is not contained in ideal ({}) at slot {}",
            ideal_j.generator(),
            j,
            ideal_k.generator(),
            k_idx
        )));
    }
    let u_res = ideal_j.reduce(u)?;
    if &u_res != row.at(j, coord_of(j)) {
        return Err(Error::Unsupported(format!(
            "u = {} does not match the diagonal entry {} at slot {}",
            u_res,
            row.at(j, coord_of(j)),
            j
        )));
    }
    let v = inverse_mod(&u_res, &ideal_j)?;
    let ops = whitehead_ops(&v, &u_res, j, k_idx);
    let script = ElementaryScript::new(n, ops)?;
    let out = row.apply_script(&script)?;
    Ok((script, out))
}

/// Convenience wrapper: normalization results for a whole batch.
pub fn normalize_all(
    _m: &InvariantFactorModule,
    rows: &[RowTuple],
) -> Result<Vec<NormalizationResult>> {
    rows.iter().map(normalize_row).collect()
}
