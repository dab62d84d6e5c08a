//! Dense exact matrices, elementary-operation scripts as first-class
//! witnesses, Smith normal form with transformation matrices, determinants,
//! and the Whitehead factorization of diag(u, u^-1).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{divides, int_xgcd, whitehead_ops, Elem, Ring};

/// A single transvection: "add coefficient x slot(source) to slot(target)".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryOp {
    source: usize,
    target: usize,
    coefficient: Elem,
}

impl ElementaryOp {
    pub fn new(source: usize, target: usize, coefficient: Elem) -> ElementaryOp {
        debug_assert_ne!(source, target);
        ElementaryOp { source, target, coefficient }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn coefficient(&self) -> &Elem {
        &self.coefficient
    }

    /// The inverse transvection.
    pub fn inverse(&self) -> ElementaryOp {
        ElementaryOp::new(self.source, self.target, self.coefficient.neg())
    }
}

/// An ordered list of transvections acting on `dimension` slots. The matrix
/// of a script is a product of elementary matrices, hence has determinant 1
/// and lies in E_n(R) by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryScript {
    dimension: usize,
    ops: Vec<ElementaryOp>,
}

impl ElementaryScript {
    pub fn new(dimension: usize, ops: Vec<ElementaryOp>) -> Result<ElementaryScript> {
        for op in &ops {
            if op.source == op.target {
                return Err(Error::DimensionMismatch("transvection with source == target".into()));
            }
            if op.source >= dimension || op.target >= dimension {
                return Err(Error::DimensionMismatch(format!(
                    "op indices ({}, {}) out of range for dimension {}",
                    op.source, op.target, dimension
                )));
            }
        }
        Ok(ElementaryScript { dimension, ops })
    }

    pub fn empty(dimension: usize) -> ElementaryScript {
        ElementaryScript { dimension, ops: vec![] }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn ops(&self) -> &[ElementaryOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Script realizing the inverse elementary matrix: reversed op order with
    /// negated coefficients.
    pub fn inverse(&self) -> ElementaryScript {
        ElementaryScript {
            dimension: self.dimension,
            ops: self.ops.iter().rev().map(|op| op.inverse()).collect(),
        }
    }

    /// Concatenation: replaying `self` then `other`.
    pub fn then(&self, other: &ElementaryScript) -> Result<ElementaryScript> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch("script dimensions differ".into()));
        }
        let mut ops = self.ops.clone();
        ops.extend(other.ops.iter().cloned());
        Ok(ElementaryScript { dimension: self.dimension, ops })
    }

    /// The script's matrix over the given ring (right-action convention:
    /// a row tuple m is sent to m * matrix).
    pub fn matrix(&self, ring: &Ring) -> Result<ExactMatrix> {
        let identity = ExactMatrix::identity(ring, self.dimension);
        apply_script(&identity, self, Side::Columns)
    }
}

/// Which index set a script acts on when applied to a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Rows,
    Columns,
}

/// A dense exact matrix with all entries canonical in the declared ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<Elem>,
}

impl ExactMatrix {
    pub fn new(ring: Ring, rows: usize, cols: usize, entries: Vec<Elem>) -> Result<ExactMatrix> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        for e in &entries {
            if e.ring() != ring {
                return Err(Error::RingMismatch(format!("matrix entry {} not in declared ring", e)));
            }
        }
        Ok(ExactMatrix { ring, rows, cols, entries })
    }

    pub fn from_rows(ring: Ring, rows: Vec<Vec<Elem>>) -> Result<ExactMatrix> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        ExactMatrix::new(ring, r, c, rows.into_iter().flatten().collect())
    }

    /// Integer matrix from machine integers, for tests and examples.
    pub fn from_i64(rows: &[&[i64]]) -> ExactMatrix {
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&v| Elem::int(v)).collect())
            .collect();
        ExactMatrix::from_rows(Ring::Int, data).unwrap()
    }

    pub fn identity(ring: &Ring, n: usize) -> ExactMatrix {
        let mut entries = vec![ring.zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = ring.one();
        }
        ExactMatrix { ring: ring.clone(), rows: n, cols: n, entries }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Elem {
        &self.entries[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Elem> {
        (0..self.cols).map(|j| self.at(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch("matrix product".into()));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.ring.zero();
                for l in 0..self.cols {
                    acc = acc.add(&self.at(i, l).mul(other.at(l, j))?)?;
                }
                out.push(acc);
            }
        }
        ExactMatrix::new(self.ring.clone(), self.rows, other.cols, out)
    }

    pub fn is_diagonal(&self) -> bool {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j && !self.at(i, j).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    fn row_op(&mut self, source: usize, target: usize, coeff: &Elem) -> Result<()> {
        for j in 0..self.cols {
            let delta = coeff.mul(self.at(source, j))?;
            let v = self.at(target, j).add(&delta)?;
            self.set(target, j, v);
        }
        Ok(())
    }

    fn col_op(&mut self, source: usize, target: usize, coeff: &Elem) -> Result<()> {
        for i in 0..self.rows {
            let delta = coeff.mul(self.at(i, source))?;
            let v = self.at(i, target).add(&delta)?;
            self.set(i, target, v);
        }
        Ok(())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn scale_row(&mut self, i: usize, u: &Elem) -> Result<()> {
        for j in 0..self.cols {
            let v = self.at(i, j).mul(u)?;
            self.set(i, j, v);
        }
        Ok(())
    }
}

/// Applies an elementary script to a matrix on the chosen side. Row side:
/// row(target) += c * row(source); column side: right multiplication by the
/// script's matrix.
pub fn apply_script(m: &ExactMatrix, script: &ElementaryScript, side: Side) -> Result<ExactMatrix> {
    let count = match side {
        Side::Rows => m.rows,
        Side::Columns => m.cols,
    };
    if script.dimension != count {
        return Err(Error::DimensionMismatch(format!(
            "script dimension {} does not match {} {}",
            script.dimension,
            count,
            match side {
                Side::Rows => "rows",
                Side::Columns => "columns",
            }
        )));
    }
    let mut out = m.clone();
    for op in &script.ops {
        if op.coefficient.ring() != m.ring {
            return Err(Error::RingMismatch("script coefficient ring".into()));
        }
        match side {
            Side::Rows => out.row_op(op.source, op.target, &op.coefficient)?,
            Side::Columns => out.col_op(op.source, op.target, &op.coefficient)?,
        }
    }
    Ok(out)
}

/// Exact determinant by cofactor expansion (matrices here are small).
pub fn determinant(m: &ExactMatrix) -> Result<Elem> {
    if m.rows != m.cols {
        return Err(Error::DimensionMismatch(format!(
            "determinant of {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let cols: Vec<usize> = (0..m.cols).collect();
    det_rec(m, 0, &cols)
}

fn det_rec(m: &ExactMatrix, row: usize, cols: &[usize]) -> Result<Elem> {
    if cols.is_empty() {
        return Ok(m.ring.one());
    }
    let mut acc = m.ring.zero();
    for (pos, &j) in cols.iter().enumerate() {
        let e = m.at(row, j);
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&c| c != j).collect();
        let minor = det_rec(m, row + 1, &rest)?;
        let term = e.mul(&minor)?;
        acc = if pos % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
    }
    Ok(acc)
}

/// The six-transvection script whose n x n matrix is diagonal with u at
/// (i, i), v at (j, j) and 1 elsewhere. Requires u * v = 1 exactly.
pub fn whitehead_factorization(
    u: &Elem,
    v: &Elem,
    i: usize,
    j: usize,
    n: usize,
) -> Result<ElementaryScript> {
    if i == j || i >= n || j >= n {
        return Err(Error::DimensionMismatch(format!(
            "whitehead indices ({}, {}) for dimension {}",
            i, j, n
        )));
    }
    let prod = u.mul(v)?;
    if !prod.is_one() {
        return Err(Error::NotInverses(format!("{} * {} = {}", u, v, prod)));
    }
    ElementaryScript::new(n, whitehead_ops(u, v, i, j))
}

/// Smith normal form: returns (p, d, q) with p * a * q = d, p and q of unit
/// determinant, d diagonal with a canonicalized divisibility chain.
pub fn smith_normal_form(a: &ExactMatrix) -> Result<(ExactMatrix, ExactMatrix, ExactMatrix)> {
    if let Ring::Product(factors) = &a.ring {
        return snf_product(a, factors);
    }
    snf_scalar(a)
}

fn snf_scalar(a: &ExactMatrix) -> Result<(ExactMatrix, ExactMatrix, ExactMatrix)> {
    let mut d = a.clone();
    let mut p = ExactMatrix::identity(&a.ring, a.rows);
    let mut q = ExactMatrix::identity(&a.ring, a.cols);
    let steps = a.rows.min(a.cols);

    'outer: for t in 0..steps {
        loop {
            // pivot: nonzero entry of least measure, row-major scan for ties
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..d.rows {
                for j in t..d.cols {
                    if d.at(i, j).is_zero() {
                        continue;
                    }
                    let better = match &pivot {
                        None => true,
                        Some((pi, pj)) => d.at(i, j).measure() < d.at(*pi, *pj).measure(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
            let (pi, pj) = match pivot {
                Some(pos) => pos,
                None => break 'outer, // trailing block all zero
            };
            d.swap_rows(t, pi);
            p.swap_rows(t, pi);
            d.swap_cols(t, pj);
            q.swap_cols(t, pj);

            let mut clean = true;
            for r in t + 1..d.rows {
                if d.at(r, t).is_zero() {
                    continue;
                }
                let (quot, _) = d.at(r, t).div_rem(d.at(t, t))?;
                d.row_op(t, r, &quot.neg())?;
                p.row_op(t, r, &quot.neg())?;
                if !d.at(r, t).is_zero() {
                    clean = false;
                }
            }
            for c in t + 1..d.cols {
                if d.at(t, c).is_zero() {
                    continue;
                }
                let (quot, _) = d.at(t, c).div_rem(d.at(t, t))?;
                d.col_op(t, c, &quot.neg())?;
                q.col_op(t, c, &quot.neg())?;
                if !d.at(t, c).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility chain repair: pull in a non-multiple from the
            // trailing block and restart the reduction with a smaller gcd
            let mut bad: Option<usize> = None;
            'scan: for r in t + 1..d.rows {
                for c in t + 1..d.cols {
                    if !divides(d.at(t, t), d.at(r, c))? {
                        bad = Some(r);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(r) => {
                    d.row_op(r, t, &a.ring.one())?;
                    p.row_op(r, t, &a.ring.one())?;
                }
                None => break,
            }
        }
    }

    // canonicalize diagonal entries by unit row scaling
    for t in 0..steps {
        let e = d.at(t, t).clone();
        if let Some(u) = canonical_unit_multiplier(&e)? {
            d.scale_row(t, &u)?;
            p.scale_row(t, &u)?;
        }
    }
    Ok((p, d, q))
}

/// A unit u such that u * e is the canonical associate of e (nonnegative,
/// monic, or a divisor of the modulus), or None if e is already canonical.
fn canonical_unit_multiplier(e: &Elem) -> Result<Option<Elem>> {
    Ok(match e {
        Elem::Int(v) => {
            if v.sign() == num_bigint::Sign::Minus {
                Some(Elem::int(-1))
            } else {
                None
            }
        }
        Elem::Poly { p, coeffs } => match coeffs.last() {
            Some(&lc) if lc != 1 => {
                let (_, x, _) = int_xgcd(&BigInt::from(lc), &BigInt::from(*p));
                use num_traits::ToPrimitive;
                let inv = x.mod_floor(&BigInt::from(*p)).to_u64().unwrap();
                Some(Elem::Poly { p: *p, coeffs: vec![inv] })
            }
            _ => None,
        },
        Elem::IntMod { modulus, value } => {
            if value.is_zero() {
                None
            } else {
                let g = value.gcd(modulus);
                if &g == value {
                    None
                } else {
                    Some(Elem::IntMod {
                        modulus: modulus.clone(),
                        value: associate_unit(value, modulus),
                    })
                }
            }
        }
        Elem::Product(cs) => {
            let mut units = Vec::with_capacity(cs.len());
            let mut any = false;
            for c in cs {
                match canonical_unit_multiplier(c)? {
                    Some(u) => {
                        any = true;
                        units.push(u);
                    }
                    None => units.push(c.ring().one()),
                }
            }
            if any {
                Some(Elem::Product(units))
            } else {
                None
            }
        }
    })
}

/// A unit u mod n with u * d = gcd(d, n) mod n, for 0 < d < n.
fn associate_unit(d: &BigInt, n: &BigInt) -> BigInt {
    let g = d.gcd(n);
    let d1 = d / &g;
    let n1 = n / &g;
    let (_, x, _) = int_xgcd(&d1, &n1);
    let base = x.mod_floor(&n1);
    // lift to a unit mod n: base + s * n1 is coprime to n for some 0 <= s < g
    let mut s = BigInt::zero();
    loop {
        let candidate = (&base + &s * &n1).mod_floor(n);
        if candidate.gcd(n).is_one() {
            return candidate;
        }
        s += 1;
        debug_assert!(s <= g);
    }
}

fn snf_product(
    a: &ExactMatrix,
    factors: &[Ring],
) -> Result<(ExactMatrix, ExactMatrix, ExactMatrix)> {
    let mut ps = Vec::new();
    let mut ds = Vec::new();
    let mut qs = Vec::new();
    for c in 0..factors.len() {
        let comp = component_matrix(a, c)?;
        let (p, d, q) = smith_normal_form(&comp)?;
        ps.push(p);
        ds.push(d);
        qs.push(q);
    }
    Ok((
        combine_matrices(&a.ring, &ps)?,
        combine_matrices(&a.ring, &ds)?,
        combine_matrices(&a.ring, &qs)?,
    ))
}

fn component_matrix(a: &ExactMatrix, c: usize) -> Result<ExactMatrix> {
    let factor = match &a.ring {
        Ring::Product(fs) => fs[c].clone(),
        _ => unreachable!(),
    };
    let entries = a
        .entries
        .iter()
        .map(|e| e.components().expect("product entry")[c].clone())
        .collect();
    ExactMatrix::new(factor, a.rows, a.cols, entries)
}

fn combine_matrices(ring: &Ring, comps: &[ExactMatrix]) -> Result<ExactMatrix> {
    let rows = comps[0].rows;
    let cols = comps[0].cols;
    let mut entries = Vec::with_capacity(rows * cols);
    for idx in 0..rows * cols {
        entries.push(Elem::Product(comps.iter().map(|m| m.entries[idx].clone()).collect()));
    }
    ExactMatrix::new(ring.clone(), rows, cols, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int_xgcd;
    use num_bigint::BigInt;
    use num_traits::Zero;

    fn assert_snf(a: &ExactMatrix, diag: &[i64]) {
        let (p, d, q) = smith_normal_form(a).unwrap();
        assert_eq!(p.mul(a).unwrap().mul(&q).unwrap(), d);
        assert!(determinant(&p).unwrap().is_unit());
        assert!(determinant(&q).unwrap().is_unit());
        for (i, &v) in diag.iter().enumerate() {
            assert_eq!(d.at(i, i), &Elem::int(v), "diagonal slot {}", i);
        }
    }

    #[test]
    fn snf_of_the_textbook_matrix() {
        assert_snf(&ExactMatrix::from_i64(&[&[2, 4], &[6, 8]]), &[2, 4]);
    }

    #[test]
    fn snf_needs_divisibility_repair() {
        assert_snf(&ExactMatrix::from_i64(&[&[2, 2], &[2, -2]]), &[2, 4]);
    }

    #[test]
    fn snf_of_rectangular_and_zero_matrices() {
        assert_snf(&ExactMatrix::from_i64(&[&[4, 6, 10]]), &[2]);
        assert_snf(&ExactMatrix::from_i64(&[&[0, 0], &[0, 0]]), &[0, 0]);
    }

    #[test]
    fn snf_diagonal_is_canonical_mod_n() {
        let ring = Ring::int_mod(12).unwrap();
        let a = ExactMatrix::new(ring.clone(), 1, 1, vec![Elem::int_mod(12, 8)]).unwrap();
        let (p, d, q) = smith_normal_form(&a).unwrap();
        assert_eq!(p.mul(&a).unwrap().mul(&q).unwrap(), d);
        assert_eq!(d.at(0, 0), &Elem::int_mod(12, 4));
    }

    #[test]
    fn determinant_by_cofactors() {
        let a = ExactMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        assert_eq!(determinant(&a).unwrap(), Elem::int(-8));
        let b = ExactMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert_eq!(determinant(&b).unwrap(), Elem::int(-3));
    }

    #[test]
    fn script_inverse_cancels() {
        let ops = vec![
            ElementaryOp::new(0, 1, Elem::int(3)),
            ElementaryOp::new(1, 0, Elem::int(-2)),
        ];
        let script = ElementaryScript::new(2, ops).unwrap();
        let both = script.then(&script.inverse()).unwrap();
        assert_eq!(both.matrix(&Ring::Int).unwrap(), ExactMatrix::identity(&Ring::Int, 2));
    }

    #[test]
    fn script_matrix_has_unit_determinant() {
        let ops = vec![
            ElementaryOp::new(0, 2, Elem::int(5)),
            ElementaryOp::new(2, 1, Elem::int(-7)),
            ElementaryOp::new(1, 0, Elem::int(2)),
        ];
        let script = ElementaryScript::new(3, ops).unwrap();
        let m = script.matrix(&Ring::Int).unwrap();
        assert_eq!(determinant(&m).unwrap(), Elem::int(1));
    }

    #[test]
    fn whitehead_factorization_of_inverse_units() {
        let u = Elem::int_mod(5, 2);
        let v = Elem::int_mod(5, 3);
        let script = whitehead_factorization(&u, &v, 0, 1, 3).unwrap();
        let ring = Ring::int_mod(5).unwrap();
        let m = script.matrix(&ring).unwrap();
        assert_eq!(m.at(0, 0), &u);
        assert_eq!(m.at(1, 1), &v);
        assert_eq!(m.at(2, 2), &ring.one());
        assert!(m.at(0, 1).is_zero() && m.at(1, 0).is_zero());
    }

    #[test]
    fn whitehead_factorization_rejects_non_inverses() {
        let u = Elem::int_mod(5, 2);
        assert!(matches!(
            whitehead_factorization(&u, &u, 0, 1, 2),
            Err(Error::NotInverses(_))
        ));
    }

    #[test]
    fn minor_gcd_oracle_on_a_fixed_matrix() {
        // d_1 * ... * d_i equals the gcd of all i x i minors, up to sign
        let a = ExactMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let (_, d, _) = smith_normal_form(&a).unwrap();
        let mut product = Elem::int(1);
        for i in 0..3 {
            product = product.mul(d.at(i, i)).unwrap();
            let g = minor_gcd(&a, i + 1);
            let p = match &product {
                Elem::Int(v) => v.clone(),
                _ => unreachable!(),
            };
            assert_eq!(p, g, "minor gcd at size {}", i + 1);
        }
    }

    /// Gcd of all size x size minors of an integer matrix (nonnegative).
    pub(crate) fn minor_gcd(a: &ExactMatrix, size: usize) -> BigInt {
        fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 0..=n.saturating_sub(k) {
                for mut rest in combos(n - first - 1, k - 1) {
                    for r in rest.iter_mut() {
                        *r += first + 1;
                    }
                    rest.insert(0, first);
                    out.push(rest);
                }
            }
            out
        }
        let mut g = BigInt::zero();
        for rows in combos(a.rows(), size) {
            for cols in combos(a.cols(), size) {
                let entries: Vec<Elem> = rows
                    .iter()
                    .flat_map(|&i| cols.iter().map(move |&j| a.at(i, j).clone()))
                    .collect();
                let sub = ExactMatrix::new(Ring::Int, size, size, entries).unwrap();
                match determinant(&sub).unwrap() {
                    Elem::Int(v) => {
                        let (gg, _, _) = int_xgcd(&g, &v);
                        g = gg;
                    }
                    _ => unreachable!(),
                }
            }
        }
        g
    }
}
