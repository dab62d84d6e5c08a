//! Exact arithmetic over the supported quasi-Euclidean rings: the integers,
//! integers mod n, univariate polynomials over a prime field, and finite
//! products of these. Also hosts Bezout data, principal ideals with canonical
//! generators, and the elementary row-cancellation primitive that reduces any
//! row to `(d, 0, ..., 0)` by transvections alone.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::{ElementaryOp, ElementaryScript};

/// A supported base ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ring {
    /// The ring of integers.
    Int,
    /// Integers modulo n, n >= 2.
    IntMod(BigInt),
    /// Univariate polynomials over the prime field GF(p).
    Poly(u64),
    /// A finite product of rings, flattened on construction.
    Product(Vec<Ring>),
}

impl Ring {
    pub fn int_mod(n: impl Into<BigInt>) -> Result<Ring> {
        let n = n.into();
        if n < BigInt::from(2) {
            return Err(Error::Unsupported(format!("IntMod modulus must be >= 2, got {}", n)));
        }
        Ok(Ring::IntMod(n))
    }

    pub fn poly(p: u64) -> Result<Ring> {
        if !is_prime_u64(p) {
            return Err(Error::Unsupported(format!("{} is not prime", p)));
        }
        Ok(Ring::Poly(p))
    }

    /// Builds a product ring, flattening nested products.
    pub fn product(factors: Vec<Ring>) -> Result<Ring> {
        if factors.is_empty() {
            return Err(Error::Unsupported("product ring needs at least one factor".into()));
        }
        let mut flat = Vec::new();
        for f in factors {
            match f {
                Ring::Product(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        Ok(Ring::Product(flat))
    }

    pub fn zero(&self) -> Elem {
        match self {
            Ring::Int => Elem::Int(BigInt::zero()),
            Ring::IntMod(n) => Elem::IntMod { modulus: n.clone(), value: BigInt::zero() },
            Ring::Poly(p) => Elem::Poly { p: *p, coeffs: vec![] },
            Ring::Product(fs) => Elem::Product(fs.iter().map(|f| f.zero()).collect()),
        }
    }

    pub fn one(&self) -> Elem {
        match self {
            Ring::Int => Elem::Int(BigInt::one()),
            Ring::IntMod(n) => Elem::IntMod { modulus: n.clone(), value: BigInt::one() },
            Ring::Poly(p) => Elem::Poly { p: *p, coeffs: vec![1] },
            Ring::Product(fs) => Elem::Product(fs.iter().map(|f| f.one()).collect()),
        }
    }

    /// Builds an element from an integer, mapping it through the canonical
    /// ring homomorphism Z -> R.
    pub fn from_int(&self, v: impl Into<BigInt>) -> Elem {
        let v = v.into();
        match self {
            Ring::Int => Elem::Int(v),
            Ring::IntMod(n) => Elem::IntMod { modulus: n.clone(), value: v.mod_floor(n) },
            Ring::Poly(p) => {
                let c = v.mod_floor(&BigInt::from(*p)).to_u64().unwrap();
                Elem::Poly { p: *p, coeffs: if c == 0 { vec![] } else { vec![c] } }
            }
            Ring::Product(fs) => Elem::Product(fs.iter().map(|f| f.from_int(v.clone())).collect()),
        }
    }

}

/// An exact ring element in canonical form. Two elements are equal iff their
/// payloads are identical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Elem {
    Int(BigInt),
    IntMod { modulus: BigInt, value: BigInt },
    Poly { p: u64, coeffs: Vec<u64> },
    Product(Vec<Elem>),
}

impl Elem {
    pub fn int(v: impl Into<BigInt>) -> Elem {
        Elem::Int(v.into())
    }

    pub fn int_mod(n: impl Into<BigInt>, v: impl Into<BigInt>) -> Elem {
        let n = n.into();
        let v = v.into().mod_floor(&n);
        Elem::IntMod { modulus: n, value: v }
    }

    /// Polynomial over GF(p) from coefficients, constant term first.
    pub fn poly(p: u64, coeffs: &[i64]) -> Elem {
        let mut cs: Vec<u64> = coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
        while cs.last() == Some(&0) {
            cs.pop();
        }
        Elem::Poly { p, coeffs: cs }
    }

    pub fn product(components: Vec<Elem>) -> Elem {
        Elem::Product(components)
    }

    pub fn ring(&self) -> Ring {
        match self {
            Elem::Int(_) => Ring::Int,
            Elem::IntMod { modulus, .. } => Ring::IntMod(modulus.clone()),
            Elem::Poly { p, .. } => Ring::Poly(*p),
            Elem::Product(cs) => Ring::Product(cs.iter().map(|c| c.ring()).collect()),
        }
    }

    fn check_same_ring(&self, other: &Elem) -> Result<()> {
        if self.ring() != other.ring() {
            return Err(Error::RingMismatch(format!("{} vs {}", self, other)));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Elem::Int(v) => v.is_zero(),
            Elem::IntMod { value, .. } => value.is_zero(),
            Elem::Poly { coeffs, .. } => coeffs.is_empty(),
            Elem::Product(cs) => cs.iter().all(|c| c.is_zero()),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Elem::Int(v) => v.is_one(),
            Elem::IntMod { value, .. } => value.is_one(),
            Elem::Poly { coeffs, .. } => coeffs == &[1],
            Elem::Product(cs) => cs.iter().all(|c| c.is_one()),
        }
    }

    pub fn add(&self, other: &Elem) -> Result<Elem> {
        self.check_same_ring(other)?;
        Ok(match (self, other) {
            (Elem::Int(a), Elem::Int(b)) => Elem::Int(a + b),
            (Elem::IntMod { modulus, value: a }, Elem::IntMod { value: b, .. }) => {
                Elem::IntMod { modulus: modulus.clone(), value: (a + b).mod_floor(modulus) }
            }
            (Elem::Poly { p, coeffs: a }, Elem::Poly { coeffs: b, .. }) => {
                Elem::Poly { p: *p, coeffs: poly_add(*p, a, b) }
            }
            (Elem::Product(a), Elem::Product(b)) => Elem::Product(
                a.iter().zip(b).map(|(x, y)| x.add(y)).collect::<Result<_>>()?,
            ),
            _ => unreachable!(),
        })
    }

    pub fn neg(&self) -> Elem {
        match self {
            Elem::Int(v) => Elem::Int(-v),
            Elem::IntMod { modulus, value } => {
                Elem::IntMod { modulus: modulus.clone(), value: (-value).mod_floor(modulus) }
            }
            Elem::Poly { p, coeffs } => Elem::Poly {
                p: *p,
                coeffs: coeffs.iter().map(|&c| if c == 0 { 0 } else { p - c }).collect(),
            },
            Elem::Product(cs) => Elem::Product(cs.iter().map(|c| c.neg()).collect()),
        }
    }

    pub fn sub(&self, other: &Elem) -> Result<Elem> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Elem) -> Result<Elem> {
        self.check_same_ring(other)?;
        Ok(match (self, other) {
            (Elem::Int(a), Elem::Int(b)) => Elem::Int(a * b),
            (Elem::IntMod { modulus, value: a }, Elem::IntMod { value: b, .. }) => {
                Elem::IntMod { modulus: modulus.clone(), value: (a * b).mod_floor(modulus) }
            }
            (Elem::Poly { p, coeffs: a }, Elem::Poly { coeffs: b, .. }) => {
                Elem::Poly { p: *p, coeffs: poly_mul(*p, a, b) }
            }
            (Elem::Product(a), Elem::Product(b)) => Elem::Product(
                a.iter().zip(b).map(|(x, y)| x.mul(y)).collect::<Result<_>>()?,
            ),
            _ => unreachable!(),
        })
    }

    /// True iff the element is a unit of its ring.
    pub fn is_unit(&self) -> bool {
        match self {
            Elem::Int(v) => v.abs().is_one(),
            Elem::IntMod { modulus, value } => value.gcd(modulus).is_one(),
            Elem::Poly { coeffs, .. } => coeffs.len() == 1,
            Elem::Product(cs) => cs.iter().all(|c| c.is_unit()),
        }
    }

    /// The ring inverse of a unit.
    pub fn inv(&self) -> Result<Elem> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(self.to_string()));
        }
        Ok(match self {
            Elem::Int(v) => Elem::Int(v.clone()),
            Elem::IntMod { modulus, value } => {
                let (_, x, _) = int_xgcd(value, modulus);
                Elem::IntMod { modulus: modulus.clone(), value: x.mod_floor(modulus) }
            }
            Elem::Poly { p, coeffs } => {
                Elem::Poly { p: *p, coeffs: vec![mod_inv_u64(coeffs[0], *p)] }
            }
            Elem::Product(cs) => Elem::Product(cs.iter().map(|c| c.inv()).collect::<Result<_>>()?),
        })
    }

    /// Euclidean measure used for termination: |a| for integers (canonical
    /// residue for IntMod lifts), degree + 1 for polynomials. Not defined for
    /// product rings.
    pub fn measure(&self) -> Option<BigInt> {
        match self {
            Elem::Int(v) => Some(v.abs()),
            Elem::IntMod { value, .. } => Some(value.clone()),
            Elem::Poly { coeffs, .. } => Some(BigInt::from(coeffs.len())),
            Elem::Product(_) => None,
        }
    }

    /// Division with remainder in the Euclidean base ring (via lifts for
    /// IntMod). Not defined for product rings.
    pub fn div_rem(&self, other: &Elem) -> Result<(Elem, Elem)> {
        self.check_same_ring(other)?;
        if other.is_zero() {
            return Err(Error::Unsupported("division by zero".into()));
        }
        Ok(match (self, other) {
            (Elem::Int(a), Elem::Int(b)) => {
                let (q, r) = a.div_rem(b);
                (Elem::Int(q), Elem::Int(r))
            }
            (Elem::IntMod { modulus, value: a }, Elem::IntMod { value: b, .. }) => {
                let (q, r) = a.div_rem(b);
                (
                    Elem::IntMod { modulus: modulus.clone(), value: q.mod_floor(modulus) },
                    Elem::IntMod { modulus: modulus.clone(), value: r },
                )
            }
            (Elem::Poly { p, coeffs: a }, Elem::Poly { coeffs: b, .. }) => {
                let (q, r) = poly_div_rem(*p, a, b);
                (Elem::Poly { p: *p, coeffs: q }, Elem::Poly { p: *p, coeffs: r })
            }
            _ => return Err(Error::Unsupported("no Euclidean division in product rings".into())),
        })
    }

    /// Components of a product element.
    pub fn components(&self) -> Option<&[Elem]> {
        match self {
            Elem::Product(cs) => Some(cs),
            _ => None,
        }
    }
}

impl std::fmt::Display for Elem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Elem::Int(v) => write!(f, "{}", v),
            Elem::IntMod { value, .. } => write!(f, "{}", value),
            Elem::Poly { coeffs, .. } => {
                write!(f, "[")?;
                for (i, c) in coeffs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", c)?;
                }
                write!(f, "]")
            }
            Elem::Product(cs) => {
                write!(f, "(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", c)?;
                }
                write!(f, ")")
            }
        }
    }
}

// ---------------------------------------------------------------------------
// GF(p)[x] coefficient helpers
// ---------------------------------------------------------------------------

fn trim(mut cs: Vec<u64>) -> Vec<u64> {
    while cs.last() == Some(&0) {
        cs.pop();
    }
    cs
}

fn poly_add(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + y) % p;
    }
    trim(out)
}

fn poly_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    trim(out)
}

fn poly_div_rem(p: u64, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    assert!(!b.is_empty());
    if a.len() < b.len() {
        return (vec![], a.to_vec());
    }
    let mut rem = a.to_vec();
    let mut quot = vec![0u64; a.len() - b.len() + 1];
    let lc_inv = mod_inv_u64(*b.last().unwrap(), p);
    for k in (0..quot.len()).rev() {
        let coef = ((rem[k + b.len() - 1] as u128 * lc_inv as u128) % p as u128) as u64;
        quot[k] = coef;
        if coef != 0 {
            for (j, &bc) in b.iter().enumerate() {
                let sub = (coef as u128 * bc as u128) % p as u128;
                let cur = rem[k + j] as u128;
                rem[k + j] = ((cur + p as u128 * p as u128 - sub) % p as u128) as u64;
            }
        }
    }
    (trim(quot), trim(rem))
}

fn mod_inv_u64(a: u64, p: u64) -> u64 {
    // p prime, a != 0 mod p
    let (_, x, _) = int_xgcd(&BigInt::from(a), &BigInt::from(p));
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Iterative extended Euclid over the integers: returns (g, x, y) with
/// g = gcd(a, b) >= 0 and x*a + y*b = g.
pub fn int_xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut x0, mut x1) = (BigInt::one(), BigInt::zero());
    let (mut y0, mut y1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let x2 = &x0 - &q * &x1;
        x0 = std::mem::replace(&mut x1, x2);
        let y2 = &y0 - &q * &y1;
        y0 = std::mem::replace(&mut y1, y2);
    }
    if r0.is_negative() {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

/// Bezout data: (g, x, y) with x*a + y*b = g and g generating the ideal
/// (a, b). Computed on canonical lifts for IntMod, componentwise for products.
pub fn extended_gcd(a: &Elem, b: &Elem) -> Result<(Elem, Elem, Elem)> {
    a.check_same_ring(b)?;
    Ok(match (a, b) {
        (Elem::Int(x), Elem::Int(y)) => {
            let (g, s, t) = int_xgcd(x, y);
            (Elem::Int(g), Elem::Int(s), Elem::Int(t))
        }
        (Elem::IntMod { modulus, value: x }, Elem::IntMod { value: y, .. }) => {
            let (g, s, t) = int_xgcd(x, y);
            (
                Elem::IntMod { modulus: modulus.clone(), value: g.mod_floor(modulus) },
                Elem::IntMod { modulus: modulus.clone(), value: s.mod_floor(modulus) },
                Elem::IntMod { modulus: modulus.clone(), value: t.mod_floor(modulus) },
            )
        }
        (Elem::Poly { p, coeffs: x }, Elem::Poly { coeffs: y, .. }) => {
            let (g, s, t) = poly_xgcd(*p, x, y);
            (
                Elem::Poly { p: *p, coeffs: g },
                Elem::Poly { p: *p, coeffs: s },
                Elem::Poly { p: *p, coeffs: t },
            )
        }
        (Elem::Product(xs), Elem::Product(ys)) => {
            let mut gs = Vec::new();
            let mut ss = Vec::new();
            let mut ts = Vec::new();
            for (x, y) in xs.iter().zip(ys) {
                let (g, s, t) = extended_gcd(x, y)?;
                gs.push(g);
                ss.push(s);
                ts.push(t);
            }
            (Elem::Product(gs), Elem::Product(ss), Elem::Product(ts))
        }
        _ => unreachable!(),
    })
}

/// Extended Euclid in GF(p)[x] with monic gcd.
fn poly_xgcd(p: u64, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut x0, mut x1) = (vec![1u64], vec![]);
    let (mut y0, mut y1) = (vec![], vec![1u64]);
    while !r1.is_empty() {
        let (q, r2) = poly_div_rem(p, &r0, &r1);
        r0 = std::mem::replace(&mut r1, r2);
        let x2 = poly_add(p, &x0, &poly_mul(p, &q, &x1).iter().map(|&c| (p - c) % p).collect::<Vec<_>>());
        x0 = std::mem::replace(&mut x1, x2);
        let y2 = poly_add(p, &y0, &poly_mul(p, &q, &y1).iter().map(|&c| (p - c) % p).collect::<Vec<_>>());
        y0 = std::mem::replace(&mut y1, y2);
    }
    if let Some(&lc) = r0.last() {
        if lc != 1 {
            let inv = mod_inv_u64(lc, p);
            let scale = |cs: &[u64]| poly_mul(p, cs, &[inv]);
            return (scale(&r0), scale(&x0), scale(&y0));
        }
    }
    (r0, x0, y0)
}

// ---------------------------------------------------------------------------
// Principal ideals
// ---------------------------------------------------------------------------

/// A principal ideal with a canonical generator: nonnegative for the
/// integers, monic for polynomials, a divisor of n (via gcd with the modulus)
/// for IntMod, componentwise for products.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrincipalIdeal {
    generator: Elem,
}

impl PrincipalIdeal {
    pub fn new(generator: Elem) -> PrincipalIdeal {
        PrincipalIdeal { generator: canonical_generator(&generator) }
    }

    pub fn generator(&self) -> &Elem {
        &self.generator
    }

    pub fn ring(&self) -> Ring {
        self.generator.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.generator.is_zero()
    }

    /// True iff the ideal is the whole ring (generator is a unit).
    pub fn is_whole(&self) -> bool {
        self.generator.is_unit()
    }

    /// Ideal containment: self contains other iff self's generator divides
    /// other's generator.
    pub fn contains(&self, other: &PrincipalIdeal) -> Result<bool> {
        divides(&self.generator, &other.generator)
    }

    /// Canonical residue of `e` modulo this ideal.
    pub fn reduce(&self, e: &Elem) -> Result<Elem> {
        e.check_same_ring(&self.generator)?;
        Ok(reduce_mod(e, &self.generator))
    }

    /// Number of elements of R/(g), if finite.
    pub fn quotient_size(&self) -> Option<BigInt> {
        quotient_size(&self.generator)
    }

    /// Canonical residues of R/(g) in a deterministic order.
    pub fn residues(&self, budget: u64) -> Result<Vec<Elem>> {
        let size = self.quotient_size().ok_or_else(|| {
            Error::BudgetExceeded("quotient is infinite".into())
        })?;
        if size > BigInt::from(budget) {
            return Err(Error::BudgetExceeded(format!("quotient has {} elements, budget {}", size, budget)));
        }
        Ok(enumerate_residues(&self.generator))
    }

    /// Exact cardinality of the unit group of R/(g) in the supported cases.
    pub fn unit_count(&self) -> Result<BigInt> {
        unit_count(&self.generator)
    }

    /// One canonical representative per unit class of R/(g).
    pub fn unit_representatives(&self, budget: u64) -> Result<Vec<Elem>> {
        unit_representatives(&self.generator, budget)
    }

    /// True iff the residue of `e` is a unit in R/(g).
    pub fn is_unit_mod(&self, e: &Elem) -> Result<bool> {
        Ok(inverse_mod(e, self).is_ok())
    }
}

fn canonical_generator(g: &Elem) -> Elem {
    match g {
        Elem::Int(v) => Elem::Int(v.abs()),
        Elem::IntMod { modulus, value } => Elem::IntMod {
            modulus: modulus.clone(),
            value: if value.is_zero() { BigInt::zero() } else { value.gcd(modulus) },
        },
        Elem::Poly { p, coeffs } => {
            if let Some(&lc) = coeffs.last() {
                if lc != 1 {
                    let inv = mod_inv_u64(lc, *p);
                    return Elem::Poly { p: *p, coeffs: poly_mul(*p, coeffs, &[inv]) };
                }
            }
            g.clone()
        }
        Elem::Product(cs) => Elem::Product(cs.iter().map(canonical_generator).collect()),
    }
}

/// Divisibility in the ring: does a divide b?
pub fn divides(a: &Elem, b: &Elem) -> Result<bool> {
    a.check_same_ring(b)?;
    Ok(match (a, b) {
        (Elem::Int(x), Elem::Int(y)) => {
            if x.is_zero() {
                y.is_zero()
            } else {
                (y % x).is_zero()
            }
        }
        (Elem::IntMod { modulus, value: x }, Elem::IntMod { value: y, .. }) => {
            // (x) contains y in Z/n iff gcd(x, n) divides y.
            let g = if x.is_zero() { modulus.clone() } else { x.gcd(modulus) };
            if &g == modulus {
                y.is_zero()
            } else {
                (y % g).is_zero()
            }
        }
        (Elem::Poly { p, coeffs: x }, Elem::Poly { coeffs: y, .. }) => {
            if x.is_empty() {
                y.is_empty()
            } else {
                poly_div_rem(*p, y, x).1.is_empty()
            }
        }
        (Elem::Product(xs), Elem::Product(ys)) => {
            for (x, y) in xs.iter().zip(ys) {
                if !divides(x, y)? {
                    return Ok(false);
                }
            }
            true
        }
        _ => unreachable!(),
    })
}

fn reduce_mod(e: &Elem, g: &Elem) -> Elem {
    match (e, g) {
        (Elem::Int(v), Elem::Int(m)) => {
            if m.is_zero() {
                e.clone()
            } else {
                Elem::Int(v.mod_floor(m))
            }
        }
        (Elem::IntMod { modulus, value }, Elem::IntMod { value: m, .. }) => {
            if m.is_zero() {
                e.clone()
            } else {
                Elem::IntMod { modulus: modulus.clone(), value: value.mod_floor(m) }
            }
        }
        (Elem::Poly { p, coeffs }, Elem::Poly { coeffs: m, .. }) => {
            if m.is_empty() {
                e.clone()
            } else {
                Elem::Poly { p: *p, coeffs: poly_div_rem(*p, coeffs, m).1 }
            }
        }
        (Elem::Product(es), Elem::Product(gs)) => {
            Elem::Product(es.iter().zip(gs).map(|(x, y)| reduce_mod(x, y)).collect())
        }
        _ => panic!("reduce_mod ring mismatch"),
    }
}

fn quotient_size(g: &Elem) -> Option<BigInt> {
    match g {
        Elem::Int(v) => {
            if v.is_zero() {
                None
            } else {
                Some(v.clone())
            }
        }
        Elem::IntMod { modulus, value } => {
            if value.is_zero() {
                Some(modulus.clone())
            } else {
                Some(value.clone())
            }
        }
        Elem::Poly { p, coeffs } => {
            if coeffs.is_empty() {
                None
            } else {
                Some(BigInt::from(*p).pow((coeffs.len() - 1) as u32))
            }
        }
        Elem::Product(gs) => {
            let mut total = BigInt::one();
            for g in gs {
                total *= quotient_size(g)?;
            }
            Some(total)
        }
    }
}

fn enumerate_residues(g: &Elem) -> Vec<Elem> {
    match g {
        Elem::Int(m) => {
            let m = m.to_u64().unwrap();
            (0..m.max(1)).map(|v| Elem::Int(BigInt::from(v))).collect()
        }
        Elem::IntMod { modulus, value } => {
            let m = if value.is_zero() { modulus.clone() } else { value.clone() };
            let m = m.to_u64().unwrap();
            (0..m)
                .map(|v| Elem::IntMod { modulus: modulus.clone(), value: BigInt::from(v) })
                .collect()
        }
        Elem::Poly { p, coeffs } => {
            let deg = coeffs.len() - 1;
            let mut out = Vec::new();
            let mut cur = vec![0u64; deg];
            loop {
                out.push(Elem::Poly { p: *p, coeffs: trim(cur.clone()) });
                // odometer increment, most significant coefficient last
                let mut i = 0;
                loop {
                    if i == deg {
                        return out;
                    }
                    cur[i] += 1;
                    if cur[i] < *p {
                        break;
                    }
                    cur[i] = 0;
                    i += 1;
                }
            }
        }
        Elem::Product(gs) => {
            let mut out: Vec<Vec<Elem>> = vec![vec![]];
            for g in gs {
                let comp = enumerate_residues(g);
                let mut next = Vec::with_capacity(out.len() * comp.len());
                for prefix in &out {
                    for c in &comp {
                        let mut row = prefix.clone();
                        row.push(c.clone());
                        next.push(row);
                    }
                }
                out = next;
            }
            out.into_iter().map(Elem::Product).collect()
        }
    }
}

/// Euler totient extended by phi(0) = 0, by trial-division factorization.
pub fn totient(d: &BigInt) -> BigInt {
    if d.is_zero() {
        return BigInt::zero();
    }
    let mut n = d.abs();
    let mut phi = BigInt::one();
    let mut f = BigInt::from(2);
    while &f * &f <= n {
        if (&n % &f).is_zero() {
            let mut power = BigInt::one();
            while (&n % &f).is_zero() {
                n /= &f;
                power *= &f;
            }
            phi *= &power - &power / &f;
        }
        f += 1;
    }
    if n > BigInt::one() {
        phi *= &n - 1;
    }
    phi
}

fn unit_count(g: &Elem) -> Result<BigInt> {
    Ok(match g {
        Elem::Int(m) => {
            if m.is_zero() {
                BigInt::from(2) // Z has units {1, -1}
            } else if m.is_one() {
                BigInt::one() // zero ring, trivial unit group
            } else {
                totient(m)
            }
        }
        Elem::IntMod { modulus, value } => {
            let m = if value.is_zero() { modulus.clone() } else { value.clone() };
            if m.is_one() {
                BigInt::one()
            } else {
                totient(&m)
            }
        }
        Elem::Poly { p, coeffs } => {
            if coeffs.is_empty() {
                BigInt::from(*p - 1) // units of GF(p)[x] are the nonzero constants
            } else if coeffs.len() == 1 {
                BigInt::one()
            } else {
                let mut count = BigInt::zero();
                for r in enumerate_residues(g) {
                    if let Elem::Poly { coeffs: rc, .. } = &r {
                        let (gg, _, _) = poly_xgcd(*p, rc, coeffs);
                        if gg == [1] {
                            count += 1;
                        }
                    }
                }
                count
            }
        }
        Elem::Product(gs) => {
            let mut total = BigInt::one();
            for g in gs {
                total *= unit_count(g)?;
            }
            total
        }
    })
}

fn unit_representatives(g: &Elem, budget: u64) -> Result<Vec<Elem>> {
    Ok(match g {
        Elem::Int(m) => {
            if m.is_zero() {
                vec![Elem::Int(BigInt::one()), Elem::Int(BigInt::from(-1))]
            } else if m.is_one() {
                vec![Elem::Int(BigInt::zero())]
            } else {
                if m > &BigInt::from(budget) {
                    return Err(Error::BudgetExceeded(format!(
                        "unit enumeration over Z/{} exceeds budget {}",
                        m, budget
                    )));
                }
                enumerate_residues(g)
                    .into_iter()
                    .filter(|r| match r {
                        Elem::Int(v) => v.gcd(m).is_one(),
                        _ => unreachable!(),
                    })
                    .collect()
            }
        }
        Elem::IntMod { modulus, value } => {
            let m = if value.is_zero() { modulus.clone() } else { value.clone() };
            if m.is_one() {
                vec![Elem::IntMod { modulus: modulus.clone(), value: BigInt::zero() }]
            } else {
                if m > BigInt::from(budget) {
                    return Err(Error::BudgetExceeded(format!(
                        "unit enumeration exceeds budget {}",
                        budget
                    )));
                }
                enumerate_residues(g)
                    .into_iter()
                    .filter(|r| match r {
                        Elem::IntMod { value: v, .. } => v.gcd(&m).is_one(),
                        _ => unreachable!(),
                    })
                    .collect()
            }
        }
        Elem::Poly { p, coeffs } => {
            if coeffs.is_empty() {
                (1..*p).map(|c| Elem::Poly { p: *p, coeffs: vec![c] }).collect()
            } else if coeffs.len() == 1 {
                vec![Elem::Poly { p: *p, coeffs: vec![] }]
            } else {
                let size = quotient_size(g).unwrap();
                if size > BigInt::from(budget) {
                    return Err(Error::BudgetExceeded(format!(
                        "unit enumeration exceeds budget {}",
                        budget
                    )));
                }
                enumerate_residues(g)
                    .into_iter()
                    .filter(|r| match r {
                        Elem::Poly { coeffs: rc, .. } => {
                            let (gg, _, _) = poly_xgcd(*p, rc, coeffs);
                            gg == [1]
                        }
                        _ => unreachable!(),
                    })
                    .collect()
            }
        }
        Elem::Product(gs) => {
            let mut out: Vec<Vec<Elem>> = vec![vec![]];
            for g in gs {
                let comp = unit_representatives(g, budget)?;
                if out.len().saturating_mul(comp.len()) as u64 > budget {
                    return Err(Error::BudgetExceeded(format!(
                        "unit enumeration exceeds budget {}",
                        budget
                    )));
                }
                let mut next = Vec::with_capacity(out.len() * comp.len());
                for prefix in &out {
                    for c in &comp {
                        let mut row = prefix.clone();
                        row.push(c.clone());
                        next.push(row);
                    }
                }
                out = next;
            }
            out.into_iter().map(Elem::Product).collect()
        }
    })
}

/// Inverse of the residue of `a` modulo the ideal: returns canonical v with
/// v * a = 1 mod ideal. Fails with the gcd witness when the residue is not a
/// unit.
pub fn inverse_mod(a: &Elem, ideal: &PrincipalIdeal) -> Result<Elem> {
    let r = ideal.reduce(a)?;
    match (&r, ideal.generator()) {
        (Elem::Int(x), Elem::Int(m)) => {
            if m.is_zero() {
                if x.abs().is_one() {
                    return Ok(r.clone());
                }
                return Err(Error::NotAUnit(x.abs().to_string()));
            }
            let (g, s, _) = int_xgcd(x, m);
            if g.is_one() {
                Ok(Elem::Int(s.mod_floor(m)))
            } else {
                Err(Error::NotAUnit(g.to_string()))
            }
        }
        (Elem::IntMod { modulus, value: x }, Elem::IntMod { value: m, .. }) => {
            let m = if m.is_zero() { modulus.clone() } else { m.clone() };
            let (g, s, _) = int_xgcd(x, &m);
            if g.is_one() {
                Ok(Elem::IntMod { modulus: modulus.clone(), value: s.mod_floor(&m) })
            } else {
                Err(Error::NotAUnit(g.to_string()))
            }
        }
        (Elem::Poly { p, coeffs: x }, Elem::Poly { coeffs: m, .. }) => {
            if m.is_empty() {
                if x.len() == 1 {
                    return Ok(Elem::Poly { p: *p, coeffs: vec![mod_inv_u64(x[0], *p)] });
                }
                return Err(Error::NotAUnit(r.to_string()));
            }
            let (g, s, _) = poly_xgcd(*p, x, m);
            if g == [1] {
                Ok(Elem::Poly { p: *p, coeffs: poly_div_rem(*p, &s, m).1 })
            } else {
                Err(Error::NotAUnit(Elem::Poly { p: *p, coeffs: g }.to_string()))
            }
        }
        (Elem::Product(xs), Elem::Product(gs)) => {
            let mut out = Vec::with_capacity(xs.len());
            for (x, g) in xs.iter().zip(gs) {
                out.push(inverse_mod(x, &PrincipalIdeal::new(g.clone()))?);
            }
            Ok(Elem::Product(out))
        }
        _ => Err(Error::RingMismatch("inverse_mod operands".into())),
    }
}

/// Canonical lift of an element of a quotient-representable ring to its
/// Euclidean base ring. Reduction is a retraction of the lift.
pub fn quotient_lift(a: &Elem) -> Elem {
    match a {
        Elem::IntMod { value, .. } => Elem::Int(value.clone()),
        Elem::Product(cs) => Elem::Product(cs.iter().map(quotient_lift).collect()),
        other => other.clone(),
    }
}

// ---------------------------------------------------------------------------
// Row cancellation (elementary reduction to (d, 0, ..., 0))
// ---------------------------------------------------------------------------

/// The six-transvection factorization of diag(u, v) on slots (i, j), valid
/// when u * v = 1 in the ring.
pub fn whitehead_ops(u: &Elem, v: &Elem, i: usize, j: usize) -> Vec<ElementaryOp> {
    vec![
        ElementaryOp::new(i, j, u.clone()),
        ElementaryOp::new(j, i, v.neg()),
        ElementaryOp::new(i, j, u.clone()),
        ElementaryOp::new(i, j, u.ring().one().neg()),
        ElementaryOp::new(j, i, u.ring().one()),
        ElementaryOp::new(i, j, u.ring().one().neg()),
    ]
}

fn apply_op_to_row(row: &mut [Elem], op: &ElementaryOp) -> Result<()> {
    let delta = op.coefficient().mul(&row[op.source()])?;
    row[op.target()] = row[op.target()].add(&delta)?;
    Ok(())
}

/// Reduces a row to `(d, 0, ..., 0)` by transvections alone, returning d and
/// the replayable script. d generates the ideal generated by the entries and
/// is canonicalized (nonnegative / monic / a divisor of the modulus).
pub fn row_cancel(v: &[Elem]) -> Result<(Elem, ElementaryScript)> {
    let n = v.len();
    if n < 2 {
        return Err(Error::RowTooShort(format!("row_cancel needs n >= 2, got {}", n)));
    }
    let ring = v[0].ring();
    for e in &v[1..] {
        v[0].check_same_ring(e)?;
    }
    let mut w = v.to_vec();
    let mut ops = Vec::new();
    cancel_in_place(&ring, &mut w, &mut ops)?;
    debug_assert!(w[1..].iter().all(|e| e.is_zero()));
    Ok((w[0].clone(), ElementaryScript::new(n, ops)?))
}

fn cancel_in_place(ring: &Ring, w: &mut [Elem], ops: &mut Vec<ElementaryOp>) -> Result<()> {
    if let Ring::Product(factors) = ring {
        // E_n over a product splits componentwise; coefficients select one
        // component and act as zero on the others.
        for (c, factor) in factors.iter().enumerate() {
            let mut comp: Vec<Elem> = w
                .iter()
                .map(|e| e.components().expect("product element")[c].clone())
                .collect();
            let mut comp_ops = Vec::new();
            cancel_in_place(factor, &mut comp, &mut comp_ops)?;
            for op in comp_ops {
                let coeff = embed_component(ring, c, op.coefficient());
                let full = ElementaryOp::new(op.source(), op.target(), coeff);
                apply_op_to_row(w, &full)?;
                ops.push(full);
            }
        }
        return Ok(());
    }

    let push = |w: &mut [Elem], ops: &mut Vec<ElementaryOp>, op: ElementaryOp| -> Result<()> {
        apply_op_to_row(w, &op)?;
        ops.push(op);
        Ok(())
    };

    for i in 1..w.len() {
        if w[i].is_zero() {
            continue;
        }
        loop {
            if w[i].is_zero() {
                break;
            }
            if w[0].is_zero() {
                push(w, ops, ElementaryOp::new(i, 0, ring.one()))?;
                push(w, ops, ElementaryOp::new(0, i, ring.one().neg()))?;
                break;
            }
            // always reduce the larger-measure entry by the smaller
            if w[0].measure() >= w[i].measure() {
                let (q, _) = w[0].div_rem(&w[i])?;
                push(w, ops, ElementaryOp::new(i, 0, q.neg()))?;
            } else {
                let (q, _) = w[i].div_rem(&w[0])?;
                push(w, ops, ElementaryOp::new(0, i, q.neg()))?;
            }
        }
    }

    // canonicalize d using slot 1 (zero at this point) as scratch
    let head = w[0].clone();
    match &head {
        Elem::Int(d) if d.is_negative() => {
            let u = Elem::Int(BigInt::from(-1));
            for op in whitehead_ops(&u, &u, 0, 1) {
                push(w, ops, op)?;
            }
        }
        Elem::Poly { p, coeffs } if coeffs.last().map(|&c| c != 1).unwrap_or(false) => {
            let lc = *coeffs.last().unwrap();
            let u = Elem::Poly { p: *p, coeffs: vec![mod_inv_u64(lc, *p)] };
            let v = Elem::Poly { p: *p, coeffs: vec![lc] };
            for op in whitehead_ops(&u, &v, 0, 1) {
                push(w, ops, op)?;
            }
        }
        Elem::IntMod { modulus, value } if !value.is_zero() => {
            let g = value.gcd(modulus);
            if &g != value {
                // from (d, 0): (d, d) -> (g, d) via x with x*d = g mod n -> (g, 0)
                let (_, x, _) = int_xgcd(value, modulus);
                let quot = value.div_exact(&g);
                let one = ring.one();
                push(w, ops, ElementaryOp::new(0, 1, one.clone()))?;
                push(
                    w,
                    ops,
                    ElementaryOp::new(
                        1,
                        0,
                        Elem::IntMod {
                            modulus: modulus.clone(),
                            value: (&x - BigInt::from(1)).mod_floor(modulus),
                        },
                    ),
                )?;
                push(
                    w,
                    ops,
                    ElementaryOp::new(
                        0,
                        1,
                        Elem::IntMod { modulus: modulus.clone(), value: (-quot).mod_floor(modulus) },
                    ),
                )?;
            }
        }
        _ => {}
    }
    Ok(())
}

fn embed_component(ring: &Ring, index: usize, value: &Elem) -> Elem {
    match ring {
        Ring::Product(fs) => Elem::Product(
            fs.iter()
                .enumerate()
                .map(|(i, f)| if i == index { value.clone() } else { f.zero() })
                .collect(),
        ),
        _ => value.clone(),
    }
}

trait DivExactBigInt {
    fn div_exact(&self, other: &BigInt) -> BigInt;
}

impl DivExactBigInt for BigInt {
    fn div_exact(&self, other: &BigInt) -> BigInt {
        let (q, r) = self.div_rem(other);
        debug_assert!(r.is_zero());
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ElementaryScript;

    fn z5() -> Ring {
        Ring::int_mod(5).unwrap()
    }

    #[test]
    fn xgcd_bezout_identity() {
        let (g, x, y) = int_xgcd(&BigInt::from(240), &BigInt::from(46));
        assert_eq!(g, BigInt::from(2));
        assert_eq!(&x * 240 + &y * 46, g);
    }

    #[test]
    fn inverse_of_three_mod_seven() {
        let ideal = PrincipalIdeal::new(Elem::int(7));
        assert_eq!(inverse_mod(&Elem::int(3), &ideal).unwrap(), Elem::int(5));
    }

    #[test]
    fn inverse_fails_with_gcd_witness() {
        let ideal = PrincipalIdeal::new(Elem::int(6));
        match inverse_mod(&Elem::int(4), &ideal) {
            Err(Error::NotAUnit(msg)) => assert!(msg.contains('2')),
            other => panic!("expected NotAUnit, got {:?}", other),
        }
    }

    #[test]
    fn polynomial_gcd_is_monic() {
        // gcd(x^2 - 1, x - 1) over GF(5) is x - 1 = x + 4
        let a = Elem::poly(5, &[-1, 0, 1]);
        let b = Elem::poly(5, &[-1, 1]);
        let (g, x, y) = extended_gcd(&a, &b).unwrap();
        assert_eq!(g, Elem::poly(5, &[4, 1]));
        assert_eq!(x.mul(&a).unwrap().add(&y.mul(&b).unwrap()).unwrap(), g);
    }

    #[test]
    fn ideal_generators_are_canonical() {
        assert_eq!(PrincipalIdeal::new(Elem::int(-6)).generator(), &Elem::int(6));
        // 8 mod 12 generates the same ideal as gcd(8, 12) = 4
        assert_eq!(
            PrincipalIdeal::new(Elem::int_mod(12, 8)).generator(),
            &Elem::int_mod(12, 4)
        );
        // 2x + 2 over GF(5) normalizes to the monic x + 1
        assert_eq!(
            PrincipalIdeal::new(Elem::poly(5, &[2, 2])).generator(),
            &Elem::poly(5, &[1, 1])
        );
    }

    #[test]
    fn totient_values() {
        for (d, phi) in [(1u32, 1u32), (2, 1), (5, 4), (8, 4), (12, 4), (36, 12)] {
            assert_eq!(totient(&BigInt::from(d)), BigInt::from(phi));
        }
    }

    #[test]
    fn unit_counts_per_quotient() {
        assert_eq!(PrincipalIdeal::new(Elem::int(5)).unit_count().unwrap(), BigInt::from(4));
        assert_eq!(PrincipalIdeal::new(Elem::int(0)).unit_count().unwrap(), BigInt::from(2));
        let pr = Ring::product(vec![Ring::Int, Ring::Int]).unwrap();
        let gen = Elem::product(vec![Elem::int(2), Elem::int(3)]);
        assert_eq!(PrincipalIdeal::new(gen).unit_count().unwrap(), BigInt::from(2));
        let _ = pr;
    }

    #[test]
    fn whitehead_ops_realize_the_unit_diagonal() {
        // u = 2, v = 3 are inverses mod 5
        let u = Elem::int_mod(5, 2);
        let v = Elem::int_mod(5, 3);
        let script = ElementaryScript::new(2, whitehead_ops(&u, &v, 0, 1)).unwrap();
        let m = script.matrix(&z5()).unwrap();
        assert_eq!(m.at(0, 0), &u);
        assert_eq!(m.at(1, 1), &v);
        assert!(m.at(0, 1).is_zero() && m.at(1, 0).is_zero());
    }

    fn check_cancel(row: &[Elem]) -> Elem {
        let (d, script) = row_cancel(row).unwrap();
        let ring = row[0].ring();
        let mat = crate::matrix::ExactMatrix::from_rows(ring.clone(), vec![row.to_vec()]).unwrap();
        let out = crate::matrix::apply_script(&mat, &script, crate::matrix::Side::Columns).unwrap();
        assert_eq!(out.at(0, 0), &d);
        for j in 1..row.len() {
            assert!(out.at(0, j).is_zero(), "slot {} not cleared", j);
        }
        d
    }

    #[test]
    fn row_cancel_over_the_integers() {
        let d = check_cancel(&[Elem::int(6), Elem::int(4), Elem::int(3)]);
        assert_eq!(d, Elem::int(1));
        let d = check_cancel(&[Elem::int(-4), Elem::int(6)]);
        assert_eq!(d, Elem::int(2));
        let d = check_cancel(&[Elem::int(0), Elem::int(0)]);
        assert_eq!(d, Elem::int(0));
    }

    #[test]
    fn row_cancel_canonicalizes_modular_heads() {
        // over Z/12, entries (8, 0) cancel to gcd(8, 12) = 4
        let d = check_cancel(&[Elem::int_mod(12, 8), Elem::int_mod(12, 0)]);
        assert_eq!(d, Elem::int_mod(12, 4));
    }

    #[test]
    fn row_cancel_over_a_product_ring() {
        let a = Elem::product(vec![Elem::int(2), Elem::int(0)]);
        let b = Elem::product(vec![Elem::int(0), Elem::int(3)]);
        let d = check_cancel(&[a, b]);
        assert_eq!(d, Elem::product(vec![Elem::int(2), Elem::int(3)]));
    }

    #[test]
    fn row_cancel_rejects_single_slots() {
        assert!(matches!(row_cancel(&[Elem::int(3)]), Err(Error::RowTooShort(_))));
    }

    #[test]
    fn quotient_lift_recovers_ambient_elements() {
        assert_eq!(quotient_lift(&Elem::int_mod(7, 3)), Elem::int(3));
        assert_eq!(quotient_lift(&Elem::int(9)), Elem::int(9));
    }
}
