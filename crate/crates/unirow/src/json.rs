//! JSON encoding and decoding for every surface type. Elements serialize as
//! decimal strings (integers, modular residues), coefficient arrays with the
//! constant term first (prime-field polynomials) or arrays of component
//! values (product rings). Slot indices are 1-based on the wire and 0-based
//! internally.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::invariant::DetInvariant;
use crate::matrix::{ElementaryOp, ElementaryScript, ExactMatrix};
use crate::module::{InvariantFactorModule, RowTuple};
use crate::nielsen::{NielsenMove, NielsenMoveSequence, NielsenWitness};
use crate::normalize::NormalizationResult;
use crate::oracle::{GeneratorSet, OrbitPartition};
use crate::ring::{Elem, PrincipalIdeal, Ring};

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(format!("{} must be an object", what)))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(format!("{} must be an array", what)))
}

fn get<'a>(m: &'a Map<String, Value>, key: &str, what: &str) -> Result<&'a Value> {
    m.get(key).ok_or_else(|| schema(format!("{} is missing field \"{}\"", what, key)))
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| schema(format!("{} must be a nonnegative integer", what)))
}

fn bigint_from(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::String(s) => {
            BigInt::from_str(s).map_err(|_| schema(format!("{} is not a decimal string", what)))
        }
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| schema(format!("{} is not an exact integer", what))),
        _ => Err(schema(format!("{} must be a decimal string or integer", what))),
    }
}

// ---------------------------------------------------------------------------
// rings and elements

pub fn ring_to_json(ring: &Ring) -> Value {
    match ring {
        Ring::Int => json!({"kind": "Z"}),
        Ring::IntMod(n) => json!({"kind": "Zn", "n": n.to_string()}),
        Ring::Poly(p) => json!({"kind": "GF_p_x", "p": p}),
        Ring::Product(factors) => {
            json!({"kind": "product", "factors": factors.iter().map(ring_to_json).collect::<Vec<_>>()})
        }
    }
}

pub fn ring_from_json(v: &Value) -> Result<Ring> {
    let obj = as_object(v, "ring")?;
    let kind = get(obj, "kind", "ring")?
        .as_str()
        .ok_or_else(|| schema("ring kind must be a string"))?;
    match kind {
        "Z" => Ok(Ring::Int),
        "Zn" => {
            let n = bigint_from(get(obj, "n", "ring Zn")?, "ring modulus n")?;
            Ring::int_mod(n).map_err(|e| schema(e.to_string()))
        }
        "GF_p_x" => {
            let p = as_u64(get(obj, "p", "ring GF_p_x")?, "field characteristic p")?;
            Ring::poly(p).map_err(|e| schema(e.to_string()))
        }
        "product" => {
            let factors = as_array(get(obj, "factors", "product ring")?, "ring factors")?
                .iter()
                .map(ring_from_json)
                .collect::<Result<Vec<_>>>()?;
            Ring::product(factors).map_err(|e| schema(e.to_string()))
        }
        other => Err(schema(format!("unknown ring kind \"{}\"", other))),
    }
}

pub fn elem_to_json(e: &Elem) -> Value {
    match e {
        Elem::Int(v) => Value::String(v.to_string()),
        Elem::IntMod { value, .. } => Value::String(value.to_string()),
        Elem::Poly { coeffs, .. } => Value::Array(coeffs.iter().map(|&c| json!(c)).collect()),
        Elem::Product(cs) => Value::Array(cs.iter().map(elem_to_json).collect()),
    }
}

pub fn elem_from_json(v: &Value, ring: &Ring) -> Result<Elem> {
    match ring {
        Ring::Int => Ok(Elem::Int(bigint_from(v, "integer element")?)),
        Ring::IntMod(n) => {
            Ok(Elem::int_mod(n.clone(), bigint_from(v, "modular element")?))
        }
        Ring::Poly(p) => {
            let coeffs = as_array(v, "polynomial element")?
                .iter()
                .map(|c| {
                    c.as_i64()
                        .ok_or_else(|| schema("polynomial coefficient must be an integer"))
                })
                .collect::<Result<Vec<i64>>>()?;
            Ok(Elem::poly(*p, &coeffs))
        }
        Ring::Product(factors) => {
            let comps = as_array(v, "product element")?;
            if comps.len() != factors.len() {
                return Err(schema(format!(
                    "product element has {} components, ring has {}",
                    comps.len(),
                    factors.len()
                )));
            }
            let cs = comps
                .iter()
                .zip(factors)
                .map(|(c, r)| elem_from_json(c, r))
                .collect::<Result<Vec<_>>>()?;
            Ok(Elem::product(cs))
        }
    }
}

// ---------------------------------------------------------------------------
// matrices and scripts

pub fn matrix_to_json(m: &ExactMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array(m.row(i).iter().map(elem_to_json).collect()))
        .collect();
    Value::Array(rows)
}

pub fn matrix_from_json(v: &Value, ring: &Ring) -> Result<ExactMatrix> {
    let rows_json = as_array(v, "matrix")?;
    if rows_json.is_empty() {
        return Err(schema("matrix needs at least one row"));
    }
    let mut rows = Vec::with_capacity(rows_json.len());
    for r in rows_json {
        let row = as_array(r, "matrix row")?
            .iter()
            .map(|e| elem_from_json(e, ring))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let width = rows[0].len();
    if width == 0 || rows.iter().any(|r| r.len() != width) {
        return Err(schema("matrix rows must be nonempty and equally long"));
    }
    ExactMatrix::from_rows(ring.clone(), rows)
}

pub fn script_to_json(s: &ElementaryScript) -> Value {
    let ops: Vec<Value> = s
        .ops()
        .iter()
        .map(|op| {
            json!({
                "source": op.source() + 1,
                "target": op.target() + 1,
                "coefficient": elem_to_json(op.coefficient()),
            })
        })
        .collect();
    Value::Array(ops)
}

pub fn script_from_json(v: &Value, ring: &Ring, dimension: usize) -> Result<ElementaryScript> {
    let ops_json = as_array(v, "script")?;
    let mut ops = Vec::with_capacity(ops_json.len());
    for o in ops_json {
        let obj = as_object(o, "script op")?;
        let source = as_u64(get(obj, "source", "script op")?, "op source")? as usize;
        let target = as_u64(get(obj, "target", "script op")?, "op target")? as usize;
        if source == 0 || target == 0 || source > dimension || target > dimension {
            return Err(schema(format!(
                "op indices ({}, {}) out of range 1..={}",
                source, target, dimension
            )));
        }
        if source == target {
            return Err(schema("op source and target must differ"));
        }
        let coeff = elem_from_json(get(obj, "coefficient", "script op")?, ring)?;
        ops.push(ElementaryOp::new(source - 1, target - 1, coeff));
    }
    ElementaryScript::new(dimension, ops)
}

// ---------------------------------------------------------------------------
// modules and rows

pub fn module_to_json(m: &InvariantFactorModule) -> Value {
    json!({
        "ring": ring_to_json(m.ring()),
        "factors": m.factors().iter().map(|f| elem_to_json(f.generator())).collect::<Vec<_>>(),
    })
}

pub fn module_from_json(v: &Value) -> Result<InvariantFactorModule> {
    let obj = as_object(v, "module")?;
    let ring = ring_from_json(get(obj, "ring", "module")?)?;
    let factors = as_array(get(obj, "factors", "module")?, "module factors")?
        .iter()
        .map(|g| Ok(PrincipalIdeal::new(elem_from_json(g, &ring)?)))
        .collect::<Result<Vec<_>>>()?;
    InvariantFactorModule::new(ring, factors)
}

pub fn row_to_json(row: &RowTuple) -> Value {
    let entries: Vec<Value> = row
        .entries()
        .iter()
        .map(|e| Value::Array(e.coords().iter().map(elem_to_json).collect()))
        .collect();
    Value::Array(entries)
}

pub fn row_from_json(v: &Value, m: &InvariantFactorModule) -> Result<RowTuple> {
    let entries_json = as_array(v, "row")?;
    let ring = m.ring();
    let mut entries = Vec::with_capacity(entries_json.len());
    for e in entries_json {
        let coords_json = as_array(e, "row entry")?;
        if coords_json.len() != m.rank() {
            return Err(schema(format!(
                "row entry has {} coordinates, module rank is {}",
                coords_json.len(),
                m.rank()
            )));
        }
        let coords = coords_json
            .iter()
            .map(|c| elem_from_json(c, ring))
            .collect::<Result<Vec<_>>>()?;
        entries.push(m.element(coords)?);
    }
    RowTuple::new(m.clone(), entries)
}

// ---------------------------------------------------------------------------
// results

pub fn det_invariant_to_json(d: &DetInvariant) -> Value {
    json!({
        "modulus": elem_to_json(d.quotient.generator()),
        "value": elem_to_json(&d.value),
    })
}

pub fn normalization_to_json(r: &NormalizationResult) -> Value {
    json!({
        "delta": elem_to_json(&r.delta),
        "script": script_to_json(&r.script),
        "canonical": row_to_json(&r.canonical),
    })
}

pub fn moves_to_json(seq: &NielsenMoveSequence) -> Value {
    let moves: Vec<Value> = seq
        .moves()
        .iter()
        .map(|m| match m {
            NielsenMove::L { i, j } => json!({"L": [i + 1, j + 1]}),
            NielsenMove::I { i } => json!({"I": i + 1}),
        })
        .collect();
    Value::Array(moves)
}

pub fn moves_from_json(v: &Value, n: usize) -> Result<NielsenMoveSequence> {
    let list = as_array(v, "moves")?;
    let mut moves = Vec::with_capacity(list.len());
    for m in list {
        let obj = as_object(m, "move")?;
        if let Some(l) = obj.get("L") {
            let pair = as_array(l, "L move")?;
            if pair.len() != 2 {
                return Err(schema("L move needs exactly two indices"));
            }
            let i = as_u64(&pair[0], "L index i")? as usize;
            let j = as_u64(&pair[1], "L index j")? as usize;
            if i == 0 || j == 0 || i > n || j > n || i == j {
                return Err(schema(format!("L move ({}, {}) out of range 1..={}", i, j, n)));
            }
            moves.push(NielsenMove::L { i: i - 1, j: j - 1 });
        } else if let Some(iv) = obj.get("I") {
            let i = as_u64(iv, "I index")? as usize;
            if i == 0 || i > n {
                return Err(schema(format!("I move ({}) out of range 1..={}", i, n)));
            }
            moves.push(NielsenMove::I { i: i - 1 });
        } else {
            return Err(schema("move must have an \"L\" or \"I\" field"));
        }
    }
    Ok(NielsenMoveSequence::new(moves))
}

pub fn nielsen_witness_to_json(w: &NielsenWitness) -> Value {
    json!({
        "signs": w.signs.iter().map(|&s| json!(s as i64)).collect::<Vec<_>>(),
        "script": script_to_json(&w.script),
    })
}

pub fn partition_to_json(p: &OrbitPartition) -> Value {
    let generator_set = match p.generator_set {
        GeneratorSet::Elementary => "elementary",
        GeneratorSet::ElementaryUnitCoefficients => "elementary-unit-coefficients",
        GeneratorSet::Nielsen => "nielsen",
    };
    json!({
        "generator_set": generator_set,
        "state_count": p.state_count,
        "class_count": p.classes.len(),
        "classes": p.classes.iter().map(|c| json!({
            "size": c.len(),
            "representative": row_to_json(&c[0]),
        })).collect::<Vec<_>>(),
    })
}

pub fn error_to_json(e: &Error) -> Value {
    json!({"error": {"code": e.code(), "message": e.to_string()}})
}

/// Parses a top-level JSON document.
pub fn parse_document(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| schema(format!("invalid JSON: {}", e)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::RowTuple;

    fn roundtrip_ring(r: &Ring) {
        assert_eq!(&ring_from_json(&ring_to_json(r)).unwrap(), r);
    }

    #[test]
    fn ring_round_trips() {
        roundtrip_ring(&Ring::Int);
        roundtrip_ring(&Ring::int_mod(12).unwrap());
        roundtrip_ring(&Ring::poly(5).unwrap());
        roundtrip_ring(&Ring::product(vec![Ring::Int, Ring::int_mod(6).unwrap()]).unwrap());
    }

    #[test]
    fn element_round_trips() {
        let cases = vec![
            Elem::int(-42),
            Elem::int_mod(12, 7),
            Elem::poly(5, &[1, 0, 3]),
            Elem::product(vec![Elem::int(2), Elem::poly(3, &[1, 1])]),
        ];
        for e in cases {
            let ring = e.ring();
            assert_eq!(elem_from_json(&elem_to_json(&e), &ring).unwrap(), e);
        }
    }

    #[test]
    fn matrix_and_script_round_trips() {
        let m = ExactMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        assert_eq!(matrix_from_json(&matrix_to_json(&m), &Ring::Int).unwrap(), m);
        let script = ElementaryScript::new(
            3,
            vec![ElementaryOp::new(0, 2, Elem::int(5)), ElementaryOp::new(2, 1, Elem::int(-1))],
        )
        .unwrap();
        assert_eq!(script_from_json(&script_to_json(&script), &Ring::Int, 3).unwrap(), script);
    }

    #[test]
    fn module_and_row_round_trips() {
        let m = InvariantFactorModule::cyclic_factors(&[2, 4]).unwrap();
        assert_eq!(module_from_json(&module_to_json(&m)).unwrap(), m);
        let row = RowTuple::from_i64(&m, &[&[1, 3], &[0, 1]]);
        assert_eq!(row_from_json(&row_to_json(&row), &m).unwrap(), row);
    }

    #[test]
    fn moves_round_trip() {
        use crate::nielsen::NielsenMove;
        let seq = crate::nielsen::NielsenMoveSequence::new(vec![
            NielsenMove::I { i: 0 },
            NielsenMove::L { i: 1, j: 0 },
        ]);
        assert_eq!(moves_from_json(&moves_to_json(&seq), 2).unwrap(), seq);
    }

    #[test]
    fn schema_violations_are_schema_errors() {
        assert!(matches!(ring_from_json(&json!({"kind": "Q"})), Err(Error::Schema(_))));
        assert!(matches!(
            elem_from_json(&json!(1.5), &Ring::Int),
            Err(Error::Schema(_))
        ));
        assert!(matches!(
            script_from_json(&json!([{"source": 1, "target": 1, "coefficient": "1"}]), &Ring::Int, 2),
            Err(Error::Schema(_))
        ));
        assert!(matches!(parse_document("not json"), Err(Error::Schema(_))));
    }

    #[test]
    fn one_based_indices_on_the_wire() {
        let script =
            ElementaryScript::new(2, vec![ElementaryOp::new(0, 1, Elem::int(1))]).unwrap();
        let v = script_to_json(&script);
        assert_eq!(v[0]["source"], json!(1));
        assert_eq!(v[0]["target"], json!(2));
    }
}
