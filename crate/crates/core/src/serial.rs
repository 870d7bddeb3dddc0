//! JSON encodings shared by the command-line tool: rationals as `"p/q"`
//! strings, index sets as sorted 1-based lists, polynomials as lists of
//! `{"coeff", "exps"}` records in canonical order.

use serde_json::{json, Value};

use crate::chambers::{ChamberSignature, IndexSet, LengthVector};
use crate::error::{Error, Result};
use crate::ratpoly::{format_rational, parse_rational, MultiPoly, Rational};

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => parse_rational(&n.to_string()),
        _ => Err(Error::Parse(format!("expected a rational, got {v}"))),
    }
}

pub fn set_to_json(s: &IndexSet) -> Value {
    json!(s.one_based())
}

pub fn set_from_json(n: usize, v: &Value) -> Result<IndexSet> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("expected a list of indices, got {v}")))?;
    let elems = items
        .iter()
        .map(|x| {
            x.as_u64()
                .map(|k| k as usize)
                .ok_or_else(|| Error::Parse(format!("bad index {x}")))
        })
        .collect::<Result<Vec<usize>>>()?;
    IndexSet::from_one_based(n, &elems)
}

pub fn signature_to_json(sig: &ChamberSignature) -> Value {
    json!(sig.to_lists())
}

pub fn signature_from_json(n: usize, v: &Value) -> Result<ChamberSignature> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("expected a list of sets, got {v}")))?;
    let sets = items
        .iter()
        .map(|s| set_from_json(n, s))
        .collect::<Result<Vec<_>>>()?;
    ChamberSignature::from_maximal_shorts(n, sets)
}

pub fn lengths_to_json(r: &LengthVector) -> Value {
    Value::Array(r.values().iter().map(rational_to_json).collect())
}

pub fn lengths_from_json(v: &Value) -> Result<LengthVector> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("expected a list of lengths, got {v}")))?;
    LengthVector::new(
        items
            .iter()
            .map(rational_from_json)
            .collect::<Result<_>>()?,
    )
}

pub fn poly_to_json(p: &MultiPoly) -> Value {
    Value::Array(
        p.terms()
            .map(|(e, c)| json!({"coeff": format_rational(c), "exps": e.exps()}))
            .collect(),
    )
}

pub fn poly_from_json(nvars: usize, v: &Value) -> Result<MultiPoly> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("expected a list of terms, got {v}")))?;
    let terms = items
        .iter()
        .map(|t| {
            let coeff = rational_from_json(&t["coeff"])?;
            let exps = t["exps"]
                .as_array()
                .ok_or_else(|| Error::Parse(format!("term without exponents: {t}")))?
                .iter()
                .map(|e| {
                    e.as_u64()
                        .and_then(|k| u32::try_from(k).ok())
                        .ok_or_else(|| Error::Parse(format!("bad exponent {e}")))
                })
                .collect::<Result<Vec<u32>>>()?;
            Ok((coeff, exps))
        })
        .collect::<Result<Vec<_>>>()?;
    MultiPoly::from_terms(nvars, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chambers::signature;
    use crate::ratpoly::rat;
    use crate::volume::volume_polynomial;

    #[test]
    fn polynomial_layout() {
        let x = |i| MultiPoly::var(2, i);
        let p = &(&x(0) * &x(0)).scale(&rat(1, 2)) - &x(1).scale(&rat(2, 1));
        assert_eq!(
            poly_to_json(&p).to_string(),
            r#"[{"coeff":"1/2","exps":[2,0]},{"coeff":"-2/1","exps":[0,1]}]"#
        );
        assert_eq!(poly_from_json(2, &poly_to_json(&p)).unwrap(), p);
    }

    #[test]
    fn round_trips() {
        let r = LengthVector::new(vec![
            rat(3, 20),
            rat(3, 20),
            rat(2, 5),
            rat(3, 20),
            rat(3, 20),
        ])
        .unwrap();
        assert_eq!(lengths_from_json(&lengths_to_json(&r)).unwrap(), r);
        let sig = signature(&r).unwrap();
        assert_eq!(
            signature_to_json(&sig).to_string(),
            "[[3],[1,2,4],[1,2,5],[1,4,5],[2,4,5]]"
        );
        assert_eq!(
            signature_from_json(5, &signature_to_json(&sig)).unwrap(),
            sig
        );
        let v = volume_polynomial(&sig);
        assert_eq!(
            &poly_from_json(5, &poly_to_json(v.poly())).unwrap(),
            v.poly()
        );
        for q in [rat(0, 1), rat(2, 1), rat(-7, 3)] {
            assert_eq!(rational_from_json(&rational_to_json(&q)).unwrap(), q);
        }
        assert_eq!(rational_to_json(&rat(0, 1)), json!("0/1"));
    }

    #[test]
    fn malformed_input() {
        assert!(poly_from_json(2, &json!([{"coeff": "1/2", "exps": [1]}])).is_err());
        assert!(poly_from_json(2, &json!({"coeff": "1"})).is_err());
        assert!(set_from_json(3, &json!([0])).is_err());
        assert!(rational_from_json(&json!(0.5)).is_err());
    }
}
