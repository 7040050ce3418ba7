//! Exact JSON encoding of slice functions and sample points.
//!
//! Functions carry their algebra dimension and variable count:
//!
//! ```json
//! {"m":5,"n":2,"components":{"{}":[{"alpha":[4,0],"beta":[0,0],"coeff":{"1":"1/1"}}]}}
//! ```
//!
//! Component keys are subset names ("{}", "{1,2}"); each term lists its
//! α- and β-exponents per variable and a blade map from blade names ("1",
//! "e13", "e{1,13}") to exact rationals "p/q". Points are arrays of
//! paravector coordinates `{"alpha":"p/q","vector":{"e1":"p/q"}}`. All
//! maps serialize with sorted keys, so equal values produce identical
//! bytes.

use serde_json::{json, Map, Value};

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::scalar::{rat_from_str, rat_to_str, Rat, Scalar};
use crate::slice::{Point, SliceFunction};
use crate::stem::{format_subset, parse_subset, LaurentPoly, Monomial, StemPolynomial};

fn jerr(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

/// Blade name: "1" for the scalar, "e135" for single-digit indices,
/// "e{1,13}" when an index exceeds 9.
pub fn blade_to_str(mask: u32) -> String {
    if mask == 0 {
        return "1".into();
    }
    let idxs: Vec<u32> = (1..=32).filter(|i| mask & (1 << (i - 1)) != 0).collect();
    if idxs.iter().all(|&i| i <= 9) {
        let mut s = String::from("e");
        for i in idxs {
            s.push_str(&i.to_string());
        }
        s
    } else {
        format!(
            "e{{{}}}",
            idxs.iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// Inverse of [`blade_to_str`]; indices must be strictly increasing.
pub fn blade_from_str(s: &str) -> Result<u32> {
    if s == "1" {
        return Ok(0);
    }
    let rest = s
        .strip_prefix('e')
        .ok_or_else(|| jerr(format!("invalid blade name {s:?}")))?;
    let mut mask = 0u32;
    let mut last = 0u32;
    let mut push = |v: u32| -> Result<()> {
        if !(1..=32).contains(&v) {
            return Err(jerr(format!("blade index {v} out of range in {s:?}")));
        }
        if v <= last {
            return Err(jerr(format!(
                "blade indices must be strictly increasing in {s:?}"
            )));
        }
        last = v;
        mask |= 1 << (v - 1);
        Ok(())
    };
    if let Some(body) = rest.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
        for part in body.split(',') {
            let v: u32 = part
                .trim()
                .parse()
                .map_err(|_| jerr(format!("invalid blade index {part:?}")))?;
            push(v)?;
        }
    } else {
        if rest.is_empty() {
            return Err(jerr(format!("invalid blade name {s:?}")));
        }
        for ch in rest.chars() {
            let v = ch
                .to_digit(10)
                .ok_or_else(|| jerr(format!("invalid blade name {s:?}")))?;
            push(v)?;
        }
    }
    Ok(mask)
}

/// {"1":"p/q","e13":"p/q",…} with zero terms omitted.
pub fn multivector_to_json(x: &Multivector<Rat>) -> Value {
    let mut map = Map::new();
    for (mask, c) in x.terms() {
        map.insert(blade_to_str(mask), Value::String(rat_to_str(c)));
    }
    Value::Object(map)
}

pub fn multivector_from_json(m: u32, v: &Value) -> Result<Multivector<Rat>> {
    let obj = v
        .as_object()
        .ok_or_else(|| jerr("expected a blade-coefficient object"))?;
    let mut terms = Vec::new();
    for (key, val) in obj {
        let mask = blade_from_str(key)?;
        let s = val
            .as_str()
            .ok_or_else(|| jerr(format!("coefficient of {key} must be a \"p/q\" string")))?;
        let r = rat_from_str(s).ok_or_else(|| jerr(format!("invalid rational {s:?}")))?;
        terms.push((mask, r));
    }
    Multivector::from_terms(m, terms)
}

pub fn function_to_json(f: &SliceFunction<Rat>) -> Value {
    let n = f.n();
    let mut comps = Map::new();
    for (k, poly) in f.stem().components() {
        let mut terms = Vec::new();
        for (mono, c) in poly.terms() {
            let alpha: Vec<Value> = (1..=n).map(|h| json!(mono.alpha_exp(h))).collect();
            let beta: Vec<Value> = (1..=n).map(|h| json!(mono.beta_exp(h))).collect();
            let mut t = Map::new();
            t.insert("alpha".into(), Value::Array(alpha));
            t.insert("beta".into(), Value::Array(beta));
            t.insert("coeff".into(), multivector_to_json(c));
            terms.push(Value::Object(t));
        }
        if !terms.is_empty() {
            comps.insert(format_subset(k), Value::Array(terms));
        }
    }
    json!({ "m": f.m(), "n": n, "components": Value::Object(comps) })
}

pub fn function_from_json(v: &Value) -> Result<SliceFunction<Rat>> {
    let obj = v.as_object().ok_or_else(|| jerr("expected a function object"))?;
    let m = obj
        .get("m")
        .and_then(Value::as_u64)
        .ok_or_else(|| jerr("missing or invalid \"m\""))? as u32;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| jerr("missing or invalid \"n\""))? as u32;
    let mut stem = StemPolynomial::zero(m, n)?;
    if let Some(comps) = obj.get("components") {
        let comps = comps
            .as_object()
            .ok_or_else(|| jerr("\"components\" must be an object"))?;
        for (key, terms) in comps {
            let k = parse_subset(key, n)?;
            let arr = terms
                .as_array()
                .ok_or_else(|| jerr(format!("component {key} must be an array of terms")))?;
            let mut poly = LaurentPoly::zero(m, n)?;
            for t in arr {
                let to = t.as_object().ok_or_else(|| jerr("term must be an object"))?;
                let alpha = to
                    .get("alpha")
                    .and_then(Value::as_array)
                    .ok_or_else(|| jerr("term missing \"alpha\" exponent array"))?;
                let beta = to
                    .get("beta")
                    .and_then(Value::as_array)
                    .ok_or_else(|| jerr("term missing \"beta\" exponent array"))?;
                if alpha.len() != n as usize || beta.len() != n as usize {
                    return Err(jerr(format!("exponent arrays must have length {n}")));
                }
                let mut exps = Vec::with_capacity(2 * n as usize);
                for h in 0..n as usize {
                    for (name, arr) in [("alpha", alpha), ("beta", beta)] {
                        let e = arr[h]
                            .as_i64()
                            .and_then(|v| i32::try_from(v).ok())
                            .ok_or_else(|| {
                                jerr(format!("{name} exponents must be small integers"))
                            })?;
                        exps.push(e);
                    }
                }
                // Interleave as (α₁, β₁, α₂, β₂, …): pushed alpha then beta
                // per variable above.
                let coeff = multivector_from_json(
                    m,
                    to.get("coeff")
                        .ok_or_else(|| jerr("term missing \"coeff\""))?,
                )?;
                poly.add_term(Monomial(exps), coeff)?;
            }
            stem.add_to_component(k, &poly)?;
        }
    }
    SliceFunction::new_laurent(stem)
}

/// Array of paravector coordinates.
pub fn point_to_json(p: &Point<Rat>) -> Result<Value> {
    let mut coords = Vec::new();
    for x in p.coordinates() {
        let mut vector = Map::new();
        let mut alpha = <Rat as Scalar>::zero();
        for (mask, c) in x.terms() {
            if mask == 0 {
                alpha = c.clone();
            } else if mask.count_ones() == 1 {
                vector.insert(blade_to_str(mask), Value::String(rat_to_str(c)));
            } else {
                return Err(Error::NotAParavector);
            }
        }
        coords.push(json!({
            "alpha": rat_to_str(&alpha),
            "vector": Value::Object(vector),
        }));
    }
    Ok(Value::Array(coords))
}

pub fn point_from_json(m: u32, v: &Value) -> Result<Point<Rat>> {
    let arr = v
        .as_array()
        .ok_or_else(|| jerr("expected an array of coordinates"))?;
    let mut coords = Vec::new();
    for c in arr {
        let o = c
            .as_object()
            .ok_or_else(|| jerr("coordinate must be an object"))?;
        let mut terms = Vec::new();
        if let Some(a) = o.get("alpha") {
            let s = a
                .as_str()
                .ok_or_else(|| jerr("\"alpha\" must be a \"p/q\" string"))?;
            let r = rat_from_str(s).ok_or_else(|| jerr(format!("invalid rational {s:?}")))?;
            terms.push((0u32, r));
        }
        if let Some(vec) = o.get("vector") {
            let mv = multivector_from_json(m, vec)?;
            for (mask, coeff) in mv.terms() {
                if mask.count_ones() != 1 {
                    return Err(Error::NotAParavector);
                }
                terms.push((mask, coeff.clone()));
            }
        }
        coords.push(Multivector::from_terms(m, terms)?);
    }
    Point::new(coords)
}

/// Compact serialization; map keys are sorted, so equal values give equal
/// bytes.
pub fn to_canonical_string(v: &Value) -> String {
    serde_json::to_string(v).expect("plain JSON values always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{sample_points, StencilConfig};

    fn sc(m: u32, num: i64, den: i64) -> Multivector<Rat> {
        Multivector::scalar(m, <Rat as Scalar>::from_ratio(num, den)).unwrap()
    }

    #[test]
    fn blade_names_round_trip() {
        assert_eq!(blade_to_str(0), "1");
        assert_eq!(blade_to_str(0b101), "e13");
        assert_eq!(blade_to_str(1 | (1 << 12)), "e{1,13}");
        for mask in [0u32, 1, 0b101, 0b1110, 1 << 12, 1 | (1 << 12)] {
            assert_eq!(blade_from_str(&blade_to_str(mask)).unwrap(), mask);
        }
        assert!(blade_from_str("e31").is_err());
        assert!(blade_from_str("e0").is_err());
        assert!(blade_from_str("x").is_err());
        assert!(blade_from_str("e").is_err());
        assert!(blade_from_str("e{1,").is_err());
    }

    #[test]
    fn function_round_trip_with_clifford_coefficients() {
        let c = Multivector::from_terms(
            5,
            vec![
                (0u32, <Rat as Scalar>::from_ratio(2, 3)),
                (0b11u32, <Rat as Scalar>::from_ratio(-1, 7)),
            ],
        )
        .unwrap();
        let f = SliceFunction::monomial(5, &[4, 7], c)
            .unwrap()
            .add(&SliceFunction::monomial(5, &[1, 0], sc(5, 5, 1)).unwrap())
            .unwrap();
        let v = function_to_json(&f);
        let g = function_from_json(&v).unwrap();
        assert!(f.sub(&g).unwrap().is_zero());
        assert_eq!(to_canonical_string(&v), to_canonical_string(&function_to_json(&g)));
    }

    #[test]
    fn laurent_terms_survive_the_round_trip() {
        let mut poly = LaurentPoly::zero(5, 1).unwrap();
        poly.add_term(Monomial(vec![2, -2]), sc(5, 1, 1)).unwrap();
        let mut stem = StemPolynomial::zero(5, 1).unwrap();
        stem.set_component(0, poly).unwrap();
        let f = SliceFunction::new_laurent(stem).unwrap();
        let g = function_from_json(&function_to_json(&f)).unwrap();
        assert!(f.sub(&g).unwrap().is_zero());
        assert!(g.is_laurent());
    }

    #[test]
    fn example_document_parses() {
        let v: Value = serde_json::from_str(
            r#"{"m":5,"n":2,"components":{"{}":[{"alpha":[4,0],"beta":[0,0],"coeff":{"1":"1/1"}}]}}"#,
        )
        .unwrap();
        let f = function_from_json(&v).unwrap();
        assert_eq!((f.m(), f.n()), (5, 2));
        let back = function_to_json(&f);
        assert_eq!(to_canonical_string(&v), to_canonical_string(&back));
    }

    #[test]
    fn point_round_trip_on_sampler_output() {
        let cfg = StencilConfig::default();
        for p in sample_points(2, 5, &cfg).unwrap().into_iter().take(5) {
            let v = point_to_json(&p).unwrap();
            let q = point_from_json(5, &v).unwrap();
            for (a, b) in p.coordinates().iter().zip(q.coordinates()) {
                assert!(a.sub(b).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn malformed_documents_are_rejected() {
        let bad: Value = serde_json::from_str(r#"{"n":1,"components":{}}"#).unwrap();
        assert!(function_from_json(&bad).is_err());
        let bad: Value =
            serde_json::from_str(r#"{"m":5,"n":1,"components":{"{9}":[]}}"#).unwrap();
        assert!(function_from_json(&bad).is_err());
        let bad: Value = serde_json::from_str(
            r#"{"m":5,"n":1,"components":{"{}":[{"alpha":[1,2],"beta":[0],"coeff":{"1":"1/1"}}]}}"#,
        )
        .unwrap();
        assert!(function_from_json(&bad).is_err());
        let bad: Value = serde_json::from_str(
            r#"{"m":5,"n":1,"components":{"{}":[{"alpha":[1],"beta":[0],"coeff":{"1":"x"}}]}}"#,
        )
        .unwrap();
        assert!(function_from_json(&bad).is_err());
    }
}
