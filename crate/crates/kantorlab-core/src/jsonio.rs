//! Byte-stable JSON import/export for pairs and graded Lie algebras.
//!
//! Pair files: `{ "field", "dims": {"minus", "plus"}, "sp_labels"?, "products": [...] }`
//! with product entries sorted by `(sigma, i, j, k)` and inner terms by `a`.
//! Lie files: `{ "field", "dim", "degrees", "brackets": [...] }` with `i < j`.
//! Scalars serialize as `"a/b"` in lowest terms (plain `"a"` for integers);
//! prime-field residues as their canonical representative.

use crate::field::Field;
use crate::kantor::KantorAlgebra;
use crate::lie::{GradedLieAlgebra, GradingKind};
use crate::pairs::{Sign, TrilinearPair};
use crate::{Error, Result};
use serde_json::{json, Map, Value};

pub fn pair_to_json(p: &TrilinearPair) -> Value {
    let mut products = Vec::new();
    for sigma in Sign::BOTH {
        for ((i, j, k), terms) in p.tensor(sigma) {
            let out: Vec<Value> = terms
                .iter()
                .map(|(a, c)| json!({"a": a, "c": c.to_canonical_string()}))
                .collect();
            products.push(json!({
                "sigma": sigma.symbol(),
                "i": i,
                "j": j,
                "k": k,
                "out": out,
            }));
        }
    }
    products.sort_by_key(|v| {
        (
            v["sigma"].as_str().unwrap().to_string(),
            v["i"].as_u64().unwrap(),
            v["j"].as_u64().unwrap(),
            v["k"].as_u64().unwrap(),
        )
    });
    let mut root = Map::new();
    root.insert("field".into(), json!(p.field.to_string()));
    root.insert(
        "dims".into(),
        json!({"minus": p.dim(Sign::Minus), "plus": p.dim(Sign::Plus)}),
    );
    if let Some(labels) = &p.sp_labels {
        root.insert(
            "sp_labels".into(),
            json!({"minus": labels[0], "plus": labels[1]}),
        );
    }
    root.insert("products".into(), Value::Array(products));
    Value::Object(root)
}

pub fn pair_from_json(v: &Value) -> Result<TrilinearPair> {
    let field = parse_field(v)?;
    let dims = v
        .get("dims")
        .ok_or_else(|| Error::Parse("pair file missing dims".into()))?;
    let dm = get_usize(dims, "minus")?;
    let dp = get_usize(dims, "plus")?;
    let mut p = TrilinearPair::new(field, dm, dp);
    if let Some(labels) = v.get("sp_labels") {
        let minus = get_i64_list(labels, "minus")?;
        let plus = get_i64_list(labels, "plus")?;
        if minus.len() != dm || plus.len() != dp {
            return Err(Error::Parse("sp_labels length mismatch".into()));
        }
        p.sp_labels = Some([minus, plus]);
    }
    let prods = v
        .get("products")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("pair file missing products".into()))?;
    for entry in prods {
        let sigma = Sign::from_symbol(
            entry
                .get("sigma")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("product entry missing sigma".into()))?,
        )?;
        let i = get_usize(entry, "i")?;
        let j = get_usize(entry, "j")?;
        let k = get_usize(entry, "k")?;
        let out = entry
            .get("out")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("product entry missing out".into()))?;
        let mut terms = Vec::new();
        for t in out {
            let a = get_usize(t, "a")?;
            let c = field.parse_scalar(
                t.get("c")
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::Parse("term missing coefficient".into()))?,
            )?;
            terms.push((a, c));
        }
        if i >= p.dim(sigma) || k >= p.dim(sigma) || j >= p.dim(sigma.flip()) {
            return Err(Error::Parse("product index out of range".into()));
        }
        p.set_basis_product(sigma, i, j, k, terms);
    }
    Ok(p)
}

pub fn lie_to_json(l: &GradedLieAlgebra) -> Value {
    lie_to_json_with_embedding(l, None)
}

pub fn kantor_to_json(k: &KantorAlgebra) -> Value {
    lie_to_json_with_embedding(&k.algebra, Some(&k.embedding))
}

fn lie_to_json_with_embedding(l: &GradedLieAlgebra, embedding: Option<&[Vec<usize>; 2]>) -> Value {
    let degrees: Vec<Value> = l.degrees.iter().map(|d| json!([d.0, d.1])).collect();
    let mut brackets = Vec::new();
    for ((i, j), terms) in l.stored_brackets() {
        let out: Vec<Value> = terms
            .iter()
            .map(|(k, c)| json!({"k": k, "c": c.to_canonical_string()}))
            .collect();
        brackets.push(json!({"i": i, "j": j, "out": out}));
    }
    let mut root = Map::new();
    root.insert("field".into(), json!(l.field.to_string()));
    root.insert("dim".into(), json!(l.dim));
    root.insert(
        "grading".into(),
        json!(match l.grading {
            GradingKind::Z => "Z",
            GradingKind::Z2 => "Z2",
        }),
    );
    root.insert("degrees".into(), Value::Array(degrees));
    root.insert("brackets".into(), Value::Array(brackets));
    if let Some(emb) = embedding {
        root.insert("embedding".into(), json!({"minus": emb[0], "plus": emb[1]}));
    }
    Value::Object(root)
}

pub fn lie_from_json(v: &Value) -> Result<(GradedLieAlgebra, Option<[Vec<usize>; 2]>)> {
    let field = parse_field(v)?;
    let dim = get_usize(v, "dim")?;
    let degrees_v = v
        .get("degrees")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("lie file missing degrees".into()))?;
    if degrees_v.len() != dim {
        return Err(Error::Parse("degrees length mismatch".into()));
    }
    let mut degrees = Vec::with_capacity(dim);
    for d in degrees_v {
        let arr = d
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| Error::Parse("degree must be a pair".into()))?;
        let d1 = arr[0]
            .as_i64()
            .ok_or_else(|| Error::Parse("bad degree".into()))?;
        let d2 = arr[1]
            .as_i64()
            .ok_or_else(|| Error::Parse("bad degree".into()))?;
        degrees.push((d1, d2));
    }
    let grading = match v.get("grading").and_then(Value::as_str) {
        Some("Z2") => GradingKind::Z2,
        _ => GradingKind::Z,
    };
    let mut l = GradedLieAlgebra::new(field, degrees, grading);
    let brackets = v
        .get("brackets")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("lie file missing brackets".into()))?;
    for entry in brackets {
        let i = get_usize(entry, "i")?;
        let j = get_usize(entry, "j")?;
        if i >= j || j >= dim {
            return Err(Error::Parse("bracket keys must satisfy i < j < dim".into()));
        }
        let out = entry
            .get("out")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("bracket entry missing out".into()))?;
        let mut terms = Vec::new();
        for t in out {
            let k = get_usize(t, "k")?;
            if k >= dim {
                return Err(Error::Parse("bracket target out of range".into()));
            }
            let c = field.parse_scalar(
                t.get("c")
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::Parse("term missing coefficient".into()))?,
            )?;
            terms.push((k, c));
        }
        l.set_bracket(i, j, terms);
    }
    let embedding = match v.get("embedding") {
        None => None,
        Some(e) => {
            let minus: Vec<usize> = get_usize_list(e, "minus")?;
            let plus: Vec<usize> = get_usize_list(e, "plus")?;
            Some([minus, plus])
        }
    };
    Ok((l, embedding))
}

/// Renders a value deterministically (pretty, trailing newline).
pub fn to_stable_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("valid json");
    s.push('\n');
    s
}

fn parse_field(v: &Value) -> Result<Field> {
    Field::parse(
        v.get("field")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("file missing field".into()))?,
    )
}

fn get_usize(v: &Value, key: &str) -> Result<usize> {
    v.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| Error::Parse(format!("missing or bad {key:?}")))
}

fn get_i64_list(v: &Value, key: &str) -> Result<Vec<i64>> {
    v.get(key)
        .and_then(Value::as_array)
        .map(|a| a.iter().filter_map(Value::as_i64).collect::<Vec<_>>())
        .filter(|l: &Vec<i64>| Some(l.len()) == v.get(key).and_then(Value::as_array).map(|a| a.len()))
        .ok_or_else(|| Error::Parse(format!("missing or bad {key:?}")))
}

fn get_usize_list(v: &Value, key: &str) -> Result<Vec<usize>> {
    Ok(get_i64_list(v, key)?.into_iter().map(|x| x as usize).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_round_trip_and_stability() {
        let f = Field::Q;
        let mut p = TrilinearPair::new(f, 2, 2);
        p.set_basis_product(Sign::Plus, 0, 1, 1, vec![(0, f.parse_scalar("1/2").unwrap())]);
        p.set_basis_product(Sign::Minus, 1, 0, 0, vec![(1, f.from_i64(-3))]);
        p.sp_labels = Some([vec![0, 1], vec![0, 1]]);
        let v = pair_to_json(&p);
        let s1 = to_stable_string(&v);
        let q = pair_from_json(&v).unwrap();
        assert_eq!(p, q);
        let s2 = to_stable_string(&pair_to_json(&q));
        assert_eq!(s1, s2);
    }

    #[test]
    fn lie_round_trip_with_embedding() {
        let f = Field::gf(7).unwrap();
        let mut l = GradedLieAlgebra::new(f, vec![(-1, 0), (0, 0), (1, 0)], GradingKind::Z);
        l.set_bracket(1, 2, vec![(2, f.from_i64(2))]);
        l.set_bracket(1, 0, vec![(0, f.from_i64(-2))]);
        l.set_bracket(2, 0, vec![(1, f.one())]);
        let k = KantorAlgebra {
            algebra: l.clone(),
            embedding: [vec![0], vec![2]],
            s_block: crate::linalg::Subspace::zero(f, 0),
        };
        let v = kantor_to_json(&k);
        let (l2, emb) = lie_from_json(&v).unwrap();
        assert_eq!(l, l2);
        assert_eq!(emb, Some([vec![0], vec![2]]));
    }

    #[test]
    fn malformed_files_are_rejected() {
        let v = json!({"field": "Q", "dims": {"minus": 1, "plus": 1}});
        assert!(pair_from_json(&v).is_err());
        let v = json!({"field": "GF(4)", "dims": {"minus": 1, "plus": 1}, "products": []});
        assert!(pair_from_json(&v).is_err());
        let v = json!({"field": "Q", "dim": 2, "degrees": [[0,0],[0,0]],
                       "brackets": [{"i": 1, "j": 1, "out": []}]});
        assert!(lie_from_json(&v).is_err());
    }
}
