//! JSON action files.
//!
//! ```json
//! {"field": {"p": 5, "n": 1, "modulus": [0, 1]}, "kind": "group", "module": [5, 5],
//!  "u_basis": [[[1, 1], [0, 1]]], "w": [[0, 1], [4, 0]]}
//! ```
//! Lie actions carry `x_basis` and `y_basis` instead of `u_basis` and `w`.
//! Matrices are row-major with column `j` the image of the `j`-th generator.
//! Output is canonical: sorted keys, integers only.

use serde_json::{json, Map, Value};

use crate::abelian::{FinAbGroup, Homomorphism};
use crate::arith::{Field, DEFAULT_MAX_FIELD_SIZE};
use crate::error::{Error, Result};
use crate::presentation::{Action, GroupAction, LieAction};

fn get<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::malformed(format!("{path}/{key}"), "missing"))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::malformed(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::malformed(path, "expected an array"))
}

fn as_u64(v: &Value, path: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| Error::malformed(path, "expected a non-negative integer"))
}

fn as_i64(v: &Value, path: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| Error::malformed(path, "expected an integer"))
}

fn read_field(v: &Value, max_field_size: u64) -> Result<Field> {
    let obj = as_object(v, "/field")?;
    let p = as_u64(get(obj, "p", "/field")?, "/field/p")?;
    let n = as_u64(get(obj, "n", "/field")?, "/field/n")?;
    let n = u32::try_from(n).map_err(|_| Error::malformed("/field/n", "too large"))?;
    let field = Field::with_bound(p, n, max_field_size).map_err(|e| Error::malformed("/field", e.to_string()))?;
    if let Some(m) = obj.get("modulus") {
        let m: Vec<u64> = as_array(m, "/field/modulus")?
            .iter()
            .enumerate()
            .map(|(i, c)| as_u64(c, &format!("/field/modulus/{i}")))
            .collect::<Result<_>>()?;
        if m != field.desc().modulus {
            return Err(Error::malformed("/field/modulus", "not the canonical modulus"));
        }
    }
    Ok(field)
}

fn read_matrix(v: &Value, module: &FinAbGroup, path: &str) -> Result<Homomorphism> {
    let rows = as_array(v, path)?;
    let k = module.rank();
    if rows.len() != k {
        return Err(Error::malformed(path, format!("expected {k} rows, got {}", rows.len())));
    }
    let mut m = Vec::with_capacity(k);
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{path}/{i}");
        let row = as_array(row, &rp)?;
        if row.len() != k {
            return Err(Error::malformed(&rp, format!("expected {k} entries, got {}", row.len())));
        }
        m.push(row.iter().enumerate().map(|(j, x)| as_i64(x, &format!("{rp}/{j}"))).collect::<Result<Vec<_>>>()?);
    }
    Homomorphism::new(module, module, &m).map_err(|e| Error::malformed(path, e.to_string()))
}

fn read_matrices(obj: &Map<String, Value>, key: &str, module: &FinAbGroup) -> Result<Vec<Homomorphism>> {
    let path = format!("/{key}");
    as_array(get(obj, key, "")?, &path)?
        .iter()
        .enumerate()
        .map(|(i, m)| read_matrix(m, module, &format!("{path}/{i}")))
        .collect()
}

/// Parse an action file. Shapes and invertibility are checked, the relations are not.
pub fn read_action(v: &Value) -> Result<Action> {
    read_action_with_bound(v, DEFAULT_MAX_FIELD_SIZE)
}

pub fn read_action_with_bound(v: &Value, max_field_size: u64) -> Result<Action> {
    let obj = as_object(v, "")?;
    let field = read_field(get(obj, "field", "")?, max_field_size)?;
    let orders: Vec<u64> = as_array(get(obj, "module", "")?, "/module")?
        .iter()
        .enumerate()
        .map(|(i, d)| as_u64(d, &format!("/module/{i}")))
        .collect::<Result<_>>()?;
    let module = FinAbGroup::new(orders).map_err(|e| Error::malformed("/module", e.to_string()))?;
    let kind = get(obj, "kind", "")?.as_str().ok_or_else(|| Error::malformed("/kind", "expected a string"))?;
    let n = field.degree() as usize;
    let check_len = |v: &[Homomorphism], key: &str| {
        if v.len() != n {
            return Err(Error::malformed(format!("/{key}"), format!("expected {n} matrices, one per basis scalar")));
        }
        Ok(())
    };
    match kind {
        "group" => {
            let us = read_matrices(obj, "u_basis", &module)?;
            check_len(&us, "u_basis")?;
            let w = read_matrix(get(obj, "w", "")?, &module, "/w")?;
            GroupAction::unverified(&field, &module, us, w)
                .map(Action::Group)
                .map_err(|e| Error::malformed("", e.to_string()))
        }
        "lie" => {
            let xs = read_matrices(obj, "x_basis", &module)?;
            check_len(&xs, "x_basis")?;
            let ys = read_matrices(obj, "y_basis", &module)?;
            check_len(&ys, "y_basis")?;
            LieAction::unverified(&field, &module, xs, ys)
                .map(Action::Lie)
                .map_err(|e| Error::malformed("", e.to_string()))
        }
        other => Err(Error::malformed("/kind", format!("expected \"group\" or \"lie\", got \"{other}\""))),
    }
}

fn matrices(ms: &[Homomorphism]) -> Value {
    Value::from(ms.iter().map(|m| json!(m.matrix())).collect::<Vec<_>>())
}

pub fn write_action(a: &Action) -> Value {
    let mut obj = json!({
        "field": a.field().desc(),
        "kind": a.kind().as_str(),
        "module": a.module().orders(),
    });
    let map = obj.as_object_mut().expect("object");
    match a {
        Action::Group(g) => {
            map.insert("u_basis".into(), matrices(g.u_basis()));
            map.insert("w".into(), json!(g.w().matrix()));
        }
        Action::Lie(l) => {
            map.insert("x_basis".into(), matrices(l.x_basis()));
            map.insert("y_basis".into(), matrices(l.y_basis()));
        }
    }
    obj
}

/// Canonical text: pretty-printed, sorted keys, trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}
