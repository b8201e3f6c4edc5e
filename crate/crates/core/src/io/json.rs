use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::linalg::IntMatrix;
use crate::quadform::GramForm;

const SAFE: i64 = (1 << 53) - 1;

/// A JSON number when it is exactly representable as a double, otherwise a
/// decimal string.
pub fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) if (-SAFE..=SAFE).contains(&v) => json!(v),
        _ => Value::String(x.to_string()),
    }
}

pub fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(int_json).collect()))
            .collect(),
    )
}

fn list_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int_json).collect())
}

pub fn form_json(f: &GramForm) -> Value {
    json!({
        "basis": f.names,
        "absolute": f.absolute,
        "matrix": matrix_json(&f.matrix),
        "rank": f.rank,
        "det": int_json(&f.det),
        "snf": list_json(&f.snf),
        "positive_definite": f.positive_definite,
        "even": f.even,
        "absolute_det": int_json(&f.absolute_det),
        "absolute_snf": list_json(&f.absolute_snf),
        "even_absolute": f.even_absolute,
    })
}
