//! Small helpers for the JSON formats: integers may be numbers or decimal strings.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

pub use crate::group::{as_array, json_usize};

/// Parses `{"p":7,"k":1}` (either field may be a decimal string; `k` defaults to 1).
pub fn field_from_value(v: &Value) -> Result<Field> {
    let p = v.get("p").ok_or_else(|| Error::Schema("field.p missing".into()))?;
    let p = json_usize(p, "field.p")?;
    let k = match v.get("k") {
        Some(k) => json_usize(k, "field.k")?,
        None => 1,
    };
    if k == 0 {
        return Err(Error::Schema("field.k must be at least 1".into()));
    }
    let p: u32 = p.try_into().map_err(|_| Error::SizeCapExceeded { size: p as u64, cap: u32::MAX as u64 })?;
    Field::new(p, k as u32)
}

/// Parses a field element: a decimal integer (number or string) in the integer
/// encoding, or an array of `k` prime-field coefficients.
pub fn elem_from_value(f: &Field, v: &Value) -> Result<Elem> {
    match v {
        Value::Number(n) => {
            let i = n.as_i64().ok_or_else(|| Error::Schema(format!("bad field element {n}")))?;
            f.parse_elem(&i.to_string())
        }
        Value::String(s) => f.parse_elem(s),
        Value::Array(cs) => {
            let c = cs.iter().map(|x| json_usize(x, "coefficient").map(|c| c as u32)).collect::<Result<Vec<_>>>()?;
            f.from_coeffs(&c)
        }
        _ => Err(Error::Schema("field element must be an integer or coefficient list".into())),
    }
}

pub fn elem_to_value(x: Elem) -> Value {
    Value::String(x.0.to_string())
}

pub fn vec_to_value(v: &[Elem]) -> Value {
    Value::Array(v.iter().map(|&x| elem_to_value(x)).collect())
}

pub fn vec_from_value(f: &Field, v: &Value, what: &str) -> Result<Vec<Elem>> {
    as_array(v, what)?.iter().map(|x| elem_from_value(f, x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn parses_numbers_and_strings() {
        let f = field_from_value(&json!({"p": "3", "k": 2})).unwrap();
        assert_eq!(f.size(), 9);
        assert_eq!(elem_from_value(&f, &json!("5")).unwrap(), Elem(5));
        assert_eq!(elem_from_value(&f, &json!([2, 1])).unwrap(), Elem(5));
        assert!(elem_from_value(&f, &json!(9)).is_err());
        let f7 = field_from_value(&json!({"p": 7})).unwrap();
        assert_eq!(elem_from_value(&f7, &json!(-1)).unwrap(), Elem(6));
        assert_eq!(field_from_value(&json!({"p": 4})), Err(Error::NotPrime(4)));
    }
}
