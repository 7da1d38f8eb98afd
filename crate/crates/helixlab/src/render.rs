//! Canonical JSON: sorted keys, integers as JSON numbers of any size,
//! rationals as reduced `"p/q"` strings (`"p"` when integral), quadratic
//! numbers as `{a, b, disc, decimal}`.

use std::str::FromStr;

use helixlab_core::{Error, MukaiVector, QuadraticNumber, Rational};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

/// Significant digits of the decimal rendering of quadratic numbers.
pub const DECIMAL_DIGITS: usize = 30;

pub fn canonical_string(value: &Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("json value serialises");
    out.push('\n');
    out
}

pub fn int(x: &BigInt) -> Value {
    Value::Number(serde_json::Number::from_str(&x.to_string()).expect("integer literal"))
}

pub fn rational(x: &Rational) -> Value {
    if x.is_integer() {
        Value::String(x.numer().to_string())
    } else {
        Value::String(format!("{}/{}", x.numer(), x.denom()))
    }
}

pub fn quadratic(x: &QuadraticNumber) -> Value {
    json!({
        "a": rational(x.a()),
        "b": rational(x.b()),
        "disc": int(x.disc()),
        "decimal": x.to_decimal(DECIMAL_DIGITS),
    })
}

pub fn vector(v: &MukaiVector) -> Value {
    json!({
        "r": int(&v.r),
        "c1": v.c1.coords().iter().map(int).collect::<Vec<_>>(),
        "s": int(&v.s),
    })
}

/// Renders a rank-dependent invariant, or the undefined marker at rank 0.
pub fn or_undefined<T>(res: Result<T, Error>, f: impl FnOnce(T) -> Value) -> Result<Value, Error> {
    match res {
        Ok(x) => Ok(f(x)),
        Err(Error::RankZero { degree }) => Ok(Value::String(format!("undefined (rank 0), d={degree}"))),
        Err(e) => Err(e),
    }
}

pub fn object(entries: impl IntoIterator<Item = (&'static str, Value)>) -> Value {
    Value::Object(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}
