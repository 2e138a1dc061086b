//! Report serialization helpers.
//!
//! Floats are written with 17 significant digits in scientific notation so
//! reports are byte-stable across platforms and implementations.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// Formats a finite float as `d.dddddddddddddddde[-]x`; non-finite values
/// become `null`.
pub fn format_fixed17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_string()
    }
}

pub fn fixed17<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    let raw = RawValue::from_string(format_fixed17(*v)).map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}

pub fn fixed17_opt<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => fixed17(x, s),
        None => s.serialize_none(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Probe {
        #[serde(serialize_with = "fixed17")]
        x: f64,
        #[serde(serialize_with = "fixed17_opt")]
        y: Option<f64>,
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_fixed17(4.0 / 3.0), "1.3333333333333333e0");
        assert_eq!(format_fixed17(0.0), "0.0000000000000000e0");
        assert_eq!(format_fixed17(-0.375), "-3.7500000000000000e-1");
        assert_eq!(format_fixed17(f64::NAN), "null");
        let s = serde_json::to_string(&Probe { x: 0.1, y: None }).unwrap();
        assert_eq!(s, r#"{"x":1.0000000000000001e-1,"y":null}"#);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["x"].as_f64(), Some(0.1));
    }
}
