//! Number formatting shared by the CSV and JSON writers.
//!
//! Every float is written with 17 significant digits, which round-trips any
//! `f64` exactly. Output looks like C's `%.17g` with trailing zeros removed,
//! plus a `.0` suffix on integral values so JSON readers keep them as floats.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

pub fn sig17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        let fixed = format!("{x:.decimals$}");
        let trimmed = if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.')
        } else {
            &fixed
        };
        if trimmed.contains('.') {
            trimmed.to_string()
        } else {
            format!("{trimmed}.0")
        }
    } else {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{m}e{exp}")
    }
}

/// `serialize_with` adapter writing a float through [`sig17`].
pub fn json_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    raw(sig17(*x), s)
}

pub(crate) fn raw<S: Serializer>(text: String, s: S) -> Result<S::Ok, S::Error> {
    let value = RawValue::from_string(text).map_err(serde::ser::Error::custom)?;
    value.serialize(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(sig17(1.5), "1.5");
        assert_eq!(sig17(2.0), "2.0");
        assert_eq!(sig17(0.0), "0.0");
        assert_eq!(sig17(-3.25), "-3.25");
        assert_eq!(sig17(0.1), "0.10000000000000001");
        assert_eq!(sig17(2.0 / 3.0), "0.66666666666666663");
        assert_eq!(sig17(1e-7), "9.9999999999999995e-8");
        assert_eq!(sig17(1e20), "1e20");
        assert_eq!(sig17(123456.0), "123456.0");
    }

    #[test]
    fn round_trips() {
        let mut x = 0.123_456_789_f64;
        for _ in 0..200 {
            x = x * 1.618_033_988_749_895 + 1e-3;
            assert_eq!(sig17(x).parse::<f64>().unwrap(), x);
            assert_eq!(sig17(1.0 / x).parse::<f64>().unwrap(), 1.0 / x);
        }
    }
}
