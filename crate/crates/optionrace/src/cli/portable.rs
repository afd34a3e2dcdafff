//! Number rendering for emitted files. Everything written to CSV, JSON, or
//! SVG passes through here: finite values round to 9 significant decimal
//! digits so reruns are byte-identical, and non-finite values become the
//! strings "inf", "-inf", and "nan" so the files stay portable JSON/CSV.

use serde::{Serialize, Serializer};

/// Rounds to 9 significant decimal digits by way of the decimal string, so
/// the stored value is exactly the one a reader parsing the file recovers.
pub fn round_sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().expect("decimal round-trip")
}

/// One number as it appears in a file. Magnitudes outside [1e-4, 1e15) use
/// exponent notation; plain decimal expansion of such values would bury the
/// nine kept digits in zero padding.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x == f64::INFINITY {
        "inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        let r = round_sig9(x);
        if r != 0.0 && !(1e-4..1e15).contains(&r.abs()) {
            format!("{r:e}")
        } else {
            r.to_string()
        }
    }
}

/// A float that serializes the way [`fmt_f64`] prints: a rounded number when
/// finite, a quoted string when not. JSON itself has no infinity literal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl From<f64> for Num {
    fn from(x: f64) -> Self {
        Num(x)
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(round_sig9(self.0))
        } else {
            s.serialize_str(&fmt_f64(self.0))
        }
    }
}

/// `Option<f64>` lifted into [`Num`] for artifact structs.
pub fn opt(x: Option<f64>) -> Option<Num> {
    x.map(Num)
}
