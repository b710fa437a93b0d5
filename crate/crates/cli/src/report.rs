//! Machine-readable reports, one compact JSON object per line.
//!
//! Every float is printed with 17 significant digits so reports are
//! byte-identical across runs and parse back to the same doubles.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inputs {
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Inputs,
    pub outputs: Map<String, Value>,
    pub residuals: Map<String, Value>,
    pub status: Status,
    pub message: String,
}

impl Report {
    pub fn to_line(&self) -> String {
        to_json(self)
    }
}

/// Hashes a sequence of parts with length prefixes, so that part
/// boundaries are unambiguous.
pub fn digest<'a>(parts: impl IntoIterator<Item = &'a [u8]>) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

struct FixedDigits;

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedDigits);
    value.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_use_seventeen_digits() {
        assert_eq!(to_json(&json!([0.1, 1.0, -2.5])), "[1.0000000000000001e-1,1.0000000000000000e0,-2.5000000000000000e0]");
        assert_eq!(to_json(&json!({"n": 3})), r#"{"n":3}"#);
    }

    #[test]
    fn digest_separates_parts() {
        assert_ne!(digest([b"ab".as_slice(), b"c"]), digest([b"a".as_slice(), b"bc"]));
        assert_eq!(digest([b"x".as_slice()]).len(), 64);
    }
}
