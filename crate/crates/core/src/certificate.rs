//! Self-describing result files. The payload is hashed in canonical form
//! (compact JSON, keys sorted); the timestamp is outside the hash.

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema_version: u32,
    pub subcommand: String,
    pub config: Value,
    pub payload: Value,
    /// Hex SHA-256 of the canonical payload.
    pub evidence_hash: String,
    /// Seconds since the Unix epoch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

/// `serde_json::Value` keeps object keys sorted, so this is canonical.
pub fn canonical_json(v: &Value) -> String {
    serde_json::to_string(v).expect("values serialize")
}

pub fn evidence_hash(payload: &Value) -> String {
    hex::encode(Sha256::digest(canonical_json(payload).as_bytes()))
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Parse(e.to_string()))
}

impl CertificateFile {
    pub fn new<C: Serialize, P: Serialize>(subcommand: &str, config: &C, payload: &P) -> Result<Self> {
        let payload = to_value(payload)?;
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            subcommand: subcommand.to_string(),
            config: to_value(config)?,
            evidence_hash: evidence_hash(&payload),
            payload,
            timestamp: None,
        })
    }

    pub fn with_timestamp(mut self, t: u64) -> Self {
        self.timestamp = Some(t);
        self
    }

    pub fn payload_as<T: DeserializeOwned>(&self) -> Result<T> {
        serde_json::from_value(self.payload.clone()).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn check_hash(&self) -> Result<()> {
        if evidence_hash(&self.payload) != self.evidence_hash {
            return Err(Error::EvidenceMismatch("evidence hash".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&to_value(self).expect("serializable")).expect("values serialize");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: Self = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if f.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!("schema version {}", f.schema_version)));
        }
        f.check_hash()?;
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn hash_ignores_key_order_and_timestamp() {
        let a = CertificateFile::new("x", &json!({"p": 7}), &json!({"b": 1, "a": [1, 2]})).unwrap();
        let b = CertificateFile::new("x", &json!({"p": 7}), &json!({"a": [1, 2], "b": 1})).unwrap().with_timestamp(5);
        assert_eq!(a.evidence_hash, b.evidence_hash);
        let back = CertificateFile::from_json(&b.to_json()).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn tampering_is_detected() {
        let mut a = CertificateFile::new("x", &json!({}), &json!({"n": 1})).unwrap();
        a.payload = json!({"n": 2});
        assert!(CertificateFile::from_json(&a.to_json()).is_err());
    }
}
