use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use cdl_core::poly::JacobiExpansion;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Everything needed to reproduce and audit one invocation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub settings: Settings,
    /// `true` when the checked property holds; mirrors exit code 0 vs 1.
    pub verdict: bool,
    pub summary: String,
    pub result: serde_json::Value,
    pub timings_ms: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub tol: f64,
    pub cutoff: u32,
    pub threads: Option<usize>,
    pub slow: bool,
}

/// An exact rational as numerator/denominator plus a decimal rendering.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rational {
    pub num: String,
    pub den: String,
    pub decimal: f64,
}

impl From<&BigRational> for Rational {
    fn from(q: &BigRational) -> Self {
        Rational { num: q.numer().to_string(), den: q.denom().to_string(), decimal: q.to_f64().unwrap_or(f64::NAN) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Complex {
    fn from(z: Complex64) -> Self {
        Complex { re: z.re, im: z.im }
    }
}

pub fn expansion_map(e: &JacobiExpansion) -> BTreeMap<String, Rational> {
    e.iter().map(|(deg, c)| (deg.to_string(), Rational::from(c))).collect()
}

/// Reads a file and records its digest.
pub fn read_input(path: &Path, inputs: &mut Vec<InputDigest>) -> Result<String> {
    let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    inputs.push(InputDigest {
        path: path.display().to_string(),
        bytes: bytes.len() as u64,
        sha256: format!("{:x}", Sha256::digest(&bytes)),
    });
    String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
}

/// Wall-clock stages in insertion order of their names.
#[derive(Default)]
pub struct Timer {
    pub stages: BTreeMap<String, f64>,
}

impl Timer {
    pub fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t = std::time::Instant::now();
        let out = f();
        self.stages.insert(name.to_string(), t.elapsed().as_secs_f64() * 1e3);
        out
    }
}

pub fn fmt_complex(z: Complex64) -> String {
    let clean = |v: f64| if v.abs() < 5e-13 { 0.0 } else { v };
    format!("{:.10}{:+.10}i", clean(z.re), clean(z.im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn rational_rendering() {
        let q = BigRational::new(BigInt::from(-27), BigInt::from(256));
        let r = Rational::from(&q);
        assert_eq!((r.num.as_str(), r.den.as_str()), ("-27", "256"));
        assert_eq!(r.decimal, -27.0 / 256.0);
    }

    #[test]
    fn report_json_roundtrip() {
        let report = RunReport {
            tool: "cdl".into(),
            version: "0".into(),
            command: vec!["cdl".into(), "verify".into()],
            inputs: vec![InputDigest { path: "x".into(), bytes: 3, sha256: "ab".into() }],
            settings: Settings { tol: 1e-7, cutoff: 8, threads: Some(1), slow: false },
            verdict: true,
            summary: "ok".into(),
            result: serde_json::json!({"a": [1, 2.5, "q"]}),
            timings_ms: BTreeMap::from([("total".to_string(), 1.25)]),
        };
        let text = serde_json::to_string(&report).unwrap();
        let back: RunReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
    }
}
