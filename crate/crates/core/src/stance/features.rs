//! Hashed bag-of-words node features.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::text;

pub const DEFAULT_FEATURE_DIM: usize = 256;

/// Signed feature hashing of lowercase unigram counts, L2-normalized.
///
/// Bucket and sign both come from one FNV-1a hash of the token: the low bits
/// pick the bucket, the top bit the sign. Empty text gives the zero vector.
pub fn hashed_features(text: &str, dim: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    for tok in text::tokens(text) {
        let h = text::fnv1a(tok.to_lowercase().as_bytes());
        let bucket = (h as usize) & (dim - 1);
        v[bucket] += if h >> 63 == 0 { 1.0 } else { -1.0 };
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    v
}

/// Feature vectors per user from their concatenated authored text.
///
/// Users present in `external` take that vector instead; every external
/// vector must have length `dim`.
pub fn extract_features(
    texts: &BTreeMap<String, String>,
    dim: usize,
    external: Option<&BTreeMap<String, Vec<f64>>>,
) -> Result<BTreeMap<String, Vec<f64>>> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::invalid(format!("feature dimension {dim} is not a power of two")));
    }
    if let Some(ext) = external {
        if let Some((u, v)) = ext.iter().find(|(_, v)| v.len() != dim) {
            return Err(Error::invalid(format!("embedding for {u} has length {}, expected {dim}", v.len())));
        }
    }
    Ok(texts
        .iter()
        .map(|(u, t)| {
            let v = external.and_then(|e| e.get(u)).cloned().unwrap_or_else(|| hashed_features(t, dim));
            (u.clone(), v)
        })
        .collect())
}

#[derive(Deserialize)]
struct EmbeddingLine {
    user_id: String,
    vector: Vec<f64>,
}

/// Reads JSON Lines `{"user_id": ..., "vector": [...]}`.
pub fn read_embeddings(path: &Path) -> Result<BTreeMap<String, Vec<f64>>> {
    let mut out = BTreeMap::new();
    for (line, l) in crate::io::lines(path)? {
        let e: EmbeddingLine = serde_json::from_str(&l).map_err(|e| Error::Malformed { line, message: e.to_string() })?;
        if e.vector.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numeric(format!("non-finite embedding for {}", e.user_id)));
        }
        out.insert(e.user_id, e.vector);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_is_zero_vector() {
        let v = hashed_features("", DEFAULT_FEATURE_DIM);
        assert_eq!(v.len(), 256);
        assert!(v.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn one_token_one_bucket() {
        let v = hashed_features("freedom", 256);
        let nz: Vec<_> = v.iter().filter(|x| **x != 0.0).collect();
        assert_eq!(nz.len(), 1);
        assert_eq!(nz[0].abs(), 1.0);
        let h = crate::text::fnv1a(b"freedom");
        assert_eq!(v[(h & 255) as usize], if h >> 63 == 0 { 1.0 } else { -1.0 });
    }

    #[test]
    fn deterministic_and_case_folded() {
        assert_eq!(hashed_features("Safe streets now", 64), hashed_features("safe STREETS now", 64));
        let norm: f64 = hashed_features("a b c d e f", 64).iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_checks() {
        let texts: BTreeMap<String, String> = [("u".to_string(), "hi".to_string())].into();
        assert!(extract_features(&texts, 100, None).is_err());
        let ext: BTreeMap<String, Vec<f64>> = [("u".to_string(), vec![1.0; 8])].into();
        assert!(extract_features(&texts, 16, Some(&ext)).is_err());
        let f = extract_features(&texts, 8, Some(&ext)).unwrap();
        assert_eq!(f["u"], vec![1.0; 8]);
    }
}
