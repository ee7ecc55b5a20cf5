//! Versioned on-disk cache for critical-value surfaces with an integrity
//! checksum over the serialized payload.

use super::CriticalValueSurface;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheRecord {
    schema_version: u32,
    surface: CriticalValueSurface,
    checksum: String,
}

fn payload_checksum(surface: &CriticalValueSurface) -> Result<String> {
    let canonical = serde_json::to_vec(surface)
        .map_err(|e| Error::NumericalFailure(format!("serialization failed: {e}")))?;
    Ok(hex_digest(&canonical))
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Cache key: every field that identifies the simulation, including the
/// seed, so surfaces from different runs never collide.
fn cache_key(surface: &CriticalValueSurface) -> Result<String> {
    let key = serde_json::to_vec(&(
        surface.test_family.label(),
        &surface.spec_key,
        &surface.sample_size,
        &surface.break_fractions,
        &surface.provenance,
    ))
    .map_err(|e| Error::NumericalFailure(format!("key serialization failed: {e}")))?;
    Ok(hex_digest(&key)[..24].to_string())
}

/// Persists a surface under a content-derived file name inside `dir`.
pub fn surface_cache_store(surface: &CriticalValueSurface, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let record = CacheRecord {
        schema_version: SCHEMA_VERSION,
        surface: surface.clone(),
        checksum: payload_checksum(surface)?,
    };
    let path = dir.join(format!("cv_{}.json", cache_key(surface)?));
    let body = serde_json::to_string_pretty(&record)
        .map_err(|e| Error::NumericalFailure(format!("serialization failed: {e}")))?;
    fs::write(&path, body)?;
    Ok(path)
}

/// Loads a surface, verifying the schema version and integrity checksum.
pub fn surface_cache_load(path: &Path) -> Result<CriticalValueSurface> {
    let body = fs::read_to_string(path)?;
    let record: CacheRecord = serde_json::from_str(&body).map_err(|e| Error::SchemaMismatch {
        reason: format!("unreadable cache record: {e}"),
    })?;
    if record.schema_version != SCHEMA_VERSION {
        return Err(Error::SchemaMismatch {
            reason: format!(
                "cache schema {} does not match supported version {SCHEMA_VERSION}",
                record.schema_version
            ),
        });
    }
    let expected = payload_checksum(&record.surface)?;
    if expected != record.checksum {
        return Err(Error::SchemaMismatch {
            reason: "integrity checksum mismatch".into(),
        });
    }
    Ok(record.surface)
}
