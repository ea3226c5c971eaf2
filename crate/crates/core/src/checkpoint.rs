//! Durable checkpoint container.
//!
//! Layout: 8-byte magic, `u32` format version (little endian), a sequence of
//! records each prefixed by its `u32` length, then the SHA-256 digest of
//! everything before it. Records hold JSON. Files are replaced atomically by
//! writing a sibling temporary file and renaming it over the target.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const MAGIC: &[u8; 8] = b"ICOSACKP";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("checkpoint i/o: {0}")]
    Io(#[from] io::Error),
    #[error("not a checkpoint file (bad magic)")]
    BadMagic,
    #[error("unsupported checkpoint version {found} (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error("checkpoint is truncated")]
    Truncated,
    #[error("checkpoint checksum mismatch")]
    Checksum,
    #[error("malformed checkpoint record: {0}")]
    Json(#[from] serde_json::Error),
    #[error("checkpoint has {0} records, expected {1}")]
    RecordCount(usize, usize),
    #[error("checkpoint does not match the requested run: {0}")]
    Mismatch(String),
}

pub fn encode(records: &[Vec<u8>]) -> Vec<u8> {
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    for r in records {
        buf.extend_from_slice(&(r.len() as u32).to_le_bytes());
        buf.extend_from_slice(r);
    }
    let digest = Sha256::digest(&buf);
    buf.extend_from_slice(&digest);
    buf
}

pub fn decode(bytes: &[u8]) -> Result<Vec<Vec<u8>>, CheckpointError> {
    if bytes.len() < MAGIC.len() + 4 + 32 {
        return Err(if bytes.starts_with(MAGIC) || bytes.len() < MAGIC.len() {
            CheckpointError::Truncated
        } else {
            CheckpointError::BadMagic
        });
    }
    if &bytes[..8] != MAGIC {
        return Err(CheckpointError::BadMagic);
    }
    let (body, digest) = bytes.split_at(bytes.len() - 32);
    if Sha256::digest(body).as_slice() != digest {
        return Err(CheckpointError::Checksum);
    }
    let version = u32::from_le_bytes(body[8..12].try_into().expect("4 bytes"));
    if version != FORMAT_VERSION {
        return Err(CheckpointError::Version {
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    let mut records = Vec::new();
    let mut rest = &body[12..];
    while !rest.is_empty() {
        if rest.len() < 4 {
            return Err(CheckpointError::Truncated);
        }
        let len = u32::from_le_bytes(rest[..4].try_into().expect("4 bytes")) as usize;
        rest = &rest[4..];
        if rest.len() < len {
            return Err(CheckpointError::Truncated);
        }
        records.push(rest[..len].to_vec());
        rest = &rest[len..];
    }
    Ok(records)
}

fn temp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".tmp");
    path.with_file_name(name)
}

/// Writes the records atomically.
pub fn write_records(path: &Path, records: &[Vec<u8>]) -> Result<(), CheckpointError> {
    let tmp = temp_path(path);
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&encode(records))?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<Vec<u8>>, CheckpointError> {
    decode(&fs::read(path)?)
}

/// Single-record JSON convenience wrappers.
pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CheckpointError> {
    write_records(path, &[serde_json::to_vec(value)?])
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T, CheckpointError> {
    let records = read_records(path)?;
    if records.len() != 1 {
        return Err(CheckpointError::RecordCount(records.len(), 1));
    }
    Ok(serde_json::from_slice(&records[0])?)
}
