//! Memoised sieve tables on disk.
//!
//! A cache file holds the 8-byte magic [`MAGIC`] followed by the values for
//! `n = 1..=limit` as little-endian `i64`.

use std::fs;
use std::path::{Path, PathBuf};

use super::{ArithName, ArithTable};
use crate::{Error, Result};

pub const MAGIC: &[u8; 8] = b"RADTBL01";

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "RADON_CENSUS_CACHE";

pub fn cache_path(dir: &Path, name: ArithName, limit: u64) -> PathBuf {
    dir.join(format!("{}-{}.tbl", name.as_str(), limit))
}

pub fn write_table(path: &Path, table: &ArithTable) -> Result<()> {
    let mut bytes = Vec::with_capacity(8 + 8 * table.limit() as usize);
    bytes.extend_from_slice(MAGIC);
    for &v in table.values() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, bytes)?;
    Ok(())
}

pub fn read_table(path: &Path, name: ArithName) -> Result<ArithTable> {
    let bad = |reason: &str| Error::Cache {
        path: path.display().to_string(),
        reason: reason.to_string(),
    };
    let bytes = fs::read(path)?;
    if bytes.len() < 16 || &bytes[..8] != MAGIC {
        return Err(bad("missing magic header"));
    }
    let body = &bytes[8..];
    if body.len() % 8 != 0 {
        return Err(bad("payload is not a whole number of 64-bit words"));
    }
    let mut values = Vec::with_capacity(body.len() / 8 + 1);
    values.push(0);
    values.extend(
        body.chunks_exact(8)
            .map(|c| i64::from_le_bytes(c.try_into().expect("chunk of 8"))),
    );
    Ok(ArithTable::from_parts(name, values))
}

/// Load `name` up to `limit` from `dir`, sieving and storing it on a miss.
pub fn load_or_sieve(dir: &Path, name: ArithName, limit: u64) -> Result<ArithTable> {
    let path = cache_path(dir, name, limit);
    if path.exists() {
        let table = read_table(&path, name)?;
        if table.limit() == limit {
            return Ok(table);
        }
    }
    let table = name.sieve(limit)?;
    fs::create_dir_all(dir)?;
    write_table(&path, &table)?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_hit() {
        let dir = tempfile::tempdir().unwrap();
        let first = load_or_sieve(dir.path(), ArithName::Phi, 500).unwrap();
        let path = cache_path(dir.path(), ArithName::Phi, 500);
        let bytes = fs::read(&path).unwrap();
        assert_eq!(&bytes[..8], MAGIC);
        assert_eq!(bytes.len(), 8 + 8 * 500);
        // value for n = 1 sits right after the header
        assert_eq!(i64::from_le_bytes(bytes[8..16].try_into().unwrap()), 1);
        let second = load_or_sieve(dir.path(), ArithName::Phi, 500).unwrap();
        assert_eq!(first.values(), second.values());
    }

    #[test]
    fn rejects_bad_magic() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("junk.tbl");
        fs::write(&path, [0u8; 24]).unwrap();
        assert!(matches!(
            read_table(&path, ArithName::Pi),
            Err(Error::Cache { .. })
        ));
    }
}
