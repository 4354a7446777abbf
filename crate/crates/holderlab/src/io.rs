//! On-disk artifacts: CSV tables, JSON reports (always with a
//! `schema_version` field), and a compact binary path format. All writes are
//! atomic (temp file + rename) so partially written outputs never appear.

use crate::error::{Error, Result};
use crate::synthesis::{Provenance, SampledPath};
use serde::Serialize;
use std::io::{Read, Write};
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

pub const SCHEMA_VERSION: u32 = 1;
const PATH_MAGIC: &[u8; 4] = b"HLDF";
const PATH_FORMAT_VERSION: u32 = 1;

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

/// Write bytes atomically: a uniquely named temp file in the target directory,
/// then rename over the destination.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp.{}.{}",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("out"),
        std::process::id(),
        TMP_COUNTER.fetch_add(1, Ordering::Relaxed),
    ));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Serialize a report as JSON with the schema version stamped in.
pub fn write_json<T: Serialize>(path: &Path, payload: &T) -> Result<()> {
    let mut value = serde_json::to_value(payload)
        .map_err(|e| Error::Config(format!("serialization failed: {e}")))?;
    if let Some(obj) = value.as_object_mut() {
        obj.insert("schema_version".into(), SCHEMA_VERSION.into());
    } else {
        value = serde_json::json!({ "schema_version": SCHEMA_VERSION, "payload": value });
    }
    let text = serde_json::to_string_pretty(&value)
        .map_err(|e| Error::Config(format!("serialization failed: {e}")))?;
    write_atomic(path, text.as_bytes())
}

/// Write a CSV table with a header row. Cells are formatted by the caller.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        out.push_str(&row.join(","));
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

/// FNV-1a hash of the provenance JSON, stamped into the binary header so a
/// reader can detect mismatched metadata.
fn provenance_hash(p: &Provenance) -> u64 {
    let text = serde_json::to_string(p).expect("provenance serializes");
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Binary path format: magic, format version, grid scale, start index, length,
/// seed, provenance hash, then the raw little-endian f64 samples.
pub fn write_path_binary(path: &Path, sampled: &SampledPath) -> Result<()> {
    write_atomic(path, &path_binary_bytes(sampled))
}

/// The exact bytes [`write_path_binary`] produces.
pub fn path_binary_bytes(sampled: &SampledPath) -> Vec<u8> {
    let mut buf = Vec::with_capacity(44 + 8 * sampled.values.len());
    buf.extend_from_slice(PATH_MAGIC);
    buf.extend_from_slice(&PATH_FORMAT_VERSION.to_le_bytes());
    buf.extend_from_slice(&sampled.j_grid.to_le_bytes());
    buf.extend_from_slice(&sampled.i_lo.to_le_bytes());
    buf.extend_from_slice(&(sampled.values.len() as u64).to_le_bytes());
    buf.extend_from_slice(&sampled.provenance.seed.to_le_bytes());
    buf.extend_from_slice(&provenance_hash(&sampled.provenance).to_le_bytes());
    for v in &sampled.values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    buf
}

/// Read back a binary path; the provenance itself lives in the sidecar JSON,
/// so the returned provenance is the supplied one, checked against the header
/// hash.
pub fn read_path_binary(path: &Path, provenance: Provenance) -> Result<SampledPath> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    let fail = |msg: &str| Error::Config(format!("{}: {msg}", path.display()));
    if bytes.len() < 44 || &bytes[0..4] != PATH_MAGIC {
        return Err(fail("not a holderlab path file"));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    if u32_at(4) != PATH_FORMAT_VERSION {
        return Err(fail("unsupported format version"));
    }
    let j_grid = u32_at(8);
    let i_lo = i64::from_le_bytes(bytes[12..20].try_into().unwrap());
    let len = u64_at(20) as usize;
    let seed = u64_at(28);
    let hash = u64_at(36);
    if bytes.len() != 44 + 8 * len {
        return Err(fail("truncated sample payload"));
    }
    if seed != provenance.seed || hash != provenance_hash(&provenance) {
        return Err(fail("provenance does not match file header"));
    }
    let values = bytes[44..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(SampledPath { j_grid, i_lo, values, provenance })
}

/// Write path samples as plot-ready CSV (`i`, `t`, `value`).
pub fn write_path_csv(path: &Path, sampled: &SampledPath) -> Result<()> {
    let step = (-(sampled.j_grid as f64)).exp2();
    let rows: Vec<Vec<String>> = sampled
        .values
        .iter()
        .enumerate()
        .map(|(idx, v)| {
            let i = sampled.i_lo + idx as i64;
            vec![i.to_string(), format!("{}", i as f64 * step), format!("{v:.17e}")]
        })
        .collect();
    write_csv(path, &["i", "t", "value"], &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randomness::Law;
    use crate::synthesis::Window;

    fn sample_path() -> SampledPath {
        SampledPath {
            j_grid: 4,
            i_lo: 0,
            values: (0..=16).map(|i| (i as f64 * 0.37).sin()).collect(),
            provenance: Provenance {
                series: "test".into(),
                seed: 99,
                law: Law::StandardGaussian,
                family: "db4".into(),
                j_max: 4,
                exponent: "h=0.5".into(),
                window: Window::UNIT,
                tail_bound: 0.1,
            },
        }
    }

    #[test]
    fn binary_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("p.hldf");
        let p = sample_path();
        write_path_binary(&file, &p).unwrap();
        let back = read_path_binary(&file, p.provenance.clone()).unwrap();
        assert_eq!(back.j_grid, p.j_grid);
        assert_eq!(back.i_lo, p.i_lo);
        for (a, b) in p.values.iter().zip(&back.values) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        // same content written twice -> byte-identical files
        let file2 = dir.path().join("p2.hldf");
        write_path_binary(&file2, &p).unwrap();
        assert_eq!(std::fs::read(&file).unwrap(), std::fs::read(&file2).unwrap());
    }

    #[test]
    fn mismatched_provenance_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("p.hldf");
        let p = sample_path();
        write_path_binary(&file, &p).unwrap();
        let mut other = p.provenance.clone();
        other.exponent = "h=0.7".into();
        assert!(read_path_binary(&file, other).is_err());
    }

    #[test]
    fn json_reports_carry_schema_version() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("r.json");
        #[derive(Serialize)]
        struct R {
            x: u32,
        }
        write_json(&file, &R { x: 7 }).unwrap();
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["x"], 7);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("t.csv");
        write_csv(&file, &["a", "b"], &[vec!["1".into(), "2".into()]]).unwrap();
        let text = std::fs::read_to_string(&file).unwrap();
        assert_eq!(text, "a,b\n1,2\n");
    }

    #[test]
    fn atomic_write_leaves_no_temp_files() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("x.bin");
        write_atomic(&file, b"hello").unwrap();
        write_atomic(&file, b"world").unwrap();
        let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(entries.len(), 1);
        assert_eq!(std::fs::read(&file).unwrap(), b"world");
    }
}
