//! Binary model file.
//!
//! All integers little-endian:
//!
//! ```text
//! offset  size  field
//! 0       8     magic "ORDTNGRM"
//! 8       4     format version (u32, currently 1)
//! 12      4     order (u32)
//! 16      8     alpha (IEEE-754 bits, u64)
//! 24      8     number of context totals T (u64)
//! 32      24·T  T × (key u128, total u64), keys ascending
//! ..      8     number of gram counts G (u64)
//! ..      24·G  G × (key u128, count u64), keys ascending
//! ..      32    SHA-256 of every preceding byte
//! ```
//!
//! A key packs a byte string of length `len ≤ 15` as
//! `len << 120 | Σ bytes[j] << 8·(len − 1 − j)`.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use rustc_hash::FxHashMap;
use sha2::{Digest, Sha256};

use super::{NGramConfig, NGramModel};

pub const MAGIC: [u8; 8] = *b"ORDTNGRM";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ModelFileError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: not an n-gram model file (bad magic bytes)")]
    BadMagic { path: PathBuf },
    #[error("{path}: unsupported model format version {found} (this build reads version {FORMAT_VERSION})")]
    UnsupportedVersion { path: PathBuf, found: u32 },
    #[error("{path}: model file is truncated")]
    Truncated { path: PathBuf },
    #[error("{path}: model file is corrupt: {reason}")]
    Corrupt { path: PathBuf, reason: String },
}

impl ModelFileError {
    fn at(self, path: &Path) -> Self {
        let path = path.to_path_buf();
        match self {
            ModelFileError::Io { source, .. } => ModelFileError::Io { path, source },
            ModelFileError::BadMagic { .. } => ModelFileError::BadMagic { path },
            ModelFileError::UnsupportedVersion { found, .. } => ModelFileError::UnsupportedVersion { path, found },
            ModelFileError::Truncated { .. } => ModelFileError::Truncated { path },
            ModelFileError::Corrupt { reason, .. } => ModelFileError::Corrupt { path, reason },
        }
    }
}

struct HashingWriter<W> {
    inner: W,
    hasher: Sha256,
}

impl<W: Write> HashingWriter<W> {
    fn put(&mut self, bytes: &[u8]) -> io::Result<()> {
        self.hasher.update(bytes);
        self.inner.write_all(bytes)
    }
}

pub fn write_model<W: Write>(model: &NGramModel, out: W) -> io::Result<()> {
    let mut w = HashingWriter {
        inner: out,
        hasher: Sha256::new(),
    };
    w.put(&MAGIC)?;
    w.put(&FORMAT_VERSION.to_le_bytes())?;
    w.put(&(model.order as u32).to_le_bytes())?;
    w.put(&model.alpha.to_bits().to_le_bytes())?;
    for map in [&model.totals, &model.grams] {
        let entries = NGramModel::sorted_entries(map);
        w.put(&(entries.len() as u64).to_le_bytes())?;
        let mut buf = Vec::with_capacity(entries.len() * 24);
        for (k, c) in entries {
            buf.extend_from_slice(&k.to_le_bytes());
            buf.extend_from_slice(&c.to_le_bytes());
        }
        w.put(&buf)?;
    }
    let digest = w.hasher.finalize();
    w.inner.write_all(&digest)?;
    w.inner.flush()
}

pub fn save_model(model: &NGramModel, path: &Path) -> Result<(), ModelFileError> {
    let io_err = |source| ModelFileError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = fs::File::create(path).map_err(io_err)?;
    write_model(model, io::BufWriter::new(file)).map_err(io_err)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], ModelFileError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or(ModelFileError::Truncated { path: PathBuf::new() })?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, ModelFileError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, ModelFileError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn table(&mut self) -> Result<FxHashMap<u128, u64>, ModelFileError> {
        let n = self.u64()? as usize;
        let raw = self.take(n.checked_mul(24).ok_or(ModelFileError::Truncated { path: PathBuf::new() })?)?;
        let mut map = FxHashMap::with_capacity_and_hasher(n, Default::default());
        let mut prev: Option<u128> = None;
        for entry in raw.chunks_exact(24) {
            let k = u128::from_le_bytes(entry[..16].try_into().unwrap());
            let c = u64::from_le_bytes(entry[16..].try_into().unwrap());
            if prev.is_some_and(|p| p >= k) {
                return Err(corrupt("keys not strictly ascending"));
            }
            prev = Some(k);
            map.insert(k, c);
        }
        Ok(map)
    }
}

fn corrupt(reason: &str) -> ModelFileError {
    ModelFileError::Corrupt {
        path: PathBuf::new(),
        reason: reason.into(),
    }
}

pub fn read_model<R: Read>(mut input: R) -> Result<NGramModel, ModelFileError> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes).map_err(|source| ModelFileError::Io {
        path: PathBuf::new(),
        source,
    })?;
    if bytes.len() < MAGIC.len() || bytes[..MAGIC.len()] != MAGIC {
        return Err(ModelFileError::BadMagic { path: PathBuf::new() });
    }
    let mut cur = Cursor { bytes: &bytes, pos: 8 };
    let version = cur.u32()?;
    if version != FORMAT_VERSION {
        return Err(ModelFileError::UnsupportedVersion {
            path: PathBuf::new(),
            found: version,
        });
    }
    let order = cur.u32()? as usize;
    let alpha = f64::from_bits(cur.u64()?);
    let totals = cur.table()?;
    let grams = cur.table()?;
    let body_end = cur.pos;
    let digest = cur.take(32)?;
    if cur.pos != bytes.len() {
        return Err(corrupt("trailing bytes after checksum"));
    }
    if Sha256::digest(&bytes[..body_end]).as_slice() != digest {
        return Err(corrupt("checksum mismatch"));
    }
    let mut model = NGramModel::empty_with_limit(NGramConfig { order, alpha }, 15)
        .map_err(|e| ModelFileError::Corrupt {
            path: PathBuf::new(),
            reason: e.to_string(),
        })?;
    model.totals = totals;
    model.grams = grams;
    Ok(model)
}

pub fn load_model(path: &Path) -> Result<NGramModel, ModelFileError> {
    let file = fs::File::open(path).map_err(|source| ModelFileError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_model(io::BufReader::new(file)).map_err(|e| e.at(path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ngram::train;

    fn sample() -> NGramModel {
        train(&["abc abc", "the cat", "zzz"], NGramConfig { order: 3, alpha: 0.25 }).unwrap()
    }

    #[test]
    fn round_trip_scores_bit_identically() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.bin");
        let m = sample();
        save_model(&m, &path).unwrap();
        let back = load_model(&path).unwrap();
        assert_eq!(back, m);
        for text in ["abc", "the zzz", "q"] {
            assert_eq!(back.logprob(text.as_bytes()).to_bits(), m.logprob(text.as_bytes()).to_bits());
        }
        assert_eq!(back.content_hash(), m.content_hash());
    }

    #[test]
    fn serialization_is_deterministic() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_model(&sample(), &mut a).unwrap();
        write_model(&sample(), &mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bad_magic_names_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.bin");
        let mut bytes = Vec::new();
        write_model(&sample(), &mut bytes).unwrap();
        bytes[0] = b'X';
        fs::write(&path, &bytes).unwrap();
        let err = load_model(&path).unwrap_err();
        assert!(matches!(err, ModelFileError::BadMagic { .. }));
        assert!(err.to_string().contains("bad.bin"), "{err}");
    }

    #[test]
    fn version_mismatch_is_explicit() {
        let mut bytes = Vec::new();
        write_model(&sample(), &mut bytes).unwrap();
        bytes[8..12].copy_from_slice(&7u32.to_le_bytes());
        let err = read_model(bytes.as_slice()).unwrap_err();
        assert!(matches!(err, ModelFileError::UnsupportedVersion { found: 7, .. }));
        assert!(err.to_string().contains("unsupported model format version 7"));
    }

    #[test]
    fn truncation_and_corruption_are_detected() {
        let mut bytes = Vec::new();
        write_model(&sample(), &mut bytes).unwrap();
        for cut in [10, 30, bytes.len() / 2, bytes.len() - 1] {
            assert!(matches!(
                read_model(&bytes[..cut]).unwrap_err(),
                ModelFileError::Truncated { .. }
            ));
        }
        let mut flipped = bytes.clone();
        let mid = flipped.len() / 2;
        flipped[mid] ^= 0x40;
        assert!(matches!(read_model(flipped.as_slice()).unwrap_err(), ModelFileError::Corrupt { .. }));
    }
}
