//! On-disk cache for [`CohitBasis`].
//!
//! File `cohit_k{K}_n{N}.bin`, all integers little-endian:
//!
//! ```text
//! magic            7 bytes  "COHIT01"
//! k                u32
//! n                u32
//! monomial count   u64
//! basis length     u64
//! reducer length   u64
//! basis            basis length x k x u32 exponents
//! reducer          reducer length x (k x u32 exponents, ceil(basis length / 64) x u64 words)
//! checksum         u64 FNV-1a over every preceding byte
//! ```
//!
//! The monomial order itself is not stored; it is regenerated from `(k, n)`
//! and its length checked against the stored count.

use std::fs;
use std::hash::Hasher;
use std::path::{Path, PathBuf};

use fnv::FnvHasher;

use crate::error::CacheError;
use crate::gf2::BitVec;
use crate::monomial::{enumerate_monomials, Monomial};
use crate::reducer::CohitBasis;

pub const MAGIC: &[u8; 7] = b"COHIT01";

pub fn cache_path(dir: &Path, k: usize, n: u32) -> PathBuf {
    dir.join(format!("cohit_k{k}_n{n}.bin"))
}

fn checksum(bytes: &[u8]) -> u64 {
    let mut h = FnvHasher::default();
    h.write(bytes);
    h.finish()
}

pub fn encode(cb: &CohitBasis) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(cb.k() as u32).to_le_bytes());
    out.extend_from_slice(&cb.n().to_le_bytes());
    out.extend_from_slice(&(cb.monomial_order().len() as u64).to_le_bytes());
    out.extend_from_slice(&(cb.dim() as u64).to_le_bytes());
    out.extend_from_slice(&(cb.reducer_entries().len() as u64).to_le_bytes());
    let put_monomial = |out: &mut Vec<u8>, m: &Monomial| {
        for e in m.exponents() {
            out.extend_from_slice(&e.to_le_bytes());
        }
    };
    for m in cb.basis() {
        put_monomial(&mut out, m);
    }
    for (m, coords) in cb.reducer_entries() {
        put_monomial(&mut out, m);
        for w in coords.words() {
            out.extend_from_slice(&w.to_le_bytes());
        }
    }
    let sum = checksum(&out);
    out.extend_from_slice(&sum.to_le_bytes());
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, len: usize) -> Result<&[u8], CacheError> {
        let end = self.pos.checked_add(len).ok_or(CacheError::Truncated)?;
        let slice = self.bytes.get(self.pos..end).ok_or(CacheError::Truncated)?;
        self.pos = end;
        Ok(slice)
    }

    fn u32(&mut self) -> Result<u32, CacheError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, CacheError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn len(&mut self) -> Result<usize, CacheError> {
        usize::try_from(self.u64()?).map_err(|_| CacheError::Malformed("length overflows usize"))
    }

    fn monomial(&mut self, k: usize) -> Result<Monomial, CacheError> {
        let mut exps = Vec::with_capacity(k);
        for _ in 0..k {
            exps.push(self.u32()?);
        }
        Ok(Monomial::new(exps))
    }
}

/// Parses a cache image. `(k, n)` must match the header.
pub fn decode(bytes: &[u8], k: usize, n: u32) -> Result<CohitBasis, CacheError> {
    if bytes.len() < MAGIC.len() {
        return Err(CacheError::Truncated);
    }
    if &bytes[..MAGIC.len()] != MAGIC {
        return Err(CacheError::VersionMismatch);
    }
    if bytes.len() < MAGIC.len() + 8 {
        return Err(CacheError::Truncated);
    }
    let (body, tail) = bytes.split_at(bytes.len() - 8);
    let stored = u64::from_le_bytes(tail.try_into().unwrap());
    let mut r = Reader { bytes: body, pos: MAGIC.len() };
    let found_k = r.u32()? as usize;
    let found_n = r.u32()?;
    let count = r.len()?;
    let basis_len = r.len()?;
    let reducer_len = r.len()?;
    let words = basis_len.div_ceil(64);
    let expected_len = (basis_len as u128) * (found_k as u128) * 4
        + (reducer_len as u128) * ((found_k as u128) * 4 + (words as u128) * 8);
    if (body.len() - r.pos) as u128 != expected_len {
        // length disagreement means a partial write unless the checksum also fails
        let computed = checksum(body);
        if computed != stored {
            return Err(if ((body.len() - r.pos) as u128) < expected_len {
                CacheError::Truncated
            } else {
                CacheError::Checksum { stored, computed }
            });
        }
        return Err(CacheError::Malformed("section lengths disagree with header"));
    }
    let computed = checksum(body);
    if computed != stored {
        return Err(CacheError::Checksum { stored, computed });
    }
    if found_k != k || found_n != n {
        return Err(CacheError::WrongParameters { k, n, found_k, found_n });
    }
    let order = enumerate_monomials(k, n);
    if order.len() != count || basis_len + reducer_len != count {
        return Err(CacheError::Malformed("monomial counts disagree"));
    }
    let mut basis = Vec::with_capacity(basis_len);
    for _ in 0..basis_len {
        basis.push(r.monomial(k)?);
    }
    let mut reducer = Vec::with_capacity(reducer_len);
    for _ in 0..reducer_len {
        let m = r.monomial(k)?;
        let mut ws = Vec::with_capacity(words);
        for _ in 0..words {
            ws.push(r.u64()?);
        }
        let coords = BitVec::from_words(basis_len, ws.clone());
        if coords.words() != ws.as_slice() {
            return Err(CacheError::Malformed("pad bits set in reducer row"));
        }
        reducer.push((m, coords));
    }
    let cb = CohitBasis::from_parts(k, n, order, basis, reducer);
    if cb.monomial_order().iter().any(|m| cb.basis_index(m).is_none() && cb.reduce_monomial(m).is_err()) {
        return Err(CacheError::Malformed("monomials missing from basis and reducer"));
    }
    Ok(cb)
}

pub fn save_cache(cb: &CohitBasis, dir: &Path) -> Result<PathBuf, CacheError> {
    fs::create_dir_all(dir)?;
    let path = cache_path(dir, cb.k(), cb.n());
    let tmp = path.with_extension("bin.tmp");
    fs::write(&tmp, encode(cb))?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// `Ok(None)` when no cache file exists for `(k, n)`.
pub fn load_cache(k: usize, n: u32, dir: &Path) -> Result<Option<CohitBasis>, CacheError> {
    let path = cache_path(dir, k, n);
    match fs::read(&path) {
        Ok(bytes) => decode(&bytes, k, n).map(Some),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e.into()),
    }
}
