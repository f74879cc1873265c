//! Binary cache for a built [`PrimeTable`].
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! b"RSAD1" | limit: u64 | count: u64 | count x prime: u64
//! ```

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use rsad_core::PrimeTable;

pub const MAGIC: &[u8; 5] = b"RSAD1";

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache io: {0}")]
    Io(#[from] io::Error),
    #[error("not a prime table cache (bad magic)")]
    BadMagic,
    #[error("cache truncated: header says {expected} primes")]
    Truncated { expected: u64 },
    #[error("cache has trailing bytes after {count} primes")]
    TrailingBytes { count: u64 },
    #[error("cache rejected: {0}")]
    Invalid(#[from] rsad_core::Error),
}

pub fn write_table<W: Write>(mut w: W, table: &PrimeTable) -> io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&table.limit().to_le_bytes())?;
    w.write_all(&table.count().to_le_bytes())?;
    for &p in table.primes() {
        w.write_all(&p.to_le_bytes())?;
    }
    w.flush()
}

fn read_u64<R: Read>(r: &mut R) -> io::Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

pub fn read_table<R: Read>(mut r: R) -> Result<PrimeTable, CacheError> {
    let mut magic = [0u8; 5];
    match r.read_exact(&mut magic) {
        Ok(()) if &magic == MAGIC => {}
        Ok(()) => return Err(CacheError::BadMagic),
        Err(e) if e.kind() == io::ErrorKind::UnexpectedEof => return Err(CacheError::BadMagic),
        Err(e) => return Err(e.into()),
    }
    let limit = read_u64(&mut r)?;
    let count = read_u64(&mut r)?;
    let truncated = |e: io::Error| {
        if e.kind() == io::ErrorKind::UnexpectedEof {
            CacheError::Truncated { expected: count }
        } else {
            CacheError::Io(e)
        }
    };
    // do not trust the header for the allocation size
    let mut primes = Vec::with_capacity(count.min(1 << 24) as usize);
    for _ in 0..count {
        primes.push(read_u64(&mut r).map_err(truncated)?);
    }
    let mut extra = [0u8; 1];
    if r.read(&mut extra)? != 0 {
        return Err(CacheError::TrailingBytes { count });
    }
    Ok(PrimeTable::from_parts(limit, primes)?)
}

pub fn save(path: &Path, table: &PrimeTable) -> io::Result<()> {
    write_table(BufWriter::new(File::create(path)?), table)
}

pub fn load(path: &Path) -> Result<PrimeTable, CacheError> {
    read_table(BufReader::new(File::open(path)?))
}
