//! On-disk store for evaluation tables.
//!
//! One file per (lattice, placement, field). Layout, all integers little
//! endian:
//!
//! ```text
//! magic     8 bytes  "TSNEVTB\0"
//! version   u32
//! n         u32
//! q         u32
//! modulus   u32 count, then that many u32 coefficients (constant first)
//! labels    u32 count, then that many u32 vertex indices
//! var hash  32 bytes, SHA-256 of the comma-joined variable names
//! nonzero   u8
//! bits      u64
//! words     u64 count, then the bitmap words
//! ```
//!
//! A file whose header does not match the request is rebuilt, never trusted.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use sha2::{Digest, Sha256};
use tsn_core::solver::{CompiledMinor, EvalTable, TableBank};
use tsn_core::{Field, Lattice, Placement, PointSpace};

use crate::parallel;

pub const MAGIC: &[u8; 8] = b"TSNEVTB\0";
pub const VERSION: u32 = 1;

/// Identity of one table; everything the bitmap depends on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Header {
    pub n: u32,
    pub q: u32,
    pub modulus: Vec<u32>,
    pub labels: Vec<u32>,
    pub var_hash: [u8; 32],
    pub nonzero: bool,
    pub bits: u64,
}

impl Header {
    pub fn new(lat: &Lattice, placement: &Placement, field: &Field, space: PointSpace) -> Self {
        Header {
            n: lat.length() as u32,
            q: field.order(),
            modulus: field.modulus().to_vec(),
            labels: placement.labels().iter().map(|&l| l as u32).collect(),
            var_hash: var_order_hash(lat),
            nonzero: space.nonzero,
            bits: space.len() as u64,
        }
    }

    fn write(&self, w: &mut impl Write) -> io::Result<()> {
        w.write_all(MAGIC)?;
        for v in [VERSION, self.n, self.q, self.modulus.len() as u32] {
            w.write_all(&v.to_le_bytes())?;
        }
        for c in &self.modulus {
            w.write_all(&c.to_le_bytes())?;
        }
        w.write_all(&(self.labels.len() as u32).to_le_bytes())?;
        for l in &self.labels {
            w.write_all(&l.to_le_bytes())?;
        }
        w.write_all(&self.var_hash)?;
        w.write_all(&[self.nonzero as u8])?;
        w.write_all(&self.bits.to_le_bytes())
    }

    fn read(r: &mut impl Read) -> io::Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(invalid("bad magic"));
        }
        if read_u32(r)? != VERSION {
            return Err(invalid("unknown version"));
        }
        let n = read_u32(r)?;
        let q = read_u32(r)?;
        let modulus = read_u32_list(r, 64)?;
        let labels = read_u32_list(r, 64)?;
        let mut var_hash = [0u8; 32];
        r.read_exact(&mut var_hash)?;
        let mut flag = [0u8; 1];
        r.read_exact(&mut flag)?;
        let bits = read_u64(r)?;
        Ok(Header {
            n,
            q,
            modulus,
            labels,
            var_hash,
            nonzero: flag[0] == 1,
            bits,
        })
    }
}

fn invalid(msg: &str) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.to_string())
}

fn read_u32(r: &mut impl Read) -> io::Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> io::Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_u32_list(r: &mut impl Read, max: u32) -> io::Result<Vec<u32>> {
    let len = read_u32(r)?;
    if len > max {
        return Err(invalid("list too long"));
    }
    (0..len).map(|_| read_u32(r)).collect()
}

/// SHA-256 of the variable names in bit order, e.g. `a1_1,a1_2,a2_1,...`.
pub fn var_order_hash(lat: &Lattice) -> [u8; 32] {
    let names: Vec<String> = lat.vars().map(|v| v.to_string()).collect();
    Sha256::digest(names.join(",").as_bytes()).into()
}

pub fn write_table(path: &Path, header: &Header, table: &EvalTable) -> io::Result<()> {
    let mut buf = Vec::with_capacity(128 + table.words().len() * 8);
    header.write(&mut buf)?;
    buf.extend_from_slice(&(table.words().len() as u64).to_le_bytes());
    for w in table.words() {
        buf.extend_from_slice(&w.to_le_bytes());
    }
    // write then rename so a crash never leaves a truncated table behind
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, &buf)?;
    fs::rename(&tmp, path)
}

/// Reads a table and checks it against `expected`.
pub fn read_table(path: &Path, expected: &Header, space: PointSpace) -> io::Result<EvalTable> {
    let bytes = fs::read(path)?;
    let mut r = bytes.as_slice();
    let header = Header::read(&mut r)?;
    if header != *expected {
        return Err(invalid("header does not match"));
    }
    let count = read_u64(&mut r)? as usize;
    if r.len() != count * 8 {
        return Err(invalid("bitmap length does not match"));
    }
    let words = r
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    EvalTable::from_words(space, words).map_err(|e| invalid(&e.to_string()))
}

/// Builds tables on demand, reading and writing a cache directory when one
/// is configured.
#[derive(Debug, Default)]
pub struct TableStore {
    dir: Option<PathBuf>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl TableStore {
    pub fn new(dir: Option<PathBuf>) -> io::Result<Self> {
        if let Some(d) = &dir {
            fs::create_dir_all(d)?;
        }
        Ok(TableStore {
            dir,
            ..Default::default()
        })
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }

    pub fn path_for(&self, header: &Header) -> Option<PathBuf> {
        let labels: Vec<String> = header.labels.iter().map(|l| l.to_string()).collect();
        let tag = if header.nonzero { "nz" } else { "all" };
        self.dir.as_ref().map(|d| {
            d.join(format!(
                "n{}_q{}_{}_{}.evt",
                header.n,
                header.q,
                tag,
                labels.join("-")
            ))
        })
    }

    pub fn table(
        &self,
        lat: &Lattice,
        placement: &Placement,
        field: &Field,
        minor: &CompiledMinor,
        space: PointSpace,
    ) -> io::Result<EvalTable> {
        let header = Header::new(lat, placement, field, space);
        let path = self.path_for(&header);
        if let Some(path) = &path {
            if let Ok(table) = read_table(path, &header, space) {
                self.hits.fetch_add(1, Ordering::Relaxed);
                return Ok(table);
            }
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let table = parallel::build_table(field, minor, space);
        if let Some(path) = &path {
            write_table(path, &header, &table)?;
        }
        Ok(table)
    }

    /// Tables of every placement over every order, through this store.
    pub fn bank(
        &self,
        lat: &Lattice,
        placements: Vec<Placement>,
        orders: &[u32],
    ) -> anyhow::Result<TableBank> {
        TableBank::build_with(
            lat,
            placements,
            orders,
            |field, p, minor, space| -> anyhow::Result<_> {
                Ok(self.table(lat, p, field, minor, space)?)
            },
        )
    }
}
