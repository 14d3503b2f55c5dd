//! Little-endian binary and CSV serialization of grid functions.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{GridError, GridFunction, GridSpec};
use crate::C64;

const MAGIC: &[u8; 4] = b"WWGM";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 4 + 4 + 8;

fn io_err(path: &Path, source: std::io::Error) -> GridError {
    GridError::Io { path: path.display().to_string(), source }
}

/// Header `WWGM`, u32 version, u32 n, u32 N, f64 L, then interleaved (re, im) pairs.
pub fn to_binary(f: &GridFunction) -> Vec<u8> {
    let spec = f.spec();
    let mut buf = Vec::with_capacity(HEADER_LEN + 16 * spec.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(spec.n() as u32).to_le_bytes());
    buf.extend_from_slice(&(spec.n_points() as u32).to_le_bytes());
    buf.extend_from_slice(&spec.half_width().to_le_bytes());
    for z in f.values() {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    buf
}

pub fn from_binary(bytes: &[u8]) -> Result<GridFunction, GridError> {
    if bytes.len() < HEADER_LEN || &bytes[0..4] != MAGIC {
        return Err(GridError::Format("missing WWGM header".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().expect("slice of length 4"));
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().expect("slice of length 8"));
    let version = u32_at(4);
    if version != VERSION {
        return Err(GridError::Format(format!("unsupported version {version}")));
    }
    let n = u32_at(8) as usize;
    if n != 1 {
        return Err(GridError::DimensionMismatch(n));
    }
    let spec = GridSpec::new(u32_at(12) as usize, f64_at(16))?;
    if bytes.len() != HEADER_LEN + 16 * spec.len() {
        return Err(GridError::Format(format!("expected {} payload bytes, found {}", 16 * spec.len(), bytes.len() - HEADER_LEN)));
    }
    let values = (0..spec.len())
        .map(|i| {
            let o = HEADER_LEN + 16 * i;
            C64::new(f64_at(o), f64_at(o + 8))
        })
        .collect();
    GridFunction::new(spec, values)
}

pub fn write_binary(f: &GridFunction, path: &Path) -> Result<(), GridError> {
    fs::write(path, to_binary(f)).map_err(|e| io_err(path, e))
}

pub fn read_binary(path: &Path) -> Result<GridFunction, GridError> {
    let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
    from_binary(&bytes)
}

/// Rows `p,x,re,im` with a header line.
pub fn write_csv(f: &GridFunction, path: &Path) -> Result<(), GridError> {
    let spec = f.spec();
    let n = spec.n_points();
    let mut out = String::with_capacity(64 * spec.len());
    out.push_str("p,x,re,im\n");
    for j in 0..n {
        for k in 0..n {
            let z = f.get(j, k);
            out.push_str(&format!("{:e},{:e},{:e},{:e}\n", spec.node(j), spec.node(k), z.re, z.im));
        }
    }
    let mut file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    file.write_all(out.as_bytes()).map_err(|e| io_err(path, e))
}
