//! Binary snapshot files:
//!
//! ```text
//! "GKDV" | version: u32 LE | n: u64 LE | L: f64 LE | t: f64 LE | n x f64 LE
//! ```

use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{Field, Grid, State};

pub const SNAPSHOT_VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"GKDV";
const HEADER_LEN: usize = 4 + 4 + 8 + 8 + 8;

pub fn encode_snapshot(state: &State) -> Vec<u8> {
    let grid = state.grid();
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * grid.n());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    out.extend_from_slice(&(grid.n() as u64).to_le_bytes());
    out.extend_from_slice(&grid.half_length().to_le_bytes());
    out.extend_from_slice(&state.time.to_le_bytes());
    for v in state.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    offset: usize,
}

impl Reader<'_> {
    fn take<const N: usize>(&mut self, what: &str) -> Result<[u8; N]> {
        let end = self.offset + N;
        let chunk = self.bytes.get(self.offset..end).ok_or_else(|| Error::SnapshotParse {
            offset: self.offset,
            reason: format!("truncated while reading {what}"),
        })?;
        self.offset = end;
        Ok(chunk.try_into().expect("slice has length N"))
    }

    fn fail(&self, at: usize, reason: impl Into<String>) -> Error {
        Error::SnapshotParse {
            offset: at,
            reason: reason.into(),
        }
    }
}

pub fn decode_snapshot(bytes: &[u8]) -> Result<State> {
    let mut r = Reader { bytes, offset: 0 };
    if &r.take::<4>("magic")? != MAGIC {
        return Err(r.fail(0, "bad magic, expected \"GKDV\""));
    }
    let version = u32::from_le_bytes(r.take("version")?);
    if version != SNAPSHOT_VERSION {
        return Err(r.fail(4, format!("unsupported version {version}")));
    }
    let n = u64::from_le_bytes(r.take("n")?);
    let half_length = f64::from_le_bytes(r.take("half length")?);
    let time = f64::from_le_bytes(r.take("time")?);
    let n = usize::try_from(n).map_err(|_| r.fail(8, "n does not fit in memory"))?;
    let grid = Grid::new(half_length, n).map_err(|e| r.fail(8, e.to_string()))?;
    if !(time.is_finite() && time >= 0.0) {
        return Err(r.fail(24, format!("invalid time {time}")));
    }
    let expected = HEADER_LEN + 8 * n;
    if bytes.len() != expected {
        return Err(r.fail(
            bytes.len().min(expected),
            format!("expected {expected} bytes, found {}", bytes.len()),
        ));
    }
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        let at = r.offset;
        let v = f64::from_le_bytes(r.take("value")?);
        if !v.is_finite() {
            return Err(r.fail(at, "non-finite sample"));
        }
        values.push(v);
    }
    State::new(time, Field::new(grid, values)?)
}

pub fn write_snapshot(path: impl AsRef<Path>, state: &State) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_snapshot(state)).map_err(|e| Error::io(path, e))
}

pub fn read_snapshot(path: impl AsRef<Path>) -> Result<State> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_snapshot(&bytes)
}
