//! EPCS snapshot files and CSV export.
//!
//! Layout, all integers and floats little-endian:
//!
//! | bytes | content |
//! |---|---|
//! | 4 | magic `EPCS` |
//! | u32 | format version, 1 |
//! | u32 | ndim |
//! | u32 | nx |
//! | u32 | ny (1 in 1D) |
//! | f64 | dx, μm |
//! | f64 | dy, μm (0 in 1D) |
//! | u32 | model tag: 0 cnrp1, 1 cnrp1_spin, 2 cnrp2, 3 hinrp |
//! | u32 | field count |
//! | f64 | t, ps |
//!
//! then per field: a `u8` kind (0 complex, 1 real), a `u32` name length,
//! the UTF-8 name, and `nx·ny` values in row-major order (x fastest), each
//! an `(re, im)` pair of f64 for complex fields or one f64 for real fields.
//!
//! Boundary tags are not stored; a decoded grid has the default
//! Dirichlet-x / periodic-y boundaries.

use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Dim, Grid};
use crate::model::{ModelTag, SimState};
use crate::rk4::SnapshotSink;

pub const MAGIC: [u8; 4] = *b"EPCS";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 4 + 4 * 4 + 8 * 2 + 4 * 2 + 8;

const KIND_COMPLEX: u8 = 0;
const KIND_REAL: u8 = 1;

/// Serializes `s` to bytes.
pub fn encode(s: &SimState) -> Vec<u8> {
    let g = &s.grid;
    let mut out = Vec::with_capacity(HEADER_LEN + s.amplitudes.len() * g.len() * 16 + g.len() * 8 + 64);
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(g.ndim.as_usize() as u32).to_le_bytes());
    out.extend_from_slice(&(g.nx as u32).to_le_bytes());
    out.extend_from_slice(&(g.ny as u32).to_le_bytes());
    out.extend_from_slice(&g.dx.to_le_bytes());
    out.extend_from_slice(&g.dy.to_le_bytes());
    out.extend_from_slice(&s.tag.code().to_le_bytes());
    let names = s.tag.field_names();
    out.extend_from_slice(&(names.len() as u32).to_le_bytes());
    out.extend_from_slice(&s.t.to_le_bytes());
    for (name, amp) in names.iter().zip(&s.amplitudes) {
        put_name(&mut out, KIND_COMPLEX, name);
        for z in amp {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    if let Some(res) = &s.reservoir {
        put_name(&mut out, KIND_REAL, names.last().expect("reservoir name"));
        for v in res {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

fn put_name(out: &mut Vec<u8>, kind: u8, name: &str) {
    out.push(kind);
    out.extend_from_slice(&(name.len() as u32).to_le_bytes());
    out.extend_from_slice(name.as_bytes());
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len()).ok_or_else(|| {
            Error::Truncated(format!("{what}: need {n} bytes at offset {}, file has {}", self.pos, self.bytes.len()))
        })?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.take(1, what)?[0])
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().expect("4 bytes")))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8, what)?.try_into().expect("8 bytes")))
    }
}

/// Parses one snapshot; the whole buffer must be consumed.
pub fn decode(bytes: &[u8]) -> Result<SimState> {
    let mut c = Cursor { bytes, pos: 0 };
    let magic: [u8; 4] = c.take(4, "magic")?.try_into().expect("4 bytes");
    if magic != MAGIC {
        return Err(Error::BadMagic(magic));
    }
    let version = c.u32("version")?;
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let ndim = c.u32("ndim")?;
    let nx = c.u32("nx")? as usize;
    let ny = c.u32("ny")? as usize;
    let dx = c.f64("dx")?;
    let dy = c.f64("dy")?;
    let code = c.u32("model tag")?;
    let count = c.u32("field count")? as usize;
    let t = c.f64("t")?;

    let ndim = Dim::from_usize(ndim as usize).map_err(|_| Error::Corrupt(format!("ndim = {ndim}")))?;
    let tag = ModelTag::from_code(code).ok_or_else(|| Error::Corrupt(format!("unknown model tag {code}")))?;
    let grid = Grid::from_spacing(ndim, nx, ny, dx, dy).map_err(|e| Error::Corrupt(e.to_string()))?;
    let names = tag.field_names();
    if count != names.len() {
        return Err(Error::Corrupt(format!("{tag} stores {} fields, header says {count}", names.len())));
    }
    if !t.is_finite() {
        return Err(Error::Corrupt(format!("t = {t}")));
    }
    let n = grid.len();
    let too_big = || Error::Corrupt(format!("{nx} x {ny} grid is too large"));
    let complex_bytes = n.checked_mul(16).ok_or_else(too_big)?;
    let real_bytes = n.checked_mul(8).ok_or_else(too_big)?;
    let mut amplitudes = Vec::new();
    let mut reservoir = None;
    for (idx, expected) in names.iter().enumerate() {
        let kind = c.u8("field kind")?;
        let len = c.u32("field name length")? as usize;
        let name = std::str::from_utf8(c.take(len, "field name")?)
            .map_err(|_| Error::Corrupt("field name is not UTF-8".into()))?;
        if name != *expected {
            return Err(Error::Corrupt(format!("field {idx} is `{name}`, expected `{expected}`")));
        }
        let is_reservoir = tag.has_reservoir() && idx == names.len() - 1;
        let want = if is_reservoir { KIND_REAL } else { KIND_COMPLEX };
        if kind != want {
            return Err(Error::Corrupt(format!("field `{name}` has kind {kind}, expected {want}")));
        }
        if is_reservoir {
            let raw = c.take(real_bytes, name)?;
            reservoir = Some(raw.chunks_exact(8).map(|b| f64::from_le_bytes(b.try_into().expect("8 bytes"))).collect());
        } else {
            let raw = c.take(complex_bytes, name)?;
            amplitudes.push(
                raw.chunks_exact(16)
                    .map(|b| {
                        Complex64::new(
                            f64::from_le_bytes(b[..8].try_into().expect("8 bytes")),
                            f64::from_le_bytes(b[8..].try_into().expect("8 bytes")),
                        )
                    })
                    .collect(),
            );
        }
    }
    if c.pos != bytes.len() {
        return Err(Error::Corrupt(format!("{} trailing bytes", bytes.len() - c.pos)));
    }
    SimState::new(tag, grid, t, amplitudes, reservoir).map_err(|e| Error::Corrupt(e.to_string()))
}

/// Writes `s` and returns the number of bytes written.
pub fn write_snapshot<W: Write>(s: &SimState, mut sink: W) -> std::io::Result<usize> {
    let bytes = encode(s);
    sink.write_all(&bytes)?;
    Ok(bytes.len())
}

pub fn read_snapshot<R: Read>(mut source: R) -> Result<SimState> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes).map_err(|e| Error::io("<stream>", e))?;
    decode(&bytes)
}

pub fn write_snapshot_file(s: &SimState, path: &Path) -> Result<usize> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let n = write_snapshot(s, &mut w).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(n)
}

pub fn read_snapshot_file(path: &Path) -> Result<SimState> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes)
}

/// File name of the `index`-th snapshot of a run.
pub fn snapshot_file_name(index: usize) -> String {
    format!("snap_{index:06}.epcs")
}

/// Writes each emitted state to `<dir>/snap_NNNNNN.epcs`.
#[derive(Debug, Clone)]
pub struct DirSink {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl DirSink {
    /// Creates `dir` if needed.
    pub fn create(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(DirSink { dir, written: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }
}

impl SnapshotSink for DirSink {
    fn emit(&mut self, index: usize, state: &SimState) -> Result<()> {
        let path = self.dir.join(snapshot_file_name(index));
        write_snapshot_file(state, &path)?;
        self.written.push(path);
        Ok(())
    }
}

/// Every `*.epcs` file in `dir`, in file-name order.
pub fn list_snapshots(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "epcs"))
        .collect();
    paths.sort();
    Ok(paths)
}

/// Reads a whole run directory.
pub fn read_series(dir: &Path) -> Result<Vec<SimState>> {
    list_snapshots(dir)?.iter().map(|p| read_snapshot_file(p)).collect()
}

/// Writes one field as CSV rows `x,re,im` (1D) or `x,y,re,im` (2D), x fastest.
/// The reservoir is real; its `im` column is 0.
pub fn export_csv<W: Write>(s: &SimState, field: &str, mut out: W) -> Result<()> {
    let names = s.tag.field_names();
    let idx = names.iter().position(|n| *n == field).ok_or_else(|| Error::BadValue {
        key: "field".into(),
        reason: format!("{} has no field `{field}` (available: {})", s.tag, names.join(", ")),
    })?;
    let value = |k: usize| -> Complex64 {
        match s.amplitudes.get(idx) {
            Some(amp) => amp[k],
            None => Complex64::new(s.reservoir.as_ref().expect("reservoir")[k], 0.0),
        }
    };
    let g = &s.grid;
    let two_d = g.ndim == Dim::Two;
    let mut text = String::with_capacity(g.len() * 64);
    text.push_str(if two_d { "x,y,re,im\n" } else { "x,re,im\n" });
    for k in 0..g.len() {
        let [x, y] = g.position(k);
        let z = value(k);
        if two_d {
            text.push_str(&format!("{x:?},{y:?},{:?},{:?}\n", z.re, z.im));
        } else {
            text.push_str(&format!("{x:?},{:?},{:?}\n", z.re, z.im));
        }
    }
    out.write_all(text.as_bytes()).map_err(|e| Error::io("<csv>", e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(tag: ModelTag, grid: Grid, seed: f64) -> SimState {
        let mut s = SimState::zeros(tag, grid);
        for (a, amp) in s.amplitudes.iter_mut().enumerate() {
            for (k, z) in amp.iter_mut().enumerate() {
                *z = Complex64::new((seed + k as f64).sin(), (a as f64 - k as f64 * seed).cos());
            }
        }
        if let Some(r) = &mut s.reservoir {
            r.iter_mut().enumerate().for_each(|(k, v)| *v = seed * k as f64 - 1.0);
        }
        s.t = 1.25 * seed;
        s
    }

    #[test]
    fn header_of_microwire_grid() {
        let s = SimState::zeros(ModelTag::Cnrp1, Grid::line(201, 100.0).unwrap());
        let b = encode(&s);
        assert_eq!(&b[0..4], b"EPCS");
        assert_eq!(u32::from_le_bytes(b[4..8].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(b[8..12].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(b[12..16].try_into().unwrap()), 201);
        assert_eq!(u32::from_le_bytes(b[16..20].try_into().unwrap()), 1);
        assert_eq!(f64::from_le_bytes(b[20..28].try_into().unwrap()), 0.5);
        assert_eq!(f64::from_le_bytes(b[28..36].try_into().unwrap()), 0.0);
        assert_eq!(u32::from_le_bytes(b[36..40].try_into().unwrap()), 0);
        assert_eq!(u32::from_le_bytes(b[40..44].try_into().unwrap()), 2);
        // two complex fields: kind + len + "psi_c"/"psi_x" + 201·16 bytes each
        assert_eq!(b.len(), HEADER_LEN + 2 * (1 + 4 + 5 + 201 * 16));
    }

    #[test]
    fn round_trip_every_model() {
        let grids = [Grid::line(7, 3.0).unwrap(), Grid::square(5, 4, 2.0, 3.0).unwrap()];
        for tag in ModelTag::ALL {
            for g in grids {
                let s = sample(tag, g, 0.37);
                let back = decode(&encode(&s)).unwrap();
                assert_eq!(back, s);
            }
        }
    }

    #[test]
    fn bad_inputs() {
        let s = sample(ModelTag::Hinrp, Grid::line(5, 2.0).unwrap(), 0.1);
        let good = encode(&s);

        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(decode(&bad), Err(Error::BadMagic(m)) if &m == b"XPCS"));

        let mut bad = good.clone();
        bad[4..8].copy_from_slice(&2u32.to_le_bytes());
        assert!(matches!(decode(&bad), Err(Error::UnsupportedVersion(2))));

        for cut in [0, 3, 20, HEADER_LEN, good.len() - 1] {
            assert!(matches!(decode(&good[..cut]), Err(Error::Truncated(_)) | Err(Error::BadMagic(_))), "{cut}");
        }
        assert!(matches!(decode(&good[..good.len() - 1]), Err(Error::Truncated(_))));

        let mut long = good.clone();
        long.push(0);
        assert!(matches!(decode(&long), Err(Error::Corrupt(_))));

        let mut bad = good;
        bad[36..40].copy_from_slice(&9u32.to_le_bytes());
        assert!(matches!(decode(&bad), Err(Error::Corrupt(_))));
    }

    #[test]
    fn csv_rows() {
        let g = Grid::line(3, 2.0).unwrap();
        let mut s = SimState::zeros(ModelTag::Cnrp2, g);
        s.amplitudes[0][1] = Complex64::new(0.5, -2.0);
        let mut out = Vec::new();
        export_csv(&s, "psi", &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "x,re,im\n-1.0,0.0,0.0\n0.0,0.5,-2.0\n1.0,0.0,0.0\n");

        let s = sample(ModelTag::Hinrp, Grid::square(3, 3, 2.0, 2.0).unwrap(), 0.5);
        let mut out = Vec::new();
        export_csv(&s, "n_R", &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 10);
        assert!(text.starts_with("x,y,re,im\n-1.0,-1.0,-1.0,0.0\n0.0,-1.0,-0.5,0.0\n"));
        assert!(export_csv(&s, "psi_c", Vec::new()).is_err());
    }

    #[test]
    fn directory_sink_orders_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut sink = DirSink::create(dir.path().join("run")).unwrap();
        let g = Grid::line(5, 2.0).unwrap();
        for i in 0..12 {
            let mut s = sample(ModelTag::Cnrp1, g, i as f64);
            s.t = i as f64 * 0.1;
            sink.emit(i, &s).unwrap();
        }
        let series = read_series(sink.dir()).unwrap();
        assert_eq!(series.len(), 12);
        assert!(series.windows(2).all(|w| w[0].t < w[1].t));
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(
            vals in prop::collection::vec((-1e300f64..1e300, -1e300f64..1e300), 12),
            t in 0.0f64..1e9,
        ) {
            let g = Grid::square(4, 3, 1.0, 1.0).unwrap();
            let mut s = SimState::zeros(ModelTag::Cnrp2, g);
            s.amplitudes[0] = vals.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            s.t = t;
            let bytes = encode(&s);
            let back = decode(&bytes).unwrap();
            prop_assert_eq!(back.t.to_bits(), t.to_bits());
            for (a, b) in back.amplitudes[0].iter().zip(&s.amplitudes[0]) {
                prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
            prop_assert_eq!(encode(&back), bytes);
        }
    }
}
