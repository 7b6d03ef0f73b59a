//! Plot-ready data export.
//!
//! Tables are UTF-8 tab-separated values. Every file starts with a block
//! of `#`-prefixed header lines recording the tool version and the fully
//! resolved configuration that produced it, so a run can be reproduced
//! from any one of its outputs.
//!
//! Large joint-spectrum grids can also be written as a compact binary
//! matrix: a 64-byte header followed by row-major (Re, Im) f64 pairs,
//! little endian. Header layout:
//!
//! ```text
//! offset  size  content
//! 0       8     magic "NLPCBIN1"
//! 8       4     format version (u32, = 1)
//! 12      4     reserved (zero)
//! 16      8     rows (u64, signal axis)
//! 24      8     cols (u64, idler axis)
//! 32      8     first signal frequency (f64, rad/s)
//! 40      8     signal frequency step (f64, rad/s)
//! 48      8     first idler frequency (f64, rad/s)
//! 56      8     idler frequency step (f64, rad/s)
//! ```
//!
//! A text sidecar (`<file>.hdr`) carries the same `#` header block as the
//! TSV outputs.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::jsa::JointSpectrum;

pub const BINARY_MAGIC: &[u8; 8] = b"NLPCBIN1";

/// `#`-prefixed header block: tool version plus key/value pairs.
pub fn header_lines(meta: &[(String, String)]) -> Vec<String> {
    let mut lines = vec![format!("# nlpc version: {}", env!("CARGO_PKG_VERSION"))];
    for (k, v) in meta {
        lines.push(format!("# {k}: {v}"));
    }
    lines
}

/// Write a TSV table with a header block and a column-name line.
pub fn write_tsv<P, I>(
    path: P,
    meta: &[(String, String)],
    columns: &[&str],
    rows: I,
) -> std::io::Result<()>
where
    P: AsRef<Path>,
    I: IntoIterator<Item = Vec<String>>,
{
    let mut out = BufWriter::new(File::create(path)?);
    for line in header_lines(meta) {
        writeln!(out, "{line}")?;
    }
    writeln!(out, "{}", columns.join("\t"))?;
    for row in rows {
        debug_assert_eq!(row.len(), columns.len());
        writeln!(out, "{}", row.join("\t"))?;
    }
    out.flush()
}

/// Write key/value pairs as `key: value` lines under the usual header.
pub fn write_key_values<P: AsRef<Path>>(
    path: P,
    meta: &[(String, String)],
    pairs: &[(String, String)],
) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for line in header_lines(meta) {
        writeln!(out, "{line}")?;
    }
    for (k, v) in pairs {
        writeln!(out, "{k}: {v}")?;
    }
    out.flush()
}

/// Write a joint spectrum as a binary matrix plus text sidecar.
pub fn write_jsa_binary<P: AsRef<Path>>(
    path: P,
    meta: &[(String, String)],
    js: &JointSpectrum,
) -> std::io::Result<()> {
    let path = path.as_ref();
    let mut out = BufWriter::new(File::create(path)?);
    let rows = js.n_s() as u64;
    let cols = js.n_i() as u64;
    let step = |axis: &[f64]| {
        if axis.len() > 1 {
            axis[1] - axis[0]
        } else {
            0.0
        }
    };
    out.write_all(BINARY_MAGIC)?;
    out.write_all(&1u32.to_le_bytes())?;
    out.write_all(&0u32.to_le_bytes())?;
    out.write_all(&rows.to_le_bytes())?;
    out.write_all(&cols.to_le_bytes())?;
    out.write_all(&js.omega_s[0].to_le_bytes())?;
    out.write_all(&step(&js.omega_s).to_le_bytes())?;
    out.write_all(&js.omega_i[0].to_le_bytes())?;
    out.write_all(&step(&js.omega_i).to_le_bytes())?;
    for j in 0..js.n_s() {
        for k in 0..js.n_i() {
            let c = js.amplitude[(j, k)];
            out.write_all(&c.re.to_le_bytes())?;
            out.write_all(&c.im.to_le_bytes())?;
        }
    }
    out.flush()?;

    let sidecar = path.with_extension(match path.extension() {
        Some(e) => format!("{}.hdr", e.to_string_lossy()),
        None => "hdr".to_string(),
    });
    let mut hdr = BufWriter::new(File::create(sidecar)?);
    for line in header_lines(meta) {
        writeln!(hdr, "{line}")?;
    }
    writeln!(hdr, "# rows (signal axis): {rows}")?;
    writeln!(hdr, "# cols (idler axis): {cols}")?;
    hdr.flush()
}

/// Format a float for tabular output: full round-trip precision.
pub fn fmt(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.12e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tsv_layout() {
        let dir = std::env::temp_dir().join("nlpc-export-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.tsv");
        write_tsv(
            &path,
            &[("key".into(), "value".into())],
            &["a", "b"],
            vec![vec!["1".into(), "2".into()]],
        )
        .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# nlpc version:"));
        assert_eq!(lines.next().unwrap(), "# key: value");
        assert_eq!(lines.next().unwrap(), "a\tb");
        assert_eq!(lines.next().unwrap(), "1\t2");
    }
}
