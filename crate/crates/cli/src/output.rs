//! File emission: commented CSV tables, binary graymaps and atomic writes.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use subplanck::wigner::PhaseSpaceGrid;

/// Seventeen significant digits.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV table preceded by `# key: value` comment lines.
pub struct Table {
    comments: Vec<String>,
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new<C: Serialize>(config: &C, header: &[&str]) -> Result<Self> {
        let json = serde_json::to_string(config).context("serializing configuration")?;
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header)?;
        Ok(Self {
            comments: vec![format!("config: {json}")],
            writer,
        })
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn into_bytes(self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        for c in &self.comments {
            writeln!(out, "# {c}")?;
        }
        out.extend(self.writer.into_inner().context("flushing CSV")?);
        Ok(out)
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)
        .with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Sends bytes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, bytes),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// Binary P5 graymap with a symmetric mapping: 0 → 128, ±max|v| → 255/0.
/// The top row is `im_max`.
pub fn graymap(grid: &PhaseSpaceGrid, values: &[f64]) -> Vec<u8> {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut out = format!("P5\n{} {}\n255\n", grid.nx, grid.ny).into_bytes();
    for iy in (0..grid.ny).rev() {
        for ix in 0..grid.nx {
            let v = values[iy * grid.nx + ix];
            let t = if scale > 0.0 { v / scale } else { 0.0 };
            out.push((127.5 + 127.5 * t).round().clamp(0.0, 255.0) as u8);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_format_has_17_digits() {
        assert_eq!(real(0.1), "1.0000000000000001e-1");
        assert_eq!(real(-2.0), "-2.0000000000000000e0");
        assert_eq!(real(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn table_layout() {
        #[derive(Serialize)]
        struct C {
            a: u32,
        }
        let mut t = Table::new(&C { a: 3 }, &["x", "y"]).unwrap();
        t.comment("regime: dispersive");
        t.row(["1", "2"]).unwrap();
        let text = String::from_utf8(t.into_bytes().unwrap()).unwrap();
        assert_eq!(
            text,
            "# config: {\"a\":3}\n# regime: dispersive\nx,y\n1,2\n"
        );
    }

    #[test]
    fn graymap_orientation_and_scale() {
        let grid = PhaseSpaceGrid::new((0.0, 1.0), (0.0, 1.0), 2, 2).unwrap();
        // row-major, iy slow: bottom row first
        let img = graymap(&grid, &[-1.0, 0.0, 0.5, 1.0]);
        let header = b"P5\n2 2\n255\n";
        assert_eq!(&img[..header.len()], header);
        assert_eq!(&img[header.len()..], &[191, 255, 0, 128]);
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
