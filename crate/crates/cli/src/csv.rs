//! CSV emission: bit-stable float rendering and atomic file writes.

use std::fs;
use std::io;
use std::path::Path;

/// Render with 17 significant digits so the text parses back to the
/// identical bits; `5e-1` becomes `5.0000000000000000e-1`.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Comma-separated table with a fixed header and `\n` line endings.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &str) -> Csv {
        let mut buf = String::with_capacity(4096);
        buf.push_str(header);
        buf.push('\n');
        Csv { buf }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.buf.push_str(&cells.join(","));
        self.buf.push('\n');
    }

    pub fn contents(&self) -> &str {
        &self.buf
    }
}

/// Write through a sibling temp file and rename, so a crash never leaves a
/// half-written table and reruns replace the old file in one step.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let Some(name) = path.file_name() else {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "path has no file name"));
    };
    let mut tmp_name = name.to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}
