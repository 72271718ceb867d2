//! Output dialect shared by every artifact: comma-separated, `.` decimal,
//! 17 significant digits, `\n` line endings, UTF-8.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::Result;

/// 17 significant digits in scientific notation, e.g. `1.2500000000000000e-1`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// `re+imj` with both parts at 17 significant digits.
pub fn fmt_complex(z: Complex64) -> String {
    format!("{:.16e}{:+.16e}j", z.re, z.im)
}

/// Write `contents` to a sibling temp file, then rename over `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let file_name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp = path.with_file_name(format!(".{file_name}.tmp"));
    fs::write(&tmp, contents)?;
    if let Err(e) = fs::rename(&tmp, path) {
        let _ = fs::remove_file(&tmp);
        return Err(e.into());
    }
    Ok(())
}
