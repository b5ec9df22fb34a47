use std::io::Write;
use std::path::Path;

use tempfile::NamedTempFile;

/// Fixed six-decimal rendering; negative zero prints as zero.
pub fn fmt6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> std::io::Result<()> {
    write_atomic_bytes(dir, name, contents.as_bytes())
}

/// Writes to a temporary file in `dir`, then renames it over `dir/name`.
pub fn write_atomic_bytes(dir: &Path, name: &str, contents: &[u8]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let target = dir.join(name);
    let parent = target.parent().unwrap_or(dir);
    let mut tmp = NamedTempFile::new_in(parent)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(&target).map_err(|e| e.error)?;
    Ok(())
}
