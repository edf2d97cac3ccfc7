//! Output helpers: round-trip float formatting, file/stdout dispatch, and
//! the companion-path rule for the region thresholds file.

use std::path::{Path, PathBuf};

/// Full round-trip decimal formatting (17 significant digits) for every
/// numeric CSV field.
pub fn round_trip(x: f64) -> String {
    format!("{x:.16e}")
}

/// Compact fixed-point rendering for the human-readable report.
pub fn short(x: f64) -> String {
    format!("{x:.6}")
}

/// Writes `content` to `out` when given, otherwise to stdout.
pub fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Companion path for the region thresholds file: `_thresholds` inserted
/// before the extension (`map.csv` -> `map_thresholds.csv`).
pub fn thresholds_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let name = match path.extension().and_then(|s| s.to_str()) {
        Some(ext) => format!("{stem}_thresholds.{ext}"),
        None => format!("{stem}_thresholds"),
    };
    path.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_has_17_significant_digits() {
        let s = round_trip(0.2);
        assert_eq!(s, "2.0000000000000001e-1");
        let back: f64 = s.parse().unwrap();
        assert_eq!(back, 0.2);
    }

    #[test]
    fn thresholds_path_inserts_suffix() {
        assert_eq!(
            thresholds_path(Path::new("/tmp/map.csv")),
            PathBuf::from("/tmp/map_thresholds.csv")
        );
        assert_eq!(
            thresholds_path(Path::new("grid")),
            PathBuf::from("grid_thresholds")
        );
    }
}
