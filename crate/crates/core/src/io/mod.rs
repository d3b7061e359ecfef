//! Loaders and exporters: text tables, ImageJ LUTs, PNG rasters, JSON
//! sidecars and viewing-condition files.

mod lut;
mod png;
mod table;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

pub use lut::{export_lut, load_lut, lut_bytes, parse_lut, LUT_ENTRIES, LUT_LEN};
pub use png::{export_png, load_png, raster_to_scalar};
pub use table::{export_table, load_table, parse_table, parse_value_grid, write_table, TableScale};

use crate::builtins;
use crate::colormap::Colormap;
use crate::colorspace::ViewingConditions;
use crate::error::Result;

/// Loads a table or LUT file, or falls back to a built-in map name.
pub fn load_colormap(path_or_name: &str) -> Result<Colormap> {
    let path = Path::new(path_or_name);
    if path.is_file() {
        let is_lut = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("lut"));
        return if is_lut { load_lut(path) } else { load_table(path) };
    }
    builtins::builtin(path_or_name)
}

pub fn load_viewing_conditions(path: impl AsRef<Path>) -> Result<ViewingConditions> {
    ViewingConditions::from_json(&fs::read_to_string(path)?)
}

/// `foo.png` -> `foo.png.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Writes `metadata` as a flat JSON object next to `path`.
pub fn write_sidecar(path: &Path, metadata: &BTreeMap<String, String>) -> Result<PathBuf> {
    let side = sidecar_path(path);
    fs::write(&side, serde_json::to_string_pretty(metadata)? + "\n")?;
    Ok(side)
}
