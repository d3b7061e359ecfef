//! Registry of built-in colormaps.

use std::sync::OnceLock;

use crate::analyze::grayscale_jp;
use crate::colormap::Colormap;
use crate::colorspace::{SrgbColor, ViewingConditions};
use crate::cvd::{CvdKind, CvdSpec};
use crate::error::{Error, Result};
use crate::io::parse_table;
use crate::optimize::{optimize_colormap, LinearizationMethod};

pub const BUILTIN_NAMES: [&str; 4] = ["viridis", "jet", "grayscale-jp", "cividis"];

const VIRIDIS_CSV: &str = include_str!("../data/viridis.csv");

type Segments = &'static [(f64, f64)];

// matplotlib segment data
const JET_RED: Segments = &[(0.0, 0.0), (0.35, 0.0), (0.66, 1.0), (0.89, 1.0), (1.0, 0.5)];
const JET_GREEN: Segments = &[(0.0, 0.0), (0.125, 0.0), (0.375, 1.0), (0.64, 1.0), (0.91, 0.0), (1.0, 0.0)];
const JET_BLUE: Segments = &[(0.0, 0.5), (0.11, 1.0), (0.34, 1.0), (0.65, 0.0), (1.0, 0.0)];

fn piecewise(seg: Segments, x: f64) -> f64 {
    let k = seg.iter().rposition(|&(x0, _)| x0 <= x).unwrap_or(0).min(seg.len() - 2);
    let ((x0, y0), (x1, y1)) = (seg[k], seg[k + 1]);
    y0 + (y1 - y0) * ((x - x0) / (x1 - x0)).clamp(0.0, 1.0)
}

pub fn viridis() -> Colormap {
    parse_table(VIRIDIS_CSV, "viridis")
        .expect("bundled viridis table parses")
        .with_meta("source", "matplotlib viridis")
}

pub fn jet() -> Colormap {
    let entries = (0..256)
        .map(|i| {
            let x = i as f64 / 255.0;
            SrgbColor::new(piecewise(JET_RED, x), piecewise(JET_GREEN, x), piecewise(JET_BLUE, x))
        })
        .collect();
    Colormap::new("jet", entries)
        .expect("jet has 256 entries")
        .with_meta("source", "matplotlib jet segment data")
}

/// viridis optimized for full deuteranomaly with the max-range method,
/// regenerated on first use.
pub fn cividis() -> Result<Colormap> {
    static CACHE: OnceLock<std::result::Result<Colormap, String>> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            let spec = CvdSpec::new(CvdKind::Deuteranomaly, 100.0).map_err(|e| e.to_string())?;
            let mut m = optimize_colormap(
                &viridis(),
                spec,
                LinearizationMethod::MaxRange,
                &ViewingConditions::default(),
                256,
            )
            .map_err(|e| e.to_string())?;
            m.set_name("cividis");
            Ok(m)
        })
        .clone()
        .map_err(Error::Math)
}

pub fn builtin(name: &str) -> Result<Colormap> {
    match name.to_ascii_lowercase().as_str() {
        "viridis" => Ok(viridis()),
        "jet" => Ok(jet()),
        "grayscale-jp" | "grayscale" | "gray-jp" => grayscale_jp(256, &ViewingConditions::default()),
        "cividis" => cividis(),
        _ => Err(Error::UnknownColormap {
            name: name.to_string(),
            available: BUILTIN_NAMES.iter().map(|s| s.to_string()).collect(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn viridis_endpoints() {
        let v = viridis();
        assert_eq!(v.len(), 256);
        assert_eq!(v.first(), SrgbColor::new(0.267004, 0.004874, 0.329415));
    }

    #[test]
    fn jet_matches_matplotlib() {
        let j = jet();
        assert_eq!(j.first(), SrgbColor::new(0.0, 0.0, 0.5));
        assert_eq!(j.last(), SrgbColor::new(0.5, 0.0, 0.0));
        // matplotlib: jet(100) on a 256-entry table
        let e = j.entries()[100];
        assert!((e.r - 0.135_989_88).abs() < 1e-7 && e.g == 1.0 && (e.b - 0.831_752_06).abs() < 1e-7);
    }

    #[test]
    fn unknown_lists_names() {
        let msg = builtin("parula").unwrap_err().to_string();
        for n in BUILTIN_NAMES {
            assert!(msg.contains(n), "{msg}");
        }
    }
}
