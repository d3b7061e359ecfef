//! The optimization pipeline: simulate the deficiency, move to CAM02-UCS,
//! space the hue path evenly, straighten and widen the lightness ramp, and
//! bring the result back to sRGB.

mod bounds;
mod linearize;
mod resample;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use bounds::{compute_jp_bounds, jp_range, jp_range_near, JpBounds, GAMUT_EPS, JP_PRECISION};
pub use linearize::{
    fit_line, is_increasing, linearize_fit_original, linearize_max_range, max_range_line, Line,
    LineFit,
};
pub use resample::{
    cumulative_ab_length, densify, resample_by_index, resample_equidistant, DENSE_POINTS,
    MIN_ARC_LENGTH,
};

use crate::colormap::Colormap;
use crate::colorspace::{clamp_gamut, Cam02Ucs, JabColor, SrgbColor, ViewingConditions};
use crate::cvd::{machado_matrix, simulate_with_matrix, CvdSpec};
use crate::error::{Error, Result};

/// Chroma (a'b' radius) below which a point counts as neutral.
pub const ACHROMATIC_CHROMA: f64 = 1e-3;

/// A colormap's trajectory through CAM02-UCS, indexed `0..N-1`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct JabCurve {
    pub points: Vec<JabColor>,
}

impl JabCurve {
    pub fn new(points: Vec<JabColor>) -> Self {
        JabCurve { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn jp_values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.jp).collect()
    }

    /// Total polyline length in the a'b' plane.
    pub fn ab_arc_length(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| (w[1].ap - w[0].ap).hypot(w[1].bp - w[0].bp))
            .sum()
    }

    /// True when every point is within [`ACHROMATIC_CHROMA`] of the neutral
    /// axis. The tabulated deficiency matrices leave grays with residual
    /// chroma around 3e-4, far below anything visible.
    pub fn is_achromatic(&self) -> bool {
        self.points.iter().all(|p| p.chroma() <= ACHROMATIC_CHROMA)
    }

    /// Consecutive a'b' chord lengths.
    pub fn ab_chords(&self) -> Vec<f64> {
        self.points
            .windows(2)
            .map(|w| (w[1].ap - w[0].ap).hypot(w[1].bp - w[0].bp))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinearizationMethod {
    /// Least-squares line through the original J' trend.
    FitOriginal,
    /// Steepest line inside the per-point displayable J' bounds.
    #[default]
    MaxRange,
}

impl LinearizationMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            LinearizationMethod::FitOriginal => "fit-original",
            LinearizationMethod::MaxRange => "max-range",
        }
    }
}

impl fmt::Display for LinearizationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LinearizationMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "fit" | "fit-original" => Ok(LinearizationMethod::FitOriginal),
            "max-range" | "max" => Ok(LinearizationMethod::MaxRange),
            other => Err(Error::InvalidArgument(format!(
                "unknown linearization method '{other}' (expected fit or max-range)"
            ))),
        }
    }
}

/// Simulates the deficiency on every entry and converts to CAM02-UCS.
pub fn colormap_to_cvd_jab(cmap: &Colormap, spec: CvdSpec, vc: &ViewingConditions) -> Result<JabCurve> {
    let model = Cam02Ucs::new(vc)?;
    let matrix = machado_matrix(spec)?;
    Ok(JabCurve::new(
        cmap.entries()
            .iter()
            .map(|&c| model.srgb_to_jab(simulate_with_matrix(c, &matrix)))
            .collect(),
    ))
}

/// How far the final sRGB entries had to be clamped.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ClampStats {
    /// Largest |pre - post| over all channels of all entries.
    pub max_channel: f64,
    /// Channel value at which `max_channel` occurred (pre-clamp).
    pub worst_value: f64,
    /// Entries with at least one channel moved.
    pub n_clamped: usize,
    /// Entries whose J'a'b' target had no inverse at all.
    pub n_unmappable: usize,
    /// Mean over entries of |jab(post) - target| / |target|.
    pub mean_relative_error: f64,
    pub max_relative_error: f64,
}

/// Converts a J'a'b' curve back to displayable sRGB, recording the
/// clamp diagnostics. Points with no inverse (J' <= 0 with chroma) fall back
/// to the neutral color of the same lightness.
pub fn curve_to_colormap_entries(curve: &JabCurve, model: &Cam02Ucs) -> (Vec<SrgbColor>, ClampStats) {
    let mut stats = ClampStats::default();
    let mut entries = Vec::with_capacity(curve.len());
    let mut rel_sum = 0.0;
    for &target in &curve.points {
        let raw = match model.jab_to_srgb(target) {
            Ok(c) => c,
            Err(_) => {
                stats.n_unmappable += 1;
                let neutral = JabColor::new(target.jp.clamp(0.0, 100.0), 0.0, 0.0);
                model.jab_to_srgb(neutral).unwrap_or(SrgbColor::BLACK)
            }
        };
        let clamped = clamp_gamut(raw);
        let mut moved = false;
        for (pre, post) in raw.to_array().into_iter().zip(clamped.to_array()) {
            let d = (pre - post).abs();
            if d > 0.0 {
                moved = true;
            }
            if d > stats.max_channel {
                stats.max_channel = d;
                stats.worst_value = pre;
            }
        }
        if moved {
            stats.n_clamped += 1;
        }
        let back = model.srgb_to_jab(clamped);
        let norm = target.norm();
        let rel = if norm > 0.0 { back.distance(&target) / norm } else { back.norm() };
        rel_sum += rel;
        stats.max_relative_error = stats.max_relative_error.max(rel);
        entries.push(clamped);
    }
    stats.mean_relative_error = rel_sum / curve.len().max(1) as f64;
    (entries, stats)
}

/// Everything the pipeline computed along the way.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeReport {
    pub method: LinearizationMethod,
    pub cvd: CvdSpec,
    pub n_out: usize,
    /// True when the a'b' path had zero length and hue resampling was skipped.
    pub achromatic_path: bool,
    pub arc_length_before: f64,
    pub arc_length_after: f64,
    /// Least-squares fit of the resampled J' (before replacement).
    pub original_fit: LineFit,
    /// The J' line actually used.
    pub line: Line,
    pub clamp: ClampStats,
    /// J'a'b' targets before conversion back to sRGB.
    #[serde(skip)]
    pub targets: JabCurve,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeOptions {
    pub cvd: CvdSpec,
    pub method: LinearizationMethod,
    pub viewing_conditions: ViewingConditions,
    pub n_out: usize,
    /// Mean relative clamp error above which a warning is logged.
    pub clamp_warn_threshold: f64,
}

impl OptimizeOptions {
    pub fn new(cvd: CvdSpec, method: LinearizationMethod) -> Self {
        OptimizeOptions {
            cvd,
            method,
            viewing_conditions: ViewingConditions::default(),
            n_out: 256,
            clamp_warn_threshold: 0.01,
        }
    }
}

pub fn optimize_colormap(
    cmap: &Colormap,
    spec: CvdSpec,
    method: LinearizationMethod,
    vc: &ViewingConditions,
    n_out: usize,
) -> Result<Colormap> {
    let opts = OptimizeOptions {
        viewing_conditions: *vc,
        n_out,
        ..OptimizeOptions::new(spec, method)
    };
    optimize_with_report(cmap, &opts).map(|(m, _)| m)
}

pub fn optimize_with_report(cmap: &Colormap, opts: &OptimizeOptions) -> Result<(Colormap, OptimizeReport)> {
    if opts.n_out < 2 {
        return Err(Error::InvalidArgument(format!("output size must be >= 2, got {}", opts.n_out)));
    }
    let vc = &opts.viewing_conditions;
    let model = Cam02Ucs::new(vc)?;
    let simulated = colormap_to_cvd_jab(cmap, opts.cvd, vc)?;
    let arc_length_before = simulated.ab_arc_length();

    let (resampled, achromatic_path) = if simulated.is_achromatic() {
        let mut c = resample_by_index(&simulated, opts.n_out)?;
        for p in &mut c.points {
            p.ap = 0.0;
            p.bp = 0.0;
        }
        (c, true)
    } else {
        match resample_equidistant(&simulated, opts.n_out) {
            Ok(c) => (c, false),
            Err(Error::Degenerate(_)) => (resample_by_index(&simulated, opts.n_out)?, true),
            Err(e) => return Err(e),
        }
    };
    let arc_length_after = resampled.ab_arc_length();
    let original_fit = fit_line(&resampled.jp_values())?;

    let (targets, line) = match opts.method {
        LinearizationMethod::FitOriginal => {
            let (c, fit) = linearize_fit_original(&resampled)?;
            (c, fit.line)
        }
        LinearizationMethod::MaxRange => {
            let bounds = compute_jp_bounds(&resampled, vc)?;
            linearize_max_range(&resampled, &bounds)?
        }
    };

    let (entries, clamp) = curve_to_colormap_entries(&targets, &model);
    if clamp.mean_relative_error > opts.clamp_warn_threshold {
        log::warn!(
            "gamut clamping moved colors by {:.2}% on average (max channel excess {:.4}); \
             consider the other linearization method",
            100.0 * clamp.mean_relative_error,
            clamp.max_channel
        );
    }

    let mut out = Colormap::new(format!("{}-{}", cmap.name(), opts.cvd.kind), entries)?;
    out.set_meta("source", cmap.name());
    out.set_meta("cvd_type", opts.cvd.kind);
    out.set_meta("cvd_severity", opts.cvd.severity);
    out.set_meta("method", opts.method);
    out.set_meta("size", opts.n_out);
    out.set_meta("viewing_conditions", vc.to_json());
    out.set_meta("achromatic_path", achromatic_path);
    out.set_meta("jp_slope", format!("{:.9}", line.slope));
    out.set_meta("jp_intercept", format!("{:.9}", line.intercept));
    out.set_meta("clamp_max_channel", format!("{:.6}", clamp.max_channel));
    out.set_meta("clamp_mean_relative_error", format!("{:.6}", clamp.mean_relative_error));
    out.set_meta("tool", concat!("cvdmap ", env!("CARGO_PKG_VERSION")));

    let report = OptimizeReport {
        method: opts.method,
        cvd: opts.cvd,
        n_out: opts.n_out,
        achromatic_path,
        arc_length_before,
        arc_length_after,
        original_fit,
        line,
        clamp,
        targets,
    };
    Ok((out, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cvd::CvdKind;

    fn deut(sev: f64) -> CvdSpec {
        CvdSpec::new(CvdKind::Deuteranomaly, sev).unwrap()
    }

    #[test]
    fn achromatic_ramp_at_zero_severity() {
        let ramp = Colormap::new("ramp", (0..16).map(|i| SrgbColor::gray(i as f64 / 15.0)).collect()).unwrap();
        let curve = colormap_to_cvd_jab(&ramp, deut(0.0), &ViewingConditions::default()).unwrap();
        for w in curve.points.windows(2) {
            assert!(w[1].jp > w[0].jp);
        }
        for p in &curve.points {
            assert!(p.ap.abs() < 1e-6 && p.bp.abs() < 1e-6);
        }
    }

    #[test]
    fn single_color_map() {
        let c = SrgbColor::new(0.2, 0.5, 0.7);
        let map = Colormap::new("flat", vec![c; 8]).unwrap();
        let curve = colormap_to_cvd_jab(&map, deut(100.0), &ViewingConditions::default()).unwrap();
        assert!(curve.points.iter().all(|p| *p == curve.points[0]));
    }

    #[test]
    fn achromatic_input_skips_resampling() {
        let ramp = Colormap::new("ramp", (0..10).map(|i| SrgbColor::gray(0.1 + i as f64 / 12.0)).collect()).unwrap();
        for method in [LinearizationMethod::FitOriginal, LinearizationMethod::MaxRange] {
            let opts = OptimizeOptions { n_out: 32, ..OptimizeOptions::new(deut(100.0), method) };
            let (out, report) = optimize_with_report(&ramp, &opts).unwrap();
            assert!(report.achromatic_path);
            assert_eq!(out.len(), 32);
            assert!(out.is_displayable());
            for e in out.entries() {
                assert!((e.r - e.g).abs() < 1e-6 && (e.g - e.b).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn rejects_tiny_output() {
        let ramp = Colormap::new("ramp", vec![SrgbColor::BLACK, SrgbColor::WHITE]).unwrap();
        assert!(optimize_colormap(&ramp, deut(0.0), LinearizationMethod::MaxRange, &ViewingConditions::default(), 1).is_err());
    }

    #[test]
    fn method_parsing() {
        assert_eq!("fit".parse::<LinearizationMethod>().unwrap(), LinearizationMethod::FitOriginal);
        assert_eq!("max_range".parse::<LinearizationMethod>().unwrap(), LinearizationMethod::MaxRange);
        assert!("spline".parse::<LinearizationMethod>().is_err());
    }
}
