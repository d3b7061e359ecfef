//! Per-point lightness bounds: for a fixed (a', b'), the range of J' that
//! still maps to a displayable sRGB color.

use crate::colorspace::{Cam02Ucs, JabColor, ViewingConditions};
use crate::error::{Error, Result};

use super::JabCurve;

/// Channel tolerance for "displayable".
pub const GAMUT_EPS: f64 = 1e-6;
/// Target precision of the bisection, in J' units.
pub const JP_PRECISION: f64 = 1e-4;

const COARSE_STEPS: usize = 200;
const FINE_STEPS: usize = 2000;

/// Valid-lightness interval per curve index.
#[derive(Debug, Clone, PartialEq)]
pub struct JpBounds {
    pub jmin: Vec<f64>,
    pub jmax: Vec<f64>,
}

impl JpBounds {
    pub fn new(jmin: Vec<f64>, jmax: Vec<f64>) -> Result<Self> {
        if jmin.len() != jmax.len() {
            return Err(Error::InvalidArgument(format!(
                "bounds length mismatch: {} vs {}",
                jmin.len(),
                jmax.len()
            )));
        }
        Ok(JpBounds { jmin, jmax })
    }

    pub fn len(&self) -> usize {
        self.jmin.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jmin.is_empty()
    }
}

fn displayable(model: &Cam02Ucs, jp: f64, ap: f64, bp: f64) -> bool {
    model
        .jab_to_srgb(JabColor::new(jp, ap, bp))
        .map(|c| c.in_gamut_eps(GAMUT_EPS))
        .unwrap_or(false)
}

/// Shrinks `[bad, good]` (either orientation) around the validity boundary
/// and returns the last known valid lightness.
fn bisect(model: &Cam02Ucs, ap: f64, bp: f64, mut good: f64, mut bad: f64) -> f64 {
    while (good - bad).abs() > JP_PRECISION {
        let mid = 0.5 * (good + bad);
        if displayable(model, mid, ap, bp) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

fn scan(model: &Cam02Ucs, ap: f64, bp: f64, steps: usize) -> Option<(usize, usize)> {
    let grid = |i: usize| 100.0 * i as f64 / steps as f64;
    let first = (0..=steps).find(|&i| displayable(model, grid(i), ap, bp))?;
    let last = (first..=steps).rev().find(|&i| displayable(model, grid(i), ap, bp))?;
    Some((first, last))
}

/// Lightness interval `[jmin, jmax]` for one hue/chroma point, or `None` if
/// no J' in [0, 100] is displayable.
pub fn jp_range(model: &Cam02Ucs, ap: f64, bp: f64) -> Option<(f64, f64)> {
    jp_range_near(model, ap, bp, None)
}

/// As [`jp_range`], but also tries `hint` as a seed. Points near a gamut
/// cusp can have a valid interval narrower than the scan grid.
pub fn jp_range_near(model: &Cam02Ucs, ap: f64, bp: f64, hint: Option<f64>) -> Option<(f64, f64)> {
    let hit = match scan(model, ap, bp, COARSE_STEPS) {
        Some(hit) => Some((COARSE_STEPS, hit)),
        None => scan(model, ap, bp, FINE_STEPS).map(|hit| (FINE_STEPS, hit)),
    };
    let Some((steps, (first, last))) = hit else {
        let seed = hint.filter(|&j| (0.0..=100.0).contains(&j) && displayable(model, j, ap, bp))?;
        let lo = if displayable(model, 0.0, ap, bp) { 0.0 } else { bisect(model, ap, bp, seed, 0.0) };
        let hi = if displayable(model, 100.0, ap, bp) { 100.0 } else { bisect(model, ap, bp, seed, 100.0) };
        return Some((lo, hi));
    };
    let grid = |i: usize| 100.0 * i as f64 / steps as f64;
    let jmin = if first == 0 {
        0.0
    } else {
        bisect(model, ap, bp, grid(first), grid(first - 1))
    };
    let jmax = if last == steps {
        100.0
    } else {
        bisect(model, ap, bp, grid(last), grid(last + 1))
    };
    Some((jmin, jmax))
}

pub fn compute_jp_bounds(curve: &JabCurve, vc: &ViewingConditions) -> Result<JpBounds> {
    let model = Cam02Ucs::new(vc)?;
    let mut jmin = Vec::with_capacity(curve.len());
    let mut jmax = Vec::with_capacity(curve.len());
    for (index, p) in curve.points.iter().enumerate() {
        let (lo, hi) = jp_range_near(&model, p.ap, p.bp, Some(p.jp)).ok_or(Error::InfeasiblePoint {
            index,
            ap: p.ap,
            bp: p.bp,
        })?;
        jmin.push(lo);
        jmax.push(hi);
    }
    JpBounds::new(jmin, jmax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colorspace::SrgbColor;

    fn model() -> Cam02Ucs {
        Cam02Ucs::new(&ViewingConditions::default()).unwrap()
    }

    #[test]
    fn achromatic_axis_spans_everything() {
        let (lo, hi) = jp_range(&model(), 0.0, 0.0).unwrap();
        assert_eq!(lo, 0.0);
        assert_eq!(hi, 100.0);
    }

    #[test]
    fn saturated_yellow_needs_light() {
        let m = model();
        let y = m.srgb_to_jab(SrgbColor::new(1.0, 0.95, 0.05));
        let (lo, hi) = jp_range(&m, y.ap, y.bp).unwrap();
        assert!(lo > 50.0, "jmin {lo}");
        assert!(lo <= y.jp + 1e-3 && y.jp <= hi + 1e-3);
    }

    #[test]
    fn cusp_found_through_hint() {
        let m = model();
        let y = m.srgb_to_jab(SrgbColor::new(1.0, 1.0, 0.0));
        assert!(jp_range(&m, y.ap, y.bp).is_none());
        let (lo, hi) = jp_range_near(&m, y.ap, y.bp, Some(y.jp)).unwrap();
        assert!(lo <= y.jp && y.jp <= hi && hi - lo < 0.5);
    }

    #[test]
    fn far_out_chroma_is_infeasible() {
        let curve = JabCurve::new(vec![JabColor::new(50.0, 0.0, 0.0), JabColor::new(50.0, 90.0, 90.0)]);
        let err = compute_jp_bounds(&curve, &ViewingConditions::default()).unwrap_err();
        assert!(matches!(err, Error::InfeasiblePoint { index: 1, .. }));
    }
}
