//! Equal-arc-length resampling of a J'a'b' curve in the a'b' plane.

use crate::colorspace::JabColor;
use crate::error::{Error, Result};

use super::JabCurve;

/// Number of points in the densified path.
pub const DENSE_POINTS: usize = 10_000;

/// Paths shorter than this (in a'b' units) are treated as achromatic.
pub const MIN_ARC_LENGTH: f64 = 1e-6;

fn lerp(a: JabColor, b: JabColor, t: f64) -> JabColor {
    JabColor::new(
        a.jp + t * (b.jp - a.jp),
        a.ap + t * (b.ap - a.ap),
        a.bp + t * (b.bp - a.bp),
    )
}

/// Piecewise-linear densification against the index parameter. The
/// original vertices are always included so the dense polyline traces
/// exactly the same path as the input.
pub fn densify(points: &[JabColor], n_dense: usize) -> Vec<JabColor> {
    let segments = points.len() - 1;
    let step = segments as f64 / (n_dense.max(2) - 1) as f64;
    let mut out = Vec::with_capacity(n_dense + points.len());
    let mut k = 0usize;
    for seg in 0..segments {
        out.push(points[seg]);
        // interior samples strictly inside (seg, seg + 1)
        loop {
            let s = k as f64 * step;
            if s <= seg as f64 {
                k += 1;
                continue;
            }
            if s >= (seg + 1) as f64 {
                break;
            }
            out.push(lerp(points[seg], points[seg + 1], s - seg as f64));
            k += 1;
        }
    }
    out.push(points[segments]);
    out
}

/// Cumulative a'b' arc length, starting at 0.
pub fn cumulative_ab_length(points: &[JabColor]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(points.len());
    out.push(0.0);
    for w in points.windows(2) {
        acc += (w[1].ap - w[0].ap).hypot(w[1].bp - w[0].bp);
        out.push(acc);
    }
    out
}

/// Selects `n_out` points at equal a'b' arc-length spacing along the curve.
/// J' rides along by interpolation at the same arc-length positions.
pub fn resample_equidistant(curve: &JabCurve, n_out: usize) -> Result<JabCurve> {
    if n_out < 2 {
        return Err(Error::InvalidArgument(format!("n_out must be >= 2, got {n_out}")));
    }
    if curve.len() < 2 {
        return Err(Error::InvalidArgument("curve needs at least 2 points".into()));
    }
    let dense = densify(&curve.points, DENSE_POINTS);
    let cum = cumulative_ab_length(&dense);
    let total = *cum.last().unwrap();
    if !(total > MIN_ARC_LENGTH) {
        return Err(Error::Degenerate(format!(
            "a'b' path length {total:.3e} is zero; the curve has no hue variation"
        )));
    }
    let spacing = total / (n_out - 1) as f64;
    let mut out = Vec::with_capacity(n_out);
    out.push(dense[0]);
    let mut seg = 0usize;
    for i in 1..n_out - 1 {
        let target = i as f64 * spacing;
        while seg + 2 < cum.len() && cum[seg + 1] < target {
            seg += 1;
        }
        let len = cum[seg + 1] - cum[seg];
        let t = if len > 0.0 { (target - cum[seg]) / len } else { 0.0 };
        out.push(lerp(dense[seg], dense[seg + 1], t.clamp(0.0, 1.0)));
    }
    out.push(*dense.last().unwrap());
    Ok(JabCurve::new(out))
}

/// Index-parameterized linear resampling, used for achromatic paths where
/// arc length carries no information.
pub fn resample_by_index(curve: &JabCurve, n_out: usize) -> Result<JabCurve> {
    if n_out < 2 || curve.len() < 2 {
        return Err(Error::InvalidArgument("resampling needs at least 2 points in and out".into()));
    }
    let pts = &curve.points;
    let last = (pts.len() - 1) as f64;
    let out = (0..n_out)
        .map(|i| {
            let pos = i as f64 * last / (n_out - 1) as f64;
            let k = (pos.floor() as usize).min(pts.len() - 2);
            lerp(pts[k], pts[k + 1], pos - k as f64)
        })
        .collect();
    Ok(JabCurve::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab(points: &[(f64, f64)]) -> JabCurve {
        JabCurve::new(points.iter().map(|&(a, b)| JabColor::new(50.0, a, b)).collect())
    }

    #[test]
    fn densify_keeps_vertices_and_size() {
        let c = ab(&[(0.0, 0.0), (3.0, 0.0), (3.0, 4.0)]);
        let d = densify(&c.points, 101);
        assert!(d.len() >= 101 && d.len() <= 104);
        assert!(d.iter().any(|p| p.ap == 3.0 && p.bp == 0.0));
        assert_eq!(d[0], c.points[0]);
        assert_eq!(*d.last().unwrap(), c.points[2]);
        let cum = cumulative_ab_length(&d);
        assert!((cum.last().unwrap() - 7.0).abs() < 1e-12);
    }

    #[test]
    fn already_equispaced_is_unchanged() {
        let c = ab(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]);
        let r = resample_equidistant(&c, 4).unwrap();
        for (p, q) in r.points.iter().zip(c.points.iter()) {
            assert!((p.ap - q.ap).abs() < 1e-12 && (p.bp - q.bp).abs() < 1e-12);
        }
    }

    #[test]
    fn right_angle_path() {
        let c = ab(&[(0.0, 0.0), (3.0, 0.0), (3.0, 4.0)]);
        let r = resample_equidistant(&c, 8).unwrap();
        assert_eq!(r.len(), 8);
        for w in r.points.windows(2) {
            let chord = (w[1].ap - w[0].ap).hypot(w[1].bp - w[0].bp);
            assert!((chord - 1.0).abs() < 1e-9, "chord {chord}");
        }
        // the corner is sample 3
        assert!((r.points[3].ap - 3.0).abs() < 1e-9 && r.points[3].bp.abs() < 1e-9);
    }

    #[test]
    fn carries_lightness() {
        let c = JabCurve::new(vec![JabColor::new(0.0, 0.0, 0.0), JabColor::new(90.0, 9.0, 0.0)]);
        let r = resample_equidistant(&c, 10).unwrap();
        for p in &r.points {
            assert!((p.jp - 10.0 * p.ap).abs() < 1e-9);
        }
    }

    #[test]
    fn degenerate_path_errors() {
        let c = JabCurve::new(vec![JabColor::new(10.0, 0.0, 0.0), JabColor::new(90.0, 0.0, 0.0)]);
        assert!(matches!(resample_equidistant(&c, 16), Err(Error::Degenerate(_))));
    }

    #[test]
    fn by_index_endpoints() {
        let c = JabCurve::new(vec![JabColor::new(10.0, 0.0, 0.0), JabColor::new(90.0, 0.0, 0.0)]);
        let r = resample_by_index(&c, 5).unwrap();
        assert_eq!(r.points[0].jp, 10.0);
        assert_eq!(r.points[2].jp, 50.0);
        assert_eq!(r.points[4].jp, 90.0);
    }
}
