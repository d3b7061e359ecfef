//! Replacement of J' by a straight line in the colormap index.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{JabCurve, JpBounds};

/// `J'(t) = intercept + slope * t` for index `t = 0..N-1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
}

impl Line {
    pub fn at(&self, t: f64) -> f64 {
        self.intercept + self.slope * t
    }
}

/// Ordinary least-squares fit of `values` against their index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub line: Line,
    /// Coefficient of determination; 1 when the values are constant.
    pub r2: f64,
}

pub fn fit_line(values: &[f64]) -> Result<LineFit> {
    let n = values.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("line fit needs >= 2 values, got {n}")));
    }
    let nf = n as f64;
    let t_mean = (nf - 1.0) / 2.0;
    let y_mean = values.iter().sum::<f64>() / nf;
    let (mut sty, mut stt) = (0.0, 0.0);
    for (t, y) in values.iter().enumerate() {
        let dt = t as f64 - t_mean;
        sty += dt * (y - y_mean);
        stt += dt * dt;
    }
    let slope = sty / stt;
    let line = Line {
        slope,
        intercept: y_mean - slope * t_mean,
    };
    let ss_tot: f64 = values.iter().map(|y| (y - y_mean).powi(2)).sum();
    let ss_res: f64 = values
        .iter()
        .enumerate()
        .map(|(t, y)| (y - line.at(t as f64)).powi(2))
        .sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(LineFit { line, r2 })
}

fn with_line(curve: &JabCurve, line: Line) -> JabCurve {
    let mut out = curve.clone();
    for (t, p) in out.points.iter_mut().enumerate() {
        p.jp = line.at(t as f64);
    }
    out
}

/// Fits a line to the existing J' trend and substitutes it. Never fails
/// on gamut grounds; callers inspect the clamp diagnostics afterwards.
pub fn linearize_fit_original(curve: &JabCurve) -> Result<(JabCurve, LineFit)> {
    let fit = fit_line(&curve.jp_values())?;
    Ok((with_line(curve, fit.line), fit))
}

const FEASIBILITY_TOL: f64 = 1e-9;

/// Steepest line `beta + m * t` that stays inside `[jmin[t], jmax[t]]` for
/// every index, with `m` pushed toward the sign of `increasing`. Among lines
/// of equal slope the brightest (largest intercept) wins.
///
/// Feasible slopes form the interval `[m_lo, m_hi]` where, over all index
/// pairs `i < j`,
/// `m_hi = min (jmax[j] - jmin[i]) / (j - i)` and
/// `m_lo = max (jmin[j] - jmax[i]) / (j - i)`,
/// so the optimum is exact without a general LP solver.
pub fn max_range_line(bounds: &JpBounds, increasing: bool) -> Result<Line> {
    let n = bounds.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("bounds need >= 2 points, got {n}")));
    }
    for t in 0..n {
        if bounds.jmin[t] > bounds.jmax[t] + FEASIBILITY_TOL {
            return Err(Error::NoFeasibleLine {
                detail: format!(
                    "empty interval at index {t}: jmin {:.4} > jmax {:.4}",
                    bounds.jmin[t], bounds.jmax[t]
                ),
            });
        }
    }
    let mut m_hi = f64::INFINITY;
    let mut m_lo = f64::NEG_INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let dt = (j - i) as f64;
            m_hi = m_hi.min((bounds.jmax[j] - bounds.jmin[i]) / dt);
            m_lo = m_lo.max((bounds.jmin[j] - bounds.jmax[i]) / dt);
        }
    }
    if m_lo > m_hi + FEASIBILITY_TOL {
        return Err(Error::NoFeasibleLine {
            detail: format!("slope interval is empty: needs m >= {m_lo:.5} and m <= {m_hi:.5}"),
        });
    }
    let slope = if increasing { m_hi } else { m_lo };
    let beta_lo = (0..n)
        .map(|t| bounds.jmin[t] - slope * t as f64)
        .fold(f64::NEG_INFINITY, f64::max);
    let beta_hi = (0..n)
        .map(|t| bounds.jmax[t] - slope * t as f64)
        .fold(f64::INFINITY, f64::min);
    let intercept = if beta_hi >= beta_lo {
        beta_hi
    } else {
        // only reachable through rounding at a pinch
        0.5 * (beta_lo + beta_hi)
    };
    Ok(Line { slope, intercept })
}

/// Trend direction used by the max-range method.
pub fn is_increasing(curve: &JabCurve) -> bool {
    match (curve.points.first(), curve.points.last()) {
        (Some(a), Some(b)) => b.jp >= a.jp,
        _ => true,
    }
}

pub fn linearize_max_range(curve: &JabCurve, bounds: &JpBounds) -> Result<(JabCurve, Line)> {
    if bounds.len() != curve.len() {
        return Err(Error::InvalidArgument(format!(
            "bounds cover {} points but the curve has {}",
            bounds.len(),
            curve.len()
        )));
    }
    let line = max_range_line(bounds, is_increasing(curve))?;
    Ok((with_line(curve, line), line))
}
