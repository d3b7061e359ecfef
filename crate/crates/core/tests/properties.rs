use proptest::prelude::*;

use cvdmap::analyze::{cdps, grayscale_jp, kovesi_test_image, perceptual_deltas, SamplePath, ScalarImage};
use cvdmap::colorspace::{clamp_gamut, linear_to_srgb, srgb_to_linear, Cam02Ucs};
use cvdmap::cvd::simulate_cvd;
use cvdmap::io::{lut_bytes, parse_lut, parse_table, write_table, TableScale};
use cvdmap::optimize::{
    jp_range, max_range_line, resample_equidistant, JabCurve, JpBounds, GAMUT_EPS,
};
use cvdmap::{Colormap, CvdKind, CvdSpec, JabColor, SrgbColor, ViewingConditions};

fn model() -> Cam02Ucs {
    Cam02Ucs::new(&ViewingConditions::default()).unwrap()
}

fn unit() -> impl Strategy<Value = f64> {
    0.0..=1.0f64
}

fn color() -> impl Strategy<Value = SrgbColor> {
    (unit(), unit(), unit()).prop_map(|(r, g, b)| SrgbColor::new(r, g, b))
}

fn kind() -> impl Strategy<Value = CvdKind> {
    prop_oneof![Just(CvdKind::Deuteranomaly), Just(CvdKind::Protanomaly), Just(CvdKind::Tritanomaly)]
}

/// Random bounds that admit at least the line `b + m t`.
fn feasible_bounds(n: usize) -> impl Strategy<Value = JpBounds> {
    (10.0..90.0f64, -1.0..1.0f64, prop::collection::vec((0.5..20.0f64, 0.5..20.0f64), n)).prop_map(
        move |(mid, m, margins)| {
            let b = mid - m * (n - 1) as f64 / 2.0;
            let mut jmin = Vec::with_capacity(n);
            let mut jmax = Vec::with_capacity(n);
            for (t, (lo, hi)) in margins.into_iter().enumerate() {
                let y = (b + m * t as f64).clamp(0.0, 100.0);
                jmin.push((y - lo).max(0.0));
                jmax.push((y + hi).min(100.0));
            }
            JpBounds::new(jmin, jmax).unwrap()
        },
    )
}

/// Largest slope on a `step` grid for which some intercept keeps every point
/// inside the bounds. The intercept window for a fixed slope is checked
/// exactly: near the optimum it is narrower than any fixed grid.
fn brute_force_slope(b: &JpBounds, step: f64) -> Option<f64> {
    let n = b.len();
    let k_max = (100.0 / step).ceil() as i64;
    (-k_max..=k_max).rev().map(|k| k as f64 * step).find(|&m| {
        let lo = (0..n).map(|t| b.jmin[t] - m * t as f64).fold(f64::NEG_INFINITY, f64::max);
        let hi = (0..n).map(|t| b.jmax[t] - m * t as f64).fold(f64::INFINITY, f64::min);
        lo <= hi
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn transfer_round_trip(c in -0.2..1.2f64) {
        let s = SrgbColor::gray(c);
        let back = linear_to_srgb(srgb_to_linear(s));
        prop_assert!((back.r - c).abs() < 1e-12);
    }

    #[test]
    fn jab_round_trip(c in color()) {
        let m = model();
        let back = m.jab_to_srgb(m.srgb_to_jab(c)).unwrap();
        for (a, b) in back.to_array().into_iter().zip(c.to_array()) {
            prop_assert!((a - b).abs() < 1e-6, "{:?} -> {:?}", c, back);
        }
    }

    #[test]
    fn grays_are_achromatic(g in unit()) {
        let j = model().srgb_to_jab(SrgbColor::gray(g));
        prop_assert!(j.ap.abs() <= 1e-6 && j.bp.abs() <= 1e-6, "{:?}", j);
    }

    #[test]
    fn gray_lightness_is_monotone(g1 in 0.01..1.0f64, dg in 1e-6..0.5f64) {
        let m = model();
        let g2 = (g1 + dg).min(1.0);
        prop_assume!(g2 > g1);
        prop_assert!(m.srgb_to_jab(SrgbColor::gray(g2)).jp > m.srgb_to_jab(SrgbColor::gray(g1)).jp);
    }

    #[test]
    fn clamp_is_idempotent(r in -1.0..2.0f64, g in -1.0..2.0f64, b in -1.0..2.0f64) {
        let once = clamp_gamut(SrgbColor::new(r, g, b));
        prop_assert!(once.in_gamut());
        prop_assert_eq!(clamp_gamut(once), once);
    }

    #[test]
    fn zero_severity_is_identity(c in color(), k in kind()) {
        let s = simulate_cvd(c, CvdSpec::new(k, 0.0).unwrap()).unwrap();
        for (a, b) in s.to_array().into_iter().zip(c.to_array()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn simulation_is_continuous_in_severity(c in color(), k in kind(), s in 0.0..99.0f64) {
        let a = simulate_cvd(c, CvdSpec::new(k, s).unwrap()).unwrap();
        let b = simulate_cvd(c, CvdSpec::new(k, s + 1e-7).unwrap()).unwrap();
        for (x, y) in a.to_array().into_iter().zip(b.to_array()) {
            prop_assert!((x - y).abs() < 1e-4);
        }
    }

    #[test]
    fn simulation_stays_displayable(c in color(), k in kind(), s in 0.0..=100.0f64) {
        prop_assert!(simulate_cvd(c, CvdSpec::new(k, s).unwrap()).unwrap().in_gamut());
    }

    #[test]
    fn byte_table_round_trip(px in prop::collection::vec(any::<[u8; 3]>(), 2..40)) {
        let m = Colormap::new("t", px.iter().map(|&p| SrgbColor::from_rgb8(p)).collect()).unwrap();
        let mut buf = Vec::new();
        write_table(&m, &mut buf, TableScale::Byte).unwrap();
        let back = parse_table(std::str::from_utf8(&buf).unwrap(), "t").unwrap();
        let bytes: Vec<[u8; 3]> = back.entries().iter().map(|c| c.to_rgb8()).collect();
        prop_assert_eq!(bytes, px);
        prop_assert_eq!(back.entries(), m.entries());
    }

    #[test]
    fn unit_table_round_trip(cs in prop::collection::vec(color(), 2..40)) {
        let m = Colormap::new("t", cs).unwrap();
        let mut buf = Vec::new();
        write_table(&m, &mut buf, TableScale::Unit).unwrap();
        let back = parse_table(std::str::from_utf8(&buf).unwrap(), "t").unwrap();
        for (a, b) in back.entries().iter().zip(m.entries()) {
            for (x, y) in a.to_array().into_iter().zip(b.to_array()) {
                prop_assert!((x - y).abs() <= 5e-9);
            }
        }
    }

    #[test]
    fn lut_round_trip(px in prop::collection::vec(any::<[u8; 3]>(), 256)) {
        let m = Colormap::new("t", px.iter().map(|&p| SrgbColor::from_rgb8(p)).collect()).unwrap();
        let bytes = lut_bytes(&m).unwrap();
        prop_assert_eq!(bytes.len(), 768);
        let back = parse_lut(&bytes, "t").unwrap();
        prop_assert_eq!(back.entries(), m.entries());
    }

    #[test]
    fn deltas_sum_to_path_length(cs in prop::collection::vec(color(), 2..30)) {
        let m = Colormap::new("t", cs).unwrap();
        let model = model();
        let jab: Vec<JabColor> = m.entries().iter().map(|&c| model.srgb_to_jab(c)).collect();
        let length: f64 = jab.windows(2).map(|w| w[0].distance(&w[1])).sum();
        let deltas = perceptual_deltas(&m, &ViewingConditions::default()).unwrap();
        prop_assert_eq!(deltas.len(), m.len() - 1);
        prop_assert!((deltas.iter().sum::<f64>() - length).abs() < 1e-9 * (1.0 + length));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bounded_line_matches_brute_force(b in feasible_bounds(16)) {
        let line = max_range_line(&b, true).unwrap();
        for t in 0..b.len() {
            let y = line.at(t as f64);
            prop_assert!(y >= b.jmin[t] - 1e-9 && y <= b.jmax[t] + 1e-9);
        }
        let step = 1e-3;
        let brute = brute_force_slope(&b, step).unwrap();
        prop_assert!(brute <= line.slope + 1e-9, "brute {} exact {}", brute, line.slope);
        prop_assert!(line.slope - brute <= step + 1e-9, "brute {} exact {}", brute, line.slope);
    }

    #[test]
    fn decreasing_line_is_mirror(b in feasible_bounds(12)) {
        let up = max_range_line(&b, true).unwrap();
        let down = max_range_line(&b, false).unwrap();
        prop_assert!(down.slope <= up.slope + 1e-12);
    }

    #[test]
    fn arcs_resample_evenly(
        cx in -20.0..20.0f64, cy in -20.0..20.0f64, r in 10.0..50.0f64,
        start in 0.0..6.28f64, span in 0.5..3.14f64, n_out in 16usize..300,
    ) {
        let pts: Vec<JabColor> = (0..20)
            .map(|i| {
                let a = start + span * i as f64 / 19.0;
                JabColor::new(30.0 + i as f64, cx + r * a.cos(), cy + r * a.sin())
            })
            .collect();
        let curve = JabCurve::new(pts);
        let out = resample_equidistant(&curve, n_out).unwrap();
        prop_assert_eq!(out.len(), n_out);
        prop_assert_eq!(out.points[0], curve.points[0]);
        prop_assert_eq!(out.points[n_out - 1], curve.points[19]);
        let chords = out.ab_chords();
        let mean = chords.iter().sum::<f64>() / chords.len() as f64;
        for c in &chords {
            prop_assert!((c - mean).abs() / mean < 0.005, "chord {} mean {}", c, mean);
        }
        let before = curve.ab_arc_length();
        prop_assert!((out.ab_arc_length() - before).abs() / before < 0.005);
    }

    #[test]
    fn cdps_scale_invariance(
        scale in 0.01..1000.0f64,
        offset in -5.0..5.0f64,
        data in prop::collection::vec(0.0..1.0f64, 40),
    ) {
        // random data: exact half-entry ties have probability zero
        let base = ScalarImage::new(40, 1, data).unwrap();
        let scaled = ScalarImage::new(40, 1, base.data().iter().map(|v| (v + offset) * scale).collect()).unwrap();
        let path = SamplePath::row(0, 40, 1).unwrap();
        let map = cvdmap::builtins::jet();
        let vc = ViewingConditions::default();
        let a = cdps(&base.normalized(), &path, &map, &vc).unwrap();
        let b = cdps(&scaled.normalized(), &path, &map, &vc).unwrap();
        prop_assert!((a.slope - b.slope).abs() < 1e-9 && (a.r2 - b.r2).abs() < 1e-9);
        for (x, y) in a.data_deltas.iter().zip(&b.data_deltas) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn gray_reference_is_self_consistent(
        jumps in prop::collection::vec((0usize..80, 0usize..64), 3..60),
    ) {
        let img = kovesi_test_image(256, 64, 8.0, 0.05).unwrap();
        let gray = grayscale_jp(256, &ViewingConditions::default()).unwrap();
        // alternate between the left and right thirds so each data delta is
        // large next to the one-entry quantization step
        let pts = jumps
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| (if i % 2 == 0 { x } else { 255 - x }, y))
            .collect();
        let path = SamplePath::new(pts, 256, 64).unwrap();
        let r = cdps(&img, &path, &gray, &ViewingConditions::default()).unwrap();
        prop_assert!((r.slope - 1.0).abs() < 0.01);
        prop_assert!(r.r2 >= 0.999, "r2 {}", r.r2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn bisection_matches_dense_scan(c in color()) {
        let m = model();
        let j = m.srgb_to_jab(c);
        let found = jp_range(&m, j.ap, j.bp);
        let valid = |jp: f64| {
            m.jab_to_srgb(JabColor::new(jp, j.ap, j.bp)).map(|s| s.in_gamut_eps(GAMUT_EPS)).unwrap_or(false)
        };
        let grid: Vec<f64> = (0..=10_000).map(|i| i as f64 / 100.0).collect();
        let first = grid.iter().copied().find(|&g| valid(g));
        let last = grid.iter().copied().rev().find(|&g| valid(g));
        match (found, first, last) {
            (Some((lo, hi)), Some(f), Some(l)) => {
                prop_assert!((lo - f).abs() < 0.02, "jmin {} scan {}", lo, f);
                prop_assert!((hi - l).abs() < 0.02, "jmax {} scan {}", hi, l);
            }
            // a range narrower than the scan step can be missed by the scan only
            (Some((lo, hi)), None, None) => prop_assert!(hi - lo < 0.02),
            (found, f, l) => prop_assert!(false, "bisection {:?} scan {:?}..{:?}", found, f, l),
        }
    }
}
