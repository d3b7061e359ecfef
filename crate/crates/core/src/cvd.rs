//! Color-vision-deficiency simulation with the Machado, Oliveira & Fernandes
//! (2009) matrices.
//!
//! Each deficiency kind has eleven published matrices at severities
//! 0, 10, ..., 100 that act on linear RGB. Intermediate severities are
//! interpolated entry-wise.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::colorspace::{linear_to_srgb, srgb_to_linear, LinearRgb, SrgbColor};
use crate::error::{Error, Result};
use crate::mat3::Mat3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CvdKind {
    Deuteranomaly,
    Protanomaly,
    Tritanomaly,
}

impl CvdKind {
    pub const ALL: [CvdKind; 3] = [CvdKind::Deuteranomaly, CvdKind::Protanomaly, CvdKind::Tritanomaly];

    pub fn as_str(self) -> &'static str {
        match self {
            CvdKind::Deuteranomaly => "deuteranomaly",
            CvdKind::Protanomaly => "protanomaly",
            CvdKind::Tritanomaly => "tritanomaly",
        }
    }

    fn table(self) -> &'static [Mat3; 11] {
        match self {
            CvdKind::Deuteranomaly => &DEUTERANOMALY,
            CvdKind::Protanomaly => &PROTANOMALY,
            CvdKind::Tritanomaly => &TRITANOMALY,
        }
    }
}

impl fmt::Display for CvdKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CvdKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "deuteranomaly" | "deutan" | "deuteranopia" | "d" => Ok(CvdKind::Deuteranomaly),
            "protanomaly" | "protan" | "protanopia" | "p" => Ok(CvdKind::Protanomaly),
            "tritanomaly" | "tritan" | "tritanopia" | "t" => Ok(CvdKind::Tritanomaly),
            other => Err(Error::InvalidArgument(format!(
                "unknown CVD type '{other}' (expected deuteranomaly, protanomaly or tritanomaly)"
            ))),
        }
    }
}

/// Deficiency kind plus severity on the 0 (normal vision) to 100 (dichromacy)
/// scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CvdSpec {
    pub kind: CvdKind,
    pub severity: f64,
}

impl CvdSpec {
    pub fn new(kind: CvdKind, severity: f64) -> Result<Self> {
        let spec = CvdSpec { kind, severity };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=100.0).contains(&self.severity) {
            return Err(Error::InvalidArgument(format!(
                "CVD severity must be in [0, 100], got {}",
                self.severity
            )));
        }
        Ok(())
    }
}

impl fmt::Display for CvdSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind, self.severity)
    }
}

/// 3x3 simulation matrix acting on linear RGB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvdMatrix(pub Mat3);

impl CvdMatrix {
    pub fn rows(&self) -> [[f64; 3]; 3] {
        self.0 .0
    }

    pub fn apply(&self, c: LinearRgb) -> LinearRgb {
        LinearRgb::from_array(self.0.apply(c.to_array()))
    }
}

pub fn machado_matrix(spec: CvdSpec) -> Result<CvdMatrix> {
    spec.validate()?;
    let table = spec.kind.table();
    let pos = spec.severity / 10.0;
    let low = (pos.floor() as usize).min(10);
    if low == 10 {
        return Ok(CvdMatrix(table[10]));
    }
    let frac = pos - low as f64;
    Ok(CvdMatrix(table[low].lerp(&table[low + 1], frac)))
}

/// Applies a precomputed matrix: decode, multiply, clamp in linear light,
/// re-encode. The result is always displayable.
pub fn simulate_with_matrix(c: SrgbColor, m: &CvdMatrix) -> SrgbColor {
    let lin = m.apply(srgb_to_linear(c));
    let clamped = LinearRgb::new(lin.r.clamp(0.0, 1.0), lin.g.clamp(0.0, 1.0), lin.b.clamp(0.0, 1.0));
    linear_to_srgb(clamped)
}

pub fn simulate_cvd(c: SrgbColor, spec: CvdSpec) -> Result<SrgbColor> {
    Ok(simulate_with_matrix(c, &machado_matrix(spec)?))
}

pub const DEFAULT_GAMUT_RESOLUTION: usize = 64;

fn pack(px: [u8; 3]) -> u32 {
    u32::from(px[0]) << 16 | u32::from(px[1]) << 8 | u32::from(px[2])
}

/// Fraction of distinct 8-bit sRGB colors that remain distinct after
/// simulation, sampled on a `grid_resolution`^3 lattice of the sRGB cube.
pub fn gamut_fraction(kind: CvdKind, severity: f64, grid_resolution: usize) -> Result<f64> {
    if grid_resolution < 16 {
        return Err(Error::InvalidArgument(format!(
            "gamut lattice resolution must be >= 16, got {grid_resolution}"
        )));
    }
    let m = machado_matrix(CvdSpec::new(kind, severity)?)?;
    let step = 1.0 / (grid_resolution - 1) as f64;
    let mut inputs = HashSet::new();
    let mut outputs = HashSet::new();
    for i in 0..grid_resolution {
        for j in 0..grid_resolution {
            for k in 0..grid_resolution {
                let c = SrgbColor::new(i as f64 * step, j as f64 * step, k as f64 * step);
                inputs.insert(pack(c.to_rgb8()));
                outputs.insert(pack(simulate_with_matrix(c, &m).to_rgb8()));
            }
        }
    }
    Ok(outputs.len() as f64 / inputs.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deut(sev: f64) -> CvdSpec {
        CvdSpec::new(CvdKind::Deuteranomaly, sev).unwrap()
    }

    #[test]
    fn severity_zero_is_identity() {
        for kind in CvdKind::ALL {
            let m = machado_matrix(CvdSpec::new(kind, 0.0).unwrap()).unwrap();
            assert_eq!(m.0, Mat3::IDENTITY);
        }
    }

    #[test]
    fn published_rows_sum_to_one() {
        for kind in CvdKind::ALL {
            for m in kind.table() {
                for s in m.row_sums() {
                    assert!((s - 1.0).abs() < 2e-6, "{kind}: {s}");
                }
            }
        }
    }

    #[test]
    fn deuteranopia_matrix() {
        let m = machado_matrix(deut(100.0)).unwrap();
        assert_eq!(m.rows()[0], [0.367322, 0.860646, -0.227968]);
        assert_eq!(m.rows()[2], [-0.011820, 0.042940, 0.968881]);
    }

    #[test]
    fn interpolates_between_tabulated() {
        let m55 = machado_matrix(deut(55.0)).unwrap();
        let m50 = DEUTERANOMALY[5];
        let m60 = DEUTERANOMALY[6];
        for i in 0..3 {
            for j in 0..3 {
                let mid = 0.5 * (m50.0[i][j] + m60.0[i][j]);
                assert!((m55.0 .0[i][j] - mid).abs() < 1e-12);
            }
        }
        // colorspacious reference at 53.1: 0.31 * m60 + 0.69 * m50
        let m = machado_matrix(deut(53.1)).unwrap();
        assert!((m.0 .0[0][0] - (0.31 * 0.498864 + 0.69 * 0.547494)).abs() < 1e-9);
    }

    #[test]
    fn rejects_out_of_range_severity() {
        assert!(CvdSpec::new(CvdKind::Protanomaly, 100.5).is_err());
        let bad = CvdSpec { kind: CvdKind::Protanomaly, severity: -1.0 };
        assert!(machado_matrix(bad).is_err());
        assert!(simulate_cvd(SrgbColor::WHITE, bad).is_err());
    }

    #[test]
    fn grays_are_fixed_points() {
        for kind in CvdKind::ALL {
            for g in [0.0, 0.2, 0.5, 0.8, 1.0] {
                let out = simulate_cvd(SrgbColor::gray(g), CvdSpec::new(kind, 100.0).unwrap()).unwrap();
                for c in out.to_array() {
                    assert!((c - g).abs() < 1e-4);
                }
            }
        }
    }

    #[test]
    fn red_turns_brownish_yellow_for_deuteranope() {
        // Direct application of the published matrix: linear red (1, 0, 0)
        // becomes the first column, clamped.
        let out = simulate_cvd(SrgbColor::new(1.0, 0.0, 0.0), deut(100.0)).unwrap();
        let expect = linear_to_srgb(LinearRgb::new(0.367322, 0.280085, 0.0));
        assert!((out.r - expect.r).abs() < 1e-12);
        assert!((out.g - expect.g).abs() < 1e-12);
        assert_eq!(out.b, 0.0);
        assert!(out.r > out.g && out.g > out.b);
    }

    #[test]
    fn gamut_fraction_rejects_coarse_grid() {
        assert!(gamut_fraction(CvdKind::Deuteranomaly, 50.0, 8).is_err());
    }

    #[test]
    fn gamut_fraction_identity() {
        assert_eq!(gamut_fraction(CvdKind::Tritanomaly, 0.0, 16).unwrap(), 1.0);
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("Deuteranomaly".parse::<CvdKind>().unwrap(), CvdKind::Deuteranomaly);
        assert_eq!("protan".parse::<CvdKind>().unwrap(), CvdKind::Protanomaly);
        assert!("achromatopsia".parse::<CvdKind>().is_err());
    }
}

// Published matrices, severities 0, 10, ..., 100.
const PROTANOMALY: [Mat3; 11] = [
    Mat3([[1.000000, 0.000000, 0.000000], [0.000000, 1.000000, 0.000000], [0.000000, 0.000000, 1.000000]]),
    Mat3([[0.856167, 0.182038, -0.038205], [0.029342, 0.955115, 0.015544], [-0.002880, -0.001563, 1.004443]]),
    Mat3([[0.734766, 0.334872, -0.069637], [0.051840, 0.919198, 0.028963], [-0.004928, -0.004209, 1.009137]]),
    Mat3([[0.630323, 0.465641, -0.095964], [0.069181, 0.890046, 0.040773], [-0.006308, -0.007724, 1.014032]]),
    Mat3([[0.539009, 0.579343, -0.118352], [0.082546, 0.866121, 0.051332], [-0.007136, -0.011959, 1.019095]]),
    Mat3([[0.458064, 0.679578, -0.137642], [0.092785, 0.846313, 0.060902], [-0.007494, -0.016807, 1.024301]]),
    Mat3([[0.385450, 0.769005, -0.154455], [0.100526, 0.829802, 0.069673], [-0.007442, -0.022190, 1.029632]]),
    Mat3([[0.319627, 0.849633, -0.169261], [0.106241, 0.815969, 0.077790], [-0.007025, -0.028051, 1.035076]]),
    Mat3([[0.259411, 0.923008, -0.182420], [0.110296, 0.804340, 0.085364], [-0.006276, -0.034346, 1.040622]]),
    Mat3([[0.203876, 0.990338, -0.194214], [0.112975, 0.794542, 0.092483], [-0.005222, -0.041043, 1.046265]]),
    Mat3([[0.152286, 1.052583, -0.204868], [0.114503, 0.786281, 0.099216], [-0.003882, -0.048116, 1.051998]]),
];

const DEUTERANOMALY: [Mat3; 11] = [
    Mat3([[1.000000, 0.000000, 0.000000], [0.000000, 1.000000, 0.000000], [0.000000, 0.000000, 1.000000]]),
    Mat3([[0.866435, 0.177704, -0.044139], [0.049567, 0.939063, 0.011370], [-0.003453, 0.007233, 0.996220]]),
    Mat3([[0.760729, 0.319078, -0.079807], [0.090568, 0.889315, 0.020117], [-0.006027, 0.013325, 0.992702]]),
    Mat3([[0.675425, 0.433850, -0.109275], [0.125303, 0.847755, 0.026942], [-0.007950, 0.018572, 0.989378]]),
    Mat3([[0.605511, 0.528560, -0.134071], [0.155318, 0.812366, 0.032316], [-0.009376, 0.023176, 0.986200]]),
    Mat3([[0.547494, 0.607765, -0.155259], [0.181692, 0.781742, 0.036566], [-0.010410, 0.027275, 0.983136]]),
    Mat3([[0.498864, 0.674741, -0.173604], [0.205199, 0.754872, 0.039929], [-0.011131, 0.030969, 0.980162]]),
    Mat3([[0.457771, 0.731899, -0.189670], [0.226409, 0.731012, 0.042579], [-0.011595, 0.034333, 0.977261]]),
    Mat3([[0.422823, 0.781057, -0.203881], [0.245752, 0.709602, 0.044646], [-0.011843, 0.037423, 0.974421]]),
    Mat3([[0.392952, 0.823610, -0.216562], [0.263559, 0.690210, 0.046232], [-0.011910, 0.040281, 0.971630]]),
    Mat3([[0.367322, 0.860646, -0.227968], [0.280085, 0.672501, 0.047413], [-0.011820, 0.042940, 0.968881]]),
];

const TRITANOMALY: [Mat3; 11] = [
    Mat3([[1.000000, 0.000000, 0.000000], [0.000000, 1.000000, 0.000000], [0.000000, 0.000000, 1.000000]]),
    Mat3([[0.926670, 0.092514, -0.019184], [0.021191, 0.964503, 0.014306], [0.008437, 0.054813, 0.936750]]),
    Mat3([[0.895720, 0.133330, -0.029050], [0.029997, 0.945400, 0.024603], [0.013027, 0.104707, 0.882266]]),
    Mat3([[0.905871, 0.127791, -0.033662], [0.026856, 0.941251, 0.031893], [0.013410, 0.148296, 0.838294]]),
    Mat3([[0.948035, 0.089490, -0.037526], [0.014364, 0.946792, 0.038844], [0.010853, 0.193991, 0.795156]]),
    Mat3([[1.017277, 0.027029, -0.044306], [-0.006113, 0.958479, 0.047634], [0.006379, 0.248708, 0.744913]]),
    Mat3([[1.104996, -0.046633, -0.058363], [-0.032137, 0.971635, 0.060503], [0.001336, 0.317922, 0.680742]]),
    Mat3([[1.193214, -0.109812, -0.083402], [-0.058496, 0.979410, 0.079086], [-0.002346, 0.403492, 0.598854]]),
    Mat3([[1.257728, -0.139648, -0.118081], [-0.078003, 0.975409, 0.102594], [-0.003316, 0.501214, 0.502102]]),
    Mat3([[1.278864, -0.125333, -0.153531], [-0.084748, 0.957674, 0.127074], [-0.000989, 0.601151, 0.399838]]),
    Mat3([[1.255528, -0.076749, -0.178779], [-0.078411, 0.930809, 0.147602], [0.004733, 0.691367, 0.303900]]),
];
