//! Conversions between sRGB, linear RGB, CIE XYZ and CIECAM02-UCS (J'a'b').
//!
//! The forward chain is sRGB -> linear RGB -> XYZ (D65, 0..100 scale) ->
//! CIECAM02 (J, M, h) -> CAM02-UCS. The inverse is the analytic CIECAM02
//! inverse, so a J'a'b' point that lies outside the display gamut comes back
//! as an sRGB triplet with channels outside [0, 1]. Clamping is always an
//! explicit, separate step ([`clamp_gamut`]).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat3::Mat3;

/// Gamma-encoded sRGB triplet. Channels are nominally in [0, 1] but values
/// outside that range are allowed for pre-clamp intermediates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SrgbColor {
    pub r: f64,
    pub g: f64,
    pub b: f64,
}

impl SrgbColor {
    pub const BLACK: SrgbColor = SrgbColor::new(0.0, 0.0, 0.0);
    pub const WHITE: SrgbColor = SrgbColor::new(1.0, 1.0, 1.0);

    pub const fn new(r: f64, g: f64, b: f64) -> Self {
        SrgbColor { r, g, b }
    }

    pub const fn gray(v: f64) -> Self {
        SrgbColor { r: v, g: v, b: v }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.r, self.g, self.b]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        SrgbColor::new(a[0], a[1], a[2])
    }

    pub fn in_gamut(&self) -> bool {
        self.in_gamut_eps(0.0)
    }

    /// True when every channel lies in `[-eps, 1 + eps]`.
    pub fn in_gamut_eps(&self, eps: f64) -> bool {
        self.to_array()
            .iter()
            .all(|c| c.is_finite() && *c >= -eps && *c <= 1.0 + eps)
    }

    /// 8-bit quantization with round-half-up.
    pub fn to_rgb8(self) -> [u8; 3] {
        [to_byte(self.r), to_byte(self.g), to_byte(self.b)]
    }

    pub fn from_rgb8(px: [u8; 3]) -> Self {
        SrgbColor::new(
            f64::from(px[0]) / 255.0,
            f64::from(px[1]) / 255.0,
            f64::from(px[2]) / 255.0,
        )
    }
}

/// Round-half-up to a byte, saturating outside [0, 1].
pub fn to_byte(c: f64) -> u8 {
    (c * 255.0 + 0.5).floor().clamp(0.0, 255.0) as u8
}

/// Linear-light RGB with sRGB primaries.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LinearRgb {
    pub r: f64,
    pub g: f64,
    pub b: f64,
}

impl LinearRgb {
    pub const fn new(r: f64, g: f64, b: f64) -> Self {
        LinearRgb { r, g, b }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.r, self.g, self.b]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        LinearRgb::new(a[0], a[1], a[2])
    }
}

/// A point in CAM02-UCS. Euclidean distance between two points is the
/// perceptual color difference used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct JabColor {
    pub jp: f64,
    pub ap: f64,
    pub bp: f64,
}

impl JabColor {
    pub const fn new(jp: f64, ap: f64, bp: f64) -> Self {
        JabColor { jp, ap, bp }
    }

    pub fn distance(&self, other: &JabColor) -> f64 {
        let dj = self.jp - other.jp;
        let da = self.ap - other.ap;
        let db = self.bp - other.bp;
        (dj * dj + da * da + db * db).sqrt()
    }

    /// Colorfulness correlate M' (radius in the a'b' plane).
    pub fn chroma(&self) -> f64 {
        self.ap.hypot(self.bp)
    }

    pub fn norm(&self) -> f64 {
        self.distance(&JabColor::default())
    }
}

const SRGB_THRESHOLD: f64 = 0.04045;
const LINEAR_THRESHOLD: f64 = SRGB_THRESHOLD / 12.92;

fn decode_channel(c: f64) -> f64 {
    let a = c.abs();
    let v = if a <= SRGB_THRESHOLD {
        a / 12.92
    } else {
        ((a + 0.055) / 1.055).powf(2.4)
    };
    v.copysign(c)
}

fn encode_channel(c: f64) -> f64 {
    let a = c.abs();
    let v = if a <= LINEAR_THRESHOLD {
        a * 12.92
    } else {
        1.055 * a.powf(1.0 / 2.4) - 0.055
    };
    v.copysign(c)
}

/// IEC 61966-2-1 decoding, extended to negative values by odd symmetry.
pub fn srgb_to_linear(c: SrgbColor) -> LinearRgb {
    LinearRgb::new(decode_channel(c.r), decode_channel(c.g), decode_channel(c.b))
}

/// Inverse of [`srgb_to_linear`].
pub fn linear_to_srgb(c: LinearRgb) -> SrgbColor {
    SrgbColor::new(encode_channel(c.r), encode_channel(c.g), encode_channel(c.b))
}

/// Absolute colorimetric clamp: every channel to `[0, 1]`, in-range values
/// untouched.
pub fn clamp_gamut(c: SrgbColor) -> SrgbColor {
    SrgbColor::new(c.r.clamp(0.0, 1.0), c.g.clamp(0.0, 1.0), c.b.clamp(0.0, 1.0))
}

/// Linear sRGB -> XYZ (Y of white = 1), IEC 61966-2-1.
pub const SRGB_TO_XYZ: Mat3 = Mat3([
    [0.4124, 0.3576, 0.1805],
    [0.2126, 0.7152, 0.0722],
    [0.0193, 0.1192, 0.9505],
]);

/// D65 as produced by the sRGB matrix for RGB = (1, 1, 1), on the 0..100 scale.
pub const D65_WHITE: [f64; 3] = [95.05, 100.0, 108.90];

const M_CAT02: Mat3 = Mat3([
    [0.7328, 0.4296, -0.1624],
    [-0.7036, 1.6975, 0.0061],
    [0.0030, 0.0136, 0.9834],
]);

// Hunt-Pointer-Estevez with the first row's last entry adjusted by 1e-5 so that
// every row sums to exactly one: equal-energy stimuli stay achromatic.
const M_HPE: Mat3 = Mat3([
    [0.38971, 0.68898, -0.07869],
    [-0.22981, 1.18340, 0.04641],
    [0.0, 0.0, 1.0],
]);

const UCS_C1: f64 = 0.007;
const UCS_C2: f64 = 0.0228;
const UCS_KL: f64 = 1.0;

/// CIE 159:2004 surround categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Surround {
    #[default]
    Average,
    Dim,
    Dark,
}

/// Surround constants: degree-of-adaptation factor `f`, impact of surround
/// `c` and chromatic induction factor `nc`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurroundParams {
    pub f: f64,
    pub c: f64,
    pub nc: f64,
}

impl Surround {
    pub fn params(self) -> SurroundParams {
        match self {
            Surround::Average => SurroundParams { f: 1.0, c: 0.69, nc: 1.0 },
            Surround::Dim => SurroundParams { f: 0.9, c: 0.59, nc: 0.9 },
            Surround::Dark => SurroundParams { f: 0.8, c: 0.525, nc: 0.8 },
        }
    }
}

fn default_true() -> bool {
    true
}

/// CIECAM02 viewing conditions.
///
/// Defaults follow the usual sRGB display convention: D65 white, average
/// surround, `L_A = 64 / (5 pi)` cd/m^2 and `Y_b = 20`. The observer is
/// assumed fully adapted to the display white (`discount_illuminant`), which
/// keeps neutral grays exactly on the achromatic axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViewingConditions {
    /// XYZ of the adapting white on the 0..100 scale.
    pub whitepoint: [f64; 3],
    #[serde(rename = "L_A")]
    pub adapting_luminance: f64,
    #[serde(rename = "Y_b")]
    pub background_luminance: f64,
    #[serde(default)]
    pub surround: Surround,
    /// Forces the degree of adaptation D to 1. When false, D is computed
    /// from the surround factor and `L_A`.
    #[serde(default = "default_true")]
    pub discount_illuminant: bool,
}

impl Default for ViewingConditions {
    fn default() -> Self {
        ViewingConditions {
            whitepoint: D65_WHITE,
            adapting_luminance: 64.0 / (5.0 * std::f64::consts::PI),
            background_luminance: 20.0,
            surround: Surround::Average,
            discount_illuminant: true,
        }
    }
}

impl ViewingConditions {
    pub fn validate(&self) -> Result<()> {
        let la = self.adapting_luminance;
        if !(la.is_finite() && la > 0.0) {
            return Err(Error::InvalidViewingConditions(format!("L_A must be > 0, got {la}")));
        }
        let yb = self.background_luminance;
        if !(yb.is_finite() && yb > 0.0 && yb <= 100.0) {
            return Err(Error::InvalidViewingConditions(format!(
                "Y_b must be in (0, 100], got {yb}"
            )));
        }
        if self.whitepoint.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidViewingConditions(format!(
                "whitepoint components must be positive, got {:?}",
                self.whitepoint
            )));
        }
        Ok(())
    }

    /// Degree of adaptation D.
    pub fn degree_of_adaptation(&self) -> f64 {
        if self.discount_illuminant {
            return 1.0;
        }
        let f = self.surround.params().f;
        let la = self.adapting_luminance;
        (f * (1.0 - (1.0 / 3.6) * ((-la - 42.0) / 92.0).exp())).clamp(0.0, 1.0)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let vc: ViewingConditions = serde_json::from_str(text)?;
        vc.validate()?;
        Ok(vc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("viewing conditions serialize")
    }
}

/// Precomputed CIECAM02 + CAM02-UCS transform for one set of viewing
/// conditions. Construct once and reuse for bulk conversions.
#[derive(Debug, Clone)]
pub struct Cam02Ucs {
    vc: ViewingConditions,
    srgb_to_xyz: Mat3,
    xyz_to_srgb: Mat3,
    cat02_inv: Mat3,
    hpe_from_cat02: Mat3,
    cat02_from_hpe: Mat3,
    d_rgb: [f64; 3],
    f_l: f64,
    f_l_quarter: f64,
    z: f64,
    n_bb: f64,
    n_cb: f64,
    c: f64,
    n_c: f64,
    a_w: f64,
    chroma_scale: f64,
}

impl Cam02Ucs {
    pub fn new(vc: &ViewingConditions) -> Result<Self> {
        vc.validate()?;
        let SurroundParams { c, nc: n_c, .. } = vc.surround.params();
        let xyz_w = vc.whitepoint;
        let la = vc.adapting_luminance;

        let rgb_w = M_CAT02.apply(xyz_w);
        let d = vc.degree_of_adaptation();
        let d_rgb = [
            d * xyz_w[1] / rgb_w[0] + 1.0 - d,
            d * xyz_w[1] / rgb_w[1] + 1.0 - d,
            d * xyz_w[1] / rgb_w[2] + 1.0 - d,
        ];

        let k = 1.0 / (5.0 * la + 1.0);
        let k4 = k.powi(4);
        let f_l = 0.2 * k4 * (5.0 * la) + 0.1 * (1.0 - k4).powi(2) * (5.0 * la).cbrt();
        let n = vc.background_luminance / xyz_w[1];
        let z = 1.48 + n.sqrt();
        let n_bb = 0.725 * (1.0 / n).powf(0.2);

        let cat02_inv = M_CAT02.inverse();
        let hpe_from_cat02 = M_HPE.mul(&cat02_inv);
        let cat02_from_hpe = M_CAT02.mul(&M_HPE.inverse());

        let mut model = Cam02Ucs {
            vc: *vc,
            srgb_to_xyz: SRGB_TO_XYZ,
            xyz_to_srgb: SRGB_TO_XYZ.inverse(),
            cat02_inv,
            hpe_from_cat02,
            cat02_from_hpe,
            d_rgb,
            f_l,
            f_l_quarter: f_l.powf(0.25),
            z,
            n_bb,
            n_cb: n_bb,
            c,
            n_c,
            a_w: 0.0,
            chroma_scale: (1.64 - 0.29f64.powf(n)).powf(0.73),
        };
        let rgb_wc = [d_rgb[0] * rgb_w[0], d_rgb[1] * rgb_w[1], d_rgb[2] * rgb_w[2]];
        let aw = model.compress(hpe_from_cat02.apply(rgb_wc));
        model.a_w = (2.0 * aw[0] + aw[1] + aw[2] / 20.0 - 0.305) * n_bb;
        Ok(model)
    }

    pub fn viewing_conditions(&self) -> &ViewingConditions {
        &self.vc
    }

    fn compress(&self, rgb_p: [f64; 3]) -> [f64; 3] {
        rgb_p.map(|v| {
            let t = (self.f_l * v.abs() / 100.0).powf(0.42);
            (400.0 * t / (t + 27.13)).copysign(v) + 0.1
        })
    }

    fn decompress(&self, rgb_a: [f64; 3]) -> Result<[f64; 3]> {
        let mut out = [0.0; 3];
        for (o, &ra) in out.iter_mut().zip(rgb_a.iter()) {
            let x = ra - 0.1;
            let ax = x.abs();
            if ax >= 400.0 {
                return Err(Error::Math(format!(
                    "post-adaptation response {ra:.3} is beyond the compression asymptote"
                )));
            }
            *o = ((100.0 / self.f_l) * (27.13 * ax / (400.0 - ax)).powf(1.0 / 0.42)).copysign(x);
        }
        Ok(out)
    }

    /// XYZ (0..100 scale) to CAM02-UCS.
    pub fn xyz_to_jab(&self, xyz: [f64; 3]) -> JabColor {
        let rgb = M_CAT02.apply(xyz);
        let rgb_c = [rgb[0] * self.d_rgb[0], rgb[1] * self.d_rgb[1], rgb[2] * self.d_rgb[2]];
        let ra = self.compress(self.hpe_from_cat02.apply(rgb_c));

        let a = ra[0] - 12.0 * ra[1] / 11.0 + ra[2] / 11.0;
        let b = (ra[0] + ra[1] - 2.0 * ra[2]) / 9.0;
        let h = b.atan2(a);

        let achromatic = (2.0 * ra[0] + ra[1] + ra[2] / 20.0 - 0.305) * self.n_bb;
        // Negative achromatic signal only happens for (near-)black stimuli.
        let j = if achromatic > 0.0 {
            100.0 * (achromatic / self.a_w).powf(self.c * self.z)
        } else {
            0.0
        };

        let e_t = 0.25 * ((h + 2.0).cos() + 3.8);
        let t = (50000.0 / 13.0) * self.n_c * self.n_cb * e_t * a.hypot(b)
            / (ra[0] + ra[1] + 21.0 / 20.0 * ra[2]);
        let chroma = t.max(0.0).powf(0.9) * (j / 100.0).sqrt() * self.chroma_scale;
        let m = chroma * self.f_l_quarter;

        let jp = (1.0 + 100.0 * UCS_C1) * j / (1.0 + UCS_C1 * j) / UCS_KL;
        let mp = (1.0 + UCS_C2 * m).ln() / UCS_C2;
        JabColor::new(jp, mp * h.cos(), mp * h.sin())
    }

    /// CAM02-UCS to XYZ (0..100 scale) through the analytic CIECAM02 inverse.
    pub fn jab_to_xyz(&self, jab: JabColor) -> Result<[f64; 3]> {
        let JabColor { jp, ap, bp } = jab;
        if !(jp.is_finite() && ap.is_finite() && bp.is_finite()) {
            return Err(Error::Math(format!("non-finite J'a'b' value {jab:?}")));
        }
        let mp = ap.hypot(bp);
        if jp <= 0.0 {
            if mp <= 1e-12 {
                return Ok([0.0; 3]);
            }
            return Err(Error::Math(format!(
                "J'={jp} with nonzero chroma M'={mp:.4} has no inverse"
            )));
        }
        let jp = jp * UCS_KL;
        let denom = 1.0 + 100.0 * UCS_C1 - UCS_C1 * jp;
        if denom <= 0.0 {
            return Err(Error::Math(format!("J'={jp} exceeds the UCS lightness asymptote")));
        }
        let j = jp / denom;
        let m = ((UCS_C2 * mp).exp() - 1.0) / UCS_C2;
        let h = bp.atan2(ap);
        let chroma = m / self.f_l_quarter;

        let t = (chroma / ((j / 100.0).sqrt() * self.chroma_scale)).powf(1.0 / 0.9);
        let e_t = 0.25 * ((h + 2.0).cos() + 3.8);
        let achromatic = self.a_w * (j / 100.0).powf(1.0 / (self.c * self.z));
        let p2 = achromatic / self.n_bb + 0.305;
        let p3 = 21.0 / 20.0;

        let (a, b) = if t > 0.0 {
            let p1 = (50000.0 / 13.0) * self.n_c * self.n_cb * e_t / t;
            let (sin_h, cos_h) = h.sin_cos();
            let num = p2 * (2.0 + p3) * (460.0 / 1403.0);
            let k2 = (2.0 + p3) * (220.0 / 1403.0);
            let k3 = -27.0 / 1403.0 + p3 * (6300.0 / 1403.0);
            // Divide by whichever of sin/cos is larger to stay well conditioned.
            if sin_h.abs() >= cos_h.abs() {
                let b = num / (p1 / sin_h + k2 * cos_h / sin_h + k3);
                (b * cos_h / sin_h, b)
            } else {
                let a = num / (p1 / cos_h + k2 + k3 * sin_h / cos_h);
                (a, a * sin_h / cos_h)
            }
        } else {
            (0.0, 0.0)
        };

        let ra = [
            (460.0 * p2 + 451.0 * a + 288.0 * b) / 1403.0,
            (460.0 * p2 - 891.0 * a - 261.0 * b) / 1403.0,
            (460.0 * p2 - 220.0 * a - 6300.0 * b) / 1403.0,
        ];
        let rgb_p = self.decompress(ra)?;
        let rgb_c = self.cat02_from_hpe.apply(rgb_p);
        let rgb = [rgb_c[0] / self.d_rgb[0], rgb_c[1] / self.d_rgb[1], rgb_c[2] / self.d_rgb[2]];
        Ok(self.cat02_inv.apply(rgb))
    }

    pub fn srgb_to_jab(&self, c: SrgbColor) -> JabColor {
        let lin = srgb_to_linear(c).to_array();
        let xyz = self.srgb_to_xyz.apply(lin).map(|v| v * 100.0);
        self.xyz_to_jab(xyz)
    }

    /// Unclamped inverse. Out-of-gamut J'a'b' points return channels outside
    /// [0, 1].
    pub fn jab_to_srgb(&self, jab: JabColor) -> Result<SrgbColor> {
        let xyz = self.jab_to_xyz(jab)?;
        let lin = self.xyz_to_srgb.apply(xyz.map(|v| v / 100.0));
        Ok(linear_to_srgb(LinearRgb::from_array(lin)))
    }
}

/// One-shot forward conversion. Prefer [`Cam02Ucs`] for bulk work.
pub fn srgb_to_jab(c: SrgbColor, vc: &ViewingConditions) -> Result<JabColor> {
    Ok(Cam02Ucs::new(vc)?.srgb_to_jab(c))
}

/// One-shot inverse conversion (unclamped).
pub fn jab_to_srgb(j: JabColor, vc: &ViewingConditions) -> Result<SrgbColor> {
    Cam02Ucs::new(vc)?.jab_to_srgb(j)
}
