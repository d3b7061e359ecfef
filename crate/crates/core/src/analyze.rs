//! Colormap evaluation: perceptual delta profiles, colormap-data perceptual
//! sensitivity (CDPS), the Kovesi sine-ramp test image and overlays.

use serde::{Deserialize, Serialize};

use crate::colormap::Colormap;
use crate::colorspace::{clamp_gamut, Cam02Ucs, JabColor, SrgbColor, ViewingConditions};
use crate::error::{Error, Result};

/// Consecutive-entry Euclidean distances in J'a'b'.
pub fn perceptual_deltas(cmap: &Colormap, vc: &ViewingConditions) -> Result<Vec<f64>> {
    let model = Cam02Ucs::new(vc)?;
    Ok(perceptual_deltas_with(cmap, &model))
}

pub fn perceptual_deltas_with(cmap: &Colormap, model: &Cam02Ucs) -> Vec<f64> {
    let jab: Vec<JabColor> = cmap.entries().iter().map(|&c| model.srgb_to_jab(c)).collect();
    jab.windows(2).map(|w| w[1].distance(&w[0])).collect()
}

/// Largest absolute deviation of `values` from their mean.
pub fn max_deviation_from_mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max)
}

/// Entry index for a value in [0, 1]: `floor(v * (n - 1) + 0.5)`.
pub fn entry_index(v: f64, n: usize) -> Result<usize> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::InvalidArgument(format!("data value {v} is outside [0, 1]")));
    }
    Ok(((v * (n - 1) as f64 + 0.5).floor() as usize).min(n - 1))
}

/// Nearest-entry lookup.
pub fn value_to_color(v: f64, cmap: &Colormap) -> Result<SrgbColor> {
    Ok(cmap.entries()[entry_index(v, cmap.len())?])
}

/// Achromatic map whose J' rises linearly from 0 to 100.
pub fn grayscale_jp(n: usize, vc: &ViewingConditions) -> Result<Colormap> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("grayscale map needs >= 2 entries, got {n}")));
    }
    let model = Cam02Ucs::new(vc)?;
    let entries = (0..n)
        .map(|i| {
            let jp = 100.0 * i as f64 / (n - 1) as f64;
            let c = model.jab_to_srgb(JabColor::new(jp, 0.0, 0.0))?;
            let v = (c.r + c.g + c.b) / 3.0;
            Ok(clamp_gamut(SrgbColor::gray(v)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Colormap::new("grayscale-jp", entries)?.with_meta("description", "linear J' achromatic ramp"))
}

/// Row-major 2D scalar field; row 0 is the top of the image.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
    normalized: bool,
}

impl ScalarImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(Error::InvalidArgument(format!(
                "image of {width}x{height} cannot hold {} values",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite value at ({}, {})",
                i % width,
                i / width
            )));
        }
        let normalized = data.iter().all(|v| (0.0..=1.0).contains(v));
        Ok(ScalarImage { width, height, data, normalized })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if let Some(y) = rows.iter().position(|r| r.len() != width) {
            return Err(Error::InvalidArgument(format!(
                "row {y} has {} values, expected {width}",
                rows[y].len()
            )));
        }
        Self::new(width, height, rows.concat())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    /// All values lie in [0, 1].
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Min-max rescale to [0, 1]. A constant image becomes all zeros.
    pub fn normalize(&mut self) {
        let lo = self.data.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let span = hi - lo;
        for v in &mut self.data {
            *v = if span > 0.0 { ((*v - lo) / span).clamp(0.0, 1.0) } else { 0.0 };
        }
        self.normalized = true;
    }

    pub fn normalized(mut self) -> Self {
        self.normalize();
        self
    }
}

/// Ordered pixel coordinates `(x, y)` inside an image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplePath {
    points: Vec<(usize, usize)>,
}

impl SamplePath {
    pub fn new(points: Vec<(usize, usize)>, width: usize, height: usize) -> Result<Self> {
        if let Some(&(x, y)) = points.iter().find(|&&(x, y)| x >= width || y >= height) {
            return Err(Error::InvalidArgument(format!(
                "path point ({x}, {y}) is outside the {width}x{height} image"
            )));
        }
        Ok(SamplePath { points })
    }

    /// Rounds real coordinates to the nearest pixel.
    pub fn from_coords(coords: &[(f64, f64)], width: usize, height: usize) -> Result<Self> {
        let mut points = Vec::with_capacity(coords.len());
        for &(x, y) in coords {
            let (px, py) = ((x + 0.5).floor(), (y + 0.5).floor());
            if !(px >= 0.0 && py >= 0.0 && px < width as f64 && py < height as f64) {
                return Err(Error::InvalidArgument(format!(
                    "path point ({x}, {y}) is outside the {width}x{height} image"
                )));
            }
            points.push((px as usize, py as usize));
        }
        Ok(SamplePath { points })
    }

    /// Left-to-right along row `y`.
    pub fn row(y: usize, width: usize, height: usize) -> Result<Self> {
        Self::new((0..width).map(|x| (x, y)).collect(), width, height)
    }

    pub fn bottom_row(image: &ScalarImage) -> Self {
        SamplePath {
            points: (0..image.width()).map(|x| (x, image.height() - 1)).collect(),
        }
    }

    pub fn points(&self) -> &[(usize, usize)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Perceptual against data deltas along a path, with perceptual deltas
/// expressed in units of the grayscale reference's slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdpsResult {
    pub data_deltas: Vec<f64>,
    pub perceptual_deltas: Vec<f64>,
    pub slope: f64,
    pub r2: f64,
    /// Raw slope of the grayscale reference used as the unit.
    pub gray_slope: f64,
}

#[derive(Serialize)]
struct CdpsSummary {
    slope: f64,
    r2: f64,
    n_pairs: usize,
}

impl CdpsResult {
    pub fn n_pairs(&self) -> usize {
        self.data_deltas.len()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("data_delta,perceptual_delta\n");
        for (d, p) in self.data_deltas.iter().zip(&self.perceptual_deltas) {
            out.push_str(&format!("{d:.10},{p:.10}\n"));
        }
        out
    }

    /// `{slope, r2, n_pairs}`.
    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&CdpsSummary {
            slope: self.slope,
            r2: self.r2,
            n_pairs: self.n_pairs(),
        })
        .expect("plain numbers serialize")
    }
}

/// Least squares through the origin: slope and uncentered r².
pub fn fit_through_origin(x: &[f64], y: &[f64]) -> (f64, f64) {
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let syy: f64 = y.iter().map(|v| v * v).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - slope * a).powi(2)).sum();
    let r2 = if syy > 0.0 { (1.0 - ss_res / syy).max(0.0) } else { 0.0 };
    (slope, r2)
}

fn rendered_deltas(values: &[f64], cmap: &Colormap, model: &Cam02Ucs) -> Result<Vec<f64>> {
    let jab = values
        .iter()
        .map(|&v| value_to_color(v, cmap).map(|c| model.srgb_to_jab(c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(jab.windows(2).map(|w| w[1].distance(&w[0])).collect())
}

pub fn cdps(image: &ScalarImage, path: &SamplePath, cmap: &Colormap, vc: &ViewingConditions) -> Result<CdpsResult> {
    if !image.is_normalized() {
        return Err(Error::InvalidArgument("image must be normalized to [0, 1] first".into()));
    }
    if path.len() < 3 {
        return Err(Error::InvalidArgument(format!("path needs >= 3 points, got {}", path.len())));
    }
    if let Some(&(x, y)) = path.points().iter().find(|&&(x, y)| x >= image.width() || y >= image.height()) {
        return Err(Error::InvalidArgument(format!("path point ({x}, {y}) is outside the image")));
    }
    let model = Cam02Ucs::new(vc)?;
    let values: Vec<f64> = path.points().iter().map(|&(x, y)| image.get(x, y)).collect();
    let data_deltas: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    if data_deltas.iter().all(|&d| d == 0.0) {
        return Err(Error::Degenerate("all data deltas along the path are zero".into()));
    }

    let gray = grayscale_jp(cmap.len(), vc)?;
    let (gray_slope, _) = fit_through_origin(&data_deltas, &rendered_deltas(&values, &gray, &model)?);
    if !(gray_slope > 0.0) {
        return Err(Error::Degenerate(
            "data deltas are below the colormap's resolution; the grayscale reference is flat".into(),
        ));
    }
    let perceptual_deltas: Vec<f64> = rendered_deltas(&values, cmap, &model)?
        .into_iter()
        .map(|d| d / gray_slope)
        .collect();
    let (slope, r2) = fit_through_origin(&data_deltas, &perceptual_deltas);
    Ok(CdpsResult {
        data_deltas,
        perceptual_deltas,
        slope,
        r2,
        gray_slope,
    })
}

pub const KOVESI_WIDTH: usize = 512;
pub const KOVESI_HEIGHT: usize = 128;
pub const KOVESI_WAVELENGTH: f64 = 8.0;
pub const KOVESI_AMPLITUDE: f64 = 0.05;

/// Linear ramp with a superimposed sine whose amplitude grows from 0 on the
/// bottom row to `max_amplitude` on the top row.
pub fn kovesi_test_image(width: usize, height: usize, wavelength_px: f64, max_amplitude: f64) -> Result<ScalarImage> {
    if !(wavelength_px > 0.0) || !max_amplitude.is_finite() || max_amplitude < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "bad test image parameters: wavelength {wavelength_px}, amplitude {max_amplitude}"
        )));
    }
    if height == 0 || (width as f64) < 2.0 * wavelength_px || width < 2 {
        return Err(Error::InvalidArgument(format!(
            "width {width} must be at least twice the wavelength {wavelength_px} (and height > 0)"
        )));
    }
    let mut data = Vec::with_capacity(width * height);
    for y in 0..height {
        let amp = if height > 1 {
            max_amplitude * (height - 1 - y) as f64 / (height - 1) as f64
        } else {
            0.0
        };
        for x in 0..width {
            let phase = 2.0 * std::f64::consts::PI * x as f64 / wavelength_px;
            data.push((x as f64 / (width - 1) as f64 + amp * phase.sin()).clamp(0.0, 1.0));
        }
    }
    ScalarImage::new(width, height, data)
}

/// 8-bit RGB raster, row-major, row 0 on top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbRaster {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<[u8; 3]>,
}

impl RgbRaster {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>) -> Result<Self> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(Error::InvalidArgument(format!(
                "raster of {width}x{height} cannot hold {} pixels",
                pixels.len()
            )));
        }
        Ok(RgbRaster { width, height, pixels })
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        self.pixels[y * self.width + x]
    }
}

pub fn overlay(image: &ScalarImage, cmap: &Colormap) -> Result<RgbRaster> {
    if !image.is_normalized() {
        return Err(Error::InvalidArgument("image must be normalized to [0, 1] first".into()));
    }
    let pixels = image
        .data()
        .iter()
        .map(|&v| value_to_color(v, cmap).map(SrgbColor::to_rgb8))
        .collect::<Result<Vec<_>>>()?;
    RgbRaster::new(image.width(), image.height(), pixels)
}

/// A strip sweeping the colormap left to right.
pub fn ramp_raster(cmap: &Colormap, width: usize, height: usize) -> Result<RgbRaster> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidArgument(format!("empty ramp {width}x{height}")));
    }
    let row = (0..width)
        .map(|x| {
            let v = if width > 1 { x as f64 / (width - 1) as f64 } else { 0.0 };
            value_to_color(v, cmap).map(SrgbColor::to_rgb8)
        })
        .collect::<Result<Vec<_>>>()?;
    RgbRaster::new(width, height, row.repeat(height))
}
