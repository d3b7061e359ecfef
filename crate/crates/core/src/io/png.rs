use std::path::Path;

use image::RgbImage;

use crate::analyze::{RgbRaster, ScalarImage};
use crate::error::{Error, Result};

pub fn export_png(raster: &RgbRaster, path: impl AsRef<Path>) -> Result<()> {
    let (w, h) = (raster.width as u32, raster.height as u32);
    let buf: Vec<u8> = raster.pixels.iter().flatten().copied().collect();
    let img = RgbImage::from_raw(w, h, buf)
        .ok_or_else(|| Error::InvalidArgument("raster size does not match its pixel buffer".into()))?;
    img.save_with_format(path, image::ImageFormat::Png)?;
    Ok(())
}

/// Decodes any PNG to 8-bit RGB.
pub fn load_png(path: impl AsRef<Path>) -> Result<RgbRaster> {
    let img = image::open(path)?.to_rgb8();
    let (w, h) = img.dimensions();
    let pixels = img.pixels().map(|p| p.0).collect();
    RgbRaster::new(w as usize, h as usize, pixels)
}

/// Mean of the three channels, scaled to [0, 1].
pub fn raster_to_scalar(raster: &RgbRaster) -> Result<ScalarImage> {
    let data = raster
        .pixels
        .iter()
        .map(|p| (p[0] as f64 + p[1] as f64 + p[2] as f64) / (3.0 * 255.0))
        .collect();
    ScalarImage::new(raster.width, raster.height, data)
}
