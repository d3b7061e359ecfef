use std::fs;
use std::path::Path;

use crate::colormap::Colormap;
use crate::colorspace::SrgbColor;
use crate::error::{Error, Result};

/// Entries in an ImageJ LUT.
pub const LUT_ENTRIES: usize = 256;
/// Bytes in a raw ImageJ LUT: all reds, then greens, then blues.
pub const LUT_LEN: usize = 3 * LUT_ENTRIES;

/// Raw LUT bytes. Maps with a size other than 256 are resampled by index
/// first, with a warning.
pub fn lut_bytes(cmap: &Colormap) -> Result<Vec<u8>> {
    let resampled;
    let cmap = if cmap.len() == LUT_ENTRIES {
        cmap
    } else {
        log::warn!(
            "colormap '{}' has {} entries; resampling to {LUT_ENTRIES} for the LUT",
            cmap.name(),
            cmap.len()
        );
        resampled = cmap.resample_by_index(LUT_ENTRIES)?;
        &resampled
    };
    let mut out = vec![0u8; LUT_LEN];
    for (i, c) in cmap.entries().iter().enumerate() {
        let [r, g, b] = c.to_rgb8();
        out[i] = r;
        out[LUT_ENTRIES + i] = g;
        out[2 * LUT_ENTRIES + i] = b;
    }
    Ok(out)
}

pub fn export_lut(cmap: &Colormap, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, lut_bytes(cmap)?)?;
    Ok(())
}

pub fn parse_lut(bytes: &[u8], name: &str) -> Result<Colormap> {
    if bytes.len() != LUT_LEN {
        return Err(Error::InvalidArgument(format!(
            "a raw LUT is exactly {LUT_LEN} bytes, got {}",
            bytes.len()
        )));
    }
    let entries = (0..LUT_ENTRIES)
        .map(|i| SrgbColor::from_rgb8([bytes[i], bytes[LUT_ENTRIES + i], bytes[2 * LUT_ENTRIES + i]]))
        .collect();
    Colormap::new(name, entries)
}

pub fn load_lut(path: impl AsRef<Path>) -> Result<Colormap> {
    let path = path.as_ref();
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("lut");
    parse_lut(&fs::read(path)?, stem)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn black_is_zero() {
        let m = Colormap::new("k", vec![SrgbColor::BLACK; 256]).unwrap();
        assert_eq!(lut_bytes(&m).unwrap(), vec![0u8; 768]);
    }

    #[test]
    fn resamples_other_sizes() {
        let m = Colormap::new("bw", vec![SrgbColor::BLACK, SrgbColor::WHITE]).unwrap();
        let b = lut_bytes(&m).unwrap();
        assert_eq!(b.len(), 768);
        assert_eq!((b[0], b[255], b[256 + 255], b[767]), (0, 255, 255, 255));
    }

    #[test]
    fn parse_round_trip() {
        let m = Colormap::new("g", (0..256).map(|i| SrgbColor::from_rgb8([i as u8, 255 - i as u8, 7]))
            .collect()).unwrap();
        let back = parse_lut(&lut_bytes(&m).unwrap(), "g").unwrap();
        assert_eq!(back.entries(), m.entries());
        assert!(parse_lut(&[0u8; 767], "x").is_err());
    }
}
