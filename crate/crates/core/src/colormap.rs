use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::colorspace::SrgbColor;
use crate::error::{Error, Result};

/// An ordered list of sRGB entries plus free-form provenance metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Colormap {
    name: String,
    entries: Vec<SrgbColor>,
    #[serde(default)]
    metadata: BTreeMap<String, String>,
}

impl Colormap {
    pub fn new(name: impl Into<String>, entries: Vec<SrgbColor>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a colormap needs at least 2 entries, got {}",
                entries.len()
            )));
        }
        if let Some(i) = entries.iter().position(|c| !c.to_array().iter().all(|v| v.is_finite())) {
            return Err(Error::InvalidArgument(format!("entry {i} is not finite")));
        }
        Ok(Colormap {
            name: name.into(),
            entries,
            metadata: BTreeMap::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn entries(&self) -> &[SrgbColor] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn first(&self) -> SrgbColor {
        self.entries[0]
    }

    pub fn last(&self) -> SrgbColor {
        self.entries[self.entries.len() - 1]
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn set_meta(&mut self, key: impl Into<String>, value: impl ToString) {
        self.metadata.insert(key.into(), value.to_string());
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.set_meta(key, value);
        self
    }

    /// All channels within [0, 1].
    pub fn is_displayable(&self) -> bool {
        self.entries.iter().all(SrgbColor::in_gamut)
    }

    /// Piecewise-linear resampling by entry index, channel-wise in sRGB.
    pub fn resample_by_index(&self, n: usize) -> Result<Colormap> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("cannot resample to {n} entries")));
        }
        let src = &self.entries;
        let last = (src.len() - 1) as f64;
        let entries = (0..n)
            .map(|i| {
                let pos = i as f64 * last / (n - 1) as f64;
                let k = (pos.floor() as usize).min(src.len() - 2);
                let t = pos - k as f64;
                let (a, b) = (src[k].to_array(), src[k + 1].to_array());
                SrgbColor::from_array([0, 1, 2].map(|c| a[c] + t * (b[c] - a[c])))
            })
            .collect();
        let mut out = Colormap::new(self.name.clone(), entries)?;
        out.metadata = self.metadata.clone();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_short_maps() {
        assert!(Colormap::new("x", vec![SrgbColor::BLACK]).is_err());
        assert!(Colormap::new("x", vec![SrgbColor::BLACK, SrgbColor::new(f64::NAN, 0.0, 0.0)]).is_err());
    }

    #[test]
    fn resample_keeps_endpoints() {
        let m = Colormap::new("bw", vec![SrgbColor::BLACK, SrgbColor::WHITE]).unwrap();
        let r = m.resample_by_index(5).unwrap();
        assert_eq!(r.len(), 5);
        assert_eq!(r.first(), SrgbColor::BLACK);
        assert_eq!(r.last(), SrgbColor::WHITE);
        assert_eq!(r.entries()[2], SrgbColor::gray(0.5));
    }
}
