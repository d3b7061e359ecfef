//! Colormap optimization for color vision deficiency.

pub mod analyze;
pub mod builtins;
pub mod cli;
pub mod colormap;
pub mod colorspace;
pub mod cvd;
pub mod error;
pub mod io;
pub mod mat3;
pub mod optimize;

pub use colormap::Colormap;
pub use colorspace::{Cam02Ucs, JabColor, LinearRgb, SrgbColor, Surround, ViewingConditions};
pub use cvd::{CvdKind, CvdSpec};
pub use error::{Error, Result};
pub use optimize::{optimize_colormap, optimize_with_report, LinearizationMethod, OptimizeOptions};
