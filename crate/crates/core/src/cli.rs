//! Command-line interface.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand};

use crate::analyze::{
    cdps, kovesi_test_image, overlay, ramp_raster, RgbRaster, SamplePath, ScalarImage, KOVESI_AMPLITUDE,
    KOVESI_HEIGHT, KOVESI_WAVELENGTH, KOVESI_WIDTH,
};
use crate::builtins::BUILTIN_NAMES;
use crate::colormap::Colormap;
use crate::colorspace::{SrgbColor, ViewingConditions};
use crate::cvd::{gamut_fraction, machado_matrix, simulate_with_matrix, CvdKind, CvdSpec, DEFAULT_GAMUT_RESOLUTION};
use crate::error::{Error, Result};
use crate::io::{
    export_lut, export_png, load_colormap, load_png, load_viewing_conditions, parse_value_grid, raster_to_scalar,
    write_sidecar, write_table, TableScale,
};
use crate::optimize::{optimize_with_report, LinearizationMethod, OptimizeOptions};

const VERSION: &str = concat!("cvdmap ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Parser)]
#[command(name = "cvdmap", version, about = "Optimize colormaps for color vision deficiency")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimize a colormap for a given deficiency.
    Optimize(OptimizeArgs),
    /// Apply a deficiency simulation to a colormap or a PNG.
    Simulate(SimulateArgs),
    /// Colormap-data perceptual sensitivity along a path in an image.
    Cdps(CdpsArgs),
    /// Write a Kovesi sine-ramp test image.
    Testimage(TestImageArgs),
    /// Fraction of distinct sRGB colors that stay distinct under simulation.
    GamutFraction(GamutArgs),
    /// List built-in colormaps.
    List,
}

#[derive(Debug, Args)]
pub struct CvdArgs {
    /// deuteranomaly, protanomaly or tritanomaly
    #[arg(long = "cvd-type", default_value = "deuteranomaly")]
    pub kind: CvdKind,
    /// 0 (normal vision) to 100 (dichromacy)
    #[arg(long, default_value_t = 100.0)]
    pub severity: f64,
}

impl CvdArgs {
    fn spec(&self) -> Result<CvdSpec> {
        CvdSpec::new(self.kind, self.severity)
    }
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// Table/LUT file or built-in name
    #[arg(long, short)]
    pub input: String,
    #[command(flatten)]
    pub cvd: CvdArgs,
    /// fit (least-squares J' line) or max-range
    #[arg(long, default_value = "max-range")]
    pub method: LinearizationMethod,
    /// Number of output entries
    #[arg(long, default_value_t = 256)]
    pub size: usize,
    #[arg(long)]
    pub out_table: Option<PathBuf>,
    #[arg(long)]
    pub out_lut: Option<PathBuf>,
    /// Colormap ramp image
    #[arg(long)]
    pub out_png: Option<PathBuf>,
    #[arg(long, default_value = "unit")]
    pub table_scale: TableScale,
    /// JSON file with whitepoint, L_A, Y_b, surround
    #[arg(long)]
    pub viewing_conditions: Option<PathBuf>,
    /// Mean relative clamp error that triggers a warning
    #[arg(long, default_value_t = 0.01)]
    pub warn_threshold: f64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Table/LUT file, built-in name, or a .png image
    #[arg(long, short)]
    pub input: String,
    #[command(flatten)]
    pub cvd: CvdArgs,
    /// Output table (maps) or PNG (images); a table goes to stdout if omitted
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "unit")]
    pub table_scale: TableScale,
}

#[derive(Debug, Args)]
pub struct CdpsArgs {
    /// PNG, or a text grid of numbers
    #[arg(long)]
    pub image: PathBuf,
    /// CSV of x,y pixel coordinates; defaults to the bottom row
    #[arg(long)]
    pub path: Option<PathBuf>,
    /// Table/LUT file or built-in name
    #[arg(long)]
    pub map: String,
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
    #[arg(long)]
    pub out_json: Option<PathBuf>,
    #[arg(long)]
    pub viewing_conditions: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TestImageArgs {
    #[arg(long, default_value_t = KOVESI_WIDTH)]
    pub width: usize,
    #[arg(long, default_value_t = KOVESI_HEIGHT)]
    pub height: usize,
    /// Sine wavelength in pixels
    #[arg(long, default_value_t = KOVESI_WAVELENGTH)]
    pub wavelength: f64,
    /// Sine amplitude on the top row
    #[arg(long, default_value_t = KOVESI_AMPLITUDE)]
    pub amplitude: f64,
    /// Colormap to render with; grayscale bytes if omitted
    #[arg(long)]
    pub overlay: Option<String>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Raw values as a comma-separated grid
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GamutArgs {
    #[arg(long = "cvd-type", default_value = "deuteranomaly")]
    pub kind: CvdKind,
    /// Comma-separated severities
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0, 100.0])]
    pub severity: Vec<f64>,
    /// Lattice points per channel
    #[arg(long, default_value_t = DEFAULT_GAMUT_RESOLUTION)]
    pub resolution: usize,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

/// Parses `argv` (including the program name) and runs it, writing normal
/// output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let mut text = e.render().to_string();
            if code != 0 && !text.contains("Usage:") {
                text = format!("{text}\n{}\n", Cli::command().render_usage());
            }
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

fn viewing_conditions(path: Option<&Path>) -> Result<ViewingConditions> {
    match path {
        Some(p) => load_viewing_conditions(p),
        None => Ok(ViewingConditions::default()),
    }
}

fn is_png(path: &str) -> bool {
    Path::new(path)
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("png"))
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Optimize(a) => cmd_optimize(a, out, err),
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Cdps(a) => cmd_cdps(a, out),
        Command::Testimage(a) => cmd_testimage(a, err),
        Command::GamutFraction(a) => cmd_gamut(a, out),
        Command::List => {
            for n in BUILTIN_NAMES {
                writeln!(out, "{n}")?;
            }
            Ok(())
        }
    }
}

fn write_table_to(cmap: &Colormap, path: Option<&Path>, scale: TableScale, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => {
            let mut buf = Vec::new();
            write_table(cmap, &mut buf, scale)?;
            fs::write(p, buf)?;
        }
        None => write_table(cmap, &mut *out, scale)?,
    }
    Ok(())
}

fn cmd_optimize(a: OptimizeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let vc = viewing_conditions(a.viewing_conditions.as_deref())?;
    let input = load_colormap(&a.input)?;
    let opts = OptimizeOptions {
        viewing_conditions: vc,
        n_out: a.size,
        clamp_warn_threshold: a.warn_threshold,
        ..OptimizeOptions::new(a.cvd.spec()?, a.method)
    };
    let (mut cmap, report) = optimize_with_report(&input, &opts)?;
    cmap.set_meta(
        "command",
        format!(
            "optimize --input {} --cvd-type {} --severity {} --method {} --size {}",
            a.input, a.cvd.kind, a.cvd.severity, a.method, a.size
        ),
    );

    let any_file = a.out_table.is_some() || a.out_lut.is_some() || a.out_png.is_some();
    if a.out_table.is_some() || !any_file {
        write_table_to(&cmap, a.out_table.as_deref(), a.table_scale, out)?;
    }
    if let Some(p) = &a.out_lut {
        export_lut(&cmap, p)?;
        write_sidecar(p, cmap.metadata())?;
    }
    if let Some(p) = &a.out_png {
        export_png(&ramp_raster(&cmap, cmap.len(), 32)?, p)?;
        write_sidecar(p, cmap.metadata())?;
    }
    writeln!(
        err,
        "{}: {} -> {} entries, J' {:.3} to {:.3}, mean clamp error {:.3}%, max channel clamp {:.4}",
        VERSION,
        input.name(),
        cmap.len(),
        report.line.at(0.0),
        report.line.at((cmap.len() - 1) as f64),
        100.0 * report.clamp.mean_relative_error,
        report.clamp.max_channel
    )?;
    Ok(())
}

fn cmd_simulate(a: SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let spec = a.cvd.spec()?;
    let matrix = machado_matrix(spec)?;
    if is_png(&a.input) {
        let raster = load_png(&a.input)?;
        let pixels = raster
            .pixels
            .iter()
            .map(|&p| simulate_with_matrix(SrgbColor::from_rgb8(p), &matrix).to_rgb8())
            .collect();
        let sim = RgbRaster::new(raster.width, raster.height, pixels)?;
        let path = a
            .out
            .ok_or_else(|| Error::InvalidArgument("simulating a PNG needs --out".into()))?;
        export_png(&sim, &path)?;
        let mut meta = BTreeMap::new();
        meta.insert("source".to_string(), a.input.clone());
        meta.insert("cvd".to_string(), spec.to_string());
        meta.insert("tool".to_string(), VERSION.to_string());
        write_sidecar(&path, &meta)?;
        return Ok(());
    }
    let cmap = load_colormap(&a.input)?;
    let entries = cmap.entries().iter().map(|&c| simulate_with_matrix(c, &matrix)).collect();
    let sim = Colormap::new(format!("{}-{}", cmap.name(), spec.kind), entries)?
        .with_meta("source", cmap.name())
        .with_meta("cvd", spec)
        .with_meta("tool", VERSION);
    match a.out.as_deref() {
        Some(p) if is_png(&p.to_string_lossy()) => {
            export_png(&ramp_raster(&sim, sim.len(), 32)?, p)?;
            write_sidecar(p, sim.metadata())?;
            Ok(())
        }
        p => write_table_to(&sim, p, a.table_scale, out),
    }
}

fn load_scalar_image(path: &Path) -> Result<ScalarImage> {
    if is_png(&path.to_string_lossy()) {
        raster_to_scalar(&load_png(path)?)
    } else {
        ScalarImage::from_rows(parse_value_grid(&fs::read_to_string(path)?)?)
    }
}

fn load_path(path: &Path, image: &ScalarImage) -> Result<SamplePath> {
    let rows = parse_value_grid(&fs::read_to_string(path)?)?;
    if rows.first().is_some_and(|r| r.len() != 2) {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "path files need two columns: x,y".into(),
        });
    }
    let coords: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[1])).collect();
    SamplePath::from_coords(&coords, image.width(), image.height())
}

fn cmd_cdps(a: CdpsArgs, out: &mut dyn Write) -> Result<()> {
    let vc = viewing_conditions(a.viewing_conditions.as_deref())?;
    let image = load_scalar_image(&a.image)?.normalized();
    let path = match &a.path {
        Some(p) => load_path(p, &image)?,
        None => SamplePath::bottom_row(&image),
    };
    let cmap = load_colormap(&a.map)?;
    let result = cdps(&image, &path, &cmap, &vc)?;
    if let Some(p) = &a.out_csv {
        fs::write(p, result.to_csv())?;
    }
    let json = result.summary_json();
    if let Some(p) = &a.out_json {
        fs::write(p, json.clone() + "\n")?;
    }
    writeln!(out, "{json}")?;
    Ok(())
}

fn cmd_testimage(a: TestImageArgs, err: &mut dyn Write) -> Result<()> {
    let image = kovesi_test_image(a.width, a.height, a.wavelength, a.amplitude)?;
    if a.out.is_none() && a.out_csv.is_none() {
        return Err(Error::InvalidArgument("testimage needs --out and/or --out-csv".into()));
    }
    let mut meta = BTreeMap::new();
    meta.insert("width".to_string(), a.width.to_string());
    meta.insert("height".to_string(), a.height.to_string());
    meta.insert("wavelength_px".to_string(), a.wavelength.to_string());
    meta.insert("max_amplitude".to_string(), a.amplitude.to_string());
    meta.insert("tool".to_string(), VERSION.to_string());
    if let Some(p) = &a.out {
        let raster = match &a.overlay {
            Some(name) => {
                meta.insert("overlay".to_string(), name.clone());
                overlay(&image, &load_colormap(name)?)?
            }
            None => {
                let px = image.data().iter().map(|&v| [crate::colorspace::to_byte(v); 3]).collect();
                RgbRaster::new(image.width(), image.height(), px)?
            }
        };
        export_png(&raster, p)?;
        write_sidecar(p, &meta)?;
        writeln!(err, "wrote {}", p.display())?;
    }
    if let Some(p) = &a.out_csv {
        let mut text = String::new();
        for y in 0..image.height() {
            let row: Vec<String> = image.row(y).iter().map(|v| format!("{v:.10}")).collect();
            text.push_str(&row.join(","));
            text.push('\n');
        }
        fs::write(p, text)?;
    }
    Ok(())
}

fn cmd_gamut(a: GamutArgs, out: &mut dyn Write) -> Result<()> {
    let mut text = String::from("severity,gamut_fraction\n");
    for &s in &a.severity {
        let f = gamut_fraction(a.kind, s, a.resolution)?;
        text.push_str(&format!("{s},{f:?}\n"));
    }
    match &a.out {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}
