use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::colormap::Colormap;
use crate::colorspace::{to_byte, SrgbColor};
use crate::error::{Error, Result};

/// Value scale of a colormap table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableScale {
    /// Reals in [0, 1].
    #[default]
    Unit,
    /// Integers in [0, 255].
    Byte,
}

impl TableScale {
    pub fn as_str(self) -> &'static str {
        match self {
            TableScale::Unit => "unit",
            TableScale::Byte => "byte",
        }
    }
}

impl fmt::Display for TableScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "unit" | "float" | "01" => Ok(TableScale::Unit),
            "byte" | "8bit" | "255" => Ok(TableScale::Byte),
            other => Err(Error::InvalidArgument(format!("unknown table scale '{other}' (unit or byte)"))),
        }
    }
}

/// Writes `# key: value` comment lines followed by one `r,g,b` row per entry.
pub fn write_table<W: Write>(cmap: &Colormap, mut w: W, scale: TableScale) -> Result<()> {
    writeln!(w, "# name: {}", cmap.name())?;
    writeln!(w, "# scale: {scale}")?;
    for (k, v) in cmap.metadata() {
        if k == "name" || k == "scale" {
            continue;
        }
        // keep each comment on one line
        writeln!(w, "# {k}: {}", v.replace(['\n', '\r'], " "))?;
    }
    for c in cmap.entries() {
        match scale {
            TableScale::Unit => writeln!(w, "{:.8},{:.8},{:.8}", c.r, c.g, c.b)?,
            TableScale::Byte => writeln!(w, "{},{},{}", to_byte(c.r), to_byte(c.g), to_byte(c.b))?,
        }
    }
    Ok(())
}

pub fn export_table(cmap: &Colormap, path: impl AsRef<Path>, scale: TableScale) -> Result<()> {
    let mut buf = Vec::new();
    write_table(cmap, &mut buf, scale)?;
    fs::write(path, buf)?;
    Ok(())
}

fn split_fields(line: &str) -> Vec<&str> {
    if line.contains(',') {
        line.split(',').map(str::trim).collect()
    } else if line.contains('\t') {
        line.split('\t').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    }
}

/// Numeric rows of a delimited text file with their 1-based line numbers.
/// Blank lines and `#` comments are skipped.
fn numeric_rows(text: &str) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for (j, field) in split_fields(line).into_iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line: i + 1,
                column: j + 1,
                message: format!("'{field}' is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line: i + 1,
                    column: j + 1,
                    message: format!("'{field}' is not finite"),
                });
            }
            row.push(v);
        }
        rows.push((i + 1, row));
    }
    Ok(rows)
}

/// Parses an RGB table. Comma, tab and whitespace delimiters are accepted.
/// The scale comes from a `# scale:` header if present, otherwise values
/// above 1 mean byte scale.
pub fn parse_table(text: &str, name: &str) -> Result<Colormap> {
    let mut meta = Vec::new();
    for line in text.lines() {
        if let Some((k, v)) = line.trim().strip_prefix('#').and_then(|c| c.split_once(':')) {
            meta.push((k.trim().to_string(), v.trim().to_string()));
        }
    }
    let rows = numeric_rows(text)?;
    for (line, row) in &rows {
        if row.len() != 3 {
            return Err(Error::Parse {
                line: *line,
                column: row.len().min(3) + 1,
                message: format!("expected 3 columns (R, G, B), found {}", row.len()),
            });
        }
    }
    let declared = meta
        .iter()
        .find(|(k, _)| k == "scale")
        .and_then(|(_, v)| v.parse::<TableScale>().ok());
    let max = rows.iter().flat_map(|(_, r)| r.iter().copied()).fold(0.0, f64::max);
    let scale = declared.unwrap_or(if max > 1.0 { TableScale::Byte } else { TableScale::Unit });
    let limit = match scale {
        TableScale::Unit => 1.0,
        TableScale::Byte => 255.0,
    };
    let mut entries = Vec::with_capacity(rows.len());
    for (line, row) in &rows {
        if let Some(j) = row.iter().position(|v| !(0.0..=limit).contains(v)) {
            return Err(Error::Parse {
                line: *line,
                column: j + 1,
                message: format!("{} is outside [0, {limit}] for {scale} scale", row[j]),
            });
        }
        entries.push(SrgbColor::from_array([row[0], row[1], row[2]].map(|v| v / limit)));
    }
    if entries.len() < 2 {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            column: 1,
            message: format!("a colormap table needs at least 2 rows, found {}", entries.len()),
        });
    }
    let table_name = meta
        .iter()
        .find(|(k, _)| k == "name")
        .map_or(name.to_string(), |(_, v)| v.clone());
    let mut cmap = Colormap::new(table_name, entries)?;
    for (k, v) in meta {
        if k != "name" && k != "scale" {
            cmap.set_meta(k, v);
        }
    }
    cmap.set_meta("table_scale", scale);
    Ok(cmap)
}

pub fn load_table(path: impl AsRef<Path>) -> Result<Colormap> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("table");
    parse_table(&text, stem)
}

/// Parses a rectangular grid of numbers (any of the table delimiters).
pub fn parse_value_grid(text: &str) -> Result<Vec<Vec<f64>>> {
    let rows = numeric_rows(text)?;
    let width = rows.first().map_or(0, |(_, r)| r.len());
    for (line, row) in &rows {
        if row.len() != width {
            return Err(Error::Parse {
                line: *line,
                column: row.len().min(width) + 1,
                message: format!("expected {width} values, found {}", row.len()),
            });
        }
    }
    Ok(rows.into_iter().map(|(_, r)| r).collect())
}
