//! Tab-separated tables: measured curves in, reports out.
//!
//! Written tables start with a schema line so downstream tools can refuse a
//! layout they do not understand. Input tables may omit it; `#` lines are
//! comments and the first other line is the header.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use hybrid_link_core::link::{AttenuationCurve, RamanProfile};
use hybrid_link_core::{BandLabel, EfficiencyCurve, Error as CoreError, PumpDrawCurve};

use crate::error::{CliError, Result};

pub const SCHEMA_LINE: &str = "# hybrid-link-tsv v1";
const SCHEMA_PREFIX: &str = "# hybrid-link-tsv ";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            ..Self::default()
        }
    }

    pub fn comment(&mut self, text: impl Into<String>) -> &mut Self {
        self.comments.push(text.into());
        self
    }

    pub fn push<S: ToString>(&mut self, row: impl IntoIterator<Item = S>) {
        let row: Vec<String> = row.into_iter().map(|c| c.to_string()).collect();
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(SCHEMA_LINE);
        out.push('\n');
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        out.push_str(&self.header.join("\t"));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join("\t"));
            out.push('\n');
        }
        out
    }
}

/// A parsed numeric table plus the file line of every data row, for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericTable {
    pub path: PathBuf,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub lines: Vec<usize>,
}

impl NumericTable {
    pub fn parse(path: &Path, text: &str) -> Result<Self> {
        let err = |line: usize, message: String| CliError::Table {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut header: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        let mut lines = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if let Some(version) = trimmed.strip_prefix(SCHEMA_PREFIX) {
                if trimmed != SCHEMA_LINE {
                    return Err(err(line, format!("unsupported table schema {version}")));
                }
                continue;
            }
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let cells: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
            match &header {
                None => header = Some(cells.iter().map(|c| c.to_string()).collect()),
                Some(h) => {
                    if cells.len() != h.len() {
                        return Err(err(line, format!("expected {} columns, found {}", h.len(), cells.len())));
                    }
                    let values = cells
                        .iter()
                        .map(|c| {
                            c.parse::<f64>()
                                .ok()
                                .filter(|v| v.is_finite())
                                .ok_or_else(|| err(line, format!("not a finite number: {c:?}")))
                        })
                        .collect::<Result<Vec<f64>>>()?;
                    rows.push(values);
                    lines.push(line);
                }
            }
        }
        let header = header.ok_or_else(|| err(0, "no header row".into()))?;
        Ok(Self {
            path: path.to_path_buf(),
            header,
            rows,
            lines,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(path, &text)
    }

    fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// The two named columns as (x, y) pairs.
    pub fn pairs(&self, x: &str, y: &str) -> Result<Vec<(f64, f64)>> {
        let missing = |name: &str| CliError::Table {
            path: self.path.clone(),
            line: self.lines.first().map_or(0, |l| l - 1),
            message: format!("missing column {name:?} (found {})", self.header.join(", ")),
        };
        let xi = self.column(x).ok_or_else(|| missing(x))?;
        let yi = self.column(y).ok_or_else(|| missing(y))?;
        Ok(self.rows.iter().map(|r| (r[xi], r[yi])).collect())
    }

    /// Rewrites a row-indexed validation failure from the core as a file position.
    pub fn locate(&self, error: CoreError) -> CliError {
        match error {
            CoreError::InvalidTable { row, reason } => CliError::Table {
                path: self.path.clone(),
                line: self.lines.get(row).copied().unwrap_or(0),
                message: reason.to_string(),
            },
            CoreError::TooFewPoints { found, required } => CliError::Table {
                path: self.path.clone(),
                line: self.lines.last().copied().unwrap_or(0),
                message: format!("{found} data rows, at least {required} required"),
            },
            other => CliError::Table {
                path: self.path.clone(),
                line: 0,
                message: other.to_string(),
            },
        }
    }
}

pub fn load_efficiency_curve(path: &Path, band: BandLabel, saturation_dbm: f64) -> Result<EfficiencyCurve> {
    let table = NumericTable::read(path)?;
    let points: Vec<(f64, f64)> = table
        .pairs("output_mw", "efficiency_pct")?
        .into_iter()
        .map(|(p, pct)| (p, pct / 100.0))
        .collect();
    EfficiencyCurve::new(band, &points, saturation_dbm).map_err(|e| table.locate(e))
}

pub fn load_pump_draw(path: &Path) -> Result<PumpDrawCurve> {
    let table = NumericTable::read(path)?;
    PumpDrawCurve::new(&table.pairs("output_mw", "draw_w")?).map_err(|e| table.locate(e))
}

pub fn load_attenuation(path: &Path) -> Result<AttenuationCurve> {
    let table = NumericTable::read(path)?;
    AttenuationCurve::from_points(&table.pairs("wavelength_nm", "db_per_km")?).map_err(|e| table.locate(e))
}

pub fn load_raman_profile(path: &Path) -> Result<RamanProfile> {
    let table = NumericTable::read(path)?;
    RamanProfile::from_points(&table.pairs("shift_thz", "gain_per_w_km")?).map_err(|e| table.locate(e))
}

pub fn efficiency_curve_table(curve: &EfficiencyCurve) -> Table {
    let mut t = Table::new(["output_mw", "efficiency_pct"]);
    t.comment(format!(
        "{}-band lumped amplifier, saturation {} dBm",
        curve.band(),
        curve.saturation_dbm()
    ));
    for (p, eta) in curve.points() {
        t.push([p, percent_for(eta)]);
    }
    t
}

/// A percentage that parses back to exactly `fraction` after division by 100.
fn percent_for(fraction: f64) -> f64 {
    let guess = fraction * 100.0;
    (0..=4i64)
        .flat_map(|k| [k, -k])
        .map(|k| f64::from_bits((guess.to_bits() as i64 + k) as u64))
        .find(|pct| pct / 100.0 == fraction)
        .unwrap_or(guess)
}

pub fn pump_draw_table(curve: &PumpDrawCurve) -> Table {
    let mut t = Table::new(["output_mw", "draw_w"]);
    for (p, w) in curve.points() {
        t.push([p, w]);
    }
    t
}

/// Writes through a sibling temporary file so readers never see a partial table.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_skips_comments_and_reports_lines() {
        let text = "# note\noutput_mw\tdraw_w\n0\t0.4\n\n50\tx\n";
        let err = NumericTable::parse(Path::new("t.tsv"), text).unwrap_err();
        assert!(err.to_string().starts_with("t.tsv:5:"), "{err}");
        let ok = NumericTable::parse(Path::new("t.tsv"), "# c\na\tb\n1\t2\n").unwrap();
        assert_eq!(ok.rows, vec![vec![1.0, 2.0]]);
        assert_eq!(ok.lines, vec![3]);
    }

    #[test]
    fn foreign_schema_is_refused() {
        let err = NumericTable::parse(Path::new("t.tsv"), "# hybrid-link-tsv v9\na\n1\n").unwrap_err();
        assert!(err.to_string().contains("v9"));
    }

    #[test]
    fn rendered_table_carries_schema_line() {
        let mut t = Table::new(["a", "b"]);
        t.push([1.5, 2.0]);
        assert_eq!(t.render(), "# hybrid-link-tsv v1\na\tb\n1.5\t2\n");
    }
}
