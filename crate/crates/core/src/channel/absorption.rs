//! Molecular absorption coefficient providers.
//!
//! The coefficient is treated as data: either a single constant or a
//! rectangular table over (frequency, temperature, pressure, humidity) with
//! multilinear interpolation and no extrapolation.
//!
//! Table files are CSV (UTF-8, `.` decimal separator) with the header
//! `freq_hz,temp_k,pressure_pa,rel_humidity,kappa_per_m`. Lines starting with
//! `#` are comments. Rows may come in any order but must cover every node of
//! the grid spanned by the distinct axis values exactly once.

use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::link::Environment;

pub const TABLE_HEADER: [&str; 5] = [
    "freq_hz",
    "temp_k",
    "pressure_pa",
    "rel_humidity",
    "kappa_per_m",
];

/// Frequency band in which table-backed absorption is accepted, Hz.
pub const TABLE_BAND_HZ: (f64, f64) = (275e9, 400e9);

const AXIS_NAMES: [&str; 4] = ["frequency", "temperature", "pressure", "relative humidity"];

#[derive(Debug, Clone, PartialEq)]
pub enum AbsorptionProvider {
    /// κ in m⁻¹, independent of frequency and environment.
    Constant(f64),
    /// Shared so that many scenarios can reuse one loaded table.
    Table(Arc<AbsorptionTable>),
}

impl AbsorptionProvider {
    pub fn constant(kappa: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(Error::invalid(
                "absorption.kappa_per_m",
                format!("must be finite and >= 0, got {kappa}"),
            ));
        }
        Ok(Self::Constant(kappa))
    }

    pub fn table_from_path(path: impl AsRef<Path>) -> Result<Self> {
        Ok(Self::Table(Arc::new(AbsorptionTable::from_path(path)?)))
    }

    /// κ(f, T, p, φ) in m⁻¹.
    pub fn kappa(&self, frequency: f64, env: &Environment) -> Result<f64> {
        match self {
            Self::Constant(k) => Ok(*k),
            Self::Table(table) => {
                if frequency < TABLE_BAND_HZ.0 || frequency > TABLE_BAND_HZ.1 {
                    return Err(Error::Range(format!(
                        "frequency {frequency} Hz outside the {}-{} GHz band of tabulated absorption",
                        TABLE_BAND_HZ.0 / 1e9,
                        TABLE_BAND_HZ.1 / 1e9
                    )));
                }
                table.interpolate([
                    frequency,
                    env.temperature,
                    env.pressure,
                    env.relative_humidity,
                ])
            }
        }
    }
}

/// κ samples on a full rectangular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionTable {
    axes: [Vec<f64>; 4],
    /// Row-major over (f, T, p, φ), humidity fastest.
    values: Vec<f64>,
}

fn parse_field(text: &str, column: &str, line: usize) -> Result<f64> {
    let v: f64 = text.trim().parse().map_err(|_| Error::TableFormat {
        line,
        reason: format!("column `{column}`: `{text}` is not a number"),
    })?;
    if !v.is_finite() {
        return Err(Error::TableFormat {
            line,
            reason: format!("column `{column}`: non-finite value"),
        });
    }
    Ok(v)
}

impl AbsorptionTable {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file =
            std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_reader(file)
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);

        let mut records = rdr.records();
        let header = match records.next() {
            Some(rec) => rec.map_err(csv_error)?,
            None => {
                return Err(Error::TableFormat {
                    line: 1,
                    reason: "empty table".into(),
                })
            }
        };
        let header_line = line_of(&header);
        if header.iter().ne(TABLE_HEADER.iter().copied()) {
            return Err(Error::TableFormat {
                line: header_line,
                reason: format!("expected header `{}`", TABLE_HEADER.join(",")),
            });
        }

        let mut rows: Vec<([f64; 4], f64, usize)> = Vec::new();
        for rec in records {
            let rec = rec.map_err(csv_error)?;
            let line = line_of(&rec);
            if rec.len() != 5 {
                return Err(Error::TableFormat {
                    line,
                    reason: format!("expected 5 fields, found {}", rec.len()),
                });
            }
            let mut key = [0.0; 4];
            for (k, slot) in key.iter_mut().enumerate() {
                *slot = parse_field(&rec[k], TABLE_HEADER[k], line)?;
            }
            let kappa = parse_field(&rec[4], TABLE_HEADER[4], line)?;
            if kappa < 0.0 {
                return Err(Error::TableFormat {
                    line,
                    reason: format!("negative absorption coefficient {kappa}"),
                });
            }
            rows.push((key, kappa, line));
        }
        if rows.is_empty() {
            return Err(Error::TableFormat {
                line: header_line,
                reason: "table has no data rows".into(),
            });
        }

        let axes: [Vec<f64>; 4] = std::array::from_fn(|k| {
            let mut v: Vec<f64> = rows.iter().map(|r| r.0[k]).collect();
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        });
        let expected: usize = axes.iter().map(Vec::len).product();
        let mut values = vec![f64::NAN; expected];
        for (key, kappa, line) in &rows {
            let idx = Self::flat_index(
                &axes,
                std::array::from_fn(|k| {
                    axes[k]
                        .binary_search_by(|v| v.total_cmp(&key[k]))
                        .expect("value taken from rows")
                }),
            );
            if !values[idx].is_nan() {
                return Err(Error::TableFormat {
                    line: *line,
                    reason: format!("duplicate grid node {key:?}"),
                });
            }
            values[idx] = *kappa;
        }
        if rows.len() != expected {
            return Err(Error::TableFormat {
                line: rows.last().map(|r| r.2).unwrap_or(header_line),
                reason: format!(
                    "incomplete grid: {} rows for {} nodes ({} x {} x {} x {})",
                    rows.len(),
                    expected,
                    axes[0].len(),
                    axes[1].len(),
                    axes[2].len(),
                    axes[3].len()
                ),
            });
        }
        Ok(Self { axes, values })
    }

    fn flat_index(axes: &[Vec<f64>; 4], idx: [usize; 4]) -> usize {
        ((idx[0] * axes[1].len() + idx[1]) * axes[2].len() + idx[2]) * axes[3].len() + idx[3]
    }

    /// Grid nodes along (frequency, temperature, pressure, humidity).
    pub fn axes(&self) -> &[Vec<f64>; 4] {
        &self.axes
    }

    /// Multilinear interpolation at `(f, T, p, φ)`; queries outside the grid hull fail.
    pub fn interpolate(&self, query: [f64; 4]) -> Result<f64> {
        let mut lower = [0usize; 4];
        let mut weight = [0.0f64; 4];
        for k in 0..4 {
            let axis = &self.axes[k];
            let q = query[k];
            let (first, last) = (axis[0], axis[axis.len() - 1]);
            if !(q >= first && q <= last) {
                return Err(Error::Range(format!(
                    "{} {q} outside table range [{first}, {last}]",
                    AXIS_NAMES[k]
                )));
            }
            if axis.len() == 1 {
                continue;
            }
            let i = axis.partition_point(|&v| v <= q).clamp(1, axis.len() - 1) - 1;
            lower[k] = i;
            weight[k] = (q - axis[i]) / (axis[i + 1] - axis[i]);
        }
        let mut acc = 0.0;
        for corner in 0..16usize {
            let mut w = 1.0;
            let mut idx = [0usize; 4];
            for k in 0..4 {
                let upper = (corner >> k) & 1 == 1;
                if self.axes[k].len() == 1 {
                    if upper {
                        w = 0.0;
                    }
                    continue;
                }
                idx[k] = lower[k] + upper as usize;
                w *= if upper { weight[k] } else { 1.0 - weight[k] };
            }
            if w != 0.0 {
                acc += w * self.values[Self::flat_index(&self.axes, idx)];
            }
        }
        Ok(acc)
    }
}

fn line_of(rec: &csv::StringRecord) -> usize {
    rec.position().map(|p| p.line() as usize).unwrap_or(0)
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    match e.kind() {
        csv::ErrorKind::Io(io) => Error::Io(io.to_string()),
        _ => Error::TableFormat {
            line,
            reason: e.to_string(),
        },
    }
}
