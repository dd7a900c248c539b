//! Percent change between two rows of a sweep CSV.
//!
//! Selectors are comma-separated `path=value` pairs matched against the axis
//! columns of the sweep file, e.g. `link.distance_m=20,geom.sigma_s=0.05`.
//! The output CSV has the columns
//! `from,to,where,method,capacity_from,capacity_to,percent_change,reference_percent,difference_pp`.

use std::io::{Read, Write};

use crate::config::Claim;
use crate::error::{CliError, CliResult};
use crate::report::format_float;

pub const COMPARE_CSV_HEADER: [&str; 9] = [
    "from",
    "to",
    "where",
    "method",
    "capacity_from",
    "capacity_to",
    "percent_change",
    "reference_percent",
    "difference_pp",
];

/// `100 (C_from − C_to) / C_from`.
pub fn percent_change(from: f64, to: f64) -> f64 {
    100.0 * (from - to) / from
}

/// Rows of a sweep CSV: axis columns plus method / capacity / status.
#[derive(Debug, Clone)]
pub struct SweepTable {
    axes: Vec<String>,
    rows: Vec<TableRow>,
}

#[derive(Debug, Clone)]
struct TableRow {
    line: u64,
    point: Vec<f64>,
    method: String,
    capacity: Option<f64>,
}

fn malformed(line: u64, why: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("sweep csv, line {line}: {why}"))
}

impl SweepTable {
    pub fn from_reader<R: Read>(reader: R) -> CliResult<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(reader);
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        let column = |name: &str| {
            header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| malformed(1, format!("missing column `{name}`")))
        };
        let method_col = column("method")?;
        let cap_col = column("capacity_bps_hz")?;
        let status_col = column("status")?;
        let axes: Vec<String> = header[..method_col].to_vec();
        let mut rows = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line());
                malformed(line, e)
            })?;
            let line = record.position().map_or(0, |p| p.line());
            let field = |i: usize| record.get(i).ok_or_else(|| malformed(line, "short row"));
            let point = (0..method_col)
                .map(|i| {
                    let text = field(i)?;
                    text.parse::<f64>()
                        .map_err(|_| malformed(line, format!("`{text}` is not a number")))
                })
                .collect::<CliResult<Vec<f64>>>()?;
            let capacity = if field(status_col)? == "ok" {
                let text = field(cap_col)?;
                Some(
                    text.parse::<f64>()
                        .map_err(|_| malformed(line, format!("`{text}` is not a number")))?,
                )
            } else {
                None
            };
            rows.push(TableRow {
                line,
                point,
                method: field(method_col)?.to_string(),
                capacity,
            });
        }
        Ok(Self { axes, rows })
    }

    fn parse_selector(&self, text: &str) -> CliResult<Vec<(usize, f64)>> {
        let mut out = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (path, value) = part.split_once('=').ok_or_else(|| {
                CliError::Config(format!("selector `{part}`: expected `path=value`"))
            })?;
            let col = self
                .axes
                .iter()
                .position(|a| a == path.trim())
                .ok_or_else(|| {
                    CliError::Config(format!(
                        "selector `{part}`: the sweep has no axis `{}`",
                        path.trim()
                    ))
                })?;
            let value = value
                .trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("selector `{part}`: not a number")))?;
            out.push((col, value));
        }
        Ok(out)
    }

    fn methods(&self) -> Vec<&str> {
        let mut m: Vec<&str> = self.rows.iter().map(|r| r.method.as_str()).collect();
        m.sort_unstable();
        m.dedup();
        m
    }

    fn lookup(&self, selector: &[(usize, f64)], method: &str, label: &str) -> CliResult<f64> {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
        let hits: Vec<&TableRow> = self
            .rows
            .iter()
            .filter(|r| r.method == method && selector.iter().all(|&(c, v)| close(r.point[c], v)))
            .collect();
        match hits.as_slice() {
            [] => Err(CliError::Config(format!(
                "no `{method}` row matches {label}"
            ))),
            [row] => row.capacity.ok_or_else(|| {
                CliError::Numerical(format!(
                    "row on line {} ({label}) has no capacity",
                    row.line
                ))
            }),
            _ => Err(CliError::Config(format!(
                "{} `{method}` rows match {label}; pin the remaining axes with --where",
                hits.len()
            ))),
        }
    }

    /// Evaluate one claim against the table.
    pub fn compare(&self, claim: &Claim) -> CliResult<Comparison> {
        let method = match &claim.method {
            Some(m) => m.clone(),
            None => {
                let methods = self.methods();
                match methods.as_slice() {
                    [only] => only.to_string(),
                    _ if methods.contains(&"closed_form") => "closed_form".into(),
                    _ => {
                        return Err(CliError::Config(
                            "the sweep holds several methods; pass --method".into(),
                        ))
                    }
                }
            }
        };
        let filter = match &claim.filter {
            Some(w) => self.parse_selector(w)?,
            None => Vec::new(),
        };
        let select = |text: &str| -> CliResult<Vec<(usize, f64)>> {
            let mut s = self.parse_selector(text)?;
            s.extend(filter.iter().copied());
            Ok(s)
        };
        let from = self.lookup(&select(&claim.from)?, &method, &format!("`{}`", claim.from))?;
        let to = self.lookup(&select(&claim.to)?, &method, &format!("`{}`", claim.to))?;
        let percent = percent_change(from, to);
        Ok(Comparison {
            claim: claim.clone(),
            method,
            capacity_from: from,
            capacity_to: to,
            percent_change: percent,
            difference_pp: claim.reference_percent.map(|r| percent - r),
        })
    }
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub claim: Claim,
    pub method: String,
    pub capacity_from: f64,
    pub capacity_to: f64,
    pub percent_change: f64,
    /// Computed minus reference, in percentage points.
    pub difference_pp: Option<f64>,
}

pub fn write_csv<W: Write>(rows: &[Comparison], out: W) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(COMPARE_CSV_HEADER)?;
    for c in rows {
        let opt = |v: Option<f64>| v.map(format_float).unwrap_or_default();
        w.write_record([
            c.claim.from.clone(),
            c.claim.to.clone(),
            c.claim.filter.clone().unwrap_or_default(),
            c.method.clone(),
            format_float(c.capacity_from),
            format_float(c.capacity_to),
            format_float(c.percent_change),
            opt(c.claim.reference_percent),
            opt(c.difference_pp),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SWEEP: &str = "\
link.distance_m,geom.sigma_s,method,capacity_bps_hz,std_error,sample_count,low_sample_warning,status
20.0,0.05,closed_form,10.0,0.0,0,false,ok
20.0,0.1,closed_form,8.0,0.0,0,false,ok
50.0,0.05,closed_form,5.0,0.0,0,false,ok
50.0,0.1,closed_form,,,,,error: boom
";

    fn claim(from: &str, to: &str, filter: Option<&str>) -> Claim {
        Claim {
            from: from.into(),
            to: to.into(),
            filter: filter.map(Into::into),
            method: None,
            reference_percent: Some(60.8),
            note: None,
        }
    }

    #[test]
    fn percent_change_basics() {
        assert_eq!(percent_change(3.0, 3.0), 0.0);
        assert_eq!(percent_change(4.0, 2.0), 50.0);
    }

    #[test]
    fn selects_rows() {
        let t = SweepTable::from_reader(SWEEP.as_bytes()).unwrap();
        let c = t
            .compare(&claim(
                "link.distance_m=20",
                "link.distance_m=50",
                Some("geom.sigma_s=0.05"),
            ))
            .unwrap();
        assert_eq!(c.percent_change, 50.0);
        assert!((c.difference_pp.unwrap() + 10.8).abs() < 1e-12);
        let c = t.compare(&claim(
            "geom.sigma_s=0.05,link.distance_m=20",
            "geom.sigma_s=0.1,link.distance_m=20",
            None,
        ));
        assert_eq!(c.unwrap().percent_change, 20.0);
    }

    #[test]
    fn ambiguous_missing_and_failed_rows() {
        let t = SweepTable::from_reader(SWEEP.as_bytes()).unwrap();
        assert!(t
            .compare(&claim("link.distance_m=20", "link.distance_m=50", None))
            .is_err());
        assert!(t
            .compare(&claim(
                "link.distance_m=30",
                "link.distance_m=50",
                Some("geom.sigma_s=0.05")
            ))
            .is_err());
        let e = t
            .compare(&claim(
                "link.distance_m=20",
                "link.distance_m=50",
                Some("geom.sigma_s=0.1"),
            ))
            .unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn malformed_csv_names_the_line() {
        let bad = SWEEP.replace("50.0,0.05", "fifty,0.05");
        let e = SweepTable::from_reader(bad.as_bytes()).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("line 4"), "{e}");
    }
}
