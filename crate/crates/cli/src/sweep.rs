//! Parameter sweeps over one or two scenario fields.
//!
//! An axis is written `path=v1,v2,...` or `path=start:stop:count` (inclusive,
//! evenly spaced), where `path` is one of [`NUMERIC_PATHS`](crate::config::NUMERIC_PATHS).
//! Points form the Cartesian product of the axes with the first axis varying
//! slowest. Every point is evaluated exactly as `capacity` would evaluate it,
//! Monte-Carlo included (same seed at every point).
//!
//! CSV columns: the axis paths, then
//! `method,capacity_bps_hz,std_error,sample_count,low_sample_warning,status`.
//! JSON output is an object tagged `"schema": "thzlink.sweep/1"`.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use thzlink::capacity::{CapacityResult, Method};

use crate::config::{ConfigFile, MethodSelection, Scenario, TableCache, NUMERIC_PATHS};
use crate::error::{CliError, CliResult};
use crate::report::{
    derive, evaluate_method, format_float, result_fields, MethodOutcome, POINT_CSV_HEADER,
};

pub const SWEEP_SCHEMA: &str = "thzlink.sweep/1";
pub const MAX_AXES: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub path: String,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn parse(text: &str) -> CliResult<Self> {
        let bad = |why: &str| CliError::Config(format!("sweep axis `{text}`: {why}"));
        let (path, spec) = text
            .split_once('=')
            .ok_or_else(|| bad("expected `path=values`"))?;
        let path = path.trim();
        if !NUMERIC_PATHS.contains(&path) {
            return Err(bad(&format!(
                "unknown parameter path; expected one of {}",
                NUMERIC_PATHS.join(", ")
            )));
        }
        let number = |s: &str| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| bad(&format!("`{}` is not a finite number", s.trim())))
        };
        let values = if spec.contains(':') {
            let parts: Vec<&str> = spec.split(':').collect();
            if parts.len() != 3 {
                return Err(bad("grids are written start:stop:count"));
            }
            let (start, stop) = (number(parts[0])?, number(parts[1])?);
            let count: usize = parts[2]
                .trim()
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| bad("count must be a positive integer"))?;
            if count == 1 {
                vec![start]
            } else {
                let step = (stop - start) / (count - 1) as f64;
                let mut v: Vec<f64> = (0..count).map(|i| start + step * i as f64).collect();
                v[count - 1] = stop;
                v
            }
        } else {
            spec.split(',')
                .map(number)
                .collect::<CliResult<Vec<f64>>>()?
        };
        if values.is_empty() {
            return Err(bad("no values"));
        }
        Ok(Self {
            path: path.to_string(),
            values,
        })
    }
}

pub fn parse_axes(specs: &[String]) -> CliResult<Vec<Axis>> {
    if specs.is_empty() || specs.len() > MAX_AXES {
        return Err(CliError::Config(format!(
            "a sweep needs 1 to {MAX_AXES} axes (--axis or `sweep.axes`), got {}",
            specs.len()
        )));
    }
    let axes: Vec<Axis> = specs
        .iter()
        .map(|s| Axis::parse(s))
        .collect::<CliResult<_>>()?;
    if axes.len() == 2 && axes[0].path == axes[1].path {
        return Err(CliError::Config(format!(
            "sweep axis `{}` given twice",
            axes[0].path
        )));
    }
    Ok(axes)
}

/// Axis values of every point, first axis outermost.
pub fn grid(axes: &[Axis]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub point: Vec<f64>,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<CapacityResult>,
    pub status: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub schema: &'static str,
    pub base: ConfigFile,
    pub axes: Vec<Axis>,
    pub rows: Vec<SweepRow>,
}

fn point_rows(point: &[f64], resolved: &CliResult<Scenario>, methods: &[Method]) -> Vec<SweepRow> {
    let failed = |status: String| {
        methods
            .iter()
            .map(|&method| SweepRow {
                point: point.to_vec(),
                method,
                result: None,
                status: status.clone(),
            })
            .collect()
    };
    let s = match resolved {
        Ok(s) => s,
        Err(e) => return failed(format!("error: {e}")),
    };
    let c = match derive(s) {
        Ok((_, c)) => c,
        Err(e) => return failed(format!("error: {e}")),
    };
    methods
        .iter()
        .map(|&m| {
            let MethodOutcome {
                method,
                result,
                status,
            } = evaluate_method(m, &c, s);
            SweepRow {
                point: point.to_vec(),
                method,
                result,
                status,
            }
        })
        .collect()
}

/// Evaluate the sweep. Points are computed concurrently and reported in grid order;
/// per-point failures land in the `status` column.
pub fn run_sweep(base: &ConfigFile, axes: Vec<Axis>) -> CliResult<SweepReport> {
    let methods =
        MethodSelection::parse(base.method.as_deref().unwrap_or("closed_form"))?.methods();
    let mut tables = TableCache::default();
    // a table that does not load fails the whole sweep rather than every row
    if let Some(path) = &base.absorption.table {
        tables.get(path)?;
    }
    let points = grid(&axes);
    let mut scenarios = Vec::with_capacity(points.len());
    for point in &points {
        let mut cfg = base.clone();
        for (axis, &v) in axes.iter().zip(point) {
            cfg.set(&axis.path, v)?;
        }
        scenarios.push(Scenario::resolve(&cfg, &mut tables));
    }
    let rows: Vec<Vec<SweepRow>> = points
        .par_iter()
        .zip(scenarios.par_iter())
        .map(|(point, s)| point_rows(point, s, &methods))
        .collect();
    Ok(SweepReport {
        schema: SWEEP_SCHEMA,
        base: base.clone(),
        axes,
        rows: rows.into_iter().flatten().collect(),
    })
}

impl SweepReport {
    pub fn header(&self) -> Vec<String> {
        self.axes
            .iter()
            .map(|a| a.path.clone())
            .chain(POINT_CSV_HEADER.iter().map(|s| s.to_string()))
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> CliResult<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(self.header())?;
        for row in &self.rows {
            let mut rec: Vec<String> = row.point.iter().map(|&v| format_float(v)).collect();
            rec.push(row.method.as_str().to_string());
            rec.extend(result_fields(row.result.as_ref()));
            rec.push(row.status.clone());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> CliResult<()> {
        serde_json::to_writer_pretty(&mut out, self).map_err(|e| CliError::Io(e.to_string()))?;
        writeln!(out)?;
        Ok(())
    }

    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.result.is_none()).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_grammar() {
        let a = Axis::parse("link.distance_m=20:60:5").unwrap();
        assert_eq!(a.values, vec![20.0, 30.0, 40.0, 50.0, 60.0]);
        let b = Axis::parse("geom.sigma_s = 0.01, 0.05").unwrap();
        assert_eq!(b.path, "geom.sigma_s");
        assert_eq!(b.values, vec![0.01, 0.05]);
        assert_eq!(Axis::parse("fading.mu=3:9:1").unwrap().values, vec![3.0]);
        for bad in [
            "link.distance_m",
            "nope=1",
            "link.distance_m=1:2",
            "link.distance_m=1:2:0",
            "link.distance_m=x",
        ] {
            assert!(Axis::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn grid_is_first_axis_outermost() {
        let axes = vec![
            Axis::parse("link.distance_m=1,2").unwrap(),
            Axis::parse("fading.mu=3,4,5").unwrap(),
        ];
        let g = grid(&axes);
        assert_eq!(g.len(), 6);
        assert_eq!(g[0], vec![1.0, 3.0]);
        assert_eq!(g[2], vec![1.0, 5.0]);
        assert_eq!(g[3], vec![2.0, 3.0]);
        assert!(parse_axes(&[]).is_err());
        assert!(parse_axes(&["fading.mu=1".into(), "fading.mu=2".into()]).is_err());
    }
}
