//! Point evaluation and its CSV / JSON renderings.
//!
//! CSV columns, in order:
//! `method,capacity_bps_hz,std_error,sample_count,low_sample_warning,status`.
//! `status` is `ok` or `error: <message>`; failed rows leave the numeric
//! columns empty. JSON output is an object tagged `"schema": "thzlink.point/1"`.

use std::io::Write;

use serde::Serialize;
use thzlink::capacity::{
    capacity_closed_form, capacity_quadrature, monte_carlo_from_delta, CapacityConstants,
    CapacityResult, Method,
};
use thzlink::channel::{absorption_gain, free_space_gain};

use crate::config::{ConfigFile, McSettings, Scenario};
use crate::error::{CliError, CliResult};

pub const POINT_SCHEMA: &str = "thzlink.point/1";
pub const POINT_CSV_HEADER: [&str; 6] = [
    "method",
    "capacity_bps_hz",
    "std_error",
    "sample_count",
    "low_sample_warning",
    "status",
];

/// Intermediate quantities of a scenario.
#[derive(Debug, Clone, Serialize)]
pub struct Derived {
    pub h_fl: f64,
    pub kappa_per_m: f64,
    pub h_al: f64,
    pub h_l: f64,
    pub u: f64,
    pub a0: f64,
    pub w_eq: f64,
    pub xi: f64,
    pub delta: f64,
    pub lambda: f64,
    pub phi: f64,
    pub x: f64,
    pub theta: f64,
    pub ln_theta: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodOutcome {
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<CapacityResult>,
    pub status: String,
}

impl MethodOutcome {
    fn new(method: Method, outcome: Result<CapacityResult, thzlink::Error>) -> Self {
        match outcome {
            Ok(r) => Self {
                method,
                result: Some(r),
                status: "ok".into(),
            },
            Err(e) => Self {
                method,
                result: None,
                status: format!("error: {e}"),
            },
        }
    }

    pub fn value(&self) -> Option<f64> {
        self.result.as_ref().map(|r| r.value)
    }
}

/// `|C_a − C_b| / |C_b|` for one pair of methods.
#[derive(Debug, Clone, Serialize)]
pub struct Deviation {
    pub a: Method,
    pub b: Method,
    pub relative: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub schema: &'static str,
    pub inputs: ConfigFile,
    pub mc: McSettings,
    pub derived: Derived,
    pub results: Vec<MethodOutcome>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub deviations: Vec<Deviation>,
}

impl PointReport {
    /// First failed method, if any.
    pub fn failure(&self) -> Option<&MethodOutcome> {
        self.results.iter().find(|r| r.result.is_none())
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> CliResult<()> {
        serde_json::to_writer_pretty(&mut out, self).map_err(|e| CliError::Io(e.to_string()))?;
        writeln!(out)?;
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> CliResult<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(POINT_CSV_HEADER)?;
        for r in &self.results {
            let mut row = vec![r.method.as_str().to_string()];
            row.extend(result_fields(r.result.as_ref()));
            row.push(r.status.clone());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `capacity_bps_hz, std_error, sample_count, low_sample_warning` as CSV text.
pub(crate) fn result_fields(r: Option<&CapacityResult>) -> [String; 4] {
    match r {
        Some(r) => [
            format_float(r.value),
            format_float(r.std_error),
            r.sample_count.to_string(),
            r.low_sample_warning.to_string(),
        ],
        None => Default::default(),
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_float(v: f64) -> String {
    format!("{v:?}")
}

pub fn derive(s: &Scenario) -> CliResult<(Derived, CapacityConstants)> {
    let kappa = s.provider.kappa(s.link.frequency, &s.env)?;
    let h_fl = free_space_gain(&s.link);
    let h_al = absorption_gain(kappa, s.link.distance)?;
    let h_l = h_fl * h_al;
    let c = CapacityConstants::from_parts(h_l * h_l * s.link.snr0, &s.geom, &s.fading)?;
    let derived = Derived {
        h_fl,
        kappa_per_m: kappa,
        h_al,
        h_l,
        u: s.geom.u(),
        a0: s.geom.a0(),
        w_eq: s.geom.w_eq(),
        xi: s.geom.xi(),
        delta: c.delta,
        lambda: c.lambda,
        phi: c.phi,
        x: c.x,
        theta: c.theta,
        ln_theta: c.ln_theta,
    };
    Ok((derived, c))
}

pub fn evaluate_method(method: Method, c: &CapacityConstants, s: &Scenario) -> MethodOutcome {
    let outcome = match method {
        Method::ClosedForm => capacity_closed_form(c),
        Method::Quadrature => capacity_quadrature(c),
        Method::MonteCarlo => {
            monte_carlo_from_delta(c.delta, &s.geom, &s.fading, s.mc.samples, s.mc.seed)
        }
    };
    MethodOutcome::new(method, outcome)
}

fn deviations(results: &[MethodOutcome]) -> Vec<Deviation> {
    let mut out = Vec::new();
    for (i, a) in results.iter().enumerate() {
        for b in &results[i + 1..] {
            if let (Some(va), Some(vb)) = (a.value(), b.value()) {
                out.push(Deviation {
                    a: a.method,
                    b: b.method,
                    relative: (va - vb).abs() / vb.abs(),
                });
            }
        }
    }
    out
}

/// Evaluate every selected method. Method failures are recorded in the report.
pub fn run_point(s: &Scenario) -> CliResult<PointReport> {
    let (derived, c) = derive(s)?;
    let results: Vec<MethodOutcome> = s
        .method
        .methods()
        .into_iter()
        .map(|m| evaluate_method(m, &c, s))
        .collect();
    let deviations = if results.len() > 1 {
        deviations(&results)
    } else {
        Vec::new()
    };
    Ok(PointReport {
        schema: POINT_SCHEMA,
        inputs: s.inputs.clone(),
        mc: s.mc,
        derived,
        results,
        deviations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::TableCache;

    fn scenario(method: &str) -> Scenario {
        let cfg = ConfigFile::parse(&format!(
            r#"
method = "{method}"
[link]
freq_ghz = 300.0
distance_m = 40.0
snr0_db = 25.0
[geom]
aperture_radius = 0.05
beam_radius = 0.12
sigma_s = 0.01
[absorption]
kappa_per_m = 0.0
[mc]
samples = 1000000
seed = 3
"#
        ))
        .unwrap();
        Scenario::resolve(&cfg, &mut TableCache::default()).unwrap()
    }

    #[test]
    fn all_methods_agree() {
        let r = run_point(&scenario("all")).unwrap();
        assert_eq!(r.results.len(), 3);
        assert_eq!(r.deviations.len(), 3);
        assert!(r.failure().is_none());
        let cf = r.results[0].value().unwrap();
        let q = r.results[1].value().unwrap();
        assert!((cf - q).abs() < 1e-5 * q);
        let mc = r.results[2].result.as_ref().unwrap();
        assert!((mc.value - q).abs() < 3.0 * mc.std_error);
        assert!(
            r.deviations.iter().all(|d| d.relative < 1e-3),
            "{:?}",
            r.deviations
        );
    }

    #[test]
    fn csv_rows_round_trip() {
        let r = run_point(&scenario("closed_form")).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), POINT_CSV_HEADER.join(","));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "closed_form");
        assert_eq!(
            row[1].parse::<f64>().unwrap(),
            r.results[0].value().unwrap()
        );
        assert_eq!(row[5], "ok");
    }

    #[test]
    fn json_is_tagged() {
        let r = run_point(&scenario("quadrature")).unwrap();
        let mut buf = Vec::new();
        r.write_json(&mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["schema"], POINT_SCHEMA);
        assert_eq!(v["inputs"]["link"]["freq_ghz"], 300.0);
        assert!(v["derived"]["xi"].as_f64().unwrap() > 0.0);
    }
}
