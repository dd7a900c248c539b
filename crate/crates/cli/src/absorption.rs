//! Absorption-table inspection.
//!
//! Output CSV columns: `freq_ghz,temp_k,pressure_pa,rh_percent,kappa_per_m,status`.
//! Query axes left unspecified default to the table's own grid nodes.

use std::io::Write;

use thzlink::channel::{AbsorptionProvider, Environment};

use crate::config::TableCache;
use crate::error::CliResult;
use crate::report::format_float;
use std::path::Path;

pub const ABSORPTION_CSV_HEADER: [&str; 6] = [
    "freq_ghz",
    "temp_k",
    "pressure_pa",
    "rh_percent",
    "kappa_per_m",
    "status",
];

/// Query values in CLI units; `None` selects the table nodes.
#[derive(Debug, Clone, Default)]
pub struct Query {
    pub freq_ghz: Option<Vec<f64>>,
    pub temp_k: Option<Vec<f64>>,
    pub pressure_pa: Option<Vec<f64>>,
    pub rh_percent: Option<Vec<f64>>,
}

pub fn inspect<W: Write>(table: &Path, query: &Query, out: W) -> CliResult<()> {
    let table = TableCache::default().get(table)?;
    let [f, t, p, h] = table.axes();
    let freq = query
        .freq_ghz
        .clone()
        .unwrap_or_else(|| f.iter().map(|v| v / 1e9).collect());
    let temp = query.temp_k.clone().unwrap_or_else(|| t.clone());
    let pressure = query.pressure_pa.clone().unwrap_or_else(|| p.clone());
    let rh = query
        .rh_percent
        .clone()
        .unwrap_or_else(|| h.iter().map(|v| v * 100.0).collect());
    let provider = AbsorptionProvider::Table(table);

    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(ABSORPTION_CSV_HEADER)?;
    for &fq in &freq {
        for &tk in &temp {
            for &pa in &pressure {
                for &phi in &rh {
                    let kappa = Environment::new(tk, pa, phi / 100.0)
                        .and_then(|env| provider.kappa(fq * 1e9, &env));
                    let (k, status) = match kappa {
                        Ok(k) => (format_float(k), "ok".to_string()),
                        Err(e) => (String::new(), format!("error: {e}")),
                    };
                    w.write_record([
                        format_float(fq),
                        format_float(tk),
                        format_float(pa),
                        format_float(phi),
                        k,
                        status,
                    ])?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}
