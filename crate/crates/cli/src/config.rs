//! Scenario configuration.
//!
//! A scenario is a TOML file with the sections below; every key is optional in
//! the file and can be supplied or overridden by the matching command-line flag
//! (flag > file > default).
//!
//! ```toml
//! method = "closed_form"        # closed_form | quadrature | monte_carlo | all
//!
//! [link]
//! freq_ghz = 300.0              # required
//! distance_m = 40.0             # required
//! gt_dbi = 55.0                 # default 55
//! gr_dbi = 55.0                 # default 55
//! snr0_db = 25.0                # transmit power over noise power, required
//!
//! [env]
//! temp_k = 296.0                # default 296
//! pressure_pa = 101325.0        # default 101325
//! rh_percent = 50.0             # default 50
//!
//! [geom]                        # metres, all required
//! aperture_radius = 0.05
//! beam_radius = 0.12
//! sigma_s = 0.01
//!
//! [fading]
//! alpha = 2.0                   # default 2
//! mu = 4.0                      # default 4
//! hhat = 1.0                    # default 1
//!
//! [absorption]                  # exactly one of the two
//! kappa_per_m = 0.0
//! # table = "absorption.csv"    # relative to this file
//!
//! [mc]
//! samples = 1000000             # default 10^6
//! seed = 1                      # default 1
//!
//! [sweep]
//! axes = ["link.distance_m=20:60:9", "geom.sigma_s=0.01,0.05,0.1"]
//!
//! [assumptions]                 # free-form, echoed into reports
//!
//! [[claims]]                    # percent-change checks for `compare`
//! from = "link.distance_m=20"
//! to = "link.distance_m=60"
//! reference_percent = 78.6
//! ```

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thzlink::capacity::Method;
use thzlink::channel::{
    db_to_linear, derive_misalignment, AbsorptionProvider, AbsorptionTable, AlphaMuParams,
    Environment, LinkParams, MisalignmentGeometry,
};

use crate::error::{CliError, CliResult};

pub const DEFAULT_GAIN_DBI: f64 = 55.0;
pub const DEFAULT_ALPHA: f64 = 2.0;
pub const DEFAULT_MU: f64 = 4.0;
pub const DEFAULT_HHAT: f64 = 1.0;
pub const DEFAULT_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 1;

/// Numeric fields addressable by sweep axes and claim selectors.
pub const NUMERIC_PATHS: [&str; 15] = [
    "link.freq_ghz",
    "link.distance_m",
    "link.gt_dbi",
    "link.gr_dbi",
    "link.snr0_db",
    "env.temp_k",
    "env.pressure_pa",
    "env.rh_percent",
    "geom.aperture_radius",
    "geom.beam_radius",
    "geom.sigma_s",
    "fading.alpha",
    "fading.mu",
    "fading.hhat",
    "absorption.kappa_per_m",
];

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub freq_ghz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gt_dbi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gr_dbi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr0_db: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnvSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temp_k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pressure_pa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rh_percent: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeomSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aperture_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beam_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_s: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FadingSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hhat: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AbsorptionSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_per_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<PathBuf>,
}

impl AbsorptionSection {
    fn is_empty(&self) -> bool {
        self.kappa_per_m.is_none() && self.table.is_none()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub axes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Claim {
    pub from: String,
    pub to: String,
    #[serde(default, rename = "where", skip_serializing_if = "Option::is_none")]
    pub filter: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_percent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Raw scenario as written in a file or on the command line, in engineering units.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    pub link: LinkSection,
    pub env: EnvSection,
    pub geom: GeomSection,
    pub fading: FadingSection,
    pub absorption: AbsorptionSection,
    pub mc: McSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assumptions: Option<toml::Table>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub claims: Vec<Claim>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })?;
        if let Some(table) = &cfg.absorption.table {
            if table.is_relative() {
                let base = path.parent().unwrap_or_else(|| Path::new("."));
                cfg.absorption.table = Some(base.join(table));
            }
        }
        Ok(cfg)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("config: {}", e.message())))
    }

    /// Apply `over` on top of `self`: every value set in `over` wins.
    pub fn overlay(mut self, over: &ConfigFile) -> Self {
        fn take<T: Clone>(slot: &mut Option<T>, over: &Option<T>) {
            if over.is_some() {
                slot.clone_from(over);
            }
        }
        take(&mut self.method, &over.method);
        take(&mut self.link.freq_ghz, &over.link.freq_ghz);
        take(&mut self.link.distance_m, &over.link.distance_m);
        take(&mut self.link.gt_dbi, &over.link.gt_dbi);
        take(&mut self.link.gr_dbi, &over.link.gr_dbi);
        take(&mut self.link.snr0_db, &over.link.snr0_db);
        take(&mut self.env.temp_k, &over.env.temp_k);
        take(&mut self.env.pressure_pa, &over.env.pressure_pa);
        take(&mut self.env.rh_percent, &over.env.rh_percent);
        take(&mut self.geom.aperture_radius, &over.geom.aperture_radius);
        take(&mut self.geom.beam_radius, &over.geom.beam_radius);
        take(&mut self.geom.sigma_s, &over.geom.sigma_s);
        take(&mut self.fading.alpha, &over.fading.alpha);
        take(&mut self.fading.mu, &over.fading.mu);
        take(&mut self.fading.hhat, &over.fading.hhat);
        // the absorption backend is replaced as a whole
        if !over.absorption.is_empty() {
            self.absorption = over.absorption.clone();
        }
        take(&mut self.mc.samples, &over.mc.samples);
        take(&mut self.mc.seed, &over.mc.seed);
        take(&mut self.sweep, &over.sweep);
        take(&mut self.assumptions, &over.assumptions);
        if !over.claims.is_empty() {
            self.claims.clone_from(&over.claims);
        }
        self
    }

    /// Set the numeric field named by a dotted path.
    pub fn set(&mut self, path: &str, value: f64) -> CliResult<()> {
        let slot = match path {
            "link.freq_ghz" => &mut self.link.freq_ghz,
            "link.distance_m" => &mut self.link.distance_m,
            "link.gt_dbi" => &mut self.link.gt_dbi,
            "link.gr_dbi" => &mut self.link.gr_dbi,
            "link.snr0_db" => &mut self.link.snr0_db,
            "env.temp_k" => &mut self.env.temp_k,
            "env.pressure_pa" => &mut self.env.pressure_pa,
            "env.rh_percent" => &mut self.env.rh_percent,
            "geom.aperture_radius" => &mut self.geom.aperture_radius,
            "geom.beam_radius" => &mut self.geom.beam_radius,
            "geom.sigma_s" => &mut self.geom.sigma_s,
            "fading.alpha" => &mut self.fading.alpha,
            "fading.mu" => &mut self.fading.mu,
            "fading.hhat" => &mut self.fading.hhat,
            "absorption.kappa_per_m" => {
                self.absorption.table = None;
                &mut self.absorption.kappa_per_m
            }
            other => {
                return Err(CliError::Config(format!(
                    "unknown parameter path `{other}`; expected one of {}",
                    NUMERIC_PATHS.join(", ")
                )))
            }
        };
        *slot = Some(value);
        Ok(())
    }
}

/// Which capacity methods a run evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodSelection {
    One(Method),
    All,
}

impl MethodSelection {
    pub fn parse(text: &str) -> CliResult<Self> {
        if text == "all" {
            return Ok(Self::All);
        }
        text.parse::<Method>().map(Self::One).map_err(|_| {
            CliError::field(
                "method",
                format!("`{text}` is not one of closed_form, quadrature, monte_carlo, all"),
            )
        })
    }

    pub fn methods(self) -> Vec<Method> {
        match self {
            Self::One(m) => vec![m],
            Self::All => Method::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McSettings {
    pub samples: u64,
    pub seed: u64,
}

/// Fully resolved scenario in SI / linear units.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub link: LinkParams,
    pub env: Environment,
    pub provider: AbsorptionProvider,
    pub geom: MisalignmentGeometry,
    pub fading: AlphaMuParams,
    pub method: MethodSelection,
    pub mc: McSettings,
    /// The merged inputs this scenario was built from.
    pub inputs: ConfigFile,
}

/// Loaded absorption tables keyed by path, so sweeps parse each file once.
#[derive(Debug, Default)]
pub struct TableCache(HashMap<PathBuf, Arc<AbsorptionTable>>);

impl TableCache {
    pub fn get(&mut self, path: &Path) -> CliResult<Arc<AbsorptionTable>> {
        if let Some(t) = self.0.get(path) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(AbsorptionTable::from_path(path).map_err(|e| match e {
            thzlink::Error::TableFormat { .. } => {
                CliError::Config(format!("{}: {e}", path.display()))
            }
            other => CliError::from(other),
        })?);
        self.0.insert(path.to_path_buf(), Arc::clone(&table));
        Ok(table)
    }
}

fn required(value: Option<f64>, path: &str, flag: &str) -> CliResult<f64> {
    value.ok_or_else(|| {
        CliError::Config(format!(
            "missing `{path}` (set it in the config file or pass {flag})"
        ))
    })
}

fn finite(value: f64, path: &str) -> CliResult<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::field(
            path,
            format!("must be finite, got {value}"),
        ))
    }
}

fn positive(value: f64, path: &str) -> CliResult<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(CliError::field(
            path,
            format!("must be finite and > 0, got {value}"),
        ))
    }
}

impl Scenario {
    pub fn resolve(cfg: &ConfigFile, tables: &mut TableCache) -> CliResult<Self> {
        let l = &cfg.link;
        let freq_ghz = positive(
            required(l.freq_ghz, "link.freq_ghz", "--freq-ghz")?,
            "link.freq_ghz",
        )?;
        let distance = positive(
            required(l.distance_m, "link.distance_m", "--distance-m")?,
            "link.distance_m",
        )?;
        let gt = finite(l.gt_dbi.unwrap_or(DEFAULT_GAIN_DBI), "link.gt_dbi")?;
        let gr = finite(l.gr_dbi.unwrap_or(DEFAULT_GAIN_DBI), "link.gr_dbi")?;
        let snr0_db = finite(
            required(l.snr0_db, "link.snr0_db", "--snr0-db")?,
            "link.snr0_db",
        )?;
        let link = LinkParams::new(
            freq_ghz * 1e9,
            distance,
            db_to_linear(gt),
            db_to_linear(gr),
            db_to_linear(snr0_db),
        )?;

        let defaults = Environment::default();
        let temp = positive(cfg.env.temp_k.unwrap_or(defaults.temperature), "env.temp_k")?;
        let pressure = positive(
            cfg.env.pressure_pa.unwrap_or(defaults.pressure),
            "env.pressure_pa",
        )?;
        let rh = cfg
            .env
            .rh_percent
            .unwrap_or(100.0 * defaults.relative_humidity);
        if !(0.0..=100.0).contains(&rh) {
            return Err(CliError::field(
                "env.rh_percent",
                format!("must lie in [0, 100], got {rh}"),
            ));
        }
        let env = Environment::new(temp, pressure, rh / 100.0)?;

        let g = &cfg.geom;
        let a = positive(
            required(g.aperture_radius, "geom.aperture_radius", "--aperture-m")?,
            "geom.aperture_radius",
        )?;
        let w_d = positive(
            required(g.beam_radius, "geom.beam_radius", "--beam-radius-m")?,
            "geom.beam_radius",
        )?;
        let sigma = positive(
            required(g.sigma_s, "geom.sigma_s", "--sigma-s-m")?,
            "geom.sigma_s",
        )?;
        let geom = derive_misalignment(a, w_d, sigma)?;

        let f = &cfg.fading;
        let fading = AlphaMuParams::new(
            positive(f.alpha.unwrap_or(DEFAULT_ALPHA), "fading.alpha")?,
            positive(f.mu.unwrap_or(DEFAULT_MU), "fading.mu")?,
            positive(f.hhat.unwrap_or(DEFAULT_HHAT), "fading.hhat")?,
        )?;

        let provider = match (&cfg.absorption.kappa_per_m, &cfg.absorption.table) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "`absorption.kappa_per_m` and `absorption.table` are mutually exclusive".into(),
                ))
            }
            (Some(k), None) => {
                if !(k.is_finite() && *k >= 0.0) {
                    return Err(CliError::field(
                        "absorption.kappa_per_m",
                        format!("must be finite and >= 0, got {k}"),
                    ));
                }
                AbsorptionProvider::Constant(*k)
            }
            (None, Some(path)) => AbsorptionProvider::Table(tables.get(path)?),
            (None, None) => return Err(CliError::Config(
                "missing absorption source: set `absorption.kappa_per_m` or `absorption.table` \
                     (or pass --kappa-per-m / --kappa-table)"
                    .into(),
            )),
        };

        let method = MethodSelection::parse(cfg.method.as_deref().unwrap_or("closed_form"))?;
        let samples = cfg.mc.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples < 2 {
            return Err(CliError::field(
                "mc.samples",
                format!("must be at least 2, got {samples}"),
            ));
        }
        let mc = McSettings {
            samples,
            seed: cfg.mc.seed.unwrap_or(DEFAULT_SEED),
        };

        Ok(Self {
            link,
            env,
            provider,
            geom,
            fading,
            method,
            mc,
            inputs: cfg.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
[link]
freq_ghz = 300.0
distance_m = 40.0
snr0_db = 25.0

[geom]
aperture_radius = 0.05
beam_radius = 0.12
sigma_s = 0.01

[absorption]
kappa_per_m = 0.01
"#;

    fn resolve(cfg: &ConfigFile) -> CliResult<Scenario> {
        Scenario::resolve(cfg, &mut TableCache::default())
    }

    #[test]
    fn defaults_fill_optional_fields() {
        let s = resolve(&ConfigFile::parse(BASE).unwrap()).unwrap();
        assert_eq!(s.fading, AlphaMuParams::new(2.0, 4.0, 1.0).unwrap());
        assert_eq!(s.env, Environment::default());
        assert_eq!(s.link.gain_tx, db_to_linear(55.0));
        assert_eq!(s.link.frequency, 300e9);
        assert_eq!(s.method, MethodSelection::One(Method::ClosedForm));
        assert_eq!(
            s.mc,
            McSettings {
                samples: DEFAULT_SAMPLES,
                seed: DEFAULT_SEED
            }
        );
    }

    #[test]
    fn overlay_prefers_flags() {
        let base = ConfigFile::parse(BASE).unwrap();
        let mut flags = ConfigFile::default();
        flags.link.distance_m = Some(60.0);
        flags.absorption.table = Some("t.csv".into());
        let merged = base.overlay(&flags);
        assert_eq!(merged.link.distance_m, Some(60.0));
        assert_eq!(merged.link.freq_ghz, Some(300.0));
        assert_eq!(merged.absorption.kappa_per_m, None);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let mut cfg = ConfigFile::parse(BASE).unwrap();
        cfg.set("geom.sigma_s", -0.01).unwrap();
        let err = resolve(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("geom.sigma_s"), "{err}");

        let mut cfg = ConfigFile::parse(BASE).unwrap();
        cfg.link.snr0_db = None;
        assert!(resolve(&cfg)
            .unwrap_err()
            .to_string()
            .contains("link.snr0_db"));

        let mut cfg = ConfigFile::parse(BASE).unwrap();
        cfg.env.rh_percent = Some(120.0);
        assert!(resolve(&cfg)
            .unwrap_err()
            .to_string()
            .contains("env.rh_percent"));
    }

    #[test]
    fn unknown_keys_and_paths_are_rejected() {
        assert!(ConfigFile::parse("[link]\nfrequency = 3").is_err());
        let mut cfg = ConfigFile::default();
        assert!(cfg.set("link.nope", 1.0).is_err());
        for path in NUMERIC_PATHS {
            cfg.set(path, 1.0).unwrap();
        }
    }

    #[test]
    fn both_absorption_backends_is_an_error() {
        let mut cfg = ConfigFile::parse(BASE).unwrap();
        cfg.absorption.table = Some("x.csv".into());
        assert!(resolve(&cfg)
            .unwrap_err()
            .to_string()
            .contains("mutually exclusive"));
    }
}
