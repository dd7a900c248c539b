//! Monte-Carlo capacity.
//!
//! Sample `i` belongs to chunk `i / MC_CHUNK`, and chunk `k` draws from
//! [`stream(seed, k)`](crate::rng::stream). Chunks are evaluated in parallel
//! and their partial moments merged in chunk order, so the result depends only
//! on `(seed, samples)` and never on the number of worker threads.

use rayon::prelude::*;

use crate::channel::{
    deterministic_gain, hp_of_r, sample_radial, AbsorptionProvider, AlphaMuParams, AlphaMuSampler,
    Environment, LinkParams, MisalignmentGeometry,
};
use crate::error::{Error, Result};
use crate::rng::stream;

use super::constants::snr_instant;
use super::result::{CapacityResult, Method};

pub const MC_CHUNK: u64 = 1 << 16;

/// Below this many samples the standard error is flagged as unreliable.
pub const MC_MIN_RELIABLE_SAMPLES: u64 = 10_000;

/// Count, mean and sum of squared deviations of a block of samples.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, v: f64) {
        self.n += 1;
        let d = v - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (v - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * other.n as f64 / n as f64,
            m2: self.m2 + other.m2 + d * d * (self.n as f64 * other.n as f64 / n as f64),
        }
    }
}

fn chunk_moments(
    delta: f64,
    geom: &MisalignmentGeometry,
    sampler: &AlphaMuSampler,
    seed: u64,
    chunk: u64,
    count: u64,
) -> Moments {
    let mut rng = stream(seed, chunk);
    let mut m = Moments::default();
    for _ in 0..count {
        let h_p = hp_of_r(sample_radial(geom.jitter_std(), &mut rng), geom);
        let h_f = sampler.sample(&mut rng);
        m.push((delta * (h_p * h_f).powi(2)).ln_1p() / std::f64::consts::LN_2);
    }
    m
}

/// Monte-Carlo capacity for a given deterministic SNR gain `delta`.
pub fn monte_carlo_from_delta(
    delta: f64,
    geom: &MisalignmentGeometry,
    fading: &AlphaMuParams,
    samples: u64,
    seed: u64,
) -> Result<CapacityResult> {
    if samples < 2 {
        return Err(Error::invalid(
            "mc.samples",
            format!("need at least 2 samples, got {samples}"),
        ));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::invalid(
            "delta",
            format!("must be finite and > 0, got {delta}"),
        ));
    }
    let sampler = AlphaMuSampler::new(fading)?;
    let chunks = samples.div_ceil(MC_CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let count = MC_CHUNK.min(samples - k * MC_CHUNK);
            chunk_moments(delta, geom, &sampler, seed, k, count)
        })
        .collect();
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    let variance = total.m2 / (total.n - 1) as f64;
    Ok(CapacityResult {
        value: total.mean,
        method: Method::MonteCarlo,
        std_error: (variance / total.n as f64).sqrt(),
        sample_count: total.n,
        low_sample_warning: total.n < MC_MIN_RELIABLE_SAMPLES,
    })
}

/// Monte-Carlo capacity: draws `(r, h_f)`, forms `h = h_l h_p(r) h_f` and averages `log₂(1 + |h|² P/N_o)`.
pub fn capacity_monte_carlo(
    link: &LinkParams,
    env: &Environment,
    provider: &AbsorptionProvider,
    geom: &MisalignmentGeometry,
    fading: &AlphaMuParams,
    samples: u64,
    seed: u64,
) -> Result<CapacityResult> {
    link.validate()?;
    let h_l = deterministic_gain(link, env, provider)?;
    monte_carlo_from_delta(snr_instant(h_l, link.snr0), geom, fading, samples, seed)
}
