//! Pointing-error (misalignment) fading.
//!
//! A circular Gaussian beam of footprint radius `w_d` hits a circular aperture
//! of radius `a` with a radial offset `r`. The collected power fraction is
//! approximated by `h_p(r) = A_o exp(−2 r² / w_eq²)` with
//!
//! ```text
//! u      = √π a / (√2 w_d)
//! A_o    = erf(u)²
//! w_eq²  = w_d² √π erf(u) / (2 u e^{−u²})
//! ```
//!
//! With independent Gaussian jitter of standard deviation `σ_s` in both
//! directions, `r` is Rayleigh and `h_p` has CDF `(x / A_o)^ξ` on `[0, A_o]`
//! with `ξ = w_eq² / (4 σ_s²)`.

use rand::Rng;
use serde::Serialize;

use crate::error::{require_positive, Result};

/// Misalignment geometry and the quantities derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MisalignmentGeometry {
    aperture_radius: f64,
    beam_radius: f64,
    jitter_std: f64,
    u: f64,
    a0: f64,
    w_eq: f64,
    xi: f64,
}

/// Build the geometry from aperture radius `a`, footprint radius `w_d` and jitter σ_s (all m).
pub fn derive_misalignment(
    aperture_radius: f64,
    beam_radius: f64,
    jitter_std: f64,
) -> Result<MisalignmentGeometry> {
    require_positive("geom.aperture_radius", aperture_radius)?;
    require_positive("geom.beam_radius", beam_radius)?;
    require_positive("geom.sigma_s", jitter_std)?;
    let u =
        std::f64::consts::PI.sqrt() * aperture_radius / (std::f64::consts::SQRT_2 * beam_radius);
    let erf_u = libm::erf(u);
    let a0 = erf_u * erf_u;
    let w_eq_sq = beam_radius * beam_radius * std::f64::consts::PI.sqrt() * erf_u
        / (2.0 * u * (-u * u).exp());
    let w_eq = w_eq_sq.sqrt();
    let xi = w_eq_sq / (4.0 * jitter_std * jitter_std);
    Ok(MisalignmentGeometry {
        aperture_radius,
        beam_radius,
        jitter_std,
        u,
        a0,
        w_eq,
        xi,
    })
}

impl MisalignmentGeometry {
    /// Geometry whose jitter is chosen so that the shape parameter equals `xi`.
    pub fn with_shape(aperture_radius: f64, beam_radius: f64, xi: f64) -> Result<Self> {
        require_positive("geom.xi", xi)?;
        let probe = derive_misalignment(aperture_radius, beam_radius, 1.0)?;
        derive_misalignment(aperture_radius, beam_radius, probe.w_eq / (2.0 * xi.sqrt()))
    }

    pub fn aperture_radius(&self) -> f64 {
        self.aperture_radius
    }
    pub fn beam_radius(&self) -> f64 {
        self.beam_radius
    }
    pub fn jitter_std(&self) -> f64 {
        self.jitter_std
    }
    pub fn u(&self) -> f64 {
        self.u
    }
    /// Fraction of power collected at zero offset.
    pub fn a0(&self) -> f64 {
        self.a0
    }
    /// Equivalent beam width, m.
    pub fn w_eq(&self) -> f64 {
        self.w_eq
    }
    /// Shape parameter of the `h_p` density.
    pub fn xi(&self) -> f64 {
        self.xi
    }
}

/// Collected power fraction at radial offset `r`.
pub fn hp_of_r(r: f64, geom: &MisalignmentGeometry) -> f64 {
    geom.a0 * (-2.0 * r * r / (geom.w_eq * geom.w_eq)).exp()
}

/// Density of `h_p`: `ξ A_o^{−ξ} x^{ξ−1}` on `(0, A_o]`, zero elsewhere.
pub fn hp_pdf(x: f64, geom: &MisalignmentGeometry) -> f64 {
    if x <= 0.0 || x > geom.a0 {
        return 0.0;
    }
    let xi = geom.xi;
    (xi.ln() + (xi - 1.0) * x.ln() - xi * geom.a0.ln()).exp()
}

/// CDF of `h_p`: `(x / A_o)^ξ`.
pub fn hp_cdf(x: f64, geom: &MisalignmentGeometry) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= geom.a0 {
        1.0
    } else {
        (x / geom.a0).powf(geom.xi)
    }
}

/// Inverse Rayleigh CDF: the offset whose CDF `1 − exp(−r² / 2σ²)` equals `u ∈ [0, 1)`.
pub fn rayleigh_from_uniform(u: f64, sigma: f64) -> f64 {
    sigma * (-2.0 * (-u).ln_1p()).sqrt()
}

/// Draw a Rayleigh radial offset with scale `sigma`.
pub fn sample_radial<R: Rng + ?Sized>(sigma: f64, rng: &mut R) -> f64 {
    rayleigh_from_uniform(rng.random::<f64>(), sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, Tolerance};
    use crate::rng::stream;

    fn geom() -> MisalignmentGeometry {
        derive_misalignment(0.05, 0.12, 0.01).unwrap()
    }

    #[test]
    fn derived_quantities() {
        let g = derive_misalignment(0.1, 0.1, 0.02).unwrap();
        assert!((g.u() - (std::f64::consts::PI / 2.0).sqrt()).abs() < 1e-15);
        let erf_u = libm::erf(g.u());
        assert!((g.a0() - erf_u * erf_u).abs() < 1e-16);
        assert!(g.a0() > 0.0 && g.a0() < 1.0);
        assert!(g.w_eq() >= g.beam_radius());
        assert!((g.xi() - g.w_eq().powi(2) / (4.0 * 0.02f64.powi(2))).abs() < 1e-12 * g.xi());
        // pure function of the inputs
        assert_eq!(derive_misalignment(0.1, 0.1, 0.02).unwrap(), g);
    }

    #[test]
    fn with_shape_hits_target() {
        let g = MisalignmentGeometry::with_shape(0.05, 0.12, 4.0).unwrap();
        assert!((g.xi() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn gain_profile() {
        let g = geom();
        assert_eq!(hp_of_r(0.0, &g), g.a0());
        let r = g.w_eq() / std::f64::consts::SQRT_2;
        assert!((hp_of_r(r, &g) - g.a0() * (-1.0f64).exp()).abs() < 1e-16);
        let mut prev = f64::INFINITY;
        for k in 0..50 {
            let v = hp_of_r(k as f64 * 0.01, &g);
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn density_normalizes() {
        for sigma in [0.005, 0.01, 0.05, 0.2] {
            let g = derive_misalignment(0.05, 0.12, sigma).unwrap();
            let total =
                integrate(|x| hp_pdf(x, &g), 0.0, g.a0(), Tolerance::new(1e-13, 1e-13)).unwrap();
            assert!(
                (total.value - 1.0).abs() < 1e-10,
                "σ={sigma}: {}",
                total.value
            );
        }
    }

    #[test]
    fn unit_shape_is_uniform() {
        let g = MisalignmentGeometry::with_shape(0.05, 0.12, 1.0).unwrap();
        for x in [0.1, 0.3, 0.5] {
            let x = x * g.a0();
            assert!((hp_pdf(x, &g) - 1.0 / g.a0()).abs() < 1e-10);
        }
        assert_eq!(hp_pdf(1.01 * g.a0(), &g), 0.0);
        assert_eq!(hp_pdf(-0.1, &g), 0.0);
    }

    #[test]
    fn inverse_transform_endpoint() {
        assert_eq!(rayleigh_from_uniform(0.0, 0.3), 0.0);
        let u = 1.0 - (-0.5f64).exp();
        assert!((rayleigh_from_uniform(u, 2.0) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn sampled_gain_follows_analytic_cdf() {
        let g = geom();
        let n = 200_000;
        let mut rng = stream(11, 0);
        let mut samples: Vec<f64> = (0..n)
            .map(|_| hp_of_r(sample_radial(g.jitter_std(), &mut rng), &g))
            .collect();
        samples.sort_by(f64::total_cmp);
        let mut worst = 0.0f64;
        for (i, &x) in samples.iter().enumerate() {
            let f = hp_cdf(x, &g);
            worst = worst
                .max((f - i as f64 / n as f64).abs())
                .max((f - (i + 1) as f64 / n as f64).abs());
        }
        assert!(worst < 4.0 / (n as f64).sqrt(), "KS distance {worst}");
    }
}
