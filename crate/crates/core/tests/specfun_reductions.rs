//! Fox H-function against its closed-form reductions, permutation symmetry and
//! contour independence.

use thzlink::specfun::{
    fox_h, fox_h_on_contour, fox_h_scaled, plan_contour_at, upper_incomplete_gamma, FoxHSpec,
};

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

fn exp_spec() -> FoxHSpec {
    FoxHSpec::new(1, 0, vec![], vec![(0.0, 1.0)]).unwrap()
}

fn log1p_spec() -> FoxHSpec {
    FoxHSpec::new(
        1,
        2,
        vec![(1.0, 1.0), (1.0, 1.0)],
        vec![(1.0, 1.0), (0.0, 1.0)],
    )
    .unwrap()
}

fn upper_gamma_spec(phi: f64) -> FoxHSpec {
    FoxHSpec::new(2, 0, vec![(1.0, 1.0)], vec![(0.0, 1.0), (phi, 1.0)]).unwrap()
}

#[test]
fn exponential_reduction_on_log_grid() {
    for z in log_grid(1e-3, 1e3, 25) {
        let h = fox_h_scaled(&exp_spec(), z).unwrap();
        // compare in log space so that e^{-1000} keeps relative meaning
        let err = (h.ln_abs() + z).abs();
        assert!(h.mantissa > 0.0 && err < 1e-8, "z={z}: ln err {err}");
    }
}

#[test]
fn log1p_reduction_on_log_grid() {
    for z in log_grid(1e-3, 1e3, 25) {
        let got = fox_h(&log1p_spec(), z).unwrap();
        assert!(rel(got, z.ln_1p()) < 1e-8, "z={z}: {got} vs {}", z.ln_1p());
    }
}

#[test]
fn upper_gamma_reduction_on_log_grid() {
    for phi in [0.5, 1.5, 3.0] {
        for z in log_grid(1e-3, 50.0, 20) {
            let got = fox_h(&upper_gamma_spec(phi), z).unwrap();
            let want = upper_incomplete_gamma(phi, z).unwrap();
            assert!(rel(got, want) < 1e-8, "Φ={phi} z={z}: {got} vs {want}");
        }
    }
}

#[test]
fn permutation_within_groups_is_invariant() {
    let alpha = 2.6;
    let xi = 3.1;
    let phi = (alpha * 2.0 - xi) / alpha;
    let k = -xi / 2.0;
    let base = FoxHSpec::new(
        4,
        1,
        vec![(k, alpha / 2.0), (1.0 + k, alpha / 2.0), (1.0, 1.0)],
        vec![(0.0, 1.0), (phi, 1.0), (k, alpha / 2.0), (k, alpha / 2.0)],
    )
    .unwrap();
    // permute the m-group of the lower row and the (i > n) group of the upper row
    let permuted = FoxHSpec::new(
        4,
        1,
        vec![(k, alpha / 2.0), (1.0, 1.0), (1.0 + k, alpha / 2.0)],
        vec![(k, alpha / 2.0), (phi, 1.0), (k, alpha / 2.0), (0.0, 1.0)],
    )
    .unwrap();
    for z in [1e-3, 0.2, 7.0] {
        let a = fox_h(&base, z).unwrap();
        let b = fox_h(&permuted, z).unwrap();
        assert!(rel(a, b) < 1e-9, "z={z}: {a} vs {b}");
    }
    let g1 = FoxHSpec::new(2, 0, vec![(1.0, 1.0)], vec![(0.0, 1.0), (1.5, 1.0)]).unwrap();
    let g2 = FoxHSpec::new(2, 0, vec![(1.0, 1.0)], vec![(1.5, 1.0), (0.0, 1.0)]).unwrap();
    assert!(rel(fox_h(&g1, 0.9).unwrap(), fox_h(&g2, 0.9).unwrap()) < 1e-9);
}

#[test]
fn contour_position_does_not_matter() {
    let alpha = 2.0;
    let xi = 4.0;
    let k = -xi / 2.0;
    let capacity_like = FoxHSpec::new(
        4,
        1,
        vec![(k, alpha / 2.0), (1.0 + k, alpha / 2.0), (1.0, 1.0)],
        vec![(0.0, 1.0), (1.0, 1.0), (k, alpha / 2.0), (k, alpha / 2.0)],
    )
    .unwrap();
    for (spec, z) in [
        (log1p_spec(), 1e3),
        (log1p_spec(), 1e-3),
        (capacity_like.clone(), 0.05),
        (capacity_like, 20.0),
    ] {
        let (lo, hi) = spec.window();
        let width = hi - lo;
        let reference = fox_h(&spec, z).unwrap();
        for frac in [0.2, 0.35, 0.5, 0.65, 0.8] {
            let c = lo + frac * width;
            let plan = plan_contour_at(&spec, z, c).unwrap();
            let got = fox_h_on_contour(&spec, z, &plan).unwrap().value();
            assert!(
                rel(got, reference) < 1e-8,
                "z={z} c={c}: {got} vs {reference}"
            );
        }
    }
}
