//! Fox H-function of positive real argument by Mellin–Barnes contour quadrature.
//!
//! ```text
//! H^{m,n}_{p,q}[z] = 1/(2πi) ∫_{c−i∞}^{c+i∞} χ(s) z^{−s} ds
//!
//!           ∏_{j≤m} Γ(b_j + B_j s) ∏_{i≤n} Γ(1 − a_i − A_i s)
//! χ(s) = ─────────────────────────────────────────────────────
//!         ∏_{j>m} Γ(1 − b_j − B_j s) ∏_{i>n} Γ(a_i + A_i s)
//! ```
//!
//! The vertical line `Re s = c` separates the poles of the `b`-group (to the
//! left) from those of the `a`-group (to the right). Along it the integrand is
//! evaluated entirely in log space and summed with the trapezoid rule, halving
//! the step until two successive estimates agree. For an analytic integrand
//! decaying along the line the trapezoid rule converges geometrically in the
//! step, so the agreement test is conservative.
//!
//! Convergence condition: the balance `a* = Σ_{j≤m} B_j + Σ_{i≤n} A_i −
//! Σ_{j>m} B_j − Σ_{i>n} A_i` must be positive. Then `|χ(c + it)|` decays like
//! `exp(−π a* |t| / 2)` and the integral converges absolutely for every `z > 0`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::loggamma::log_gamma_complex;

/// Successive trapezoid estimates must agree to this relative tolerance.
pub const REL_TOL: f64 = 1e-9;
/// Contour truncation: integrand magnitude relative to its peak.
pub const TAIL_TOL: f64 = 1e-12;
/// Relative pole slack, as a fraction of the separation window width.
pub const POLE_SLACK_FRACTION: f64 = 1e-3;
/// Absolute lower bound on the pole slack.
pub const POLE_SLACK_MIN: f64 = 1e-6;

const MAX_REFINEMENTS: usize = 14;
const MAX_TAIL: f64 = 1e5;
const MAX_INITIAL_HALF_NODES: usize = 1 << 16;
/// Distance kept from the nearest pole when the window is unbounded on that side.
const UNBOUNDED_MIN_DISTANCE: f64 = 0.5;

/// Orders and parameter pairs of one Fox H-function.
#[derive(Debug, Clone, PartialEq)]
pub struct FoxHSpec {
    m: usize,
    n: usize,
    upper: Vec<(f64, f64)>,
    lower: Vec<(f64, f64)>,
}

impl FoxHSpec {
    /// `upper` holds the `(a_i, A_i)` pairs (length p), `lower` the `(b_j, B_j)` pairs (length q).
    pub fn new(m: usize, n: usize, upper: Vec<(f64, f64)>, lower: Vec<(f64, f64)>) -> Result<Self> {
        if m > lower.len() || n > upper.len() {
            return Err(Error::invalid(
                "fox_h.orders",
                format!(
                    "need m <= q and n <= p, got m={m}, n={n}, p={}, q={}",
                    upper.len(),
                    lower.len()
                ),
            ));
        }
        for (i, &(value, scale)) in upper.iter().enumerate() {
            if !value.is_finite() || !(scale.is_finite() && scale > 0.0) {
                return Err(Error::invalid(
                    format!("fox_h.upper[{i}]"),
                    format!("({value}, {scale}) needs a finite value and a positive scale"),
                ));
            }
        }
        for (j, &(value, scale)) in lower.iter().enumerate() {
            if !value.is_finite() || !(scale.is_finite() && scale > 0.0) {
                return Err(Error::invalid(
                    format!("fox_h.lower[{j}]"),
                    format!("({value}, {scale}) needs a finite value and a positive scale"),
                ));
            }
        }
        let spec = Self { m, n, upper, lower };
        let (lo, hi) = spec.window();
        if lo >= hi {
            return Err(Error::Unsupported(format!(
                "no pole-separating contour: left poles reach {lo}, right poles start at {hi}"
            )));
        }
        Ok(spec)
    }

    /// Meijer G-function parameters: every scale equal to one.
    pub fn meijer(m: usize, n: usize, a: &[f64], b: &[f64]) -> Result<Self> {
        Self::new(
            m,
            n,
            a.iter().map(|&v| (v, 1.0)).collect(),
            b.iter().map(|&v| (v, 1.0)).collect(),
        )
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn p(&self) -> usize {
        self.upper.len()
    }
    pub fn q(&self) -> usize {
        self.lower.len()
    }
    pub fn upper(&self) -> &[(f64, f64)] {
        &self.upper
    }
    pub fn lower(&self) -> &[(f64, f64)] {
        &self.lower
    }

    /// Open interval of admissible `Re s`; either end may be infinite.
    pub fn window(&self) -> (f64, f64) {
        let lo = self.lower[..self.m]
            .iter()
            .map(|&(b, bs)| -b / bs)
            .fold(f64::NEG_INFINITY, f64::max);
        let hi = self.upper[..self.n]
            .iter()
            .map(|&(a, as_)| (1.0 - a) / as_)
            .fold(f64::INFINITY, f64::min);
        (lo, hi)
    }

    /// The balance `a*`; the contour integral converges for all `z > 0` iff it is positive.
    pub fn balance(&self) -> f64 {
        let lower_m: f64 = self.lower[..self.m].iter().map(|p| p.1).sum();
        let lower_rest: f64 = self.lower[self.m..].iter().map(|p| p.1).sum();
        let upper_n: f64 = self.upper[..self.n].iter().map(|p| p.1).sum();
        let upper_rest: f64 = self.upper[self.n..].iter().map(|p| p.1).sum();
        lower_m + upper_n - lower_rest - upper_rest
    }

    /// `ln χ(s)`, modulo 2πi.
    pub fn log_kernel(&self, s: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &(b, bs)) in self.lower.iter().enumerate() {
            if j < self.m {
                acc += log_gamma_complex(b + bs * s)?;
            } else {
                acc -= log_gamma_complex(1.0 - b - bs * s)?;
            }
        }
        for (i, &(a, as_)) in self.upper.iter().enumerate() {
            if i < self.n {
                acc += log_gamma_complex(1.0 - a - as_ * s)?;
            } else {
                acc -= log_gamma_complex(a + as_ * s)?;
            }
        }
        Ok(acc)
    }

    /// Log-magnitude of the real-line integrand `χ(c) z^{−c}`.
    fn log_magnitude_on_axis(&self, c: f64, ln_z: f64) -> f64 {
        match self.log_kernel(Complex64::new(c, 0.0)) {
            Ok(l) => l.re - c * ln_z,
            Err(_) => f64::INFINITY,
        }
    }
}

/// Vertical integration line and its truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourPlan {
    /// Real part of the integration line.
    pub c: f64,
    /// Truncation height `T`: the line is integrated over `[c − iT, c + iT]`.
    pub tail_limit: f64,
    /// Nodes of the initial (coarsest) trapezoid rule.
    pub node_count: usize,
}

/// `mantissa · e^{log_scale}`, for results beyond the `f64` exponent range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mantissa: f64,
    pub log_scale: f64,
}

impl Scaled {
    pub fn value(&self) -> f64 {
        self.mantissa * self.log_scale.exp()
    }

    /// Natural log of the magnitude.
    pub fn ln_abs(&self) -> f64 {
        self.mantissa.abs().ln() + self.log_scale
    }
}

fn pole_slack(lo: f64, hi: f64) -> f64 {
    let width = hi - lo;
    if width.is_finite() {
        (POLE_SLACK_FRACTION * width).max(POLE_SLACK_MIN)
    } else {
        POLE_SLACK_MIN
    }
}

fn check_argument(spec: &FoxHSpec, z: f64) -> Result<f64> {
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::Domain(format!(
            "Fox H argument must be finite and > 0, got {z}"
        )));
    }
    let balance = spec.balance();
    if balance <= 0.0 {
        return Err(Error::Unsupported(format!(
            "contour integral needs balance a* > 0, got {balance}"
        )));
    }
    Ok(z.ln())
}

/// Minimize `c ↦ ln|χ(c) z^{−c}|` over `[from, from ± ∞)`, walking away from the pole at `from`.
fn saddle_search(spec: &FoxHSpec, ln_z: f64, from: f64, direction: f64) -> f64 {
    let phi = |d: f64| spec.log_magnitude_on_axis(from + direction * d, ln_z);
    let mut lower = UNBOUNDED_MIN_DISTANCE;
    let mut d = lower;
    let mut value = phi(d);
    let mut step = UNBOUNDED_MIN_DISTANCE;
    let (mut a, mut b) = loop {
        let next = d + step;
        let next_value = phi(next);
        if next_value >= value || next > 1e6 {
            break (lower, next);
        }
        lower = d;
        d = next;
        value = next_value;
        step *= 1.5;
    };
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        if b - a < 1e-6 * (1.0 + a) {
            break;
        }
        let x1 = b - g * (b - a);
        let x2 = a + g * (b - a);
        if phi(x1) < phi(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    from + direction * 0.5 * (a + b)
}

/// Choose the integration line for `spec` at argument `z`.
///
/// A bounded separation window yields its midpoint. A window unbounded on one
/// side yields the minimizer of `|χ(c) z^{−c}|` (the saddle of the integrand on
/// the real axis), kept at least 0.5 away from the finite end.
pub fn plan_contour(spec: &FoxHSpec, z: f64) -> Result<ContourPlan> {
    let ln_z = check_argument(spec, z)?;
    let (lo, hi) = spec.window();
    let c = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (true, false) => saddle_search(spec, ln_z, lo, 1.0),
        (false, true) => saddle_search(spec, ln_z, hi, -1.0),
        (false, false) => {
            let right = saddle_search(spec, ln_z, 0.0, 1.0);
            let left = saddle_search(spec, ln_z, 0.0, -1.0);
            if spec.log_magnitude_on_axis(right, ln_z) <= spec.log_magnitude_on_axis(left, ln_z) {
                right
            } else {
                left
            }
        }
    };
    plan_contour_at(spec, z, c)
}

/// Plan for a caller-chosen line `Re s = c`; `c` must keep the pole slack.
pub fn plan_contour_at(spec: &FoxHSpec, z: f64, c: f64) -> Result<ContourPlan> {
    let ln_z = check_argument(spec, z)?;
    let (lo, hi) = spec.window();
    let slack = pole_slack(lo, hi);
    if hi - lo < 2.0 * slack {
        return Err(Error::Unsupported(format!(
            "pole-separation window ({lo}, {hi}) narrower than twice the pole slack {slack:e}"
        )));
    }
    if !(c.is_finite() && c >= lo + slack && c <= hi - slack) {
        return Err(Error::Unsupported(format!(
            "contour Re s = {c} outside ({lo}, {hi}) with slack {slack:e}"
        )));
    }

    let integrand_log = |t: f64| -> Result<f64> {
        let s = Complex64::new(c, t);
        Ok(spec.log_kernel(s)?.re - c * ln_z)
    };

    // Past t_asym the |t|^β factor can no longer outgrow exp(−π a* |t| / 2).
    let decay = 0.5 * PI * spec.balance();
    let beta = power_exponent(spec, c);
    let t_asym = if beta > 0.0 { 2.0 * beta / decay } else { 0.0 };

    let mut peak = integrand_log(0.0)?;
    let mut t = 0.0_f64;
    let threshold = TAIL_TOL.ln();
    loop {
        t += (0.05 * t).max(0.25);
        if t > MAX_TAIL {
            return Err(Error::Unsupported(format!(
                "integrand does not decay below {TAIL_TOL:e} of its peak before |t| = {MAX_TAIL}"
            )));
        }
        let here = integrand_log(t)?.max(integrand_log(-t)?);
        peak = peak.max(here);
        if t >= t_asym && here - peak < threshold {
            break;
        }
    }
    let tail_limit = 2.0 * t;

    let pole_distance = (c - lo).min(hi - c);
    let step = 0.5f64
        .min(pole_distance)
        .min(PI / (2.0 * (ln_z.abs() + 1.0)))
        .max(tail_limit / MAX_INITIAL_HALF_NODES as f64);
    let half_nodes = (tail_limit / step).ceil() as usize;
    Ok(ContourPlan {
        c,
        tail_limit,
        node_count: 2 * half_nodes + 1,
    })
}

/// Real part of the exponent β in `|χ(c + it)| ~ K |t|^β e^{−π a* |t| / 2}`.
fn power_exponent(spec: &FoxHSpec, c: f64) -> f64 {
    // |Γ(x + iy)| ~ √(2π) |y|^{x − 1/2} e^{−π|y|/2}; the power of |t| from each factor
    let mut beta = 0.0;
    for (j, &(b, bs)) in spec.lower.iter().enumerate() {
        let x = b + bs * c - 0.5;
        let x_reflected = 1.0 - b - bs * c - 0.5;
        beta += if j < spec.m { x } else { -x_reflected };
    }
    for (i, &(a, as_)) in spec.upper.iter().enumerate() {
        let x = 1.0 - a - as_ * c - 0.5;
        let x_direct = a + as_ * c - 0.5;
        beta += if i < spec.n { x } else { -x_direct };
    }
    beta
}

/// Evaluate on a given plan, returning the result as a scaled pair.
pub fn fox_h_on_contour(spec: &FoxHSpec, z: f64, plan: &ContourPlan) -> Result<Scaled> {
    let ln_z = check_argument(spec, z)?;
    let c = plan.c;
    let half_nodes = (plan.node_count.max(3) - 1) / 2;
    let mut step = plan.tail_limit / half_nodes as f64;

    let log_integrand = |t: f64| -> Result<Complex64> {
        let s = Complex64::new(c, t);
        Ok(spec.log_kernel(s)? - s * ln_z)
    };

    // Scale from the coarse grid keeps every exponential in range.
    let mut coarse = Vec::with_capacity(2 * half_nodes + 1);
    for k in -(half_nodes as i64)..=(half_nodes as i64) {
        coarse.push(log_integrand(k as f64 * step)?);
    }
    let scale = coarse
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max);

    let mut sum = Complex64::new(0.0, 0.0);
    let mut sum_abs = 0.0;
    for l in &coarse {
        let v = (l - scale).exp();
        sum += v;
        sum_abs += v.norm();
    }
    let mut estimate = sum * step;
    let mut nodes = half_nodes;

    for _ in 0..MAX_REFINEMENTS {
        step *= 0.5;
        // new nodes sit at odd multiples of the halved step
        for k in 0..nodes {
            let t = (2 * k + 1) as f64 * step;
            for sign in [1.0, -1.0] {
                let v = (log_integrand(sign * t)? - scale).exp();
                sum += v;
                sum_abs += v.norm();
            }
        }
        nodes *= 2;
        let refined = sum * step;
        let change = (refined.re - estimate.re).abs();
        let noise = 64.0 * f64::EPSILON * sum_abs * step;
        let target = (REL_TOL * refined.re.abs()).max(noise);
        estimate = refined;
        if change <= target {
            let residue = estimate.im.abs();
            if residue > (10.0 * REL_TOL * estimate.re.abs()).max(1e3 * noise) {
                return Err(Error::Accuracy {
                    estimate: residue,
                    target,
                    context: " (imaginary residue of a real-parameter H-function)".into(),
                });
            }
            return Ok(Scaled {
                mantissa: estimate.re / (2.0 * PI),
                log_scale: scale,
            });
        }
        if nodes > 1 << 22 {
            return Err(Error::Accuracy {
                estimate: change,
                target,
                context: " (Mellin–Barnes trapezoid node budget exhausted)".into(),
            });
        }
    }
    Err(Error::Accuracy {
        estimate: f64::NAN,
        target: REL_TOL,
        context: " (Mellin–Barnes trapezoid refinement limit)".into(),
    })
}

/// Fox H-function as a scaled pair, with the contour chosen by [`plan_contour`].
pub fn fox_h_scaled(spec: &FoxHSpec, z: f64) -> Result<Scaled> {
    let plan = plan_contour(spec, z)?;
    fox_h_on_contour(spec, z, &plan)
}

/// Fox H-function `H^{m,n}_{p,q}[z]` for real parameters and `z > 0`.
pub fn fox_h(spec: &FoxHSpec, z: f64) -> Result<f64> {
    let scaled = fox_h_scaled(spec, z)?;
    let value = scaled.value();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Unsupported(format!(
            "H-function value e^{} overflows f64",
            scaled.ln_abs()
        )))
    }
}

/// Meijer G-function `G^{m,n}_{p,q}(z | a; b)`, the unit-scale Fox H-function.
pub fn meijer_g(m: usize, n: usize, a: &[f64], b: &[f64], z: f64) -> Result<f64> {
    fox_h(&FoxHSpec::meijer(m, n, a, b)?, z)
}
