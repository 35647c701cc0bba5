//! N-step unit-length random walk with uniformly random directions: its
//! characteristic function a(|ξ|)^N, the radial density by Fourier
//! inversion (oscillatory quadrature between Bessel zeros with tail
//! acceleration), and a reproducible Monte-Carlo oracle.

use crate::error::{Error, Result};
use crate::special::{bessel_j, gamma, BesselOrder};
use crate::symbol::{spherical_symbol, Symbol};
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use std::sync::OnceLock;

/// Oscillatory-integral controls: panels run between consecutive zeros of
/// the Bessel factor, each integrated with a Gauss rule, with the tail
/// either bounded by the integrable envelope or accelerated by repeated
/// averaging of partial sums.
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    /// Hard cap on the radial frequency reached by panels.
    pub max_radius: f64,
    /// Gauss-Legendre order per panel.
    pub gauss_order: usize,
    /// Extra subdivisions of each zero-to-zero panel.
    pub subpanels: u32,
    /// Absolute tail tolerance.
    pub tail_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            max_radius: 20_000.0,
            gauss_order: 16,
            subpanels: 2,
            tail_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct McSpec {
    pub samples: usize,
    pub seed: u64,
}

impl Default for McSpec {
    fn default() -> Self {
        McSpec {
            samples: 1_000_000,
            seed: 42,
        }
    }
}

/// One walk experiment: dimension, step count, and numeric controls.
#[derive(Debug, Clone)]
pub struct WalkSpec {
    pub n: usize,
    pub steps: u32,
    pub quadrature: QuadratureSpec,
    pub mc: McSpec,
}

impl WalkSpec {
    pub fn new(n: usize, steps: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!(
                "walk needs dimension n >= 2, got {n}"
            )));
        }
        if steps == 0 {
            return Err(Error::Domain("walk needs at least one step".into()));
        }
        Ok(WalkSpec {
            n,
            steps,
            quadrature: QuadratureSpec::default(),
            mc: McSpec::default(),
        })
    }

    fn symbol(&self) -> Symbol {
        spherical_symbol(self.n).expect("n >= 2 checked at construction")
    }
}

/// Characteristic function of the N-step walk at radial frequency t.
pub fn char_value(n: usize, steps: u32, t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::Domain(format!("radial frequency must be >= 0, got {t}")));
    }
    let a = spherical_symbol(n)?;
    Ok(a.eval_radial(t).re.powi(steps as i32))
}

/// Surface measure of the unit sphere S^{n−1}.
pub fn sphere_surface(n: usize) -> f64 {
    2.0 * std::f64::consts::PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0)
}

fn gauss_legendre(order: usize) -> &'static (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    assert_eq!(order, 16, "only the order-16 rule is cached");
    CACHE.get_or_init(|| {
        let n = 16usize;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            // Newton iteration on P_n from the Chebyshev initial guess
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0f64, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

fn gauss_panel(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (nodes, weights) = gauss_legendre(16);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut sum = 0.0;
    for (&x, &w) in nodes.iter().zip(weights) {
        sum += w * f(c + h * x);
    }
    sum * h
}

/// Wynn epsilon acceleration of the partial-sum tail; returns the best
/// even-column estimate and the disagreement between the two even columns
/// that agreed most closely. Handles oscillatory transients of arbitrary
/// phase, which plain averaging cannot.
fn accelerate(partials: &[f64]) -> (f64, f64) {
    let take = partials.len().min(36);
    let s = &partials[partials.len() - take..];
    let mut prev: Vec<f64> = vec![0.0; s.len() + 1]; // ε_{-1} ≡ 0
    let mut cur: Vec<f64> = s.to_vec(); // ε_0 = partial sums
    let mut best = *cur.last().unwrap();
    let mut best_err = f64::INFINITY;
    let mut last_even = best;
    let mut col = 0usize;
    while cur.len() >= 2 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            if d.abs() < 1e-305 {
                next.push(cur[i + 1]);
            } else {
                next.push(prev[i + 1] + 1.0 / d);
            }
        }
        prev = std::mem::replace(&mut cur, next);
        col += 1;
        if col % 2 == 0 {
            let cand = *cur.last().unwrap();
            if cand.is_finite() {
                let err = (cand - last_even).abs();
                if err < best_err {
                    best_err = err;
                    best = cand;
                }
                last_even = cand;
            }
        }
    }
    (best, best_err)
}

/// Result of one density quadrature.
#[derive(Debug, Clone, Copy)]
pub struct DensityEstimate {
    /// Density value (clipped at zero).
    pub value: f64,
    /// Magnitude of any negative excursion that was clipped away.
    pub clipped: f64,
    /// Estimated quadrature tail error.
    pub tail_error: f64,
}

/// Density of the walk's endpoint at radius r > 0:
/// p(r) = (2π)^{−n/2} r^{−(n−2)/2} ∫₀^∞ a(t)^N J_{(n−2)/2}(rt) t^{n/2} dt.
pub fn density_radial(spec: &WalkSpec, r: f64) -> Result<DensityEstimate> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("density needs r > 0, got {r}")));
    }
    let n = spec.n as f64;
    let steps = spec.steps;
    let delta = BesselOrder::new((n - 2.0) / 2.0)?;
    let a = spec.symbol();
    let integrand = |t: f64| -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        let av = a.eval_radial(t).re.powi(steps as i32);
        av * bessel_j(delta, r * t).expect("r·t >= 0") * t.powf(n / 2.0)
    };

    // envelope exponent of |integrand|; integrable tail iff e < −1
    let e = n / 2.0 - (n - 1.0) * f64::from(steps) / 2.0 - 0.5;
    let envelope_tail = |t_end: f64| -> Option<f64> {
        if e >= -1.0 - 1e-9 || t_end <= 1.0 {
            return None;
        }
        // |a(t)| ≤ A t^{−(n−1)/2} with a measured constant, |J| ≤ √(2/(πrt))
        let amp = (2.0 / (std::f64::consts::PI * r)).sqrt();
        let mut a_const: f64 = 0.0;
        for i in 0..64 {
            let t = t_end * (0.5 + 0.5 * f64::from(i) / 63.0);
            a_const = a_const.max(a.eval_radial(t).re.abs() * t.powf((n - 1.0) / 2.0));
        }
        let b = 1.3 * a_const.powi(steps as i32) * amp;
        Some(b * t_end.powf(e + 1.0) / (-e - 1.0))
    };

    // panel boundaries near the zeros of J_δ(rt) (McMahon)
    let zero = |i: u32| -> f64 {
        (f64::from(i) + delta.get() / 2.0 - 0.25) * std::f64::consts::PI / r
    };
    let q = &spec.quadrature;
    let mut partials = Vec::new();
    let mut sum = 0.0;
    let mut t_prev = 0.0f64;
    let mut i = 1u32;
    let mut result: Option<(f64, f64)> = None;
    while zero(i) < q.max_radius {
        let t_next = zero(i).max(t_prev + 1e-12);
        let width = (t_next - t_prev) / f64::from(q.subpanels.max(1));
        // cap subpanel widths at ~π so the walk factor is resolved too
        let extra = (width / std::f64::consts::PI).ceil() as u32;
        let pieces = q.subpanels.max(1) * extra.max(1);
        let step = (t_next - t_prev) / f64::from(pieces);
        let mut panel = 0.0;
        for j in 0..pieces {
            let a0 = t_prev + f64::from(j) * step;
            panel += gauss_panel(&integrand, a0, a0 + step);
        }
        sum += panel;
        partials.push(sum);
        t_prev = t_next;
        i += 1;

        if partials.len() >= 8 && partials.len() % 4 == 0 {
            if let Some(tail) = envelope_tail(t_prev) {
                if tail < q.tail_tol {
                    result = Some((sum, tail));
                    break;
                }
            }
            if partials.len() >= 24 {
                let (acc, err) = accelerate(&partials);
                if err < q.tail_tol {
                    result = Some((acc, err));
                    break;
                }
            }
        }
    }
    let (integral, tail_error) = result.ok_or_else(|| {
        Error::Quadrature(format!(
            "tail not converged for n = {}, N = {}, r = {r} within t <= {}",
            spec.n, steps, q.max_radius
        ))
    })?;

    let pref = (2.0 * std::f64::consts::PI).powf(-n / 2.0) * r.powf(-(n - 2.0) / 2.0);
    let raw = pref * integral;
    Ok(if raw < 0.0 {
        DensityEstimate {
            value: 0.0,
            clipped: -raw,
            tail_error,
        }
    } else {
        DensityEstimate {
            value: raw,
            clipped: 0.0,
            tail_error,
        }
    })
}

/// Radial probability density ω_{n−1} r^{n−1} p(r) of the endpoint radius.
pub fn radial_pdf(spec: &WalkSpec, r: f64) -> Result<f64> {
    let d = density_radial(spec, r)?;
    Ok(sphere_surface(spec.n) * r.powf(spec.n as f64 - 1.0) * d.value)
}

/// CDF of the endpoint radius at each of the given (sorted, positive)
/// radii, by cumulative panel integration of the radial density.
pub fn radial_cdf_points(spec: &WalkSpec, radii: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(radii.len());
    let mut acc = 0.0;
    let mut r_prev = 0.0f64;
    for &r in radii {
        if r <= r_prev {
            return Err(Error::Domain("radii must be strictly increasing".into()));
        }
        let pieces = ((r - r_prev) / 0.1).ceil() as usize;
        let step = (r - r_prev) / pieces as f64;
        for j in 0..pieces {
            let a = r_prev + j as f64 * step;
            // the integrand is smooth away from 0; skip the removable left
            // endpoint by the open Gauss nodes
            acc += gauss_panel(&|t: f64| radial_pdf(spec, t).unwrap_or(0.0), a, a + step);
        }
        out.push(acc);
        r_prev = r;
    }
    Ok(out)
}

/// Total mass ∫₀^N ω r^{n−1} p(r) dr; equals 1 when a^N is integrable.
pub fn total_mass(spec: &WalkSpec) -> Result<f64> {
    let radii = [f64::from(spec.steps)];
    Ok(radial_cdf_points(spec, &radii)?[0])
}

/// Empirical radial distribution from Monte-Carlo sampling.
#[derive(Debug, Clone)]
pub struct McWalk {
    radii: Vec<f64>,
    dim: usize,
}

impl McWalk {
    pub fn samples(&self) -> usize {
        self.radii.len()
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Empirical CDF of the endpoint radius.
    pub fn cdf(&self, r: f64) -> f64 {
        let idx = self.radii.partition_point(|&x| x <= r);
        idx as f64 / self.radii.len() as f64
    }

    /// Binomial standard error of the CDF at r.
    pub fn cdf_stderr(&self, r: f64) -> f64 {
        let f = self.cdf(r);
        (f * (1.0 - f) / self.radii.len() as f64).sqrt()
    }

    /// Smoothed density of the endpoint vector near r, with its standard
    /// error, from a CDF difference over [r−h, r+h].
    pub fn density_estimate(&self, r: f64, half_width: f64) -> (f64, f64) {
        let mass = self.cdf(r + half_width) - self.cdf(r - half_width);
        let shell = sphere_surface(self.dim) * r.powf(self.dim as f64 - 1.0) * 2.0 * half_width;
        let se = (mass * (1.0 - mass) / self.radii.len() as f64).sqrt() / shell;
        (mass / shell, se)
    }

    /// Histogram of radii over [0, max] with the given bin count.
    pub fn histogram(&self, bins: usize, max: f64) -> Vec<(f64, u64)> {
        let mut counts = vec![0u64; bins];
        for &r in &self.radii {
            let b = ((r / max) * bins as f64).floor() as usize;
            if b < bins {
                counts[b] += 1;
            }
        }
        counts
            .into_iter()
            .enumerate()
            .map(|(i, c)| ((i as f64 + 0.5) * max / bins as f64, c))
            .collect()
    }
}

/// Sample |X₁ + … + X_N| for N independent uniform unit steps.
///
/// Sampling is split into 64 fixed chunks, one ChaCha stream per chunk, so
/// the result is reproducible no matter how the work is scheduled; the
/// final radii are sorted, which also fixes the aggregation order.
pub fn mc_walk(spec: &WalkSpec) -> Result<McWalk> {
    if spec.mc.samples < 1_000 {
        return Err(Error::Config(format!(
            "need at least 1000 samples, got {}",
            spec.mc.samples
        )));
    }
    const CHUNKS: u64 = 64;
    let base = spec.mc.samples / CHUNKS as usize;
    let extra = spec.mc.samples % CHUNKS as usize;
    let mut radii = Vec::with_capacity(spec.mc.samples);
    let n = spec.n;
    let steps = spec.steps;
    for chunk in 0..CHUNKS {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(spec.mc.seed);
        rng.set_stream(chunk + 1);
        let todo = base + usize::from((chunk as usize) < extra);
        let mut pos = vec![0.0f64; n];
        let mut dir = vec![0.0f64; n];
        for _ in 0..todo {
            pos.iter_mut().for_each(|x| *x = 0.0);
            for _ in 0..steps {
                loop {
                    let mut norm2 = 0.0;
                    for d in dir.iter_mut() {
                        *d = StandardNormal.sample(&mut rng);
                        norm2 += *d * *d;
                    }
                    if norm2 > 1e-12 {
                        let inv = norm2.sqrt().recip();
                        for (p, d) in pos.iter_mut().zip(&dir) {
                            *p += *d * inv;
                        }
                        break;
                    }
                }
            }
            radii.push(pos.iter().map(|x| x * x).sum::<f64>().sqrt());
        }
    }
    radii.sort_by(f64::total_cmp);
    Ok(McWalk { radii, dim: n })
}
