//! Frequency-uniform decomposition □_k = F^{−1} φ_k F and the discrete
//! modulation norm (Σ_k ⟨k⟩^{sq} ‖□_k f‖_p^q)^{1/q}.
//!
//! The window is a tensor product of a telescoping 1-D partition
//! θ(t) = step(t + 1/2) − step(t − 1/2), which sums to one over ℤ exactly
//! and keeps supp φ_k inside |ξ − k|_∞ ≤ 1/2 + ε. The literal Euclidean
//! window of the usual definition cannot tile ℤⁿ verbatim for n ≥ 2
//! (lattice cells have circumradius √n/2); any bounded-overlap partition
//! yields an equivalent norm, so the tensor window is used throughout.

use crate::error::{Error, Result};
use crate::grid::{lp_of_values, BumpProfile, DomainTag, GridSpec, SampledField};
use crate::lattice::BlockIndex;
use crate::scalar::Real;
use num_complex::Complex;

/// Tensor-product partition of unity over ℤⁿ.
#[derive(Debug, Clone)]
pub struct PartitionSpec {
    dim: usize,
    profile: BumpProfile,
}

impl PartitionSpec {
    /// Transition width ε must lie in (0, 0.25): the flat part of the window
    /// then covers |t| ≤ 1/2 − ε and neighbours at ℓ∞ distance ≥ 2 never
    /// overlap.
    pub fn new(dim: usize, transition_width: f64) -> Result<Self> {
        if !(transition_width > 0.0 && transition_width < 0.25) {
            return Err(Error::Config(format!(
                "window transition width must lie in (0, 0.25), got {transition_width}"
            )));
        }
        Ok(PartitionSpec {
            dim,
            profile: BumpProfile::new(transition_width)?,
        })
    }

    /// Default width ε = 0.1; the ρ = sin(0.07)/4 bumps of the extremal
    /// construction sit strictly inside the flat region.
    pub fn standard(dim: usize) -> Self {
        Self::new(dim, 0.1).expect("0.1 is a valid width")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn transition_width(&self) -> f64 {
        self.profile.transition_width()
    }

    /// 1-D window θ: ≡ 1 on |t| ≤ 1/2 − ε, supported in |t| ≤ 1/2 + ε,
    /// Σ_k θ(t − k) = 1 for every t.
    pub fn theta(&self, t: f64) -> f64 {
        self.profile.step(t + 0.5) - self.profile.step(t - 0.5)
    }

    /// φ_k(ξ) = Π_i θ(ξ_i − k_i).
    pub fn window_phi(&self, k: &BlockIndex, xi: &[f64]) -> f64 {
        debug_assert_eq!(k.dim(), xi.len());
        let mut prod = 1.0;
        for (&c, &x) in k.coords().iter().zip(xi) {
            prod *= self.theta(x - c as f64);
            if prod == 0.0 {
                return 0.0;
            }
        }
        prod
    }

    /// Half-width of the window support per axis.
    pub fn support_radius(&self) -> f64 {
        0.5 + self.profile.transition_width()
    }
}

/// Parameters of the discrete modulation norm M^s_{p,q}.
#[derive(Debug, Clone)]
pub struct ModulationNormParams {
    pub p: f64,
    pub q: f64,
    pub s: f64,
    pub lattice_range: Vec<BlockIndex>,
}

impl ModulationNormParams {
    pub fn new(p: f64, q: f64, s: f64, lattice_range: Vec<BlockIndex>) -> Result<Self> {
        if p < 1.0 || q < 1.0 {
            return Err(Error::Domain(format!(
                "modulation norm needs p, q >= 1, got p = {p}, q = {q}"
            )));
        }
        if lattice_range.is_empty() {
            return Err(Error::Config("empty lattice range".into()));
        }
        Ok(ModulationNormParams {
            p,
            q,
            s,
            lattice_range,
        })
    }
}

/// All blocks with |k|_∞ ≤ radius, lexicographic.
pub fn box_range(dim: usize, radius: i64) -> Vec<BlockIndex> {
    let mut out = Vec::new();
    let mut cur = vec![-radius; dim];
    loop {
        out.push(BlockIndex::new(cur.clone()));
        let mut axis = dim;
        while axis > 0 {
            axis -= 1;
            cur[axis] += 1;
            if cur[axis] <= radius {
                break;
            }
            cur[axis] = -radius;
            if axis == 0 {
                return out;
            }
        }
    }
}

/// Per-axis storage-index window around block coordinate c, clipped to the
/// representable frequency range.
fn axis_bins(spec: &GridSpec, c: i64, radius: f64) -> Vec<usize> {
    let d = spec.freq_spacing();
    let m = spec.points_per_axis() as i64;
    let lo = ((c as f64 - radius) / d).ceil() as i64;
    let hi = ((c as f64 + radius) / d).floor() as i64;
    let mut out = Vec::with_capacity((hi - lo + 1).max(0) as usize);
    for b in lo..=hi {
        if b >= -m / 2 && b < m / 2 {
            out.push(if b >= 0 { b as usize } else { (b + m) as usize });
        }
    }
    out
}

/// □_k f: frequency data multiplied by φ_k. Accepts either domain and
/// returns the projection in the same domain as the input.
pub fn block_project<T: Real>(
    f: &SampledField<T>,
    k: &BlockIndex,
    partition: &PartitionSpec,
) -> Result<SampledField<T>> {
    if f.spec().dim() != k.dim() || partition.dim() != k.dim() {
        return Err(Error::GridMismatch(format!(
            "dimension mismatch: field {}, block {}, partition {}",
            f.spec().dim(),
            k.dim(),
            partition.dim()
        )));
    }
    let input_domain = f.domain();
    let freq = f.clone().into_frequency()?;
    let projected = project_in_frequency(&freq, k, partition);
    match input_domain {
        DomainTag::Frequency => Ok(projected),
        DomainTag::Space => projected.inverse(),
    }
}

/// Multiply by φ_k touching only the support box of the window.
fn project_in_frequency<T: Real>(
    freq: &SampledField<T>,
    k: &BlockIndex,
    partition: &PartitionSpec,
) -> SampledField<T> {
    let spec = freq.spec().clone();
    let radius = partition.support_radius();
    let bins: Vec<Vec<usize>> = k
        .coords()
        .iter()
        .map(|&c| axis_bins(&spec, c, radius))
        .collect();
    let mut out = SampledField::<T>::zeros(spec.clone(), DomainTag::Frequency);
    if bins.iter().any(|b| b.is_empty()) {
        return out;
    }
    let n = spec.dim();
    let m = spec.points_per_axis();
    let mut idx = vec![0usize; n];
    let mut xi = vec![0.0f64; n];
    loop {
        let mut flat = 0usize;
        for a in 0..n {
            flat = flat * m + bins[a][idx[a]];
            xi[a] = spec.freq_coord(bins[a][idx[a]]);
        }
        let w = partition.window_phi(k, &xi);
        if w != 0.0 {
            out.values_mut()[flat] = freq.values()[flat] * Complex::new(T::from_f64x(w), T::zero());
        }
        let mut axis = n;
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < bins[axis].len() {
                break;
            }
            idx[axis] = 0;
        }
    }
}

/// ‖□_k f‖_{L^p} for a frequency-domain field, via frequency-side Parseval
/// when p = 2 (exact) and a full inverse transform otherwise.
fn block_lp_norm<T: Real>(
    freq: &SampledField<T>,
    k: &BlockIndex,
    partition: &PartitionSpec,
    p: f64,
) -> Result<f64> {
    let projected = project_in_frequency(freq, k, partition);
    if (p - 2.0).abs() < 1e-15 {
        Ok(projected.l2_norm_via_parseval()?.to_f64x())
    } else {
        Ok(projected.inverse()?.lp_norm(p)?.to_f64x())
    }
}

/// One row of the per-block report.
#[derive(Debug, Clone)]
pub struct BlockRow {
    pub k: BlockIndex,
    pub abs_k: f64,
    pub block_norm: f64,
    pub weight: f64,
}

/// Per-block norms and weights over the declared range.
pub fn block_rows<T: Real>(
    f: &SampledField<T>,
    params: &ModulationNormParams,
    partition: &PartitionSpec,
) -> Result<Vec<BlockRow>> {
    let freq = f.clone().into_frequency()?;
    params
        .lattice_range
        .iter()
        .map(|k| {
            Ok(BlockRow {
                k: k.clone(),
                abs_k: k.euclid_norm(),
                block_norm: block_lp_norm(&freq, k, partition, params.p)?,
                weight: k.bracket().powf(params.s),
            })
        })
        .collect()
}

/// Discrete modulation norm over the declared lattice range.
///
/// Fails with the offending boundary block when a block on the rim of the
/// range still carries more than 1e−14 of the maximal block norm: the range
/// is then not large enough to capture the spectrum.
pub fn modulation_norm<T: Real>(
    f: &SampledField<T>,
    params: &ModulationNormParams,
    partition: &PartitionSpec,
) -> Result<f64> {
    let rows = block_rows(f, params, partition)?;
    let max_norm = rows.iter().fold(0.0f64, |m, r| m.max(r.block_norm));
    if max_norm > 0.0 {
        let range: std::collections::HashSet<&BlockIndex> = params.lattice_range.iter().collect();
        for row in &rows {
            if row.block_norm <= 1e-14 * max_norm {
                continue;
            }
            let on_boundary = neighbor_outside(&row.k, &range);
            if on_boundary {
                return Err(Error::IncompleteLatticeRange {
                    block: row.k.coords().to_vec(),
                    mass: row.block_norm / max_norm,
                });
            }
        }
    }
    Ok(aggregate(&rows, params.q, params.s))
}

fn neighbor_outside(k: &BlockIndex, range: &std::collections::HashSet<&BlockIndex>) -> bool {
    // scan the 3^n ℓ∞ neighbourhood
    let n = k.dim();
    let mut offs = vec![-1i64; n];
    loop {
        if offs.iter().any(|&o| o != 0) {
            let shifted = BlockIndex::new(
                k.coords()
                    .iter()
                    .zip(&offs)
                    .map(|(&c, &o)| c + o)
                    .collect(),
            );
            if !range.contains(&shifted) {
                return true;
            }
        }
        let mut axis = n;
        loop {
            if axis == 0 {
                return false;
            }
            axis -= 1;
            offs[axis] += 1;
            if offs[axis] <= 1 {
                break;
            }
            offs[axis] = -1;
        }
    }
}

fn aggregate(rows: &[BlockRow], q: f64, _s: f64) -> f64 {
    if q.is_infinite() {
        return rows
            .iter()
            .fold(0.0f64, |m, r| m.max(r.weight * r.block_norm));
    }
    let sum: f64 = rows
        .iter()
        .map(|r| (r.weight * r.block_norm).powf(q))
        .sum();
    sum.powf(1.0 / q)
}

/// Bessel-potential multiplier (1 + |ξ|²)^{τ/2}; returns the field in the
/// same domain as the input.
pub fn bessel_potential_apply<T: Real>(f: &SampledField<T>, tau: f64) -> Result<SampledField<T>> {
    let input_domain = f.domain();
    let mut freq = f.clone().into_frequency()?;
    freq.for_each_freq_mut(|xi, v| {
        let r2: f64 = xi.iter().map(|x| x * x).sum();
        let w = (1.0 + r2).powf(0.5 * tau);
        *v *= Complex::new(T::from_f64x(w), T::zero());
    })?;
    match input_domain {
        DomainTag::Space => freq.inverse(),
        DomainTag::Frequency => Ok(freq),
    }
}

/// Frequency-side L^p-ish helper for tests: relative L² distance of two
/// same-domain fields.
pub fn relative_l2_distance<T: Real>(a: &SampledField<T>, b: &SampledField<T>) -> Result<f64> {
    a.check_same_spec(b)?;
    if a.domain() != b.domain() {
        return Err(Error::GridMismatch("domain tags differ".into()));
    }
    let diff: Vec<Complex<T>> = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| *x - *y)
        .collect();
    let num = lp_of_values(&diff, 1.0, 2.0)?.to_f64x();
    let den = lp_of_values(a.values(), 1.0, 2.0)?.to_f64x();
    Ok(if den == 0.0 { num } else { num / den })
}
