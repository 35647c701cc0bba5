//! Periodized sampling grid standing in for ℝⁿ: forward/inverse Fourier
//! transforms under the convention f̂(ξ) = ∫ f(x) e^{−ix·ξ} dx (inverse
//! carries (2π)^{−n}), L^p quadrature norms, smooth bump profiles, and the
//! single-block test functions f_{k,λ}.

use crate::error::{Error, Result};
use crate::lattice::BlockIndex;
use crate::scalar::Real;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rustfft::{Fft, FftDirection, FftPlanner};
use std::io::{Read, Write};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainTag {
    Space,
    Frequency,
}

/// Uniform periodized grid on the torus [−R, R)ⁿ with M points per axis.
///
/// Space spacing is 2R/M, frequency spacing is π/R, and the frequency range
/// per axis is [−Mπ/(2R), Mπ/(2R)).
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    dim: usize,
    half_period: f64,
    points_per_axis: usize,
}

impl GridSpec {
    pub fn new(dim: usize, half_period: f64, points_per_axis: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("grid dimension must be >= 1".into()));
        }
        if !(half_period > 0.0) || !half_period.is_finite() {
            return Err(Error::Config(format!(
                "half period must be positive, got {half_period}"
            )));
        }
        if points_per_axis < 16 || !points_per_axis.is_power_of_two() {
            return Err(Error::Config(format!(
                "points per axis must be a power of two >= 16, got {points_per_axis}"
            )));
        }
        let spec = GridSpec {
            dim,
            half_period,
            points_per_axis,
        };
        if spec.checked_len().is_none() {
            return Err(Error::Budget(format!(
                "grid of {points_per_axis}^{dim} points does not fit in memory"
            )));
        }
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_period(&self) -> f64 {
        self.half_period
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    fn checked_len(&self) -> Option<usize> {
        let mut total: usize = 1;
        for _ in 0..self.dim {
            total = total.checked_mul(self.points_per_axis)?;
        }
        // cap at ~2^31 points to keep fields addressable and sane
        (total <= 1 << 31).then_some(total)
    }

    /// Total number of grid points M^n.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.checked_len().expect("validated at construction")
    }

    /// Space-domain spacing 2R/M.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_period / self.points_per_axis as f64
    }

    /// Frequency spacing π/R.
    pub fn freq_spacing(&self) -> f64 {
        std::f64::consts::PI / self.half_period
    }

    /// Largest representable frequency magnitude per axis.
    pub fn nyquist(&self) -> f64 {
        self.freq_spacing() * (self.points_per_axis as f64) / 2.0
    }

    /// Fails unless the per-axis frequency range covers |ξ_i| ≤ max_freq.
    pub fn ensure_covers(&self, max_freq: f64) -> Result<()> {
        if max_freq >= self.nyquist() {
            return Err(Error::SupportOverflow(format!(
                "need |xi| <= {max_freq:.3} but Nyquist range is {:.3}",
                self.nyquist()
            )));
        }
        Ok(())
    }

    /// Signed integer bin of a storage index along one axis.
    #[inline]
    pub fn signed_bin(&self, i: usize) -> i64 {
        let m = self.points_per_axis;
        if i < m / 2 {
            i as i64
        } else {
            i as i64 - m as i64
        }
    }

    /// Space coordinate of a storage index along one axis.
    #[inline]
    pub fn x_coord(&self, i: usize) -> f64 {
        -self.half_period + self.spacing() * i as f64
    }

    /// Frequency coordinate of a storage index along one axis.
    #[inline]
    pub fn freq_coord(&self, i: usize) -> f64 {
        self.freq_spacing() * self.signed_bin(i) as f64
    }

    /// Walk every grid point, passing (flat index, per-axis storage indices).
    fn for_each_index(&self, mut f: impl FnMut(usize, &[usize])) {
        let m = self.points_per_axis;
        let mut idx = vec![0usize; self.dim];
        for flat in 0..self.len() {
            f(flat, &idx);
            for a in (0..self.dim).rev() {
                idx[a] += 1;
                if idx[a] < m {
                    break;
                }
                idx[a] = 0;
            }
        }
    }
}

/// Complex-valued samples on a [`GridSpec`], tagged space- or
/// frequency-domain. Values are immutable after construction except through
/// the explicit `map`/`fill` constructors.
#[derive(Debug, Clone)]
pub struct SampledField<T: Real> {
    spec: GridSpec,
    domain: DomainTag,
    values: Vec<Complex<T>>,
}

impl<T: Real> SampledField<T> {
    pub fn zeros(spec: GridSpec, domain: DomainTag) -> Self {
        let n = spec.len();
        SampledField {
            spec,
            domain,
            values: vec![Complex::new(T::zero(), T::zero()); n],
        }
    }

    /// Sample a space-domain function on the grid.
    pub fn from_space_fn(spec: GridSpec, f: impl Fn(&[f64]) -> Complex<f64>) -> Self {
        let mut field = Self::zeros(spec, DomainTag::Space);
        let spec = field.spec.clone();
        let mut coords = vec![0.0f64; spec.dim()];
        spec.for_each_index(|flat, idx| {
            for (c, &i) in coords.iter_mut().zip(idx) {
                *c = spec.x_coord(i);
            }
            let v = f(&coords);
            field.values[flat] = Complex::new(T::from_f64x(v.re), T::from_f64x(v.im));
        });
        field
    }

    /// Sample a frequency-domain function at the lattice frequencies.
    pub fn from_freq_fn(spec: GridSpec, f: impl Fn(&[f64]) -> Complex<f64>) -> Self {
        let mut field = Self::zeros(spec, DomainTag::Frequency);
        let spec = field.spec.clone();
        let mut coords = vec![0.0f64; spec.dim()];
        spec.for_each_index(|flat, idx| {
            for (c, &i) in coords.iter_mut().zip(idx) {
                *c = spec.freq_coord(i);
            }
            let v = f(&coords);
            field.values[flat] = Complex::new(T::from_f64x(v.re), T::from_f64x(v.im));
        });
        field
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn domain(&self) -> DomainTag {
        self.domain
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.values
    }

    pub fn check_same_spec(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.spec, other.spec
            )));
        }
        Ok(())
    }

    /// Visit every frequency sample mutably with its frequency coordinates.
    pub fn for_each_freq_mut(&mut self, mut f: impl FnMut(&[f64], &mut Complex<T>)) -> Result<()> {
        if self.domain != DomainTag::Frequency {
            return Err(Error::GridMismatch(
                "frequency-domain field required".into(),
            ));
        }
        let spec = self.spec.clone();
        let mut coords = vec![0.0f64; spec.dim()];
        let values = &mut self.values;
        spec.for_each_index(|flat, idx| {
            for (c, &i) in coords.iter_mut().zip(idx) {
                *c = spec.freq_coord(i);
            }
            f(&coords, &mut values[flat]);
        });
        Ok(())
    }

    /// Visit every space sample mutably with its coordinates.
    pub fn for_each_space_mut(&mut self, mut f: impl FnMut(&[f64], &mut Complex<T>)) -> Result<()> {
        if self.domain != DomainTag::Space {
            return Err(Error::GridMismatch("space-domain field required".into()));
        }
        let spec = self.spec.clone();
        let mut coords = vec![0.0f64; spec.dim()];
        let values = &mut self.values;
        spec.for_each_index(|flat, idx| {
            for (c, &i) in coords.iter_mut().zip(idx) {
                *c = spec.x_coord(i);
            }
            f(&coords, &mut values[flat]);
        });
        Ok(())
    }

    /// Visit every space sample with its coordinates.
    pub fn for_each_space(&self, mut f: impl FnMut(&[f64], Complex<T>)) -> Result<()> {
        if self.domain != DomainTag::Space {
            return Err(Error::GridMismatch("space-domain field required".into()));
        }
        let spec = self.spec.clone();
        let mut coords = vec![0.0f64; spec.dim()];
        let values = &self.values;
        spec.for_each_index(|flat, idx| {
            for (c, &i) in coords.iter_mut().zip(idx) {
                *c = spec.x_coord(i);
            }
            f(&coords, values[flat]);
        });
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_spec(other)?;
        if self.domain != other.domain {
            return Err(Error::GridMismatch("domain tags differ".into()));
        }
        let mut out = self.clone();
        for (o, v) in out.values.iter_mut().zip(&other.values) {
            *o += *v;
        }
        Ok(out)
    }

    pub fn scale(&self, factor: Complex<f64>) -> Self {
        let f = Complex::new(T::from_f64x(factor.re), T::from_f64x(factor.im));
        let mut out = self.clone();
        for v in out.values.iter_mut() {
            *v *= f;
        }
        out
    }

    fn axis_fft(&mut self, direction: FftDirection) {
        let m = self.spec.points_per_axis;
        let n = self.spec.dim;
        let total = self.values.len();
        let mut planner = FftPlanner::<T>::new();
        let plan: Arc<dyn Fft<T>> = planner.plan_fft(m, direction);
        let mut line = vec![Complex::new(T::zero(), T::zero()); m];
        for axis in 0..n {
            // stride between consecutive entries of a line along `axis`
            let stride = m.pow((n - 1 - axis) as u32);
            let lines = total / m;
            for li in 0..lines {
                // decompose the line id into (block before axis, offset after)
                let block = li / stride;
                let offset = li % stride;
                let base = block * stride * m + offset;
                for (j, slot) in line.iter_mut().enumerate() {
                    *slot = self.values[base + j * stride];
                }
                plan.process(&mut line);
                for (j, slot) in line.iter().enumerate() {
                    self.values[base + j * stride] = *slot;
                }
            }
        }
    }

    /// Riemann-sum approximation of f̂(ξ) = ∫ f(x) e^{−ix·ξ} dx.
    pub fn forward(&self) -> Result<Self> {
        if self.domain != DomainTag::Space {
            return Err(Error::GridMismatch(
                "forward transform needs a space-domain field".into(),
            ));
        }
        let mut out = self.clone();
        out.axis_fft(FftDirection::Forward);
        let weight = self.spec.spacing().powi(self.spec.dim as i32);
        let w = T::from_f64x(weight);
        let spec = out.spec.clone();
        let values = &mut out.values;
        spec.for_each_index(|flat, idx| {
            let parity: i64 = idx.iter().map(|&i| spec.signed_bin(i)).sum();
            let v = &mut values[flat];
            *v = *v * w;
            if parity.rem_euclid(2) == 1 {
                *v = -*v;
            }
        });
        out.domain = DomainTag::Frequency;
        Ok(out)
    }

    /// Inverse transform f(x) = (2π)^{−n} ∫ f̂(ξ) e^{ix·ξ} dξ.
    pub fn inverse(&self) -> Result<Self> {
        if self.domain != DomainTag::Frequency {
            return Err(Error::GridMismatch(
                "inverse transform needs a frequency-domain field".into(),
            ));
        }
        let mut out = self.clone();
        let spec = out.spec.clone();
        {
            let values = &mut out.values;
            spec.for_each_index(|flat, idx| {
                let parity: i64 = idx.iter().map(|&i| spec.signed_bin(i)).sum();
                if parity.rem_euclid(2) == 1 {
                    values[flat] = -values[flat];
                }
            });
        }
        out.axis_fft(FftDirection::Inverse);
        let n_total = self.spec.len() as f64;
        let weight = 1.0 / (self.spec.spacing().powi(self.spec.dim as i32) * n_total);
        let w = T::from_f64x(weight);
        for v in out.values.iter_mut() {
            *v = *v * w;
        }
        out.domain = DomainTag::Space;
        Ok(out)
    }

    /// The field in frequency representation (transforming if needed).
    pub fn into_frequency(self) -> Result<Self> {
        match self.domain {
            DomainTag::Frequency => Ok(self),
            DomainTag::Space => self.forward(),
        }
    }

    /// The field in space representation (transforming if needed).
    pub fn into_space(self) -> Result<Self> {
        match self.domain {
            DomainTag::Space => Ok(self),
            DomainTag::Frequency => self.inverse(),
        }
    }

    /// Discrete L^p quadrature norm ((2R/M)^n Σ |f|^p)^{1/p}; max |f| for
    /// p = ∞. The field must be space-domain.
    pub fn lp_norm(&self, p: f64) -> Result<T> {
        if self.domain != DomainTag::Space {
            return Err(Error::GridMismatch(
                "lp_norm is a space-domain quadrature".into(),
            ));
        }
        lp_of_values(&self.values, self.spec.spacing().powi(self.spec.dim as i32), p)
    }

    /// Frequency-side L² norm with the (2π)^{−n/2} Plancherel weight; equals
    /// the space-side `lp_norm(2.0)` exactly for transformed pairs.
    pub fn l2_norm_via_parseval(&self) -> Result<T> {
        if self.domain != DomainTag::Frequency {
            return Err(Error::GridMismatch(
                "parseval norm needs a frequency-domain field".into(),
            ));
        }
        let cell = self.spec.freq_spacing().powi(self.spec.dim as i32);
        let sum: f64 = self
            .values
            .iter()
            .map(|v| {
                let re = v.re.to_f64x();
                let im = v.im.to_f64x();
                re * re + im * im
            })
            .sum();
        let two_pi_n = (2.0 * std::f64::consts::PI).powi(self.spec.dim as i32);
        Ok(T::from_f64x((sum * cell / two_pi_n).sqrt()))
    }
}

/// Shared quadrature kernel for L^p norms of complex sample buffers.
pub(crate) fn lp_of_values<T: Real>(values: &[Complex<T>], cell: f64, p: f64) -> Result<T> {
    if p < 1.0 {
        return Err(Error::Domain(format!("L^p norm needs p >= 1, got {p}")));
    }
    if p.is_infinite() {
        let mut m = 0.0f64;
        for v in values {
            let a = v.norm_sqr().to_f64x();
            if a > m {
                m = a;
            }
        }
        return Ok(T::from_f64x(m.sqrt()));
    }
    let mut sum = 0.0f64;
    if (p - 2.0).abs() < 1e-15 {
        for v in values {
            sum += v.norm_sqr().to_f64x();
        }
    } else if (p - 1.0).abs() < 1e-15 {
        for v in values {
            sum += v.norm_sqr().to_f64x().sqrt();
        }
    } else {
        for v in values {
            sum += v.norm_sqr().to_f64x().powf(p / 2.0);
        }
    }
    Ok(T::from_f64x((sum * cell).powf(1.0 / p)))
}

/// Infinitely smooth step built from the standard exponential cutoff:
/// 0 for t ≤ −ε, 1 for t ≥ ε, strictly increasing in between.
#[derive(Debug, Clone, Copy)]
pub struct BumpProfile {
    transition_width: f64,
}

fn smooth01(u: f64) -> f64 {
    // e^{-1/u} / (e^{-1/u} + e^{-1/(1-u)}) on (0,1)
    if u <= 0.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / u).exp();
    let b = (-1.0 / (1.0 - u)).exp();
    a / (a + b)
}

impl BumpProfile {
    pub fn new(transition_width: f64) -> Result<Self> {
        if !(transition_width > 0.0 && transition_width < 0.5) {
            return Err(Error::Config(format!(
                "transition width must lie in (0, 1/2), got {transition_width}"
            )));
        }
        Ok(BumpProfile { transition_width })
    }

    pub fn transition_width(&self) -> f64 {
        self.transition_width
    }

    pub fn step(&self, t: f64) -> f64 {
        smooth01((t + self.transition_width) / (2.0 * self.transition_width))
    }
}

/// Fixed smooth radial bump: ≡ 1 on |ξ| ≤ 1/4, supported in |ξ| < 1/2.
pub fn base_bump_radial(rho: f64) -> f64 {
    static PROFILE_EPS: f64 = 0.125;
    if rho <= 0.25 {
        return 1.0;
    }
    if rho >= 0.5 {
        return 0.0;
    }
    let profile = BumpProfile {
        transition_width: PROFILE_EPS,
    };
    1.0 - profile.step(rho - 0.375)
}

/// Single-block test function f_{k,λ}: frequency data base_bump((ξ−k)/λ),
/// returned as a frequency-domain field (so the compact support is exact).
///
/// λ ∈ (0, 1/2]; the support ball must fit inside the grid's Nyquist range.
pub fn synth_block_bump<T: Real>(
    spec: &GridSpec,
    center: &BlockIndex,
    lambda: f64,
) -> Result<SampledField<T>> {
    if center.dim() != spec.dim() {
        return Err(Error::GridMismatch(format!(
            "block index dim {} vs grid dim {}",
            center.dim(),
            spec.dim()
        )));
    }
    if !(lambda > 0.0 && lambda <= 0.5) {
        return Err(Error::Domain(format!(
            "bump width must lie in (0, 1/2], got {lambda}"
        )));
    }
    let max_extent = center.euclid_norm() + 0.5 * lambda;
    spec.ensure_covers(max_extent)?;
    let k: Vec<f64> = center.coords().iter().map(|&c| c as f64).collect();
    let mut field = SampledField::<T>::zeros(spec.clone(), DomainTag::Frequency);
    field.for_each_freq_mut(|xi, v| {
        let mut rho2 = 0.0;
        for (x, c) in xi.iter().zip(&k) {
            rho2 += (x - c) * (x - c);
        }
        let b = base_bump_radial(rho2.sqrt() / lambda);
        *v = Complex::new(T::from_f64x(b), T::zero());
    })?;
    Ok(field)
}

/// Deterministic random field, band-limited to |ξ|_∞ ≤ cutoff, returned in
/// the frequency domain. Same seed, same field.
pub fn random_band_limited<T: Real>(
    spec: &GridSpec,
    cutoff: f64,
    seed: u64,
) -> Result<SampledField<T>> {
    spec.ensure_covers(cutoff)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut field = SampledField::<T>::zeros(spec.clone(), DomainTag::Frequency);
    field.for_each_freq_mut(|xi, v| {
        if xi.iter().all(|x| x.abs() <= cutoff) {
            let re: f64 = rng.gen_range(-1.0..1.0);
            let im: f64 = rng.gen_range(-1.0..1.0);
            *v = Complex::new(T::from_f64x(re), T::from_f64x(im));
        }
    })?;
    Ok(field)
}

const DUMP_MAGIC: &[u8; 8] = b"MSPHFLD1";

impl<T: Real> SampledField<T> {
    /// Binary dump: 64-byte header (magic, element kind, n, M, domain, R)
    /// followed by little-endian (re, im) pairs.
    pub fn write_binary(&self, w: &mut impl Write) -> Result<()> {
        let mut header = [0u8; 64];
        header[..8].copy_from_slice(DUMP_MAGIC);
        let elem = std::mem::size_of::<T>() as u32;
        header[8..12].copy_from_slice(&elem.to_le_bytes());
        header[12..16].copy_from_slice(&(self.spec.dim as u32).to_le_bytes());
        header[16..20].copy_from_slice(&(self.spec.points_per_axis as u32).to_le_bytes());
        let dom: u32 = match self.domain {
            DomainTag::Space => 0,
            DomainTag::Frequency => 1,
        };
        header[20..24].copy_from_slice(&dom.to_le_bytes());
        header[24..32].copy_from_slice(&self.spec.half_period.to_le_bytes());
        w.write_all(&header)?;
        let mut buf = Vec::with_capacity(self.values.len() * 2 * elem as usize);
        for v in &self.values {
            if elem == 4 {
                buf.extend_from_slice(&(v.re.to_f64x() as f32).to_le_bytes());
                buf.extend_from_slice(&(v.im.to_f64x() as f32).to_le_bytes());
            } else {
                buf.extend_from_slice(&v.re.to_f64x().to_le_bytes());
                buf.extend_from_slice(&v.im.to_f64x().to_le_bytes());
            }
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_binary(r: &mut impl Read) -> Result<Self> {
        let mut header = [0u8; 64];
        r.read_exact(&mut header)?;
        if &header[..8] != DUMP_MAGIC {
            return Err(Error::Config("bad field dump magic".into()));
        }
        let elem = u32::from_le_bytes(header[8..12].try_into().unwrap());
        if elem as usize != std::mem::size_of::<T>() {
            return Err(Error::Config(format!(
                "element width {elem} does not match the requested scalar type"
            )));
        }
        let dim = u32::from_le_bytes(header[12..16].try_into().unwrap()) as usize;
        let m = u32::from_le_bytes(header[16..20].try_into().unwrap()) as usize;
        let dom = u32::from_le_bytes(header[20..24].try_into().unwrap());
        let half_period = f64::from_le_bytes(header[24..32].try_into().unwrap());
        let spec = GridSpec::new(dim, half_period, m)?;
        let domain = match dom {
            0 => DomainTag::Space,
            1 => DomainTag::Frequency,
            other => return Err(Error::Config(format!("bad domain tag {other}"))),
        };
        let mut field = SampledField::<T>::zeros(spec, domain);
        let total = field.values.len() * 2 * elem as usize;
        let mut buf = vec![0u8; total];
        r.read_exact(&mut buf)?;
        let w = elem as usize;
        for (i, v) in field.values.iter_mut().enumerate() {
            let off = i * 2 * w;
            let (re, im) = if w == 4 {
                (
                    f64::from(f32::from_le_bytes(buf[off..off + 4].try_into().unwrap())),
                    f64::from(f32::from_le_bytes(
                        buf[off + 4..off + 8].try_into().unwrap(),
                    )),
                )
            } else {
                (
                    f64::from_le_bytes(buf[off..off + 8].try_into().unwrap()),
                    f64::from_le_bytes(buf[off + 8..off + 16].try_into().unwrap()),
                )
            };
            *v = Complex::new(T::from_f64x(re), T::from_f64x(im));
        }
        Ok(field)
    }
}
