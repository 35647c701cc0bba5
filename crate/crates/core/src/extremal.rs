//! Extremal machinery for the boundedness threshold: the dichotomy
//! classifier, single-block ratios, critical shell weights, and the
//! block-diagonal F_M threshold experiment.
//!
//! Every norm here collapses through the single-block structure of the
//! f_{k,λ} family: the two modulation norms of the weighted sum reduce to
//! ℓ^q sums over shells of per-block scalars (weights, brackets, measured
//! gains, lattice counts), so no global grid is ever built.

use crate::error::{Error, Result};
use crate::lattice::{annulus_count, rho, select_representatives, BlockIndex, ResonantShell};
use crate::patch::BlockPatch;
use crate::scalar::Real;
use crate::symbol::{block_gain, laplace_iterated_symbol, sigma};
use rayon::prelude::*;

/// Exponent tuple of one boundedness question.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdParams {
    pub n: usize,
    pub iterations: u32,
    pub p1: f64,
    pub p2: f64,
    pub q1: f64,
    pub q2: f64,
    pub s1: f64,
    pub s2: f64,
}

impl ThresholdParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: usize,
        iterations: u32,
        p1: f64,
        p2: f64,
        q1: f64,
        q2: f64,
        s1: f64,
        s2: f64,
    ) -> Result<Self> {
        for (name, v) in [("p1", p1), ("p2", p2), ("q1", q1), ("q2", q2)] {
            if v < 1.0 {
                return Err(Error::Domain(format!("{name} must be >= 1, got {v}")));
            }
        }
        if n < 2 {
            return Err(Error::Domain(format!("need n >= 2, got {n}")));
        }
        Ok(ThresholdParams {
            n,
            iterations,
            p1,
            p2,
            q1,
            q2,
            s1,
            s2,
        })
    }

    pub fn sigma(&self) -> f64 {
        sigma(self.n, self.iterations)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Bounded,
    Unbounded,
}

/// The boundedness dichotomy: p₁ ≤ p₂ always, then s₁ ≥ s₂ + σ when
/// q₁ ≤ q₂, and the strict inequality s₁ + n/q₁ > s₂ + σ + n/q₂ when
/// q₁ > q₂ (equality on that line is unbounded).
pub fn classify(params: &ThresholdParams) -> Verdict {
    if params.p1 > params.p2 {
        return Verdict::Unbounded;
    }
    let s = params.sigma();
    let n = params.n as f64;
    let ok = if params.q1 <= params.q2 {
        params.s1 >= params.s2 + s
    } else {
        let inv = |q: f64| if q.is_infinite() { 0.0 } else { n / q };
        params.s1 + inv(params.q1) > params.s2 + s + inv(params.q2)
    };
    if ok {
        Verdict::Bounded
    } else {
        Verdict::Unbounded
    }
}

/// Ratio of the two modulation norms for a single block function f_{k,λ},
/// λ ∈ (0, ρ]: both norms collapse to one block, so
/// ratio = ⟨k⟩^{s₂−s₁} λ^{n(1/p₁−1/p₂)} ‖H_m‖_{p₂}/‖H_b‖_{p₁}
/// with H the baseband patch functions.
pub fn single_block_ratio<T: Real>(
    patch: &BlockPatch<T>,
    params: &ThresholdParams,
    k: &BlockIndex,
    lambda: f64,
) -> Result<f64> {
    if !(lambda > 0.0 && lambda <= rho()) {
        return Err(Error::Domain(format!(
            "single-block ratio needs lambda in (0, {:.6}], got {lambda}",
            rho()
        )));
    }
    let m = laplace_iterated_symbol(params.n, params.iterations)?;
    let num = patch.modulated_norm(&m, k, lambda, params.p2)?;
    let den = patch.bump_norm(params.p1)?;
    let n = params.n as f64;
    Ok(k.bracket().powf(params.s2 - params.s1)
        * lambda.powf(n * (1.0 / params.p1 - 1.0 / params.p2))
        * num
        / den)
}

/// Critical shell weights a_j = ⟨k_j⟩^{(s₁q₁−(s₂+σ)q₂)/(q₂−q₁)}.
///
/// The denominator is q₂ − q₁: this is the unique sign for which both
/// series of the threshold experiment collapse to a common exponent
/// ([s₁−(s₂+σ)]q₁q₂/(q₂−q₁), equal to −n exactly on the critical line).
pub fn critical_weight_exponent(params: &ThresholdParams) -> Result<f64> {
    if params.q1.is_infinite() || params.q2.is_infinite() {
        return Err(Error::Config(
            "critical weights need finite q1, q2".into(),
        ));
    }
    if (params.q1 - params.q2).abs() < 1e-12 {
        return Err(Error::Config(
            "critical weights are undefined for q1 = q2".into(),
        ));
    }
    let s = params.sigma();
    Ok((params.s1 * params.q1 - (params.s2 + s) * params.q2) / (params.q2 - params.q1))
}

/// Weights for an explicit list of shell representatives.
pub fn critical_weights(
    params: &ThresholdParams,
    shells: &[(u32, BlockIndex)],
) -> Result<Vec<f64>> {
    let w = critical_weight_exponent(params)?;
    Ok(shells.iter().map(|(_, k)| k.bracket().powf(w)).collect())
}

/// Everything the block-diagonal sums need from one resonant shell.
#[derive(Debug, Clone)]
pub struct ShellProfile {
    pub j: u32,
    pub k: BlockIndex,
    /// Exact number of lattice points in the resonant annulus.
    pub count: u64,
    pub bracket: f64,
    /// Measured gain at the representative, in L^{p₂}.
    pub gain: f64,
    /// Shell weight a_j.
    pub weight: f64,
    /// Upper end of the shell's radial interval (its cutoff radius).
    pub r_hi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    /// Critical weights a_j = ⟨k_j⟩^w; requires finite q₁ ≠ q₂.
    Critical,
    /// a_j ≡ 1 (control runs, any exponents).
    Unit,
}

/// Shell profiles for all resonant shells inside (start_radius, max_radius].
pub fn shell_profiles<T: Real>(
    patch: &BlockPatch<T>,
    params: &ThresholdParams,
    start_radius: f64,
    max_radius: f64,
    mode: WeightMode,
) -> Result<Vec<ShellProfile>> {
    let weight_exp = match mode {
        WeightMode::Critical => critical_weight_exponent(params)?,
        WeightMode::Unit => 0.0,
    };
    let lambda = rho();
    let mut js = Vec::new();
    let mut j = 1u32;
    loop {
        let shell = ResonantShell::new(params.n, j)?;
        let (lo, hi) = shell.interval;
        if hi > max_radius {
            break;
        }
        if lo > start_radius {
            js.push(j);
        }
        j += 1;
        if j > 10_000_000 {
            return Err(Error::Budget("shell index exploded".into()));
        }
    }
    let reps: Vec<(u32, BlockIndex)> = js
        .par_iter()
        .map(|&j| {
            select_representatives(params.n, j..=j).map(|mut v| v.remove(0))
        })
        .collect::<Result<_>>()?;
    reps.par_iter()
        .map(|(j, k)| {
            let shell = ResonantShell::new(params.n, *j)?;
            let count = annulus_count(&shell.annulus());
            if count == 0 {
                return Err(Error::EmptyShell(*j));
            }
            let gain = block_gain(patch, params.n, params.iterations, k, params.p2, lambda)?;
            let bracket = k.bracket();
            Ok(ShellProfile {
                j: *j,
                k: k.clone(),
                count,
                bracket,
                gain,
                weight: bracket.powf(weight_exp),
                r_hi: shell.interval.1,
            })
        })
        .collect()
}

/// One point of the threshold curve.
#[derive(Debug, Clone, Copy)]
pub struct ThresholdPoint {
    pub cutoff: f64,
    pub ratio: f64,
}

/// Block-diagonal evaluation of
/// R(M) = ‖Δ(A₁)^N F_M‖_{M^{s₂}_{p₂,q₂}} / ‖F_M‖_{M^{s₁}_{p₁,q₁}}
/// for F_M the weighted sum of f_{k,ρ} over all resonant-shell lattice
/// points with start < |k| and shell radius ≤ M.
///
/// Each shell contributes its exact lattice count times the per-block
/// scalar measured at the shell representative.
pub fn threshold_curve<T: Real>(
    patch: &BlockPatch<T>,
    params: &ThresholdParams,
    shells: &[ShellProfile],
    cutoffs: &[f64],
) -> Result<Vec<ThresholdPoint>> {
    let lambda = rho();
    let n = params.n as f64;
    let fp1 = lambda.powf(n * (1.0 - 1.0 / params.p1)) * patch.bump_norm(params.p1)?;
    let fp2 = lambda.powf(n * (1.0 - 1.0 / params.p2)) * patch.bump_norm(params.p2)?;
    let mut out = Vec::with_capacity(cutoffs.len());
    for &m in cutoffs {
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for sh in shells.iter().filter(|sh| sh.r_hi <= m) {
            let c = sh.count as f64;
            let num_term = sh.weight * sh.bracket.powf(params.s2) * sh.gain * fp2;
            let den_term = sh.weight * sh.bracket.powf(params.s1) * fp1;
            num += c * num_term.powf(params.q2);
            den += c * den_term.powf(params.q1);
        }
        if den == 0.0 {
            return Err(Error::Config(format!(
                "no shells below cutoff {m}; lower the start radius"
            )));
        }
        out.push(ThresholdPoint {
            cutoff: m,
            ratio: num.powf(1.0 / params.q2) / den.powf(1.0 / params.q1),
        });
    }
    Ok(out)
}

/// Critical-weight threshold experiment on the q₁ > q₂ branch.
pub fn threshold_experiment<T: Real>(
    patch: &BlockPatch<T>,
    params: &ThresholdParams,
    start_radius: f64,
    cutoffs: &[f64],
) -> Result<(Vec<ShellProfile>, Vec<ThresholdPoint>)> {
    if !(params.q1 > params.q2) {
        return Err(Error::Config(format!(
            "the F_M construction needs q1 > q2, got q1 = {}, q2 = {}",
            params.q1, params.q2
        )));
    }
    let max = cutoffs.iter().fold(0.0f64, |a, &b| a.max(b));
    let shells = shell_profiles(patch, params, start_radius, max, WeightMode::Critical)?;
    let curve = threshold_curve(patch, params, &shells, cutoffs)?;
    Ok((shells, curve))
}

/// Unit-weight control through the same pipeline (works for any q's).
pub fn threshold_control_unit_weights<T: Real>(
    patch: &BlockPatch<T>,
    params: &ThresholdParams,
    start_radius: f64,
    cutoffs: &[f64],
) -> Result<(Vec<ShellProfile>, Vec<ThresholdPoint>)> {
    let max = cutoffs.iter().fold(0.0f64, |a, &b| a.max(b));
    let shells = shell_profiles(patch, params, start_radius, max, WeightMode::Unit)?;
    let curve = threshold_curve(patch, params, &shells, cutoffs)?;
    Ok((shells, curve))
}
