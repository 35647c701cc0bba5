//! Local-patch evaluation of single-block quantities.
//!
//! A block function f_{k,λ} has frequency data b((ξ−k)/λ); substituting
//! ξ = k + λu turns every norm of interest into a norm of a *baseband*
//! function H with Ĥ(u) = m(k + λu)·b(u) on the fixed band |u| < 1/2:
//!
//!   ‖m(D) f_{k,λ}‖_p = λ^{n(1−1/p)} ‖H‖_p,
//!
//! so gains and block ratios never need a grid that covers |ξ| ≈ |k|.
//! The patch grid below only has to resolve the unit-scale bump.

use crate::error::{Error, Result};
use crate::grid::{DomainTag, GridSpec, SampledField};
use crate::lattice::BlockIndex;
use crate::scalar::Real;
use crate::symbol::Symbol;
use num_complex::Complex;
use std::collections::HashMap;
use std::sync::Mutex;

/// Patch grid sized for baseband work in the given dimension.
///
/// Space extent is chosen so the bump transform decays below ~1e−9 at the
/// boundary; frequency spacing resolves the bump transition band.
pub fn default_patch_spec(dim: usize) -> Result<GridSpec> {
    match dim {
        1 => GridSpec::new(1, 256.0, 2048),
        2 => GridSpec::new(2, 96.0, 512),
        3 => GridSpec::new(3, 48.0, 128),
        4 => GridSpec::new(4, 24.0, 64),
        other => Err(Error::Config(format!(
            "no default patch for dimension {other}"
        ))),
    }
}

/// Reusable baseband patch: cached bump samples and bump norms.
pub struct BlockPatch<T: Real> {
    spec: GridSpec,
    bump: SampledField<T>,
    bump_norms: Mutex<HashMap<u64, f64>>,
}

impl<T: Real> BlockPatch<T> {
    pub fn new(spec: GridSpec) -> Result<Self> {
        spec.ensure_covers(0.5)?;
        let mut bump = SampledField::<T>::zeros(spec.clone(), DomainTag::Frequency);
        bump.for_each_freq_mut(|u, v| {
            let r: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            let b = crate::grid::base_bump_radial(r);
            *v = Complex::new(T::from_f64x(b), T::zero());
        })?;
        Ok(BlockPatch {
            spec,
            bump,
            bump_norms: Mutex::new(HashMap::new()),
        })
    }

    pub fn for_dim(dim: usize) -> Result<Self> {
        Self::new(default_patch_spec(dim)?)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    fn norm_of(&self, field: SampledField<T>, p: f64) -> Result<f64> {
        if (p - 2.0).abs() < 1e-15 {
            Ok(field.l2_norm_via_parseval()?.to_f64x())
        } else {
            Ok(field.inverse()?.lp_norm(p)?.to_f64x())
        }
    }

    /// ‖H_b‖_p for the plain bump (cached per p).
    pub fn bump_norm(&self, p: f64) -> Result<f64> {
        let key = p.to_bits();
        if let Some(&v) = self.bump_norms.lock().unwrap().get(&key) {
            return Ok(v);
        }
        let v = self.norm_of(self.bump.clone(), p)?;
        self.bump_norms.lock().unwrap().insert(key, v);
        Ok(v)
    }

    /// ‖H_m‖_p with Ĥ_m(u) = m(k + λu)·b(u).
    pub fn modulated_norm(
        &self,
        symbol: &Symbol,
        k: &BlockIndex,
        lambda: f64,
        p: f64,
    ) -> Result<f64> {
        if k.dim() != self.spec.dim() {
            return Err(Error::GridMismatch(format!(
                "block dim {} vs patch dim {}",
                k.dim(),
                self.spec.dim()
            )));
        }
        if !(lambda > 0.0 && lambda <= 0.5) {
            return Err(Error::Domain(format!(
                "bump width must lie in (0, 1/2], got {lambda}"
            )));
        }
        let kf: Vec<f64> = k.coords().iter().map(|&c| c as f64).collect();
        let mut field = self.bump.clone();
        let mut xi = vec![0.0f64; kf.len()];
        field.for_each_freq_mut(|u, v| {
            if v.re.is_zero() && v.im.is_zero() {
                return;
            }
            for ((x, &c), &ui) in xi.iter_mut().zip(&kf).zip(u) {
                *x = c + lambda * ui;
            }
            let m = symbol.eval(&xi);
            *v *= Complex::new(T::from_f64x(m.re), T::from_f64x(m.im));
        })?;
        self.norm_of(field, p)
    }

    /// ‖f_{k,λ}‖_p on the continuum, via the analytic λ-scaling.
    pub fn block_function_norm(&self, dim: usize, lambda: f64, p: f64) -> Result<f64> {
        Ok(lambda.powf(dim as f64 * (1.0 - 1.0 / p)) * self.bump_norm(p)?)
    }
}
