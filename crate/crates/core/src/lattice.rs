//! Lattice geometry: integer block indices, annuli Λ₀,ⱼ / Λ₁,ⱼ, the
//! resonant shells where the Bessel main-term phase is bounded away from
//! zero, representative selection, and exact lattice-point counting.

use crate::error::{Error, Result};
use rayon::prelude::*;

/// Phase floor ε₀ = sin(0.07) of the resonant shells.
pub fn epsilon0() -> f64 {
    0.07f64.sin()
}

/// Bump radius ρ = ε₀/4 used by the extremal construction.
pub fn rho() -> f64 {
    epsilon0() / 4.0
}

/// Integer lattice point k ∈ ℤⁿ indexing one frequency-uniform block.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockIndex(Vec<i64>);

impl BlockIndex {
    pub fn new(coords: Vec<i64>) -> Self {
        assert!(!coords.is_empty(), "block index needs at least one axis");
        BlockIndex(coords)
    }

    pub fn zero(dim: usize) -> Self {
        BlockIndex(vec![0; dim])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm_sqr(&self) -> i64 {
        self.0.iter().map(|&c| c * c).sum()
    }

    pub fn euclid_norm(&self) -> f64 {
        (self.norm_sqr() as f64).sqrt()
    }

    /// Japanese bracket ⟨k⟩ = √(1 + |k|²).
    pub fn bracket(&self) -> f64 {
        (1.0 + self.norm_sqr() as f64).sqrt()
    }

    /// ℓ∞ distance to another index.
    pub fn linf_distance(&self, other: &Self) -> i64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or(0)
    }
}

/// Closed annulus r_lo ≤ |k| ≤ r_hi in dimension n (boundary inclusive).
#[derive(Debug, Clone, PartialEq)]
pub struct Annulus {
    dim: usize,
    r_lo: f64,
    r_hi: f64,
}

impl Annulus {
    pub fn new(dim: usize, r_lo: f64, r_hi: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("annulus dimension must be >= 1".into()));
        }
        if !(r_lo >= 0.0) || !(r_hi >= 0.0) || r_lo > r_hi {
            return Err(Error::Domain(format!(
                "annulus needs 0 <= r_lo <= r_hi, got [{r_lo}, {r_hi}]"
            )));
        }
        Ok(Annulus { dim, r_lo, r_hi })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radii(&self) -> (f64, f64) {
        (self.r_lo, self.r_hi)
    }

    pub fn contains(&self, k: &BlockIndex) -> bool {
        let s = k.norm_sqr() as f64;
        s >= self.r_lo * self.r_lo && s <= self.r_hi * self.r_hi
    }
}

/// floor(√v) for v ≥ 0 given as f64, exact for integer-valued comparisons
/// below 2^53 (all radii used here are far below that).
fn floor_sqrt(v: f64) -> i64 {
    if v < 0.0 {
        return -1;
    }
    let mut y = v.sqrt().floor() as i64;
    while (y + 1) as f64 * (y + 1) as f64 <= v {
        y += 1;
    }
    while y > 0 && (y as f64) * (y as f64) > v {
        y -= 1;
    }
    y
}

/// Number of integers y with lo2 ≤ y² ≤ hi2 (lo2 may be negative).
fn count_line(lo2: f64, hi2: f64) -> u64 {
    if hi2 < 0.0 {
        return 0;
    }
    let y_max = floor_sqrt(hi2);
    if lo2 <= 0.0 {
        return (2 * y_max + 1) as u64;
    }
    // smallest y ≥ 0 with y² ≥ lo2
    let f = floor_sqrt(lo2);
    let y_min = if (f as f64) * (f as f64) >= lo2 { f } else { f + 1 };
    if y_min > y_max {
        return 0;
    }
    // symmetric intervals ±[y_min, y_max]; y = 0 is impossible here (lo2 > 0)
    2 * (y_max - y_min + 1) as u64
}

fn count_rec(dim_left: usize, lo2: f64, hi2: f64) -> u64 {
    if hi2 < 0.0 {
        return 0;
    }
    if dim_left == 1 {
        return count_line(lo2, hi2);
    }
    let x_max = floor_sqrt(hi2);
    let mut total = count_rec(dim_left - 1, lo2, hi2);
    for x in 1..=x_max {
        let x2 = (x * x) as f64;
        total += 2 * count_rec(dim_left - 1, lo2 - x2, hi2 - x2);
    }
    total
}

/// Exact |{k ∈ ℤⁿ : |k| ∈ [r_lo, r_hi]}| without enumeration.
pub fn annulus_count(a: &Annulus) -> u64 {
    count_rec(a.dim, a.r_lo * a.r_lo, a.r_hi * a.r_hi)
}

fn enumerate_rec(
    dim_left: usize,
    lo2: f64,
    hi2: f64,
    prefix: &mut Vec<i64>,
    out: &mut Vec<BlockIndex>,
) {
    if hi2 < 0.0 {
        return;
    }
    if dim_left == 1 {
        let y_max = floor_sqrt(hi2);
        for y in -y_max..=y_max {
            let y2 = (y * y) as f64;
            if y2 >= lo2 {
                prefix.push(y);
                out.push(BlockIndex::new(prefix.clone()));
                prefix.pop();
            }
        }
        return;
    }
    let x_max = floor_sqrt(hi2);
    for x in -x_max..=x_max {
        let x2 = (x * x) as f64;
        prefix.push(x);
        enumerate_rec(dim_left - 1, lo2 - x2, hi2 - x2, prefix, out);
        prefix.pop();
    }
}

/// All lattice points of the annulus in lexicographic order.
///
/// `cap` bounds the number of returned points (default 20 million); an
/// annulus whose exact count exceeds it is rejected before enumeration.
pub fn annulus_points(a: &Annulus, cap: Option<usize>) -> Result<Vec<BlockIndex>> {
    let cap = cap.unwrap_or(20_000_000);
    let count = annulus_count(a);
    if count > cap as u64 {
        return Err(Error::Budget(format!(
            "annulus holds {count} lattice points, cap is {cap}"
        )));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut prefix = Vec::with_capacity(a.dim);
    enumerate_rec(
        a.dim,
        a.r_lo * a.r_lo,
        a.r_hi * a.r_hi,
        &mut prefix,
        &mut out,
    );
    Ok(out)
}

/// Phase factor u(r) = sin(r − nπ/4 + 3π/4) whose magnitude the resonant
/// shells keep above ε₀.
pub fn phase(n: usize, r: f64) -> f64 {
    (r - n as f64 * std::f64::consts::FRAC_PI_4 + 3.0 * std::f64::consts::FRAC_PI_4).sin()
}

/// Radial interval [jπ + nπ/4 − 3π/4 + 0.07, jπ + π + nπ/4 − 3π/4 − 0.07]
/// on which |u(r)| ≥ sin(0.07).
pub fn resonant_interval(n: usize, j: u32) -> (f64, f64) {
    let base = f64::from(j) * std::f64::consts::PI
        + (n as f64) * std::f64::consts::FRAC_PI_4
        - 3.0 * std::f64::consts::FRAC_PI_4;
    (base + 0.07, base + std::f64::consts::PI - 0.07)
}

/// Resonant shell of index j: the annulus over [`resonant_interval`] plus
/// its phase floor ε₀ and bump radius ρ = ε₀/4.
#[derive(Debug, Clone)]
pub struct ResonantShell {
    pub j: u32,
    pub dim: usize,
    pub interval: (f64, f64),
    pub epsilon0: f64,
    pub rho: f64,
}

impl ResonantShell {
    pub fn new(dim: usize, j: u32) -> Result<Self> {
        if j == 0 {
            return Err(Error::Domain("shell index j must be >= 1".into()));
        }
        Ok(ResonantShell {
            j,
            dim,
            interval: resonant_interval(dim, j),
            epsilon0: epsilon0(),
            rho: rho(),
        })
    }

    pub fn annulus(&self) -> Annulus {
        Annulus::new(self.dim, self.interval.0.max(0.0), self.interval.1)
            .expect("resonant intervals are ordered")
    }
}

/// Λ₀,ⱼ of the counting lemma: |k| ∈ [jπ, (j+1)π].
pub fn lemma33_outer_annulus(n: usize, j: u32) -> Annulus {
    Annulus::new(
        n,
        f64::from(j) * std::f64::consts::PI,
        f64::from(j + 1) * std::f64::consts::PI,
    )
    .expect("ordered by construction")
}

/// Λ₁,ⱼ of the counting lemma: |k| ∈ [jπ + 0.07, (j+1)π − 0.07].
pub fn lemma33_inner_annulus(n: usize, j: u32) -> Annulus {
    Annulus::new(
        n,
        f64::from(j) * std::f64::consts::PI + 0.07,
        f64::from(j + 1) * std::f64::consts::PI - 0.07,
    )
    .expect("ordered by construction")
}

/// |Λ₁,ⱼ| / |Λ₀,ⱼ| with exact counts.
pub fn density_ratio(n: usize, j: u32) -> Result<f64> {
    let outer = annulus_count(&lemma33_outer_annulus(n, j));
    if outer == 0 {
        return Err(Error::EmptyShell(j));
    }
    let inner = annulus_count(&lemma33_inner_annulus(n, j));
    Ok(inner as f64 / outer as f64)
}

/// The lattice point of the annulus whose radius is closest to `target`,
/// lexicographically smallest on ties. Scans only candidates adjacent to
/// the sphere of radius `target` along the last axis, so the cost is
/// O(r^{n−1}) rather than the annulus cardinality.
fn closest_point_to_radius(a: &Annulus, target: f64) -> Option<BlockIndex> {
    let lo2 = a.r_lo * a.r_lo;
    let hi2 = a.r_hi * a.r_hi;
    let t2 = target * target;
    let mut best: Option<(i64, BlockIndex)> = None;
    let mut prefix = Vec::with_capacity(a.dim);
    // `t2_red` is the target radius² reduced by the prefix, used only to
    // place the candidate last coordinates; ranking always compares the
    // full |k|² against the original target.
    fn rec(
        dim_left: usize,
        lo2: f64,
        hi2: f64,
        t2_red: f64,
        target: f64,
        prefix: &mut Vec<i64>,
        best: &mut Option<(i64, BlockIndex)>,
    ) {
        if hi2 < 0.0 {
            return;
        }
        if dim_left == 1 {
            let y_lo = floor_sqrt(lo2.max(0.0));
            let y_hi = floor_sqrt(hi2);
            let y_t = floor_sqrt(t2_red.max(0.0));
            let mut cands = Vec::with_capacity(18);
            for base in [y_t, y_lo, y_hi] {
                for d in -1..=1i64 {
                    let y = base + d;
                    cands.push(y);
                    cands.push(-y);
                }
            }
            for y in cands {
                let y2 = (y * y) as f64;
                if y2 < lo2 || y2 > hi2 {
                    continue;
                }
                prefix.push(y);
                let k = BlockIndex::new(prefix.clone());
                prefix.pop();
                let s = k.norm_sqr();
                let d = (k.euclid_norm() - target).abs();
                match best {
                    Some((bs, bk)) => {
                        let bd = ((*bs as f64).sqrt() - target).abs();
                        if d < bd || (s == *bs && k < *bk) {
                            *best = Some((s, k));
                        }
                    }
                    None => *best = Some((s, k)),
                }
            }
            return;
        }
        let x_max = floor_sqrt(hi2);
        for x in -x_max..=x_max {
            let x2 = (x * x) as f64;
            prefix.push(x);
            rec(
                dim_left - 1,
                lo2 - x2,
                hi2 - x2,
                t2_red - x2,
                target,
                prefix,
                best,
            );
            prefix.pop();
        }
    }
    rec(a.dim, lo2, hi2, t2, target, &mut prefix, &mut best);
    best.map(|(_, k)| k)
}

/// One representative k_j per resonant shell: |k_j| lands in the shell's
/// interval, closest to the interval midpoint, lexicographically smallest
/// on ties. Errors with the offending j if a shell is empty.
pub fn select_representatives(
    n: usize,
    j_range: std::ops::RangeInclusive<u32>,
) -> Result<Vec<(u32, BlockIndex)>> {
    let js: Vec<u32> = j_range.collect();
    let picked: Vec<Result<(u32, BlockIndex)>> = js
        .par_iter()
        .map(|&j| {
            let shell = ResonantShell::new(n, j)?;
            let ann = shell.annulus();
            let mid = 0.5 * (shell.interval.0 + shell.interval.1);
            match closest_point_to_radius(&ann, mid) {
                Some(k) => Ok((j, k)),
                None => Err(Error::EmptyShell(j)),
            }
        })
        .collect();
    picked.into_iter().collect()
}
