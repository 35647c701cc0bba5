//! Small regression helpers used by the decay/gain experiments.

/// Least-squares line `y ≈ slope·x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "need at least two points to fit a line");
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Slope of log|y| against log x, dropping any non-finite pairs.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let mut lx = Vec::with_capacity(xs.len());
    let mut ly = Vec::with_capacity(ys.len());
    for (&x, &y) in xs.iter().zip(ys) {
        if x > 0.0 && y != 0.0 && y.is_finite() {
            lx.push(x.ln());
            ly.push(y.abs().ln());
        }
    }
    linear_fit(&lx, &ly).0
}

/// Per-octave envelope: bins `(x, y)` samples into octaves of x and keeps
/// the maximum |y| per bin, returning (geometric bin center, max).
///
/// Oscillatory remainders cross zero; fitting the per-octave maxima instead
/// of raw samples recovers the decay exponent of the envelope.
pub fn octave_envelope(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut bins: std::collections::BTreeMap<i32, f64> = std::collections::BTreeMap::new();
    for &(x, y) in points {
        if x <= 0.0 || !y.is_finite() {
            continue;
        }
        let bin = x.log2().floor() as i32;
        let e = bins.entry(bin).or_insert(0.0);
        *e = e.max(y.abs());
    }
    bins.into_iter()
        .filter(|&(_, m)| m > 0.0)
        .map(|(b, m)| (2f64.powi(b) * std::f64::consts::SQRT_2, m))
        .collect()
}

/// Decay exponent of an oscillatory quantity: log-log slope of the
/// per-octave envelope maxima.
pub fn envelope_decay_exponent(points: &[(f64, f64)]) -> f64 {
    let env = octave_envelope(points);
    let xs: Vec<f64> = env.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = env.iter().map(|p| p.1).collect();
    log_log_slope(&xs, &ys)
}
