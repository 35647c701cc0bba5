//! Shared test oracles: an exact-rational ascending Bessel series for
//! integer and half-integer orders, evaluated with `BigRational` term
//! arithmetic so it shares no code path (and no floating-point rounding)
//! with the library implementation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Round a big rational to f64 without overflowing the intermediate
/// integer-to-float conversions (numerator/denominator can be thousands of
/// bits wide).
pub fn ratio_to_f64(q: &BigRational) -> f64 {
    if q.numer().is_zero() {
        return 0.0;
    }
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    // scale so the integer quotient carries ~80 significant bits
    let shift = nb - db - 80;
    let (num, den) = if shift >= 0 {
        (q.numer().clone(), q.denom().clone() << shift as u64)
    } else {
        (q.numer().clone() << (-shift) as u64, q.denom().clone())
    };
    let quot = &num / &den;
    let qf = quot.to_f64().expect("quotient fits in ~81 bits");
    qf * 2f64.powi(shift as i32)
}

fn factorial(n: u32) -> BigInt {
    let mut f = BigInt::from(1);
    for i in 2..=n {
        f *= i;
    }
    f
}

/// J_δ(r) for δ = `two_delta`/2 (two_delta ≥ −1 covers δ ≥ −1/2), by the
/// ascending series with exact rational term arithmetic. `r` enters as an
/// exact rational (every f64 is one).
///
/// Integer order d:   J_d(r) = Σ (−1)^m (r/2)^{2m+d} / (m!(m+d)!)
/// Half-integer d+½:  J(r) = √(r/(2π)) Σ (−1)^m (r/2)^{2m+d} 2^{m+d+1} /
///                                        (m!(2m+2d+1)!!)
pub fn bessel_oracle(two_delta: i64, r: f64) -> f64 {
    assert!(two_delta >= -1, "oracle needs delta >= -1/2");
    assert!(r >= 0.0);
    if r == 0.0 {
        return if two_delta == 0 { 1.0 } else { 0.0 };
    }
    let x = BigRational::from_float(r / 2.0).expect("finite r");
    let x2 = &x * &x;
    if two_delta % 2 == 0 {
        let d = (two_delta / 2) as u32;
        // t_0 = x^d / d!
        let mut term = pow_rational(&x, i64::from(d)) / BigRational::from(factorial(d));
        let mut sum = term.clone();
        let min_terms = 20 + r.ceil() as u32;
        for m in 0..200u32 {
            let denom = BigInt::from(m + 1) * BigInt::from(u64::from(m) + 1 + u64::from(d));
            term = -(&term * &x2) / BigRational::from(denom);
            sum += &term;
            if m > min_terms && term_is_negligible(&term, &sum) {
                break;
            }
        }
        ratio_to_f64(&sum)
    } else {
        // two_delta = 2d + 1, d ≥ -1 ⇒ δ = d + 1/2
        let d = (two_delta - 1) / 2;
        // u_0 = x^d · 2^{d+1} / (2d+1)!!
        let mut term = pow_rational(&x, d) * BigRational::from(pow_bigint(2, d + 1))
            / BigRational::from(double_factorial(2 * d + 1));
        let mut sum = term.clone();
        let min_terms = 20 + r.ceil() as i64;
        for m in 0..200i64 {
            let denom = BigInt::from(m + 1) * BigInt::from(2 * m + 2 * d + 3);
            term = -(&term * &x2 * BigRational::from(BigInt::from(2))) / BigRational::from(denom);
            sum += &term;
            if m > min_terms && term_is_negligible(&term, &sum) {
                break;
            }
        }
        (r / (2.0 * std::f64::consts::PI)).sqrt() * ratio_to_f64(&sum)
    }
}

/// V_δ(r) = J_δ(r)/r^δ by the same exact series (prefactor handled in
/// floating point, which does not cancel).
pub fn v_kernel_oracle(two_delta: i64, r: f64) -> f64 {
    let delta = two_delta as f64 / 2.0;
    if r == 0.0 {
        return 2f64.powf(-delta) / modsphere_core::special::gamma(delta + 1.0);
    }
    bessel_oracle(two_delta, r) / r.powf(delta)
}

fn pow_rational(x: &BigRational, e: i64) -> BigRational {
    assert!(e >= -1);
    if e == -1 {
        return BigRational::from(BigInt::from(1)) / x.clone();
    }
    let mut acc = BigRational::from(BigInt::from(1));
    for _ in 0..e {
        acc *= x;
    }
    acc
}

fn pow_bigint(base: u32, e: i64) -> BigInt {
    assert!(e >= 0, "negative power of two handled by caller");
    let mut acc = BigInt::from(1);
    for _ in 0..e {
        acc *= base;
    }
    acc
}

fn double_factorial(n: i64) -> BigInt {
    // n!! for odd n ≥ -1 ((−1)!! = 1)
    let mut acc = BigInt::from(1);
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

fn term_is_negligible(term: &BigRational, sum: &BigRational) -> bool {
    // compare in log2 scale to avoid converting huge rationals
    let tb = term.numer().bits() as i64 - term.denom().bits() as i64;
    let sb = sum.numer().bits() as i64 - sum.denom().bits() as i64;
    !term.is_positive() && !term.is_negative() || tb < sb - 140
}
