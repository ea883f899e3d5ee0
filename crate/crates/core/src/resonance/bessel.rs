//! Bessel functions of the first kind and integer order.
//!
//! Three evaluation routes are combined:
//! - Hankel's asymptotic expansion when `x` is large compared with `n²`;
//! - Miller's backward recurrence, normalised with `J0 + 2ΣJ_2k = 1`;
//! - forward recurrence from `J0`, `J1` for very large `x` with `n < x`,
//!   where the recurrence is stable.

use crate::error::{Error, Result};

pub const MAX_ORDER: i64 = 1_000_000;
pub const MAX_ARGUMENT: f64 = 1e9;

/// Largest argument handled by backward recurrence.
const MILLER_MAX_X: f64 = 2e6;
const HANKEL_MIN_X: f64 = 25.0;
const HANKEL_MAX_TERMS: usize = 120;
const RESCALE: f64 = 1e250;

fn check_domain(n: i64, x: f64) -> Result<()> {
    if !x.is_finite() || x.abs() > MAX_ARGUMENT {
        return Err(Error::Domain(format!(
            "Bessel argument {x} outside |x| <= {MAX_ARGUMENT}"
        )));
    }
    if n.abs() > MAX_ORDER {
        return Err(Error::Domain(format!(
            "Bessel order {n} outside |n| <= {MAX_ORDER}"
        )));
    }
    Ok(())
}

/// `J_n(x)` for integer `n`. Negative orders use `J_{-n} = (-1)^n J_n` and
/// negative arguments `J_n(-x) = (-1)^n J_n(x)`.
pub fn bessel_j(n: i64, x: f64) -> Result<f64> {
    check_domain(n, x)?;
    let odd = n.rem_euclid(2) == 1;
    let mut sign = 1.0;
    if n < 0 && odd {
        sign = -sign;
    }
    if x < 0.0 && odd {
        sign = -sign;
    }
    Ok(sign * j_nonneg(n.unsigned_abs() as usize, x.abs()))
}

/// `J_0(x)`; panics outside the supported domain.
#[inline]
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    assert!(x <= MAX_ARGUMENT, "J0 argument {x} outside supported domain");
    j_nonneg(0, x)
}

fn j_nonneg(n: usize, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if let Some(v) = hankel(n, x) {
        return v;
    }
    if x <= MILLER_MAX_X {
        return miller(n, x);
    }
    forward(n, x)
}

/// Hankel expansion; `None` when it cannot reach full precision.
fn hankel(n: usize, x: f64) -> Option<f64> {
    let nf = n as f64;
    if x < HANKEL_MIN_X || nf * nf > 4.0 * x {
        return None;
    }
    let mu = 4.0 * nf * nf;
    let inv8x = 1.0 / (8.0 * x);
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0_f64;
    let mut prev = f64::INFINITY;
    let mut converged = false;
    for k in 1..=HANKEL_MAX_TERMS {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) * inv8x / k as f64;
        let mag = term.abs();
        // k = 1, 2, 3, 4, ... contribute +Q, -P, -Q, +P, ...
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if mag < 1e-17 * p.abs().max(q.abs()).max(1e-300) || term == 0.0 {
            converged = true;
            break;
        }
        if mag > prev && k > 2 {
            return None;
        }
        prev = mag;
    }
    if !converged {
        return None;
    }
    // χ = x - (n/2 + 1/4)π; expand cos(x - φ) to keep x's reduction exact.
    let (sx, cx) = x.sin_cos();
    let phi = std::f64::consts::FRAC_PI_4 + std::f64::consts::FRAC_PI_2 * (n % 4) as f64;
    let (sp, cp) = phi.sin_cos();
    let cos_chi = cx * cp + sx * sp;
    let sin_chi = sx * cp - cx * sp;
    Some((2.0 / (std::f64::consts::PI * x)).sqrt() * (p * cos_chi - q * sin_chi))
}

fn miller_start(top: f64) -> usize {
    let top = top.max(1.0);
    let m = top + 50.0 + 12.0 * top.cbrt();
    let m = m.ceil() as usize;
    m + (m % 2)
}

/// Backward recurrence for a single order.
fn miller(n: usize, x: f64) -> f64 {
    let start = miller_start((n as f64).max(x));
    let two_over_x = 2.0 / x;
    let (mut above, mut cur) = (0.0_f64, 1e-300_f64);
    let mut norm = 0.0;
    let mut target = 0.0;
    // cur holds j_m for m = start
    let mut m = start;
    loop {
        if m == n {
            target = cur;
        }
        if m % 2 == 0 {
            norm += if m == 0 { cur } else { 2.0 * cur };
        }
        if m == 0 {
            break;
        }
        let below = m as f64 * two_over_x * cur - above;
        above = cur;
        cur = below;
        m -= 1;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            above /= RESCALE;
            norm /= RESCALE;
            target /= RESCALE;
        }
    }
    target / norm
}

fn forward(n: usize, x: f64) -> f64 {
    let j0 = hankel(0, x).expect("Hankel converges for large x");
    if n == 0 {
        return j0;
    }
    let mut prev = j0;
    let mut cur = hankel(1, x).expect("Hankel converges for large x");
    for m in 1..n {
        let next = 2.0 * m as f64 / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `[J_0(x), J_1(x), ..., J_{n_max}(x)]` in one backward sweep.
pub fn bessel_j_orders(x: f64, n_max: usize) -> Result<Vec<f64>> {
    check_domain(n_max as i64, x)?;
    let x_abs = x.abs();
    let mut out = vec![0.0; n_max + 1];
    if x_abs == 0.0 {
        out[0] = 1.0;
        return Ok(out);
    }
    if x_abs > MILLER_MAX_X {
        for (n, v) in out.iter_mut().enumerate() {
            *v = bessel_j(n as i64, x)?;
        }
        return Ok(out);
    }
    let start = miller_start((n_max as f64).max(x_abs));
    let two_over_x = 2.0 / x_abs;
    let (mut above, mut cur) = (0.0_f64, 1e-300_f64);
    let mut norm = 0.0;
    let mut m = start;
    loop {
        if m <= n_max {
            out[m] = cur;
        }
        if m % 2 == 0 {
            norm += if m == 0 { cur } else { 2.0 * cur };
        }
        if m == 0 {
            break;
        }
        let below = m as f64 * two_over_x * cur - above;
        above = cur;
        cur = below;
        m -= 1;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            above /= RESCALE;
            norm /= RESCALE;
            out.iter_mut().for_each(|v| *v /= RESCALE);
        }
    }
    let negate_odd = x < 0.0;
    for (k, v) in out.iter_mut().enumerate() {
        *v /= norm;
        if negate_odd && k % 2 == 1 {
            *v = -*v;
        }
    }
    Ok(out)
}
