//! Tail probabilities for the rank tests.

use core::f64::consts::SQRT_2;

/// Two-sided standard normal tail, `P(|Z| >= z)` for `z >= 0`.
pub(crate) fn normal_two_sided(z: f64) -> f64 {
    libm::erfc(z / SQRT_2)
}

/// Upper tail of the chi-square distribution with `dof` degrees of freedom.
pub(crate) fn chi_square_sf(x: f64, dof: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if dof == 1.0 {
        return libm::erfc(libm::sqrt(x / 2.0));
    }
    gamma_q(dof / 2.0, x / 2.0)
}

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 1000;

/// Regularized upper incomplete gamma function `Q(s, x)`.
pub(crate) fn gamma_q(s: f64, x: f64) -> f64 {
    debug_assert!(s > 0.0);
    if x <= 0.0 {
        return 1.0;
    }
    if x < s + 1.0 {
        1.0 - gamma_p_series(s, x)
    } else {
        gamma_q_continued_fraction(s, x)
    }
}

fn log_prefactor(s: f64, x: f64) -> f64 {
    s * libm::log(x) - x - libm::lgamma(s)
}

fn gamma_p_series(s: f64, x: f64) -> f64 {
    let mut term = 1.0 / s;
    let mut sum = term;
    let mut a = s;
    for _ in 0..MAX_ITER {
        a += 1.0;
        term *= x / a;
        sum += term;
        if libm::fabs(term) < libm::fabs(sum) * EPS {
            break;
        }
    }
    sum * libm::exp(log_prefactor(s, x))
}

// Modified Lentz evaluation of the continued fraction for Q.
fn gamma_q_continued_fraction(s: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if libm::fabs(d) < TINY {
            d = TINY;
        }
        c = b + an / c;
        if libm::fabs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if libm::fabs(delta - 1.0) < EPS {
            break;
        }
    }
    libm::exp(log_prefactor(s, x)) * h
}
