//! Classical univariate rank tests: Mann-Whitney U (exact and normal
//! approximation) and Kruskal-Wallis H.
//!
//! Ranks are handled as doubled midranks so that every rank sum is an
//! integer. Tied values share the mean of the ranks they span.

use alloc::vec;
use alloc::vec::Vec;

use super::special::{chi_square_sf, normal_two_sided};
use super::{TestMethod, TestResult, WarningError};

/// Largest combined sample size accepted by the exact enumeration.
pub const EXACT_MAX_COMBINED: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MannWhitneyMode {
    Exact,
    NormalApprox,
}

pub(crate) struct Ranked {
    /// Doubled midrank of each pooled observation, in input order.
    pub doubled: Vec<u64>,
    /// Sum of `t^3 - t` over tie blocks.
    pub tie_term: f64,
}

pub(crate) fn doubled_midranks(values: &[f64]) -> Result<Ranked, WarningError> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(WarningError::NonFiniteValue);
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut doubled = vec![0u64; values.len()];
    let mut tie_term = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // ranks start+1..=end, doubled mean = start + 1 + end
        let r = (start + 1 + end) as u64;
        for &idx in &order[start..end] {
            doubled[idx] = r;
        }
        let t = (end - start) as f64;
        tie_term += t * t * t - t;
        start = end;
    }
    Ok(Ranked { doubled, tie_term })
}

/// `(U_a, U_b)` with tied pairs counted one half. `U_a + U_b = |a| * |b|`.
pub fn u_statistics(a: &[f64], b: &[f64]) -> Result<(f64, f64), WarningError> {
    let (u2a, n1, n2, _) = doubled_u(a, b)?;
    let u_a = u2a as f64 / 2.0;
    Ok((u_a, (n1 * n2) as f64 - u_a))
}

// Returns (2 * U_a, n1, n2, ranks).
fn doubled_u(a: &[f64], b: &[f64]) -> Result<(u64, u64, u64, Ranked), WarningError> {
    if a.is_empty() || b.is_empty() {
        return Err(WarningError::EmptyGroup);
    }
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranked = doubled_midranks(&pooled)?;
    let n1 = a.len() as u64;
    let n2 = b.len() as u64;
    let rank_sum_a: u64 = ranked.doubled[..a.len()].iter().sum();
    Ok((rank_sum_a - n1 * (n1 + 1), n1, n2, ranked))
}

/// Two-sided Mann-Whitney U test of `a` against `b`. The reported
/// statistic is `U_a`.
pub fn mann_whitney_u(
    a: &[f64],
    b: &[f64],
    mode: MannWhitneyMode,
) -> Result<TestResult, WarningError> {
    let (u2a, n1, n2, ranked) = doubled_u(a, b)?;
    let n = n1 + n2;
    let u_a = u2a as f64 / 2.0;
    match mode {
        MannWhitneyMode::Exact => {
            if n as usize > EXACT_MAX_COMBINED {
                return Err(WarningError::ExactTooLarge {
                    combined: n as usize,
                    max: EXACT_MAX_COMBINED,
                });
            }
            let observed = (u2a as i64 - (n1 * n2) as i64).unsigned_abs();
            let p = exact_two_sided(&ranked.doubled, n1 as usize, observed);
            Ok(TestResult {
                statistic: u_a,
                p_value: p,
                method: TestMethod::MannWhitneyExact,
            })
        }
        MannWhitneyMode::NormalApprox => {
            let (n1f, n2f, nf) = (n1 as f64, n2 as f64, n as f64);
            let mean = n1f * n2f / 2.0;
            let tie_adjust = if n > 1 {
                ranked.tie_term / (nf * (nf - 1.0))
            } else {
                0.0
            };
            let var = n1f * n2f / 12.0 * ((nf + 1.0) - tie_adjust);
            let p = if var <= 0.0 {
                1.0
            } else {
                let dev = (libm::fabs(u_a - mean) - 0.5).max(0.0);
                normal_two_sided(dev / libm::sqrt(var))
            };
            Ok(TestResult {
                statistic: u_a,
                p_value: clamp_p(p),
                method: TestMethod::MannWhitneyNormalApprox,
            })
        }
    }
}

/// Null distribution of the doubled rank sum over all `C(n, n1)` choices of
/// group `a`, counted by dynamic programming over the pooled ranks. Returns
/// the fraction of choices whose `|2U - n1 n2|` reaches `observed`.
fn exact_two_sided(doubled: &[u64], n1: usize, observed: u64) -> f64 {
    let n = doubled.len();
    let n2 = (n - n1) as i64;
    let max_sum: usize = doubled.iter().sum::<u64>() as usize;
    let width = max_sum + 1;
    // ways[k * width + s]: subsets of size k with doubled rank sum s
    let mut ways = vec![0u64; (n1 + 1) * width];
    ways[0] = 1;
    let mut seen_sum = 0usize;
    for (item, &r) in doubled.iter().enumerate() {
        let r = r as usize;
        seen_sum += r;
        for k in (1..=n1.min(item + 1)).rev() {
            let (lo, hi) = ways.split_at_mut(k * width);
            let prev = &lo[(k - 1) * width..];
            let cur = &mut hi[..width];
            for s in (r..=seen_sum).rev() {
                cur[s] += prev[s - r];
            }
        }
    }
    let offset = (n1 * (n1 + 1)) as i64 + n1 as i64 * n2;
    let row = &ways[n1 * width..];
    let mut total = 0u64;
    let mut extreme = 0u64;
    for (s, &count) in row.iter().enumerate() {
        if count == 0 {
            continue;
        }
        total += count;
        if (s as i64 - offset).unsigned_abs() >= observed {
            extreme += count;
        }
    }
    clamp_p(extreme as f64 / total as f64)
}

/// Kruskal-Wallis H test with midrank tie correction and a chi-square
/// reference distribution on `k - 1` degrees of freedom.
pub fn kruskal_wallis<G: AsRef<[f64]>>(groups: &[G]) -> Result<TestResult, WarningError> {
    if groups.len() < 2 {
        return Err(WarningError::FewerThanTwoGroups);
    }
    if groups.iter().any(|g| g.as_ref().is_empty()) {
        return Err(WarningError::EmptyGroup);
    }
    let pooled: Vec<f64> = groups
        .iter()
        .flat_map(|g| g.as_ref().iter().copied())
        .collect();
    let ranked = doubled_midranks(&pooled)?;
    let n = pooled.len() as f64;

    // H = 3 / (N (N+1)) * sum_i (S_i - n_i (N+1))^2 / n_i with S_i the
    // doubled rank sum of group i; every deviation is an exact integer.
    let mut weighted = 0.0;
    let mut cursor = 0;
    for g in groups {
        let len = g.as_ref().len();
        let s: u64 = ranked.doubled[cursor..cursor + len].iter().sum();
        let dev = s as i64 - (len as i64) * (pooled.len() as i64 + 1);
        weighted += (dev * dev) as f64 / len as f64;
        cursor += len;
    }
    let raw = 3.0 * weighted / (n * (n + 1.0));
    let correction = 1.0 - ranked.tie_term / (n * n * n - n);
    let (h, p) = if correction <= 0.0 {
        (0.0, 1.0)
    } else {
        let h = raw / correction;
        (h, chi_square_sf(h, (groups.len() - 1) as f64))
    };
    Ok(TestResult {
        statistic: h,
        p_value: clamp_p(p),
        method: TestMethod::KruskalWallis,
    })
}

fn clamp_p(p: f64) -> f64 {
    p.clamp(f64::MIN_POSITIVE, 1.0)
}
