//! Chen's maximizing/minimizing-set ranking.
//!
//! For candidates with joint support `[x_min, x_max]`:
//!
//! ```text
//! S_max(x) = ((x - x_min) / (x_max - x_min))^k
//! S_min(x) = ((x_max - x) / (x_max - x_min))^k
//! R_i      = sup_x min(S_max(x), mu_i(x))
//! L_i      = sup_x min(S_min(x), mu_i(x))
//! CH_i     = (R_i + 1 - L_i) / 2
//! ```

use rayon::prelude::*;

use super::sampled::grid_intervals;
use super::{FuzzyError, FuzzyNumber, Membership};

/// Grid step used when the sup-min has to be found numerically.
pub const DEFAULT_GRID_STEP: f64 = 1e-4;

/// Chen's maximizing (`S_max`) or minimizing (`S_min`) set over `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceSet {
    lo: f64,
    hi: f64,
    k: f64,
    maximizing: bool,
}

impl ReferenceSet {
    pub fn maximizing(lo: f64, hi: f64, k: f64) -> Self {
        ReferenceSet {
            lo,
            hi,
            k,
            maximizing: true,
        }
    }

    pub fn minimizing(lo: f64, hi: f64, k: f64) -> Self {
        ReferenceSet {
            lo,
            hi,
            k,
            maximizing: false,
        }
    }
}

impl Membership for ReferenceSet {
    fn membership(&self, x: f64) -> f64 {
        if !(x >= self.lo && x <= self.hi) || self.hi <= self.lo {
            return 0.0;
        }
        let t = if self.maximizing {
            (x - self.lo) / (self.hi - self.lo)
        } else {
            (self.hi - x) / (self.hi - self.lo)
        };
        t.clamp(0.0, 1.0).powf(self.k)
    }

    fn support(&self) -> Option<(f64, f64)> {
        Some((self.lo, self.hi))
    }
}

fn check_k(k: f64) -> Result<(), FuzzyError> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(FuzzyError::InvalidExponent(k))
    }
}

/// Joint support of all non-empty candidates.
fn joint_support<M: Membership>(candidates: &[M]) -> Option<(f64, f64)> {
    candidates
        .iter()
        .filter_map(Membership::support)
        .fold(None, |acc, (lo, hi)| match acc {
            None => Some((lo, hi)),
            Some((l, h)) => Some((f64::min(l, lo), f64::max(h, hi))),
        })
}

/// Ranking indices for trapezoidal candidates, positionally aligned with the
/// input.
///
/// The sup-min of a monotone reference set with a trapezoid is attained on
/// one edge: `R` on the falling edge `[c, d]`, `L` on the rising edge
/// `[a, b]`. With `k == 1` both are line intersections in closed form;
/// other exponents bisect the (monotone) difference on that edge.
pub fn chen_indices(candidates: &[FuzzyNumber], k: f64) -> Result<Vec<f64>, FuzzyError> {
    check_k(k)?;
    let (x_min, x_max) = joint_support(candidates).ok_or(FuzzyError::EmptyCandidates)?;
    if x_max == x_min {
        return Ok(vec![0.5; candidates.len()]);
    }
    Ok(candidates
        .iter()
        .map(|f| {
            let r = right_utility(f, x_min, x_max, k);
            let l = left_utility(f, x_min, x_max, k);
            0.5 * (r + 1.0 - l)
        })
        .collect())
}

fn right_utility(f: &FuzzyNumber, x_min: f64, x_max: f64, k: f64) -> f64 {
    let width = x_max - x_min;
    let (c, d) = (f.c(), f.d());
    if k == 1.0 {
        return ((d - x_min) / (d - c + width)).clamp(0.0, 1.0);
    }
    let s_max = |x: f64| ((x - x_min) / width).clamp(0.0, 1.0).powf(k);
    if d == c {
        return s_max(d);
    }
    // s_max(x) - mu(x) is increasing on [c, d]: <= 0 at c, >= 0 at d.
    let x = bisect(c, d, |x| s_max(x) - (d - x) / (d - c));
    s_max(x)
}

fn left_utility(f: &FuzzyNumber, x_min: f64, x_max: f64, k: f64) -> f64 {
    let width = x_max - x_min;
    let (a, b) = (f.a(), f.b());
    if k == 1.0 {
        return ((x_max - a) / (b - a + width)).clamp(0.0, 1.0);
    }
    let s_min = |x: f64| ((x_max - x) / width).clamp(0.0, 1.0).powf(k);
    if a == b {
        return s_min(a);
    }
    // mu(x) - s_min(x) is increasing on [a, b]: <= 0 at a, >= 0 at b.
    let x = bisect(a, b, |x| (x - a) / (b - a) - s_min(x));
    s_min(x)
}

/// Root of an increasing function on `[lo, hi]` with `g(lo) <= 0 <= g(hi)`.
fn bisect(mut lo: f64, mut hi: f64, g: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Ranking indices for arbitrary membership shapes, evaluating both sup-mins
/// on a uniform grid over the joint support with spacing at most `step`.
/// Empty candidates get `R = L = 0`.
pub fn chen_indices_grid<M: Membership + Sync>(
    candidates: &[M],
    k: f64,
    step: f64,
) -> Result<Vec<f64>, FuzzyError> {
    check_k(k)?;
    if candidates.is_empty() {
        return Err(FuzzyError::EmptyCandidates);
    }
    let Some((x_min, x_max)) = joint_support(candidates) else {
        return Ok(vec![0.5; candidates.len()]);
    };
    if x_max == x_min {
        return Ok(vec![0.5; candidates.len()]);
    }
    let n = grid_intervals(x_min, x_max, step)?;
    let h = (x_max - x_min) / n as f64;
    let xs: Vec<f64> = (0..=n)
        .map(|i| if i == n { x_max } else { x_min + i as f64 * h })
        .collect();
    let s_max = ReferenceSet::maximizing(x_min, x_max, k);
    let s_min = ReferenceSet::minimizing(x_min, x_max, k);
    let maxs: Vec<f64> = xs.iter().map(|&x| s_max.membership(x)).collect();
    let mins: Vec<f64> = xs.iter().map(|&x| s_min.membership(x)).collect();

    Ok(candidates
        .par_iter()
        .map(|cand| {
            let Some((lo, hi)) = cand.support() else {
                return 0.5;
            };
            let first = (((lo - x_min) / h).floor().max(0.0) as usize).min(n);
            let last = (((hi - x_min) / h).ceil().max(0.0) as usize).min(n);
            let (mut r, mut l) = (0.0f64, 0.0f64);
            for i in first..=last {
                let m = cand.membership(xs[i]);
                r = r.max(m.min(maxs[i]));
                l = l.max(m.min(mins[i]));
            }
            0.5 * (r + 1.0 - l)
        })
        .collect())
}
