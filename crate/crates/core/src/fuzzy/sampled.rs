use serde::{Deserialize, Serialize};

use super::{FuzzyError, Membership};

pub const DEFAULT_SAMPLE_STEP: f64 = 1e-3;

/// Membership values on a uniform grid `lo = x_0 < x_1 < ... < x_n = hi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFuzzySet {
    universe_lo: f64,
    universe_hi: f64,
    values: Vec<f64>,
}

impl SampledFuzzySet {
    /// Samples `m` on `[lo, hi]` with a step no larger than `step`.
    pub fn sample<M: Membership + ?Sized>(m: &M, lo: f64, hi: f64, step: f64) -> Result<Self, FuzzyError> {
        let n = grid_intervals(lo, hi, step)?;
        let h = (hi - lo) / n as f64;
        let values = (0..=n)
            .map(|i| {
                let x = if i == n { hi } else { lo + i as f64 * h };
                m.membership(x).clamp(0.0, 1.0)
            })
            .collect();
        Ok(SampledFuzzySet {
            universe_lo: lo,
            universe_hi: hi,
            values,
        })
    }

    pub fn from_values(lo: f64, hi: f64, values: Vec<f64>) -> Result<Self, FuzzyError> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi || values.len() < 2 {
            return Err(FuzzyError::InvalidGrid {
                lo,
                hi,
                step: (hi - lo) / values.len().saturating_sub(1).max(1) as f64,
            });
        }
        let values = values.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
        Ok(SampledFuzzySet {
            universe_lo: lo,
            universe_hi: hi,
            values,
        })
    }

    pub fn universe(&self) -> (f64, f64) {
        (self.universe_lo, self.universe_hi)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn step(&self) -> f64 {
        (self.universe_hi - self.universe_lo) / (self.values.len() - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.values.len() {
            self.universe_hi
        } else {
            self.universe_lo + i as f64 * self.step()
        }
    }

    pub fn height(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Trapezoid-rule centroid; 0 for an empty set.
    pub fn centroid(&self) -> f64 {
        let h = self.step();
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..self.values.len() - 1 {
            let (x0, x1) = (self.x(i), self.x(i + 1));
            let (y0, y1) = (self.values[i], self.values[i + 1]);
            den += 0.5 * h * (y0 + y1);
            // exact first moment of the linear segment
            num += h / 6.0 * (y0 * (2.0 * x0 + x1) + y1 * (x0 + 2.0 * x1));
        }
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    fn same_grid(&self, other: &SampledFuzzySet) -> bool {
        self.universe_lo == other.universe_lo
            && self.universe_hi == other.universe_hi
            && self.values.len() == other.values.len()
    }
}

impl Membership for SampledFuzzySet {
    /// Linear interpolation between grid samples.
    fn membership(&self, x: f64) -> f64 {
        if !(x >= self.universe_lo && x <= self.universe_hi) {
            return 0.0;
        }
        let pos = (x - self.universe_lo) / self.step();
        let i = (pos.floor() as usize).min(self.values.len() - 2);
        let t = (pos - i as f64).clamp(0.0, 1.0);
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }

    fn support(&self) -> Option<(f64, f64)> {
        let first = self.values.iter().position(|&v| v > 0.0)?;
        let last = self.values.iter().rposition(|&v| v > 0.0)?;
        let lo = if first == 0 { self.x(0) } else { self.x(first - 1) };
        let hi = if last + 1 == self.values.len() {
            self.x(last)
        } else {
            self.x(last + 1)
        };
        Some((lo, hi))
    }
}

pub(crate) fn grid_intervals(lo: f64, hi: f64, step: f64) -> Result<usize, FuzzyError> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi && step > 0.0 && step.is_finite()) {
        return Err(FuzzyError::InvalidGrid { lo, hi, step });
    }
    let n = ((hi - lo) / step - 1e-9).ceil().max(1.0);
    if n > 1e9 {
        return Err(FuzzyError::InvalidGrid { lo, hi, step });
    }
    Ok(n as usize)
}

/// Sup-min utility of `f` against a reference set: the largest grid value of
/// `min(f(x), reference(x))`. A [`SampledFuzzySet`] argument must share the
/// reference's grid.
pub fn sup_min_utility<M: Membership + ?Sized>(f: &M, reference: &SampledFuzzySet) -> f64 {
    (0..reference.len())
        .map(|i| f.membership(reference.x(i)).min(reference.values[i]))
        .fold(0.0, f64::max)
}

impl SampledFuzzySet {
    /// Sup-min utility between two sets on the same grid.
    pub fn sup_min(&self, reference: &SampledFuzzySet) -> Result<f64, FuzzyError> {
        if !self.same_grid(reference) {
            return Err(FuzzyError::UniverseMismatch(
                self.universe_lo,
                self.universe_hi,
                self.values.len(),
                reference.universe_lo,
                reference.universe_hi,
                reference.values.len(),
            ));
        }
        Ok(self
            .values
            .iter()
            .zip(&reference.values)
            .map(|(a, b)| a.min(*b))
            .fold(0.0, f64::max))
    }
}
