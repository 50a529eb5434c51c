//! Min-label Mamdani inference over the five-level scale.
//!
//! Every antecedent ranges over all five levels, giving an implicit rule base
//! of `5^n` rules. The consequent of a rule is the lowest level among its
//! antecedent labels (a single `H` among otherwise `VH` inputs yields `H`).
//! A rule fires with the minimum of its antecedent memberships, clips its
//! consequent at that strength, and the output is the pointwise maximum of
//! the clipped consequents.
//!
//! The output is fully described by one clip height per level, so it is
//! stored that way and evaluated exactly instead of on a grid.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::sampled::SampledFuzzySet;
use super::{FuzzyError, FuzzyNumber, LinguisticLevel, LinguisticScale, Membership, DEFAULT_SAMPLE_STEP};

/// One rule-base input: a crisp position on the universe where all five
/// levels are evaluated, the level it was declared with, and an importance
/// in `(0, 1]`.
///
/// An importance below 1 lets the antecedent drop out of a rule with degree
/// `1 - importance` (it then neither lowers the firing strength nor the
/// consequent). With unit importance everywhere this is plain min inference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Antecedent {
    pub level: LinguisticLevel,
    pub input: f64,
    #[serde(default = "unit_importance")]
    pub importance: f64,
}

fn unit_importance() -> f64 {
    1.0
}

impl Antecedent {
    pub fn new(level: LinguisticLevel, input: f64) -> Self {
        Antecedent {
            level,
            input,
            importance: 1.0,
        }
    }

    /// Antecedent sitting on the middle of `level`'s core.
    pub fn at_peak(level: LinguisticLevel, scale: &LinguisticScale) -> Self {
        Antecedent::new(level, scale.peak(level))
    }

    /// Antecedent at a crisp input, labelled with the closest level.
    pub fn from_crisp(input: f64, scale: &LinguisticScale) -> Self {
        Antecedent::new(scale.nearest(input), input)
    }

    pub fn with_importance(mut self, importance: f64) -> Self {
        self.importance = importance;
        self
    }
}

/// Aggregated Mamdani output: the clip height of each consequent level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MamdaniOutput {
    heights: [f64; 5],
    scale: LinguisticScale,
}

impl MamdaniOutput {
    pub fn empty(scale: LinguisticScale) -> Self {
        MamdaniOutput {
            heights: [0.0; 5],
            scale,
        }
    }

    pub fn infer(antecedents: &[Antecedent], scale: LinguisticScale) -> Result<Self, FuzzyError> {
        if antecedents.is_empty() {
            return Err(FuzzyError::NoAntecedents);
        }
        let hi = scale.universe_hi();
        let degrees: Vec<[f64; 5]> = antecedents
            .iter()
            .map(|ant| {
                let x = ant.input.clamp(0.0, hi);
                LinguisticLevel::ALL.map(|l| scale.fuzzy(l).membership(x))
            })
            .collect();
        let dont_care: Vec<f64> = antecedents
            .iter()
            .map(|ant| (1.0 - ant.importance).clamp(0.0, 1.0))
            .collect();

        let mut heights = [0.0; 5];
        for (li, height) in heights.iter_mut().enumerate() {
            // Best strength of antecedent i over labels >= li (or don't-care).
            let at_least: Vec<f64> = degrees
                .iter()
                .zip(&dont_care)
                .map(|(m, &dc)| m[li..].iter().copied().fold(dc, f64::max))
                .collect();
            // Some antecedent j must actually carry level li.
            for (j, m) in degrees.iter().enumerate() {
                let others = at_least
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != j)
                    .map(|(_, &u)| u)
                    .fold(1.0, f64::min);
                *height = f64::max(*height, m[li].min(others));
            }
        }
        Ok(MamdaniOutput { heights, scale })
    }

    pub fn heights(&self) -> [f64; 5] {
        self.heights
    }

    pub fn height(&self, level: LinguisticLevel) -> f64 {
        self.heights[level.index()]
    }

    pub fn scale(&self) -> LinguisticScale {
        self.scale
    }

    pub fn is_empty(&self) -> bool {
        self.heights.iter().all(|&h| h == 0.0)
    }

    /// Level with the largest clip height; ties go to the higher level.
    pub fn dominant_level(&self) -> Option<LinguisticLevel> {
        if self.is_empty() {
            return None;
        }
        let mut best = 0;
        for i in 1..5 {
            if self.heights[i] >= self.heights[best] {
                best = i;
            }
        }
        LinguisticLevel::from_index(best)
    }

    pub fn heights_by_level(&self) -> BTreeMap<LinguisticLevel, f64> {
        LinguisticLevel::ALL
            .iter()
            .map(|&l| (l, self.heights[l.index()]))
            .collect()
    }

    /// Exact area centroid. The output is piecewise linear between the
    /// breakpoints collected here, so per-segment integration is exact.
    /// An empty output has centroid 0.
    pub fn centroid(&self) -> f64 {
        let xs = self.breakpoints();
        let (mut num, mut den) = (0.0, 0.0);
        for w in xs.windows(2) {
            let (x0, x1) = (w[0], w[1]);
            let h = x1 - x0;
            if h <= 0.0 {
                continue;
            }
            let (y0, y1) = (self.membership(x0), self.membership(x1));
            den += 0.5 * h * (y0 + y1);
            num += h / 6.0 * (y0 * (2.0 * x0 + x1) + y1 * (x0 + 2.0 * x1));
        }
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        let hi = self.scale.universe_hi();
        let sets: Vec<FuzzyNumber> = LinguisticLevel::ALL.iter().map(|&l| self.scale.fuzzy(l)).collect();
        let mut xs = vec![0.0, hi];
        for f in &sets {
            xs.extend(f.params());
            for &h in &self.heights {
                if h > 0.0 && h < 1.0 {
                    if f.b() > f.a() {
                        xs.push(f.a() + h * (f.b() - f.a()));
                    }
                    if f.d() > f.c() {
                        xs.push(f.d() - h * (f.d() - f.c()));
                    }
                }
            }
        }
        // rising edge of one level against the falling edge of another
        for up in &sets {
            for down in &sets {
                if up.b() > up.a() && down.d() > down.c() {
                    let s1 = 1.0 / (up.b() - up.a());
                    let s2 = 1.0 / (down.d() - down.c());
                    let x = (up.a() * s1 + down.d() * s2) / (s1 + s2);
                    xs.push(x);
                }
            }
        }
        xs.retain(|x| x.is_finite() && *x >= 0.0 && *x <= hi);
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs
    }

    /// Samples the output on `[0, universe_hi]`.
    pub fn sample(&self, step: f64) -> Result<SampledFuzzySet, FuzzyError> {
        SampledFuzzySet::sample(self, 0.0, self.scale.universe_hi(), step)
    }
}

impl Membership for MamdaniOutput {
    fn membership(&self, x: f64) -> f64 {
        LinguisticLevel::ALL
            .iter()
            .map(|&l| self.heights[l.index()].min(self.scale.fuzzy(l).membership(x)))
            .fold(0.0, f64::max)
    }

    fn support(&self) -> Option<(f64, f64)> {
        LinguisticLevel::ALL
            .iter()
            .filter(|l| self.heights[l.index()] > 0.0)
            .map(|&l| {
                let f = self.scale.fuzzy(l);
                (f.a(), f.d())
            })
            .fold(None, |acc, (lo, hi)| match acc {
                None => Some((lo, hi)),
                Some((l, h)) => Some((f64::min(l, lo), f64::max(h, hi))),
            })
    }
}

/// Runs the min-label rule base and samples the aggregate at the default
/// resolution.
pub fn mamdani_aggregate(antecedents: &[Antecedent], universe_hi: f64) -> Result<SampledFuzzySet, FuzzyError> {
    let scale = LinguisticScale::new(universe_hi)?;
    MamdaniOutput::infer(antecedents, scale)?.sample(DEFAULT_SAMPLE_STEP)
}
