//! Fuzzy quantities over a one-dimensional universe.
//!
//! [`FuzzyNumber`] is a trapezoid `(a, b, c, d)`; the triangular numbers used
//! for linguistic contributions are the `b == c` case. Everything here is a
//! pure function of immutable values.

mod chen;
mod linguistic;
mod mamdani;
mod sampled;

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use chen::{chen_indices, chen_indices_grid, ReferenceSet, DEFAULT_GRID_STEP};
pub use linguistic::{level_to_fuzzy, LinguisticLevel, LinguisticScale, DEFAULT_UNIVERSE_HI};
pub use mamdani::{mamdani_aggregate, Antecedent, MamdaniOutput};
pub use sampled::{sup_min_utility, SampledFuzzySet, DEFAULT_SAMPLE_STEP};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuzzyError {
    #[error("fuzzy number parameters must be finite and ordered a <= b <= c <= d, got ({0}, {1}, {2}, {3})")]
    Unordered(f64, f64, f64, f64),
    #[error("universe upper bound must be at least 4, got {0}")]
    InvalidUniverse(f64),
    #[error("scale factor must be a non-negative finite number, got {0}")]
    NegativeWeight(f64),
    #[error("ranking exponent k must be positive and finite, got {0}")]
    InvalidExponent(f64),
    #[error("cannot rank an empty candidate set")]
    EmptyCandidates,
    #[error("sampled sets live on different universes ([{0}, {1}] with {2} samples vs [{3}, {4}] with {5} samples)")]
    UniverseMismatch(f64, f64, usize, f64, f64, usize),
    #[error("invalid sampling grid [{lo}, {hi}] with step {step}")]
    InvalidGrid { lo: f64, hi: f64, step: f64 },
    #[error("mamdani inference needs at least one antecedent")]
    NoAntecedents,
}

/// Anything with a membership function and a bounded support.
pub trait Membership {
    fn membership(&self, x: f64) -> f64;

    /// Closed interval outside which membership is zero. `None` for the empty set.
    fn support(&self) -> Option<(f64, f64)>;
}

/// Trapezoidal fuzzy number with lower support `a`, core `[b, c]` and upper
/// support `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct FuzzyNumber {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl FuzzyNumber {
    pub const ZERO: FuzzyNumber = FuzzyNumber {
        a: 0.0,
        b: 0.0,
        c: 0.0,
        d: 0.0,
    };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, FuzzyError> {
        let finite = [a, b, c, d].iter().all(|v| v.is_finite());
        if !finite || !(a <= b && b <= c && c <= d) {
            return Err(FuzzyError::Unordered(a, b, c, d));
        }
        Ok(FuzzyNumber { a, b, c, d })
    }

    /// Triangular number `(w, y, z)`.
    pub fn triangular(w: f64, y: f64, z: f64) -> Result<Self, FuzzyError> {
        Self::new(w, y, y, z)
    }

    pub fn point(x: f64) -> Result<Self, FuzzyError> {
        Self::new(x, x, x, x)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn params(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn is_triangular(&self) -> bool {
        self.b == self.c
    }

    pub fn is_point(&self) -> bool {
        self.a == self.d
    }

    /// Piecewise-linear membership. Vertical edges (`a == b` or `c == d`)
    /// belong to the core, so a shoulder evaluates to 1 at its edge.
    pub fn membership(&self, x: f64) -> f64 {
        let FuzzyNumber { a, b, c, d } = *self;
        if x < a || x > d || x.is_nan() {
            0.0
        } else if x >= b && x <= c {
            1.0
        } else if x < b {
            (x - a) / (b - a)
        } else {
            (d - x) / (d - c)
        }
    }

    /// Multiplies every parameter by `factor`.
    pub fn scale(&self, factor: f64) -> Result<Self, FuzzyError> {
        if !factor.is_finite() || factor < 0.0 {
            return Err(FuzzyError::NegativeWeight(factor));
        }
        Ok(FuzzyNumber {
            a: self.a * factor,
            b: self.b * factor,
            c: self.c * factor,
            d: self.d * factor,
        })
    }

    pub fn translate(&self, delta: f64) -> Result<Self, FuzzyError> {
        Self::new(self.a + delta, self.b + delta, self.c + delta, self.d + delta)
    }

    /// Centroid of the area under the membership graph. For a triangle
    /// `(w, y, z)` this is `(w + y + z) / 3`; a point returns itself.
    pub fn centroid(&self) -> f64 {
        let FuzzyNumber { a, b, c, d } = *self;
        let denom = 3.0 * ((c + d) - (a + b));
        if denom == 0.0 {
            return a;
        }
        ((c * c + c * d + d * d) - (a * a + a * b + b * b)) / denom
    }

    /// Sum of a sequence, starting from the additive identity.
    pub fn sum<'a, I: IntoIterator<Item = &'a FuzzyNumber>>(items: I) -> FuzzyNumber {
        items.into_iter().fold(FuzzyNumber::ZERO, |acc, f| acc + *f)
    }
}

impl Default for FuzzyNumber {
    fn default() -> Self {
        FuzzyNumber::ZERO
    }
}

/// Component-wise interval addition. The sum of two ordered quadruples is
/// ordered, so this cannot fail.
impl Add for FuzzyNumber {
    type Output = FuzzyNumber;

    fn add(self, rhs: FuzzyNumber) -> FuzzyNumber {
        FuzzyNumber {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
            c: self.c + rhs.c,
            d: self.d + rhs.d,
        }
    }
}

impl Membership for FuzzyNumber {
    fn membership(&self, x: f64) -> f64 {
        FuzzyNumber::membership(self, x)
    }

    fn support(&self) -> Option<(f64, f64)> {
        Some((self.a, self.d))
    }
}

impl TryFrom<[f64; 4]> for FuzzyNumber {
    type Error = FuzzyError;

    fn try_from(p: [f64; 4]) -> Result<Self, Self::Error> {
        FuzzyNumber::new(p[0], p[1], p[2], p[3])
    }
}

impl From<FuzzyNumber> for [f64; 4] {
    fn from(f: FuzzyNumber) -> Self {
        f.params()
    }
}

impl fmt::Display for FuzzyNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_triangular() {
            write!(f, "({}, {}, {})", self.a, self.b, self.d)
        } else {
            write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.d)
        }
    }
}

/// Free-function form of `lhs + rhs`.
pub fn fuzzy_add(lhs: FuzzyNumber, rhs: FuzzyNumber) -> FuzzyNumber {
    lhs + rhs
}

pub fn fuzzy_scale(f: FuzzyNumber, factor: f64) -> Result<FuzzyNumber, FuzzyError> {
    f.scale(factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tfn(w: f64, y: f64, z: f64) -> FuzzyNumber {
        FuzzyNumber::triangular(w, y, z).unwrap()
    }

    #[test]
    fn rejects_unordered_and_non_finite() {
        assert!(FuzzyNumber::new(1.0, 0.0, 2.0, 3.0).is_err());
        assert!(FuzzyNumber::new(0.0, 1.0, f64::NAN, 3.0).is_err());
        assert!(FuzzyNumber::new(0.0, 1.0, 2.0, f64::INFINITY).is_err());
        assert!(FuzzyNumber::new(0.0, 0.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn membership_examples() {
        assert_eq!(tfn(1.0, 2.0, 3.0).membership(2.0), 1.0);
        assert_eq!(tfn(2.0, 3.0, 4.0).membership(2.5), 0.5);
        assert_eq!(tfn(0.0, 1.0, 2.0).membership(3.0), 0.0);
        assert_eq!(tfn(0.0, 1.0, 2.0).membership(-0.1), 0.0);
    }

    #[test]
    fn shoulders_evaluate_to_one_at_vertical_edge() {
        let vl = FuzzyNumber::new(0.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(vl.membership(0.0), 1.0);
        assert_eq!(vl.membership(0.25), 0.75);
        assert_eq!(vl.membership(1.0), 0.0);
        let vh = FuzzyNumber::new(3.0, 4.0, 6.0, 6.0).unwrap();
        assert_eq!(vh.membership(6.0), 1.0);
        assert_eq!(vh.membership(6.01), 0.0);
        assert_eq!(vh.membership(3.5), 0.5);
    }

    #[test]
    fn addition_examples() {
        assert_eq!(
            tfn(1.0, 2.0, 3.0) + tfn(2.0, 3.0, 4.0),
            tfn(3.0, 5.0, 7.0)
        );
        let f = FuzzyNumber::new(0.5, 1.0, 2.0, 4.0).unwrap();
        assert_eq!(FuzzyNumber::ZERO + f, f);
        let vl = FuzzyNumber::new(0.0, 0.0, 0.0, 1.0).unwrap();
        let vh = FuzzyNumber::new(3.0, 4.0, 6.0, 6.0).unwrap();
        assert_eq!(vl + vh, FuzzyNumber::new(3.0, 4.0, 6.0, 7.0).unwrap());
    }

    #[test]
    fn scale_examples() {
        assert_eq!(tfn(1.0, 2.0, 3.0).scale(2.0).unwrap(), tfn(2.0, 4.0, 6.0));
        let f = FuzzyNumber::new(0.5, 1.0, 2.0, 4.0).unwrap();
        assert_eq!(f.scale(1.0).unwrap(), f);
        let vh = FuzzyNumber::new(3.0, 4.0, 6.0, 6.0).unwrap();
        assert_eq!(vh.scale(0.0).unwrap(), FuzzyNumber::ZERO);
        assert_eq!(
            vh.scale(-1.0).unwrap_err(),
            FuzzyError::NegativeWeight(-1.0)
        );
    }

    #[test]
    fn centroid_examples() {
        assert_eq!(tfn(1.0, 2.0, 3.0).centroid(), 2.0);
        assert!((tfn(0.0, 0.0, 3.0).centroid() - 1.0).abs() < 1e-15);
        assert_eq!(FuzzyNumber::new(0.0, 1.0, 2.0, 3.0).unwrap().centroid(), 1.5);
        assert_eq!(FuzzyNumber::point(2.5).unwrap().centroid(), 2.5);
    }

    /// Midpoint-rule integration of x·μ(x) / μ(x).
    fn numeric_centroid(f: &FuzzyNumber) -> f64 {
        let n = 200_000;
        let h = (f.d() - f.a()) / n as f64;
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..n {
            let x = f.a() + (i as f64 + 0.5) * h;
            let m = f.membership(x);
            num += x * m;
            den += m;
        }
        num / den
    }

    fn trapezoid() -> impl Strategy<Value = FuzzyNumber> {
        prop::array::uniform4(-50.0f64..50.0).prop_map(|mut p| {
            p.sort_by(f64::total_cmp);
            FuzzyNumber::new(p[0], p[1], p[2], p[3]).unwrap()
        })
    }

    fn triangle() -> impl Strategy<Value = FuzzyNumber> {
        prop::array::uniform3(-50.0f64..50.0).prop_map(|mut p| {
            p.sort_by(f64::total_cmp);
            FuzzyNumber::triangular(p[0], p[1], p[2]).unwrap()
        })
    }

    proptest! {
        #[test]
        fn membership_is_bounded_and_monotone_on_edges(f in trapezoid(), t in 0.0f64..1.0, s in 0.0f64..1.0) {
            let (lo, hi) = if t < s { (t, s) } else { (s, t) };
            let rise = |u: f64| f.a() + u * (f.b() - f.a());
            let fall = |u: f64| f.c() + u * (f.d() - f.c());
            for x in [rise(lo), rise(hi), fall(lo), fall(hi), f.a() - 1.0, f.d() + 1.0] {
                let m = f.membership(x);
                prop_assert!((0.0..=1.0).contains(&m));
            }
            prop_assert!(f.membership(rise(lo)) <= f.membership(rise(hi)) + 1e-12);
            prop_assert!(f.membership(fall(lo)) + 1e-12 >= f.membership(fall(hi)));
        }

        #[test]
        fn centroid_matches_numeric_integration(f in trapezoid()) {
            prop_assume!(f.d() - f.a() > 1e-3);
            let tol = 1e-6 * (f.d() - f.a()).max(1.0);
            prop_assert!((f.centroid() - numeric_centroid(&f)).abs() < tol);
        }

        #[test]
        fn centroid_is_monotone_in_each_parameter(f in trapezoid(), idx in 0usize..4, bump in 0.0f64..5.0) {
            let mut p = f.params();
            p[idx] += bump;
            p.sort_by(f64::total_cmp);
            let g = FuzzyNumber::new(p[0], p[1], p[2], p[3]).unwrap();
            // g dominates f component-wise after the bump and re-sort.
            prop_assert!(g.centroid() + 1e-9 >= f.centroid());
        }

        #[test]
        fn addition_commutes_and_associates(f in trapezoid(), g in trapezoid(), h in trapezoid()) {
            prop_assert_eq!(f + g, g + f);
            let l = (f + g) + h;
            let r = f + (g + h);
            for (x, y) in l.params().iter().zip(r.params()) {
                prop_assert!((x - y).abs() <= 1e-9);
            }
        }

        #[test]
        fn centroid_is_linear_for_triangles(f in triangle(), g in triangle(), lambda in 0.0f64..10.0) {
            prop_assert!(((f + g).centroid() - (f.centroid() + g.centroid())).abs() <= 1e-9);
            prop_assert!((f.scale(lambda).unwrap().centroid() - lambda * f.centroid()).abs() <= 1e-9);
        }
    }
}
