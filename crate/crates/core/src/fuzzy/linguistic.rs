use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{FuzzyError, FuzzyNumber};

/// Upper end of the goal-satisfaction universe unless a model overrides it.
/// Crisp impact values in the exemplar reach 5.9, so 5 would truncate them.
pub const DEFAULT_UNIVERSE_HI: f64 = 6.0;

/// Five-level goal-satisfaction scale, ordered `VL < L < M < H < VH`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LinguisticLevel {
    VL,
    L,
    M,
    H,
    VH,
}

impl LinguisticLevel {
    pub const ALL: [LinguisticLevel; 5] = [
        LinguisticLevel::VL,
        LinguisticLevel::L,
        LinguisticLevel::M,
        LinguisticLevel::H,
        LinguisticLevel::VH,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LinguisticLevel::VL => "VL",
            LinguisticLevel::L => "L",
            LinguisticLevel::M => "M",
            LinguisticLevel::H => "H",
            LinguisticLevel::VH => "VH",
        }
    }
}

impl fmt::Display for LinguisticLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LinguisticLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "VL" => Ok(LinguisticLevel::VL),
            "L" => Ok(LinguisticLevel::L),
            "M" => Ok(LinguisticLevel::M),
            "H" => Ok(LinguisticLevel::H),
            "VH" => Ok(LinguisticLevel::VH),
            other => Err(format!("unknown linguistic level `{other}` (expected VL, L, M, H or VH)")),
        }
    }
}

/// The level-to-fuzzy-number mapping on `[0, universe_hi]`.
///
/// `VL` is a left shoulder `(0, 0, 0, 1)` and `VH` a right shoulder
/// `(3, 4, hi, hi)`; the middle three are unit triangles peaking at 1, 2, 3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinguisticScale {
    universe_hi: f64,
}

impl LinguisticScale {
    pub fn new(universe_hi: f64) -> Result<Self, FuzzyError> {
        if !universe_hi.is_finite() || universe_hi < 4.0 {
            return Err(FuzzyError::InvalidUniverse(universe_hi));
        }
        Ok(LinguisticScale { universe_hi })
    }

    pub fn universe_hi(&self) -> f64 {
        self.universe_hi
    }

    pub fn fuzzy(&self, level: LinguisticLevel) -> FuzzyNumber {
        let (a, b, c, d) = match level {
            LinguisticLevel::VL => (0.0, 0.0, 0.0, 1.0),
            LinguisticLevel::L => (0.0, 1.0, 1.0, 2.0),
            LinguisticLevel::M => (1.0, 2.0, 2.0, 3.0),
            LinguisticLevel::H => (2.0, 3.0, 3.0, 4.0),
            LinguisticLevel::VH => (3.0, 4.0, self.universe_hi, self.universe_hi),
        };
        FuzzyNumber { a, b, c, d }
    }

    /// Middle of the level's core: the crisp value that is fully and only
    /// that level.
    pub fn peak(&self, level: LinguisticLevel) -> f64 {
        let f = self.fuzzy(level);
        0.5 * (f.b() + f.c())
    }

    /// Level with the highest membership at `x`; ties go to the lower level.
    pub fn nearest(&self, x: f64) -> LinguisticLevel {
        let mut best = LinguisticLevel::VL;
        let mut best_m = f64::NEG_INFINITY;
        for level in LinguisticLevel::ALL {
            let m = self.fuzzy(level).membership(x);
            if m > best_m {
                best = level;
                best_m = m;
            }
        }
        if best_m <= 0.0 {
            if x > self.universe_hi {
                return LinguisticLevel::VH;
            }
            return LinguisticLevel::VL;
        }
        best
    }
}

impl Default for LinguisticScale {
    fn default() -> Self {
        LinguisticScale {
            universe_hi: DEFAULT_UNIVERSE_HI,
        }
    }
}

/// Fuzzy number for `level` on a universe ending at `universe_hi`.
pub fn level_to_fuzzy(level: LinguisticLevel, universe_hi: f64) -> Result<FuzzyNumber, FuzzyError> {
    Ok(LinguisticScale::new(universe_hi)?.fuzzy(level))
}
