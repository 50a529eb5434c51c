//! Qualitative likelihood x consequence risk matrix.

use std::cmp::Reverse;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{GoalModelError, GoalModelGraph, ObstacleNode};
use crate::ids::natural_cmp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Likelihood {
    Rare,
    Unlikely,
    Possible,
    Likely,
    AlmostCertain,
}

impl Likelihood {
    pub const ALL: [Likelihood; 5] = [
        Likelihood::Rare,
        Likelihood::Unlikely,
        Likelihood::Possible,
        Likelihood::Likely,
        Likelihood::AlmostCertain,
    ];

    /// One step less likely, saturating at `Rare`.
    pub fn downgraded(self) -> Likelihood {
        match self {
            Likelihood::Rare | Likelihood::Unlikely => Likelihood::Rare,
            Likelihood::Possible => Likelihood::Unlikely,
            Likelihood::Likely => Likelihood::Possible,
            Likelihood::AlmostCertain => Likelihood::Likely,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Consequence {
    Insignificant,
    Minor,
    Moderate,
    Major,
    Catastrophic,
}

impl Consequence {
    pub const ALL: [Consequence; 5] = [
        Consequence::Insignificant,
        Consequence::Minor,
        Consequence::Moderate,
        Consequence::Major,
        Consequence::Catastrophic,
    ];
}

/// `L < M < H < E < V` (low, moderate, high, extreme, very extreme).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RiskLevel {
    L,
    M,
    H,
    E,
    V,
}

impl RiskLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            RiskLevel::L => "L",
            RiskLevel::M => "M",
            RiskLevel::H => "H",
            RiskLevel::E => "E",
            RiskLevel::V => "V",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            RiskLevel::L => "low",
            RiskLevel::M => "moderate",
            RiskLevel::H => "high",
            RiskLevel::E => "extreme",
            RiskLevel::V => "very extreme",
        }
    }
}

impl fmt::Display for RiskLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for RiskLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "L" => Ok(RiskLevel::L),
            "M" => Ok(RiskLevel::M),
            "H" => Ok(RiskLevel::H),
            "E" => Ok(RiskLevel::E),
            "V" => Ok(RiskLevel::V),
            other => Err(format!("unknown risk level `{other}` (expected L, M, H, E or V)")),
        }
    }
}

use RiskLevel::{E, H, L, M, V};

// Rows by likelihood (Rare..AlmostCertain), columns by consequence
// (Insignificant..Catastrophic).
const MATRIX: [[RiskLevel; 5]; 5] = [
    [L, L, M, H, H],
    [L, L, M, H, E],
    [L, M, H, E, E],
    [M, H, H, E, V],
    [H, H, E, E, V],
];

pub fn assess_risk(likelihood: Likelihood, consequence: Consequence) -> RiskLevel {
    MATRIX[likelihood as usize][consequence as usize]
}

/// Obstacles at or above `threshold`, most severe first, then by id.
pub fn severe_obstacles(
    graph: &GoalModelGraph,
    threshold: RiskLevel,
) -> Result<Vec<(&ObstacleNode, RiskLevel)>, GoalModelError> {
    let mut rated = Vec::with_capacity(graph.obstacles.len());
    for obstacle in &graph.obstacles {
        let risk = obstacle
            .risk()
            .ok_or_else(|| GoalModelError::IncompleteAssessment(obstacle.id.clone()))?;
        if risk >= threshold {
            rated.push((obstacle, risk));
        }
    }
    rated.sort_by(|(a, ra), (b, rb)| Reverse(ra).cmp(&Reverse(rb)).then_with(|| natural_cmp(&a.id, &b.id)));
    Ok(rated)
}
