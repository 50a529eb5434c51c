//! Obstacle-resolution tactics as rewrites that return a new graph.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    validate, AlternativeNode, Contribution, DecisionKind, DecisionNode, Diagnostic, Direction, Edge, EdgeKind,
    GoalModelGraph, GoalNode, GoalSpec, NodeKind, QualityThreshold, GoalThreshold, ResolutionStatus, TacticLabel,
};
use crate::fuzzy::FuzzyNumber;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewAlternative {
    pub id: String,
    pub name: String,
    #[serde(default)]
    pub contributions: BTreeMap<String, Contribution>,
    #[serde(default)]
    pub crisp: BTreeMap<String, f64>,
    #[serde(default)]
    pub cost: Option<FuzzyNumber>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewDecision {
    pub id: String,
    pub name: String,
    #[serde(default)]
    pub alternatives: Vec<NewAlternative>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewGoal {
    pub id: String,
    pub name: String,
    #[serde(default = "default_category")]
    pub category: String,
    #[serde(default = "default_direction")]
    pub direction: Direction,
    #[serde(default = "default_weight")]
    pub weight: u32,
    #[serde(default)]
    pub spec: Option<GoalSpec>,
}

fn default_category() -> String {
    "restoration".into()
}

fn default_direction() -> Direction {
    Direction::Maximize
}

fn default_weight() -> u32 {
    1
}

/// A tactic together with its parameters. Serialized as
/// `{"tactic": "<label>", "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tactic", content = "params", rename_all = "snake_case")]
pub enum TacticRequest {
    /// Replace the goal's specification so the obstacle no longer applies;
    /// the obstructs edge is removed.
    SubstituteGoal {
        goal: String,
        obstacle: String,
        spec: GoalSpec,
        #[serde(default)]
        name: Option<String>,
    },
    /// Hand the obstructed goal to another platform.
    SubstitutePlatform {
        goal: String,
        obstacle: String,
        platform: String,
    },
    PreventObstacle {
        obstacle: String,
        decision: NewDecision,
    },
    ReduceObstacle {
        obstacle: String,
        decision: NewDecision,
        #[serde(default)]
        downgrade_likelihood: bool,
    },
    WeakenGoal {
        goal: String,
        #[serde(default)]
        objective: Option<String>,
        #[serde(default)]
        threshold_score: Option<f64>,
        #[serde(default)]
        threshold_quality: Option<f64>,
        #[serde(default)]
        obstacle: Option<String>,
    },
    RestoreGoal {
        obstacle: String,
        goal: NewGoal,
        decision: NewDecision,
    },
    MitigateObstacle {
        obstacle: String,
        goal: NewGoal,
        decision: NewDecision,
    },
    DoNothing {
        obstacle: String,
    },
}

impl TacticRequest {
    pub fn label(&self) -> TacticLabel {
        match self {
            TacticRequest::SubstituteGoal { .. } => TacticLabel::SubstituteGoal,
            TacticRequest::SubstitutePlatform { .. } => TacticLabel::SubstitutePlatform,
            TacticRequest::PreventObstacle { .. } => TacticLabel::PreventObstacle,
            TacticRequest::ReduceObstacle { .. } => TacticLabel::ReduceObstacle,
            TacticRequest::WeakenGoal { .. } => TacticLabel::WeakenGoal,
            TacticRequest::RestoreGoal { .. } => TacticLabel::RestoreGoal,
            TacticRequest::MitigateObstacle { .. } => TacticLabel::MitigateObstacle,
            TacticRequest::DoNothing { .. } => TacticLabel::DoNothing,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TacticError {
    #[error("unknown {kind} `{id}`")]
    UnknownNode { kind: &'static str, id: String },
    #[error("id `{0}` is already used in the model")]
    DuplicateId(String),
    #[error("invalid parameters for {tactic}: {reason}")]
    Params { tactic: TacticLabel, reason: String },
    #[error("tactic produced an invalid graph: {0:?}")]
    InvalidResult(Vec<Diagnostic>),
}

/// Applies `request` to a copy of `graph`. The input is never modified, and
/// the result is canonical and passes [`validate`] whenever the input does.
pub fn apply_tactic(graph: &GoalModelGraph, request: &TacticRequest) -> Result<GoalModelGraph, TacticError> {
    let mut g = graph.clone();
    let label = request.label();
    let params = |reason: String| TacticError::Params { tactic: label, reason };

    match request {
        TacticRequest::SubstituteGoal {
            goal,
            obstacle,
            spec,
            name,
        } => {
            require(&g, goal, NodeKind::Goal)?;
            require(&g, obstacle, NodeKind::Obstacle)?;
            if !g.has_edge(EdgeKind::Obstructs, obstacle, goal) {
                return Err(params(format!("`{obstacle}` does not obstruct `{goal}`")));
            }
            g.edges
                .retain(|e| !(e.kind == EdgeKind::Obstructs && &e.from == obstacle && &e.to == goal));
            let node = g.goal_mut(goal).expect("checked above");
            node.spec = Some(spec.clone());
            if let Some(name) = name {
                node.name = name.clone();
            }
            set_status(&mut g, obstacle, ResolutionStatus::Resolved);
        }
        TacticRequest::SubstitutePlatform {
            goal,
            obstacle,
            platform,
        } => {
            require(&g, goal, NodeKind::Goal)?;
            require(&g, obstacle, NodeKind::Obstacle)?;
            if !g.has_edge(EdgeKind::Obstructs, obstacle, goal) {
                return Err(params(format!("`{obstacle}` does not obstruct `{goal}`")));
            }
            if platform.trim().is_empty() {
                return Err(params("platform must not be empty".into()));
            }
            g.goal_mut(goal).expect("checked above").responsible = Some(platform.clone());
            set_status(&mut g, obstacle, ResolutionStatus::Resolved);
        }
        TacticRequest::PreventObstacle { obstacle, decision } => {
            require(&g, obstacle, NodeKind::Obstacle)?;
            if decision.alternatives.is_empty() {
                return Err(params("the new decision needs at least one alternative".into()));
            }
            add_decision(&mut g, decision, label, obstacle)?;
            set_status(&mut g, obstacle, ResolutionStatus::Resolved);
        }
        TacticRequest::ReduceObstacle {
            obstacle,
            decision,
            downgrade_likelihood,
        } => {
            require(&g, obstacle, NodeKind::Obstacle)?;
            if decision.alternatives.is_empty() {
                return Err(params("the new decision needs at least one alternative".into()));
            }
            if *downgrade_likelihood && g.obstacle(obstacle).and_then(|o| o.likelihood).is_none() {
                return Err(params(format!("`{obstacle}` has no likelihood to downgrade")));
            }
            add_decision(&mut g, decision, label, obstacle)?;
            let node = g.obstacle_mut(obstacle).expect("checked above");
            if *downgrade_likelihood {
                node.likelihood = node.likelihood.map(|l| l.downgraded());
            }
            node.status = ResolutionStatus::Resolved;
        }
        TacticRequest::WeakenGoal {
            goal,
            objective,
            threshold_score,
            threshold_quality,
            obstacle,
        } => {
            require(&g, goal, NodeKind::Goal)?;
            if let Some(o) = obstacle {
                require(&g, o, NodeKind::Obstacle)?;
            }
            if objective.is_none() && threshold_score.is_none() && threshold_quality.is_none() {
                return Err(params("give a replacement objective or threshold".into()));
            }
            if threshold_score.is_some_and(|v| !v.is_finite()) || threshold_quality.is_some_and(|v| !v.is_finite()) {
                return Err(params("thresholds must be finite".into()));
            }
            let node = g.goal_mut(goal).expect("checked above");
            if let Some(value) = threshold_quality {
                match node.threshold.as_mut().and_then(|t| t.quality.as_mut()) {
                    Some(q) => q.value = *value,
                    None => {
                        return Err(params(format!(
                            "`{goal}` has no quality-unit threshold to relax"
                        )))
                    }
                }
            }
            if let Some(score) = threshold_score {
                match node.threshold.as_mut() {
                    Some(t) => t.score = *score,
                    None => {
                        node.threshold = Some(GoalThreshold {
                            score: *score,
                            quality: None::<QualityThreshold>,
                        })
                    }
                }
            }
            if let Some(text) = objective {
                node.spec.get_or_insert_with(GoalSpec::default).objective_function = Some(text.clone());
            }
            if let Some(o) = obstacle {
                set_status(&mut g, o, ResolutionStatus::Resolved);
            }
        }
        TacticRequest::RestoreGoal {
            obstacle,
            goal,
            decision,
        }
        | TacticRequest::MitigateObstacle {
            obstacle,
            goal,
            decision,
        } => {
            require(&g, obstacle, NodeKind::Obstacle)?;
            fresh(&g, &goal.id)?;
            let parent = g
                .obstructed_by(obstacle)
                .first()
                .map(|s| s.to_string())
                .unwrap_or_else(|| g.root.id.clone());
            g.goals.push(GoalNode {
                id: goal.id.clone(),
                name: goal.name.clone(),
                category: goal.category.clone(),
                direction: goal.direction,
                weight: goal.weight,
                spec: goal.spec.clone(),
                threshold: None,
                responsible: None,
            });
            g.edges.push(Edge::new(EdgeKind::Refines, goal.id.clone(), parent));
            add_decision(&mut g, decision, label, obstacle)?;
            g.edges
                .push(Edge::new(EdgeKind::Operationalises, decision.id.clone(), goal.id.clone()));
            set_status(&mut g, obstacle, ResolutionStatus::Resolved);
        }
        TacticRequest::DoNothing { obstacle } => {
            require(&g, obstacle, NodeKind::Obstacle)?;
            set_status(&mut g, obstacle, ResolutionStatus::Accepted);
        }
    }

    g.canonicalize();
    let diags = validate(&g);
    if !diags.is_empty() && validate(graph).is_empty() {
        return Err(TacticError::InvalidResult(diags));
    }
    Ok(g)
}

fn require(g: &GoalModelGraph, id: &str, kind: NodeKind) -> Result<(), TacticError> {
    if g.node_kind(id) == Some(kind) {
        Ok(())
    } else {
        Err(TacticError::UnknownNode {
            kind: kind.as_str(),
            id: id.to_string(),
        })
    }
}

fn fresh(g: &GoalModelGraph, id: &str) -> Result<(), TacticError> {
    if g.node_kind(id).is_some() {
        Err(TacticError::DuplicateId(id.to_string()))
    } else {
        Ok(())
    }
}

fn set_status(g: &mut GoalModelGraph, obstacle: &str, status: ResolutionStatus) {
    if let Some(o) = g.obstacle_mut(obstacle) {
        o.status = status;
    }
}

/// Adds a tactic decision resolving `obstacle`, with its alternatives.
fn add_decision(
    g: &mut GoalModelGraph,
    decision: &NewDecision,
    label: TacticLabel,
    obstacle: &str,
) -> Result<(), TacticError> {
    fresh(g, &decision.id)?;
    let mut new_ids = vec![decision.id.as_str()];
    for alt in &decision.alternatives {
        fresh(g, &alt.id)?;
        if new_ids.contains(&alt.id.as_str()) {
            return Err(TacticError::DuplicateId(alt.id.clone()));
        }
        new_ids.push(&alt.id);
        for goal in alt.contributions.keys().chain(alt.crisp.keys()) {
            require(g, goal, NodeKind::Goal)?;
        }
    }
    g.decisions.push(DecisionNode {
        id: decision.id.clone(),
        name: decision.name.clone(),
        kind: DecisionKind::Tactic(label),
    });
    g.edges
        .push(Edge::new(EdgeKind::Resolves, decision.id.clone(), obstacle.to_string()));
    for alt in &decision.alternatives {
        g.alternatives.push(AlternativeNode {
            id: alt.id.clone(),
            name: alt.name.clone(),
            decision: decision.id.clone(),
            contributions: alt.contributions.clone(),
            crisp: alt.crisp.clone(),
            cost: alt.cost,
        });
        g.edges
            .push(Edge::new(EdgeKind::Implements, alt.id.clone(), decision.id.clone()));
    }
    Ok(())
}
