//! Goal-obstacle graph: a root goal refined into quality goals, obstacles
//! that obstruct them, architectural decisions that operationalise goals or
//! resolve obstacles, and the alternatives implementing each decision.

mod dot;
mod risk;
mod tactics;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fuzzy::{FuzzyNumber, LinguisticLevel, LinguisticScale};
use crate::ids::natural_cmp;

pub use dot::export_dot;
pub use risk::{assess_risk, severe_obstacles, Consequence, Likelihood, RiskLevel};
pub use tactics::{apply_tactic, NewAlternative, NewDecision, NewGoal, TacticError, TacticRequest};

/// Inclusive range for goal priorities `P_g`.
pub const WEIGHT_RANGE: std::ops::RangeInclusive<u32> = 1..=10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Maximize,
    Minimize,
}

/// Goal specification template. All parts are prose.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoalSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub definition: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quality_variable: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_space: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective_function: Option<String>,
}

/// A threshold in the goal's own quality-variable units, e.g. 40 millisecond.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityThreshold {
    pub value: f64,
    pub unit: String,
}

/// Constraint attached to a goal. `score` is what gets checked, on the
/// goal-score scale; `quality` records the stakeholder's original statement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoalThreshold {
    pub score: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quality: Option<QualityThreshold>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootGoal {
    pub id: String,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoalNode {
    pub id: String,
    pub name: String,
    pub category: String,
    pub direction: Direction,
    pub weight: u32,
    pub spec: Option<GoalSpec>,
    pub threshold: Option<GoalThreshold>,
    /// Platform or agent responsible for the goal.
    pub responsible: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResolutionStatus {
    Open,
    Resolved,
    Accepted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstacleNode {
    pub id: String,
    pub name: String,
    pub likelihood: Option<Likelihood>,
    pub consequence: Option<Consequence>,
    pub status: ResolutionStatus,
}

impl ObstacleNode {
    pub fn risk(&self) -> Option<RiskLevel> {
        Some(assess_risk(self.likelihood?, self.consequence?))
    }
}

/// The eight obstacle-resolution tactics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TacticLabel {
    SubstituteGoal,
    SubstitutePlatform,
    PreventObstacle,
    ReduceObstacle,
    WeakenGoal,
    RestoreGoal,
    MitigateObstacle,
    DoNothing,
}

impl TacticLabel {
    pub const ALL: [TacticLabel; 8] = [
        TacticLabel::SubstituteGoal,
        TacticLabel::SubstitutePlatform,
        TacticLabel::PreventObstacle,
        TacticLabel::ReduceObstacle,
        TacticLabel::WeakenGoal,
        TacticLabel::RestoreGoal,
        TacticLabel::MitigateObstacle,
        TacticLabel::DoNothing,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TacticLabel::SubstituteGoal => "substitute_goal",
            TacticLabel::SubstitutePlatform => "substitute_platform",
            TacticLabel::PreventObstacle => "prevent_obstacle",
            TacticLabel::ReduceObstacle => "reduce_obstacle",
            TacticLabel::WeakenGoal => "weaken_goal",
            TacticLabel::RestoreGoal => "restore_goal",
            TacticLabel::MitigateObstacle => "mitigate_obstacle",
            TacticLabel::DoNothing => "do_nothing",
        }
    }
}

impl fmt::Display for TacticLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionKind {
    Operationalisation,
    Tactic(TacticLabel),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionNode {
    pub id: String,
    pub name: String,
    pub kind: DecisionKind,
}

/// Impact of an alternative on a goal: a linguistic label or an explicit
/// fuzzy quadruple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Contribution {
    Level(LinguisticLevel),
    Explicit(FuzzyNumber),
}

impl<'de> Deserialize<'de> for Contribution {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct Visitor;

        impl<'de> serde::de::Visitor<'de> for Visitor {
            type Value = Contribution;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a linguistic label (VL, L, M, H, VH) or an [a, b, c, d] quadruple")
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Contribution, E> {
                v.parse().map(Contribution::Level).map_err(E::custom)
            }

            fn visit_seq<A: serde::de::SeqAccess<'de>>(self, seq: A) -> Result<Contribution, A::Error> {
                let params = <[f64; 4]>::deserialize(serde::de::value::SeqAccessDeserializer::new(seq))?;
                FuzzyNumber::try_from(params)
                    .map(Contribution::Explicit)
                    .map_err(serde::de::Error::custom)
            }
        }

        deserializer.deserialize_any(Visitor)
    }
}

impl Contribution {
    pub fn to_fuzzy(&self, scale: &LinguisticScale) -> FuzzyNumber {
        match self {
            Contribution::Level(level) => scale.fuzzy(*level),
            Contribution::Explicit(f) => *f,
        }
    }

    pub fn level(&self) -> Option<LinguisticLevel> {
        match self {
            Contribution::Level(level) => Some(*level),
            Contribution::Explicit(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlternativeNode {
    pub id: String,
    pub name: String,
    pub decision: String,
    pub contributions: BTreeMap<String, Contribution>,
    pub crisp: BTreeMap<String, f64>,
    pub cost: Option<FuzzyNumber>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Refines,
    Obstructs,
    Operationalises,
    Resolves,
    Implements,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Refines => "refines",
            EdgeKind::Obstructs => "obstructs",
            EdgeKind::Operationalises => "operationalises",
            EdgeKind::Resolves => "resolves",
            EdgeKind::Implements => "implements",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub kind: EdgeKind,
    pub from: String,
    pub to: String,
}

impl Edge {
    pub fn new(kind: EdgeKind, from: impl Into<String>, to: impl Into<String>) -> Self {
        Edge {
            kind,
            from: from.into(),
            to: to.into(),
        }
    }
}

/// The five element kinds of the goal notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    Root,
    Goal,
    Obstacle,
    Decision,
    Alternative,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Root => "root",
            NodeKind::Goal => "goal",
            NodeKind::Obstacle => "obstacle",
            NodeKind::Decision => "decision",
            NodeKind::Alternative => "alternative",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GoalModelError {
    #[error("obstacle `{0}` has no likelihood/consequence assessment")]
    IncompleteAssessment(String),
    #[error("graph is not well-formed: {}", join_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
}

fn join_diagnostics(diags: &[Diagnostic]) -> String {
    diags.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// One well-formedness violation found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    DuplicateId { id: String },
    DanglingReference { edge: EdgeKind, from: String, to: String, missing: String },
    EdgeEndpointKind { edge: EdgeKind, from: String, to: String },
    RefinementCycle { path: Vec<String> },
    UnknownOwner { alternative: String, decision: String },
    OwnerMismatch { alternative: String, decision: String },
    WeightOutOfRange { goal: String, weight: u32 },
    UnknownContributionGoal { alternative: String, goal: String },
    NonFiniteValue { node: String, field: String },
}

impl Diagnostic {
    /// The node the problem is reported against.
    pub fn subject(&self) -> &str {
        match self {
            Diagnostic::DuplicateId { id } => id,
            Diagnostic::DanglingReference { from, .. } | Diagnostic::EdgeEndpointKind { from, .. } => from,
            Diagnostic::RefinementCycle { path } => path.first().map(String::as_str).unwrap_or(""),
            Diagnostic::UnknownOwner { alternative, .. }
            | Diagnostic::OwnerMismatch { alternative, .. }
            | Diagnostic::UnknownContributionGoal { alternative, .. } => alternative,
            Diagnostic::WeightOutOfRange { goal, .. } => goal,
            Diagnostic::NonFiniteValue { node, .. } => node,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::DuplicateId { id } => write!(f, "duplicate id `{id}`"),
            Diagnostic::DanglingReference { edge, from, to, missing } => {
                write!(f, "{} edge {from} -> {to} references unknown node `{missing}`", edge.as_str())
            }
            Diagnostic::EdgeEndpointKind { edge, from, to } => {
                write!(f, "{} edge {from} -> {to} connects the wrong kinds of node", edge.as_str())
            }
            Diagnostic::RefinementCycle { path } => {
                write!(f, "refinement cycle {}", path.join(" -> "))
            }
            Diagnostic::UnknownOwner { alternative, decision } => {
                write!(f, "alternative `{alternative}` belongs to unknown decision `{decision}`")
            }
            Diagnostic::OwnerMismatch { alternative, decision } => write!(
                f,
                "alternative `{alternative}` is owned by `{decision}` but needs exactly one implements edge to it"
            ),
            Diagnostic::WeightOutOfRange { goal, weight } => {
                write!(f, "goal `{goal}` has weight {weight}, expected 1..=10")
            }
            Diagnostic::UnknownContributionGoal { alternative, goal } => {
                write!(f, "alternative `{alternative}` contributes to unknown goal `{goal}`")
            }
            Diagnostic::NonFiniteValue { node, field } => {
                write!(f, "`{node}` has a non-finite {field}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoalModelGraph {
    pub root: RootGoal,
    pub goals: Vec<GoalNode>,
    pub obstacles: Vec<ObstacleNode>,
    pub decisions: Vec<DecisionNode>,
    pub alternatives: Vec<AlternativeNode>,
    pub edges: Vec<Edge>,
}

impl GoalModelGraph {
    pub fn new(root: RootGoal) -> Self {
        GoalModelGraph {
            root,
            goals: Vec::new(),
            obstacles: Vec::new(),
            decisions: Vec::new(),
            alternatives: Vec::new(),
            edges: Vec::new(),
        }
    }

    /// Sorts nodes by natural id order and edges by (kind, from, to),
    /// dropping duplicate edges. Equal models compare equal afterwards.
    pub fn canonicalize(&mut self) {
        self.goals.sort_by(|a, b| natural_cmp(&a.id, &b.id));
        self.obstacles.sort_by(|a, b| natural_cmp(&a.id, &b.id));
        self.decisions.sort_by(|a, b| natural_cmp(&a.id, &b.id));
        self.alternatives.sort_by(|a, b| natural_cmp(&a.id, &b.id));
        self.edges.sort_by(|a, b| {
            a.kind
                .cmp(&b.kind)
                .then_with(|| natural_cmp(&a.from, &b.from))
                .then_with(|| natural_cmp(&a.to, &b.to))
        });
        self.edges.dedup();
    }

    pub fn goal(&self, id: &str) -> Option<&GoalNode> {
        self.goals.iter().find(|g| g.id == id)
    }

    pub fn goal_mut(&mut self, id: &str) -> Option<&mut GoalNode> {
        self.goals.iter_mut().find(|g| g.id == id)
    }

    pub fn obstacle(&self, id: &str) -> Option<&ObstacleNode> {
        self.obstacles.iter().find(|o| o.id == id)
    }

    pub fn obstacle_mut(&mut self, id: &str) -> Option<&mut ObstacleNode> {
        self.obstacles.iter_mut().find(|o| o.id == id)
    }

    pub fn decision(&self, id: &str) -> Option<&DecisionNode> {
        self.decisions.iter().find(|d| d.id == id)
    }

    pub fn alternative(&self, id: &str) -> Option<&AlternativeNode> {
        self.alternatives.iter().find(|a| a.id == id)
    }

    /// Alternatives owned by `decision`, in natural id order.
    pub fn alternatives_of(&self, decision: &str) -> Vec<&AlternativeNode> {
        let mut alts: Vec<_> = self.alternatives.iter().filter(|a| a.decision == decision).collect();
        alts.sort_by(|a, b| natural_cmp(&a.id, &b.id));
        alts
    }

    pub fn node_kind(&self, id: &str) -> Option<NodeKind> {
        if self.root.id == id {
            Some(NodeKind::Root)
        } else if self.goal(id).is_some() {
            Some(NodeKind::Goal)
        } else if self.obstacle(id).is_some() {
            Some(NodeKind::Obstacle)
        } else if self.decision(id).is_some() {
            Some(NodeKind::Decision)
        } else if self.alternative(id).is_some() {
            Some(NodeKind::Alternative)
        } else {
            None
        }
    }

    pub fn edges_of_kind(&self, kind: EdgeKind) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.kind == kind)
    }

    /// Goals obstructed by `obstacle`, in natural id order.
    pub fn obstructed_by(&self, obstacle: &str) -> Vec<&str> {
        let mut targets: Vec<&str> = self
            .edges_of_kind(EdgeKind::Obstructs)
            .filter(|e| e.from == obstacle)
            .map(|e| e.to.as_str())
            .collect();
        targets.sort_by(|a, b| natural_cmp(a, b));
        targets
    }

    pub fn has_edge(&self, kind: EdgeKind, from: &str, to: &str) -> bool {
        self.edges.iter().any(|e| e.kind == kind && e.from == from && e.to == to)
    }

    /// Every id in the graph, root first.
    pub fn all_ids(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.root.id.as_str())
            .chain(self.goals.iter().map(|g| g.id.as_str()))
            .chain(self.obstacles.iter().map(|o| o.id.as_str()))
            .chain(self.decisions.iter().map(|d| d.id.as_str()))
            .chain(self.alternatives.iter().map(|a| a.id.as_str()))
    }

    /// Goal weights `P_g` keyed by goal id.
    pub fn weights(&self) -> BTreeMap<String, u32> {
        self.goals.iter().map(|g| (g.id.clone(), g.weight)).collect()
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        validate(self)
    }
}

/// Returns every invariant violation; an empty list means well-formed.
pub fn validate(graph: &GoalModelGraph) -> Vec<Diagnostic> {
    let mut diags = Vec::new();

    let mut kinds: HashMap<&str, NodeKind> = HashMap::new();
    let mut seen_dup = BTreeSet::new();
    let tagged = std::iter::once((graph.root.id.as_str(), NodeKind::Root))
        .chain(graph.goals.iter().map(|g| (g.id.as_str(), NodeKind::Goal)))
        .chain(graph.obstacles.iter().map(|o| (o.id.as_str(), NodeKind::Obstacle)))
        .chain(graph.decisions.iter().map(|d| (d.id.as_str(), NodeKind::Decision)))
        .chain(graph.alternatives.iter().map(|a| (a.id.as_str(), NodeKind::Alternative)));
    for (id, kind) in tagged {
        if kinds.insert(id, kind).is_some() && seen_dup.insert(id) {
            diags.push(Diagnostic::DuplicateId { id: id.to_string() });
        }
    }

    for goal in &graph.goals {
        if !WEIGHT_RANGE.contains(&goal.weight) {
            diags.push(Diagnostic::WeightOutOfRange {
                goal: goal.id.clone(),
                weight: goal.weight,
            });
        }
        if let Some(t) = &goal.threshold {
            if !t.score.is_finite() || t.quality.as_ref().is_some_and(|q| !q.value.is_finite()) {
                diags.push(Diagnostic::NonFiniteValue {
                    node: goal.id.clone(),
                    field: "threshold".into(),
                });
            }
        }
    }

    for edge in &graph.edges {
        let from = kinds.get(edge.from.as_str()).copied();
        let to = kinds.get(edge.to.as_str()).copied();
        let (Some(from), Some(to)) = (from, to) else {
            let missing = if from.is_none() { &edge.from } else { &edge.to };
            diags.push(Diagnostic::DanglingReference {
                edge: edge.kind,
                from: edge.from.clone(),
                to: edge.to.clone(),
                missing: missing.clone(),
            });
            continue;
        };
        use NodeKind::*;
        let ok = match edge.kind {
            EdgeKind::Refines => matches!((from, to), (Goal, Goal | Root) | (Obstacle, Obstacle)),
            EdgeKind::Obstructs => from == Obstacle && matches!(to, Goal | Root),
            EdgeKind::Operationalises => from == Decision && matches!(to, Goal | Root),
            EdgeKind::Resolves => from == Decision && to == Obstacle,
            EdgeKind::Implements => from == Alternative && to == Decision,
        };
        if !ok {
            diags.push(Diagnostic::EdgeEndpointKind {
                edge: edge.kind,
                from: edge.from.clone(),
                to: edge.to.clone(),
            });
        }
    }

    for alt in &graph.alternatives {
        if kinds.get(alt.decision.as_str()) != Some(&NodeKind::Decision) {
            diags.push(Diagnostic::UnknownOwner {
                alternative: alt.id.clone(),
                decision: alt.decision.clone(),
            });
        } else {
            let implements: Vec<&Edge> = graph
                .edges_of_kind(EdgeKind::Implements)
                .filter(|e| e.from == alt.id)
                .collect();
            if implements.len() != 1 || implements[0].to != alt.decision {
                diags.push(Diagnostic::OwnerMismatch {
                    alternative: alt.id.clone(),
                    decision: alt.decision.clone(),
                });
            }
        }
        for goal in alt.contributions.keys().chain(alt.crisp.keys()) {
            if kinds.get(goal.as_str()) != Some(&NodeKind::Goal) {
                let diag = Diagnostic::UnknownContributionGoal {
                    alternative: alt.id.clone(),
                    goal: goal.clone(),
                };
                if !diags.contains(&diag) {
                    diags.push(diag);
                }
            }
        }
        if alt.crisp.values().any(|v| !v.is_finite()) {
            diags.push(Diagnostic::NonFiniteValue {
                node: alt.id.clone(),
                field: "crisp contribution".into(),
            });
        }
    }

    diags.extend(refinement_cycles(graph));
    diags
}

fn refinement_cycles(graph: &GoalModelGraph) -> Vec<Diagnostic> {
    let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for e in graph.edges_of_kind(EdgeKind::Refines) {
        adj.entry(e.from.as_str()).or_default().push(e.to.as_str());
    }
    for targets in adj.values_mut() {
        targets.sort_by(|a, b| natural_cmp(a, b));
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    let mut marks: HashMap<&str, Mark> = HashMap::new();
    let mut cycles = Vec::new();

    fn visit<'a>(
        node: &'a str,
        adj: &BTreeMap<&'a str, Vec<&'a str>>,
        marks: &mut HashMap<&'a str, Mark>,
        stack: &mut Vec<&'a str>,
        cycles: &mut Vec<Diagnostic>,
    ) {
        marks.insert(node, Mark::Active);
        stack.push(node);
        for &next in adj.get(node).map(Vec::as_slice).unwrap_or(&[]) {
            match marks.get(next) {
                Some(Mark::Active) => {
                    let start = stack.iter().position(|&n| n == next).unwrap_or(0);
                    let mut path: Vec<String> = stack[start..].iter().map(|s| s.to_string()).collect();
                    path.push(next.to_string());
                    cycles.push(Diagnostic::RefinementCycle { path });
                }
                Some(Mark::Done) => {}
                None => visit(next, adj, marks, stack, cycles),
            }
        }
        stack.pop();
        marks.insert(node, Mark::Done);
    }

    let starts: Vec<&str> = adj.keys().copied().collect();
    for start in starts {
        if !marks.contains_key(start) {
            visit(start, &adj, &mut marks, &mut Vec::new(), &mut cycles);
        }
    }
    cycles
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    pub fn goal(id: &str) -> GoalNode {
        GoalNode {
            id: id.into(),
            name: format!("goal {id}"),
            category: "performance".into(),
            direction: Direction::Maximize,
            weight: 1,
            spec: None,
            threshold: None,
            responsible: None,
        }
    }

    pub fn obstacle(id: &str) -> ObstacleNode {
        ObstacleNode {
            id: id.into(),
            name: format!("obstacle {id}"),
            likelihood: Some(Likelihood::Possible),
            consequence: Some(Consequence::Moderate),
            status: ResolutionStatus::Open,
        }
    }

    pub fn alternative(id: &str, decision: &str) -> AlternativeNode {
        AlternativeNode {
            id: id.into(),
            name: format!("alternative {id}"),
            decision: decision.into(),
            contributions: BTreeMap::new(),
            crisp: BTreeMap::new(),
            cost: None,
        }
    }

    pub fn root_only() -> GoalModelGraph {
        GoalModelGraph::new(RootGoal {
            id: "g0".into(),
            name: "root".into(),
        })
    }

    /// Root, two goals, one obstacle, one decision with two alternatives.
    pub fn small() -> GoalModelGraph {
        let mut g = root_only();
        g.goals = vec![goal("g1"), goal("g2")];
        g.obstacles = vec![obstacle("o1")];
        g.decisions = vec![DecisionNode {
            id: "d1".into(),
            name: "decision".into(),
            kind: DecisionKind::Operationalisation,
        }];
        g.alternatives = vec![alternative("a1", "d1"), alternative("a2", "d1")];
        g.edges = vec![
            Edge::new(EdgeKind::Refines, "g1", "g0"),
            Edge::new(EdgeKind::Refines, "g2", "g0"),
            Edge::new(EdgeKind::Obstructs, "o1", "g2"),
            Edge::new(EdgeKind::Operationalises, "d1", "g1"),
            Edge::new(EdgeKind::Implements, "a1", "d1"),
            Edge::new(EdgeKind::Implements, "a2", "d1"),
        ];
        g.canonicalize();
        g
    }
}
