//! JSON model documents: parsing with positions, canonical writing, and the
//! bundled example models.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decision_space::{Backend, ConstraintSet, SolutionSpace, SpaceError};
use crate::fuzzy::{FuzzyNumber, LinguisticScale, DEFAULT_UNIVERSE_HI};
use crate::goal_model::{
    validate, AlternativeNode, Consequence, Contribution, DecisionKind, DecisionNode, Diagnostic, Direction, Edge,
    EdgeKind, GoalModelGraph, GoalNode, GoalSpec, GoalThreshold, Likelihood, ObstacleNode, ResolutionStatus, RootGoal,
};
use crate::ranking::Query;

pub const FORMAT_VERSION: u32 = 1;

pub const EXEMPLAR_JSON: &str = include_str!("../../fixtures/exemplar.json");
pub const DIVERGENCE_JSON: &str = include_str!("../../fixtures/divergence.json");

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unsupported format_version {0} (this build reads version {FORMAT_VERSION})")]
    UnsupportedVersion(u32),
    #[error("invalid settings: {0}")]
    Settings(String),
    #[error("{}", format_located(.0))]
    Invalid(Vec<Located>),
}

/// A diagnostic with the position of the offending node's `id`, when found.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Located {
    pub diagnostic: Diagnostic,
    pub line: Option<usize>,
    pub column: Option<usize>,
}

impl fmt::Display for Located {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "line {l}, column {c}: {}", self.diagnostic),
            _ => write!(f, "{}", self.diagnostic),
        }
    }
}

fn format_located(items: &[Located]) -> String {
    let mut s = format!("model has {} problem(s)", items.len());
    for item in items {
        s.push_str("\n  ");
        s.push_str(&item.to_string());
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    #[serde(default = "default_universe")]
    pub universe_hi: f64,
    #[serde(default = "default_k")]
    pub k: f64,
    #[serde(default)]
    pub backend: Backend,
    #[serde(default)]
    pub normalize: bool,
}

fn default_universe() -> f64 {
    DEFAULT_UNIVERSE_HI
}

fn default_k() -> f64 {
    1.0
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            universe_hi: DEFAULT_UNIVERSE_HI,
            k: 1.0,
            backend: Backend::FuzzySum,
            normalize: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoalEntry {
    pub id: String,
    pub name: String,
    pub category: String,
    pub direction: Direction,
    #[serde(default = "one")]
    pub weight: u32,
    #[serde(default)]
    pub refines: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<GoalSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<GoalThreshold>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub responsible: Option<String>,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleEntry {
    pub id: String,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub likelihood: Option<Likelihood>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub consequence: Option<Consequence>,
    #[serde(default = "open")]
    pub status: ResolutionStatus,
    #[serde(default)]
    pub obstructs: Vec<String>,
    #[serde(default)]
    pub refines: Vec<String>,
}

fn open() -> ResolutionStatus {
    ResolutionStatus::Open
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionEntry {
    pub id: String,
    pub name: String,
    pub kind: DecisionKind,
    #[serde(default)]
    pub operationalises: Vec<String>,
    #[serde(default)]
    pub resolves: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlternativeEntry {
    pub id: String,
    pub name: String,
    pub decision: String,
    #[serde(default)]
    pub contributions: BTreeMap<String, Contribution>,
    #[serde(default)]
    pub crisp: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<FuzzyNumber>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocumentConstraints {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost_budget: Option<f64>,
}

/// On-disk form of a model. Edges are stored on their source node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub format_version: u32,
    #[serde(default)]
    pub settings: Settings,
    pub root: RootGoal,
    #[serde(default)]
    pub goals: Vec<GoalEntry>,
    #[serde(default)]
    pub obstacles: Vec<ObstacleEntry>,
    #[serde(default)]
    pub decisions: Vec<DecisionEntry>,
    #[serde(default)]
    pub alternatives: Vec<AlternativeEntry>,
    #[serde(default)]
    pub constraints: DocumentConstraints,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// A validated model: the graph plus settings and the stored budget.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub graph: GoalModelGraph,
    pub settings: Settings,
    pub cost_budget: Option<f64>,
    pub notes: Vec<String>,
}

impl Model {
    /// Builds and validates a model. Diagnostics carry no positions.
    pub fn from_document(doc: ModelDocument) -> Result<Self, ModelError> {
        if doc.format_version != FORMAT_VERSION {
            return Err(ModelError::UnsupportedVersion(doc.format_version));
        }
        let s = doc.settings;
        LinguisticScale::new(s.universe_hi).map_err(|e| ModelError::Settings(e.to_string()))?;
        if !(s.k.is_finite() && s.k > 0.0) {
            return Err(ModelError::Settings(format!("k must be positive, got {}", s.k)));
        }
        if let Some(b) = doc.constraints.cost_budget {
            if !(b.is_finite() && b >= 0.0) {
                return Err(ModelError::Settings(format!("cost_budget must be non-negative, got {b}")));
            }
        }

        let mut graph = GoalModelGraph::new(doc.root);
        for g in doc.goals {
            for parent in &g.refines {
                graph.edges.push(Edge::new(EdgeKind::Refines, g.id.clone(), parent.clone()));
            }
            graph.goals.push(GoalNode {
                id: g.id,
                name: g.name,
                category: g.category,
                direction: g.direction,
                weight: g.weight,
                spec: g.spec,
                threshold: g.threshold,
                responsible: g.responsible,
            });
        }
        for o in doc.obstacles {
            for target in &o.obstructs {
                graph.edges.push(Edge::new(EdgeKind::Obstructs, o.id.clone(), target.clone()));
            }
            for parent in &o.refines {
                graph.edges.push(Edge::new(EdgeKind::Refines, o.id.clone(), parent.clone()));
            }
            graph.obstacles.push(ObstacleNode {
                id: o.id,
                name: o.name,
                likelihood: o.likelihood,
                consequence: o.consequence,
                status: o.status,
            });
        }
        for d in doc.decisions {
            for target in &d.operationalises {
                graph.edges.push(Edge::new(EdgeKind::Operationalises, d.id.clone(), target.clone()));
            }
            for target in &d.resolves {
                graph.edges.push(Edge::new(EdgeKind::Resolves, d.id.clone(), target.clone()));
            }
            graph.decisions.push(DecisionNode {
                id: d.id,
                name: d.name,
                kind: d.kind,
            });
        }
        for a in doc.alternatives {
            graph.edges.push(Edge::new(EdgeKind::Implements, a.id.clone(), a.decision.clone()));
            graph.alternatives.push(AlternativeNode {
                id: a.id,
                name: a.name,
                decision: a.decision,
                contributions: a.contributions,
                crisp: a.crisp,
                cost: a.cost,
            });
        }

        let diags = validate(&graph);
        if !diags.is_empty() {
            return Err(ModelError::Invalid(
                diags
                    .into_iter()
                    .map(|diagnostic| Located {
                        diagnostic,
                        line: None,
                        column: None,
                    })
                    .collect(),
            ));
        }
        graph.canonicalize();
        Ok(Model {
            graph,
            settings: s,
            cost_budget: doc.constraints.cost_budget,
            notes: doc.notes,
        })
    }

    /// Wraps an existing graph with default settings.
    pub fn from_graph(graph: GoalModelGraph) -> Result<Self, ModelError> {
        let doc = Model {
            graph,
            settings: Settings::default(),
            cost_budget: None,
            notes: Vec::new(),
        }
        .to_document();
        Model::from_document(doc)
    }

    pub fn to_document(&self) -> ModelDocument {
        let mut g = self.graph.clone();
        g.canonicalize();
        let targets = |kind: EdgeKind, from: &str| -> Vec<String> {
            g.edges
                .iter()
                .filter(|e| e.kind == kind && e.from == from)
                .map(|e| e.to.clone())
                .collect()
        };
        ModelDocument {
            format_version: FORMAT_VERSION,
            settings: self.settings,
            root: g.root.clone(),
            goals: g
                .goals
                .iter()
                .map(|n| GoalEntry {
                    id: n.id.clone(),
                    name: n.name.clone(),
                    category: n.category.clone(),
                    direction: n.direction,
                    weight: n.weight,
                    refines: targets(EdgeKind::Refines, &n.id),
                    spec: n.spec.clone(),
                    threshold: n.threshold.clone(),
                    responsible: n.responsible.clone(),
                })
                .collect(),
            obstacles: g
                .obstacles
                .iter()
                .map(|n| ObstacleEntry {
                    id: n.id.clone(),
                    name: n.name.clone(),
                    likelihood: n.likelihood,
                    consequence: n.consequence,
                    status: n.status,
                    obstructs: targets(EdgeKind::Obstructs, &n.id),
                    refines: targets(EdgeKind::Refines, &n.id),
                })
                .collect(),
            decisions: g
                .decisions
                .iter()
                .map(|n| DecisionEntry {
                    id: n.id.clone(),
                    name: n.name.clone(),
                    kind: n.kind,
                    operationalises: targets(EdgeKind::Operationalises, &n.id),
                    resolves: targets(EdgeKind::Resolves, &n.id),
                })
                .collect(),
            alternatives: g
                .alternatives
                .iter()
                .map(|n| AlternativeEntry {
                    id: n.id.clone(),
                    name: n.name.clone(),
                    decision: n.decision.clone(),
                    contributions: n.contributions.clone(),
                    crisp: n.crisp.clone(),
                    cost: n.cost,
                })
                .collect(),
            constraints: DocumentConstraints {
                cost_budget: self.cost_budget,
            },
            notes: self.notes.clone(),
        }
    }

    pub fn scale(&self) -> LinguisticScale {
        LinguisticScale::new(self.settings.universe_hi).expect("checked when the model was built")
    }

    pub fn space(&self) -> Result<SolutionSpace, SpaceError> {
        SolutionSpace::new(&self.graph, self.scale())
    }

    /// Thresholds recorded on goals plus the stored budget.
    pub fn constraints(&self) -> ConstraintSet {
        ConstraintSet {
            goal_thresholds: self
                .graph
                .goals
                .iter()
                .filter_map(|g| g.threshold.as_ref().map(|t| (g.id.clone(), t.score)))
                .collect(),
            cost_budget: self.cost_budget,
        }
    }

    /// Model weights and settings, without constraints.
    pub fn default_query(&self) -> Query {
        Query {
            weights: self
                .graph
                .goals
                .iter()
                .map(|g| (g.id.clone(), g.weight as f64))
                .collect(),
            constraints: ConstraintSet::default(),
            k: self.settings.k,
            backend: self.settings.backend,
            normalize: self.settings.normalize,
        }
    }
}

/// Parses and validates a model document. Syntax errors and unknown
/// references are reported with line and column.
pub fn parse_model(text: &str) -> Result<Model, ModelError> {
    let doc: ModelDocument = serde_json::from_str(text).map_err(|e| ModelError::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    Model::from_document(doc).map_err(|err| match err {
        ModelError::Invalid(items) => ModelError::Invalid(
            items
                .into_iter()
                .map(|mut item| {
                    if let Some((l, c)) = locate_id(text, item.diagnostic.subject()) {
                        item.line = Some(l);
                        item.column = Some(c);
                    }
                    item
                })
                .collect(),
        ),
        other => other,
    })
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// 1-based position of the first `"id": "<id>"` pair in `text`.
fn locate_id(text: &str, id: &str) -> Option<(usize, usize)> {
    let needle = serde_json::to_string(id).ok()?;
    let mut from = 0;
    while let Some(off) = text[from..].find(&needle) {
        let pos = from + off;
        let before = text[..pos].trim_end();
        if let Some(rest) = before.strip_suffix(':') {
            if rest.trim_end().ends_with("\"id\"") {
                let line = text[..pos].matches('\n').count() + 1;
                let line_start = text[..pos].rfind('\n').map(|i| i + 1).unwrap_or(0);
                return Some((line, text[line_start..pos].chars().count() + 1));
            }
        }
        from = pos + needle.len();
    }
    None
}

/// Canonical serialization: sorted keys, nodes in natural id order, two-space
/// indentation and a trailing newline. Equal models give equal bytes.
pub fn write_model(model: &Model) -> String {
    let value = serde_json::to_value(model.to_document()).expect("model documents always serialize");
    let mut out = serde_json::to_string_pretty(&value).expect("values always serialize");
    out.push('\n');
    out
}

/// Deterministic placeholder cost for an alternative id: a base in
/// `[1000, 4000]` chosen by FNV-1a, spread as `(0.8b, b, b, 1.25b)`.
pub fn synthetic_cost(id: &str) -> FuzzyNumber {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in id.bytes() {
        h ^= byte as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let base = 1000.0 + (h % 301) as f64 * 10.0;
    FuzzyNumber::triangular(0.8 * base, base, 1.25 * base).expect("ordered by construction")
}

pub fn exemplar() -> Model {
    parse_model(EXEMPLAR_JSON).expect("bundled exemplar is valid")
}

pub fn divergence_instance() -> Model {
    parse_model(DIVERGENCE_JSON).expect("bundled divergence model is valid")
}
