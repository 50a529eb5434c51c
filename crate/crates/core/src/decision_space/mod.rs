//! The solution space: every way of picking one alternative per decision,
//! with per-goal and total scoring, fuzzy cost, and constraint checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fuzzy::{Antecedent, FuzzyError, FuzzyNumber, LinguisticScale, MamdaniOutput, Membership};
use crate::goal_model::{validate, Diagnostic, Direction, GoalModelGraph, WEIGHT_RANGE};
use crate::ids::natural_cmp;

/// Goal priorities keyed by goal id.
pub type Weights = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpaceError {
    #[error("model is invalid ({} problem(s))", .0.len())]
    InvalidGraph(Vec<Diagnostic>),
    #[error("unknown goal `{0}`")]
    UnknownGoal(String),
    #[error("no weight given for goal `{0}`")]
    MissingWeight(String),
    #[error("weight {weight} for goal `{goal}` is outside [1, 10]")]
    WeightOutOfRange { goal: String, weight: f64 },
    #[error("alternative `{0}` has no cost")]
    MissingCost(String),
    #[error("alternative `{alternative}` has a fuzzy contribution to `{goal}` but no crisp value")]
    MissingCrisp { goal: String, alternative: String },
    #[error("cost budget must be a non-negative number, got {0}")]
    InvalidBudget(f64),
    #[error("threshold for goal `{goal}` must be finite, got {value}")]
    InvalidThreshold { goal: String, value: f64 },
    #[error("architecture index {index} is outside a space of {size}")]
    IndexOutOfRange { index: u64, size: u64 },
    #[error("solution space size overflows 64 bits")]
    TooLarge,
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    /// Component-wise weighted sum of contributions.
    #[default]
    FuzzySum,
    /// Min/max rule inference over linguistic labels.
    Mamdani,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::FuzzySum => "fuzzy_sum",
            Backend::Mamdani => "mamdani",
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fuzzy_sum" => Ok(Backend::FuzzySum),
            "mamdani" => Ok(Backend::Mamdani),
            other => Err(format!("unknown backend `{other}` (expected fuzzy_sum or mamdani)")),
        }
    }
}

/// Per-goal thresholds on the score scale and an optional cost budget.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSet {
    #[serde(default)]
    pub goal_thresholds: BTreeMap<String, f64>,
    #[serde(default)]
    pub cost_budget: Option<f64>,
}

impl ConstraintSet {
    pub fn is_empty(&self) -> bool {
        self.goal_thresholds.is_empty() && self.cost_budget.is_none()
    }

    pub fn with_budget(mut self, budget: f64) -> Self {
        self.cost_budget = Some(budget);
        self
    }
}

/// Contribution of each alternative to each goal, as fuzzy numbers (labels
/// resolved on the scale), rule-base antecedents, and optional crisp values.
#[derive(Debug, Clone, PartialEq)]
pub struct ContributionMatrix {
    entries: BTreeMap<(String, String), FuzzyNumber>,
    antecedents: BTreeMap<(String, String), Antecedent>,
    crisp: BTreeMap<(String, String), f64>,
}

impl ContributionMatrix {
    pub fn from_graph(graph: &GoalModelGraph, scale: &LinguisticScale) -> Self {
        let mut entries = BTreeMap::new();
        let mut antecedents = BTreeMap::new();
        let mut crisp = BTreeMap::new();
        for alt in &graph.alternatives {
            for (goal, con) in &alt.contributions {
                let key = (goal.clone(), alt.id.clone());
                let fuzzy = con.to_fuzzy(scale);
                let ant = match con.level() {
                    Some(level) => Antecedent::at_peak(level, scale),
                    None => Antecedent::from_crisp(fuzzy.centroid(), scale),
                };
                entries.insert(key.clone(), fuzzy);
                antecedents.insert(key, ant);
            }
            for (goal, value) in &alt.crisp {
                crisp.insert((goal.clone(), alt.id.clone()), *value);
            }
        }
        ContributionMatrix {
            entries,
            antecedents,
            crisp,
        }
    }

    /// `con(g, a)`, or `None` when the model gives no entry.
    pub fn get(&self, goal: &str, alternative: &str) -> Option<FuzzyNumber> {
        self.entries.get(&(goal.to_string(), alternative.to_string())).copied()
    }

    pub fn antecedent(&self, goal: &str, alternative: &str) -> Option<Antecedent> {
        self.antecedents
            .get(&(goal.to_string(), alternative.to_string()))
            .copied()
    }

    pub fn crisp(&self, goal: &str, alternative: &str) -> Option<f64> {
        self.crisp.get(&(goal.to_string(), alternative.to_string())).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One point of the solution space. `choices[i]` indexes into the
/// alternatives of the space's `i`-th decision.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Architecture {
    pub index: u64,
    pub choices: Vec<usize>,
}

/// A goal or total score: a fuzzy number from the sum backend, or an
/// inferred fuzzy set from the rule backend.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Score {
    Fuzzy(FuzzyNumber),
    Inferred(MamdaniOutput),
}

impl Score {
    pub fn centroid(&self) -> f64 {
        match self {
            Score::Fuzzy(f) => f.centroid(),
            Score::Inferred(m) => m.centroid(),
        }
    }

    pub fn as_fuzzy(&self) -> Option<FuzzyNumber> {
        match self {
            Score::Fuzzy(f) => Some(*f),
            Score::Inferred(_) => None,
        }
    }
}

impl Membership for Score {
    fn membership(&self, x: f64) -> f64 {
        match self {
            Score::Fuzzy(f) => f.membership(x),
            Score::Inferred(m) => m.membership(x),
        }
    }

    fn support(&self) -> Option<(f64, f64)> {
        match self {
            Score::Fuzzy(f) => Membership::support(f),
            Score::Inferred(m) => m.support(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "goal", rename_all = "snake_case")]
pub enum ConstraintRef {
    Goal(String),
    Cost,
}

impl std::fmt::Display for ConstraintRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConstraintRef::Goal(g) => write!(f, "goal {g}"),
            ConstraintRef::Cost => f.write_str("cost"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub constraint: ConstraintRef,
    pub direction: Direction,
    pub threshold: f64,
    /// Centroid of the constrained quantity.
    pub value: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Feasibility {
    pub verdicts: Vec<Verdict>,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredArchitecture {
    pub architecture: Architecture,
    /// Aligned with [`SolutionSpace::goals`].
    pub goal_scores: Vec<Score>,
    pub total: Score,
    /// `None` when some selected alternative carries no cost.
    pub cost: Option<FuzzyNumber>,
    pub feasibility: Feasibility,
}

#[derive(Debug, Clone, PartialEq)]
struct Choice {
    id: String,
    contributions: Vec<Option<FuzzyNumber>>,
    antecedents: Vec<Option<Antecedent>>,
    crisp: Vec<Option<f64>>,
    cost: Option<FuzzyNumber>,
}

#[derive(Debug, Clone, PartialEq)]
struct GoalInfo {
    id: String,
    direction: Direction,
    model_weight: u32,
}

/// Decisions with at least one alternative, in natural id order, each with
/// its alternatives in natural id order. Architectures are numbered in
/// mixed radix with the last decision varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSpace {
    goals: Vec<GoalInfo>,
    decisions: Vec<String>,
    choices: Vec<Vec<Choice>>,
    strides: Vec<u64>,
    size: u64,
    scale: LinguisticScale,
}

impl SolutionSpace {
    pub fn new(graph: &GoalModelGraph, scale: LinguisticScale) -> Result<Self, SpaceError> {
        let diags = validate(graph);
        if !diags.is_empty() {
            return Err(SpaceError::InvalidGraph(diags));
        }
        let matrix = ContributionMatrix::from_graph(graph, &scale);
        Self::with_matrix(graph, &matrix, scale)
    }

    pub fn with_matrix(
        graph: &GoalModelGraph,
        matrix: &ContributionMatrix,
        scale: LinguisticScale,
    ) -> Result<Self, SpaceError> {
        let mut goals: Vec<GoalInfo> = graph
            .goals
            .iter()
            .map(|g| GoalInfo {
                id: g.id.clone(),
                direction: g.direction,
                model_weight: g.weight,
            })
            .collect();
        goals.sort_by(|a, b| natural_cmp(&a.id, &b.id));

        let mut decision_ids: Vec<&str> = graph.decisions.iter().map(|d| d.id.as_str()).collect();
        decision_ids.sort_by(|a, b| natural_cmp(a, b));

        let mut decisions = Vec::new();
        let mut choices = Vec::new();
        for d in decision_ids {
            let alts = graph.alternatives_of(d);
            if alts.is_empty() {
                continue;
            }
            decisions.push(d.to_string());
            choices.push(
                alts.iter()
                    .map(|a| Choice {
                        id: a.id.clone(),
                        contributions: goals.iter().map(|g| matrix.get(&g.id, &a.id)).collect(),
                        antecedents: goals.iter().map(|g| matrix.antecedent(&g.id, &a.id)).collect(),
                        crisp: goals.iter().map(|g| matrix.crisp(&g.id, &a.id)).collect(),
                        cost: a.cost,
                    })
                    .collect::<Vec<_>>(),
            );
        }

        let mut strides = vec![1u64; choices.len()];
        let mut size = 1u64;
        for i in (0..choices.len()).rev() {
            strides[i] = size;
            size = size.checked_mul(choices[i].len() as u64).ok_or(SpaceError::TooLarge)?;
        }
        Ok(SolutionSpace {
            goals,
            decisions,
            choices,
            strides,
            size,
            scale,
        })
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn scale(&self) -> LinguisticScale {
        self.scale
    }

    /// Goal ids in scoring order.
    pub fn goals(&self) -> impl ExactSizeIterator<Item = &str> {
        self.goals.iter().map(|g| g.id.as_str())
    }

    pub fn goal_index(&self, id: &str) -> Option<usize> {
        self.goals.iter().position(|g| g.id == id)
    }

    pub fn direction(&self, goal: usize) -> Direction {
        self.goals[goal].direction
    }

    /// Decisions that take part in selections, in enumeration order.
    pub fn decisions(&self) -> &[String] {
        &self.decisions
    }

    pub fn alternatives(&self, decision: usize) -> impl ExactSizeIterator<Item = &str> {
        self.choices[decision].iter().map(|c| c.id.as_str())
    }

    pub fn model_weights(&self) -> Weights {
        self.goals
            .iter()
            .map(|g| (g.id.clone(), g.model_weight as f64))
            .collect()
    }

    pub fn architecture_at(&self, index: u64) -> Result<Architecture, SpaceError> {
        if index >= self.size {
            return Err(SpaceError::IndexOutOfRange {
                index,
                size: self.size,
            });
        }
        let choices = self
            .strides
            .iter()
            .zip(&self.choices)
            .map(|(&stride, alts)| ((index / stride) % alts.len() as u64) as usize)
            .collect();
        Ok(Architecture { index, choices })
    }

    pub fn index_of(&self, choices: &[usize]) -> u64 {
        choices.iter().zip(&self.strides).map(|(&c, &s)| c as u64 * s).sum()
    }

    /// All architectures in index order. Lazy, so callers may stop early.
    pub fn enumerate(&self) -> impl ExactSizeIterator<Item = Architecture> + '_ {
        (0..self.size as usize).map(move |i| self.architecture_at(i as u64).expect("index below size"))
    }

    /// `(decision, alternative)` pairs of an architecture.
    pub fn selection<'a>(&'a self, arch: &Architecture) -> Vec<(&'a str, &'a str)> {
        self.decisions
            .iter()
            .zip(&arch.choices)
            .enumerate()
            .map(|(d, (id, &c))| (id.as_str(), self.choices[d][c].id.as_str()))
            .collect()
    }

    pub fn selection_map(&self, arch: &Architecture) -> BTreeMap<String, String> {
        self.selection(arch)
            .into_iter()
            .map(|(d, a)| (d.to_string(), a.to_string()))
            .collect()
    }

    fn selected<'a>(&'a self, arch: &'a Architecture) -> impl Iterator<Item = &'a Choice> + 'a {
        self.choices.iter().zip(&arch.choices).map(|(alts, &c)| &alts[c])
    }

    /// Checks a weight map against the goals and returns it aligned with
    /// [`SolutionSpace::goals`].
    pub fn weight_vector(&self, weights: &Weights) -> Result<Vec<f64>, SpaceError> {
        if let Some(unknown) = weights.keys().find(|k| self.goal_index(k).is_none()) {
            return Err(SpaceError::UnknownGoal(unknown.clone()));
        }
        let range = *WEIGHT_RANGE.start() as f64..=*WEIGHT_RANGE.end() as f64;
        self.goals
            .iter()
            .map(|g| {
                let w = *weights.get(&g.id).ok_or_else(|| SpaceError::MissingWeight(g.id.clone()))?;
                if !range.contains(&w) {
                    return Err(SpaceError::WeightOutOfRange {
                        goal: g.id.clone(),
                        weight: w,
                    });
                }
                Ok(w)
            })
            .collect()
    }

    /// Score of one goal. With `normalize`, the fuzzy sum is divided by the
    /// number of selected alternatives that contribute to the goal.
    pub fn goal_score(
        &self,
        arch: &Architecture,
        goal: &str,
        backend: Backend,
        normalize: bool,
    ) -> Result<Score, SpaceError> {
        let g = self.goal_index(goal).ok_or_else(|| SpaceError::UnknownGoal(goal.to_string()))?;
        self.goal_score_at(arch, g, backend, normalize)
    }

    fn goal_score_at(&self, arch: &Architecture, g: usize, backend: Backend, normalize: bool) -> Result<Score, SpaceError> {
        match backend {
            Backend::FuzzySum => {
                let mut sum = FuzzyNumber::ZERO;
                let mut n = 0usize;
                for con in self.selected(arch).filter_map(|c| c.contributions[g]) {
                    sum = sum + con;
                    n += 1;
                }
                if normalize && n > 1 {
                    sum = sum.scale(1.0 / n as f64)?;
                }
                Ok(Score::Fuzzy(sum))
            }
            Backend::Mamdani => {
                let ants: Vec<Antecedent> = self.selected(arch).filter_map(|c| c.antecedents[g]).collect();
                if ants.is_empty() {
                    return Ok(Score::Inferred(MamdaniOutput::empty(self.scale)));
                }
                Ok(Score::Inferred(MamdaniOutput::infer(&ants, self.scale)?))
            }
        }
    }

    /// Weighted total over all goals. `weights` must be aligned with
    /// [`SolutionSpace::goals`] (see [`SolutionSpace::weight_vector`]).
    pub fn total_score(&self, goal_scores: &[Score], weights: &[f64]) -> Result<Score, SpaceError> {
        if let Some(Score::Inferred(_)) = goal_scores.first() {
            let w_max = weights.iter().copied().fold(0.0, f64::max);
            let ants: Vec<Antecedent> = goal_scores
                .iter()
                .zip(weights)
                .filter_map(|(s, &w)| match s {
                    Score::Inferred(m) if !m.is_empty() => {
                        Some(Antecedent::from_crisp(m.centroid(), &self.scale).with_importance(w / w_max))
                    }
                    _ => None,
                })
                .collect();
            if ants.is_empty() {
                return Ok(Score::Inferred(MamdaniOutput::empty(self.scale)));
            }
            return Ok(Score::Inferred(MamdaniOutput::infer(&ants, self.scale)?));
        }
        let mut total = FuzzyNumber::ZERO;
        for (s, &w) in goal_scores.iter().zip(weights) {
            let f = s.as_fuzzy().expect("backends are not mixed");
            total = total + f.scale(w)?;
        }
        Ok(Score::Fuzzy(total))
    }

    /// Fuzzy sum of the selected alternatives' costs.
    pub fn cost_of(&self, arch: &Architecture) -> Result<FuzzyNumber, SpaceError> {
        let mut total = FuzzyNumber::ZERO;
        for c in self.selected(arch) {
            total = total + c.cost.ok_or_else(|| SpaceError::MissingCost(c.id.clone()))?;
        }
        Ok(total)
    }

    /// `Σ_g P_g Σ_a crisp(g, a)`. An alternative with neither a fuzzy nor a
    /// crisp entry for a goal counts as zero there.
    pub fn crisp_score(&self, arch: &Architecture, weights: &[f64]) -> Result<f64, SpaceError> {
        let mut total = 0.0;
        for (g, &w) in weights.iter().enumerate() {
            let mut sum = 0.0;
            for c in self.selected(arch) {
                match (c.crisp[g], c.contributions[g]) {
                    (Some(v), _) => sum += v,
                    (None, None) => {}
                    (None, Some(_)) => {
                        return Err(SpaceError::MissingCrisp {
                            goal: self.goals[g].id.clone(),
                            alternative: c.id.clone(),
                        })
                    }
                }
            }
            total += w * sum;
        }
        Ok(total)
    }

    /// Checks goal ids, finiteness and the budget sign.
    pub fn check_constraint_set(&self, constraints: &ConstraintSet) -> Result<(), SpaceError> {
        for (goal, &value) in &constraints.goal_thresholds {
            if self.goal_index(goal).is_none() {
                return Err(SpaceError::UnknownGoal(goal.clone()));
            }
            if !value.is_finite() {
                return Err(SpaceError::InvalidThreshold {
                    goal: goal.clone(),
                    value,
                });
            }
        }
        match constraints.cost_budget {
            Some(b) if b.is_nan() || b < 0.0 => Err(SpaceError::InvalidBudget(b)),
            _ => Ok(()),
        }
    }

    /// Centroid comparisons: `>=` for maximize goals, `<=` for minimize
    /// goals and the budget. Equality passes.
    pub fn check_constraints(
        &self,
        goal_scores: &[Score],
        cost: Option<FuzzyNumber>,
        arch: &Architecture,
        constraints: &ConstraintSet,
    ) -> Result<Feasibility, SpaceError> {
        let mut verdicts = Vec::with_capacity(constraints.goal_thresholds.len() + 1);
        for (goal, &threshold) in &constraints.goal_thresholds {
            let g = self.goal_index(goal).ok_or_else(|| SpaceError::UnknownGoal(goal.clone()))?;
            let direction = self.goals[g].direction;
            let value = goal_scores[g].centroid();
            let pass = match direction {
                Direction::Maximize => value >= threshold,
                Direction::Minimize => value <= threshold,
            };
            verdicts.push(Verdict {
                constraint: ConstraintRef::Goal(goal.clone()),
                direction,
                threshold,
                value,
                pass,
            });
        }
        if let Some(budget) = constraints.cost_budget {
            let cost = match cost {
                Some(c) => c,
                None => self.cost_of(arch)?,
            };
            let value = cost.centroid();
            verdicts.push(Verdict {
                constraint: ConstraintRef::Cost,
                direction: Direction::Minimize,
                threshold: budget,
                value,
                pass: value <= budget,
            });
        }
        let feasible = verdicts.iter().all(|v| v.pass);
        Ok(Feasibility { verdicts, feasible })
    }

    /// Scores an architecture and checks it against `constraints`.
    pub fn score(
        &self,
        arch: Architecture,
        weights: &[f64],
        backend: Backend,
        normalize: bool,
        constraints: &ConstraintSet,
    ) -> Result<ScoredArchitecture, SpaceError> {
        let goal_scores = (0..self.goals.len())
            .map(|g| self.goal_score_at(&arch, g, backend, normalize))
            .collect::<Result<Vec<_>, _>>()?;
        let total = self.total_score(&goal_scores, weights)?;
        let cost = self.cost_of(&arch).ok();
        let feasibility = self.check_constraints(&goal_scores, cost, &arch, constraints)?;
        Ok(ScoredArchitecture {
            architecture: arch,
            goal_scores,
            total,
            cost,
            feasibility,
        })
    }

    /// Component-wise minimum cost of each decision, or `None` if any
    /// alternative lacks a cost.
    pub(crate) fn min_costs(&self) -> Option<Vec<FuzzyNumber>> {
        self.choices
            .iter()
            .map(|alts| {
                let mut m = [f64::INFINITY; 4];
                for c in alts {
                    let p = c.cost?.params();
                    for i in 0..4 {
                        m[i] = m[i].min(p[i]);
                    }
                }
                FuzzyNumber::new(m[0], m[1], m[2], m[3]).ok()
            })
            .collect()
    }

    pub(crate) fn choice_cost(&self, decision: usize, choice: usize) -> Option<FuzzyNumber> {
        self.choices[decision][choice].cost
    }

    pub(crate) fn choice_counts(&self) -> Vec<usize> {
        self.choices.iter().map(Vec::len).collect()
    }
}

/// Number of architectures: the product of alternative counts over the
/// decisions that own at least one alternative.
pub fn space_size(graph: &GoalModelGraph) -> Result<u64, SpaceError> {
    Ok(SolutionSpace::new(graph, LinguisticScale::default())?.size())
}
