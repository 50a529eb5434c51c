//! Requests and result documents shared by the command line and the HTTP
//! service, so both produce the same rows for the same parameters.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::decision_space::{Backend, ConstraintSet, Score, SolutionSpace, Weights};
use crate::fuzzy::FuzzyNumber;
use crate::goal_model::{severe_obstacles, GoalModelError, RiskLevel};
use crate::model::Model;
use crate::ranking::{self, Counts, CrispRow, DivergenceReport, Query, RankError, RankedRow, RunOptions};

/// Query parameters. Absent fields fall back to the model's weights and
/// settings; absent constraints mean "unconstrained".
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankRequest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Weights>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal_thresholds: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend: Option<Backend>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalize: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<usize>,
}

impl RankRequest {
    /// Resolves the request against a model. Weights given for some goals
    /// override the model's weights for those goals only.
    pub fn to_query(&self, model: &Model) -> Query {
        let mut query = model.default_query();
        if let Some(w) = &self.weights {
            query.weights.extend(w.iter().map(|(k, v)| (k.clone(), *v)));
        }
        query.constraints = ConstraintSet {
            goal_thresholds: self.goal_thresholds.clone().unwrap_or_default(),
            cost_budget: self.budget,
        };
        if let Some(k) = self.k {
            query.k = k;
        }
        if let Some(b) = self.backend {
            query.backend = b;
        }
        if let Some(n) = self.normalize {
            query.normalize = n;
        }
        query
    }
}

/// Exact parameters a result was computed with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub weights: Weights,
    pub goal_thresholds: BTreeMap<String, f64>,
    pub cost_budget: Option<f64>,
    pub k: f64,
    pub backend: Backend,
    pub normalize: bool,
    pub top: Option<usize>,
}

impl Parameters {
    fn new(query: &Query, top: Option<usize>) -> Self {
        Parameters {
            weights: query.weights.clone(),
            goal_thresholds: query.constraints.goal_thresholds.clone(),
            cost_budget: query.constraints.cost_budget,
            k: query.k,
            backend: query.backend,
            normalize: query.normalize,
            top,
        }
    }
}

/// A fuzzy total as its quadruple, or an inferred set as clip heights of
/// the five levels (VL..VH).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TotalValue {
    Quadruple(FuzzyNumber),
    Inferred { heights: [f64; 5] },
}

impl From<&Score> for TotalValue {
    fn from(s: &Score) -> Self {
        match s {
            Score::Fuzzy(f) => TotalValue::Quadruple(*f),
            Score::Inferred(m) => TotalValue::Inferred { heights: m.heights() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub rank: usize,
    pub index: u64,
    pub selection: BTreeMap<String, String>,
    pub goal_centroids: BTreeMap<String, f64>,
    pub total: TotalValue,
    pub total_centroid: f64,
    pub cost: Option<FuzzyNumber>,
    pub chen_index: f64,
}

impl ResultRow {
    pub fn new(space: &SolutionSpace, row: &RankedRow) -> Self {
        let s = &row.scored;
        ResultRow {
            rank: row.rank,
            index: s.architecture.index,
            selection: space.selection_map(&s.architecture),
            goal_centroids: space.goals().zip(&s.goal_scores).map(|(g, sc)| (g.to_string(), sc.centroid())).collect(),
            total: TotalValue::from(&s.total),
            total_centroid: s.total.centroid(),
            cost: s.cost,
            chen_index: row.chen_index,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankDocument {
    pub parameters: Parameters,
    pub counts: Counts,
    pub rows: Vec<ResultRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub revision: Option<u64>,
}

fn top_rows(space: &SolutionSpace, rows: &[RankedRow], top: Option<usize>) -> Vec<ResultRow> {
    let n = top.unwrap_or(rows.len()).min(rows.len());
    rows[..n].iter().map(|r| ResultRow::new(space, r)).collect()
}

pub fn run_rank(model: &Model, request: &RankRequest, options: RunOptions) -> Result<RankDocument, RankError> {
    let space = model.space()?;
    let query = request.to_query(model);
    let (counts, ranked) = ranking::rank_space(&space, &query, options)?;
    Ok(RankDocument {
        parameters: Parameters::new(&query, request.top),
        counts,
        rows: top_rows(&space, &ranked.rows, request.top),
        revision: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrispResultRow {
    pub rank: usize,
    pub index: u64,
    pub selection: BTreeMap<String, String>,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareDocument {
    pub parameters: Parameters,
    pub counts: Counts,
    pub fuzzy: Vec<ResultRow>,
    pub crisp: Vec<CrispResultRow>,
    pub divergence: DivergenceReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub revision: Option<u64>,
}

pub fn run_compare(model: &Model, request: &RankRequest, options: RunOptions) -> Result<CompareDocument, RankError> {
    let space = model.space()?;
    let query = request.to_query(model);
    let (counts, ranked, crisp, divergence) = ranking::compare(&space, &query, options)?;
    let n = request.top.unwrap_or(crisp.len()).min(crisp.len());
    let crisp_rows = crisp[..n]
        .iter()
        .map(|r: &CrispRow| {
            let arch = space.architecture_at(r.index).map_err(RankError::from)?;
            Ok(CrispResultRow {
                rank: r.rank,
                index: r.index,
                selection: space.selection_map(&arch),
                score: r.score,
            })
        })
        .collect::<Result<Vec<_>, RankError>>()?;
    Ok(CompareDocument {
        parameters: Parameters::new(&query, request.top),
        counts,
        fuzzy: top_rows(&space, &ranked.rows, request.top),
        crisp: crisp_rows,
        divergence,
        revision: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskRow {
    pub id: String,
    pub name: String,
    pub likelihood: crate::goal_model::Likelihood,
    pub consequence: crate::goal_model::Consequence,
    pub risk: RiskLevel,
}

/// Obstacles at or above `threshold`, most severe first.
pub fn risk_table(model: &Model, threshold: RiskLevel) -> Result<Vec<RiskRow>, GoalModelError> {
    Ok(severe_obstacles(&model.graph, threshold)?
        .into_iter()
        .map(|(o, risk)| RiskRow {
            id: o.id.clone(),
            name: o.name.clone(),
            likelihood: o.likelihood.expect("assessed"),
            consequence: o.consequence.expect("assessed"),
            risk,
        })
        .collect())
}

/// Renders rows as a left-aligned text table.
pub fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let parts: Vec<String> = cells
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(&mut header.iter().copied());
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{divergence_instance, exemplar};

    #[test]
    fn request_defaults_come_from_the_model() {
        let m = exemplar();
        let q = RankRequest::default().to_query(&m);
        assert_eq!(q.weights.len(), 7);
        assert!(q.constraints.is_empty());
        assert_eq!(q.k, 1.0);

        let partial = RankRequest {
            weights: Some([("g2".to_string(), 5.0)].into_iter().collect()),
            budget: Some(30000.0),
            ..RankRequest::default()
        };
        let q = partial.to_query(&m);
        assert_eq!(q.weights["g2"], 5.0);
        assert_eq!(q.weights["g1"], 1.0);
        assert_eq!(q.constraints.cost_budget, Some(30000.0));
    }

    #[test]
    fn unknown_request_fields_are_rejected() {
        assert!(serde_json::from_str::<RankRequest>(r#"{"budgit": 3}"#).is_err());
        let r: RankRequest = serde_json::from_str(r#"{"budget": 3, "backend": "mamdani"}"#).unwrap();
        assert_eq!(r.backend, Some(Backend::Mamdani));
    }

    #[test]
    fn rank_document_rows() {
        let m = divergence_instance();
        let doc = run_rank(&m, &RankRequest { top: Some(3), ..Default::default() }, RunOptions::default()).unwrap();
        assert_eq!(doc.counts.total, 6);
        assert_eq!(doc.rows.len(), 3);
        assert!(doc.rows.windows(2).all(|w| w[0].chen_index >= w[1].chen_index));
        assert_eq!(doc.rows[0].selection.len(), 2);
        let json = serde_json::to_string(&doc).unwrap();
        assert!(!json.contains("revision"));
        let back: RankDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn compare_document_flags_divergence() {
        let doc = run_compare(&divergence_instance(), &RankRequest::default(), RunOptions::default()).unwrap();
        assert!(doc.divergence.diverges);
        assert!(doc.divergence.crisp_winner_fuzzy_rank > 1);
        assert_eq!(doc.crisp.len(), 6);
    }

    #[test]
    fn risk_rows() {
        let rows = risk_table(&exemplar(), RiskLevel::E).unwrap();
        assert!(rows.iter().all(|r| r.risk >= RiskLevel::E));
        assert!(rows.iter().any(|r| r.id == "o1"));
    }

    #[test]
    fn aligned_table() {
        let t = text_table(&["id", "risk"], &[vec!["o1.1".into(), "E".into()], vec!["o2".into(), "H".into()]]);
        assert_eq!(t, "id    risk\no1.1  E\no2    H\n");
    }
}
