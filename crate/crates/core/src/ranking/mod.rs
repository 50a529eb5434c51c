//! Constraint filtering over the whole solution space, ranking by Chen's
//! index, the optimum, and the crisp weighted-sum baseline.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decision_space::{
    Backend, ConstraintRef, ConstraintSet, ScoredArchitecture, Score, SolutionSpace, SpaceError, Weights,
};
use crate::fuzzy::{chen_indices, chen_indices_grid, FuzzyError, FuzzyNumber, DEFAULT_SAMPLE_STEP};
use crate::goal_model::Direction;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RankError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error("nothing to rank: the candidate set is empty")]
    Empty,
    #[error("no architecture satisfies the constraints")]
    NoFeasible(Infeasibility),
    #[error("fuzzy and crisp rankings cover different architectures")]
    Mismatch,
    #[error("could not start worker pool: {0}")]
    Workers(String),
}

/// Everything that shapes a ranking besides the model itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub weights: Weights,
    #[serde(default)]
    pub constraints: ConstraintSet,
    pub k: f64,
    #[serde(default)]
    pub backend: Backend,
    #[serde(default)]
    pub normalize: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Skip subtrees whose cheapest completion already exceeds the budget.
    pub prune: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub total: u64,
    pub ruled_out: u64,
    pub feasible: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibleSet {
    pub counts: Counts,
    /// Feasible architectures in enumeration order.
    pub architectures: Vec<ScoredArchitecture>,
}

/// How close the space came to satisfying each violated constraint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSlack {
    pub constraint: ConstraintRef,
    pub threshold: f64,
    /// Best centroid any architecture reaches for this constraint.
    pub best: f64,
    /// Architectures violating it.
    pub violations: u64,
}

/// Violated constraints, most often violated first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Infeasibility {
    pub total: u64,
    pub tightest: Vec<ConstraintSlack>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedRow {
    pub rank: usize,
    pub scored: ScoredArchitecture,
    pub chen_index: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedResult {
    pub k: f64,
    pub rows: Vec<RankedRow>,
}

impl RankedResult {
    pub fn best(&self) -> &RankedRow {
        &self.rows[0]
    }
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, RankError> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| RankError::Workers(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Scores every architecture and keeps those meeting `query.constraints`.
/// The result does not depend on `options`.
pub fn feasible_set(space: &SolutionSpace, query: &Query, options: RunOptions) -> Result<FeasibleSet, RankError> {
    space.check_constraint_set(&query.constraints)?;
    let weights = space.weight_vector(&query.weights)?;
    let candidates: Vec<u64> = match (query.constraints.cost_budget, options.prune) {
        (Some(budget), true) => match cost_survivors(space, budget) {
            Some(ids) => ids,
            None => (0..space.size()).collect(),
        },
        _ => (0..space.size()).collect(),
    };
    let scored = with_pool(options.threads, || {
        candidates
            .par_iter()
            .map(|&i| {
                let arch = space.architecture_at(i)?;
                space.score(arch, &weights, query.backend, query.normalize, &query.constraints)
            })
            .collect::<Result<Vec<_>, SpaceError>>()
    })??;
    let architectures: Vec<ScoredArchitecture> = scored.into_iter().filter(|s| s.feasibility.feasible).collect();
    let total = space.size();
    let feasible = architectures.len() as u64;
    Ok(FeasibleSet {
        counts: Counts {
            total,
            ruled_out: total - feasible,
            feasible,
        },
        architectures,
    })
}

/// Indices whose cost centroid fits the budget, found by depth-first search
/// with a lower bound: the partial cost plus the component-wise cheapest
/// completion. The centroid is non-decreasing in every parameter, so the
/// bound never discards a fitting architecture. `None` if some alternative
/// has no cost.
fn cost_survivors(space: &SolutionSpace, budget: f64) -> Option<Vec<u64>> {
    let mins = space.min_costs()?;
    let counts = space.choice_counts();
    let n = counts.len();
    let mut suffix = vec![FuzzyNumber::ZERO; n + 1];
    for i in (0..n).rev() {
        suffix[i] = mins[i] + suffix[i + 1];
    }
    let slack = 1e-9 * (1.0 + budget.abs());
    let mut out = Vec::new();
    let mut choices = vec![0usize; n];

    #[allow(clippy::too_many_arguments)]
    fn walk(
        space: &SolutionSpace,
        depth: usize,
        partial: FuzzyNumber,
        suffix: &[FuzzyNumber],
        counts: &[usize],
        budget: f64,
        slack: f64,
        choices: &mut Vec<usize>,
        out: &mut Vec<u64>,
    ) {
        if depth == counts.len() {
            if partial.centroid() <= budget {
                out.push(space.index_of(choices));
            }
            return;
        }
        if (partial + suffix[depth]).centroid() > budget + slack {
            return;
        }
        for c in 0..counts[depth] {
            choices[depth] = c;
            let cost = space.choice_cost(depth, c).expect("costs checked");
            walk(space, depth + 1, partial + cost, suffix, counts, budget, slack, choices, out);
        }
    }

    walk(space, 0, FuzzyNumber::ZERO, &suffix, &counts, budget, slack, &mut choices, &mut out);
    Some(out)
}

/// Orders candidates by Chen's index of their totals, computed jointly.
/// Ties keep the lower architecture index first. Rule-backend totals are
/// evaluated on a grid. A single candidate gets index 0.5.
pub fn rank(feasible: Vec<ScoredArchitecture>, k: f64) -> Result<RankedResult, RankError> {
    if feasible.is_empty() {
        return Err(RankError::Empty);
    }
    let fuzzy: Option<Vec<FuzzyNumber>> = feasible.iter().map(|s| s.total.as_fuzzy()).collect();
    let indices = match fuzzy {
        // A lone candidate has nothing to be ranked against.
        _ if feasible.len() == 1 => vec![0.5],
        Some(totals) => chen_indices(&totals, k)?,
        None => {
            let totals: Vec<Score> = feasible.iter().map(|s| s.total).collect();
            chen_indices_grid(&totals, k, DEFAULT_SAMPLE_STEP)?
        }
    };
    let mut rows: Vec<(ScoredArchitecture, f64)> = feasible.into_iter().zip(indices).collect();
    rows.sort_by(|(a, ca), (b, cb)| {
        cb.partial_cmp(ca)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.architecture.index.cmp(&b.architecture.index))
    });
    Ok(RankedResult {
        k,
        rows: rows
            .into_iter()
            .enumerate()
            .map(|(i, (scored, chen_index))| RankedRow {
                rank: i + 1,
                scored,
                chen_index,
            })
            .collect(),
    })
}

/// Feasible set and its ranking. An empty feasible set is reported with the
/// constraints that ruled it out.
pub fn rank_space(space: &SolutionSpace, query: &Query, options: RunOptions) -> Result<(Counts, RankedResult), RankError> {
    let set = feasible_set(space, query, options)?;
    if set.architectures.is_empty() {
        return Err(RankError::NoFeasible(infeasibility(space, query, options)?));
    }
    let counts = set.counts;
    Ok((counts, rank(set.architectures, query.k)?))
}

/// The most desirable feasible architecture.
pub fn optimum(space: &SolutionSpace, query: &Query, options: RunOptions) -> Result<RankedRow, RankError> {
    let (_, ranked) = rank_space(space, query, options)?;
    Ok(ranked.rows.into_iter().next().expect("non-empty ranking"))
}

/// Per-constraint violation counts and best attainable values over the
/// whole space.
pub fn infeasibility(space: &SolutionSpace, query: &Query, options: RunOptions) -> Result<Infeasibility, RankError> {
    let weights = space.weight_vector(&query.weights)?;
    let verdicts = with_pool(options.threads, || {
        (0..space.size())
            .into_par_iter()
            .map(|i| {
                let arch = space.architecture_at(i)?;
                let s = space.score(arch, &weights, query.backend, query.normalize, &query.constraints)?;
                Ok(s.feasibility.verdicts)
            })
            .collect::<Result<Vec<_>, SpaceError>>()
    })??;

    let mut slack: Vec<ConstraintSlack> = Vec::new();
    let mut directions: Vec<Direction> = Vec::new();
    for row in &verdicts {
        for (j, v) in row.iter().enumerate() {
            if slack.len() <= j {
                slack.push(ConstraintSlack {
                    constraint: v.constraint.clone(),
                    threshold: v.threshold,
                    best: v.value,
                    violations: 0,
                });
                directions.push(v.direction);
            }
            let s = &mut slack[j];
            s.best = match v.direction {
                Direction::Maximize => s.best.max(v.value),
                Direction::Minimize => s.best.min(v.value),
            };
            if !v.pass {
                s.violations += 1;
            }
        }
    }
    let mut tightest: Vec<ConstraintSlack> = slack.into_iter().filter(|s| s.violations > 0).collect();
    tightest.sort_by(|a, b| b.violations.cmp(&a.violations).then_with(|| a.constraint.cmp(&b.constraint)));
    Ok(Infeasibility {
        total: space.size(),
        tightest,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrispRow {
    pub rank: usize,
    pub index: u64,
    pub score: f64,
}

/// Weighted crisp sums of the given architectures, best first, ties by index.
pub fn crisp_ranking(
    space: &SolutionSpace,
    candidates: &[ScoredArchitecture],
    weights: &Weights,
) -> Result<Vec<CrispRow>, RankError> {
    let w = space.weight_vector(weights)?;
    let mut rows = candidates
        .iter()
        .map(|s| {
            Ok(CrispRow {
                rank: 0,
                index: s.architecture.index,
                score: space.crisp_score(&s.architecture, &w)?,
            })
        })
        .collect::<Result<Vec<_>, SpaceError>>()?;
    rows.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.index.cmp(&b.index))
    });
    for (i, row) in rows.iter_mut().enumerate() {
        row.rank = i + 1;
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankPair {
    pub index: u64,
    pub fuzzy_rank: usize,
    pub crisp_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    /// Ordered by fuzzy rank.
    pub pairs: Vec<RankPair>,
    pub fuzzy_winner: u64,
    pub fuzzy_winner_crisp_rank: usize,
    pub crisp_winner: u64,
    pub crisp_winner_fuzzy_rank: usize,
    /// Spearman's rank correlation between the two orders.
    pub spearman_rho: f64,
    pub diverges: bool,
}

pub fn divergence_report(fuzzy: &RankedResult, crisp: &[CrispRow]) -> Result<DivergenceReport, RankError> {
    if fuzzy.rows.is_empty() {
        return Err(RankError::Empty);
    }
    let mut crisp_rank_of = std::collections::HashMap::with_capacity(crisp.len());
    for row in crisp {
        crisp_rank_of.insert(row.index, row.rank);
    }
    if crisp_rank_of.len() != fuzzy.rows.len() || crisp.len() != fuzzy.rows.len() {
        return Err(RankError::Mismatch);
    }
    let pairs = fuzzy
        .rows
        .iter()
        .map(|r| {
            let index = r.scored.architecture.index;
            let crisp_rank = *crisp_rank_of.get(&index).ok_or(RankError::Mismatch)?;
            Ok(RankPair {
                index,
                fuzzy_rank: r.rank,
                crisp_rank,
            })
        })
        .collect::<Result<Vec<_>, RankError>>()?;

    let n = pairs.len() as f64;
    let spearman_rho = if pairs.len() < 2 {
        1.0
    } else {
        let d2: f64 = pairs
            .iter()
            .map(|p| (p.fuzzy_rank as f64 - p.crisp_rank as f64).powi(2))
            .sum();
        1.0 - 6.0 * d2 / (n * (n * n - 1.0))
    };
    let fuzzy_winner = pairs[0].index;
    let crisp_best = crisp.iter().min_by_key(|r| r.rank).expect("non-empty");
    let crisp_winner_fuzzy_rank = pairs
        .iter()
        .find(|p| p.index == crisp_best.index)
        .map(|p| p.fuzzy_rank)
        .ok_or(RankError::Mismatch)?;
    Ok(DivergenceReport {
        fuzzy_winner,
        fuzzy_winner_crisp_rank: pairs[0].crisp_rank,
        crisp_winner: crisp_best.index,
        crisp_winner_fuzzy_rank,
        spearman_rho,
        diverges: fuzzy_winner != crisp_best.index,
        pairs,
    })
}

/// Fuzzy ranking, crisp ranking and their comparison over the feasible set.
pub fn compare(
    space: &SolutionSpace,
    query: &Query,
    options: RunOptions,
) -> Result<(Counts, RankedResult, Vec<CrispRow>, DivergenceReport), RankError> {
    let (counts, ranked) = rank_space(space, query, options)?;
    let scored: Vec<ScoredArchitecture> = ranked.rows.iter().map(|r| r.scored.clone()).collect();
    let crisp = crisp_ranking(space, &scored, &query.weights)?;
    let report = divergence_report(&ranked, &crisp)?;
    Ok((counts, ranked, crisp, report))
}
