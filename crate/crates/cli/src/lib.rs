//! The `fuzzarch` command line. [`run`] takes the argument vector and output
//! streams so the whole interface can be driven from tests.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fuzzarch_core::decision_space::{Backend, Weights};
use fuzzarch_core::goal_model::{apply_tactic, export_dot, validate, RiskLevel, TacticRequest};
use fuzzarch_core::model::{divergence_instance, exemplar, parse_model, write_model, Model, ModelError};
use fuzzarch_core::ranking::{RankError, RunOptions};
use fuzzarch_core::report::{risk_table, run_compare, run_rank, text_table, RankRequest, ResultRow, TotalValue};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MODEL: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fuzzarch", version, about = "Fuzzy what-if analysis of goal-driven architecture decisions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a model document and report problems.
    Validate { model: PathBuf },
    /// Obstacle risk table.
    Risks {
        model: PathBuf,
        /// Only show obstacles at or above this level (L, M, H, E, V).
        #[arg(long, default_value = "H", value_parser = parse_risk)]
        threshold: RiskLevel,
    },
    /// Number of candidate architectures.
    Size { model: PathBuf },
    /// List architectures in enumeration order.
    Enumerate {
        model: PathBuf,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Rank feasible architectures.
    Rank(QueryArgs),
    /// Best feasible architecture.
    Optimum(QueryArgs),
    /// Fuzzy against crisp ranking, with a divergence report.
    Compare(QueryArgs),
    /// Apply a resolution tactic and write the resulting model.
    Tactic {
        model: PathBuf,
        /// Tactic label, e.g. do_nothing or prevent_obstacle.
        #[arg(long)]
        tactic: String,
        /// Tactic parameters as inline JSON or a path to a JSON file.
        #[arg(long, default_value = "{}")]
        params: String,
        /// Output path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// GraphViz rendering of the goal model.
    ExportDot {
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve the HTTP interface for the given model.
    Serve {
        model: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
    },
    /// Write one of the bundled models.
    Fixture {
        #[arg(value_enum, default_value_t = Fixture::Exemplar)]
        name: Fixture,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Fixture {
    Exemplar,
    Divergence,
}

#[derive(Debug, Args)]
struct QueryArgs {
    model: PathBuf,
    /// Rows to show (all when omitted).
    #[arg(long)]
    top: Option<usize>,
    /// Chen risk-attitude exponent.
    #[arg(long)]
    k: Option<f64>,
    #[arg(long, value_parser = parse_backend)]
    backend: Option<Backend>,
    /// Goal weights: a JSON file, inline JSON, or `g1=3,g2=5`.
    #[arg(long)]
    weights: Option<String>,
    /// Cost budget on the defuzzified cost.
    #[arg(long)]
    budget: Option<f64>,
    /// Goal threshold `goal=value`; repeatable.
    #[arg(long = "threshold", value_parser = parse_pair)]
    thresholds: Vec<(String, f64)>,
    /// Start from the constraints stored in the model.
    #[arg(long)]
    model_constraints: bool,
    /// Scale contributions by normalized weights (true or false).
    #[arg(long)]
    normalize: Option<bool>,
    /// Write the machine-readable result document here (`-` for stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    threads: Option<usize>,
    /// Skip subtrees that cannot meet the budget.
    #[arg(long)]
    prune: bool,
}

fn parse_risk(s: &str) -> Result<RiskLevel, String> {
    s.parse()
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    s.parse()
}

fn parse_pair(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected goal=value, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.trim().to_string(), v))
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Model(String),
    Infeasible(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Model(_) => EXIT_MODEL,
            Failure::Infeasible(_) => EXIT_INFEASIBLE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Model(m) | Failure::Infeasible(m) => m,
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        Failure::Model(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Model(e.to_string())
    }
}

impl From<RankError> for Failure {
    fn from(e: RankError) -> Self {
        match e {
            RankError::NoFeasible(inf) => {
                let mut msg = format!("infeasible: none of the {} architectures satisfies the constraints", inf.total);
                for s in &inf.tightest {
                    let _ = write!(
                        msg,
                        "\n  {}: threshold {}, best achievable {:.4}, violated by {}",
                        s.constraint, s.threshold, s.best, s.violations
                    );
                }
                Failure::Infeasible(msg)
            }
            other => Failure::Model(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Runs the command line with `args` (including the program name) and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn load(path: &Path) -> Result<Model, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Model(format!("cannot read {}: {e}", path.display())))?;
    parse_model(&text).map_err(|e| Failure::Model(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) if p != Path::new("-") => std::fs::write(p, text)
            .map_err(|e| Failure::Model(format!("cannot write {}: {e}", p.display()))),
        _ => Ok(out.write_all(text.as_bytes())?),
    }
}

fn document<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Inline JSON, a path to a JSON file, or `key=value` pairs.
fn read_json_arg(arg: &str) -> Result<String, Failure> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    let path = Path::new(arg);
    if path.is_file() {
        return std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {arg}: {e}")));
    }
    Err(Failure::Usage(format!("`{arg}` is neither JSON nor a readable file")))
}

fn parse_weights(arg: &str) -> Result<Weights, Failure> {
    let trimmed = arg.trim();
    if !trimmed.starts_with('{') && !Path::new(trimmed).is_file() {
        return trimmed
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|p| parse_pair(p).map_err(Failure::Usage))
            .collect();
    }
    let text = read_json_arg(arg)?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("invalid weights: {e}")))
}

impl QueryArgs {
    fn request(&self, model: &Model) -> Result<RankRequest, Failure> {
        let mut thresholds: BTreeMap<String, f64> = BTreeMap::new();
        let mut budget = None;
        if self.model_constraints {
            let stored = model.constraints();
            thresholds = stored.goal_thresholds;
            budget = stored.cost_budget;
        }
        thresholds.extend(self.thresholds.iter().cloned());
        budget = self.budget.or(budget);
        Ok(RankRequest {
            weights: self.weights.as_deref().map(parse_weights).transpose()?,
            goal_thresholds: (!thresholds.is_empty()).then_some(thresholds),
            budget,
            k: self.k,
            backend: self.backend,
            normalize: self.normalize,
            top: self.top,
        })
    }

    fn json_only(&self) -> bool {
        self.out.as_deref() == Some(Path::new("-"))
    }

    fn options(&self) -> RunOptions {
        RunOptions { threads: self.threads, prune: self.prune }
    }
}

fn fmt_num(x: f64) -> String {
    format!("{x:.4}")
}

fn selection_text(sel: &BTreeMap<String, String>, order: &[String]) -> String {
    order
        .iter()
        .filter_map(|d| sel.get(d).map(|a| format!("{d}={a}")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn total_text(t: &TotalValue) -> String {
    match t {
        TotalValue::Quadruple(f) => {
            let [a, b, c, d] = f.params();
            format!("({}, {}, {}, {})", fmt_num(a), fmt_num(b), fmt_num(c), fmt_num(d))
        }
        TotalValue::Inferred { heights } => {
            let hs: Vec<String> = heights.iter().map(|h| format!("{h:.3}")).collect();
            format!("heights [{}]", hs.join(", "))
        }
    }
}

fn rows_table(rows: &[ResultRow], order: &[String]) -> String {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.rank.to_string(),
                r.index.to_string(),
                format!("{:.6}", r.chen_index),
                fmt_num(r.total_centroid),
                total_text(&r.total),
                r.cost.map(|c| format!("{:.2}", c.centroid())).unwrap_or_else(|| "-".into()),
                selection_text(&r.selection, order),
            ]
        })
        .collect();
    text_table(&["rank", "index", "chen", "score", "total", "cost", "selection"], &body)
}

fn decision_order(model: &Model) -> Result<Vec<String>, Failure> {
    let space = model.space().map_err(|e| Failure::Model(e.to_string()))?;
    Ok(space.decisions().to_vec())
}

fn label<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::new(),
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Validate { model } => {
            let m = load(&model)?;
            let problems = validate(&m.graph);
            if !problems.is_empty() {
                let list: Vec<String> = problems.iter().map(|p| format!("  {p}")).collect();
                return Err(Failure::Model(format!("{} problem(s)\n{}", problems.len(), list.join("\n"))));
            }
            writeln!(
                out,
                "ok: {} goals, {} obstacles, {} decisions, {} alternatives",
                m.graph.goals.len(),
                m.graph.obstacles.len(),
                m.graph.decisions.len(),
                m.graph.alternatives.len()
            )?;
        }
        Command::Risks { model, threshold } => {
            let m = load(&model)?;
            let rows = risk_table(&m, threshold).map_err(|e| Failure::Model(e.to_string()))?;
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.id.clone(), label(&r.likelihood), label(&r.consequence), r.risk.to_string(), r.name.clone()])
                .collect();
            out.write_all(text_table(&["obstacle", "likelihood", "consequence", "risk", "name"], &body).as_bytes())?;
        }
        Command::Size { model } => {
            let m = load(&model)?;
            let space = m.space().map_err(|e| Failure::Model(e.to_string()))?;
            writeln!(out, "{}", space.size())?;
        }
        Command::Enumerate { model, limit } => {
            let m = load(&model)?;
            let space = m.space().map_err(|e| Failure::Model(e.to_string()))?;
            let order: Vec<String> = space.decisions().to_vec();
            let body: Vec<Vec<String>> = space
                .enumerate()
                .take(limit.unwrap_or(usize::MAX))
                .map(|a| vec![a.index.to_string(), selection_text(&space.selection_map(&a), &order)])
                .collect();
            out.write_all(text_table(&["index", "selection"], &body).as_bytes())?;
        }
        Command::Rank(args) => {
            let m = load(&args.model)?;
            let doc = run_rank(&m, &args.request(&m)?, args.options())?;
            if args.json_only() {
                return emit(out, None, &document(&doc));
            }
            write_counts(out, &doc.counts)?;
            out.write_all(rows_table(&doc.rows, &decision_order(&m)?).as_bytes())?;
            if let Some(p) = &args.out {
                emit(out, Some(p), &document(&doc))?;
            }
        }
        Command::Optimum(args) => {
            let m = load(&args.model)?;
            let req = RankRequest { top: Some(1), ..args.request(&m)? };
            let doc = run_rank(&m, &req, args.options())?;
            if args.json_only() {
                return emit(out, None, &document(&doc));
            }
            let best = &doc.rows[0];
            let order = decision_order(&m)?;
            writeln!(out, "index      {}", best.index)?;
            writeln!(out, "chen index {:.6}", best.chen_index)?;
            writeln!(out, "score      {}", fmt_num(best.total_centroid))?;
            writeln!(out, "total      {}", total_text(&best.total))?;
            if let Some(c) = best.cost {
                writeln!(out, "cost       {c} (centroid {:.2})", c.centroid())?;
            }
            writeln!(out, "selection  {}", selection_text(&best.selection, &order))?;
            if let Some(p) = &args.out {
                emit(out, Some(p), &document(&doc))?;
            }
        }
        Command::Compare(args) => {
            let m = load(&args.model)?;
            let doc = run_compare(&m, &args.request(&m)?, args.options())?;
            if args.json_only() {
                return emit(out, None, &document(&doc));
            }
            let order = decision_order(&m)?;
            write_counts(out, &doc.counts)?;
            let d = &doc.divergence;
            writeln!(out, "fuzzy winner {} (crisp rank {})", d.fuzzy_winner, d.fuzzy_winner_crisp_rank)?;
            writeln!(out, "crisp winner {} (fuzzy rank {})", d.crisp_winner, d.crisp_winner_fuzzy_rank)?;
            writeln!(out, "spearman rho {:.6}", d.spearman_rho)?;
            writeln!(out, "diverges     {}", if d.diverges { "yes" } else { "no" })?;
            writeln!(out)?;
            out.write_all(rows_table(&doc.fuzzy, &order).as_bytes())?;
            writeln!(out)?;
            let crisp: Vec<Vec<String>> = doc
                .crisp
                .iter()
                .map(|r| vec![r.rank.to_string(), r.index.to_string(), fmt_num(r.score), selection_text(&r.selection, &order)])
                .collect();
            out.write_all(text_table(&["crisp", "index", "score", "selection"], &crisp).as_bytes())?;
            if let Some(p) = &args.out {
                emit(out, Some(p), &document(&doc))?;
            }
        }
        Command::Tactic { model, tactic, params, out: path } => {
            let m = load(&model)?;
            let params: serde_json::Value = serde_json::from_str(&read_json_arg(&params)?)
                .map_err(|e| Failure::Usage(format!("invalid tactic parameters: {e}")))?;
            let request: TacticRequest =
                serde_json::from_value(serde_json::json!({"tactic": tactic, "params": params}))
                    .map_err(|e| Failure::Usage(format!("invalid tactic request: {e}")))?;
            let graph = apply_tactic(&m.graph, &request).map_err(|e| Failure::Model(e.to_string()))?;
            emit(out, path.as_deref(), &write_model(&Model { graph, ..m }))?;
        }
        Command::ExportDot { model, out: path } => {
            let m = load(&model)?;
            let dot = export_dot(&m.graph).map_err(|e| Failure::Model(e.to_string()))?;
            emit(out, path.as_deref(), &dot)?;
        }
        Command::Serve { model, port, host } => {
            let m = load(&model)?;
            let addr = SocketAddr::new(host, port);
            writeln!(out, "serving {} on http://{addr}", model.display())?;
            out.flush()?;
            fuzzarch_service::serve_blocking(addr, m)?;
        }
        Command::Fixture { name, out: path } => {
            let m = match name {
                Fixture::Exemplar => exemplar(),
                Fixture::Divergence => divergence_instance(),
            };
            emit(out, path.as_deref(), &write_model(&m))?;
        }
    }
    Ok(())
}

fn write_counts(out: &mut dyn Write, c: &fuzzarch_core::ranking::Counts) -> std::io::Result<()> {
    writeln!(out, "architectures {}, ruled out {}, feasible {}", c.total, c.ruled_out, c.feasible)
}
