//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::{BTreeMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{Method, Request};
use fuzzarch_cli::run;
use fuzzarch_core::decision_space::{Backend, ConstraintSet};
use fuzzarch_core::fuzzy::{chen_indices, FuzzyNumber, LinguisticLevel, LinguisticScale};
use fuzzarch_core::goal_model::{
    apply_tactic, assess_risk, validate, Consequence, Likelihood, ResolutionStatus, RiskLevel, TacticLabel,
    TacticRequest,
};
use fuzzarch_core::model::{parse_model, write_model, DIVERGENCE_JSON, EXEMPLAR_JSON};
use fuzzarch_core::ranking::{self, Query, RunOptions};
use fuzzarch_core::report::{run_compare, run_rank, RankRequest};
use fuzzarch_service::{router, AppState};
use http_body_util::BodyExt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;
use tower::ServiceExt;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(actual: f64, expected: f64, tol: f64, what: &str) -> Result<(), String> {
    ensure((actual - expected).abs() <= tol, || {
        format!("{what}: got {actual}, expected {expected} (tolerance {tol:e})")
    })
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

// Independent oracles.

fn trap_mu([a, b, c, d]: [f64; 4], x: f64) -> f64 {
    if x < a || x > d {
        0.0
    } else if x < b {
        (x - a) / (b - a)
    } else if x <= c {
        1.0
    } else if d > c {
        (d - x) / (d - c)
    } else {
        1.0
    }
}

fn trap_centroid([a, b, c, d]: [f64; 4]) -> f64 {
    let den = 3.0 * (d + c - a - b);
    if den.abs() < 1e-15 {
        return (a + d) / 2.0;
    }
    ((d * d + c * c + d * c) - (a * a + b * b + a * b)) / den
}

/// Maximizing/minimizing-set utilities by brute-force sup-min on a grid.
/// For the right utility only the falling edge [c, d] can hold the sup (the
/// reference set increases and the candidate is 1 at c); symmetrically the
/// rising edge [a, b] for the left utility.
fn grid_chen(cands: &[[f64; 4]], k: f64, step: f64) -> Vec<f64> {
    let lo = cands.iter().map(|c| c[0]).fold(f64::INFINITY, f64::min);
    let hi = cands.iter().map(|c| c[3]).fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    if span <= 0.0 {
        return vec![0.5; cands.len()];
    }
    let pow = |v: f64| if k == 1.0 { v } else { v.powf(k) };
    let mu_max = |x: f64| pow(((x - lo) / span).clamp(0.0, 1.0));
    let mu_min = |x: f64| pow(((hi - x) / span).clamp(0.0, 1.0));
    cands
        .iter()
        .map(|&t| {
            let ur = grid_sup(t[2], t[3], step, |x| trap_mu(t, x).min(mu_max(x)));
            let ul = grid_sup(t[0], t[1], step, |x| trap_mu(t, x).min(mu_min(x)));
            (ur + 1.0 - ul) / 2.0
        })
        .collect()
}

fn grid_sup(from: f64, to: f64, step: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mut best = f(from).max(f(to));
    let n = ((to - from) / step).floor() as usize;
    for j in 1..=n {
        best = best.max(f(from + j as f64 * step));
    }
    best
}

fn level_quad(label: &str) -> [f64; 4] {
    match label {
        "VL" => [0.0, 0.0, 0.0, 1.0],
        "L" => [0.0, 1.0, 1.0, 2.0],
        "M" => [1.0, 2.0, 2.0, 3.0],
        "H" => [2.0, 3.0, 3.0, 4.0],
        "VH" => [3.0, 4.0, 6.0, 6.0],
        other => panic!("unexpected label {other}"),
    }
}

fn quad_of(v: &Value) -> [f64; 4] {
    match v {
        Value::String(s) => level_quad(s),
        Value::Array(xs) => {
            let q: Vec<f64> = xs.iter().map(|x| x.as_f64().unwrap()).collect();
            [q[0], q[1], q[2], q[3]]
        }
        other => panic!("unexpected contribution {other}"),
    }
}

fn random_triangle(rng: &mut StdRng, lo: f64, hi: f64) -> [f64; 3] {
    let mut t = [rng.gen_range(lo..hi), rng.gen_range(lo..hi), rng.gen_range(lo..hi)];
    t.sort_by(f64::total_cmp);
    t
}

fn random_trap(rng: &mut StdRng) -> FuzzyNumber {
    let mut t = [0.0; 4].map(|_| rng.gen_range(-50.0..50.0));
    t.sort_by(f64::total_cmp);
    FuzzyNumber::new(t[0], t[1], t[2], t[3]).unwrap()
}

// Criteria.

fn exemplar_space_size() -> Check {
    let (result, elapsed) = timed(|| {
        let model = parse_model(EXEMPLAR_JSON).map_err(|e| e.to_string())?;
        let space = model.space().map_err(|e| e.to_string())?;
        let distinct: HashSet<Vec<usize>> = space.enumerate().map(|a| a.choices).collect();
        let product: usize = model
            .graph
            .decisions
            .iter()
            .map(|d| model.graph.alternatives_of(&d.id).len())
            .filter(|&n| n > 0)
            .product();
        Ok::<_, String>((space.size(), distinct.len(), product))
    });
    let (size, distinct, product) = result?;
    ensure(size == 10800, || format!("size {size}, expected 10800"))?;
    ensure(distinct == 10800, || format!("{distinct} distinct architectures"))?;
    ensure(product == 10800, || format!("alternative-count product {product}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("size 10800, 10800 distinct, {elapsed:.2?}"))
}

fn risk_matrix() -> Check {
    use Consequence as C;
    use Likelihood as L;
    use RiskLevel::*;
    let table = [
        (L::AlmostCertain, [H, H, E, E, V]),
        (L::Likely, [M, H, H, E, V]),
        (L::Possible, [L, M, H, E, E]),
        (L::Unlikely, [L, L, M, H, E]),
        (L::Rare, [L, L, M, H, H]),
    ];
    let cons = [C::Insignificant, C::Minor, C::Moderate, C::Major, C::Catastrophic];
    let mut cells = 0;
    for (lik, row) in table {
        for (con, expected) in cons.iter().zip(row) {
            let got = assess_risk(lik, *con);
            ensure(got == expected, || format!("{lik:?} x {con:?}: got {got}, expected {expected}"))?;
            cells += 1;
        }
    }
    for (i, &l) in Likelihood::ALL.iter().enumerate() {
        for (j, &c) in Consequence::ALL.iter().enumerate() {
            if i + 1 < 5 {
                ensure(assess_risk(Likelihood::ALL[i + 1], c) >= assess_risk(l, c), || {
                    format!("not monotone in likelihood at {l:?}/{c:?}")
                })?;
            }
            if j + 1 < 5 {
                ensure(assess_risk(l, Consequence::ALL[j + 1]) >= assess_risk(l, c), || {
                    format!("not monotone in consequence at {l:?}/{c:?}")
                })?;
            }
        }
    }
    Ok(format!("{cells}/25 cells, monotone on both axes"))
}

fn membership_functions() -> Check {
    let scale = LinguisticScale::default();
    let mu = |l: LinguisticLevel, x: f64| scale.fuzzy(l).membership(x);
    within(mu(LinguisticLevel::M, 2.0), 1.0, 1e-12, "mu_M(2)")?;
    within(mu(LinguisticLevel::H, 2.5), 0.5, 1e-12, "mu_H(2.5)")?;
    within(mu(LinguisticLevel::L, 3.0), 0.0, 1e-12, "mu_L(3)")?;
    let mut n = 0;
    for i in 0..=200 {
        let x = 4.0 + i as f64 * 0.01;
        within(mu(LinguisticLevel::VH, x), 1.0, 1e-12, &format!("mu_VH({x})"))?;
        n += 1;
    }
    Ok(format!("4 reference values and {n} VH plateau points exact"))
}

fn chen_oracle() -> Check {
    let mut rng = StdRng::seed_from_u64(0xC4E1);
    let sets: Vec<Vec<[f64; 4]>> = (0..1000)
        .map(|_| {
            let n = rng.gen_range(2..=10);
            (0..n)
                .map(|_| {
                    let [w, y, z] = random_triangle(&mut rng, 0.0, 60.0);
                    [w, y, y, z]
                })
                .collect()
        })
        .collect();
    let start = Instant::now();
    let mut closed_time = Duration::ZERO;
    let mut worst: f64 = 0.0;
    for set in &sets {
        let cands: Vec<FuzzyNumber> = set.iter().map(|t| FuzzyNumber::triangular(t[0], t[1], t[3]).unwrap()).collect();
        let (closed, t) = timed(|| chen_indices(&cands, 1.0));
        closed_time += t;
        let closed = closed.map_err(|e| e.to_string())?;
        let oracle = grid_chen(set, 1.0, 1e-4);
        for (c, o) in closed.iter().zip(&oracle) {
            worst = worst.max((c - o).abs());
        }
    }
    let elapsed = start.elapsed();
    ensure(worst <= 1e-3, || format!("max deviation {worst:e} exceeds 1e-3"))?;
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "1000 sets, max deviation {worst:.2e}, closed form {closed_time:.2?}, with oracle {elapsed:.2?}"
    ))
}

fn ranking_properties() -> Check {
    let mut rng = StdRng::seed_from_u64(0xD0E1);
    for _ in 0..300 {
        let n = rng.gen_range(2..=8);
        let mut cands: Vec<FuzzyNumber> = (0..n).map(|_| random_trap(&mut rng)).collect();
        let i = rng.gen_range(0..n);
        let delta = rng.gen_range(0.01..20.0);
        cands.push(cands[i].translate(delta).unwrap());
        let ch = chen_indices(&cands, 1.0).map_err(|e| e.to_string())?;
        ensure(ch[n] > ch[i], || format!("translated candidate CH {} <= original {}", ch[n], ch[i]))?;
    }

    let model = parse_model(EXEMPLAR_JSON).map_err(|e| e.to_string())?;
    let base = RankRequest { budget: Some(32000.0), ..RankRequest::default() };
    let order = |factor: f64| -> Result<Vec<u64>, String> {
        let weights = model.graph.weights().into_iter().map(|(g, w)| (g, f64::from(w) * factor)).collect();
        let req = RankRequest { weights: Some(weights), ..base.clone() };
        let doc = run_rank(&model, &req, RunOptions::default()).map_err(|e| e.to_string())?;
        Ok(doc.rows.iter().map(|r| r.index).collect())
    };
    let reference = order(1.0)?;
    let w_max = model.graph.weights().into_values().max().unwrap_or(1);
    let factors: Vec<f64> = [2.0, 5.0, 10.0].into_iter().filter(|f| f * f64::from(w_max) <= 10.0).collect();
    ensure(!factors.is_empty(), || "model weights leave no room for scaling".into())?;
    for &factor in &factors {
        ensure(order(factor)? == reference, || format!("order changed under weight scaling by {factor}"))?;
    }

    let req = RankRequest { budget: Some(32000.0), k: Some(2.0), top: Some(200), ..RankRequest::default() };
    let mut bytes = Vec::new();
    for threads in [1, 2, 4, 8] {
        for prune in [false, true] {
            let doc = run_rank(&model, &req, RunOptions { threads: Some(threads), prune }).map_err(|e| e.to_string())?;
            bytes.push(serde_json::to_vec_pretty(&doc).unwrap());
        }
    }
    ensure(bytes.windows(2).all(|w| w[0] == w[1]), || "result documents differ across worker counts".into())?;
    Ok(format!(
        "300 dominance cases, order stable under {} weight scalings, {} identical documents",
        factors.len(),
        bytes.len()
    ))
}

fn arithmetic_properties() -> Check {
    let mut rng = StdRng::seed_from_u64(0xA417);
    let close = |x: FuzzyNumber, y: FuzzyNumber, what: &str| -> Result<(), String> {
        for (p, q) in x.params().iter().zip(y.params()) {
            within(*p, q, 1e-9, what)?;
        }
        Ok(())
    };
    for _ in 0..1000 {
        let (a, b, c) = (random_trap(&mut rng), random_trap(&mut rng), random_trap(&mut rng));
        let (s, t) = (rng.gen_range(0.01..10.0), rng.gen_range(0.01..10.0));
        close(a + b, b + a, "commutativity")?;
        close((a + b) + c, a + (b + c), "associativity")?;
        close(a.scale(s).unwrap().scale(t).unwrap(), a.scale(s * t).unwrap(), "scale composition")?;
        close((a + b).scale(s).unwrap(), a.scale(s).unwrap() + b.scale(s).unwrap(), "scale distributes")?;
        let sum: [f64; 4] = std::array::from_fn(|i| a.params()[i] + b.params()[i]);
        close(a + b, FuzzyNumber::new(sum[0], sum[1], sum[2], sum[3]).unwrap(), "component-wise")?;

        let [w1, y1, z1] = random_triangle(&mut rng, -50.0, 50.0);
        let [w2, y2, z2] = random_triangle(&mut rng, -50.0, 50.0);
        let p = FuzzyNumber::triangular(w1, y1, z1).unwrap();
        let q = FuzzyNumber::triangular(w2, y2, z2).unwrap();
        within((p + q).centroid(), (w1 + y1 + z1) / 3.0 + (w2 + y2 + z2) / 3.0, 1e-9, "centroid additivity")?;
        within(p.scale(s).unwrap().centroid(), s * (w1 + y1 + z1) / 3.0, 1e-9, "centroid homogeneity")?;
    }
    Ok("1000 random cases within 1e-9".into())
}

fn relaxation_monotonicity() -> Check {
    let model = parse_model(EXEMPLAR_JSON).map_err(|e| e.to_string())?;
    let space = model.space().map_err(|e| e.to_string())?;
    let doc: Value = serde_json::from_str(EXEMPLAR_JSON).unwrap();
    let costs: BTreeMap<String, f64> = doc["alternatives"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| (a["id"].as_str().unwrap().to_string(), trap_centroid(quad_of(&a["cost"]))))
        .collect();
    let oracle_cost: Vec<f64> = space
        .enumerate()
        .map(|arch| space.selection_map(&arch).values().map(|a| costs[a]).sum())
        .collect();
    let query = model.default_query();
    let feasible = |budget: f64| -> Result<HashSet<u64>, String> {
        let q = Query { constraints: ConstraintSet::default().with_budget(budget), ..query.clone() };
        let set = ranking::feasible_set(&space, &q, RunOptions::default()).map_err(|e| e.to_string())?;
        Ok(set.architectures.iter().map(|s| s.architecture.index).collect())
    };
    let mut rng = StdRng::seed_from_u64(0xB0D6);
    let start = Instant::now();
    let mut grew = 0;
    for _ in 0..100 {
        let x = rng.gen_range(20000.0..48000.0);
        let y = rng.gen_range(20000.0..48000.0);
        let (b1, b2) = if x <= y { (x, y) } else { (y, x) };
        let (f1, f2) = (feasible(b1)?, feasible(b2)?);
        ensure(f1.is_subset(&f2), || format!("feasible({b1}) is not a subset of feasible({b2})"))?;
        for (b, f) in [(b1, &f1), (b2, &f2)] {
            let expected = oracle_cost.iter().filter(|&&c| c <= b).count();
            ensure(f.len() == expected, || format!("budget {b}: {} feasible, oracle says {expected}", f.len()))?;
        }
        if f2.len() > f1.len() {
            grew += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("100 pairs, subset holds, counts match oracle, {grew} strictly grew, {elapsed:.2?}"))
}

fn divergence() -> Check {
    let model = parse_model(DIVERGENCE_JSON).map_err(|e| e.to_string())?;
    let report = run_compare(&model, &RankRequest::default(), RunOptions::default()).map_err(|e| e.to_string())?;
    let d = &report.divergence;

    let doc: Value = serde_json::from_str(DIVERGENCE_JSON).unwrap();
    ensure(doc["settings"]["normalize"].as_bool() != Some(true), || "oracle assumes no normalization".into())?;
    let weights: BTreeMap<&str, f64> = doc["goals"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| (g["id"].as_str().unwrap(), g["weight"].as_f64().unwrap_or(1.0)))
        .collect();
    let alts = doc["alternatives"].as_array().unwrap();
    let mut decisions: Vec<&str> = doc["decisions"].as_array().unwrap().iter().map(|d| d["id"].as_str().unwrap()).collect();
    decisions.sort();
    let options: Vec<Vec<&Value>> = decisions
        .iter()
        .map(|d| alts.iter().filter(|a| a["decision"] == *d).collect())
        .collect();
    ensure(options.len() == 2, || "oracle expects two decisions".into())?;
    let mut totals = Vec::new();
    let mut crisp = Vec::new();
    for x in &options[0] {
        for y in &options[1] {
            let mut t = [0.0; 4];
            let mut c = 0.0;
            for alt in [x, y] {
                for (g, &w) in &weights {
                    if let Some(con) = alt["contributions"].get(*g) {
                        let q = quad_of(con);
                        for i in 0..4 {
                            t[i] += w * q[i];
                        }
                    }
                    c += w * alt["crisp"].get(*g).and_then(Value::as_f64).unwrap_or(0.0);
                }
            }
            totals.push(t);
            crisp.push(c);
        }
    }
    let ch = grid_chen(&totals, 1.0, 1e-4);
    let crisp_winner = (0..crisp.len()).fold(0, |best, i| if crisp[i] > crisp[best] { i } else { best });
    let fuzzy_winner = (0..ch.len()).fold(0, |best, i| if ch[i] > ch[best] + 1e-9 { i } else { best });
    let rank_of = |i: usize| 1 + (0..ch.len()).filter(|&j| ch[j] > ch[i] + 1e-9).count();
    let oracle_rank = rank_of(crisp_winner);

    ensure(d.crisp_winner == crisp_winner as u64, || {
        format!("crisp winner {} but oracle says {crisp_winner}", d.crisp_winner)
    })?;
    ensure(d.fuzzy_winner == fuzzy_winner as u64, || {
        format!("fuzzy winner {} but oracle says {fuzzy_winner}", d.fuzzy_winner)
    })?;
    ensure(d.crisp_winner_fuzzy_rank == oracle_rank, || {
        format!("crisp winner fuzzy rank {} but oracle says {oracle_rank}", d.crisp_winner_fuzzy_rank)
    })?;
    ensure(d.crisp_winner_fuzzy_rank > 1, || "crisp winner is also the fuzzy winner".into())?;
    Ok(format!(
        "crisp winner {} has fuzzy rank {} of {} (oracle agrees)",
        d.crisp_winner,
        d.crisp_winner_fuzzy_rank,
        ch.len()
    ))
}

const TACTICS: [&str; 8] = [
    r#"{"tactic": "substitute_goal", "params": {"goal": "g1", "obstacle": "o2",
        "spec": {"definition": "Social media processed daily"}}}"#,
    r#"{"tactic": "substitute_platform", "params": {"goal": "g2", "obstacle": "o5", "platform": "Standby server"}}"#,
    r#"{"tactic": "prevent_obstacle", "params": {"obstacle": "o8", "decision": {"id": "d20", "name": "Encrypt batches",
        "alternatives": [{"id": "a40", "name": "Encrypt at rest", "contributions": {"g6": "VH"}, "crisp": {"g6": 4},
        "cost": [1600, 2000, 2000, 2500]}]}}}"#,
    r#"{"tactic": "reduce_obstacle", "params": {"obstacle": "o5", "downgrade_likelihood": true, "decision": {"id": "d21",
        "name": "Prioritise sensors", "alternatives": [{"id": "a41", "name": "Priority queue", "contributions": {"g2": "H"},
        "cost": [800, 1000, 1000, 1250]}]}}}"#,
    r#"{"tactic": "weaken_goal", "params": {"goal": "g2", "objective": "Sensor data processed within 47 ms",
        "threshold_score": 15, "threshold_quality": 47, "obstacle": "o5"}}"#,
    r#"{"tactic": "restore_goal", "params": {"obstacle": "o6", "goal": {"id": "g8", "name": "Recover after transient fault",
        "category": "availability"}, "decision": {"id": "d22", "name": "Retry policy", "alternatives": [
        {"id": "a42", "name": "Exponential backoff", "contributions": {"g8": "H"}, "cost": [400, 500, 500, 625]}]}}}"#,
    r#"{"tactic": "mitigate_obstacle", "params": {"obstacle": "o7", "goal": {"id": "g9", "name": "Reconcile replicas"},
        "decision": {"id": "d23", "name": "Reconciliation", "alternatives": [
        {"id": "a43", "name": "Anti-entropy repair", "contributions": {"g9": "M"}, "cost": [800, 1000, 1000, 1250]}]}}}"#,
    r#"{"tactic": "do_nothing", "params": {"obstacle": "o1.3"}}"#,
];

fn tactic_safety() -> Check {
    let model = parse_model(EXEMPLAR_JSON).map_err(|e| e.to_string())?;
    let mut seen = HashSet::new();
    for text in TACTICS {
        let req: TacticRequest = serde_json::from_str(text).map_err(|e| format!("bad request {text}: {e}"))?;
        let label = req.label();
        let out = apply_tactic(&model.graph, &req).map_err(|e| format!("{label}: {e}"))?;
        let problems = validate(&out);
        ensure(problems.is_empty(), || format!("{label}: {problems:?}"))?;
        ensure(out != model.graph, || format!("{label} changed nothing"))?;
        if let TacticRequest::DoNothing { obstacle } = &req {
            let mut expected = model.graph.clone();
            expected.obstacle_mut(obstacle).unwrap().status = ResolutionStatus::Accepted;
            ensure(out == expected, || "do_nothing changed more than the obstacle status".into())?;
        }
        seen.insert(label);
    }
    ensure(seen.len() == TacticLabel::ALL.len(), || format!("only {} tactics exercised", seen.len()))?;
    Ok("8/8 tactics leave the model valid; do_nothing touches only the status".into())
}

fn cli_rows(model_path: &str, args: &[&str]) -> Result<Value, String> {
    let mut argv = vec!["fuzzarch", "rank", model_path, "--out", "-"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    ensure(code == 0, || format!("cli exited {code}: {}", String::from_utf8_lossy(&err)))?;
    let doc: Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    Ok(doc["rows"].clone())
}

fn round_trip_and_consistency() -> Check {
    for (name, text) in [("exemplar", EXEMPLAR_JSON), ("divergence", DIVERGENCE_JSON)] {
        let model = parse_model(text).map_err(|e| e.to_string())?;
        let written = write_model(&model);
        ensure(written == text, || format!("{name}: writing the parsed fixture changes bytes"))?;
        ensure(parse_model(&written).map_err(|e| e.to_string())? == model, || format!("{name}: parse(write) differs"))?;
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("exemplar.json");
    std::fs::write(&path, EXEMPLAR_JSON).map_err(|e| e.to_string())?;
    let path = path.to_str().unwrap();
    let model = parse_model(EXEMPLAR_JSON).map_err(|e| e.to_string())?;
    let app = router(AppState::new(model));
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build().unwrap();

    let cases: [(&[&str], RankRequest); 4] = [
        (&["--top", "10"], RankRequest { top: Some(10), ..Default::default() }),
        (
            &["--top", "25", "--budget", "30000", "--threshold", "g2=17", "--k", "2", "--weights", "g1=3,g4=8"],
            RankRequest {
                top: Some(25),
                budget: Some(30000.0),
                goal_thresholds: Some([("g2".to_string(), 17.0)].into_iter().collect()),
                k: Some(2.0),
                weights: Some([("g1".to_string(), 3.0), ("g4".to_string(), 8.0)].into_iter().collect()),
                ..Default::default()
            },
        ),
        (
            &["--top", "10", "--normalize", "true", "--budget", "36000"],
            RankRequest { top: Some(10), normalize: Some(true), budget: Some(36000.0), ..Default::default() },
        ),
        (
            &["--top", "5", "--backend", "mamdani", "--budget", "30000"],
            RankRequest { top: Some(5), backend: Some(Backend::Mamdani), budget: Some(30000.0), ..Default::default() },
        ),
    ];
    for (args, body) in &cases {
        let cli = cli_rows(path, args)?;
        let body = serde_json::to_string(body).unwrap();
        let service: Value = runtime.block_on(async {
            let req = Request::builder()
                .method(Method::POST)
                .uri("/rank")
                .header("content-type", "application/json")
                .body(Body::from(body.clone()))
                .unwrap();
            let resp = app.clone().oneshot(req).await.unwrap();
            let bytes = resp.into_body().collect().await.unwrap().to_bytes();
            serde_json::from_slice(&bytes).unwrap()
        });
        ensure(service["rows"] == cli, || format!("rows differ for {body}"))?;
        ensure(cli.as_array().is_some_and(|r| !r.is_empty()), || format!("no rows for {body}"))?;
    }
    Ok(format!("both fixtures round-trip byte-exact; CLI and POST /rank agree on {} queries", cases.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("exemplar space size", exemplar_space_size),
        ("risk matrix exactness", risk_matrix),
        ("membership functions", membership_functions),
        ("chen index oracle equivalence", chen_oracle),
        ("ranking properties", ranking_properties),
        ("fuzzy arithmetic properties", arithmetic_properties),
        ("constraint relaxation monotonicity", relaxation_monotonicity),
        ("fuzzy vs crisp divergence", divergence),
        ("tactic safety", tactic_safety),
        ("round trip and cli/service consistency", round_trip_and_consistency),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL  {name}: {reason}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
