//! Acceptance criteria for the simulator, each a function returning a
//! one-line verdict. The `acceptance` test target runs them all.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use podsim::commands::{self, homophily_report, preset_experiment, table2_rows};
use podsim::config::{parse, HomophilyFile};
use podsim::presets;
use podsim::runner::Runner;
use podsim_core::kernel::{beta_table, contagion_prob, min_infected_neighbors};
use podsim_core::paths::max_probability_path;
use podsim_core::pod::{batch_seeds, run};
use podsim_core::{Belief, ContagionModel, GraphKind, Histogram, Institution, NodeId, SocialGraph};

/// `Ok` or `Err` carry the measured values either way.
pub type Outcome = Result<String, String>;
pub type Check = Box<dyn Fn() -> Outcome>;

fn b(x: u8) -> Belief {
    Belief::new(x).unwrap()
}

fn runner() -> Runner {
    Runner::new(None).unwrap()
}

/// Printed values, `None` for "<0.001".
#[rustfmt::skip]
const DCC_TABLE: [[Option<f64>; 7]; 7] = {
    const L: Option<f64> = None;
    [
        [Some(0.999), Some(0.982), Some(0.500), Some(0.018), L, L, L],
        [Some(0.982), Some(0.999), Some(0.982), Some(0.500), Some(0.018), L, L],
        [Some(0.500), Some(0.982), Some(0.999), Some(0.982), Some(0.500), Some(0.018), L],
        [Some(0.018), Some(0.500), Some(0.982), Some(0.999), Some(0.982), Some(0.500), Some(0.018)],
        [L, Some(0.018), Some(0.500), Some(0.982), Some(0.999), Some(0.982), Some(0.500)],
        [L, L, Some(0.018), Some(0.500), Some(0.982), Some(0.999), Some(0.982)],
        [L, L, L, Some(0.018), Some(0.500), Some(0.982), Some(0.999)],
    ]
};

fn dcc_table() -> Outcome {
    let start = Instant::now();
    let model = ContagionModel::CognitiveSigmoid {
        alpha: 4.0,
        gamma: 2.0,
    };
    let table = beta_table(&model).map_err(|e| e.to_string())?;
    let mut bad = Vec::new();
    for (u, (row, want)) in table.rows().iter().zip(DCC_TABLE).enumerate() {
        for (v, (p, w)) in row.iter().zip(want).enumerate() {
            let p = p.get();
            let ok = match w {
                Some(w) => (p - w).abs() <= 0.001,
                None => p < 0.001,
            };
            if !ok {
                bad.push(format!("({u},{v})={p:.4}"));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if !bad.is_empty() {
        return Err(format!("mismatched entries {}", bad.join(" ")));
    }
    if elapsed >= 1.0 {
        return Err(format!("took {elapsed:.2}s"));
    }
    Ok(format!("49/49 entries within 0.001 in {elapsed:.3}s"))
}

fn min_neighbors_anchor() -> Outcome {
    let n = min_infected_neighbors(0.5, 0.95).map_err(|e| e.to_string())?;
    if n != 5 {
        return Err(format!("min_infected_neighbors(0.5, 0.95) = {n}"));
    }
    let mut checked = 0;
    for i in 0..10 {
        for j in 0..10 {
            let p = 0.05 + 0.09 * i as f64;
            let delta = 0.05 + 0.094 * j as f64;
            let got = min_infected_neighbors(p, delta).map_err(|e| e.to_string())?;
            let reaches = |k: u32| 1.0 - (1.0 - p).powi(k as i32) >= delta;
            let want = (0..).find(|&k| reaches(k)).unwrap();
            if got != want {
                return Err(format!("p={p} delta={delta}: got {got}, direct {want}"));
            }
            checked += 1;
        }
    }
    Ok(format!(
        "n=5 at (0.5, 0.95); {checked}-point grid agrees with direct evaluation"
    ))
}

fn graph_anchors() -> Outcome {
    let edges = |kind: GraphKind, seed: u64| -> Result<usize, String> {
        Ok(kind
            .with_seed(seed)
            .generate()
            .map_err(|e| e.to_string())?
            .edge_count())
    };
    let er: Vec<usize> = (0..30)
        .map(|s| edges(GraphKind::ErdosRenyi { n: 500, rho: 0.05 }, s))
        .collect::<Result<_, _>>()?;
    let er_mean = er.iter().sum::<usize>() as f64 / er.len() as f64;
    let ws: Vec<usize> = (0..30)
        .map(|s| {
            edges(
                GraphKind::WattsStrogatz {
                    n: 500,
                    k: 5,
                    rho: 0.5,
                },
                s,
            )
        })
        .collect::<Result<_, _>>()?;
    let ba: Vec<usize> = (0..30)
        .map(|s| edges(GraphKind::BarabasiAlbert { n: 500, m: 3 }, s))
        .collect::<Result<_, _>>()?;
    let mut problems = Vec::new();
    if !(6050.0..=6430.0).contains(&er_mean) {
        problems.push(format!("ER mean edges {er_mean:.1}"));
    }
    if let Some(e) = ws.iter().find(|&&e| e != 2500) {
        problems.push(format!("WS edges {e}"));
    }
    if let Some(e) = ba.iter().find(|&&e| e.abs_diff(1500) > 3) {
        problems.push(format!("BA edges {e}"));
    }
    let (lo, hi) = (ba.iter().min().unwrap(), ba.iter().max().unwrap());
    let summary = format!("ER mean {er_mean:.1}, WS all 2500, BA in [{lo}, {hi}]");
    if problems.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{}; {summary}", problems.join(", ")))
    }
}

fn homophily_anchors() -> Outcome {
    let mean = |preset: &str| -> Result<f64, String> {
        let file: HomophilyFile =
            parse(presets::get(preset).unwrap(), preset).map_err(|e| e.to_string())?;
        Ok(homophily_report(&file, &runner())
            .map_err(|e| e.to_string())?
            .mean)
    };
    let er = mean("homophily-er")?;
    let mag = mean("homophily-mag")?;
    let detail = format!("ER {er:.3}, MAG {mag:.3}");
    if (2.20..=2.40).contains(&er) && (0.26..=0.36).contains(&mag) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

struct Batch {
    trace: podsim_core::BatchTrace,
}

impl Batch {
    fn initial(&self) -> &Histogram {
        &self.trace.mean[0]
    }

    fn at(&self, tick: usize) -> &Histogram {
        &self.trace.mean[tick]
    }

    fn last(&self) -> &Histogram {
        self.trace.final_mean()
    }
}

fn batch(preset: &str) -> Result<Batch, String> {
    let e = preset_experiment(preset, None).map_err(|e| e.to_string())?;
    let trace = runner()
        .batches(&[(e.config.clone(), e.repetitions)])
        .map_err(|e| e.to_string())?
        .remove(0);
    Ok(Batch { trace })
}

fn simple_endpoint(schedule: &str, level: usize) -> Outcome {
    let r = batch(&format!("er-simple-{schedule}"))?;
    let frac = r.last().0[level];
    let detail = format!("final fraction at level {level} = {frac:.4}");
    if frac >= 0.99 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Every repetition must end exactly where it started.
fn complex_endpoint(schedule: &str) -> Outcome {
    let e =
        preset_experiment(&format!("er-complex-{schedule}"), None).map_err(|e| e.to_string())?;
    let mut changed = Vec::new();
    let mut worst: f64 = 0.0;
    for seed in batch_seeds(e.config.seed, e.repetitions) {
        let trace = run(&e.config.with_seed(seed)).map_err(|e| e.to_string())?;
        let (first, last) = (trace.initial(), trace.last());
        if first != last {
            let moved: f64 = first
                .0
                .iter()
                .zip(&last.0)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>()
                / 2.0;
            worst = worst.max(moved);
            changed.push(seed);
        }
    }
    if changed.is_empty() {
        Ok(format!(
            "{} runs, final histogram == initial in every run",
            e.repetitions
        ))
    } else {
        Err(format!(
            "{}/{} runs changed (largest shift {:.4} of agents)",
            changed.len(),
            e.repetitions,
            worst
        ))
    }
}

fn dcc_single() -> Outcome {
    let r = batch("er-dcc-single")?;
    let (init, last) = (r.initial(), r.last());
    let high_before: f64 = init.0[4..].iter().sum();
    let high_after: f64 = last.0[4..].iter().sum();
    let low_drift = (0..3)
        .map(|l| (init.0[l] - last.0[l]).abs())
        .fold(0.0, f64::max);
    let detail = format!(
        "levels 4-6: {high_before:.4} -> {high_after:.4}; max drift at 0-2 = {low_drift:.4}"
    );
    if high_after >= high_before && low_drift <= 0.02 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn dcc_split() -> Outcome {
    let r = batch("er-dcc-split")?;
    let (mid, end) = (r.at(50).0[6], r.last().0[6]);
    let detail = format!("fraction(b=6) {mid:.4} at t=50, {end:.4} at t=100");
    if end >= mid - 0.01 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn dcc_gradual() -> Outcome {
    let r = batch("er-dcc-gradual")?;
    let frac = r.last().0[0];
    let detail = format!("final fraction(b=0) = {frac:.4}");
    if frac >= 0.99 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn dcc_topology_robustness() -> Outcome {
    let er = batch("er-dcc-single")?;
    let mut parts = Vec::new();
    let mut ok = true;
    for topo in ["ws", "ba", "mag"] {
        let other = batch(&format!("{topo}-dcc-single"))?;
        let gap = er
            .last()
            .0
            .iter()
            .zip(&other.last().0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        ok &= gap <= 0.10;
        parts.push(format!("{topo} max gap {gap:.4}"));
    }
    if ok {
        Ok(parts.join(", "))
    } else {
        Err(parts.join(", "))
    }
}

/// ER stays put; on WS the histogram moves (total variation at least 0.25)
/// and the final per-level variance across runs is at least ten times the
/// initial one.
fn complex_topology_contrast() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for schedule in presets::SCHEDULES {
        let er = batch(&format!("er-complex-{schedule}"))?;
        let ws = batch(&format!("ws-complex-{schedule}"))?;
        let tv = |r: &Batch| {
            r.initial()
                .0
                .iter()
                .zip(&r.last().0)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>()
                / 2.0
        };
        let max_var = |h: &Histogram| h.0.iter().cloned().fold(0.0, f64::max);
        let (er_tv, ws_tv) = (tv(&er), tv(&ws));
        let var_ratio = max_var(ws.trace.final_variance()) / max_var(&ws.trace.variance[0]);
        ok &= er_tv == 0.0 && ws_tv >= 0.25 && var_ratio >= 10.0;
        parts.push(format!(
            "{schedule}: ER shift {er_tv:.4}, WS shift {ws_tv:.4}, WS variance x{var_ratio:.0}"
        ));
    }
    if ok {
        Ok(parts.join("; "))
    } else {
        Err(parts.join("; "))
    }
}

fn census_spot_checks() -> Outcome {
    let start = Instant::now();
    let rows = table2_rows(None, &runner()).map_err(|e| e.to_string())?;
    let cell = |topo: &str, tau: u32, level: usize| {
        rows.iter()
            .find(|r| r.graph_type == topo && r.tau == tau)
            .map(|r| r.proportions[level])
            .unwrap_or(f64::NAN)
    };
    let mut problems = Vec::new();
    let checks = [
        ("er", 1, 0, 0.76, 1.0),
        ("mag", 1, 0, 0.0, 0.28),
        ("mag", 2, 3, 0.69, 0.99),
    ];
    let mut seen = Vec::new();
    for (topo, tau, level, lo, hi) in checks {
        let x = cell(topo, tau, level);
        seen.push(format!("{topo} tau={tau} b_u={level}: {x:.2}"));
        if !(lo..=hi).contains(&x) {
            problems.push(format!(
                "{topo} tau={tau} b_u={level} = {x:.2} outside [{lo}, {hi}]"
            ));
        }
    }
    for topo in ["er", "ws", "ba", "mag"] {
        for tau in [1, 2] {
            if cell(topo, tau, 6) != 1.0 {
                problems.push(format!("{topo} tau={tau} b_u=6 = {}", cell(topo, tau, 6)));
            }
        }
    }
    let detail = format!(
        "{}; all b_u=6 = 1.0 ({:.1}s)",
        seen.join(", "),
        start.elapsed().as_secs_f64()
    );
    if problems.is_empty() {
        Ok(detail)
    } else {
        Err(problems.join("; "))
    }
}

/// Best product of contagion probabilities over every simple path from a
/// subscriber to `target`.
fn enumerate_best(
    g: &SocialGraph,
    inst: &Institution,
    target: NodeId,
    msg: Belief,
    model: &ContagionModel,
) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn walk(
        g: &SocialGraph,
        at: NodeId,
        target: NodeId,
        p: f64,
        seen: &mut [bool],
        msg: Belief,
        model: &ContagionModel,
        best: &mut f64,
    ) {
        let p = p * contagion_prob(model, g.belief(at), msg, 0.0).get();
        if at == target {
            *best = best.max(p);
            return;
        }
        for &w in g.neighbors(at) {
            if !seen[w] {
                seen[w] = true;
                walk(g, w, target, p, seen, msg, model, best);
                seen[w] = false;
            }
        }
    }
    let mut best = 0.0;
    for &s in &inst.subscribers {
        let mut seen = vec![false; g.node_count()];
        seen[s] = true;
        walk(g, s, target, 1.0, &mut seen, msg, model, &mut best);
    }
    best
}

fn oracle_equivalence() -> Outcome {
    let models = [
        ContagionModel::dcc(),
        ContagionModel::Simple { p: 0.15 },
        ContagionModel::CognitiveLinear {
            gamma: 1.0,
            alpha: 0.5,
        },
        ContagionModel::CognitiveThreshold { gamma: 2 },
    ];
    let mut compared = 0;
    for i in 0..200u64 {
        let n = 2 + (i % 7) as usize;
        let rho = 0.2 + 0.15 * (i % 5) as f64;
        let g = GraphKind::ErdosRenyi { n, rho }
            .with_seed(1000 + i)
            .generate()
            .map_err(|e| e.to_string())?;
        let msg = b((i % 7) as u8);
        let model = &models[(i % 4) as usize];
        let inst = Institution::with_subscribers(0, &g, msg, 1);
        for target in 0..n {
            let want = enumerate_best(&g, &inst, target, msg, model);
            let got = max_probability_path(&g, &inst, target, msg, model)
                .map_err(|e| e.to_string())?
                .map_or(0.0, |(_, p)| p.get());
            if (got - want).abs() > 1e-12 * want.max(got) {
                return Err(format!(
                    "graph {i} target {target}: search {got}, enumeration {want}"
                ));
            }
            compared += 1;
        }
    }
    Ok(format!(
        "200 graphs, {compared} targets agree within 1e-12 relative"
    ))
}

fn read_tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else if path.extension().is_some_and(|x| x == "csv") {
                let key = path.strip_prefix(dir).unwrap().display().to_string();
                files.insert(key, std::fs::read(&path).unwrap());
            }
        }
    }
    files
}

fn determinism() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let one = Runner::new(Some(1)).map_err(|e| e.to_string())?;
    let many = Runner::new(Some(4)).map_err(|e| e.to_string())?;
    for name in commands::SUITES {
        commands::suite(name, Some(7), &one, a.path()).map_err(|e| e.to_string())?;
        commands::suite(name, Some(7), &many, b.path()).map_err(|e| e.to_string())?;
    }
    let (first, second) = (read_tree(a.path()), read_tree(b.path()));
    if first.is_empty() {
        return Err("no CSVs written".into());
    }
    if first.keys().ne(second.keys()) {
        return Err("the two runs wrote different file sets".into());
    }
    let differing: Vec<&String> = first
        .iter()
        .filter(|(k, v)| second[*k] != **v)
        .map(|(k, _)| k)
        .collect();
    if differing.is_empty() {
        Ok(format!(
            "{} CSVs across {} suites identical on re-run",
            first.len(),
            commands::SUITES.len()
        ))
    } else {
        Err(format!("differing files: {differing:?}"))
    }
}

/// Every criterion, in reporting order.
pub fn criteria() -> Vec<(&'static str, Check)> {
    vec![
        ("dcc_beta_table", Box::new(dcc_table)),
        (
            "min_infected_neighbors_anchor",
            Box::new(min_neighbors_anchor),
        ),
        ("graph_anchors", Box::new(graph_anchors)),
        ("homophily_anchors", Box::new(homophily_anchors)),
        (
            "endpoint_simple_single",
            Box::new(|| simple_endpoint("single", 6)),
        ),
        (
            "endpoint_simple_split",
            Box::new(|| simple_endpoint("split", 0)),
        ),
        (
            "endpoint_simple_gradual",
            Box::new(|| simple_endpoint("gradual", 0)),
        ),
        (
            "endpoint_complex_single",
            Box::new(|| complex_endpoint("single")),
        ),
        (
            "endpoint_complex_split",
            Box::new(|| complex_endpoint("split")),
        ),
        (
            "endpoint_complex_gradual",
            Box::new(|| complex_endpoint("gradual")),
        ),
        ("endpoint_dcc_single", Box::new(dcc_single)),
        ("endpoint_dcc_split", Box::new(dcc_split)),
        ("endpoint_dcc_gradual", Box::new(dcc_gradual)),
        (
            "topology_dcc_within_0.10",
            Box::new(dcc_topology_robustness),
        ),
        (
            "topology_complex_er_vs_ws",
            Box::new(complex_topology_contrast),
        ),
        ("path_census_spot_checks", Box::new(census_spot_checks)),
        ("oracle_max_path_200_graphs", Box::new(oracle_equivalence)),
        ("determinism_suite_csvs", Box::new(determinism)),
    ]
}
