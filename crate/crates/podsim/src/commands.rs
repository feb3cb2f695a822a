//! What each subcommand computes and where it writes.
//!
//! Every command writes under `<out>/<name>/`, where `name` comes from the
//! config's `name` field, the preset name, or the config file stem.
//! Suites write under `<out>/<suite>/`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use podsim_core::graph::{homophily, node_distance_variance};
use podsim_core::kernel::beta_table;
use podsim_core::paths::{path_census_multi, PathCensusRow};
use podsim_core::{BatchTrace, Belief, GraphKind, Normalization};
use serde::Serialize;

use crate::config::{
    self, is_safe_name, CensusFile, Experiment, GraphFile, HomophilyFile, ModelFile,
    NormalizationConfig, RunFile, ScheduleConfig,
};
use crate::error::{CliError, Result};
use crate::formats::{beta_table_csv, census_csv, trace_csv, write_atomic, write_graph};
use crate::presets;
use crate::runner::Runner;
use crate::stats::SummaryStats;

pub const SUITES: [&str; 5] = ["figures", "beta-selection", "table1", "table2", "homophily"];

fn checked_name(name: &str) -> Result<&str> {
    if is_safe_name(name) {
        Ok(name)
    } else {
        Err(CliError::Usage(format!(
            "output name `{name}` may only use letters, digits, '-', '_' and '.'"
        )))
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn put(path: PathBuf, contents: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    write_atomic(&path, contents.as_bytes())?;
    written.push(path);
    Ok(())
}

#[derive(Serialize)]
struct ScheduleDoc {
    schedule: ScheduleConfig,
    #[serde(rename = "T")]
    ticks: u32,
    /// Levels broadcast at ticks `1..=T`.
    levels: Vec<Vec<u8>>,
}

fn schedule_doc(e: &Experiment) -> Result<ScheduleDoc> {
    let c = &e.config;
    let levels = (1..=c.ticks)
        .map(|t| {
            Ok(c.schedule
                .levels_at(t, c.ticks)?
                .iter()
                .map(|b| b.get())
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(ScheduleDoc {
        schedule: ScheduleConfig::from_schedule(&c.schedule),
        ticks: c.ticks,
        levels,
    })
}

/// Writes `trace.csv`, `summary.json` and `schedule.json` into `dir`.
pub fn write_condition(
    dir: &Path,
    e: &Experiment,
    trace: &BatchTrace,
) -> Result<(Vec<PathBuf>, SummaryStats)> {
    let mut written = Vec::new();
    let summary = SummaryStats::new(RunFile::from_experiment(e), trace);
    put(dir.join("trace.csv"), &trace_csv(trace), &mut written)?;
    put(dir.join("summary.json"), &json(&summary), &mut written)?;
    put(
        dir.join("schedule.json"),
        &json(&schedule_doc(e)?),
        &mut written,
    )?;
    Ok((written, summary))
}

pub fn run(e: &Experiment, runner: &Runner, out: &Path) -> Result<Vec<PathBuf>> {
    let dir = out.join(checked_name(&e.name)?);
    let trace = runner
        .batches(&[(e.config.clone(), e.repetitions)])?
        .remove(0);
    Ok(write_condition(&dir, e, &trace)?.0)
}

/// Counts printed by `podsim graph`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphReport {
    pub nodes: usize,
    pub edges: usize,
    pub homophily: Option<f64>,
}

pub fn graph(file: &GraphFile, name: &str, out: &Path) -> Result<(Vec<PathBuf>, GraphReport)> {
    let kind = file.graph.to_kind()?;
    let g = kind.with_seed(file.seed).generate()?;
    let report = GraphReport {
        nodes: g.node_count(),
        edges: g.edge_count(),
        homophily: homophily(&g, Normalization::PerEdge).ok(),
    };
    let mut written = Vec::new();
    put(
        out.join(checked_name(name)?).join("graph.txt"),
        &write_graph(&g),
        &mut written,
    )?;
    Ok((written, report))
}

pub fn beta_table_cmd(file: &ModelFile, name: &str, out: &Path) -> Result<Vec<PathBuf>> {
    let table = beta_table(&file.model.to_model()?)?;
    let mut written = Vec::new();
    put(
        out.join(checked_name(name)?).join("beta_table.csv"),
        &beta_table_csv(&table),
        &mut written,
    )?;
    Ok(written)
}

pub fn census_rows(file: &CensusFile) -> Result<Vec<PathCensusRow>> {
    let (kind, level) = file.validate()?;
    Ok(path_census_multi(
        &kind,
        &file.taus,
        level,
        file.trials,
        file.seed,
    )?)
}

pub fn census(file: &CensusFile, name: &str, out: &Path) -> Result<Vec<PathBuf>> {
    let rows = census_rows(file)?;
    let mut written = Vec::new();
    put(
        out.join(checked_name(name)?).join("census.csv"),
        &census_csv(&rows),
        &mut written,
    )?;
    Ok(written)
}

/// Homophily of one graph family over consecutive seeds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomophilyReport {
    pub graph_type: &'static str,
    pub normalization: NormalizationConfig,
    pub seeds: Vec<u64>,
    pub values: Vec<f64>,
    /// Per seed: variance across agents of their mean neighbor distance.
    pub node_variances: Vec<f64>,
    pub mean: f64,
    pub mean_node_variance: f64,
}

pub fn homophily_report(file: &HomophilyFile, runner: &Runner) -> Result<HomophilyReport> {
    let kind = file.validate()?;
    let norm = match file.normalization {
        NormalizationConfig::PerEdge => Normalization::PerEdge,
        NormalizationConfig::Eq11 => Normalization::Eq11,
    };
    let seeds: Vec<u64> = (0..file.seeds as u64)
        .map(|i| file.seed.wrapping_add(i))
        .collect();
    let per_seed = runner.map(&seeds, |&s| -> Result<(f64, f64)> {
        let g = kind.clone().with_seed(s).generate()?;
        Ok((homophily(&g, norm)?, node_distance_variance(&g)?))
    });
    let (values, node_variances): (Vec<f64>, Vec<f64>) = per_seed
        .into_iter()
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    let count = values.len() as f64;
    Ok(HomophilyReport {
        graph_type: kind.tag(),
        normalization: file.normalization,
        mean: values.iter().sum::<f64>() / count,
        mean_node_variance: node_variances.iter().sum::<f64>() / count,
        seeds,
        values,
        node_variances,
    })
}

fn homophily_csv(reports: &[HomophilyReport]) -> String {
    let mut out = String::from("graph_type,seed,homophily,node_variance\n");
    for r in reports {
        for ((s, h), v) in r.seeds.iter().zip(&r.values).zip(&r.node_variances) {
            writeln!(out, "{},{s},{h:.6},{v:.6}", r.graph_type).unwrap();
        }
    }
    out
}

pub fn homophily_cmd(
    file: &HomophilyFile,
    name: &str,
    runner: &Runner,
    out: &Path,
) -> Result<Vec<PathBuf>> {
    let report = homophily_report(file, runner)?;
    let dir = out.join(checked_name(name)?);
    let mut written = Vec::new();
    put(
        dir.join("homophily.csv"),
        &homophily_csv(std::slice::from_ref(&report)),
        &mut written,
    )?;
    put(dir.join("summary.json"), &json(&report), &mut written)?;
    Ok(written)
}

fn preset<T: serde::de::DeserializeOwned>(name: &str) -> Result<T> {
    config::parse(presets::get(name).expect("bundled preset"), name)
}

/// Loads a bundled run preset, replacing its seed when `seed` is given.
pub fn preset_experiment(name: &str, seed: Option<u64>) -> Result<Experiment> {
    let mut file: RunFile = preset(name)?;
    if let Some(s) = seed {
        file.seed = s;
    }
    file.validate(name)
}

fn grid(names: &[String], seed: Option<u64>, runner: &Runner, dir: &Path) -> Result<Vec<PathBuf>> {
    let experiments = names
        .iter()
        .map(|n| preset_experiment(n, seed))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<_> = experiments
        .iter()
        .map(|e| (e.config.clone(), e.repetitions))
        .collect();
    let traces = runner.batches(&jobs)?;
    let mut written = Vec::new();
    let mut table = String::from("condition,graph,model,schedule,dominant_level,convergence_tick");
    for l in 0..Belief::LEVELS {
        write!(table, ",final_level_{l}_mean").unwrap();
    }
    table.push('\n');
    for (e, trace) in experiments.iter().zip(&traces) {
        let (files, summary) = write_condition(&dir.join(&e.name), e, trace)?;
        written.extend(files);
        let tick = summary
            .convergence_tick
            .map(|t| t.to_string())
            .unwrap_or_default();
        write!(
            table,
            "{},{},{},{},{},{tick}",
            e.name,
            e.config.graph.tag(),
            e.config.model.name(),
            e.config.schedule.name(),
            summary.dominant_level
        )
        .unwrap();
        for x in summary.final_mean {
            write!(table, ",{x:.6}").unwrap();
        }
        table.push('\n');
    }
    put(dir.join("summary.csv"), &table, &mut written)?;
    Ok(written)
}

/// Census rows for all four topologies, each over both taus.
pub fn table2_rows(seed: Option<u64>, runner: &Runner) -> Result<Vec<PathCensusRow>> {
    let files = presets::TOPOLOGIES
        .iter()
        .map(|t| {
            let mut f: CensusFile = preset(&format!("table2-{t}"))?;
            if let Some(s) = seed {
                f.seed = s;
            }
            Ok(f)
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = runner.map(&files, census_rows);
    let mut all: Vec<PathCensusRow> = rows
        .into_iter()
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    // group by tau first, like the printed table
    all.sort_by_key(|r| r.tau);
    Ok(all)
}

pub fn suite(name: &str, seed: Option<u64>, runner: &Runner, out: &Path) -> Result<Vec<PathBuf>> {
    let dir = out.join(name);
    match name {
        "figures" => grid(&presets::figure_conditions(), seed, runner, &dir),
        "beta-selection" => grid(&presets::beta_conditions(), seed, runner, &dir),
        "table1" => {
            let file: ModelFile = preset("model-dcc")?;
            let mut written = Vec::new();
            let table = beta_table(&file.model.to_model()?)?;
            put(
                dir.join("beta_table.csv"),
                &beta_table_csv(&table),
                &mut written,
            )?;
            Ok(written)
        }
        "table2" => {
            let rows = table2_rows(seed, runner)?;
            let mut written = Vec::new();
            put(dir.join("census.csv"), &census_csv(&rows), &mut written)?;
            Ok(written)
        }
        "homophily" => {
            let reports = ["homophily-er", "homophily-mag"]
                .iter()
                .map(|p| {
                    let mut f: HomophilyFile = preset(p)?;
                    if let Some(s) = seed {
                        f.seed = s;
                    }
                    homophily_report(&f, runner)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut written = Vec::new();
            put(
                dir.join("homophily.csv"),
                &homophily_csv(&reports),
                &mut written,
            )?;
            put(dir.join("summary.json"), &json(&reports), &mut written)?;
            Ok(written)
        }
        other => Err(CliError::Usage(format!(
            "unknown suite `{other}`; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}

/// Graph kinds of the four comparison topologies, in suite order.
pub fn comparison_topologies() -> Result<Vec<GraphKind>> {
    presets::TOPOLOGIES
        .iter()
        .map(|t| preset::<GraphFile>(&format!("graph-{t}"))?.graph.to_kind())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_a_usage_error() {
        let runner = Runner::new(Some(1)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let err = suite("figure", None, &runner, dir.path()).unwrap_err();
        assert!(matches!(err, CliError::Usage(_)));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn table1_suite_writes_the_dcc_table() {
        let runner = Runner::new(Some(1)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let written = suite("table1", None, &runner, dir.path()).unwrap();
        assert_eq!(written, [dir.path().join("table1/beta_table.csv")]);
        let text = std::fs::read_to_string(&written[0]).unwrap();
        assert_eq!(
            text.lines().nth(7).unwrap(),
            "0.000,0.000,0.000,0.018,0.500,0.982,0.999"
        );
    }

    #[test]
    fn schedule_doc_expands_every_tick() {
        let e = preset_experiment("er-dcc-gradual", None).unwrap();
        let doc = schedule_doc(&e).unwrap();
        assert_eq!(doc.levels.len(), 100);
        assert_eq!(doc.levels[0], [6]);
        assert_eq!(doc.levels[10], [5]);
        assert_eq!(doc.levels[99], [0]);
    }

    #[test]
    fn bad_names_never_escape_the_output_directory() {
        let dir = tempfile::tempdir().unwrap();
        let file: ModelFile = config::parse(r#"{"model": {"type": "dcc"}}"#, "t").unwrap();
        assert!(beta_table_cmd(&file, "../up", dir.path()).is_err());
        assert!(beta_table_cmd(&file, "ok", dir.path()).is_ok());
    }

    #[test]
    fn topologies_follow_suite_order() {
        let tags: Vec<_> = comparison_topologies()
            .unwrap()
            .iter()
            .map(|k| k.tag())
            .collect();
        assert_eq!(tags, presets::TOPOLOGIES);
    }
}
