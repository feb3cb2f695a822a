//! On-disk formats.
//!
//! * Graph files: `nodes <N>`, then `n <id> <belief>` per node and
//!   `e <u> <v>` (with `u < v`) per edge.
//! * Trace CSV: `tick`, `level_0_mean`..`level_6_mean`,
//!   `level_0_var`..`level_6_var`; six decimals.
//! * Beta table CSV: header `b_0`..`b_6`, then one row per `b_u`; three decimals.
//! * Census CSV: `graph_type,tau,b_u,proportion`.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use podsim_core::paths::PathCensusRow;
use podsim_core::{BatchTrace, Belief, BetaTable, SocialGraph};

use crate::error::{CliError, Result};

pub fn write_graph(g: &SocialGraph) -> String {
    let mut out = String::new();
    writeln!(out, "nodes {}", g.node_count()).unwrap();
    for (id, b) in g.beliefs().iter().enumerate() {
        writeln!(out, "n {id} {b}").unwrap();
    }
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}

pub fn read_graph(text: &str) -> Result<SocialGraph> {
    let bad = |line: usize, reason: &str| CliError::GraphFormat {
        line,
        reason: reason.to_owned(),
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (first, header) = lines
        .next()
        .ok_or_else(|| bad(1, "missing `nodes` header"))?;
    let n: usize = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["nodes", count] => count
            .parse()
            .map_err(|_| bad(first, "node count is not a number"))?,
        _ => return Err(bad(first, "expected `nodes <N>`")),
    };
    let mut beliefs: Vec<Option<Belief>> = vec![None; n];
    let mut edges = Vec::new();
    for (line, text) in lines {
        let parts: Vec<&str> = text.split_whitespace().collect();
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| bad(line, "expected a non-negative integer"))
        };
        match parts[..] {
            ["n", id, level] => {
                let id = num(id)?;
                let level = u8::try_from(num(level)?)
                    .ok()
                    .and_then(|x| Belief::new(x).ok());
                let level = level.ok_or_else(|| bad(line, "belief must lie in 0..=6"))?;
                let slot = beliefs
                    .get_mut(id)
                    .ok_or_else(|| bad(line, "node id out of range"))?;
                if slot.replace(level).is_some() {
                    return Err(bad(line, "node listed twice"));
                }
            }
            ["e", u, v] => {
                let (u, v) = (num(u)?, num(v)?);
                if u >= v {
                    return Err(bad(line, "edge must be written as `e u v` with u < v"));
                }
                edges.push((u, v));
            }
            _ => return Err(bad(line, "expected `n <id> <belief>` or `e <u> <v>`")),
        }
    }
    let beliefs = beliefs
        .into_iter()
        .enumerate()
        .map(|(id, b)| b.ok_or_else(|| bad(first, &format!("node {id} has no `n` line"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(SocialGraph::from_edges(beliefs, edges)?)
}

pub fn trace_header() -> String {
    let mut cols = vec!["tick".to_owned()];
    cols.extend((0..Belief::LEVELS).map(|l| format!("level_{l}_mean")));
    cols.extend((0..Belief::LEVELS).map(|l| format!("level_{l}_var")));
    cols.join(",")
}

pub fn trace_csv(trace: &BatchTrace) -> String {
    let mut out = trace_header();
    out.push('\n');
    for (tick, (mean, var)) in trace.mean.iter().zip(&trace.variance).enumerate() {
        write!(out, "{tick}").unwrap();
        for x in mean.0.iter().chain(&var.0) {
            write!(out, ",{x:.6}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn beta_table_csv(table: &BetaTable) -> String {
    let mut out = (0..Belief::LEVELS)
        .map(|l| format!("b_{l}"))
        .collect::<Vec<_>>()
        .join(",");
    out.push('\n');
    for row in table.rows() {
        let cells: Vec<String> = row.iter().map(|p| three_decimals(p.get())).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Never rounds a probability below 1 up to `1.000`.
fn three_decimals(p: f64) -> String {
    if (0.9995..1.0).contains(&p) {
        "0.999".to_owned()
    } else {
        format!("{p:.3}")
    }
}

pub fn census_csv(rows: &[PathCensusRow]) -> String {
    let mut out = String::from("graph_type,tau,b_u,proportion\n");
    for row in rows {
        for (b_u, p) in row.proportions.iter().enumerate() {
            writeln!(out, "{},{},{b_u},{p:.4}", row.graph_type, row.tau).unwrap();
        }
    }
    out
}

/// Writes `contents` to a temporary file beside `path` and renames it into
/// place, creating parent directories as needed.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(contents).map_err(|e| CliError::io(path, e))?;
    tmp.as_file()
        .sync_all()
        .map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}
