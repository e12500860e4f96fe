//! Config-driven end-to-end runs writing a directory of JSON artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tropbetti_core::divisor::DivisorLab;
use tropbetti_core::{betti, BettiOptions, BettiReport, DivisorF2, Strategy};

use crate::inputs::{load_divisor, load_polytope, load_triangulation, read_json};
use crate::render;

/// Relative paths are resolved against the directory holding the config.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub polytope: String,
    #[serde(default = "staircase")]
    pub strategy: Strategy,
    #[serde(default)]
    pub dual_strategy: Option<Strategy>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub triangulation: Option<PathBuf>,
    #[serde(default)]
    pub dual_triangulation: Option<PathBuf>,
    pub divisor: DivisorSource,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub strict_adjacency: bool,
    #[serde(default)]
    pub assume_lefschetz: Option<bool>,
    #[serde(default)]
    pub assume_degeneration: bool,
}

fn staircase() -> Strategy {
    Strategy::Staircase
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DivisorSource {
    Empty,
    Construct { basepoint: usize },
    Support(Vec<usize>),
    File(PathBuf),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Summary {
    pub output_dir: PathBuf,
    pub files: Vec<String>,
    pub connected: tropbetti_core::Connectedness,
    pub b1: Option<usize>,
}

pub fn run_file(path: &Path, out_override: Option<&Path>) -> Result<Summary> {
    let config: Config = read_json(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let out = match out_override {
        Some(o) => o.to_path_buf(),
        None => base.join(&config.output_dir),
    };
    run(&config, base, &out)
}

pub fn run(config: &Config, base: &Path, out: &Path) -> Result<Summary> {
    let delta = load_polytope(&config.polytope, base)?;
    let dual = delta.dualize()?;
    let resolve = |p: &Option<PathBuf>| p.as_ref().map(|p| base.join(p));
    let t = load_triangulation(
        &delta,
        resolve(&config.triangulation).as_deref(),
        config.strategy,
        config.seed,
    )
    .context("triangulation of Δ")?;
    let t_dual = load_triangulation(
        &dual,
        resolve(&config.dual_triangulation).as_deref(),
        config.dual_strategy.unwrap_or(config.strategy),
        config.seed,
    )
    .context("triangulation of Δ°")?;

    let lab = DivisorLab::new(&delta, &t)?.strict(config.strict_adjacency);
    let mut artifacts: Vec<(&str, String)> = Vec::new();
    let divisor = match &config.divisor {
        DivisorSource::Empty => DivisorF2::empty(),
        DivisorSource::Support(s) => DivisorF2::from_support(s.iter().copied()),
        DivisorSource::File(f) => load_divisor(&base.join(f))?,
        DivisorSource::Construct { basepoint } => {
            let g = lab.construct_global(*basepoint)?;
            artifacts.push(("construction.json", render(&g)?));
            g.divisor
        }
    };
    let opts = BettiOptions {
        strict_adjacency: config.strict_adjacency,
        assume_lefschetz: config.assume_lefschetz,
        assume_degeneration: config.assume_degeneration,
    };
    let report: BettiReport = betti(&delta, &t, &dual, &t_dual, &divisor, &opts)?;

    artifacts.push(("polytope.json", render(&delta.to_json())?));
    artifacts.push(("dual_polytope.json", render(&dual.to_json())?));
    artifacts.push(("triangulation.json", render(&t.to_json())?));
    artifacts.push(("dual_triangulation.json", render(&t_dual.to_json())?));
    artifacts.push(("divisor.json", render(&divisor)?));
    artifacts.push((
        "cohomology.json",
        render(&json!({ "X": report.x_table, "Xmirror": report.mirror_table }))?,
    ));
    artifacts.push(("betti.json", render(&report)?));
    artifacts.push((
        "summary.txt",
        summary_text(
            config,
            &report,
            t.simplices().len(),
            t_dual.simplices().len(),
        ),
    ));
    artifacts.sort_by(|a, b| a.0.cmp(b.0));

    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    for (name, body) in &artifacts {
        let path = out.join(name);
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(Summary {
        output_dir: out.to_path_buf(),
        files: artifacts.iter().map(|(n, _)| n.to_string()).collect(),
        connected: report.connected,
        b1: report.b1,
    })
}

fn summary_text(
    config: &Config,
    r: &BettiReport,
    simplices: usize,
    dual_simplices: usize,
) -> String {
    let mut s = String::new();
    s.push_str(&format!("polytope: {}\n", config.polytope));
    s.push_str(&format!(
        "boundary simplices: {simplices} (dual {dual_simplices})\n"
    ));
    s.push_str(&format!("n = {}\n", r.n));
    s.push_str("X side, dims[p][q]:\n");
    for row in &r.x_table.dims {
        s.push_str(&format!("  {row:?}\n"));
    }
    s.push_str(&format!("admissible: {}\n", r.audit.admissible));
    s.push_str(&format!("connected: {:?}\n", r.connected));
    match (r.b1, &r.formula_used) {
        (Some(b), Some(f)) => s.push_str(&format!("b1 = {b} ({f})\n")),
        _ => s.push_str("b1 not determined\n"),
    }
    if let Some(b2) = r.b2 {
        s.push_str(&format!("b2 = {b2}\n"));
    }
    for note in &r.audit.notes {
        s.push_str(&format!("note: {note}\n"));
    }
    s
}
