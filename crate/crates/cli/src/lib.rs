//! Command-line front end: every subcommand reads JSON or built-in names and
//! prints a JSON report.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tropbetti_core::complex::mirror_check;
use tropbetti_core::divisor::cube::{cube_cup_kernel, cube_cup_matrix, cube_square};
use tropbetti_core::divisor::DivisorLab;
use tropbetti_core::triangulation::validate;
use tropbetti_core::{
    betti, BettiOptions, CentralTriangulation, Error, GF2Vector, LatticePolytope, Strategy,
    TropicalComplex,
};

pub mod inputs;
pub mod pipeline;

use inputs::{load_divisor, load_polytope, load_triangulation};

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "tropbetti",
    version,
    about = "Mod-2 tropical cohomology and Betti numbers of real Calabi-Yau patchworks"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for randomized triangulation strategies.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Let every edge of T constrain the Case systems, not only edges in the codimension-2 skeleton.
    #[arg(long, global = true)]
    pub strict_adjacency: bool,
    /// Force the Lefschetz comparison on or off (default: on iff Δ or Δ° is smooth).
    #[arg(long, global = true)]
    pub assume_lefschetz: Option<bool>,
    /// Accept degeneration of the real spectral sequence for n outside {3, 4}.
    #[arg(long, global = true)]
    pub assume_degeneration: bool,
    /// Worker threads.
    #[arg(long, global = true, env = "TROPBETTI_JOBS")]
    pub jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

/// A polytope with optional triangulation files for it and its dual.
#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    /// Built-in name (quintic, p2xp2, cube:d, cross:d, simplex:d, optionally /dual) or JSON file.
    #[arg(long, short)]
    pub polytope: String,
    #[arg(long)]
    pub triangulation: Option<PathBuf>,
    #[arg(long)]
    pub dual_triangulation: Option<PathBuf>,
    #[arg(long, default_value = "staircase")]
    pub strategy: Strategy,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Both,
    #[value(name = "X")]
    X,
    #[value(name = "Xmirror")]
    Mirror,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Polytope facts and, if given, a triangulation check.
    Validate {
        #[arg(long, short)]
        polytope: String,
        #[arg(long)]
        triangulation: Option<PathBuf>,
    },
    /// Dual polytope as JSON.
    Dualize {
        #[arg(long, short)]
        polytope: String,
    },
    /// Central primitive triangulation as JSON.
    Triangulate {
        #[arg(long, short)]
        polytope: String,
        #[arg(long, default_value = "staircase")]
        strategy: Strategy,
    },
    /// Tables `dim H^q(ℱ^p ⊗ F_2)`.
    Cohomology {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value_t = SideArg::Both)]
        side: SideArg,
    },
    /// Checks `h^{p,q}(X) = h^{n-p,q}(X°)` on the two tropical sides.
    MirrorCheck {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Runs the Case 1 / Case 2 checks at every point of the codimension-2 skeleton.
    Admissible {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        divisor: PathBuf,
    },
    /// Local configuration type at every vertex and edge, or at the ones given.
    Classify {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long)]
        vertex: Vec<usize>,
        #[arg(long)]
        edge: Vec<usize>,
    },
    /// Builds the global admissible divisor on a smooth 4-polytope.
    ConstructDivisor {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
    },
    /// Cup-product model of the Calabi-Yau in `(P^1)^{n+1}`.
    CubeCup {
        #[arg(long)]
        n: usize,
        /// Degree-1 class as a bit string of length n + 1, e.g. 1011.
        #[arg(long = "D")]
        d: String,
    },
    /// Connectedness and first Betti number for a divisor.
    Betti {
        #[command(flatten)]
        pair: PairArgs,
        /// Divisor JSON; without it, the global construction at --basepoint is used.
        #[arg(long)]
        divisor: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
    },
    /// Runs a full configuration and writes an archive of JSON artifacts.
    Pipeline {
        #[arg(long, short)]
        config: PathBuf,
        /// Overrides the output directory of the configuration.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

/// A report and the exit code it carries.
pub struct Outcome {
    pub report: Value,
    pub code: i32,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Self {
            report,
            code: EXIT_OK,
        }
    }
}

/// Maps an error chain to an exit code.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::HypothesisFailed { .. }) => EXIT_HYPOTHESIS,
        Some(Error::Assembly(_)) => EXIT_INTERNAL,
        _ => EXIT_VALIDATION,
    }
}

pub struct Pair {
    pub delta: LatticePolytope,
    pub t: CentralTriangulation,
    pub dual: LatticePolytope,
    pub t_dual: CentralTriangulation,
}

impl PairArgs {
    pub fn load(&self, seed: u64) -> Result<Pair> {
        let delta = load_polytope(&self.polytope, Path::new("."))?;
        let dual = delta.dualize()?;
        let t = load_triangulation(&delta, self.triangulation.as_deref(), self.strategy, seed)
            .context("triangulation of Δ")?;
        let t_dual = load_triangulation(
            &dual,
            self.dual_triangulation.as_deref(),
            self.strategy,
            seed,
        )
        .context("triangulation of Δ°")?;
        Ok(Pair {
            delta,
            t,
            dual,
            t_dual,
        })
    }
}

impl Global {
    pub fn betti_options(&self) -> BettiOptions {
        BettiOptions {
            strict_adjacency: self.strict_adjacency,
            assume_lefschetz: self.assume_lefschetz,
            assume_degeneration: self.assume_degeneration,
        }
    }
}

fn polytope_facts(p: &LatticePolytope) -> Value {
    json!({
        "dim": p.dim(),
        "vertices": p.vertices().len(),
        "f_vector": p.f_vector(),
        "lattice_points": p.lattice_points().len(),
        "boundary_points": p.boundary_points().len(),
        "interior_points": p.interior_points().len(),
        "reflexive": p.is_reflexive(),
        "smooth": p.is_smooth(),
        "normalized_volume": p.normalized_volume(),
    })
}

fn tables(pair: &Pair, side: SideArg) -> Result<Value> {
    let mut out = serde_json::Map::new();
    if side != SideArg::Mirror {
        let c = TropicalComplex::x_side(&pair.delta, &pair.t, &pair.dual, &pair.t_dual)?;
        out.insert("X".into(), serde_json::to_value(c.cohomology_table()?)?);
    }
    if side != SideArg::X {
        let c = TropicalComplex::mirror_side(&pair.delta, &pair.t, &pair.dual, &pair.t_dual)?;
        out.insert(
            "Xmirror".into(),
            serde_json::to_value(c.cohomology_table()?)?,
        );
    }
    Ok(Value::Object(out))
}

fn parse_bits(s: &str) -> Result<GF2Vector> {
    let bits = s
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => bail!("--D must be a string of 0 and 1, got {s:?}"),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GF2Vector::from_bits(&bits))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Validate {
            polytope,
            triangulation,
        } => {
            let p = load_polytope(polytope, Path::new("."))?;
            let mut report = json!({ "polytope": polytope_facts(&p) });
            let mut code = EXIT_OK;
            if let Some(path) = triangulation {
                let t = CentralTriangulation::from_json(&inputs::read_json(path)?)?;
                let v = validate(&p, &t);
                if !v.is_valid() {
                    code = EXIT_VALIDATION;
                }
                report["triangulation"] = serde_json::to_value(v)?;
            }
            Ok(Outcome { report, code })
        }
        Command::Dualize { polytope } => {
            let p = load_polytope(polytope, Path::new("."))?;
            Ok(Outcome::ok(serde_json::to_value(p.dualize()?.to_json())?))
        }
        Command::Triangulate { polytope, strategy } => {
            let p = load_polytope(polytope, Path::new("."))?;
            let t = tropbetti_core::triangulation::generate(&p, *strategy, g.seed)?;
            Ok(Outcome::ok(serde_json::to_value(t.to_json())?))
        }
        Command::Cohomology { pair, side } => Ok(Outcome::ok(tables(&pair.load(g.seed)?, *side)?)),
        Command::MirrorCheck { pair } => {
            let report = tables(&pair.load(g.seed)?, SideArg::Both)?;
            let x = serde_json::from_value(report["X"].clone())?;
            let m = serde_json::from_value(report["Xmirror"].clone())?;
            let (pass, first) = match mirror_check(&x, &m) {
                Ok(()) => (true, Value::Null),
                Err((p, q)) => (false, json!({ "p": p, "q": q })),
            };
            Ok(Outcome {
                report: json!({ "pass": pass, "first_mismatch": first, "tables": report }),
                code: if pass { EXIT_OK } else { EXIT_VALIDATION },
            })
        }
        Command::Admissible { pair, divisor } => {
            let pair = pair.load(g.seed)?;
            let l = load_divisor(divisor)?;
            let lab = DivisorLab::new(&pair.delta, &pair.t)?.strict(g.strict_adjacency);
            Ok(Outcome::ok(serde_json::to_value(lab.is_admissible(&l)?)?))
        }
        Command::Classify {
            pair,
            divisor,
            vertex,
            edge,
        } => {
            let pair = pair.load(g.seed)?;
            let l = load_divisor(divisor)?;
            let lab = DivisorLab::new(&pair.delta, &pair.t)?.strict(g.strict_adjacency);
            let p = &pair.delta;
            let vertices: Vec<usize> = if vertex.is_empty() && edge.is_empty() {
                (0..p.vertices().len()).collect()
            } else {
                vertex.clone()
            };
            let edges: Vec<usize> = if vertex.is_empty() && edge.is_empty() {
                p.faces_of_dim(1).map(|(e, _)| e).collect()
            } else {
                edge.clone()
            };
            let vs = vertices
                .iter()
                .map(|&v| Ok(json!({ "vertex": v, "class": lab.classify_vertex(v, &l)? })))
                .collect::<Result<Vec<_>>>()?;
            let es = edges
                .iter()
                .map(|&e| {
                    let ends: Vec<_> = p.faces()[e].vertices.clone();
                    Ok(json!({ "edge": e, "vertices": ends, "class": lab.classify_edge(e, &l)? }))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Outcome::ok(json!({ "vertices": vs, "edges": es })))
        }
        Command::ConstructDivisor { pair, basepoint } => {
            let pair = pair.load(g.seed)?;
            let lab = DivisorLab::new(&pair.delta, &pair.t)?.strict(g.strict_adjacency);
            Ok(Outcome::ok(serde_json::to_value(
                lab.construct_global(*basepoint)?,
            )?))
        }
        Command::CubeCup { n, d } => {
            let d = parse_bits(d)?;
            if d.len() != n + 1 {
                bail!(Error::contract(format!(
                    "--D needs {} bits for n = {n}",
                    n + 1
                )));
            }
            let squares_vanish = (0..1u64 << (n + 1)).all(|b| {
                cube_square(&GF2Vector::from_mask(n + 1, b))
                    .map(|s| s.is_zero())
                    .unwrap_or(false)
            });
            let kernel: Vec<Vec<u8>> = cube_cup_kernel(&d)?.iter().map(|v| v.to_bits()).collect();
            Ok(Outcome::ok(json!({
                "n": n,
                "D": d.to_bits(),
                "squares_vanish": squares_vanish,
                "rank": cube_cup_matrix(&d)?.rank(),
                "kernel_basis": kernel,
            })))
        }
        Command::Betti {
            pair,
            divisor,
            basepoint,
        } => {
            let pair = pair.load(g.seed)?;
            let l = match divisor {
                Some(path) => load_divisor(path)?,
                None => {
                    DivisorLab::new(&pair.delta, &pair.t)?
                        .strict(g.strict_adjacency)
                        .construct_global(*basepoint)?
                        .divisor
                }
            };
            let r = betti(
                &pair.delta,
                &pair.t,
                &pair.dual,
                &pair.t_dual,
                &l,
                &g.betti_options(),
            )?;
            Ok(Outcome::ok(serde_json::to_value(r)?))
        }
        Command::Pipeline { config, out_dir } => {
            let summary = pipeline::run_file(config, out_dir.as_deref())?;
            Ok(Outcome::ok(serde_json::to_value(summary)?))
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &impl serde::Serialize) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn bit_strings() {
        assert_eq!(parse_bits("101").unwrap().to_bits(), vec![1, 0, 1]);
        assert!(parse_bits("12").is_err());
    }

    #[test]
    fn error_codes() {
        let hyp = anyhow::Error::new(Error::HypothesisFailed {
            reason: String::new(),
            witness: Vec::new(),
        });
        assert_eq!(exit_code(&hyp), EXIT_HYPOTHESIS);
        assert_eq!(
            exit_code(&anyhow::Error::new(Error::Assembly("x".into()))),
            EXIT_INTERNAL
        );
        assert_eq!(exit_code(&anyhow::anyhow!("plain")), EXIT_VALIDATION);
    }

    #[test]
    fn jobs_and_side_parse() {
        let cli = Cli::try_parse_from([
            "tropbetti",
            "--jobs",
            "3",
            "cohomology",
            "-p",
            "cube:3",
            "--side",
            "Xmirror",
        ])
        .unwrap();
        assert_eq!(cli.global.jobs, Some(3));
        assert!(matches!(
            cli.command,
            Command::Cohomology {
                side: SideArg::Mirror,
                ..
            }
        ));
    }
}
