//! Loading polytopes, triangulations and divisors from names or JSON files.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use tropbetti_core::builtin;
use tropbetti_core::polytope::PolytopeJson;
use tropbetti_core::triangulation::{generate, validate, TriangulationJson};
use tropbetti_core::{CentralTriangulation, DivisorF2, Error, LatticePolytope, Strategy};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// A built-in name such as `quintic` or `cube:4/dual`, or a path to a polytope JSON file.
pub fn load_polytope(source: &str, base: &Path) -> Result<LatticePolytope> {
    let path = base.join(source);
    if path.is_file() {
        let j: PolytopeJson = read_json(&path)?;
        return LatticePolytope::from_json(&j)
            .with_context(|| format!("polytope {}", path.display()));
    }
    Ok(builtin::by_name(source)?)
}

/// Reads a triangulation file and validates it, or generates one.
pub fn load_triangulation(
    p: &LatticePolytope,
    file: Option<&Path>,
    strategy: Strategy,
    seed: u64,
) -> Result<CentralTriangulation> {
    match file {
        Some(path) => {
            let j: TriangulationJson = read_json(path)?;
            let t = CentralTriangulation::from_json(&j)?;
            let report = validate(p, &t);
            if !report.is_valid() {
                return Err(Error::InvalidTriangulation(format!(
                    "{}: {}",
                    path.display(),
                    report.failures.join("; ")
                ))
                .into());
            }
            Ok(t)
        }
        None => Ok(generate(p, strategy, seed)?),
    }
}

pub fn load_divisor(path: &Path) -> Result<DivisorF2> {
    read_json(path)
}
