//! Connected components and the first Betti number of a real Calabi-Yau
//! patchwork, with an audit of every hypothesis used.

use serde::{Deserialize, Serialize};

use crate::complex::{CohomologyTable, TropicalComplex};
use crate::divisor::{AdmissibilityReport, DivisorF2, DivisorLab, RestrictionVerdict};
use crate::error::{Error, Result};
use crate::polytope::LatticePolytope;
use crate::triangulation::{validate, CentralTriangulation};

#[derive(Clone, Debug, Default)]
pub struct BettiOptions {
    pub strict_adjacency: bool,
    /// Override for the Lefschetz-type comparison; by default it is taken as
    /// verified when `Δ` or `Δ°` is smooth.
    pub assume_lefschetz: Option<bool>,
    /// Accept degeneration of the real spectral sequence outside `n ∈ {3, 4}`.
    pub assume_degeneration: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Connectedness {
    Connected,
    TwoComponents,
    Unknown,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BettiAudit {
    pub delta_smooth: bool,
    pub dual_smooth: bool,
    pub admissible: bool,
    pub admissibility_failures: Vec<usize>,
    pub hypersurface_level: bool,
    pub degeneration: bool,
    pub lefschetz: bool,
    pub restriction: RestrictionVerdict,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BettiReport {
    pub n: usize,
    pub connected: Connectedness,
    pub b1: Option<usize>,
    /// Only for `n = 4` with two components.
    pub b2: Option<usize>,
    pub formula_used: Option<String>,
    pub audit: BettiAudit,
    pub x_table: CohomologyTable,
    pub mirror_table: CohomologyTable,
}

fn is_cube(p: &LatticePolytope) -> bool {
    let d = p.dim();
    p.vertices().len() == 1 << d
        && p.vertices()
            .iter()
            .all(|v| v.iter().all(|&x| x == 1 || x == -1))
}

/// Computes the Betti report for the patchwork given by `L` on `(Δ, T)`,
/// where `(Δ°, T°)` is the dual side.
pub fn betti(
    delta: &LatticePolytope,
    t: &CentralTriangulation,
    dual: &LatticePolytope,
    t_dual: &CentralTriangulation,
    l: &DivisorF2,
    opts: &BettiOptions,
) -> Result<BettiReport> {
    for (name, p, tri) in [("T", delta, t), ("T°", dual, t_dual)] {
        let report = validate(p, tri);
        if !report.is_valid() {
            return Err(Error::InvalidTriangulation(format!(
                "{name}: {}",
                report.failures.join("; ")
            )));
        }
    }
    let d = delta.dim();
    if d < 2 {
        return Err(Error::Unsupported("dimension below 2".into()));
    }
    let n = d - 1;
    let (x, mirror) = rayon::join(
        || TropicalComplex::x_side(delta, t, dual, t_dual).and_then(|c| c.cohomology_table()),
        || TropicalComplex::mirror_side(delta, t, dual, t_dual).and_then(|c| c.cohomology_table()),
    );
    let (x_table, mirror_table) = (x?, mirror?);

    let lab = DivisorLab::new(delta, t)?.strict(opts.strict_adjacency);
    let adm: AdmissibilityReport = lab.is_admissible(l)?;
    let restriction = lab.restriction_is_zero(l, Some(mirror_table.get(1, 1)));
    let delta_smooth = delta.is_smooth();
    let dual_smooth = dual.is_smooth();
    let mut audit = BettiAudit {
        delta_smooth,
        dual_smooth,
        admissible: adm.admissible,
        admissibility_failures: adm.failures.clone(),
        hypersurface_level: adm.hypersurface_level,
        degeneration: n == 3 || n == 4 || opts.assume_degeneration,
        lefschetz: opts.assume_lefschetz.unwrap_or(delta_smooth || dual_smooth),
        restriction: restriction.clone(),
        notes: Vec::new(),
    };
    if opts.assume_degeneration && !(n == 3 || n == 4) {
        audit
            .notes
            .push("degeneration of the real spectral sequence assumed".into());
    }

    let connected = match restriction {
        RestrictionVerdict::Zero { .. } => Connectedness::TwoComponents,
        RestrictionVerdict::NonzeroCertified => Connectedness::Connected,
        RestrictionVerdict::Unknown { .. } => Connectedness::Unknown,
    };
    let mut report = BettiReport {
        n,
        connected,
        b1: None,
        b2: None,
        formula_used: None,
        audit,
        x_table,
        mirror_table,
    };

    if n > 4 && is_cube(dual) && connected == Connectedness::Connected {
        report.b1 = Some(report.x_table.get(n - 1, 1));
        report.formula_used = Some("h^{n-1,1}".into());
        report
            .audit
            .notes
            .push("dual-cube case: β ↦ β² + β∪D has kernel {0, D}".into());
        return Ok(report);
    }
    if n == 3 && is_cube(dual) && connected == Connectedness::Connected {
        report
            .audit
            .notes
            .push("conditional: the n = 3 dual-cube case with D ≠ 0 relies on an unproven transversality claim".into());
    }

    let a = &report.audit;
    let mut blockers = Vec::new();
    if !(a.delta_smooth || a.dual_smooth) {
        blockers.push("neither Δ nor Δ° is smooth");
    }
    if !a.hypersurface_level {
        blockers.push("n < 3: admissibility only certified on the ambient toric variety");
    }
    if !a.admissible {
        blockers.push("L is not admissible");
    }
    if !a.degeneration {
        blockers.push("degeneration not known for this n");
    }
    if !a.lefschetz {
        blockers.push("Lefschetz comparison not available");
    }
    if connected == Connectedness::Unknown {
        blockers.push("connectedness undecided");
    }
    if !blockers.is_empty() {
        let notes: Vec<String> = blockers
            .into_iter()
            .map(|b| format!("b1 withheld: {b}"))
            .collect();
        report.audit.notes.extend(notes);
        return Ok(report);
    }

    let x = &report.x_table;
    let sum = x.get(n - 1, 1) + x.get(1, 1);
    if connected == Connectedness::Connected {
        report.b1 = Some(sum - 1);
        report.formula_used = Some("h^{n-1,1}+h^{1,1}-1".into());
    } else {
        report.b1 = Some(sum);
        report.formula_used = Some("h^{n-1,1}+h^{1,1}".into());
        if n == 4 {
            report.b2 = Some(2 * x.get(4, 0) + x.get(2, 2) - 2 * x.get(0, 0));
        }
    }
    Ok(report)
}
