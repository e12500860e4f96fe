//! The graded poset of a tropical hypersurface built from a pair of central
//! triangulations, its multitangent sheaves over GF(2), and their cohomology.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{quotient_coords, wedge_subspace, GF2Matrix, GF2Vector, Quotient, WedgeBasis};
use crate::polytope::{parity, LatticePolytope};
use crate::triangulation::{carrier_of_set, CentralTriangulation};

/// A simplex of a central triangulation: a face of the boundary complex,
/// optionally coned to the origin. `{0}` itself is the empty face, coned.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Simplex {
    pub boundary: Vec<usize>,
    pub coned: bool,
}

impl Simplex {
    pub fn origin() -> Self {
        Self {
            boundary: Vec::new(),
            coned: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.boundary.len() + self.coned as usize - 1
    }

    /// Facets of the simplex (faces of codimension one).
    pub fn facets(&self) -> Vec<Simplex> {
        let mut out = Vec::new();
        for skip in 0..self.boundary.len() {
            let mut b = self.boundary.clone();
            b.remove(skip);
            if !b.is_empty() || self.coned {
                out.push(Simplex {
                    boundary: b,
                    coned: self.coned,
                });
            }
        }
        if self.coned && !self.boundary.is_empty() {
            out.push(Simplex {
                boundary: self.boundary.clone(),
                coned: false,
            });
        }
        out
    }
}

/// A cell `(τ, σ)`: `τ` contains the origin, `σ` lies in the face dual to the
/// smallest cone containing `τ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetCell {
    pub tau: Simplex,
    pub sigma: Simplex,
    /// `codim τ - dim σ`.
    pub dim: usize,
    #[serde(skip)]
    w_key: usize,
    #[serde(skip)]
    t_key: usize,
}

/// Which of the two posets of a mirror pair is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// First coordinates from the dual triangulation, second from `T`.
    X,
    /// The roles swapped.
    Mirror,
}

/// The poset with its per-cell data, ready for sheaf cohomology.
#[derive(Clone, Debug)]
pub struct TropicalComplex {
    ambient: usize,
    cells: Vec<PosetCell>,
    by_dim: Vec<Vec<usize>>,
    position: Vec<usize>,
    cofaces: Vec<Vec<usize>>,
    /// Mod-2 bases of `C(τ)^⊥`, interned.
    w_table: Vec<Vec<GF2Vector>>,
    /// Mod-2 bases of `⟨σ⟩`, interned.
    t_table: Vec<Vec<GF2Vector>>,
}

/// Smallest face of `poly` whose cone contains the cone over `simplex`, or
/// `None` for the zero cone `{0}`.
pub fn min_cone(
    poly: &LatticePolytope,
    tri: &CentralTriangulation,
    simplex: &Simplex,
) -> Option<usize> {
    if simplex.boundary.is_empty() {
        return None;
    }
    Some(carrier_of_set(poly, tri, &simplex.boundary))
}

/// The face of `target` dual to the cone over face `g` of `source`
/// (`None` means the zero cone, whose dual is all of `target`).
pub fn dual_face(target: &LatticePolytope, source: &LatticePolytope, g: Option<usize>) -> usize {
    match g {
        None => target.top_face(),
        Some(g) => target
            .dual_face_of(source, g)
            .expect("dual faces of a reflexive pair"),
    }
}

fn echelon(vectors: &[GF2Vector], len: usize) -> Vec<GF2Vector> {
    let ech = GF2Matrix::from_rows(len, vectors).row_echelon();
    (0..ech.pivots.len()).map(|i| ech.matrix.row(i)).collect()
}

struct Interner {
    table: Vec<Vec<GF2Vector>>,
    index: HashMap<Vec<GF2Vector>, usize>,
}

impl Interner {
    fn new() -> Self {
        Self {
            table: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn intern(&mut self, basis: Vec<GF2Vector>) -> usize {
        if let Some(&k) = self.index.get(&basis) {
            return k;
        }
        self.table.push(basis.clone());
        self.index.insert(basis, self.table.len() - 1);
        self.table.len() - 1
    }
}

impl TropicalComplex {
    /// The poset `𝒫¹(T°, T)` of `X_trop`: `tau_*` is the dual side.
    pub fn x_side(
        delta: &LatticePolytope,
        t: &CentralTriangulation,
        delta_dual: &LatticePolytope,
        t_dual: &CentralTriangulation,
    ) -> Result<Self> {
        Self::build(delta_dual, t_dual, delta, t)
    }

    /// The poset `𝒫¹(T, T°)` of the mirror.
    pub fn mirror_side(
        delta: &LatticePolytope,
        t: &CentralTriangulation,
        delta_dual: &LatticePolytope,
        t_dual: &CentralTriangulation,
    ) -> Result<Self> {
        Self::build(delta, t, delta_dual, t_dual)
    }

    /// Builds `𝒫¹` with first coordinates `τ` from `tau_tri` and second
    /// coordinates `σ` from `sigma_tri`.
    pub fn build(
        tau_poly: &LatticePolytope,
        tau_tri: &CentralTriangulation,
        sigma_poly: &LatticePolytope,
        sigma_tri: &CentralTriangulation,
    ) -> Result<Self> {
        let d = tau_poly.dim();
        if sigma_poly.dim() != d {
            return Err(Error::contract("polytopes of different dimensions"));
        }
        // faces of the σ-triangulation grouped by carrier face
        let sigma_faces = sigma_tri.all_faces();
        let mut by_carrier: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (k, s) in sigma_faces.iter().enumerate() {
            by_carrier
                .entry(carrier_of_set(sigma_poly, sigma_tri, s))
                .or_default()
                .push(k);
        }
        let mut taus = vec![Simplex::origin()];
        taus.extend(tau_tri.all_faces().into_iter().map(|b| Simplex {
            boundary: b,
            coned: true,
        }));

        let mut w_int = Interner::new();
        let mut t_int = Interner::new();
        let mut cells = Vec::new();
        let mut dual_face_cache: HashMap<Option<usize>, Vec<Simplex>> = HashMap::new();
        for tau in &taus {
            let g = min_cone(tau_poly, tau_tri, tau);
            let sigmas = dual_face_cache.entry(g).or_insert_with(|| {
                let f = dual_face(sigma_poly, tau_poly, g);
                let mut out = Vec::new();
                for (&c, ks) in &by_carrier {
                    if sigma_poly.face_contains(f, c) {
                        for &k in ks {
                            out.push(Simplex {
                                boundary: sigma_faces[k].clone(),
                                coned: false,
                            });
                            if f == sigma_poly.top_face() {
                                out.push(Simplex {
                                    boundary: sigma_faces[k].clone(),
                                    coned: true,
                                });
                            }
                        }
                    }
                }
                out.retain(|s| s.dim() >= 1);
                out.sort();
                out
            });
            if sigmas.is_empty() {
                continue;
            }
            let tau_vecs: Vec<GF2Vector> = tau
                .boundary
                .iter()
                .map(|&i| parity(&tau_tri.points()[i]))
                .collect();
            let w = if tau_vecs.is_empty() {
                (0..d).map(|i| GF2Vector::unit(d, i)).collect()
            } else {
                GF2Matrix::from_rows(d, &tau_vecs).kernel_basis()
            };
            if w.len() + tau_vecs.len() != d {
                return Err(Error::InvalidTriangulation(format!(
                    "simplex {tau:?} is not primitive mod 2"
                )));
            }
            let w_key = w_int.intern(echelon(&w, d));
            for sigma in sigmas.iter() {
                let tangent = tangent_basis(sigma_tri, sigma);
                if GF2Matrix::from_rows(d, &tangent).rank() != sigma.dim() {
                    return Err(Error::InvalidTriangulation(format!(
                        "simplex {sigma:?} is not primitive mod 2"
                    )));
                }
                let t_key = t_int.intern(echelon(&tangent, d));
                let dim = (d - tau.dim())
                    .checked_sub(sigma.dim())
                    .filter(|&q| q < d)
                    .ok_or_else(|| {
                        Error::Assembly(format!("cell ({tau:?}, {sigma:?}) has no valid dimension"))
                    })?;
                cells.push(PosetCell {
                    tau: tau.clone(),
                    sigma: sigma.clone(),
                    dim,
                    w_key,
                    t_key,
                });
            }
        }
        cells.sort_by(|a, b| (a.dim, &a.tau, &a.sigma).cmp(&(b.dim, &b.tau, &b.sigma)));
        let lookup: HashMap<(&Simplex, &Simplex), usize> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| ((&c.tau, &c.sigma), i))
            .collect();
        let mut cofaces = vec![Vec::new(); cells.len()];
        for (i, c) in cells.iter().enumerate() {
            let mut cf = Vec::new();
            if !c.tau.boundary.is_empty() {
                for tau2 in c.tau.facets().into_iter().filter(|t| t.coned) {
                    let j = lookup.get(&(&tau2, &c.sigma)).copied().ok_or_else(|| {
                        Error::Assembly(format!(
                            "coface ({tau2:?}, {:?}) missing from the poset",
                            c.sigma
                        ))
                    })?;
                    cf.push(j);
                }
            }
            for sigma2 in c.sigma.facets() {
                if sigma2.dim() >= 1 {
                    let j = lookup.get(&(&c.tau, &sigma2)).copied().ok_or_else(|| {
                        Error::Assembly(format!(
                            "coface ({:?}, {sigma2:?}) missing from the poset",
                            c.tau
                        ))
                    })?;
                    cf.push(j);
                }
            }
            cf.sort_unstable();
            cofaces[i] = cf;
        }
        let mut by_dim = vec![Vec::new(); d];
        let mut position = vec![0; cells.len()];
        for (i, c) in cells.iter().enumerate() {
            position[i] = by_dim[c.dim].len();
            by_dim[c.dim].push(i);
        }
        Ok(Self {
            ambient: d,
            cells,
            by_dim,
            position,
            cofaces,
            w_table: w_int.table,
            t_table: t_int.table,
        })
    }

    /// Dimension `n` of the hypersurface (ambient dimension minus one).
    pub fn n(&self) -> usize {
        self.ambient - 1
    }

    pub fn cells(&self) -> &[PosetCell] {
        &self.cells
    }

    /// Indices of the cells of dimension `q`.
    pub fn cells_of_dim(&self, q: usize) -> &[usize] {
        self.by_dim.get(q).map_or(&[], Vec::as_slice)
    }

    /// Cells of dimension one higher incident to cell `i`.
    pub fn cofaces(&self, i: usize) -> &[usize] {
        &self.cofaces[i]
    }

    /// `ℱ^p` at cell `i`.
    pub fn fiber(&self, p: usize, i: usize) -> Result<SheafFiber> {
        let c = &self.cells[i];
        SheafFiber::new(
            p,
            self.ambient,
            &self.w_table[c.w_key],
            &self.t_table[c.t_key],
        )
    }

    /// The coboundary `C^q → C^{q+1}` of `ℱ^p`.
    pub fn coboundary(&self, p: usize, q: usize) -> Result<GF2Matrix> {
        let mut cache = FiberCache::new(self, p);
        self.assemble(q, &mut cache)
    }

    fn assemble(&self, q: usize, cache: &mut FiberCache) -> Result<GF2Matrix> {
        let src = self.cells_of_dim(q);
        let tgt = self.cells_of_dim(q + 1);
        let src_off = offsets(
            src.iter().map(|&i| cache.get(i).map(|f| f.dim())),
            src.len(),
        )?;
        let tgt_off = offsets(
            tgt.iter().map(|&i| cache.get(i).map(|f| f.dim())),
            tgt.len(),
        )?;
        let mut m = GF2Matrix::zeros(*tgt_off.last().unwrap(), *src_off.last().unwrap());
        for (a, &i) in src.iter().enumerate() {
            for &j in &self.cofaces[i] {
                let b = self.position[j];
                let block = cache.block(i, j)?;
                for (col, rows) in block.iter().enumerate() {
                    for &row in rows {
                        m.flip(tgt_off[b] + row, src_off[a] + col);
                    }
                }
            }
        }
        Ok(m)
    }

    /// Dimension of the cochain space `C^q(ℱ^p)`.
    pub fn cochain_dim(&self, p: usize, q: usize) -> Result<usize> {
        let mut cache = FiberCache::new(self, p);
        self.cells_of_dim(q)
            .iter()
            .map(|&i| cache.get(i).map(|f| f.dim()))
            .sum()
    }

    /// All dimensions `dim H^q(ℱ^p)` for `0 ≤ p, q ≤ n`, checking `δ∘δ = 0`.
    pub fn cohomology_table(&self) -> Result<CohomologyTable> {
        let n = self.n();
        let jobs: Vec<(usize, usize)> = (0..=n).flat_map(|p| (0..n).map(move |q| (p, q))).collect();
        let mats: Vec<((usize, usize), GF2Matrix)> = jobs
            .par_iter()
            .map(|&(p, q)| {
                let mut cache = FiberCache::new(self, p);
                self.assemble(q, &mut cache).map(|m| ((p, q), m))
            })
            .collect::<Result<_>>()?;
        let mats: HashMap<(usize, usize), GF2Matrix> = mats.into_iter().collect();
        let composite_checks: Vec<(usize, usize)> = (0..=n)
            .flat_map(|p| (0..n.saturating_sub(1)).map(move |q| (p, q)))
            .collect();
        composite_checks.par_iter().try_for_each(|&(p, q)| {
            let dd = mats[&(p, q + 1)].mul(&mats[&(p, q)])?;
            if dd.is_zero() {
                Ok(())
            } else {
                Err(Error::Assembly(format!("δ∘δ ≠ 0 for p = {p} at q = {q}")))
            }
        })?;
        let ranks: HashMap<(usize, usize), usize> =
            jobs.par_iter().map(|&k| (k, mats[&k].rank())).collect();
        let mut dims = vec![vec![0; n + 1]; n + 1];
        for p in 0..=n {
            for q in 0..=n {
                let c = if q < n {
                    mats[&(p, q)].cols()
                } else {
                    mats[&(p, q - 1)].rows()
                };
                let out = if q < n { ranks[&(p, q)] } else { 0 };
                let inc = if q > 0 { ranks[&(p, q - 1)] } else { 0 };
                dims[p][q] = c - out - inc;
            }
        }
        Ok(CohomologyTable { n, dims })
    }
}

fn offsets(dims: impl Iterator<Item = Result<usize>>, len: usize) -> Result<Vec<usize>> {
    let mut off = Vec::with_capacity(len + 1);
    off.push(0);
    for d in dims {
        let last = *off.last().unwrap();
        off.push(last + d?);
    }
    Ok(off)
}

fn tangent_basis(tri: &CentralTriangulation, s: &Simplex) -> Vec<GF2Vector> {
    let pts: Vec<GF2Vector> = s
        .boundary
        .iter()
        .map(|&i| parity(&tri.points()[i]))
        .collect();
    if s.coned {
        pts
    } else {
        pts[1..].iter().map(|v| v.xor(&pts[0])).collect()
    }
}

/// `ℱ^p(τ, σ) = ⋀^p W / (vol_σ ∧ ⋀^{p - dim σ} W)` with `W = C(τ)^⊥ ⊗ F_2`.
#[derive(Clone, Debug)]
pub struct SheafFiber {
    pub p: usize,
    /// Spanning set of `⋀^p W` in wedge coordinates of the ambient space.
    pub space: Vec<GF2Vector>,
    /// Spanning set of the denominator.
    pub denominator: Vec<GF2Vector>,
    pub quotient: Quotient,
}

impl SheafFiber {
    fn new(p: usize, ambient: usize, w: &[GF2Vector], tangent: &[GF2Vector]) -> Result<Self> {
        let wb = WedgeBasis::new(ambient, p);
        let space = if p <= w.len() {
            wedge_subspace(w, p, ambient)?
        } else {
            Vec::new()
        };
        let s = tangent.len();
        let denominator = if p >= s && p - s <= w.len() {
            let tb = WedgeBasis::new(ambient, s);
            let vol = tb.wedge(tangent);
            let rest = WedgeBasis::new(ambient, p - s);
            wedge_subspace(w, p - s, ambient)?
                .iter()
                .map(|x| WedgeBasis::product(&tb, &vol, &rest, x))
                .collect()
        } else {
            Vec::new()
        };
        let quotient = quotient_coords(&space, &denominator, wb.len())?;
        Ok(Self {
            p,
            space,
            denominator,
            quotient,
        })
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// Representative in `⋀^p` coordinates of the `k`-th basis vector.
    pub fn lift(&self, k: usize) -> &GF2Vector {
        &self.space[self.quotient.complement()[k]]
    }
}

/// `(w_key, t_key)` of a source and a target cell.
type BlockKey = ((usize, usize), (usize, usize));

/// Fibers and block maps for one `p`, shared between cells with equal data.
struct FiberCache<'a> {
    complex: &'a TropicalComplex,
    p: usize,
    fibers: HashMap<(usize, usize), SheafFiber>,
    blocks: HashMap<BlockKey, Vec<Vec<usize>>>,
}

impl<'a> FiberCache<'a> {
    fn new(complex: &'a TropicalComplex, p: usize) -> Self {
        Self {
            complex,
            p,
            fibers: HashMap::new(),
            blocks: HashMap::new(),
        }
    }

    fn key(&self, i: usize) -> (usize, usize) {
        let c = &self.complex.cells[i];
        (c.w_key, c.t_key)
    }

    fn get(&mut self, i: usize) -> Result<&SheafFiber> {
        let key = self.key(i);
        if !self.fibers.contains_key(&key) {
            let f = SheafFiber::new(
                self.p,
                self.complex.ambient,
                &self.complex.w_table[key.0],
                &self.complex.t_table[key.1],
            )?;
            self.fibers.insert(key, f);
        }
        Ok(&self.fibers[&key])
    }

    /// Block from cell `i` to its coface `j`: for each source basis vector,
    /// the target coordinates that are 1.
    fn block(&mut self, i: usize, j: usize) -> Result<&Vec<Vec<usize>>> {
        let key = (self.key(i), self.key(j));
        if !self.blocks.contains_key(&key) {
            self.get(i)?;
            self.get(j)?;
            let src = &self.fibers[&key.0];
            let tgt = &self.fibers[&key.1];
            let cols = (0..src.dim())
                .map(|k| {
                    tgt.quotient
                        .project(src.lift(k))
                        .map(|v| v.iter_ones().collect())
                        .map_err(|e| Error::Assembly(format!("structure map undefined: {e}")))
                })
                .collect::<Result<Vec<Vec<usize>>>>()?;
            self.blocks.insert(key, cols);
        }
        Ok(&self.blocks[&key])
    }
}

/// `dims[p][q] = dim H^q(X; ℱ^p ⊗ F_2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub n: usize,
    pub dims: Vec<Vec<usize>>,
}

/// One entry of a table in flat form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub p: usize,
    pub q: usize,
    pub dim: usize,
}

impl CohomologyTable {
    pub fn get(&self, p: usize, q: usize) -> usize {
        self.dims
            .get(p)
            .and_then(|r| r.get(q))
            .copied()
            .unwrap_or(0)
    }

    /// `Σ_q (-1)^q dims[p][q]` for each `p`.
    pub fn euler_characteristics(&self) -> Vec<i64> {
        self.dims
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(q, &d)| if q % 2 == 0 { d as i64 } else { -(d as i64) })
                    .sum()
            })
            .collect()
    }

    pub fn entries(&self) -> Vec<TableEntry> {
        let mut out = Vec::new();
        for (p, row) in self.dims.iter().enumerate() {
            for (q, &dim) in row.iter().enumerate() {
                out.push(TableEntry { p, q, dim });
            }
        }
        out
    }
}

/// `dims_a[p][q] == dims_b[n - p][q]` for all `p, q`; on failure returns the
/// first offending `(p, q)`.
pub fn mirror_check(
    a: &CohomologyTable,
    b: &CohomologyTable,
) -> std::result::Result<(), (usize, usize)> {
    if a.n != b.n {
        return Err((0, 0));
    }
    let n = a.n;
    for p in 0..=n {
        for q in 0..=n {
            if a.get(p, q) != b.get(n - p, q) {
                return Err((p, q));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_facets() {
        let s = Simplex {
            boundary: vec![1, 4],
            coned: true,
        };
        assert_eq!(s.dim(), 2);
        let f = s.facets();
        assert_eq!(f.len(), 3);
        assert!(f.contains(&Simplex {
            boundary: vec![1, 4],
            coned: false
        }));
        assert_eq!(Simplex::origin().dim(), 0);
        assert!(Simplex::origin().facets().is_empty());
    }

    #[test]
    fn edge_fiber_dimensions() {
        let d = 4;
        let w: Vec<GF2Vector> = (0..d).map(|i| GF2Vector::unit(d, i)).collect();
        let tangent = vec![GF2Vector::from_ints(&[1, 1, 0, 0])];
        assert_eq!(SheafFiber::new(0, d, &w, &tangent).unwrap().dim(), 1);
        assert_eq!(SheafFiber::new(1, d, &w, &tangent).unwrap().dim(), 3);
        assert_eq!(SheafFiber::new(3, d, &w, &tangent).unwrap().dim(), 1);
    }
}
