//! Mod-2 toric divisors on the boundary points of a triangulation: principal
//! divisors, the local Case 1 / Case 2 conditions, configuration classifiers
//! and the global construction for smooth 4-polytopes.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{GF2Matrix, GF2Vector};
use crate::lattice::{self, Point};
use crate::polytope::{parity, AffineF2, LatticePolytope};
use crate::triangulation::{carrier_of_set, AdjacencyGraph, CentralTriangulation};

pub mod cube;

/// A divisor `Σ ε_v D_v` over GF(2), stored as the set `{v : ε_v = 1}` of
/// triangulation point indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorF2 {
    pub support: BTreeSet<usize>,
}

impl DivisorF2 {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_support(support: impl IntoIterator<Item = usize>) -> Self {
        Self {
            support: support.into_iter().collect(),
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.support.contains(&v)
    }

    /// Sum over GF(2): symmetric difference of supports.
    pub fn add(&self, other: &Self) -> Self {
        Self {
            support: self
                .support
                .symmetric_difference(&other.support)
                .copied()
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }
}

/// Result of one local Case check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalVerdict {
    pub point: usize,
    pub status: CaseStatus,
    /// Solution `m ∈ N ⊗ F_2` of the constraint system, if any.
    pub witness: Option<Vec<u8>>,
    pub constraint_count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseStatus {
    Case1,
    Case2,
    Fail,
}

/// Per-point verdicts over `Sk_{n-1} ∂Δ`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub verdicts: Vec<LocalVerdict>,
    pub failures: Vec<usize>,
    /// Whether the certificate reaches the hypersurface (needs `n ≥ 3`) or
    /// stays at the level of the ambient toric variety.
    pub hypersurface_level: bool,
    pub strict_adjacency: bool,
}

/// Whether `D|_{X°}` vanishes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RestrictionVerdict {
    /// `L + principal(m)` has empty effective support for this `m`.
    Zero {
        m: Vec<u8>,
    },
    /// No principal shift clears the effective support, and the divisors
    /// supported in facet interiors are known to span the whole kernel of restriction.
    NonzeroCertified,
    Unknown {
        reason: String,
    },
}

/// Local configuration types around a vertex or an edge of `Δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConfigClass {
    SimpleVertex,
    PointedVertex,
    NonAdmissibleVertex,
    SimpleEdge,
    EmptyEdge,
    NonAdmissibleEdge,
    Other,
}

/// Everything needed to reason about divisors on one triangulated polytope.
pub struct DivisorLab<'a> {
    poly: &'a LatticePolytope,
    tri: &'a CentralTriangulation,
    adjacency: AdjacencyGraph,
    /// Carrier face (in `poly`) of each triangulation point.
    carrier: Vec<usize>,
    parities: Vec<GF2Vector>,
    /// Neighbours joined by an edge of `T` lying in `Sk_{n-1} ∂Δ`.
    skeletal: Vec<Vec<usize>>,
    strict: bool,
}

impl<'a> DivisorLab<'a> {
    pub fn new(poly: &'a LatticePolytope, tri: &'a CentralTriangulation) -> Result<Self> {
        let carrier = tri
            .points()
            .iter()
            .map(|x| {
                poly.point_index(x).map(|i| poly.carrier(i)).ok_or_else(|| {
                    Error::InvalidTriangulation(format!(
                        "{x:?} is not a lattice point of the polytope"
                    ))
                })
            })
            .collect::<Result<_>>()?;
        let adjacency = tri.adjacency()?;
        let top = poly.dim().saturating_sub(2);
        let skeletal = (0..tri.points().len())
            .map(|r| {
                adjacency
                    .neighbours(r)
                    .iter()
                    .copied()
                    .filter(|&w| poly.faces()[carrier_of_set(poly, tri, &[r, w])].dim <= top)
                    .collect()
            })
            .collect();
        Ok(Self {
            poly,
            tri,
            adjacency,
            carrier,
            parities: tri.points().iter().map(|x| parity(x)).collect(),
            skeletal,
            strict: false,
        })
    }

    /// By default `r ↔ w` only when the edge `[r, w]` of `T` lies in
    /// `Sk_{n-1} ∂Δ`: products `D_r ∪ D_w` along other edges already vanish
    /// on the hypersurface, which misses the orbits of cones over facet
    /// interiors. With `strict`, every edge of `T` counts.
    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn polytope(&self) -> &LatticePolytope {
        self.poly
    }

    pub fn triangulation(&self) -> &CentralTriangulation {
        self.tri
    }

    pub fn adjacency(&self) -> &AdjacencyGraph {
        &self.adjacency
    }

    /// Neighbours of `r` under the adjacency in force.
    pub fn neighbours(&self, r: usize) -> &[usize] {
        if self.strict {
            self.adjacency.neighbours(r)
        } else {
            &self.skeletal[r]
        }
    }

    fn ambient(&self) -> usize {
        self.poly.dim()
    }

    fn carrier_dim(&self, v: usize) -> usize {
        self.poly.faces()[self.carrier[v]].dim
    }

    /// Points interior to a facet.
    pub fn in_facet_interior(&self, v: usize) -> bool {
        self.carrier_dim(v) + 1 == self.ambient()
    }

    /// `Sk_{n-1} ∂Δ ∩ M`: points lying in faces of codimension at least two.
    pub fn skeleton(&self) -> Vec<usize> {
        (0..self.tri.points().len())
            .filter(|&v| !self.in_facet_interior(v))
            .collect()
    }

    /// Triangulation points of a face of `Δ`.
    pub fn points_in_face(&self, face: usize) -> Vec<usize> {
        (0..self.tri.points().len())
            .filter(|&v| self.poly.face_contains(face, self.carrier[v]))
            .collect()
    }

    pub fn point_of_vertex(&self, vertex: usize) -> usize {
        let x = &self.poly.vertices()[vertex];
        self.tri
            .points()
            .iter()
            .position(|y| y == x)
            .expect("vertices are triangulation points")
    }

    pub fn parity_of(&self, v: usize) -> &GF2Vector {
        &self.parities[v]
    }

    /// `{v : ⟨m, v⟩ = 1 mod 2}`.
    pub fn principal(&self, m: &GF2Vector) -> DivisorF2 {
        DivisorF2::from_support((0..self.parities.len()).filter(|&v| self.parities[v].dot(m)))
    }

    /// The support minus points interior to facets.
    pub fn effective_support(&self, l: &DivisorF2) -> BTreeSet<usize> {
        l.support
            .iter()
            .copied()
            .filter(|&v| !self.in_facet_interior(v))
            .collect()
    }

    /// `𝓛_r`: points of the effective support adjacent to `r` (including `r`).
    pub fn adjacent_l(&self, l: &DivisorF2, r: usize) -> Result<Vec<usize>> {
        self.require_skeleton(r)?;
        let mut out: Vec<usize> = self
            .neighbours(r)
            .iter()
            .copied()
            .chain(std::iter::once(r))
            .filter(|&v| l.contains(v) && !self.in_facet_interior(v))
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    fn require_skeleton(&self, r: usize) -> Result<()> {
        if r >= self.parities.len() || self.in_facet_interior(r) {
            return Err(Error::contract(format!(
                "point {r} is not in the codimension-2 skeleton"
            )));
        }
        Ok(())
    }

    /// Case 1 (`r ∈ L`): `⟨m,r⟩ = 0`, `⟨m,v⟩ = 1` on `𝓛_r - {r}`, `⟨m,w⟩ = 0`
    /// on the other neighbours.
    pub fn check_case1(&self, r: usize, l: &DivisorF2) -> Result<LocalVerdict> {
        self.require_skeleton(r)?;
        if !l.contains(r) {
            return Err(Error::contract(format!("Case 1 needs point {r} in L")));
        }
        self.solve_case(r, l, CaseStatus::Case1)
    }

    /// Case 2 (`r ∉ L`): `⟨m,r⟩ = 1`, `⟨m,v⟩ = 1` on `𝓛_r`, `⟨m,w⟩ = 0` on the
    /// other neighbours.
    pub fn check_case2(&self, r: usize, l: &DivisorF2) -> Result<LocalVerdict> {
        self.require_skeleton(r)?;
        if l.contains(r) {
            return Err(Error::contract(format!("Case 2 needs point {r} outside L")));
        }
        self.solve_case(r, l, CaseStatus::Case2)
    }

    /// The applicable case for `r`.
    pub fn check(&self, r: usize, l: &DivisorF2) -> Result<LocalVerdict> {
        if l.contains(r) {
            self.check_case1(r, l)
        } else {
            self.check_case2(r, l)
        }
    }

    /// The constraint rows `(v, required ⟨m, v⟩)` of the Case system at `r`.
    pub fn case_constraints(&self, r: usize, l: &DivisorF2) -> Result<Vec<(usize, bool)>> {
        let lr = self.adjacent_l(l, r)?;
        let mut rows = vec![(r, !l.contains(r))];
        for &w in self.neighbours(r) {
            rows.push((w, lr.contains(&w)));
        }
        Ok(rows)
    }

    fn solve_case(&self, r: usize, l: &DivisorF2, status: CaseStatus) -> Result<LocalVerdict> {
        let rows = self.case_constraints(r, l)?;
        let a = GF2Matrix::from_rows(
            self.ambient(),
            &rows
                .iter()
                .map(|&(v, _)| self.parities[v].clone())
                .collect::<Vec<_>>(),
        );
        let b = GF2Vector::from_bits(&rows.iter().map(|&(_, x)| x).collect::<Vec<_>>());
        let solution = a.solve_affine(&b)?;
        Ok(LocalVerdict {
            point: r,
            status: if solution.is_some() {
                status
            } else {
                CaseStatus::Fail
            },
            witness: solution.map(|m| m.to_bits()),
            constraint_count: rows.len(),
        })
    }

    /// Whether `m` satisfies every Case constraint at `r`.
    pub fn witness_holds(&self, r: usize, l: &DivisorF2, m: &GF2Vector) -> Result<bool> {
        Ok(self
            .case_constraints(r, l)?
            .into_iter()
            .all(|(v, want)| self.parities[v].dot(m) == want))
    }

    /// Runs the Case checks at every skeleton point.
    pub fn is_admissible(&self, l: &DivisorF2) -> Result<AdmissibilityReport> {
        let verdicts: Vec<LocalVerdict> = self
            .skeleton()
            .par_iter()
            .map(|&r| self.check(r, l))
            .collect::<Result<_>>()?;
        let failures: Vec<usize> = verdicts
            .iter()
            .filter(|v| v.status == CaseStatus::Fail)
            .map(|v| v.point)
            .collect();
        Ok(AdmissibilityReport {
            admissible: failures.is_empty(),
            verdicts,
            failures,
            hypersurface_level: self.ambient() >= 4,
            strict_adjacency: self.strict,
        })
    }

    /// Dimension of the span of the facet-interior divisors modulo principal
    /// divisors, and of all divisors modulo principal ones.
    pub fn facet_interior_rank(&self) -> (usize, usize) {
        let count = self.parities.len();
        let principal: Vec<GF2Vector> = (0..self.ambient())
            .map(|i| {
                let s = self.principal(&GF2Vector::unit(self.ambient(), i));
                GF2Vector::from_indices(count, s.support)
            })
            .collect();
        let principal_rank = GF2Matrix::from_rows(count, &principal).rank();
        let mut rows = principal;
        rows.extend(
            (0..count)
                .filter(|&v| self.in_facet_interior(v))
                .map(|v| GF2Vector::unit(count, v)),
        );
        let with_interior = GF2Matrix::from_rows(count, &rows).rank();
        (with_interior - principal_rank, count - principal_rank)
    }

    /// Decides whether `L` restricts to zero on the mirror hypersurface.
    ///
    /// `mirror_h11` is `dim H^1(X°; ℱ^1)`. When the facet-interior divisors
    /// account for the whole kernel of the (surjective) restriction map, the
    /// exhaustive search below is exact in both directions.
    pub fn restriction_is_zero(
        &self,
        l: &DivisorF2,
        mirror_h11: Option<usize>,
    ) -> RestrictionVerdict {
        let d = self.ambient();
        for mask in 0..1u64 << d {
            let m = GF2Vector::from_mask(d, mask);
            if self
                .effective_support(&l.add(&self.principal(&m)))
                .is_empty()
            {
                return RestrictionVerdict::Zero { m: m.to_bits() };
            }
        }
        let Some(h11) = mirror_h11 else {
            return RestrictionVerdict::Unknown {
                reason: "no mirror cohomology supplied".into(),
            };
        };
        let surjective = d >= 4 && self.poly.is_smooth();
        let iso = self.poly.dualize().map(|q| q.is_smooth()).unwrap_or(false)
            && self.carrier.iter().all(|&c| self.poly.faces()[c].dim == 0);
        if !(surjective || iso) {
            return RestrictionVerdict::Unknown {
                reason: "surjectivity of restriction is not known here (needs Δ smooth with n ≥ 3, or Δ° smooth)".into(),
            };
        }
        let (interior, total) = self.facet_interior_rank();
        if total < h11 || total - h11 != interior {
            return RestrictionVerdict::Unknown {
                reason: format!(
                    "facet-interior divisors span {interior} dimensions, kernel of restriction has {}",
                    total.saturating_sub(h11)
                ),
            };
        }
        RestrictionVerdict::NonzeroCertified
    }

    /// The divisor whose trace on each listed face is the set of points of
    /// the given parity.
    pub fn from_face_parities(&self, choices: &[(usize, GF2Vector)]) -> DivisorF2 {
        let mut support = BTreeSet::new();
        for (face, p) in choices {
            support.extend(
                self.points_in_face(*face)
                    .into_iter()
                    .filter(|&v| &self.parities[v] == p),
            );
        }
        DivisorF2 { support }
    }

    /// Parity chosen by `L` on a face: `Some(p)` when `L ∩ F` is exactly the
    /// set of points of `F` with parity `p`.
    pub fn face_parity(&self, face: usize, l: &DivisorF2) -> Option<GF2Vector> {
        let pts = self.points_in_face(face);
        let inside: Vec<usize> = pts.iter().copied().filter(|&v| l.contains(v)).collect();
        let span = self.poly.parity_span(face);
        let candidate = match inside.first() {
            Some(&v) => self.parities[v].clone(),
            None => {
                let present: BTreeSet<&GF2Vector> =
                    pts.iter().map(|&v| &self.parities[v]).collect();
                let absent: Vec<GF2Vector> = span
                    .elements()
                    .into_iter()
                    .filter(|p| !present.contains(p))
                    .collect();
                return if absent.len() == 1 {
                    absent.into_iter().next()
                } else {
                    None
                };
            }
        };
        let expected: Vec<usize> = pts
            .iter()
            .copied()
            .filter(|&v| self.parities[v] == candidate)
            .collect();
        (expected == inside).then_some(candidate)
    }

    /// Local data at a smooth vertex: facet normals `n_j`, edges `E_j` and
    /// the neighbours `v_j` of `r` along them.
    pub fn vertex_frame(&self, vertex: usize) -> Result<VertexFrame> {
        let p = self.poly;
        let facets: Vec<usize> = (0..p.facets().len())
            .filter(|&k| p.facets()[k].vertices.contains(&vertex))
            .collect();
        let d = p.dim();
        let normals: Vec<Point> = facets
            .iter()
            .map(|&k| p.facets()[k].normal.clone())
            .collect();
        if facets.len() != d || lattice::det(&normals).abs() != 1 {
            return Err(Error::contract(format!("vertex {vertex} is not smooth")));
        }
        let r = &p.vertices()[vertex];
        let mut edges = Vec::with_capacity(d);
        let mut neighbours = Vec::with_capacity(d);
        for j in 0..d {
            let others: Vec<usize> = (0..d).filter(|&k| k != j).map(|k| facets[k]).collect();
            let e = p
                .face_from_facets(&others)
                .expect("smooth vertex has d edges");
            let f = &p.faces()[e];
            let other = if f.vertices[0] == vertex {
                f.vertices[1]
            } else {
                f.vertices[0]
            };
            let dir = lattice::primitive(&lattice::sub(&p.vertices()[other], r));
            let vj = lattice::add(r, &dir);
            neighbours.push(
                self.tri
                    .points()
                    .iter()
                    .position(|x| x == &vj)
                    .expect("edge points are triangulation points"),
            );
            edges.push(e);
        }
        let mut two_faces = BTreeMap::new();
        for j in 0..d {
            for k in j + 1..d {
                let others: Vec<usize> = (0..d)
                    .filter(|&i| i != j && i != k)
                    .map(|i| facets[i])
                    .collect();
                two_faces.insert(
                    (j, k),
                    p.face_from_facets(&others).expect("smooth vertex 2-faces"),
                );
            }
        }
        Ok(VertexFrame {
            point: self.point_of_vertex(vertex),
            normals,
            edges,
            neighbours,
            two_faces,
        })
    }

    pub fn classify_vertex(&self, vertex: usize, l: &DivisorF2) -> Result<ConfigClass> {
        let frame = self.vertex_frame(vertex)?;
        let mut chosen = BTreeMap::new();
        for (&jk, &f) in &frame.two_faces {
            match self.face_parity(f, l) {
                Some(p) => chosen.insert(jk, p),
                None => return Ok(ConfigClass::Other),
            };
        }
        let pr = &self.parities[frame.point];
        let pv: Vec<&GF2Vector> = frame
            .neighbours
            .iter()
            .map(|&v| &self.parities[v])
            .collect();
        let fourth = |j: usize, k: usize| pr.xor(pv[j]).xor(pv[k]);
        if chosen.values().all(|p| p == pr) {
            return Ok(ConfigClass::SimpleVertex);
        }
        for (j, &vj) in pv.iter().enumerate() {
            let pointed = chosen.iter().all(|(&(a, b), p)| {
                if a == j || b == j {
                    p == vj
                } else {
                    *p == fourth(a, b)
                }
            });
            if pointed {
                return Ok(ConfigClass::PointedVertex);
            }
        }
        if chosen
            .iter()
            .all(|(&(a, b), p)| p != pr && p != pv[a] && p != pv[b])
        {
            return Ok(ConfigClass::NonAdmissibleVertex);
        }
        Ok(ConfigClass::Other)
    }

    pub fn classify_edge(&self, edge: usize, l: &DivisorF2) -> Result<ConfigClass> {
        let p = self.poly;
        if p.faces()[edge].dim != 1 {
            return Err(Error::contract(format!("face {edge} is not an edge")));
        }
        let faces: Vec<usize> = p
            .faces_of_dim(2)
            .filter(|&(g, _)| p.face_contains(g, edge))
            .map(|(g, _)| g)
            .collect();
        let mut chosen = Vec::with_capacity(faces.len());
        for &f in &faces {
            match self.face_parity(f, l) {
                Some(x) => chosen.push(x),
                None => return Ok(ConfigClass::Other),
            }
        }
        let edge_span = p.parity_span(edge);
        if chosen.windows(2).all(|w| w[0] == w[1]) && edge_span.contains(&chosen[0]) {
            return Ok(ConfigClass::SimpleEdge);
        }
        if chosen.len() == 3 && chosen.iter().all(|x| !edge_span.contains(x)) {
            let sum = chosen[0].xor(&chosen[1]).xor(&chosen[2]);
            return Ok(if sum.is_zero() {
                ConfigClass::NonAdmissibleEdge
            } else {
                ConfigClass::EmptyEdge
            });
        }
        Ok(ConfigClass::Other)
    }
}

/// Combinatorics of `Δ` around a smooth vertex `r`.
#[derive(Clone, Debug)]
pub struct VertexFrame {
    /// Triangulation index of `r`.
    pub point: usize,
    /// `n_j`: normals of the facets through `r`.
    pub normals: Vec<Point>,
    /// `E_j`: the edge on every facet through `r` except the `j`-th.
    pub edges: Vec<usize>,
    /// `v_j`: triangulation index of the point of `E_j` next to `r`.
    pub neighbours: Vec<usize>,
    /// `F_jk` for `j < k`.
    pub two_faces: BTreeMap<(usize, usize), usize>,
}

/// Which hypothesis of the global construction holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GlobalHypothesis {
    /// Every 2-face has exactly three parities on its boundary.
    ThreeParities,
    /// Every edge has even lattice length.
    EvenEdges,
}

/// Which hypotheses hold, with the first witness against each.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub even_edges: bool,
    pub odd_edge: Option<Vec<Point>>,
    pub three_parities: bool,
    /// A 2-face (by vertices) whose boundary has another number of parities.
    pub parity_witness: Option<Vec<Point>>,
    pub parity_witness_count: Option<usize>,
}

pub fn check_hypotheses(p: &LatticePolytope) -> Result<HypothesisCheck> {
    let mut h = HypothesisCheck {
        even_edges: true,
        odd_edge: None,
        three_parities: true,
        parity_witness: None,
        parity_witness_count: None,
    };
    let face_points = |f: usize| {
        p.faces()[f]
            .vertices
            .iter()
            .map(|&v| p.vertices()[v].clone())
            .collect()
    };
    for (e, _) in p.faces_of_dim(1) {
        if p.edge_length(e)? % 2 != 0 && h.even_edges {
            h.even_edges = false;
            h.odd_edge = Some(face_points(e));
        }
    }
    for (f, _) in p.faces_of_dim(2) {
        let count = p.boundary_parities(f)?.len();
        if count != 3 && h.three_parities {
            h.three_parities = false;
            h.parity_witness = Some(face_points(f));
            h.parity_witness_count = Some(count);
        }
    }
    Ok(h)
}

/// Output of [`DivisorLab::construct_global`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GlobalDivisor {
    pub divisor: DivisorF2,
    pub hypothesis: GlobalHypothesis,
    pub basepoint: usize,
    /// Classification of every vertex of `Δ`, visited breadth-first from the basepoint.
    pub vertex_classes: Vec<(usize, ConfigClass)>,
    pub edge_classes: Vec<(usize, ConfigClass)>,
    pub admissibility: AdmissibilityReport,
}

impl DivisorLab<'_> {
    /// Builds `L` for a smooth reflexive 4-polytope satisfying one of the two
    /// hypotheses, starting from vertex `v0` of `Δ`, then audits it.
    pub fn construct_global(&self, v0: usize) -> Result<GlobalDivisor> {
        let p = self.poly;
        if p.dim() != 4 || !p.is_smooth() || !p.is_reflexive() {
            return Err(Error::HypothesisFailed {
                reason: "the construction needs a smooth reflexive polytope of dimension 4".into(),
                witness: Vec::new(),
            });
        }
        if v0 >= p.vertices().len() {
            return Err(Error::contract(format!(
                "basepoint {v0} is not a vertex index"
            )));
        }
        let h = check_hypotheses(p)?;
        let base = parity(&p.vertices()[v0]);
        let mut support = BTreeSet::new();
        let hypothesis = if h.even_edges {
            if let Some(v) = p.vertices().iter().find(|v| parity(v) != base) {
                return Err(Error::Assembly(format!(
                    "even edges but vertex {v:?} has another parity"
                )));
            }
            for v in 0..self.tri.points().len() {
                if self.carrier_dim(v) <= 2 && self.parities[v] == base {
                    support.insert(v);
                }
            }
            GlobalHypothesis::EvenEdges
        } else if h.three_parities {
            for (f, _) in p.faces_of_dim(2) {
                let span: AffineF2 = p.parity_span(f);
                let chosen = if span.contains(&base) {
                    base.clone()
                } else {
                    let boundary = p.boundary_parities(f)?;
                    let mut rest = span
                        .elements()
                        .into_iter()
                        .filter(|x| !boundary.contains(x));
                    match (rest.next(), rest.next()) {
                        (Some(x), None) => x,
                        _ => {
                            return Err(Error::Assembly(format!(
                                "2-face {f} has no unique interior-only parity"
                            )));
                        }
                    }
                };
                for v in self.points_in_face(f) {
                    if self.parities[v] == chosen {
                        support.insert(v);
                    }
                }
            }
            GlobalHypothesis::ThreeParities
        } else {
            let (reason, witness) = match (&h.parity_witness, h.parity_witness_count) {
                (Some(w), Some(c)) => (
                    format!("odd edge length and a 2-face whose boundary has {c} parities"),
                    w.clone(),
                ),
                _ => ("neither hypothesis holds".to_string(), Vec::new()),
            };
            return Err(Error::HypothesisFailed { reason, witness });
        };
        let divisor = DivisorF2 { support };

        // breadth-first audit over the edge graph of Δ
        let mut order = Vec::new();
        let mut seen = vec![false; p.vertices().len()];
        let mut queue = VecDeque::from([v0]);
        seen[v0] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for (_, e) in p.faces_of_dim(1) {
                if let Some(pos) = e.vertices.iter().position(|&x| x == v) {
                    let w = e.vertices[1 - pos];
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        let vertex_classes = order
            .into_iter()
            .map(|v| self.classify_vertex(v, &divisor).map(|c| (v, c)))
            .collect::<Result<Vec<_>>>()?;
        let edge_classes = p
            .faces_of_dim(1)
            .map(|(e, _)| self.classify_edge(e, &divisor).map(|c| (e, c)))
            .collect::<Result<Vec<_>>>()?;
        let admissibility = self.is_admissible(&divisor)?;
        Ok(GlobalDivisor {
            divisor,
            hypothesis,
            basepoint: v0,
            vertex_classes,
            edge_classes,
            admissibility,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::triangulation::{generate, Strategy};

    fn square() -> (LatticePolytope, CentralTriangulation) {
        let p = builtin::cube(2);
        let t = generate(&p, Strategy::Staircase, 0).unwrap();
        (p, t)
    }

    #[test]
    fn principal_divisor_is_odd_pairing() {
        let (p, t) = square();
        let lab = DivisorLab::new(&p, &t).unwrap();
        let m = GF2Vector::from_bits(&[true, false]);
        let d = lab.principal(&m);
        for v in 0..t.points().len() {
            assert_eq!(d.contains(v), t.points()[v][0].rem_euclid(2) == 1);
        }
        assert!(lab.principal(&GF2Vector::zeros(2)).is_empty());
    }

    #[test]
    fn facet_interior_points_drop_out() {
        let (p, t) = square();
        let lab = DivisorLab::new(&p, &t).unwrap();
        let all = DivisorF2::from_support(0..t.points().len());
        let eff = lab.effective_support(&all);
        assert_eq!(eff.len(), 4);
        assert!(eff
            .iter()
            .all(|&v| t.points()[v].iter().all(|x| x.abs() == 1)));
        assert_eq!(lab.skeleton().len(), 4);
    }

    #[test]
    fn case_contracts() {
        let (p, t) = square();
        let lab = DivisorLab::new(&p, &t).unwrap();
        let corner = t.points().iter().position(|x| x == &vec![1, 1]).unwrap();
        let mid = t.points().iter().position(|x| x == &vec![1, 0]).unwrap();
        let l = DivisorF2::from_support([corner]);
        assert!(lab.check_case2(corner, &l).is_err());
        assert!(lab.check_case1(corner, &DivisorF2::empty()).is_err());
        assert!(lab.check(mid, &l).is_err());
        let v = lab.check_case1(corner, &l).unwrap();
        assert_eq!(v.status, CaseStatus::Case1);
        assert_eq!(v.witness, Some(vec![0, 0]));
    }

    #[test]
    fn add_is_symmetric_difference() {
        let a = DivisorF2::from_support([1, 2, 3]);
        let b = DivisorF2::from_support([3, 4]);
        assert_eq!(a.add(&b), DivisorF2::from_support([1, 2, 4]));
        assert!(a.add(&a).is_empty());
    }

    #[test]
    fn hypotheses_on_named_polytopes() {
        let h = check_hypotheses(&builtin::cube(4)).unwrap();
        assert!(h.even_edges && h.three_parities);
        let h = check_hypotheses(&builtin::quintic()).unwrap();
        assert!(!h.even_edges && h.three_parities);
        let h = check_hypotheses(&builtin::p2xp2()).unwrap();
        assert!(!h.even_edges && !h.three_parities);
        assert_eq!(h.parity_witness_count, Some(4));
    }
}
