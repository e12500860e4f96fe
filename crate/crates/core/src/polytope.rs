//! Lattice polytopes given by vertices, with facets, faces and lattice points.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::GF2Vector;
use crate::lattice::{self, Point};

/// A facet inequality `⟨normal, x⟩ ≤ rhs` with a primitive integral normal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Point,
    pub rhs: i64,
    /// Indices of the vertices on the facet, increasing.
    pub vertices: Vec<usize>,
}

/// A nonempty face, identified by its sorted vertex index set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub dim: usize,
    pub vertices: Vec<usize>,
    /// Indices of the facets containing the face.
    pub facets: Vec<usize>,
    mask: u64,
}

/// Mod-2 reduction of a lattice point.
pub fn parity(p: &[i64]) -> GF2Vector {
    GF2Vector::from_ints(p)
}

/// An affine subspace of `GF(2)^d`, such as the mod-2 affine span `[F]` of a face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineF2 {
    pub base: GF2Vector,
    /// Echelon basis of the direction space.
    directions: Vec<(usize, GF2Vector)>,
}

impl AffineF2 {
    pub fn span<'a>(points: impl IntoIterator<Item = &'a GF2Vector>) -> Option<Self> {
        let mut it = points.into_iter();
        let base = it.next()?.clone();
        let mut s = Self {
            base,
            directions: Vec::new(),
        };
        for p in it {
            let d = s.reduce(&p.xor(&s.base));
            if let Some(pivot) = d.first_one() {
                for (_, row) in &mut s.directions {
                    if row.get(pivot) {
                        row.xor_assign(&d);
                    }
                }
                s.directions.push((pivot, d));
            }
        }
        Some(s)
    }

    fn reduce(&self, v: &GF2Vector) -> GF2Vector {
        let mut r = v.clone();
        for (pivot, row) in &self.directions {
            if r.get(*pivot) {
                r.xor_assign(row);
            }
        }
        r
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn contains(&self, v: &GF2Vector) -> bool {
        self.reduce(&v.xor(&self.base)).is_zero()
    }

    /// All members, in increasing order of their integer encoding.
    pub fn elements(&self) -> Vec<GF2Vector> {
        let k = self.dim();
        let mut out: Vec<GF2Vector> = (0..1u64 << k)
            .map(|mask| {
                let mut v = self.base.clone();
                for (i, (_, row)) in self.directions.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        v.xor_assign(row);
                    }
                }
                v
            })
            .collect();
        out.sort();
        out
    }
}

/// A full-dimensional lattice polytope with its vertex and facet descriptions.
#[derive(Clone, Debug)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<Point>,
    facets: Vec<Facet>,
    faces: Vec<Face>,
    face_index: HashMap<u64, usize>,
    points: Vec<Point>,
    point_index: HashMap<Point, usize>,
    carrier: Vec<usize>,
}

/// JSON form: `{"dim": d, "vertices": [[..], ..], "facet_normals": [[..], ..]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeJson {
    pub dim: usize,
    pub vertices: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facet_normals: Option<Vec<Point>>,
}

impl LatticePolytope {
    pub fn from_vertices(vertices: Vec<Point>) -> Result<Self> {
        let dim = vertices
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidPolytope("no vertices".into()))?;
        if dim == 0 {
            return Err(Error::InvalidPolytope("dimension 0".into()));
        }
        if vertices.iter().any(|v| v.len() != dim) {
            return Err(Error::InvalidPolytope("vertices of mixed dimension".into()));
        }
        if vertices.len() > 64 {
            return Err(Error::Unsupported(format!(
                "{} vertices; at most 64 are supported",
                vertices.len()
            )));
        }
        let distinct: BTreeSet<&Point> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(Error::InvalidPolytope("repeated vertex".into()));
        }
        let refs: Vec<&Point> = vertices.iter().collect();
        if lattice::affine_dim(&refs) != Some(dim) {
            return Err(Error::InvalidPolytope("not full-dimensional".into()));
        }
        let facets = enumerate_facets(&vertices, dim);
        for (i, v) in vertices.iter().enumerate() {
            let normals: Vec<Point> = facets
                .iter()
                .filter(|f| f.vertices.contains(&i))
                .map(|f| f.normal.clone())
                .collect();
            if lattice::rank(&normals) < dim {
                return Err(Error::InvalidPolytope(format!("{v:?} is not a vertex")));
            }
        }
        Self::assemble(dim, vertices, facets)
    }

    /// Like [`from_vertices`](Self::from_vertices), but checks that `normals`
    /// are exactly the primitive facet normals of the hull (in any order) and
    /// keeps their order.
    pub fn with_facet_normals(vertices: Vec<Point>, normals: &[Point]) -> Result<Self> {
        let p = Self::from_vertices(vertices)?;
        let mut order = Vec::with_capacity(normals.len());
        for n in normals {
            let n = lattice::primitive(n);
            let i =
                p.facets.iter().position(|f| f.normal == n).ok_or_else(|| {
                    Error::InvalidPolytope(format!("{n:?} is not a facet normal"))
                })?;
            if order.contains(&i) {
                return Err(Error::InvalidPolytope(format!(
                    "facet normal {n:?} repeated"
                )));
            }
            order.push(i);
        }
        if order.len() != p.facets.len() {
            return Err(Error::InvalidPolytope(format!(
                "{} facet normals given, polytope has {}",
                order.len(),
                p.facets.len()
            )));
        }
        let facets = order.iter().map(|&i| p.facets[i].clone()).collect();
        Self::assemble(p.dim, p.vertices, facets)
    }

    pub fn from_json(j: &PolytopeJson) -> Result<Self> {
        if j.vertices.iter().any(|v| v.len() != j.dim) {
            return Err(Error::InvalidPolytope(format!(
                "\"dim\" is {} but a vertex has a different length",
                j.dim
            )));
        }
        match &j.facet_normals {
            Some(n) => Self::with_facet_normals(j.vertices.clone(), n),
            None => Self::from_vertices(j.vertices.clone()),
        }
    }

    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson {
            dim: self.dim,
            vertices: self.vertices.clone(),
            facet_normals: Some(self.facets.iter().map(|f| f.normal.clone()).collect()),
        }
    }

    fn assemble(dim: usize, vertices: Vec<Point>, facets: Vec<Facet>) -> Result<Self> {
        let faces = face_closure(&vertices, &facets, dim);
        let face_index = faces.iter().enumerate().map(|(i, f)| (f.mask, i)).collect();
        let mut p = Self {
            dim,
            vertices,
            facets,
            faces,
            face_index,
            points: Vec::new(),
            point_index: HashMap::new(),
            carrier: Vec::new(),
        };
        p.points = p.enumerate_points();
        p.point_index = p
            .points
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), i))
            .collect();
        p.carrier = p.points.iter().map(|x| p.carrier_of(x)).collect();
        if p.is_reflexive() {
            for (k, f) in p.facets.iter().enumerate() {
                let pars: Vec<GF2Vector> =
                    p.points_of_facet(k).map(|i| parity(&p.points[i])).collect();
                let span = AffineF2::span(&pars).expect("facet has points");
                if span.contains(&GF2Vector::zeros(dim)) {
                    return Err(Error::InvalidPolytope(format!(
                        "mod-2 span of facet {:?} contains 0",
                        f.normal
                    )));
                }
            }
        }
        Ok(p)
    }

    pub fn translate(&self, shift: &[i64]) -> Result<Self> {
        Self::from_vertices(
            self.vertices
                .iter()
                .map(|v| lattice::add(v, shift))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// All nonempty faces including the polytope itself, sorted by dimension
    /// and then by vertex set.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn faces_of_dim(&self, k: usize) -> impl Iterator<Item = (usize, &Face)> {
        self.faces
            .iter()
            .enumerate()
            .filter(move |(_, f)| f.dim == k)
    }

    /// Index of the whole polytope in [`faces`](Self::faces).
    pub fn top_face(&self) -> usize {
        self.faces.len() - 1
    }

    pub fn face_by_vertices(&self, vertices: &[usize]) -> Option<usize> {
        let mask = vertices.iter().fold(0u64, |m, &i| m | 1 << i);
        self.face_index.get(&mask).copied()
    }

    /// The face cut out by a set of facets (the whole polytope for the empty set).
    pub fn face_from_facets(&self, facets: &[usize]) -> Option<usize> {
        let mut mask = self.faces[self.top_face()].mask;
        for &k in facets {
            mask &= self.facets[k]
                .vertices
                .iter()
                .fold(0u64, |m, &i| m | 1 << i);
        }
        self.face_index.get(&mask).copied()
    }

    pub fn face_contains(&self, outer: usize, inner: usize) -> bool {
        let (a, b) = (self.faces[outer].mask, self.faces[inner].mask);
        a & b == b
    }

    /// Number of faces of each dimension `0..=dim`, the last entry being 1.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim + 1];
        for face in &self.faces {
            f[face.dim] += 1;
        }
        f
    }

    pub fn is_reflexive(&self) -> bool {
        self.facets.iter().all(|f| f.rhs == 1)
    }

    /// Every vertex lies on exactly `dim` facets whose normals form a lattice basis.
    pub fn is_smooth(&self) -> bool {
        (0..self.vertices.len()).all(|i| {
            let normals: Vec<Point> = self
                .facets
                .iter()
                .filter(|f| f.vertices.contains(&i))
                .map(|f| f.normal.clone())
                .collect();
            normals.len() == self.dim && lattice::det(&normals).abs() == 1
        })
    }

    /// The polar dual of a reflexive polytope. Vertex `i` of the dual is the
    /// normal of facet `i`, and facet `j` of the dual is the one normal to vertex `j`.
    pub fn dualize(&self) -> Result<Self> {
        if !self.is_reflexive() {
            let bad = self
                .facets
                .iter()
                .find(|f| f.rhs != 1)
                .expect("non-reflexive facet");
            return Err(Error::NotReflexive(format!(
                "facet {:?} has right-hand side {}",
                bad.normal, bad.rhs
            )));
        }
        let dual_vertices = self.facets.iter().map(|f| f.normal.clone()).collect();
        Self::with_facet_normals(dual_vertices, &self.vertices)
    }

    /// For a face `g` of the dual polytope, the face of `self` on which every
    /// vertex of `g` evaluates to 1.
    pub fn dual_face_of(&self, dual: &LatticePolytope, g: usize) -> Option<usize> {
        self.face_from_facets(&dual.faces[g].vertices)
    }

    /// All lattice points, sorted lexicographically.
    pub fn lattice_points(&self) -> &[Point] {
        &self.points
    }

    pub fn point_index(&self, p: &[i64]) -> Option<usize> {
        self.point_index.get(p).copied()
    }

    /// The smallest face containing lattice point `i`.
    pub fn carrier(&self, i: usize) -> usize {
        self.carrier[i]
    }

    pub fn carrier_dim(&self, i: usize) -> usize {
        self.faces[self.carrier[i]].dim
    }

    /// Lattice points of a face, by index into [`lattice_points`](Self::lattice_points).
    pub fn face_points(&self, face: usize) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&i| self.face_contains(face, self.carrier[i]))
            .collect()
    }

    fn points_of_facet(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        let f = &self.facets[k];
        (0..self.points.len()).filter(move |&i| lattice::dot(&f.normal, &self.points[i]) == f.rhs)
    }

    /// Points on the boundary.
    pub fn boundary_points(&self) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&i| self.carrier_dim(i) < self.dim)
            .collect()
    }

    /// Boundary points lying in some face of dimension at most `k`.
    pub fn skeleton_points(&self, k: usize) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&i| self.carrier_dim(i) <= k && self.carrier_dim(i) < self.dim)
            .collect()
    }

    pub fn interior_points(&self) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&i| self.carrier_dim(i) == self.dim)
            .collect()
    }

    /// Lattice length of an edge.
    pub fn edge_length(&self, edge: usize) -> Result<i64> {
        let f = &self.faces[edge];
        if f.dim != 1 {
            return Err(Error::contract(format!("face {edge} is not an edge")));
        }
        let d = lattice::sub(&self.vertices[f.vertices[1]], &self.vertices[f.vertices[0]]);
        Ok(d.iter().fold(0, |g, &x| lattice::gcd(g, x)))
    }

    /// Distinct parities of the lattice points on the relative boundary of a 2-face.
    pub fn boundary_parities(&self, face: usize) -> Result<BTreeSet<GF2Vector>> {
        if self.faces[face].dim != 2 {
            return Err(Error::contract(format!("face {face} is not 2-dimensional")));
        }
        Ok(self
            .face_points(face)
            .into_iter()
            .filter(|&i| self.carrier_dim(i) < 2)
            .map(|i| parity(&self.points[i]))
            .collect())
    }

    /// The mod-2 affine span `[F]` of the lattice points of a face.
    pub fn parity_span(&self, face: usize) -> AffineF2 {
        let pars: Vec<GF2Vector> = self
            .face_points(face)
            .into_iter()
            .map(|i| parity(&self.points[i]))
            .collect();
        AffineF2::span(&pars).expect("faces contain lattice points")
    }

    /// Normalized volume (`dim!` times Euclidean volume), from a pulling
    /// triangulation of the face lattice.
    pub fn normalized_volume(&self) -> u64 {
        let top = self.top_face();
        let apex = self.faces[top].vertices[0];
        let mut total: u128 = 0;
        for simplex in self.pull_triangulate(top) {
            let rows: Vec<Point> = simplex[1..]
                .iter()
                .map(|&v| lattice::sub(&self.vertices[v], &self.vertices[simplex[0]]))
                .collect();
            debug_assert!(simplex.contains(&apex));
            total += lattice::det(&rows).unsigned_abs();
        }
        total as u64
    }

    fn pull_triangulate(&self, face: usize) -> Vec<Vec<usize>> {
        let f = &self.faces[face];
        if f.vertices.len() == f.dim + 1 {
            return vec![f.vertices.clone()];
        }
        let apex = f.vertices[0];
        let mut out = Vec::new();
        for (g, sub) in self.faces.iter().enumerate() {
            if sub.dim + 1 == f.dim && f.mask & sub.mask == sub.mask && sub.mask >> apex & 1 == 0 {
                for mut s in self.pull_triangulate(g) {
                    s.insert(0, apex);
                    out.push(s);
                }
            }
        }
        out
    }

    fn enumerate_points(&self) -> Vec<Point> {
        let lo: Point = (0..self.dim)
            .map(|k| self.vertices.iter().map(|v| v[k]).min().unwrap())
            .collect();
        let hi: Point = (0..self.dim)
            .map(|k| self.vertices.iter().map(|v| v[k]).max().unwrap())
            .collect();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            if self
                .facets
                .iter()
                .all(|f| lattice::dot(&f.normal, &cur) <= f.rhs)
            {
                out.push(cur.clone());
            }
            let mut k = self.dim;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur[k] < hi[k] {
                    cur[k] += 1;
                    break;
                }
                cur[k] = lo[k];
            }
        }
    }

    fn carrier_of(&self, x: &[i64]) -> usize {
        let tight: Vec<usize> = (0..self.facets.len())
            .filter(|&k| lattice::dot(&self.facets[k].normal, x) == self.facets[k].rhs)
            .collect();
        self.face_from_facets(&tight)
            .expect("tight facets cut out a face")
    }
}

fn enumerate_facets(vertices: &[Point], dim: usize) -> Vec<Facet> {
    let mut found: Vec<Facet> = Vec::new();
    let mut chosen = Vec::with_capacity(dim);
    collect_facets(vertices, dim, 0, &mut chosen, &mut found);
    found.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    found
}

fn collect_facets(
    vertices: &[Point],
    dim: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    found: &mut Vec<Facet>,
) {
    if chosen.len() == dim {
        // d vertices inside a known facet span nothing new
        if found
            .iter()
            .any(|f| chosen.iter().all(|c| f.vertices.contains(c)))
        {
            return;
        }
        let base = &vertices[chosen[0]];
        let rows: Vec<Point> = chosen[1..]
            .iter()
            .map(|&i| lattice::sub(&vertices[i], base))
            .collect();
        let n = lattice::cross(&rows);
        if n.iter().all(|&x| x == 0) {
            return;
        }
        let mut n = lattice::primitive(&n);
        let c = lattice::dot(&n, base);
        let (mut above, mut below) = (false, false);
        for v in vertices {
            let s = lattice::dot(&n, v) - c;
            above |= s > 0;
            below |= s < 0;
        }
        if above && below {
            return;
        }
        let mut rhs = c;
        if above {
            n.iter_mut().for_each(|x| *x = -*x);
            rhs = -c;
        }
        if found.iter().any(|f| f.normal == n) {
            return;
        }
        let on: Vec<usize> = (0..vertices.len())
            .filter(|&i| lattice::dot(&n, &vertices[i]) == rhs)
            .collect();
        found.push(Facet {
            normal: n,
            rhs,
            vertices: on,
        });
        return;
    }
    for i in start..vertices.len() {
        if vertices.len() - i < dim - chosen.len() {
            break;
        }
        chosen.push(i);
        collect_facets(vertices, dim, i + 1, chosen, found);
        chosen.pop();
    }
}

fn face_closure(vertices: &[Point], facets: &[Facet], dim: usize) -> Vec<Face> {
    let facet_masks: Vec<u64> = facets
        .iter()
        .map(|f| f.vertices.iter().fold(0u64, |m, &i| m | 1 << i))
        .collect();
    let all = if vertices.len() == 64 {
        u64::MAX
    } else {
        (1u64 << vertices.len()) - 1
    };
    let mut seen: BTreeSet<u64> = facet_masks.iter().copied().collect();
    let mut layer: Vec<u64> = seen.iter().copied().collect();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for &m in &layer {
            for &fm in &facet_masks {
                let g = m & fm;
                if g != 0 && seen.insert(g) {
                    next.push(g);
                }
            }
        }
        layer = next;
    }
    seen.insert(all);
    let mut faces: Vec<Face> = seen
        .into_iter()
        .map(|mask| {
            let vs: Vec<usize> = (0..vertices.len())
                .filter(|&i| mask >> i & 1 == 1)
                .collect();
            let pts: Vec<&Point> = vs.iter().map(|&i| &vertices[i]).collect();
            let fs = (0..facets.len())
                .filter(|&k| facet_masks[k] & mask == mask)
                .collect();
            Face {
                dim: lattice::affine_dim(&pts).unwrap(),
                vertices: vs,
                facets: if mask == all { Vec::new() } else { fs },
                mask,
            }
        })
        .collect();
    faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.vertices.cmp(&b.vertices)));
    debug_assert_eq!(faces.last().unwrap().dim, dim);
    faces
}
