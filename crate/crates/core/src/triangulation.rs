//! Primitive central triangulations, stored as triangulations of the boundary.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, Point};
use crate::polytope::{parity, LatticePolytope};

/// A central triangulation of a reflexive polytope: a triangulation of the
/// boundary by simplices of dimension `dim - 1`, each implicitly coned to 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralTriangulation {
    points: Vec<Point>,
    simplices: Vec<Vec<usize>>,
}

/// JSON form: `{"points": [[..], ..], "boundary_simplices": [[i, j, ..], ..]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangulationJson {
    pub points: Vec<Point>,
    pub boundary_simplices: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Iterated pulling of every facet at its lattice points, in a seeded order.
    Pulling,
    /// Closed-form unimodular triangulation for boxes, dilated simplices and
    /// their products; facets that are unimodular simplices are kept whole.
    Staircase,
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pulling" => Ok(Strategy::Pulling),
            "staircase" => Ok(Strategy::Staircase),
            _ => Err(Error::Unsupported(format!("unknown strategy {s:?}"))),
        }
    }
}

impl CentralTriangulation {
    /// Builds from raw parts; simplices are sorted and deduplicated, nothing
    /// else is checked (see [`validate`]).
    pub fn new(points: Vec<Point>, simplices: Vec<Vec<usize>>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for s in simplices {
            if let Some(&bad) = s.iter().find(|&&i| i >= points.len()) {
                return Err(Error::InvalidTriangulation(format!(
                    "point index {bad} out of range"
                )));
            }
            let mut s = s;
            s.sort_unstable();
            set.insert(s);
        }
        Ok(Self {
            points,
            simplices: set.into_iter().collect(),
        })
    }

    pub fn from_json(j: &TriangulationJson) -> Result<Self> {
        Self::new(j.points.clone(), j.boundary_simplices.clone())
    }

    pub fn to_json(&self) -> TriangulationJson {
        TriangulationJson {
            points: self.points.clone(),
            boundary_simplices: self.simplices.clone(),
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Boundary simplices as sorted point-index lists, sorted.
    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    /// Every nonempty face of every boundary simplex, sorted by size then lexicographically.
    pub fn all_faces(&self) -> Vec<Vec<usize>> {
        let mut set = BTreeSet::new();
        for s in &self.simplices {
            for mask in 1u32..1 << s.len() {
                let f: Vec<usize> = (0..s.len())
                    .filter(|&k| mask >> k & 1 == 1)
                    .map(|k| s[k])
                    .collect();
                set.insert(f);
            }
        }
        let mut faces: Vec<Vec<usize>> = set.into_iter().collect();
        faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        faces
    }

    /// Boundary simplices containing point `r`.
    pub fn star(&self, r: usize) -> Vec<&[usize]> {
        self.simplices
            .iter()
            .filter(|s| s.binary_search(&r).is_ok())
            .map(Vec::as_slice)
            .collect()
    }

    /// Neighbours along edges of the triangulation. Adjacent points are
    /// checked to have distinct parities, as primitivity forces.
    pub fn adjacency(&self) -> Result<AdjacencyGraph> {
        let mut nbrs: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.points.len()];
        for s in &self.simplices {
            for (a, &i) in s.iter().enumerate() {
                for &j in &s[a + 1..] {
                    nbrs[i].insert(j);
                    nbrs[j].insert(i);
                }
            }
        }
        for (i, ns) in nbrs.iter().enumerate() {
            for &j in ns {
                if parity(&self.points[i]) == parity(&self.points[j]) {
                    return Err(Error::InvalidTriangulation(format!(
                        "adjacent points {:?} and {:?} share a parity",
                        self.points[i], self.points[j]
                    )));
                }
            }
        }
        Ok(AdjacencyGraph {
            neighbours: nbrs.into_iter().map(|s| s.into_iter().collect()).collect(),
        })
    }
}

/// Adjacency over the triangulation's points (`r ↔ r` is implicit).
#[derive(Clone, Debug)]
pub struct AdjacencyGraph {
    neighbours: Vec<Vec<usize>>,
}

impl AdjacencyGraph {
    /// Distinct neighbours of `r`, increasing.
    pub fn neighbours(&self, r: usize) -> &[usize] {
        &self.neighbours[r]
    }

    pub fn adjacent(&self, r: usize, v: usize) -> bool {
        r == v || self.neighbours[r].binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.neighbours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbours.is_empty()
    }
}

/// Outcome of [`validate`]: one verdict per property plus witnesses.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub covering: bool,
    pub primitivity: bool,
    pub centrality: bool,
    pub uses_all_points: bool,
    pub simplex_count: usize,
    pub volume_sum: u64,
    pub expected_volume: u64,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.covering && self.primitivity && self.centrality && self.uses_all_points
    }
}

/// Checks that `t` is a primitive central triangulation of `p`.
///
/// Covering is certified by the pseudomanifold condition (every ridge lies in
/// exactly two simplices, on opposite sides) together with the volume sum.
pub fn validate(p: &LatticePolytope, t: &CentralTriangulation) -> ValidationReport {
    let d = p.dim();
    let mut r = ValidationReport {
        covering: true,
        primitivity: true,
        centrality: true,
        uses_all_points: true,
        simplex_count: t.simplices.len(),
        expected_volume: p.normalized_volume(),
        ..Default::default()
    };
    for (i, x) in t.points.iter().enumerate() {
        let ok = x.len() == d && p.point_index(x).is_some_and(|k| p.carrier_dim(k) < d);
        if !ok {
            r.centrality = false;
            r.failures
                .push(format!("point {i} {x:?} is not a boundary lattice point"));
        }
    }
    if !r.centrality {
        return r;
    }
    let mut used = vec![false; t.points.len()];
    let mut ridges: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (k, s) in t.simplices.iter().enumerate() {
        let verts: Vec<Point> = s.iter().map(|&i| t.points[i].clone()).collect();
        if s.len() != d {
            r.covering = false;
            r.failures.push(format!(
                "simplex {s:?} has {} vertices, expected {d}",
                s.len()
            ));
            continue;
        }
        let on_facet = p
            .facets()
            .iter()
            .any(|f| verts.iter().all(|v| lattice::dot(&f.normal, v) == f.rhs));
        if !on_facet {
            r.centrality = false;
            r.failures
                .push(format!("simplex {verts:?} is not contained in a facet"));
        }
        let vol = lattice::det(&verts).unsigned_abs() as u64;
        r.volume_sum += vol;
        if vol != 1 {
            r.primitivity = false;
            r.failures
                .push(format!("simplex {verts:?} has normalized volume {vol}"));
        }
        for &i in s {
            used[i] = true;
        }
        for skip in 0..d {
            let ridge: Vec<usize> = s
                .iter()
                .enumerate()
                .filter(|&(a, _)| a != skip)
                .map(|(_, &i)| i)
                .collect();
            ridges.entry(ridge).or_default().push(k);
        }
    }
    let mut ridge_list: Vec<_> = ridges.into_iter().collect();
    ridge_list.sort();
    for (ridge, owners) in ridge_list {
        if owners.len() != 2 {
            r.covering = false;
            r.failures.push(format!(
                "ridge {:?} lies in {} simplices",
                ridge.iter().map(|&i| &t.points[i]).collect::<Vec<_>>(),
                owners.len()
            ));
            continue;
        }
        let rows: Vec<Point> = ridge.iter().map(|&i| t.points[i].clone()).collect();
        let n = lattice::cross(&rows);
        let side = |k: usize| {
            let apex = t.simplices[k].iter().find(|i| !ridge.contains(i)).unwrap();
            lattice::dot(&n, &t.points[*apex]).signum()
        };
        if side(owners[0]) * side(owners[1]) != -1 {
            r.covering = false;
            r.failures.push(format!(
                "simplices {:?} and {:?} overlap across a ridge",
                t.simplices[owners[0]], t.simplices[owners[1]]
            ));
        }
    }
    if r.volume_sum != r.expected_volume {
        r.covering = false;
        r.failures.push(format!(
            "volume sum {} differs from normalized volume {}",
            r.volume_sum, r.expected_volume
        ));
    }
    let boundary: Vec<Point> = p
        .boundary_points()
        .into_iter()
        .map(|i| p.lattice_points()[i].clone())
        .collect();
    let present: BTreeSet<&Point> = t.points.iter().collect();
    for x in &boundary {
        if !present.contains(x) {
            r.uses_all_points = false;
            r.failures.push(format!("boundary point {x:?} is missing"));
        }
    }
    for (i, u) in used.iter().enumerate() {
        if !u {
            r.uses_all_points = false;
            r.failures.push(format!(
                "point {:?} is not a vertex of any simplex",
                t.points[i]
            ));
        }
    }
    r
}

/// Generates a triangulation; the result is validated before it is returned.
pub fn generate(
    p: &LatticePolytope,
    strategy: Strategy,
    seed: u64,
) -> Result<CentralTriangulation> {
    if !p.is_reflexive() {
        return Err(Error::NotReflexive(
            "central triangulations need a reflexive polytope".into(),
        ));
    }
    let points: Vec<Point> = p
        .boundary_points()
        .into_iter()
        .map(|i| p.lattice_points()[i].clone())
        .collect();
    let index: HashMap<&Point, usize> = points.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let simplices: Vec<Vec<usize>> = match strategy {
        Strategy::Staircase => {
            if let Some(s) = canonical(p) {
                s.into_iter()
                    .map(|vs| vs.iter().map(|v| index[v]).collect())
                    .collect()
            } else {
                staircase(p)?
                    .into_iter()
                    .map(|vs| vs.iter().map(|v| index[v]).collect())
                    .collect()
            }
        }
        Strategy::Pulling => pulling(p, &points, seed)?,
    };
    let t = CentralTriangulation::new(points, simplices)?;
    let report = validate(p, &t);
    if !report.is_valid() {
        return Err(Error::InvalidTriangulation(report.failures.join("; ")));
    }
    Ok(t)
}

/// Facet coning when every facet is already a unimodular simplex.
fn canonical(p: &LatticePolytope) -> Option<Vec<Vec<Point>>> {
    let d = p.dim();
    let mut out = Vec::new();
    for f in p.facets() {
        if f.vertices.len() != d {
            return None;
        }
        let verts: Vec<Point> = f
            .vertices
            .iter()
            .map(|&i| p.vertices()[i].clone())
            .collect();
        if lattice::det(&verts).abs() != 1 {
            return None;
        }
        out.push(verts);
    }
    Some(out)
}

/// Unimodular change of coordinates: partial sums within consecutive blocks.
#[derive(Clone, Debug)]
struct BlockSums {
    blocks: Vec<(usize, usize)>,
}

impl BlockSums {
    fn forward(&self, x: &[i64]) -> Point {
        let mut y = x.to_vec();
        for &(a, b) in &self.blocks {
            for i in a + 1..b {
                y[i] += y[i - 1];
            }
        }
        y
    }

    fn inverse(&self, y: &[i64]) -> Point {
        let mut x = y.to_vec();
        for &(a, b) in &self.blocks {
            for i in (a + 1..b).rev() {
                x[i] -= y[i - 1];
            }
        }
        x
    }

    /// Transforms a linear functional: `⟨n, x⟩ = ⟨n', y⟩`.
    fn covector(&self, n: &[i64]) -> Point {
        let mut m = n.to_vec();
        for &(a, b) in &self.blocks {
            for i in a..b.saturating_sub(1) {
                m[i] = n[i] - n[i + 1];
            }
        }
        m
    }
}

fn is_alcoved_normal(n: &[i64]) -> bool {
    let nz: Vec<i64> = n.iter().copied().filter(|&x| x != 0).collect();
    match nz.as_slice() {
        [a] => a.abs() == 1,
        [a, b] => a.abs() == 1 && *a == -*b,
        _ => false,
    }
}

/// The triangulation cut out by the hyperplanes `y_i ∈ Z` and `y_i - y_j ∈ Z`
/// in coordinates where every facet of `p` belongs to that arrangement.
fn staircase(p: &LatticePolytope) -> Result<Vec<Vec<Point>>> {
    let d = p.dim();
    let transform = (0..1u32 << (d - 1))
        .map(|cuts| {
            let mut blocks = Vec::new();
            let mut start = 0;
            for i in 1..d {
                if cuts >> (i - 1) & 1 == 1 {
                    blocks.push((start, i));
                    start = i;
                }
            }
            blocks.push((start, d));
            BlockSums { blocks }
        })
        .find(|t| {
            p.facets()
                .iter()
                .all(|f| is_alcoved_normal(&t.covector(&f.normal)))
        })
        .ok_or_else(|| {
            Error::Unsupported(
                "staircase needs a box, a dilated simplex or a product of these".into(),
            )
        })?;
    let facets: Vec<(Point, i64)> = p
        .facets()
        .iter()
        .map(|f| (transform.covector(&f.normal), f.rhs))
        .collect();
    let ys: Vec<Point> = p.vertices().iter().map(|v| transform.forward(v)).collect();
    let lo: Point = (0..d)
        .map(|k| ys.iter().map(|v| v[k]).min().unwrap())
        .collect();
    let hi: Point = (0..d)
        .map(|k| ys.iter().map(|v| v[k]).max().unwrap())
        .collect();
    let inside = |y: &[i64]| facets.iter().all(|(n, c)| lattice::dot(n, y) <= *c);
    let mut perms = Vec::new();
    permutations(&mut (0..d).collect(), 0, &mut perms);
    let mut out = BTreeSet::new();
    let mut base = lo.clone();
    loop {
        for perm in &perms {
            let mut chain = vec![base.clone()];
            let mut cur = base.clone();
            for &i in perm {
                cur[i] += 1;
                chain.push(cur.clone());
            }
            if !chain.iter().all(|y| inside(y)) {
                continue;
            }
            for skip in 0..=d {
                let face: Vec<&Point> = chain
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, y)| y)
                    .collect();
                if facets
                    .iter()
                    .any(|(n, c)| face.iter().all(|y| lattice::dot(n, y) == *c))
                {
                    let mut xs: Vec<Point> = face.iter().map(|y| transform.inverse(y)).collect();
                    xs.sort();
                    out.insert(xs);
                }
            }
        }
        let mut k = d;
        loop {
            if k == 0 {
                return Ok(out.into_iter().collect());
            }
            k -= 1;
            if base[k] < hi[k] - 1 {
                base[k] += 1;
                break;
            }
            base[k] = lo[k];
        }
    }
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Linear facets of the cone over a cell: `(normal, vertices on it)`, with the
/// normal oriented so the cell lies on the nonnegative side.
fn cone_facets(cell: &[usize], points: &[Point], d: usize) -> Vec<(Point, Vec<usize>)> {
    let mut found: Vec<(Point, Vec<usize>)> = Vec::new();
    let mut chosen = Vec::with_capacity(d - 1);
    cone_facets_rec(cell, points, d, 0, &mut chosen, &mut found);
    found
}

fn cone_facets_rec(
    cell: &[usize],
    points: &[Point],
    d: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    found: &mut Vec<(Point, Vec<usize>)>,
) {
    if chosen.len() == d - 1 {
        if found
            .iter()
            .any(|(_, on)| chosen.iter().all(|c| on.contains(c)))
        {
            return;
        }
        let rows: Vec<Point> = chosen.iter().map(|&i| points[i].clone()).collect();
        let n = lattice::cross(&rows);
        if n.iter().all(|&x| x == 0) {
            return;
        }
        let n = lattice::primitive(&n);
        let (mut pos, mut neg) = (false, false);
        for &v in cell {
            let s = lattice::dot(&n, &points[v]);
            pos |= s > 0;
            neg |= s < 0;
        }
        if pos && neg {
            return;
        }
        let n = if neg {
            n.iter().map(|x| -x).collect()
        } else {
            n
        };
        let on = cell
            .iter()
            .copied()
            .filter(|&v| lattice::dot(&n, &points[v]) == 0)
            .collect();
        found.push((n, on));
        return;
    }
    for i in start..cell.len() {
        chosen.push(cell[i]);
        cone_facets_rec(cell, points, d, i + 1, chosen, found);
        chosen.pop();
    }
}

fn pulling(p: &LatticePolytope, points: &[Point], seed: u64) -> Result<Vec<Vec<usize>>> {
    let d = p.dim();
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let index: HashMap<&Point, usize> = points.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut all = Vec::new();
    for f in p.facets() {
        let mut cells: Vec<Vec<usize>> = vec![f
            .vertices
            .iter()
            .map(|&v| index[&p.vertices()[v]])
            .collect()];
        for &q in &order {
            if lattice::dot(&f.normal, &points[q]) != f.rhs {
                continue;
            }
            let mut next = Vec::with_capacity(cells.len());
            for cell in cells {
                let facets = cone_facets(&cell, points, d);
                if facets.iter().any(|(n, _)| lattice::dot(n, &points[q]) < 0) {
                    next.push(cell);
                    continue;
                }
                for (n, on) in facets {
                    if lattice::dot(&n, &points[q]) > 0 {
                        let mut c = on;
                        c.push(q);
                        c.sort_unstable();
                        next.push(c);
                    }
                }
            }
            cells = next;
        }
        for cell in cells {
            let verts: Vec<Point> = cell.iter().map(|&i| points[i].clone()).collect();
            if cell.len() != d {
                return Err(Error::InvalidTriangulation(format!(
                    "pulling left a non-simplex cell {verts:?}"
                )));
            }
            let vol = lattice::det(&verts).abs() as i64;
            if vol != 1 {
                return Err(Error::PrimitivityFailed {
                    witness: verts,
                    volume: vol,
                });
            }
            all.push(cell);
        }
    }
    Ok(all)
}

/// Boundary simplices of `t` grouped by the smallest face of `p` containing them.
pub fn simplices_by_carrier(
    p: &LatticePolytope,
    t: &CentralTriangulation,
) -> BTreeMap<usize, Vec<Vec<usize>>> {
    let mut out: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    for s in t.all_faces() {
        out.entry(carrier_of_set(p, t, &s)).or_default().push(s);
    }
    out
}

/// The smallest face of `p` containing the given triangulation points.
pub fn carrier_of_set(p: &LatticePolytope, t: &CentralTriangulation, set: &[usize]) -> usize {
    let tight: Vec<usize> = (0..p.facets().len())
        .filter(|&k| {
            let f = &p.facets()[k];
            set.iter()
                .all(|&i| lattice::dot(&f.normal, &t.points[i]) == f.rhs)
        })
        .collect();
    p.face_from_facets(&tight)
        .expect("facet intersections are faces")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    #[test]
    fn square_staircase_has_eight_edges() {
        let p = builtin::cube(2);
        let t = generate(&p, Strategy::Staircase, 0).unwrap();
        assert_eq!(t.simplices().len(), 8);
        assert_eq!(t.points().len(), 8);
    }

    #[test]
    fn canonical_for_unimodular_facets() {
        let p = builtin::cross(3);
        let t = generate(&p, Strategy::Staircase, 0).unwrap();
        assert_eq!(t.simplices().len(), 8);
    }

    #[test]
    fn missing_point_breaks_primitivity() {
        let p = builtin::cube(2);
        let t = generate(&p, Strategy::Staircase, 0).unwrap();
        // merge the two edges through (1, 0) into one long edge
        let mid = t.points().iter().position(|x| x == &vec![1, 0]).unwrap();
        let mut simplices: Vec<Vec<usize>> = t
            .simplices()
            .iter()
            .filter(|s| !s.contains(&mid))
            .cloned()
            .collect();
        let a = t.points().iter().position(|x| x == &vec![1, -1]).unwrap();
        let b = t.points().iter().position(|x| x == &vec![1, 1]).unwrap();
        simplices.push(vec![a, b]);
        let bad = CentralTriangulation::new(t.points().to_vec(), simplices).unwrap();
        let r = validate(&p, &bad);
        assert!(!r.primitivity);
        assert!(!r.uses_all_points);
    }

    #[test]
    fn strategy_parses() {
        assert_eq!("pulling".parse::<Strategy>().unwrap(), Strategy::Pulling);
        assert!("regular".parse::<Strategy>().is_err());
    }
}
