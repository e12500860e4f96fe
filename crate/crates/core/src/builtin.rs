//! Named reflexive polytopes used throughout the examples and tests.

use crate::error::{Error, Result};
use crate::lattice::Point;
use crate::polytope::LatticePolytope;

/// `[-1, 1]^d`.
pub fn cube(d: usize) -> LatticePolytope {
    let vertices = (0..1u32 << d)
        .map(|m| {
            (0..d)
                .map(|i| if m >> i & 1 == 1 { 1 } else { -1 })
                .collect()
        })
        .collect();
    LatticePolytope::from_vertices(vertices).expect("cube is a polytope")
}

/// `conv(±e_1, …, ±e_d)`.
pub fn cross(d: usize) -> LatticePolytope {
    let mut vertices = Vec::with_capacity(2 * d);
    for i in 0..d {
        for s in [1, -1] {
            let mut v = vec![0; d];
            v[i] = s;
            vertices.push(v);
        }
    }
    LatticePolytope::from_vertices(vertices).expect("cross-polytope is a polytope")
}

/// The simplex `(d+1)·Δ_d` translated so that the origin is its only
/// interior point: `{x : x_i ≥ -1, Σ x_i ≤ 1}`.
pub fn simplex(d: usize) -> LatticePolytope {
    LatticePolytope::from_vertices(simplex_vertices(d)).expect("simplex is a polytope")
}

fn simplex_vertices(d: usize) -> Vec<Point> {
    let base = vec![-1i64; d];
    let mut vertices = vec![base.clone()];
    for i in 0..d {
        let mut v = base.clone();
        v[i] += d as i64 + 1;
        vertices.push(v);
    }
    vertices
}

/// The Newton polytope of quintic threefolds in `P^4`.
pub fn quintic() -> LatticePolytope {
    simplex(4)
}

/// Cartesian product of two polytopes.
pub fn product(a: &LatticePolytope, b: &LatticePolytope) -> Result<LatticePolytope> {
    let mut vertices = Vec::new();
    for u in a.vertices() {
        for v in b.vertices() {
            vertices.push(u.iter().chain(v).copied().collect());
        }
    }
    LatticePolytope::from_vertices(vertices)
}

/// `(3P) × (3P)` with `P` the unit triangle, the anticanonical polytope of `P^2 × P^2`.
pub fn p2xp2() -> LatticePolytope {
    product(&simplex(2), &simplex(2)).expect("product of triangles")
}

/// Parses names such as `quintic`, `p2xp2`, `cube:4`, `cross:3`, `simplex:2`,
/// optionally suffixed with `/dual`.
pub fn by_name(name: &str) -> Result<LatticePolytope> {
    let (base, dual) = match name.strip_suffix("/dual") {
        Some(b) => (b, true),
        None => (name, false),
    };
    let (kind, arg) = match base.split_once(':') {
        Some((k, a)) => {
            let d: usize = a.parse().map_err(|_| {
                Error::Unsupported(format!("bad dimension in polytope name {name:?}"))
            })?;
            if !(1..=6).contains(&d) {
                return Err(Error::Unsupported(format!(
                    "dimension {d} out of range 1..=6"
                )));
            }
            (k, Some(d))
        }
        None => (base, None),
    };
    let p = match (kind, arg) {
        ("quintic", None) => quintic(),
        ("p2xp2", None) => p2xp2(),
        ("cube", Some(d)) => cube(d),
        ("cross", Some(d)) => cross(d),
        ("simplex", Some(d)) => simplex(d),
        _ => return Err(Error::Unsupported(format!("unknown polytope {name:?}"))),
    };
    if dual {
        p.dualize()
    } else {
        Ok(p)
    }
}
