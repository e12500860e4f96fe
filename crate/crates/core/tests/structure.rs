//! Structural invariants of polytopes, triangulations and complexes.

use tropbetti_core::builtin;
use tropbetti_core::complex::mirror_check;
use tropbetti_core::triangulation::{generate, validate, Strategy};
use tropbetti_core::{LatticePolytope, TropicalComplex};

fn named() -> Vec<LatticePolytope> {
    vec![
        builtin::simplex(2),
        builtin::cube(2),
        builtin::cube(3),
        builtin::cross(3),
        builtin::quintic(),
        builtin::cube(4),
        builtin::cross(4),
        builtin::p2xp2(),
    ]
}

#[test]
fn dualize_is_an_involution() {
    for p in named() {
        let back = p.dualize().unwrap().dualize().unwrap();
        let mut a = p.vertices().to_vec();
        let mut b = back.vertices().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}

#[test]
fn boundary_euler_characteristic() {
    for p in named() {
        let f = p.f_vector();
        let d = p.dim();
        let chi: i64 = f[..d]
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum();
        assert_eq!(chi, 1 - (-1i64).pow(d as u32), "{f:?}");
    }
}

#[test]
fn staircase_volume_certificates() {
    // boundary simplex counts equal normalized volumes of the facets
    let cases = [
        (builtin::quintic(), 625),
        (builtin::cube(4), 384),
        (builtin::cube(3), 48),
        (builtin::p2xp2(), 486),
        (builtin::cross(4), 16),
    ];
    for (p, count) in cases {
        let t = generate(&p, Strategy::Staircase, 0).unwrap();
        let report = validate(&p, &t);
        assert!(report.is_valid(), "{:?}", report.failures);
        assert_eq!(report.simplex_count, count);
        assert_eq!(report.volume_sum, report.expected_volume);
        assert_eq!(p.normalized_volume() as usize, count);
    }
}

#[test]
fn pulling_is_valid_or_refused() {
    for p in [
        builtin::cube(3),
        builtin::cross(4),
        builtin::quintic().dualize().unwrap(),
    ] {
        for seed in 0..3 {
            let t = generate(&p, Strategy::Pulling, seed).unwrap();
            assert!(validate(&p, &t).is_valid());
        }
    }
}

#[test]
fn adjacent_points_have_distinct_parities() {
    for p in [builtin::cube(3), builtin::quintic(), builtin::cube(4)] {
        let t = generate(&p, Strategy::Staircase, 0).unwrap();
        let adj = t.adjacency().unwrap();
        for r in 0..adj.len() {
            for &v in adj.neighbours(r) {
                let a: Vec<i64> = t.points()[r].iter().map(|x| x.rem_euclid(2)).collect();
                let b: Vec<i64> = t.points()[v].iter().map(|x| x.rem_euclid(2)).collect();
                assert_ne!(a, b);
            }
        }
    }
}

fn pair(p: LatticePolytope) -> (TropicalComplex, TropicalComplex) {
    let q = p.dualize().unwrap();
    let t = generate(&p, Strategy::Staircase, 0).unwrap();
    let tq = generate(&q, Strategy::Staircase, 0).unwrap();
    (
        TropicalComplex::x_side(&p, &t, &q, &tq).unwrap(),
        TropicalComplex::mirror_side(&p, &t, &q, &tq).unwrap(),
    )
}

#[test]
fn coboundary_squares_to_zero() {
    for p in [builtin::simplex(2), builtin::cube(3), builtin::cross(3)] {
        let (x, m) = pair(p);
        for c in [x, m] {
            let n = c.n();
            for pp in 0..=n {
                for q in 0..n {
                    let a = c.coboundary(pp, q).unwrap();
                    let b = c.coboundary(pp, q + 1).unwrap();
                    assert!(b.mul(&a).unwrap().is_zero());
                }
            }
        }
    }
}

#[test]
fn elliptic_and_k3_mirror_identity() {
    let (x, m) = pair(builtin::simplex(2));
    let (tx, tm) = (x.cohomology_table().unwrap(), m.cohomology_table().unwrap());
    assert_eq!(tx.dims, vec![vec![1, 1], vec![1, 1]]);
    assert_eq!(mirror_check(&tx, &tm), Ok(()));
    for p in [builtin::cube(3), builtin::cross(3), builtin::simplex(3)] {
        let (x, m) = pair(p);
        let (tx, tm) = (x.cohomology_table().unwrap(), m.cohomology_table().unwrap());
        assert_eq!(tx.dims, vec![vec![1, 0, 1], vec![0, 20, 0], vec![1, 0, 1]]);
        assert_eq!(mirror_check(&tx, &tm), Ok(()));
    }
}

#[test]
fn quintic_hodge_numbers() {
    let (x, m) = pair(builtin::quintic());
    let tx = x.cohomology_table().unwrap();
    assert_eq!(tx.get(1, 1), 1);
    assert_eq!(tx.get(2, 1), 101);
    assert_eq!(tx.euler_characteristics()[1], 100);
    assert_eq!(mirror_check(&tx, &m.cohomology_table().unwrap()), Ok(()));
}
