//! End-to-end reports on the named 4-dimensional pairs.

use tropbetti_core::builtin;
use tropbetti_core::divisor::{DivisorLab, GlobalHypothesis, RestrictionVerdict};
use tropbetti_core::triangulation::{generate, Strategy};
use tropbetti_core::{
    betti, BettiOptions, CentralTriangulation, Connectedness, DivisorF2, Error, GF2Vector,
    LatticePolytope,
};

struct Pair {
    p: LatticePolytope,
    t: CentralTriangulation,
    q: LatticePolytope,
    tq: CentralTriangulation,
}

fn pair(p: LatticePolytope) -> Pair {
    let q = p.dualize().unwrap();
    let t = generate(&p, Strategy::Staircase, 0).unwrap();
    let tq = generate(&q, Strategy::Staircase, 0).unwrap();
    Pair { p, t, q, tq }
}

#[test]
fn quintic_is_connected_with_b1_101() {
    let x = pair(builtin::quintic());
    let lab = DivisorLab::new(&x.p, &x.t).unwrap();
    let g = lab.construct_global(0).unwrap();
    assert_eq!(g.hypothesis, GlobalHypothesis::ThreeParities);
    assert!(g.admissibility.admissible);
    assert_eq!(
        g.vertex_classes[0].1,
        tropbetti_core::divisor::ConfigClass::SimpleVertex
    );
    let r = betti(
        &x.p,
        &x.t,
        &x.q,
        &x.tq,
        &g.divisor,
        &BettiOptions::default(),
    )
    .unwrap();
    assert_eq!(r.connected, Connectedness::Connected);
    assert_eq!(r.audit.restriction, RestrictionVerdict::NonzeroCertified);
    assert_eq!(r.b1, Some(101));
}

#[test]
fn cube_and_its_dual() {
    let cube = pair(builtin::cube(4));
    let lab = DivisorLab::new(&cube.p, &cube.t).unwrap();
    let g = lab.construct_global(3).unwrap();
    assert_eq!(g.hypothesis, GlobalHypothesis::EvenEdges);
    assert_eq!(g.divisor.support.len(), 16);
    let r = betti(
        &cube.p,
        &cube.t,
        &cube.q,
        &cube.tq,
        &g.divisor,
        &BettiOptions::default(),
    )
    .unwrap();
    assert_eq!((r.connected, r.b1), (Connectedness::Connected, Some(71)));

    // the empty divisor restricts to zero but is not admissible on the cube itself
    let r = betti(
        &cube.p,
        &cube.t,
        &cube.q,
        &cube.tq,
        &DivisorF2::empty(),
        &BettiOptions::default(),
    )
    .unwrap();
    assert_eq!(r.connected, Connectedness::TwoComponents);
    assert_eq!(r.b1, None);

    // patchworking on the cross-polytope side
    let cross = Pair {
        p: cube.q.clone(),
        t: cube.tq.clone(),
        q: cube.p.clone(),
        tq: cube.t.clone(),
    };
    let r = betti(
        &cross.p,
        &cross.t,
        &cross.q,
        &cross.tq,
        &DivisorF2::empty(),
        &BettiOptions::default(),
    )
    .unwrap();
    assert_eq!(r.connected, Connectedness::TwoComponents);
    assert_eq!(r.b1, Some(r.x_table.get(1, 1) + r.x_table.get(2, 1)));
    assert_eq!(r.b1, Some(72));
}

#[test]
fn restriction_is_invariant_under_principal_shifts() {
    let x = pair(builtin::cube(4));
    let lab = DivisorLab::new(&x.p, &x.t).unwrap();
    let l = lab.construct_global(0).unwrap().divisor;
    let base = lab.restriction_is_zero(&l, Some(68));
    assert_eq!(base, RestrictionVerdict::NonzeroCertified);
    for mask in 0..16 {
        let shifted = l.add(&lab.principal(&GF2Vector::from_mask(4, mask)));
        assert_eq!(lab.restriction_is_zero(&shifted, Some(68)), base);
    }
    let zero = lab.restriction_is_zero(&lab.principal(&GF2Vector::from_mask(4, 5)), Some(68));
    assert!(matches!(zero, RestrictionVerdict::Zero { .. }));
}

#[test]
fn p2xp2_fails_both_hypotheses() {
    let x = pair(builtin::p2xp2());
    let lab = DivisorLab::new(&x.p, &x.t).unwrap();
    match lab.construct_global(0) {
        Err(Error::HypothesisFailed { witness, .. }) => {
            assert_eq!(witness.len(), 4);
            let parities: std::collections::BTreeSet<Vec<i64>> = witness
                .iter()
                .map(|v| v.iter().map(|c| c.rem_euclid(2)).collect())
                .collect();
            assert_eq!(parities.len(), 4);
        }
        other => panic!("expected a hypothesis failure, got {other:?}"),
    }
}

#[test]
fn k3_withholds_b1() {
    let x = pair(builtin::cube(3));
    let r = betti(
        &x.p,
        &x.t,
        &x.q,
        &x.tq,
        &DivisorF2::empty(),
        &BettiOptions::default(),
    )
    .unwrap();
    assert_eq!(r.b1, None);
    assert!(!r.audit.hypersurface_level);
}
