//! Hand-built parity patterns around a vertex and an edge of the 4-cube.

use tropbetti_core::builtin;
use tropbetti_core::divisor::{CaseStatus, ConfigClass, DivisorLab};
use tropbetti_core::polytope::parity;
use tropbetti_core::triangulation::{generate, Strategy};
use tropbetti_core::{CentralTriangulation, GF2Vector, LatticePolytope};

fn setup() -> (LatticePolytope, CentralTriangulation) {
    let p = builtin::cube(4);
    let t = generate(&p, Strategy::Staircase, 0).unwrap();
    (p, t)
}

struct Vertex {
    r: GF2Vector,
    v: Vec<GF2Vector>,
    n: Vec<GF2Vector>,
}

fn vertex_data(lab: &DivisorLab) -> (Vertex, tropbetti_core::divisor::VertexFrame) {
    let frame = lab.vertex_frame(0).unwrap();
    let t = lab.triangulation();
    let data = Vertex {
        r: parity(&t.points()[frame.point]),
        v: frame
            .neighbours
            .iter()
            .map(|&v| parity(&t.points()[v]))
            .collect(),
        n: frame.normals.iter().map(|n| parity(n)).collect(),
    };
    (data, frame)
}

#[test]
fn normals_pair_with_neighbours() {
    let (p, t) = setup();
    let lab = DivisorLab::new(&p, &t).unwrap();
    let (x, _) = vertex_data(&lab);
    for i in 0..4 {
        assert!(x.n[i].dot(&x.r));
        for j in 0..4 {
            assert_eq!(x.n[i].dot(&x.v[j]), i != j);
        }
    }
}

#[test]
fn simple_vertex() {
    let (p, t) = setup();
    let lab = DivisorLab::new(&p, &t).unwrap();
    let (x, frame) = vertex_data(&lab);
    let choices: Vec<_> = frame
        .two_faces
        .values()
        .map(|&f| (f, x.r.clone()))
        .collect();
    let l = lab.from_face_parities(&choices);
    assert_eq!(
        lab.classify_vertex(0, &l).unwrap(),
        ConfigClass::SimpleVertex
    );
    let verdict = lab.check(frame.point, &l).unwrap();
    assert_eq!(verdict.status, CaseStatus::Case1);
    assert_eq!(verdict.witness, Some(vec![0; 4]));
}

#[test]
fn pointed_vertex() {
    let (p, t) = setup();
    let lab = DivisorLab::new(&p, &t).unwrap();
    let (x, frame) = vertex_data(&lab);
    for j in 0..4 {
        let choices: Vec<_> = frame
            .two_faces
            .iter()
            .map(|(&(a, b), &f)| {
                let q = if a == j || b == j {
                    x.v[j].clone()
                } else {
                    x.r.xor(&x.v[a]).xor(&x.v[b])
                };
                (f, q)
            })
            .collect();
        let l = lab.from_face_parities(&choices);
        assert_eq!(
            lab.classify_vertex(0, &l).unwrap(),
            ConfigClass::PointedVertex
        );
        assert!(!l.contains(frame.point));
        assert_eq!(
            lab.check(frame.point, &l).unwrap().status,
            CaseStatus::Case2
        );
        let mut m = GF2Vector::zeros(4);
        for i in (0..4).filter(|&i| i != j) {
            m.xor_assign(&x.n[i]);
        }
        assert!(lab.witness_holds(frame.point, &l, &m).unwrap());
    }
}

#[test]
fn non_admissible_vertex() {
    let (p, t) = setup();
    let lab = DivisorLab::new(&p, &t).unwrap();
    let (x, frame) = vertex_data(&lab);
    let choices: Vec<_> = frame
        .two_faces
        .iter()
        .map(|(&(a, b), &f)| (f, x.r.xor(&x.v[a]).xor(&x.v[b])))
        .collect();
    let l = lab.from_face_parities(&choices);
    assert_eq!(
        lab.classify_vertex(0, &l).unwrap(),
        ConfigClass::NonAdmissibleVertex
    );
    let verdict = lab.check(frame.point, &l).unwrap();
    assert_eq!(verdict.status, CaseStatus::Fail);
    assert_eq!(verdict.witness, None);
    // Case 1 does not apply since r ∉ L, and only m = 0 kills every [v_j]
    assert!(lab.check_case1(frame.point, &l).is_err());
    for mask in 1..16u64 {
        let m = GF2Vector::from_mask(4, mask);
        assert!(x.v.iter().any(|v| v.dot(&m)));
    }
}

/// The edge `E_0` at vertex 0 with its three 2-faces and its midpoint.
fn edge_setup(lab: &DivisorLab) -> (usize, Vec<usize>, usize, Vertex) {
    let (x, frame) = vertex_data(lab);
    let faces = (1..4).map(|k| frame.two_faces[&(0, k)]).collect();
    (frame.edges[0], faces, frame.neighbours[0], x)
}

#[test]
fn simple_edge() {
    let (p, t) = setup();
    let lab = DivisorLab::new(&p, &t).unwrap();
    let (e, faces, mid, x) = edge_setup(&lab);
    for pe in [x.r.clone(), x.v[0].clone()] {
        let choices: Vec<_> = faces.iter().map(|&f| (f, pe.clone())).collect();
        let l = lab.from_face_parities(&choices);
        assert_eq!(lab.classify_edge(e, &l).unwrap(), ConfigClass::SimpleEdge);
        let verdict = lab.check(mid, &l).unwrap();
        if pe == x.v[0] {
            assert_eq!(verdict.status, CaseStatus::Case1);
        } else {
            assert_eq!(verdict.status, CaseStatus::Case2);
            let m = x.n[1].xor(&x.n[2]).xor(&x.n[3]);
            assert!(lab.witness_holds(mid, &l, &m).unwrap());
        }
    }
}

#[test]
fn empty_edge() {
    let (p, t) = setup();
    let lab = DivisorLab::new(&p, &t).unwrap();
    let (e, faces, mid, x) = edge_setup(&lab);
    let ps: Vec<GF2Vector> = (1..4).map(|k| x.v[k].clone()).collect();
    assert!(!ps[0].xor(&ps[1]).xor(&ps[2]).is_zero());
    let choices: Vec<_> = faces.iter().copied().zip(ps).collect();
    let l = lab.from_face_parities(&choices);
    assert_eq!(lab.classify_edge(e, &l).unwrap(), ConfigClass::EmptyEdge);
    assert_eq!(lab.check(mid, &l).unwrap().status, CaseStatus::Case2);
}

#[test]
fn non_admissible_edge() {
    let (p, t) = setup();
    let lab = DivisorLab::new(&p, &t).unwrap();
    let (e, faces, mid, x) = edge_setup(&lab);
    let p1 = x.v[1].clone();
    let p2 = x.v[2].clone();
    let p3 = p1.xor(&p2);
    assert!(p.parity_span(faces[2]).contains(&p3));
    let choices = vec![(faces[0], p1), (faces[1], p2), (faces[2], p3)];
    let l = lab.from_face_parities(&choices);
    assert_eq!(
        lab.classify_edge(e, &l).unwrap(),
        ConfigClass::NonAdmissibleEdge
    );
    assert_eq!(lab.check(mid, &l).unwrap().status, CaseStatus::Fail);
}
