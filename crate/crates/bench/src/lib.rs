//! Fixtures shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropbetti_core::builtin;
use tropbetti_core::triangulation::{generate, Strategy};
use tropbetti_core::{GF2Matrix, GF2Vector, TropicalComplex};

/// A dense random `rows × cols` matrix, fixed by `seed`.
pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> GF2Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<GF2Vector> = (0..rows)
        .map(|_| GF2Vector::from_bits(&(0..cols).map(|_| rng.gen_bool(0.5)).collect::<Vec<_>>()))
        .collect();
    GF2Matrix::from_rows(cols, &data)
}

/// The `X` side complex for a built-in polytope with staircase triangulations.
pub fn x_side(name: &str) -> TropicalComplex {
    let p = builtin::by_name(name).expect("built-in polytope");
    let q = p.dualize().expect("reflexive");
    let t = generate(&p, Strategy::Staircase, 0).expect("triangulation");
    let tq = generate(&q, Strategy::Staircase, 0).expect("dual triangulation");
    TropicalComplex::x_side(&p, &t, &q, &tq).expect("complex")
}
