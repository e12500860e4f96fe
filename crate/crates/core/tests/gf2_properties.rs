//! Property checks for the GF(2) kernel against brute-force oracles.

use proptest::prelude::*;
use tropbetti_core::gf2::{quotient_coords, wedge_subspace};
use tropbetti_core::{GF2Matrix, GF2Vector, WedgeBasis};

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = (usize, Vec<Vec<bool>>)> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        (
            Just(c),
            prop::collection::vec(prop::collection::vec(any::<bool>(), c), r),
        )
    })
}

fn build(cols: usize, rows: &[Vec<bool>]) -> GF2Matrix {
    GF2Matrix::from_rows(
        cols,
        &rows
            .iter()
            .map(|r| GF2Vector::from_bits(r))
            .collect::<Vec<_>>(),
    )
}

/// Rank as log2 of the row space size, by enumerating all row combinations.
fn oracle_rank(rows: &[Vec<bool>]) -> usize {
    let mut seen = std::collections::HashSet::new();
    for mask in 0..1u32 << rows.len() {
        let mut acc = vec![false; rows[0].len()];
        for (i, r) in rows.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for (a, b) in acc.iter_mut().zip(r) {
                    *a ^= b;
                }
            }
        }
        seen.insert(acc);
    }
    seen.len().trailing_zeros() as usize
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rank_nullity((cols, rows) in matrix(12, 70)) {
        let m = build(cols, &rows);
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.len(), cols);
        for k in &kernel {
            prop_assert!(m.mul_vec(k).unwrap().is_zero());
        }
        prop_assert_eq!(GF2Matrix::from_rows(cols, &kernel).rank(), kernel.len());
    }

    #[test]
    fn rank_matches_oracle((cols, rows) in matrix(9, 12)) {
        let m = build(cols, &rows);
        prop_assert_eq!(m.rank(), oracle_rank(&rows));
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn solve_affine_agrees_with_search((cols, rows) in matrix(8, 8), b in prop::collection::vec(any::<bool>(), 8)) {
        let m = build(cols, &rows);
        let rhs = GF2Vector::from_bits(&b[..rows.len()]);
        let solvable = (0..1u64 << cols).any(|x| m.mul_vec(&GF2Vector::from_mask(cols, x)).unwrap() == rhs);
        match m.solve_affine(&rhs).unwrap() {
            Some(x) => prop_assert_eq!(m.mul_vec(&x).unwrap(), rhs),
            None => prop_assert!(!solvable),
        }
    }

    #[test]
    fn quotient_dimension_and_kernel(n in 2usize..7, p in 1usize..4, seed in any::<u64>()) {
        prop_assume!(p <= n);
        // a random subspace spanned by independent vectors of F_2^n
        let mut basis: Vec<GF2Vector> = Vec::new();
        let mut s = seed;
        while basis.len() < n / 2 {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let v = GF2Vector::from_mask(n, (s >> 33) & ((1 << n) - 1));
            let mut rows = basis.clone();
            rows.push(v.clone());
            if GF2Matrix::from_rows(n, &rows).rank() == rows.len() {
                basis.push(v);
            }
        }
        let wb = WedgeBasis::new(n, p);
        let space: Vec<GF2Vector> = (0..wb.len()).map(|k| GF2Vector::unit(wb.len(), k)).collect();
        let sub = if basis.len() >= p { wedge_subspace(&basis, p, n).unwrap() } else { Vec::new() };
        let q = quotient_coords(&space, &sub, wb.len()).unwrap();
        let sub_rank = GF2Matrix::from_rows(wb.len(), &sub).rank();
        prop_assert_eq!(q.dim(), wb.len() - sub_rank);
        for v in &sub {
            prop_assert!(q.project(v).unwrap().is_zero());
        }
    }

    #[test]
    fn wedge_vanishes_exactly_on_dependent_tuples(n in 2usize..7, masks in prop::collection::vec(any::<u64>(), 1..4)) {
        prop_assume!(masks.len() <= n);
        let vs: Vec<GF2Vector> = masks.iter().map(|&m| GF2Vector::from_mask(n, m & ((1 << n) - 1))).collect();
        let wb = WedgeBasis::new(n, vs.len());
        let independent = GF2Matrix::from_rows(n, &vs).rank() == vs.len();
        prop_assert_eq!(!wb.wedge(&vs).is_zero(), independent);
    }
}
