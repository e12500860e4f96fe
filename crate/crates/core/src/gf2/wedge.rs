use std::collections::HashMap;

use super::matrix::GF2Matrix;
use super::vector::GF2Vector;
use crate::error::{Error, Result};

/// Coordinates on the `p`-th exterior power of `GF(2)^d`.
///
/// Coordinate `k` is the `k`-th `p`-subset of `0..d` in lexicographic order,
/// stored as a bitmask.
#[derive(Clone, Debug)]
pub struct WedgeBasis {
    ambient_dim: usize,
    degree: usize,
    subsets: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl WedgeBasis {
    pub fn new(ambient_dim: usize, degree: usize) -> Self {
        assert!(
            ambient_dim <= 64,
            "wedge coordinates support at most 64 dimensions"
        );
        let mut subsets = Vec::new();
        if degree <= ambient_dim {
            let mut current = Vec::with_capacity(degree);
            lex_subsets(ambient_dim, degree, 0, &mut current, &mut subsets);
        }
        let index = subsets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        Self {
            ambient_dim,
            degree,
            subsets,
            index,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of coordinates, `C(d, p)`.
    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    /// The subset (as sorted indices) behind coordinate `k`.
    pub fn subset(&self, k: usize) -> Vec<usize> {
        mask_indices(self.subsets[k])
    }

    pub fn subset_mask(&self, k: usize) -> u64 {
        self.subsets[k]
    }

    pub fn index_of(&self, subset: &[usize]) -> Option<usize> {
        let mut mask = 0u64;
        for &i in subset {
            if i >= self.ambient_dim || mask & (1 << i) != 0 {
                return None;
            }
            mask |= 1 << i;
        }
        if subset.len() != self.degree {
            return None;
        }
        self.index.get(&mask).copied()
    }

    /// Coordinates of `v_1 ∧ … ∧ v_p`: the coefficient at subset `S` is the
    /// determinant mod 2 of the minor on columns `S`.
    pub fn wedge(&self, vectors: &[GF2Vector]) -> GF2Vector {
        assert_eq!(vectors.len(), self.degree, "wedge needs exactly p vectors");
        let mut out = GF2Vector::zeros(self.len());
        for (k, &mask) in self.subsets.iter().enumerate() {
            let cols = mask_indices(mask);
            if minor_is_odd(vectors, &cols) {
                out.set(k, true);
            }
        }
        out
    }

    /// Wedge product `a ∧ b` of coordinate vectors from degrees `p` and `q`.
    pub fn product(
        left: &WedgeBasis,
        a: &GF2Vector,
        right: &WedgeBasis,
        b: &GF2Vector,
    ) -> GF2Vector {
        assert_eq!(left.ambient_dim, right.ambient_dim);
        let target = WedgeBasis::new(left.ambient_dim, left.degree + right.degree);
        let mut out = GF2Vector::zeros(target.len());
        for i in a.iter_ones() {
            for j in b.iter_ones() {
                let (s, t) = (left.subsets[i], right.subsets[j]);
                if s & t == 0 {
                    out.flip(target.index[&(s | t)]);
                }
            }
        }
        out
    }
}

fn lex_subsets(d: usize, p: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<u64>) {
    if current.len() == p {
        out.push(current.iter().fold(0u64, |m, &i| m | (1 << i)));
        return;
    }
    for i in start..d {
        if d - i < p - current.len() {
            break;
        }
        current.push(i);
        lex_subsets(d, p, i + 1, current, out);
        current.pop();
    }
}

fn mask_indices(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::new();
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

fn minor_is_odd(vectors: &[GF2Vector], cols: &[usize]) -> bool {
    let p = vectors.len();
    let mut rows: Vec<u64> = vectors
        .iter()
        .map(|v| {
            cols.iter()
                .enumerate()
                .fold(0u64, |m, (k, &c)| if v.get(c) { m | (1 << k) } else { m })
        })
        .collect();
    for c in 0..p {
        let Some(piv) = (c..p).find(|&r| rows[r] >> c & 1 == 1) else {
            return false;
        };
        rows.swap(c, piv);
        for r in c + 1..p {
            if rows[r] >> c & 1 == 1 {
                rows[r] ^= rows[c];
            }
        }
    }
    true
}

/// All `p`-fold wedges of an independent family, in lexicographic order of
/// the chosen index subsets. The result is a basis of `⋀^p span(basis)`.
pub fn wedge_subspace(basis: &[GF2Vector], p: usize, ambient_dim: usize) -> Result<Vec<GF2Vector>> {
    if basis.iter().any(|v| v.len() != ambient_dim) {
        return Err(Error::contract(
            "wedge_subspace: vector length differs from ambient dimension",
        ));
    }
    if GF2Matrix::from_rows(ambient_dim, basis).rank() != basis.len() {
        return Err(Error::contract(
            "wedge_subspace: input basis is linearly dependent",
        ));
    }
    if p > basis.len() {
        return Err(Error::contract(format!(
            "wedge_subspace: degree {p} exceeds basis size {}",
            basis.len()
        )));
    }
    let wb = WedgeBasis::new(ambient_dim, p);
    let choose = WedgeBasis::new(basis.len(), p);
    Ok((0..choose.len())
        .map(|k| {
            let picked: Vec<GF2Vector> = choose
                .subset(k)
                .into_iter()
                .map(|i| basis[i].clone())
                .collect();
            wb.wedge(&picked)
        })
        .collect())
}

/// Incremental echelon form that remembers how each stored row was built
/// from the original generators, so vectors can be expressed in them.
#[derive(Clone, Debug)]
struct Reducer {
    rows: Vec<(usize, GF2Vector, GF2Vector)>,
    generators: usize,
}

impl Reducer {
    fn new(generators: usize) -> Self {
        Self {
            rows: Vec::new(),
            generators,
        }
    }

    /// Reduces `v` against the stored rows; returns the remainder and the
    /// combination of generators that was subtracted.
    fn reduce(&self, v: &GF2Vector) -> (GF2Vector, GF2Vector) {
        let mut rest = v.clone();
        let mut combo = GF2Vector::zeros(self.generators);
        for (pivot, row, c) in &self.rows {
            if rest.get(*pivot) {
                rest.xor_assign(row);
                combo.xor_assign(c);
            }
        }
        (rest, combo)
    }

    /// Adds generator number `g`; returns false if it was dependent.
    fn push(&mut self, g: usize, v: &GF2Vector) -> bool {
        let (rest, mut combo) = self.reduce(v);
        let Some(pivot) = rest.first_one() else {
            return false;
        };
        combo.flip(g);
        // keep earlier rows clear of the new pivot so reduction order stays valid
        for (_, row, c) in &mut self.rows {
            if row.get(pivot) {
                row.xor_assign(&rest);
                c.xor_assign(&combo);
            }
        }
        self.rows.push((pivot, rest, combo));
        true
    }
}

/// Projection from `span(space)` onto coordinates of `span(space)/span(subspace)`.
///
/// The complement basis consists of members of `space`, picked greedily in the
/// given order.
#[derive(Clone, Debug)]
pub struct Quotient {
    ambient_dim: usize,
    sub_dim: usize,
    complement: Vec<usize>,
    reducer: Reducer,
    matrix: GF2Matrix,
}

impl Quotient {
    /// Dimension of the quotient.
    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Indices into `space` of the complement basis.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    /// The projection as a `dim() × |space|` matrix on coordinates w.r.t. `space`.
    pub fn matrix(&self) -> &GF2Matrix {
        &self.matrix
    }

    /// Projects an ambient vector of `span(space)` to quotient coordinates.
    pub fn project(&self, v: &GF2Vector) -> Result<GF2Vector> {
        if v.len() != self.ambient_dim {
            return Err(Error::contract("quotient projection: wrong ambient length"));
        }
        let (rest, combo) = self.reducer.reduce(v);
        if !rest.is_zero() {
            return Err(Error::contract(
                "quotient projection: vector outside the space",
            ));
        }
        let mut out = GF2Vector::zeros(self.dim());
        for k in 0..self.dim() {
            if combo.get(self.sub_dim + k) {
                out.set(k, true);
            }
        }
        Ok(out)
    }
}

/// Builds the quotient map `span(space) → span(space)/span(subspace)`.
pub fn quotient_coords(
    space: &[GF2Vector],
    subspace: &[GF2Vector],
    ambient_dim: usize,
) -> Result<Quotient> {
    if space.iter().chain(subspace).any(|v| v.len() != ambient_dim) {
        return Err(Error::contract(
            "quotient_coords: vector length differs from ambient dimension",
        ));
    }
    let mut sub_red = Reducer::new(subspace.len());
    let mut sub_basis = Vec::new();
    for (i, v) in subspace.iter().enumerate() {
        if sub_red.push(i, v) {
            sub_basis.push(v.clone());
        }
    }
    let mut space_red = Reducer::new(space.len());
    for (i, v) in space.iter().enumerate() {
        space_red.push(i, v);
    }
    for v in subspace {
        if !space_red.reduce(v).0.is_zero() {
            return Err(Error::contract(
                "quotient_coords: subspace is not contained in the space",
            ));
        }
    }
    // generators: independent subspace vectors first, then the greedy complement
    let total = space_red.rows.len();
    let mut reducer = Reducer::new(total);
    for (g, v) in sub_basis.iter().enumerate() {
        reducer.push(g, v);
    }
    let sub_dim = sub_basis.len();
    let mut complement = Vec::new();
    for (i, v) in space.iter().enumerate() {
        if reducer.rows.len() == total {
            break;
        }
        if reducer.push(sub_dim + complement.len(), v) {
            complement.push(i);
        }
    }
    let mut q = Quotient {
        ambient_dim,
        sub_dim,
        complement,
        reducer,
        matrix: GF2Matrix::zeros(0, space.len()),
    };
    let cols: Vec<GF2Vector> = space.iter().map(|v| q.project(v)).collect::<Result<_>>()?;
    q.matrix = GF2Matrix::from_columns(q.dim(), &cols);
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(d: usize, i: usize) -> GF2Vector {
        GF2Vector::unit(d, i)
    }

    #[test]
    fn lexicographic_subset_order() {
        let wb = WedgeBasis::new(4, 2);
        let subsets: Vec<Vec<usize>> = (0..wb.len()).map(|k| wb.subset(k)).collect();
        assert_eq!(
            subsets,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(wb.index_of(&[1, 3]), Some(4));
        assert_eq!(WedgeBasis::new(3, 0).len(), 1);
        assert_eq!(WedgeBasis::new(3, 4).len(), 0);
    }

    #[test]
    fn wedge_of_two_units() {
        let w = wedge_subspace(&[e(3, 0), e(3, 1)], 2, 3).unwrap();
        assert_eq!(w, vec![GF2Vector::from_ints(&[1, 0, 0])]);
    }

    #[test]
    fn degree_zero_is_the_scalar_line() {
        let w = wedge_subspace(&[e(3, 0), e(3, 2)], 0, 3).unwrap();
        assert_eq!(w, vec![GF2Vector::from_ints(&[1])]);
    }

    #[test]
    fn dependent_basis_is_rejected() {
        assert!(wedge_subspace(&[e(3, 0), e(3, 0)], 1, 3).is_err());
    }

    #[test]
    fn quotient_by_first_axis() {
        let q = quotient_coords(&[e(2, 0), e(2, 1)], &[e(2, 0)], 2).unwrap();
        assert_eq!(q.dim(), 1);
        assert_eq!(q.matrix(), &GF2Matrix::from_int_rows(&[vec![0, 1]]));
    }

    #[test]
    fn quotient_by_everything_is_zero() {
        let space = [e(2, 0), e(2, 1)];
        let q = quotient_coords(&space, &space, 2).unwrap();
        assert_eq!(q.dim(), 0);
    }

    #[test]
    fn quotient_rejects_outside_subspace() {
        assert!(quotient_coords(&[e(3, 0)], &[e(3, 1)], 3).is_err());
    }
}
