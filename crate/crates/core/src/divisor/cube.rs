//! The cup-product model `F_2[x_0, …, x_n]/(x_i^2)` for the Calabi-Yau in
//! `(P^1)^{n+1}`, truncated at degree 2.
//!
//! Over `F_2` this ring agrees with the exterior algebra, so products reuse
//! [`WedgeBasis`] coordinates.

use crate::error::{Error, Result};
use crate::gf2::{GF2Matrix, GF2Vector, WedgeBasis};

const MAX_FACTORS: usize = 16;

fn bases(factors: usize) -> Result<(WedgeBasis, WedgeBasis)> {
    if factors == 0 || factors > MAX_FACTORS {
        return Err(Error::Unsupported(format!(
            "cube model with {factors} factors"
        )));
    }
    Ok((WedgeBasis::new(factors, 1), WedgeBasis::new(factors, 2)))
}

/// `a ∪ b` for degree-1 classes given in the basis `x_0, …, x_n`.
pub fn cube_cup(a: &GF2Vector, b: &GF2Vector) -> Result<GF2Vector> {
    if a.len() != b.len() {
        return Err(Error::contract("degree-1 classes of different lengths"));
    }
    let (one, _) = bases(a.len())?;
    Ok(WedgeBasis::product(&one, a, &one, b))
}

/// `β^2`, which vanishes identically since `x_i^2 = 0` and `2 x_i x_j = 0`.
pub fn cube_square(beta: &GF2Vector) -> Result<GF2Vector> {
    cube_cup(beta, beta)
}

/// Matrix of the linear map `β ↦ β^2 + β ∪ D` from degree 1 to degree 2.
pub fn cube_cup_matrix(d: &GF2Vector) -> Result<GF2Matrix> {
    let (_, two) = bases(d.len())?;
    let columns = (0..d.len())
        .map(|i| {
            let x = GF2Vector::unit(d.len(), i);
            Ok(cube_square(&x)?.xor(&cube_cup(&x, d)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GF2Matrix::from_columns(two.len(), &columns))
}

/// Kernel of `β ↦ β^2 + β ∪ D`.
pub fn cube_cup_kernel(d: &GF2Vector) -> Result<Vec<GF2Vector>> {
    Ok(cube_cup_matrix(d)?.kernel_basis())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_of_generators() {
        let x0 = GF2Vector::unit(4, 0);
        let x2 = GF2Vector::unit(4, 2);
        let prod = cube_cup(&x0, &x2).unwrap();
        assert_eq!(prod.count_ones(), 1);
        assert!(cube_cup(&x0, &x0).unwrap().is_zero());
    }

    #[test]
    fn kernel_of_nonzero_d_is_spanned_by_d() {
        let d = GF2Vector::from_bits(&[true, false, true, true]);
        let m = cube_cup_matrix(&d).unwrap();
        assert_eq!(m.rank(), 3);
        assert_eq!(cube_cup_kernel(&d).unwrap(), vec![d]);
    }

    #[test]
    fn kernel_of_zero_is_everything() {
        assert_eq!(cube_cup_kernel(&GF2Vector::zeros(5)).unwrap().len(), 5);
    }
}
