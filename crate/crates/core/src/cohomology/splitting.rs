//! Grothendieck splitting of `W = coker(O(−1)^m → O^n)` on P¹, read off
//! from `h⁰(W(d))` as `d` varies.

use super::{induced_map, Twist};
use crate::algebra::{BiPoly, CMatrix, Poly, Scalar, ToleranceConfig};
use crate::error::{Error, Result};

/// `W ≅ ⊕ O(degrees[i]) ⊕ T` with `T` torsion of length `torsion`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingType {
    /// Descending.
    pub degrees: Vec<i64>,
    pub torsion: usize,
}

impl SplittingType {
    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    /// `c₁(W) = Σ degrees + torsion`.
    pub fn degree(&self) -> i64 {
        self.degrees.iter().sum::<i64>() + self.torsion as i64
    }

    pub fn h0(&self, d: i64) -> usize {
        self.degrees.iter().map(|a| (a + d + 1).max(0) as usize).sum::<usize>() + self.torsion
    }

    pub fn h1(&self, d: i64) -> usize {
        self.degrees.iter().map(|a| (-a - d - 1).max(0) as usize).sum()
    }
}

/// `(h⁰, h¹)` of `W(d)`: the one-variable long exact sequence, realised as
/// the two-factor one with a trivial second factor.
fn twisted_dims<S: Scalar>(entries: &CMatrix<BiPoly<S>>, d: i64, tol: &ToleranceConfig) -> Result<(usize, usize)> {
    let src = vec![Twist::new(d - 1, 0); entries.cols()];
    let dst = vec![Twist::new(d, 0); entries.rows()];
    let phi0 = induced_map(entries, &src, &dst, 0)?;
    let phi1 = induced_map(entries, &src, &dst, 1)?;
    let (r0, r1) = (phi0.rank(tol), phi1.rank(tol));
    Ok((phi0.rows() - r0 + phi1.cols() - r1, phi1.rows() - r1))
}

/// Splitting type of the cokernel of `C(ζ) = C0 + C1·ζ : O(−1)^m → O^n`.
pub fn p1_splitting_type<S: Scalar>(c0: &CMatrix<S>, c1: &CMatrix<S>, tol: &ToleranceConfig) -> Result<SplittingType> {
    let (n, m) = (c0.rows(), c0.cols());
    if c1.rows() != n || c1.cols() != m {
        return Err(Error::DimensionMismatch(format!(
            "C0 is {n}x{m} but C1 is {}x{}",
            c1.rows(),
            c1.cols()
        )));
    }
    // maximal minors have degree ≤ m, so m + 1 samples decide generic rank
    let full_somewhere = (0..=m as i64).any(|z| {
        let at = c0 + &c1.scale(&S::from_int(z));
        at.rank(tol) == m
    });
    if !full_somewhere {
        return Err(Error::DegenerateInput(
            "C(ζ) does not have full column rank at a generic point".into(),
        ));
    }

    let entries = CMatrix::from_fn(n, m, |r, c| {
        BiPoly::from_zeta_poly(&Poly::new(vec![c0[(r, c)].clone(), c1[(r, c)].clone()]))
    });
    let span = n.max(m) as i64;
    let lo = -(span + 2);
    let f: Vec<usize> = (lo..=span)
        .map(|d| twisted_dims(&entries, d, tol).map(|(h0, _)| h0))
        .collect::<Result<_>>()?;
    let h0 = |d: i64| f[(d - lo) as usize];

    let torsion = h0(lo);
    let mut degrees = Vec::new();
    // #{a ≥ j} = h⁰(W(−j)) − h⁰(W(−j−1)); quotients of O^n have a ≥ 0
    for j in (0..=span).rev() {
        let at_least = h0(-j) - h0(-j - 1);
        while degrees.len() < at_least {
            degrees.push(j);
        }
    }
    let split = SplittingType { degrees, torsion };
    if split.rank() != n - m || split.degree() != m as i64 {
        return Err(Error::DegenerateInput(format!(
            "inconsistent splitting {split:?} for an {n}x{m} presentation"
        )));
    }
    Ok(split)
}
