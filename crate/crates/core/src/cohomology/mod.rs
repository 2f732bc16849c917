//! Cohomology of line bundles on P¹×P¹ with explicit monomial bases, and
//! of sheaves presented by two-term complexes of such bundles.
//!
//! Conventions, per factor with twist `d`: `H⁰(O(d))` has basis `ζ^a` for
//! `0 ≤ a ≤ d`, `H¹(O(d))` has basis the Čech classes `ζ^a` on the chart
//! overlap for `d+1 ≤ a ≤ −1`. A product class on P¹×P¹ is a pair of such
//! factor classes (Künneth), so `H¹` comes in two chunks: `H¹⊗H⁰` first,
//! then `H⁰⊗H¹`. Multiplication by a polynomial section multiplies Laurent
//! monomials and drops every product that leaves the target range, which
//! is the coboundary projection.

mod monad;
mod splitting;
mod theorems;

pub use monad::{
    hilbert_polynomial, monad_cohomology, pencil_complex, sheaf_cohomology, sheaf_cohomology_pencil, CohomologyDims,
    HilbertPolynomial, MonadComplex,
};
pub use splitting::{p1_splitting_type, SplittingType};
pub use theorems::{rank_theorem_check, theorem1_check, RankTheoremReport, Theorem1Report};

use serde::{Deserialize, Serialize};

use crate::algebra::{BiPoly, CMatrix, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Twist {
    pub p: i64,
    pub q: i64,
}

impl Twist {
    pub const fn new(p: i64, q: i64) -> Self {
        Self { p, q }
    }

    pub fn plus(self, other: Twist) -> Twist {
        Twist::new(self.p + other.p, self.q + other.q)
    }

    pub fn minus(self, other: Twist) -> Twist {
        Twist::new(self.p - other.p, self.q - other.q)
    }

    /// `χ(O(p, q)) = (p + 1)(q + 1)`.
    pub fn euler_characteristic(self) -> i64 {
        (self.p + 1) * (self.q + 1)
    }
}

/// Which cohomology group a factor class belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FactorKind {
    H0,
    H1,
}

fn factor_range(d: i64, kind: FactorKind) -> std::ops::RangeInclusive<i64> {
    match kind {
        FactorKind::H0 => 0..=d,
        FactorKind::H1 => d + 1..=-1,
    }
}

/// Chunks of `H^degree` as `(ζ-factor kind, η-factor kind)`.
fn chunks(degree: u8) -> &'static [(FactorKind, FactorKind)] {
    use FactorKind::*;
    match degree {
        0 => &[(H0, H0)],
        1 => &[(H1, H0), (H0, H1)],
        2 => &[(H1, H1)],
        _ => &[],
    }
}

/// Monomial basis of `H^degree(O(p, q))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohClassSpace {
    pub twist: Twist,
    pub degree: u8,
    /// Exponents `(a, b)` of `ζ^a η^b`, chunk by chunk, each chunk in
    /// increasing `(a, b)` order.
    pub basis: Vec<(i64, i64)>,
}

impl CohClassSpace {
    pub fn new(twist: Twist, degree: u8) -> Self {
        let mut basis = Vec::new();
        for &(kz, ke) in chunks(degree) {
            for a in factor_range(twist.p, kz) {
                for b in factor_range(twist.q, ke) {
                    basis.push((a, b));
                }
            }
        }
        Self { twist, degree, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Position of `ζ^a η^b` in the basis, if it is a basis monomial.
    fn index_of(&self, a: i64, b: i64) -> Option<usize> {
        self.basis.iter().position(|&m| m == (a, b))
    }
}

/// `(h⁰, h¹, h²)` of `O(p, q)` in closed form.
pub fn line_bundle_dims(t: Twist) -> (usize, usize, usize) {
    let h0 = |d: i64| if d >= 0 { (d + 1) as usize } else { 0 };
    let h1 = |d: i64| if d <= -2 { (-d - 1) as usize } else { 0 };
    (
        h0(t.p) * h0(t.q),
        h1(t.p) * h0(t.q) + h0(t.p) * h1(t.q),
        h1(t.p) * h1(t.q),
    )
}

/// Matrix of the map `⊕ H^degree(O(src_j)) → ⊕ H^degree(O(dst_i))` induced
/// by multiplication with `entries[(i, j)]`, a polynomial of bidegree at
/// most `dst_i − src_j`.
pub fn induced_map<S: Scalar>(
    entries: &CMatrix<BiPoly<S>>,
    src: &[Twist],
    dst: &[Twist],
    degree: u8,
) -> Result<CMatrix<S>> {
    if entries.rows() != dst.len() || entries.cols() != src.len() {
        return Err(Error::DimensionMismatch(format!(
            "entry grid is {}x{} but there are {} target and {} source summands",
            entries.rows(),
            entries.cols(),
            dst.len(),
            src.len()
        )));
    }
    let src_spaces: Vec<CohClassSpace> = src.iter().map(|&t| CohClassSpace::new(t, degree)).collect();
    let dst_spaces: Vec<CohClassSpace> = dst.iter().map(|&t| CohClassSpace::new(t, degree)).collect();
    let offsets = |spaces: &[CohClassSpace]| {
        let mut acc = 0;
        spaces
            .iter()
            .map(|s| {
                let o = acc;
                acc += s.dim();
                o
            })
            .collect::<Vec<_>>()
    };
    let src_off = offsets(&src_spaces);
    let dst_off = offsets(&dst_spaces);
    let rows = dst_spaces.iter().map(CohClassSpace::dim).sum();
    let cols = src_spaces.iter().map(CohClassSpace::dim).sum();
    let mut out = CMatrix::<S>::zeros(rows, cols);

    for (i, dst_space) in dst_spaces.iter().enumerate() {
        for (j, src_space) in src_spaces.iter().enumerate() {
            let poly = &entries[(i, j)];
            let room = dst[i].minus(src[j]);
            let terms = poly.terms();
            for &(dz, de, _) in &terms {
                if dz as i64 > room.p || de as i64 > room.q {
                    return Err(Error::BidegreeMismatch {
                        row: i,
                        col: j,
                        dz,
                        de,
                        max_dz: room.p,
                        max_de: room.q,
                    });
                }
            }
            if dst_space.dim() == 0 || src_space.dim() == 0 {
                continue;
            }
            for (c, &(a, b)) in src_space.basis.iter().enumerate() {
                for (dz, de, coeff) in &terms {
                    let target = (a + *dz as i64, b + *de as i64);
                    // the factor kinds are fixed by the signs of the source
                    // exponents; landing outside the target range is a
                    // coboundary
                    if (a < 0) != (target.0 < 0) || (b < 0) != (target.1 < 0) {
                        continue;
                    }
                    if let Some(r) = dst_space.index_of(target.0, target.1) {
                        let (rr, cc) = (dst_off[i] + r, src_off[j] + c);
                        let v = out[(rr, cc)].clone() + coeff.clone();
                        out[(rr, cc)] = v;
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GaussRat;

    fn q(v: i64) -> GaussRat {
        GaussRat::from_int(v)
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(line_bundle_dims(Twist::new(2, 3)), (12, 0, 0));
        assert_eq!(line_bundle_dims(Twist::new(-1, 5)), (0, 0, 0));
        assert_eq!(line_bundle_dims(Twist::new(-3, 1)), (0, 4, 0));
        assert_eq!(line_bundle_dims(Twist::new(-3, -4)), (0, 0, 6));
    }

    #[test]
    fn basis_dims_match_closed_form() {
        for p in -4..=4 {
            for qq in -4..=4 {
                let t = Twist::new(p, qq);
                let (h0, h1, h2) = line_bundle_dims(t);
                assert_eq!(CohClassSpace::new(t, 0).dim(), h0);
                assert_eq!(CohClassSpace::new(t, 1).dim(), h1);
                assert_eq!(CohClassSpace::new(t, 2).dim(), h2);
                assert_eq!(h0 as i64 - h1 as i64 + h2 as i64, t.euler_characteristic());
            }
        }
    }

    fn single(p: BiPoly<GaussRat>) -> CMatrix<BiPoly<GaussRat>> {
        CMatrix::from_vec(1, 1, vec![p])
    }

    #[test]
    fn multiply_by_zeta_on_sections() {
        let z = single(BiPoly::zeta());
        let m = induced_map(&z, &[Twist::new(1, 0)], &[Twist::new(2, 0)], 0).unwrap();
        let expected = CMatrix::from_rows(&[vec![q(0), q(0)], vec![q(1), q(0)], vec![q(0), q(1)]]);
        assert_eq!(m, expected);
    }

    #[test]
    fn multiply_by_zeta_kills_top_h1_class() {
        let z = single(BiPoly::zeta());
        // H¹(O(−2, 0)) = ⟨ζ⁻¹⟩ ↦ ζ⁰, a coboundary
        let m = induced_map(&z, &[Twist::new(-2, 0)], &[Twist::new(-1, 0)], 1).unwrap();
        assert_eq!((m.rows(), m.cols()), (0, 1));
    }

    #[test]
    fn h2_multiplication() {
        let zw = single(BiPoly::from_terms(&[(1, 1, q(1))]));
        let m = induced_map(&zw, &[Twist::new(-3, -3)], &[Twist::new(-2, -2)], 2).unwrap();
        // source basis (−2,−2), (−2,−1), (−1,−2), (−1,−1)
        assert_eq!(m, CMatrix::from_rows(&[vec![q(1), q(0), q(0), q(0)]]));
    }

    #[test]
    fn bidegree_is_checked() {
        let zz = single(BiPoly::from_terms(&[(2, 0, q(1))]));
        let err = induced_map(&zz, &[Twist::new(0, 0)], &[Twist::new(1, 0)], 0).unwrap_err();
        assert!(matches!(err, Error::BidegreeMismatch { dz: 2, max_dz: 1, .. }));
    }
}
