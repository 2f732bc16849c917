//! Sheaves presented as cokernels `0 → E₁ → E₀ → F → 0` of maps between
//! sums of line bundles, and their cohomology via the long exact sequence.

use super::{induced_map, Twist};
use crate::algebra::{BiPoly, CMatrix, Poly, Scalar, ToleranceConfig};
use crate::error::{Error, Result};
use crate::pencil::{Pencil, Quadruple};

#[derive(Clone, Debug, PartialEq)]
pub struct MonadComplex<S> {
    /// Summands of `E₁`, one entry per copy.
    pub source: Vec<Twist>,
    /// Summands of `E₀`.
    pub target: Vec<Twist>,
    /// `target.len() × source.len()` polynomial entries in the affine chart.
    pub matrix: CMatrix<BiPoly<S>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CohomologyDims {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
}

impl CohomologyDims {
    pub fn euler_characteristic(&self) -> i64 {
        self.h0 as i64 - self.h1 as i64 + self.h2 as i64
    }
}

fn expand(summands: &[(Twist, usize)]) -> Vec<Twist> {
    summands.iter().flat_map(|&(t, m)| std::iter::repeat_n(t, m)).collect()
}

impl<S: Scalar> MonadComplex<S> {
    pub fn new(source: &[(Twist, usize)], target: &[(Twist, usize)], matrix: CMatrix<BiPoly<S>>) -> Result<Self> {
        let (source, target) = (expand(source), expand(target));
        if matrix.rows() != target.len() || matrix.cols() != source.len() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{} for {} target and {} source summands",
                matrix.rows(),
                matrix.cols(),
                target.len(),
                source.len()
            )));
        }
        Ok(Self { source, target, matrix })
    }

    /// `Σ χ(O(t + e)) − Σ χ(O(s + e))` from the closed form.
    pub fn euler_characteristic(&self, extra: Twist) -> i64 {
        let chi = |ts: &[Twist]| -> i64 { ts.iter().map(|t| t.plus(extra).euler_characteristic()).sum() };
        chi(&self.target) - chi(&self.source)
    }

    /// Bidegree bound of `det`, from the twists.
    fn det_bidegree(&self) -> Twist {
        let sum = |ts: &[Twist]| ts.iter().fold(Twist::new(0, 0), |a, &t| a.plus(t));
        sum(&self.target).minus(sum(&self.source))
    }

    /// Whether `det` vanishes at every point of a grid large enough to
    /// determine it.
    fn det_vanishes(&self) -> bool {
        let d = self.det_bidegree();
        if d.p < 0 || d.q < 0 {
            return self.matrix.rows() > 0;
        }
        for i in 0..=d.p {
            for j in 0..=d.q {
                let (z, e) = (S::from_int(i), S::from_int(j));
                let m = self.matrix.map(|p| p.eval(&z, &e));
                if !m.det().expect("square").is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Cohomology of `F(extra)` for the cokernel `F` of a square complex with
/// `det ≢ 0`.
pub fn monad_cohomology<S: Scalar>(c: &MonadComplex<S>, extra: Twist, tol: &ToleranceConfig) -> Result<CohomologyDims> {
    if !c.matrix.is_square() {
        return Err(Error::NotAResolution(format!(
            "{} source and {} target summands",
            c.source.len(),
            c.target.len()
        )));
    }
    if c.det_vanishes() {
        return Err(Error::NotAResolution("det vanishes identically".into()));
    }
    let src: Vec<Twist> = c.source.iter().map(|t| t.plus(extra)).collect();
    let dst: Vec<Twist> = c.target.iter().map(|t| t.plus(extra)).collect();
    let mut ker = [0usize; 3];
    let mut coker = [0usize; 3];
    for degree in 0..3u8 {
        let phi = induced_map(&c.matrix, &src, &dst, degree)?;
        let r = phi.rank(tol);
        ker[degree as usize] = phi.cols() - r;
        coker[degree as usize] = phi.rows() - r;
    }
    let dims = CohomologyDims {
        h0: coker[0] + ker[1],
        h1: coker[1] + ker[2],
        h2: coker[2],
    };
    if dims.h2 != 0 {
        return Err(Error::NotAResolution(format!(
            "H² of the cokernel has dimension {}",
            dims.h2
        )));
    }
    Ok(dims)
}

/// The resolution `O(−2,−1)^k ⊕ O(−1,−2)^l → O(−1,−1)^n` given by `M(ζ,η)`.
pub fn pencil_complex<S: Scalar>(p: &Pencil<S>) -> MonadComplex<S> {
    let (k, n) = (p.k, p.n());
    let matrix = CMatrix::from_fn(n, n, |r, c| {
        if c < k {
            BiPoly::from_zeta_poly(&Poly::new(vec![p.a0[(r, c)].clone(), p.a1[(r, c)].clone()]))
        } else {
            let c = c - k;
            BiPoly::from_eta_poly(Poly::new(vec![p.b0[(r, c)].clone(), p.b1[(r, c)].clone()]))
        }
    });
    MonadComplex::new(
        &[(Twist::new(-2, -1), p.k), (Twist::new(-1, -2), p.l)],
        &[(Twist::new(-1, -1), n)],
        matrix,
    )
    .expect("shapes follow from the pencil")
}

/// `(h⁰, h¹)` of `F(extra)` for the sheaf of a pencil.
pub fn sheaf_cohomology_pencil<S: Scalar>(
    p: &Pencil<S>,
    extra: Twist,
    tol: &ToleranceConfig,
) -> Result<(usize, usize)> {
    let d = monad_cohomology(&pencil_complex(p), extra, tol)?;
    Ok((d.h0, d.h1))
}

pub fn sheaf_cohomology<S: Scalar>(q: &Quadruple<S>, extra: Twist, tol: &ToleranceConfig) -> Result<(usize, usize)> {
    sheaf_cohomology_pencil(&q.embed(), extra, tol)
}

/// `χ(F(x, y)) = x_coeff·x + y_coeff·y + constant`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HilbertPolynomial {
    pub x_coeff: i64,
    pub y_coeff: i64,
    pub constant: i64,
}

impl HilbertPolynomial {
    pub const FIT_GRID: std::ops::RangeInclusive<i64> = -2..=3;

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.x_coeff * x + self.y_coeff * y + self.constant
    }

    /// As a polynomial in `(ζ, η) ↔ (x, y)`.
    pub fn to_bipoly<S: Scalar>(&self) -> BiPoly<S> {
        BiPoly::from_terms(&[
            (0, 0, S::from_int(self.constant)),
            (1, 0, S::from_int(self.x_coeff)),
            (0, 1, S::from_int(self.y_coeff)),
        ])
    }

    /// Fits `χ` of the cokernel over the grid, checking linearity at every
    /// grid point and agreement with the closed-form alternating sum.
    pub fn fit<S: Scalar>(c: &MonadComplex<S>, tol: &ToleranceConfig) -> Result<Self> {
        let chi =
            |x: i64, y: i64| -> Result<i64> { Ok(monad_cohomology(c, Twist::new(x, y), tol)?.euler_characteristic()) };
        let constant = chi(0, 0)?;
        let fit = Self {
            x_coeff: chi(1, 0)? - constant,
            y_coeff: chi(0, 1)? - constant,
            constant,
        };
        for x in Self::FIT_GRID {
            for y in Self::FIT_GRID {
                let measured = chi(x, y)?;
                if measured != fit.eval(x, y) {
                    return Err(Error::NonLinearHilbert(format!(
                        "χ({x}, {y}) = {measured}, the linear fit predicts {}",
                        fit.eval(x, y)
                    )));
                }
                let closed = c.euler_characteristic(Twist::new(x, y));
                if measured != closed {
                    return Err(Error::NonLinearHilbert(format!(
                        "χ({x}, {y}) = {measured} but the resolution gives {closed}"
                    )));
                }
            }
        }
        Ok(fit)
    }
}

/// Hilbert polynomial of the sheaf of `q`; equals `l·x + k·y`.
pub fn hilbert_polynomial<S: Scalar>(q: &Quadruple<S>, tol: &ToleranceConfig) -> Result<HilbertPolynomial> {
    HilbertPolynomial::fit(&pencil_complex(&q.embed()), tol)
}
