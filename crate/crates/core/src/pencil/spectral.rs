//! Spectral curve of a pencil: `det M`, its minimal polynomial and float
//! samples of the zero set.

use std::fmt::Write as _;

use super::Pencil;
use crate::algebra::bipoly::interpolate_many;
use crate::algebra::{float, BiPoly, CMatrix, Poly, Scalar, C64};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralCurve<S> {
    pub det_poly: BiPoly<S>,
    /// `None` on the float backend, where polynomial gcds are not attempted.
    pub squarefree_part: Option<BiPoly<S>>,
    pub minimal_poly: Option<BiPoly<S>>,
}

/// `det M(ζ, η)` from its values on the grid `0..=k × 0..=l`.
pub fn spectral_det<S: Scalar>(p: &Pencil<S>) -> Result<BiPoly<S>> {
    let det = interpolate_many(p.k, p.l, 1, |z, e| vec![p.matrix_at(z, e).det().expect("square")])
        .pop()
        .expect("one polynomial");
    if det.is_zero() {
        return Err(Error::ZeroDeterminant);
    }
    Ok(det)
}

/// Entries of `adj M(ζ, η)` as bivariate polynomials, row-major. Each entry
/// is an `(n−1)`-minor, so its bidegree is within `(k, l)`.
pub fn adjugate_polys<S: Scalar>(p: &Pencil<S>) -> CMatrix<BiPoly<S>> {
    let n = p.n();
    let entries = interpolate_many(p.k, p.l, n * n, |z, e| {
        p.matrix_at(z, e).adjugate().expect("square").into_vec()
    });
    CMatrix::from_vec(n, n, entries)
}

/// `det M / gcd(all (n−1)-minors)`, lex-monic.
pub fn minimal_polynomial<S: Scalar>(p: &Pencil<S>) -> Result<BiPoly<S>> {
    if S::BACKEND != crate::algebra::Backend::Exact {
        return Err(Error::BackendUnsupported("minimal_polynomial"));
    }
    let det = spectral_det(p)?;
    let adj = adjugate_polys(p);
    let mut g = BiPoly::zero();
    for entry in adj.as_slice() {
        g = g.gcd(entry)?;
        if g == BiPoly::one() {
            break;
        }
    }
    let quotient = det.div_exact(&g).expect("the minors' gcd divides the determinant");
    Ok(quotient.lex_monic())
}

pub fn spectral_curve<S: Scalar>(p: &Pencil<S>) -> Result<SpectralCurve<S>> {
    let det_poly = spectral_det(p)?;
    let (squarefree_part, minimal_poly) = match S::BACKEND {
        crate::algebra::Backend::Exact => (Some(det_poly.squarefree_part()?), Some(minimal_polynomial(p)?)),
        crate::algebra::Backend::Float => (None, None),
    };
    Ok(SpectralCurve {
        det_poly,
        squarefree_part,
        minimal_poly,
    })
}

/// The η-roots above one ζ value.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSlice {
    pub zeta: C64,
    /// Roots with repetition according to multiplicity.
    pub etas: Vec<C64>,
    /// `l − deg_η det M(ζ, ·)`: roots lost to η = ∞.
    pub degree_drop: usize,
    /// `det M(ζ, ·) ≡ 0`: the whole line `{ζ} × P¹` lies on the curve.
    pub vertical_line: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveSample {
    pub slices: Vec<CurveSlice>,
}

/// Float samples of the curve: for every `ζ` in `zetas`, the roots of
/// `det M(ζ, ·)`.
pub fn sample_curve<S: Scalar>(p: &Pencil<S>, zetas: &[f64]) -> Result<CurveSample> {
    let det = spectral_det(p)?.map(Scalar::to_c64);
    let slices = zetas
        .iter()
        .map(|&z| {
            let zeta = C64::new(z, 0.0);
            let poly: Poly<C64> = det.eval_zeta(&zeta);
            match poly.degree() {
                None => CurveSlice {
                    zeta,
                    etas: Vec::new(),
                    degree_drop: p.l,
                    vertical_line: true,
                },
                Some(d) => CurveSlice {
                    zeta,
                    etas: float::roots_raw(&poly),
                    degree_drop: p.l - d,
                    vertical_line: false,
                },
            }
        })
        .collect();
    Ok(CurveSample { slices })
}

impl CurveSample {
    pub const CSV_HEADER: &'static str = "zeta_re,zeta_im,eta_re,eta_im";

    pub fn points(&self) -> impl Iterator<Item = (C64, C64)> + '_ {
        self.slices
            .iter()
            .flat_map(|s| s.etas.iter().map(move |e| (s.zeta, *e)))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for (z, e) in self.points() {
            writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", z.re, z.im, e.re, e.im).expect("string write");
        }
        out
    }
}
