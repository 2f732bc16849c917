//! Linear pencils `M(ζ,η) = (A0 + A1ζ | B0 + B1η)` and their normalised
//! quadruple form
//!
//! ```text
//! M(ζ,η) = [ X − ζ    F   ]
//!          [   G    Y − η ]
//! ```

mod bipure;
mod spectral;

pub use bipure::{
    bipurity_check, geometric_resolution_check, subbundle_fibre, BipurityReport, FibreKind, ProjPoint, SubbundleFibre,
    UnobservableWitness,
};
pub use spectral::{
    adjugate_polys, minimal_polynomial, sample_curve, spectral_curve, spectral_det, CurveSample, CurveSlice,
    SpectralCurve,
};

use crate::algebra::{CMatrix, Scalar, ToleranceConfig};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Pencil<S> {
    pub k: usize,
    pub l: usize,
    pub a0: CMatrix<S>,
    pub a1: CMatrix<S>,
    pub b0: CMatrix<S>,
    pub b1: CMatrix<S>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Quadruple<S> {
    pub x: CMatrix<S>,
    pub y: CMatrix<S>,
    pub f: CMatrix<S>,
    pub g: CMatrix<S>,
}

fn expect_shape<S>(name: &str, m: &CMatrix<S>, rows: usize, cols: usize) -> Result<()> {
    if m.rows() == rows && m.cols() == cols {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!(
            "{name} is {}x{}, expected {rows}x{cols}",
            m.rows(),
            m.cols()
        )))
    }
}

impl<S: Scalar> Pencil<S> {
    pub fn new(k: usize, l: usize, a0: CMatrix<S>, a1: CMatrix<S>, b0: CMatrix<S>, b1: CMatrix<S>) -> Result<Self> {
        let n = k + l;
        expect_shape("A0", &a0, n, k)?;
        expect_shape("A1", &a1, n, k)?;
        expect_shape("B0", &b0, n, l)?;
        expect_shape("B1", &b1, n, l)?;
        Ok(Self { k, l, a0, a1, b0, b1 })
    }

    pub fn n(&self) -> usize {
        self.k + self.l
    }

    /// `M(ζ, η)` evaluated at a finite point.
    pub fn matrix_at(&self, zeta: &S, eta: &S) -> CMatrix<S> {
        let a = &self.a0 + &self.a1.scale(zeta);
        let b = &self.b0 + &self.b1.scale(eta);
        a.hstack(&b)
    }

    /// `(A1 | B1)`: the leading coefficient, singular exactly when
    /// `(∞, ∞)` lies on the support.
    pub fn leading_block(&self) -> CMatrix<S> {
        self.a1.hstack(&self.b1)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Pencil<T> {
        Pencil {
            k: self.k,
            l: self.l,
            a0: self.a0.map(&f),
            a1: self.a1.map(&f),
            b0: self.b0.map(&f),
            b1: self.b1.map(&f),
        }
    }
}

impl<S: Scalar> Quadruple<S> {
    pub fn new(x: CMatrix<S>, y: CMatrix<S>, f: CMatrix<S>, g: CMatrix<S>) -> Result<Self> {
        let (k, l) = (x.rows(), y.rows());
        expect_shape("X", &x, k, k)?;
        expect_shape("Y", &y, l, l)?;
        expect_shape("F", &f, k, l)?;
        expect_shape("G", &g, l, k)?;
        Ok(Self { x, y, f, g })
    }

    pub fn k(&self) -> usize {
        self.x.rows()
    }

    pub fn l(&self) -> usize {
        self.y.rows()
    }

    pub fn n(&self) -> usize {
        self.k() + self.l()
    }

    /// The pencil with `A0 = [X; G]`, `A1 = [−I; 0]`, `B0 = [F; Y]`,
    /// `B1 = [0; −I]`.
    pub fn embed(&self) -> Pencil<S> {
        let (k, l) = (self.k(), self.l());
        let minus = |n: usize| CMatrix::scalar(n, -S::one());
        Pencil {
            k,
            l,
            a0: self.x.vstack(&self.g),
            a1: minus(k).vstack(&CMatrix::zeros(l, k)),
            b0: self.f.vstack(&self.y),
            b1: CMatrix::zeros(k, l).vstack(&minus(l)),
        }
    }

    pub fn matrix_at(&self, zeta: &S, eta: &S) -> CMatrix<S> {
        let (k, l) = (self.k(), self.l());
        let xz = &self.x - &CMatrix::scalar(k, zeta.clone());
        let ye = &self.y - &CMatrix::scalar(l, eta.clone());
        CMatrix::block2(&xz, &self.f, &self.g, &ye)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Quadruple<T> {
        Quadruple {
            x: self.x.map(&f),
            y: self.y.map(&f),
            f: self.f.map(&f),
            g: self.g.map(&f),
        }
    }

    /// Coordinates in the fixed order X, Y, F, G (row-major each).
    pub fn coordinates(&self) -> Vec<S> {
        [&self.x, &self.y, &self.f, &self.g]
            .iter()
            .flat_map(|m| m.as_slice().iter().cloned())
            .collect()
    }

    /// Inverse of [`Quadruple::coordinates`] for the same `(k, l)`.
    pub fn from_coordinates(k: usize, l: usize, c: &[S]) -> Self {
        assert_eq!(c.len(), k * k + l * l + 2 * k * l, "coordinate count");
        let mut off = 0;
        let mut take = |rows: usize, cols: usize| {
            let m = CMatrix::from_vec(rows, cols, c[off..off + rows * cols].to_vec());
            off += rows * cols;
            m
        };
        let x = take(k, k);
        let y = take(l, l);
        let f = take(k, l);
        let g = take(l, k);
        Self { x, y, f, g }
    }

    /// The same point on the float backend.
    pub fn to_c64(&self) -> Quadruple<crate::algebra::C64> {
        self.map(Scalar::to_c64)
    }
}

/// Brings a pencil to quadruple form by left multiplication with
/// `gauge = −(A1|B1)⁻¹`.
pub fn normalize<S: Scalar>(p: &Pencil<S>, tol: &ToleranceConfig) -> Result<(Quadruple<S>, CMatrix<S>)> {
    let lead = p.leading_block();
    if lead.rank(tol) < p.n() {
        return Err(Error::PointAtInfinityOnSupport);
    }
    let inv = lead.inverse().ok_or(Error::PointAtInfinityOnSupport)?;
    let gauge = -&inv;
    let a = &gauge * &p.a0;
    let b = &gauge * &p.b0;
    let (k, n) = (p.k, p.n());
    let q = Quadruple {
        x: a.submatrix(0, k, 0, k),
        g: a.submatrix(k, n, 0, k),
        f: b.submatrix(0, k, 0, p.l),
        y: b.submatrix(k, n, 0, p.l),
    };
    Ok((q, gauge))
}

/// `(g, h1, h2) · (A | B) = g (A h1⁻¹ | B h2⁻¹)`.
pub fn act_full<S: Scalar>(p: &Pencil<S>, g: &CMatrix<S>, h1: &CMatrix<S>, h2: &CMatrix<S>) -> Result<Pencil<S>> {
    expect_shape("g", g, p.n(), p.n())?;
    expect_shape("h1", h1, p.k, p.k)?;
    expect_shape("h2", h2, p.l, p.l)?;
    invertible(g, "g")?;
    let h1i = invertible(h1, "h1")?;
    let h2i = invertible(h2, "h2")?;
    Ok(Pencil {
        k: p.k,
        l: p.l,
        a0: &(g * &p.a0) * &h1i,
        a1: &(g * &p.a1) * &h1i,
        b0: &(g * &p.b0) * &h2i,
        b1: &(g * &p.b1) * &h2i,
    })
}

/// `(g, h) · (X, Y, F, G) = (gXg⁻¹, hYh⁻¹, gFh⁻¹, hGg⁻¹)`.
pub fn act_k<S: Scalar>(q: &Quadruple<S>, g: &CMatrix<S>, h: &CMatrix<S>) -> Result<Quadruple<S>> {
    expect_shape("g", g, q.k(), q.k())?;
    expect_shape("h", h, q.l(), q.l())?;
    let gi = invertible(g, "g")?;
    let hi = invertible(h, "h")?;
    Ok(Quadruple {
        x: &(g * &q.x) * &gi,
        y: &(h * &q.y) * &hi,
        f: &(g * &q.f) * &hi,
        g: &(h * &q.g) * &gi,
    })
}

fn invertible<S: Scalar>(m: &CMatrix<S>, name: &'static str) -> Result<CMatrix<S>> {
    let inv = m.inverse().ok_or(Error::SingularGroupElement(name))?;
    if inv.as_slice().iter().any(|x| !x.to_c64().is_finite()) {
        return Err(Error::SingularGroupElement(name));
    }
    Ok(inv)
}

/// Möbius substitution `ζ = (aζ' + b)/(cζ' + d)` given as `[a, b, c, d]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mobius<S> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
}

impl<S: Scalar> Mobius<S> {
    pub fn identity() -> Self {
        Self {
            a: S::one(),
            b: S::zero(),
            c: S::zero(),
            d: S::one(),
        }
    }

    /// `ζ = ζ' + s`.
    pub fn shift(s: S) -> Self {
        Self {
            a: S::one(),
            b: s,
            c: S::zero(),
            d: S::one(),
        }
    }

    /// `ζ = 1/ζ'`, swapping 0 and ∞.
    pub fn inversion() -> Self {
        Self {
            a: S::zero(),
            b: S::one(),
            c: S::one(),
            d: S::zero(),
        }
    }

    /// Image of the linear form `P + Qζ` after clearing the denominator
    /// `cζ' + d`: returns the new `(P, Q)`.
    fn apply(&self, p: &CMatrix<S>, q: &CMatrix<S>) -> (CMatrix<S>, CMatrix<S>) {
        (
            &p.scale(&self.d) + &q.scale(&self.b),
            &p.scale(&self.c) + &q.scale(&self.a),
        )
    }
}

/// Relocates the support by an automorphism of P¹×P¹ acting factorwise.
/// The callers choose the substitution so that `(∞, ∞)` leaves the support
/// before [`normalize`].
pub fn mobius<S: Scalar>(p: &Pencil<S>, zeta: &Mobius<S>, eta: &Mobius<S>) -> Result<Pencil<S>> {
    for (name, m) in [("zeta", zeta), ("eta", eta)] {
        let det = m.a.clone() * m.d.clone() - m.b.clone() * m.c.clone();
        if det.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "{name} substitution is degenerate (ad - bc = 0)"
            )));
        }
    }
    let (a0, a1) = zeta.apply(&p.a0, &p.a1);
    let (b0, b1) = eta.apply(&p.b0, &p.b1);
    Ok(Pencil {
        k: p.k,
        l: p.l,
        a0,
        a1,
        b0,
        b1,
    })
}

/// `ζ ↦ ζ + s`, `η ↦ η + s`.
pub fn mobius_shift<S: Scalar>(p: &Pencil<S>, s: S) -> Pencil<S> {
    mobius(p, &Mobius::shift(s.clone()), &Mobius::shift(s)).expect("shifts are invertible")
}
