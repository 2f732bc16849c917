//! Bipurity and the fibrewise check of the geometric resolution.
//!
//! A subsheaf supported on a vertical line `{ζ0} × P¹` exists exactly when
//! some `v ≠ 0` satisfies `(X − ζ0)v = 0` and `Gv = 0`: then `(v, 0)` lies in
//! the kernel of `M(ζ0, η)` for every η. Such `v` exist iff the unobservable
//! subspace `ker [G; GX; …; GX^(k−1)]` of the pair `(X, G)` is nonzero, since
//! an `X`-invariant subspace always contains an eigenvector. The horizontal
//! case is the same statement for `(Y, F)`.

use super::Quadruple;
use crate::algebra::{CMatrix, Scalar, ToleranceConfig};

#[derive(Clone, Debug, PartialEq)]
pub struct UnobservableWitness<S> {
    /// Columns span the largest `T`-invariant subspace inside `ker C`.
    pub subspace: CMatrix<S>,
    /// An eigenvector in that subspace and its eigenvalue, when the
    /// eigenvalue is representable on this backend.
    pub eigenpair: Option<(S, Vec<S>)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BipurityReport<S> {
    pub vertical_ok: bool,
    pub horizontal_ok: bool,
    /// Witness of a subsheaf on some `{ζ0} × P¹`.
    pub vertical_witness: Option<UnobservableWitness<S>>,
    /// Witness of a subsheaf on some `P¹ × {η0}`.
    pub horizontal_witness: Option<UnobservableWitness<S>>,
}

impl<S> BipurityReport<S> {
    pub fn is_bipure(&self) -> bool {
        self.vertical_ok && self.horizontal_ok
    }
}

/// Largest `t`-invariant subspace contained in `ker c`, with an eigenvector.
fn unobservable<S: Scalar>(t: &CMatrix<S>, c: &CMatrix<S>, tol: &ToleranceConfig) -> Option<UnobservableWitness<S>> {
    let n = t.rows();
    if n == 0 {
        return None;
    }
    let mut stack = c.clone();
    let mut block = c.clone();
    for _ in 1..n {
        block = &block * t;
        stack = stack.vstack(&block);
    }
    let basis = stack.kernel(tol);
    if basis.cols() == 0 {
        return None;
    }
    Some(UnobservableWitness {
        eigenpair: eigenvector_in(t, &basis, tol),
        subspace: basis,
    })
}

/// An eigenvector of `t` inside the invariant subspace spanned by `basis`:
/// solve `t·U = U·T` for the restriction `T`, take an eigenvector `w` of
/// `T`, and return `U w`.
fn eigenvector_in<S: Scalar>(t: &CMatrix<S>, basis: &CMatrix<S>, tol: &ToleranceConfig) -> Option<(S, Vec<S>)> {
    let m = basis.cols();
    let gram = &basis_adjoint(basis) * basis;
    let proj = &gram.inverse()? * &basis_adjoint(basis);
    let restricted = &(&proj * t) * basis;
    let eig = S::eigenvalues(&restricted, tol).ok()?;
    let (lambda, _) = eig.first()?.clone();
    let shifted = &restricted - &CMatrix::scalar(m, lambda.clone());
    let w = shifted.kernel(tol);
    if w.cols() == 0 {
        return None;
    }
    let v = basis * &w.submatrix(0, m, 0, 1);
    Some((lambda, v.column(0)))
}

/// Conjugate transpose (plain transpose suffices on the exact backend, but
/// the Hermitian form keeps the float Gram matrix well conditioned).
fn basis_adjoint<S: Scalar>(b: &CMatrix<S>) -> CMatrix<S> {
    b.transpose().map(Scalar::conj)
}

pub fn bipurity_check<S: Scalar>(q: &Quadruple<S>, tol: &ToleranceConfig) -> BipurityReport<S> {
    let vertical_witness = unobservable(&q.x, &q.g, tol);
    let horizontal_witness = unobservable(&q.y, &q.f, tol);
    BipurityReport {
        vertical_ok: vertical_witness.is_none(),
        horizontal_ok: horizontal_witness.is_none(),
        vertical_witness,
        horizontal_witness,
    }
}

/// A point of P¹ in the affine chart, or the point at infinity.
#[derive(Clone, Debug, PartialEq)]
pub enum ProjPoint<S> {
    Finite(S),
    Infinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FibreKind {
    /// `V_ζ0`, the image of the first `k` columns at `ζ = ζ0`.
    Vertical,
    /// `W_η0`, the image of the last `l` columns at `η = η0`.
    Horizontal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubbundleFibre<S> {
    pub kind: FibreKind,
    pub at: ProjPoint<S>,
    /// Generators of the fibre inside the `n`-dimensional section space.
    pub generators: CMatrix<S>,
    pub dim: usize,
}

/// The `n×k` block `[X − ζ0; G]` (or `[−I; 0]` at ζ0 = ∞), resp. the `n×l`
/// block `[F; Y − η0]` (or `[0; −I]` at η0 = ∞), with the dimension of its
/// column span.
pub fn subbundle_fibre<S: Scalar>(
    q: &Quadruple<S>,
    kind: FibreKind,
    at: ProjPoint<S>,
    tol: &ToleranceConfig,
) -> SubbundleFibre<S> {
    let (k, l) = (q.k(), q.l());
    let generators = match (kind, &at) {
        (FibreKind::Vertical, ProjPoint::Finite(z)) => (&q.x - &CMatrix::scalar(k, z.clone())).vstack(&q.g),
        (FibreKind::Vertical, ProjPoint::Infinity) => CMatrix::scalar(k, -S::one()).vstack(&CMatrix::zeros(l, k)),
        (FibreKind::Horizontal, ProjPoint::Finite(e)) => q.f.vstack(&(&q.y - &CMatrix::scalar(l, e.clone()))),
        (FibreKind::Horizontal, ProjPoint::Infinity) => CMatrix::zeros(k, l).vstack(&CMatrix::scalar(l, -S::one())),
    };
    let dim = generators.rank(tol);
    SubbundleFibre {
        kind,
        at,
        generators,
        dim,
    }
}

/// True iff `dim V_ζ0 = k` at every sampled ζ0 and `dim W_η0 = l` at every
/// sampled η0.
pub fn geometric_resolution_check<S: Scalar>(
    q: &Quadruple<S>,
    zetas: &[ProjPoint<S>],
    etas: &[ProjPoint<S>],
    tol: &ToleranceConfig,
) -> bool {
    zetas
        .iter()
        .all(|z| subbundle_fibre(q, FibreKind::Vertical, z.clone(), tol).dim == q.k())
        && etas
            .iter()
            .all(|e| subbundle_fibre(q, FibreKind::Horizontal, e.clone(), tol).dim == q.l())
}
