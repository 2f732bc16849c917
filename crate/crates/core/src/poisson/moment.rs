//! Moment maps of the stabilisers of `X` and `Y`, and symplectic leaves.
//!
//! With `X = P·diag(ζ₁I, …, ζ_rI)·P⁻¹`, conjugating by `P` gives
//! `F' = P⁻¹F`, `G' = GP`; `Fᵢ` are the rows of `F'` and `Gᵢ` the columns of
//! `G'` in the `i`-th eigenvalue block, and `μ_X = (F₁G₁, …, F_rG_r)`.
//! `μ_Y = (G¹F¹, …, GˢFˢ)` is the mirror image with `Y = Q·diag·Q⁻¹`.
//! Blocks follow the eigenvalues in ascending (re, im) order.

use crate::algebra::{CMatrix, ConjClassInvariant, Scalar, ToleranceConfig};
use crate::error::{Error, Result};
use crate::pencil::Quadruple;

#[derive(Clone, Debug, PartialEq)]
pub struct Diagonalization<S> {
    /// Distinct eigenvalues, ascending, with multiplicities.
    pub eigenvalues: Vec<(S, usize)>,
    /// Eigenvector columns, grouped by eigenvalue.
    pub p: CMatrix<S>,
    pub p_inv: CMatrix<S>,
}

impl<S: Scalar> Diagonalization<S> {
    /// Half-open column ranges of the eigenvalue blocks.
    pub fn block_ranges(&self) -> Vec<(usize, usize)> {
        let mut start = 0;
        self.eigenvalues
            .iter()
            .map(|(_, m)| {
                let r = (start, start + m);
                start += m;
                r
            })
            .collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.eigenvalues.iter().map(|(_, m)| *m).collect()
    }
}

pub fn diagonalize<S: Scalar>(t: &CMatrix<S>, tol: &ToleranceConfig) -> Result<Diagonalization<S>> {
    if !t.is_square() {
        return Err(Error::NotSquare {
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    let n = t.rows();
    let mut eigenvalues = S::eigenvalues(t, tol)?;
    eigenvalues.sort_by(|a, b| a.0.cmp_re_im(&b.0));
    let mut columns = Vec::with_capacity(n);
    for (lambda, mult) in &eigenvalues {
        let kernel = (t - &CMatrix::scalar(n, lambda.clone())).kernel(tol);
        if kernel.cols() != *mult {
            return Err(Error::NotDiagonalizable);
        }
        columns.extend((0..kernel.cols()).map(|c| kernel.column(c)));
    }
    let p = CMatrix::from_columns(n, &columns);
    let p_inv = p.inverse().ok_or(Error::NotDiagonalizable)?;
    Ok(Diagonalization { eigenvalues, p, p_inv })
}

#[derive(Clone, Debug, PartialEq)]
pub struct XSplit<S> {
    pub diag: Diagonalization<S>,
    /// `Fᵢ`, `kᵢ × l`.
    pub f_blocks: Vec<CMatrix<S>>,
    /// `Gᵢ`, `l × kᵢ`.
    pub g_blocks: Vec<CMatrix<S>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct YSplit<S> {
    pub diag: Diagonalization<S>,
    /// `Fʲ`, `k × lⱼ`.
    pub f_blocks: Vec<CMatrix<S>>,
    /// `Gʲ`, `lⱼ × k`.
    pub g_blocks: Vec<CMatrix<S>>,
}

pub fn split_x<S: Scalar>(q: &Quadruple<S>, tol: &ToleranceConfig) -> Result<XSplit<S>> {
    let diag = diagonalize(&q.x, tol)?;
    let f = &diag.p_inv * &q.f;
    let g = &q.g * &diag.p;
    let (l, ranges) = (q.l(), diag.block_ranges());
    Ok(XSplit {
        f_blocks: ranges.iter().map(|&(a, b)| f.submatrix(a, b, 0, l)).collect(),
        g_blocks: ranges.iter().map(|&(a, b)| g.submatrix(0, l, a, b)).collect(),
        diag,
    })
}

pub fn split_y<S: Scalar>(q: &Quadruple<S>, tol: &ToleranceConfig) -> Result<YSplit<S>> {
    let diag = diagonalize(&q.y, tol)?;
    let f = &q.f * &diag.p;
    let g = &diag.p_inv * &q.g;
    let (k, ranges) = (q.k(), diag.block_ranges());
    Ok(YSplit {
        f_blocks: ranges.iter().map(|&(a, b)| f.submatrix(0, k, a, b)).collect(),
        g_blocks: ranges.iter().map(|&(a, b)| g.submatrix(a, b, 0, k)).collect(),
        diag,
    })
}

/// `(F₁G₁, …, F_rG_r)`.
pub fn moment_map_x<S: Scalar>(q: &Quadruple<S>, tol: &ToleranceConfig) -> Result<Vec<CMatrix<S>>> {
    let s = split_x(q, tol)?;
    Ok(s.f_blocks.iter().zip(&s.g_blocks).map(|(f, g)| f * g).collect())
}

/// `(G¹F¹, …, GˢFˢ)`.
pub fn moment_map_y<S: Scalar>(q: &Quadruple<S>, tol: &ToleranceConfig) -> Result<Vec<CMatrix<S>>> {
    let s = split_y(q, tol)?;
    Ok(s.g_blocks.iter().zip(&s.f_blocks).map(|(g, f)| g * f).collect())
}

/// A symplectic leaf: fixed `X`, `Y` and the conjugacy classes of the
/// moment-map blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct LeafSpec<S> {
    pub x: CMatrix<S>,
    pub y: CMatrix<S>,
    /// Classes of `FᵢGᵢ`, sizes `kᵢ`.
    pub pi: Vec<ConjClassInvariant<S>>,
    /// Classes of `GʲFʲ`, sizes `lⱼ`.
    pub rho: Vec<ConjClassInvariant<S>>,
}

fn classes<S: Scalar>(blocks: &[CMatrix<S>], tol: &ToleranceConfig) -> Result<Vec<ConjClassInvariant<S>>> {
    blocks.iter().map(|b| ConjClassInvariant::of(b, tol)).collect()
}

impl<S: Scalar> LeafSpec<S> {
    /// Checks that the class sizes match the eigenvalue multiplicities of
    /// `X` and `Y`.
    pub fn new(
        x: CMatrix<S>,
        y: CMatrix<S>,
        pi: Vec<ConjClassInvariant<S>>,
        rho: Vec<ConjClassInvariant<S>>,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        let mx = diagonalize(&x, tol)?.multiplicities();
        let my = diagonalize(&y, tol)?.multiplicities();
        let sizes = |c: &[ConjClassInvariant<S>]| c.iter().map(|c| c.size).collect::<Vec<_>>();
        if sizes(&pi) != mx || sizes(&rho) != my {
            return Err(Error::DimensionMismatch(format!(
                "class sizes {:?}/{:?} do not match multiplicities {mx:?}/{my:?}",
                sizes(&pi),
                sizes(&rho)
            )));
        }
        Ok(Self { x, y, pi, rho })
    }

    /// The leaf through `q`.
    pub fn through(q: &Quadruple<S>, tol: &ToleranceConfig) -> Result<Self> {
        Ok(Self {
            x: q.x.clone(),
            y: q.y.clone(),
            pi: classes(&moment_map_x(q, tol)?, tol)?,
            rho: classes(&moment_map_y(q, tol)?, tol)?,
        })
    }
}

/// Whether `q` lies on the leaf, up to the `K`-action. Fails with
/// `IncompatibleXY` when `X` or `Y` is not conjugate to the leaf's.
pub fn leaf_membership<S: Scalar>(q: &Quadruple<S>, spec: &LeafSpec<S>, tol: &ToleranceConfig) -> Result<bool> {
    let same = |a: &CMatrix<S>, b: &CMatrix<S>| -> Result<bool> {
        if a.rows() != b.rows() {
            return Ok(false);
        }
        Ok(ConjClassInvariant::of(a, tol)?.agrees(&ConjClassInvariant::of(b, tol)?, tol.eig_tol))
    };
    if !same(&q.x, &spec.x)? || !same(&q.y, &spec.y)? {
        return Err(Error::IncompatibleXY);
    }
    let matches = |found: Vec<ConjClassInvariant<S>>, wanted: &[ConjClassInvariant<S>]| {
        found.len() == wanted.len() && found.iter().zip(wanted).all(|(a, b)| a.agrees(b, tol.eig_tol))
    };
    Ok(matches(classes(&moment_map_x(q, tol)?, tol)?, &spec.pi)
        && matches(classes(&moment_map_y(q, tol)?, tol)?, &spec.rho))
}
