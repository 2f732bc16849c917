//! The sheaf along the boundary lines `η = ∞` and `ζ = ∞`, to first order.
//!
//! Along `η = ∞` the support meets the line at the eigenvalues `ζᵢ` of `X`,
//! with multiplicity `kᵢ`; the first-order neighbourhood of `(ζᵢ, ∞)` is
//! governed by the class of `FᵢGᵢ`, whose eigenvalues are the slopes
//! `(ζ − ζᵢ)/η̃` with `η̃ = 1/η`. The `ζ = ∞` side uses `Y` and `GʲFʲ`.

use crate::algebra::{CMatrix, ConjClassInvariant, Poly, Scalar, ToleranceConfig};
use crate::error::Result;
use crate::pencil::Quadruple;
use crate::poisson::{split_x, split_y};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// The line `η = ∞`, met at the eigenvalues of `X`.
    EtaInfinity,
    /// The line `ζ = ∞`, met at the eigenvalues of `Y`.
    ZetaInfinity,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryData<S> {
    pub direction: Direction,
    /// `(ζᵢ, kᵢ)` resp. `(ηⱼ, lⱼ)`.
    pub points: Vec<(S, usize)>,
    /// `FᵢGᵢ` resp. `GʲFʲ`.
    pub blocks: Vec<CMatrix<S>>,
    pub first_order: Vec<ConjClassInvariant<S>>,
    /// Eigenvalues of each block with repetition; `None` for a block whose
    /// characteristic polynomial does not split exactly.
    pub slopes: Vec<Option<Vec<S>>>,
    /// `charpoly(FᵢGᵢ)·λ^(l−kᵢ) = charpoly(GᵢFᵢ)` (resp. mirrored, and with
    /// the sides swapped when `kᵢ > l`) for every block.
    pub charpoly_identity: bool,
}

/// `charpoly(AB)` and `charpoly(BA)` agree up to a power of `λ`.
fn padded_charpoly_matches<S: Scalar>(ab: &CMatrix<S>, ba: &CMatrix<S>, tol: f64) -> bool {
    let (small, big) = if ab.rows() <= ba.rows() { (ab, ba) } else { (ba, ab) };
    let pad = big.rows() - small.rows();
    let lhs = small.charpoly().mul(&Poly::monomial(S::one(), pad));
    let rhs = big.charpoly();
    lhs.coeffs().len() == rhs.coeffs().len() && lhs.coeffs().iter().zip(rhs.coeffs()).all(|(a, b)| a.approx_eq(b, tol))
}

pub fn boundary_data<S: Scalar>(
    q: &Quadruple<S>,
    direction: Direction,
    tol: &ToleranceConfig,
) -> Result<BoundaryData<S>> {
    // (points, small blocks, swapped products)
    let (points, pairs): (Vec<(S, usize)>, Vec<(CMatrix<S>, CMatrix<S>)>) = match direction {
        Direction::EtaInfinity => {
            let s = split_x(q, tol)?;
            let pairs = s
                .f_blocks
                .iter()
                .zip(&s.g_blocks)
                .map(|(f, g)| (f * g, g * f))
                .collect();
            (s.diag.eigenvalues, pairs)
        }
        Direction::ZetaInfinity => {
            let s = split_y(q, tol)?;
            let pairs = s
                .g_blocks
                .iter()
                .zip(&s.f_blocks)
                .map(|(g, f)| (g * f, f * g))
                .collect();
            (s.diag.eigenvalues, pairs)
        }
    };
    let mut blocks = Vec::with_capacity(pairs.len());
    let mut first_order = Vec::with_capacity(pairs.len());
    let mut slopes = Vec::with_capacity(pairs.len());
    let mut charpoly_identity = true;
    for (small, swapped) in pairs {
        let class = ConjClassInvariant::of(&small, tol)?;
        slopes.push(class.eigenvalues.as_ref().map(|eigs| {
            eigs.iter()
                .flat_map(|(v, m)| std::iter::repeat_n(v.clone(), *m))
                .collect()
        }));
        charpoly_identity &= padded_charpoly_matches(&small, &swapped, tol.eig_tol);
        first_order.push(class);
        blocks.push(small);
    }
    Ok(BoundaryData {
        direction,
        points,
        blocks,
        first_order,
        slopes,
        charpoly_identity,
    })
}

/// `rank Fᵢ = rank Gᵢ = kᵢ` for every eigenvalue block of `X`: the
/// stabiliser of `X` in `GL_k` acts freely and properly at `q`.
pub fn free_properness_check<S: Scalar>(q: &Quadruple<S>, tol: &ToleranceConfig) -> Result<bool> {
    let s = split_x(q, tol)?;
    Ok(s.f_blocks
        .iter()
        .zip(&s.g_blocks)
        .all(|(f, g)| f.rank(tol) == f.rows() && g.rank(tol) == g.cols()))
}
