//! Poisson structure on quadruples: Lie–Poisson on `X` and `Y`, canonical
//! on `(F, G)`.
//!
//! Gradients pair with tangent vectors by the trace form
//! `df(δ) = tr(∂X·δX) + tr(∂Y·δY) + tr(∂F·δF) + tr(∂G·δG)`, so `∂F` is `l×k`
//! and `∂G` is `k×l`. The bracket is
//!
//! ```text
//! {f, g} = tr(X[∂Xf, ∂Xg]) + tr(Y[∂Yf, ∂Yg]) + tr(∂Ff·∂Gg − ∂Fg·∂Gf)
//! ```
//!
//! which gives `{F_ab, G_cd} = δ_ad·δ_bc`.

mod flow;
mod hamiltonian;
mod moment;
pub mod numeric;

pub use flow::{flow, phase_speed, FlowConfig, FlowMode, Trajectory, TrajectoryPoint};
pub use hamiltonian::{
    spectral_gradients, spectral_hamiltonian, Block, Coordinate, LinearCombination, LinearFunctional, Product,
    Pullback, SpectralHamiltonian, TracePolynomial, TraceWord,
};
pub use moment::{
    diagonalize, leaf_membership, moment_map_x, moment_map_y, split_x, split_y, Diagonalization, LeafSpec, XSplit,
    YSplit,
};

use crate::algebra::{CMatrix, Scalar};
use crate::pencil::Quadruple;

/// `(∂X, ∂Y, ∂F, ∂G)` with shapes `k×k`, `l×l`, `l×k`, `k×l`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gradient<S> {
    pub dx: CMatrix<S>,
    pub dy: CMatrix<S>,
    pub df: CMatrix<S>,
    pub dg: CMatrix<S>,
}

impl<S: Scalar> Gradient<S> {
    pub fn zeros(k: usize, l: usize) -> Self {
        Self {
            dx: CMatrix::zeros(k, k),
            dy: CMatrix::zeros(l, l),
            df: CMatrix::zeros(l, k),
            dg: CMatrix::zeros(k, l),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            dx: &self.dx + &other.dx,
            dy: &self.dy + &other.dy,
            df: &self.df + &other.df,
            dg: &self.dg + &other.dg,
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        Self {
            dx: self.dx.scale(s),
            dy: self.dy.scale(s),
            df: self.df.scale(s),
            dg: self.dg.scale(s),
        }
    }

    /// `∂f/∂(block)_ij`, i.e. the transposed entry of the pairing matrix.
    pub fn partial(&self, block: Block, i: usize, j: usize) -> S {
        match block {
            Block::X => self.dx[(j, i)].clone(),
            Block::Y => self.dy[(j, i)].clone(),
            Block::F => self.df[(j, i)].clone(),
            Block::G => self.dg[(j, i)].clone(),
        }
    }

    pub fn max_modulus(&self) -> f64 {
        [&self.dx, &self.dy, &self.df, &self.dg]
            .iter()
            .map(|m| m.max_modulus())
            .fold(0.0, f64::max)
    }
}

/// A function on quadruples of fixed shape with its exact gradient.
pub trait Hamiltonian<S: Scalar>: Send + Sync {
    fn value(&self, q: &Quadruple<S>) -> S;
    fn gradient(&self, q: &Quadruple<S>) -> Gradient<S>;
}

impl<S: Scalar, H: Hamiltonian<S> + ?Sized> Hamiltonian<S> for Box<H> {
    fn value(&self, q: &Quadruple<S>) -> S {
        (**self).value(q)
    }

    fn gradient(&self, q: &Quadruple<S>) -> Gradient<S> {
        (**self).gradient(q)
    }
}

impl<S: Scalar, H: Hamiltonian<S> + ?Sized> Hamiltonian<S> for &H {
    fn value(&self, q: &Quadruple<S>) -> S {
        (**self).value(q)
    }

    fn gradient(&self, q: &Quadruple<S>) -> Gradient<S> {
        (**self).gradient(q)
    }
}

/// The bracket evaluated on two gradients at `q`.
pub fn bracket_of_gradients<S: Scalar>(q: &Quadruple<S>, a: &Gradient<S>, b: &Gradient<S>) -> S {
    let lie_x = (&q.x * &a.dx.commutator(&b.dx)).trace();
    let lie_y = (&q.y * &a.dy.commutator(&b.dy)).trace();
    lie_x + lie_y + leaf_bracket_of_gradients(a, b)
}

/// The canonical `(F, G)` part alone.
pub fn leaf_bracket_of_gradients<S: Scalar>(a: &Gradient<S>, b: &Gradient<S>) -> S {
    (&a.df * &b.dg).trace() - (&b.df * &a.dg).trace()
}

pub fn bracket<S: Scalar>(
    f: &(impl Hamiltonian<S> + ?Sized),
    g: &(impl Hamiltonian<S> + ?Sized),
    at: &Quadruple<S>,
) -> S {
    bracket_of_gradients(at, &f.gradient(at), &g.gradient(at))
}

/// The bracket with `X`, `Y` frozen: the symplectic form on a leaf.
pub fn leaf_bracket<S: Scalar>(
    f: &(impl Hamiltonian<S> + ?Sized),
    g: &(impl Hamiltonian<S> + ?Sized),
    at: &Quadruple<S>,
) -> S {
    leaf_bracket_of_gradients(&f.gradient(at), &g.gradient(at))
}
