//! Gradients without the analytic formulas, as independent checks.

use super::{Block, Gradient};
use crate::algebra::{CMatrix, Poly, Scalar, C64};
use crate::pencil::Quadruple;

/// Block, row and column of every entry of [`Quadruple::coordinates`].
pub fn coordinate_slots(k: usize, l: usize) -> Vec<(Block, usize, usize)> {
    let mut out = Vec::with_capacity(k * k + l * l + 2 * k * l);
    for (block, rows, cols) in [(Block::X, k, k), (Block::Y, l, l), (Block::F, k, l), (Block::G, l, k)] {
        for i in 0..rows {
            for j in 0..cols {
                out.push((block, i, j));
            }
        }
    }
    out
}

fn slot<S>(g: &mut Gradient<S>, block: Block) -> &mut CMatrix<S> {
    match block {
        Block::X => &mut g.dx,
        Block::Y => &mut g.dy,
        Block::F => &mut g.df,
        Block::G => &mut g.dg,
    }
}

/// Gradient of a polynomial function of total degree at most `degree`.
/// Each restriction `t ↦ f(q + t·eᵢ)` is sampled at `t = step·(j − ⌊degree/2⌋)`,
/// `j = 0..=degree`; the interpolant's linear coefficient is the partial
/// derivative. Exact on the exact backend.
pub fn interpolated_gradient<S: Scalar>(
    f: impl Fn(&Quadruple<S>) -> S,
    q: &Quadruple<S>,
    degree: usize,
    step: S,
) -> Gradient<S> {
    let (k, l) = (q.k(), q.l());
    let base = q.coordinates();
    let half = (degree / 2) as i64;
    // centred nodes keep the float interpolation well conditioned
    let nodes: Vec<S> = (0..=degree as i64)
        .map(|j| step.clone() * S::from_int(j - half))
        .collect();
    let mut g = Gradient::zeros(k, l);
    for (idx, (block, i, j)) in coordinate_slots(k, l).into_iter().enumerate() {
        let values: Vec<S> = nodes
            .iter()
            .map(|t| {
                let mut c = base.clone();
                c[idx] = c[idx].clone() + t.clone();
                f(&Quadruple::from_coordinates(k, l, &c))
            })
            .collect();
        // df(δ) = tr(∂·δ) puts ∂f/∂M[i][j] at [j][i]
        slot(&mut g, block)[(j, i)] = Poly::interpolate(&nodes, &values).coeff(1);
    }
    g
}

/// Central differences with step `h`.
pub fn central_difference_gradient(f: impl Fn(&Quadruple<C64>) -> C64, q: &Quadruple<C64>, h: f64) -> Gradient<C64> {
    let (k, l) = (q.k(), q.l());
    let base = q.coordinates();
    let mut g = Gradient::zeros(k, l);
    for (idx, (block, i, j)) in coordinate_slots(k, l).into_iter().enumerate() {
        let at = |s: f64| {
            let mut c = base.clone();
            c[idx] += C64::new(s, 0.0);
            f(&Quadruple::from_coordinates(k, l, &c))
        };
        slot(&mut g, block)[(j, i)] = (at(h) - at(-h)) / (2.0 * h);
    }
    g
}
