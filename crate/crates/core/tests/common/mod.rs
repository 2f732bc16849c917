#![allow(dead_code)]

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use spectral_pencil::algebra::{gauss, CMatrix, GaussRat, Scalar, C64};
use spectral_pencil::pencil::Quadruple;
use spectral_pencil::poisson::{Gradient, Hamiltonian, LinearCombination, LinearFunctional, Product};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian rational with numerators in `-b..=b` and denominators in `1..=d`.
pub fn exact_entry(rng: &mut impl Rng, b: i64, d: i64) -> GaussRat {
    gauss(
        rng.random_range(-b..=b),
        rng.random_range(1..=d),
        rng.random_range(-b..=b),
        rng.random_range(1..=d),
    )
}

pub fn exact_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix<GaussRat> {
    CMatrix::from_fn(rows, cols, |_, _| exact_entry(rng, 5, 3))
}

pub fn exact_quadruple(rng: &mut impl Rng, k: usize, l: usize) -> Quadruple<GaussRat> {
    Quadruple::new(
        exact_matrix(rng, k, k),
        exact_matrix(rng, l, l),
        exact_matrix(rng, k, l),
        exact_matrix(rng, l, k),
    )
    .unwrap()
}

pub fn normal(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) / 2f64.sqrt()
}

pub fn float_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix<C64> {
    CMatrix::from_fn(rows, cols, |_, _| normal(rng))
}

pub fn float_quadruple(rng: &mut impl Rng, k: usize, l: usize) -> Quadruple<C64> {
    Quadruple::new(
        float_matrix(rng, k, k),
        float_matrix(rng, l, l),
        float_matrix(rng, k, l),
        float_matrix(rng, l, k),
    )
    .unwrap()
}

/// Invertible matrix `L·U` with unit diagonals.
pub fn exact_group_element(rng: &mut impl Rng, n: usize) -> CMatrix<GaussRat> {
    let lower = CMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Greater => exact_entry(rng, 3, 2),
        std::cmp::Ordering::Equal => GaussRat::one(),
        std::cmp::Ordering::Less => GaussRat::zero(),
    });
    let upper = CMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => exact_entry(rng, 3, 2),
        std::cmp::Ordering::Equal => GaussRat::one(),
        std::cmp::Ordering::Greater => GaussRat::zero(),
    });
    &lower * &upper
}

pub fn float_group_element(rng: &mut impl Rng, n: usize) -> CMatrix<C64> {
    &CMatrix::identity(n) + &float_matrix(rng, n, n).scale(&C64::new(0.3, 0.0))
}

#[allow(unused_imports)]
pub use spectral_pencil::poisson::numeric::{central_difference_gradient, interpolated_gradient};

pub fn gradient_distance(a: &Gradient<C64>, b: &Gradient<C64>) -> f64 {
    a.add(&b.scale(&C64::new(-1.0, 0.0))).max_modulus()
}

/// `L₁ + L₂·L₃` for random linear functionals `Lᵢ`. Gauge-invariant
/// Hamiltonians of low degree are spectral and pairwise in involution,
/// so bracket identities need non-invariant ones like these.
pub fn random_quadratic<S: Scalar>(k: usize, l: usize, entry: &mut dyn FnMut() -> S) -> LinearCombination<S> {
    let mut linear = || -> Box<dyn Hamiltonian<S>> {
        Box::new(LinearFunctional::new(Gradient {
            dx: CMatrix::from_fn(k, k, |_, _| entry()),
            dy: CMatrix::from_fn(l, l, |_, _| entry()),
            df: CMatrix::from_fn(l, k, |_, _| entry()),
            dg: CMatrix::from_fn(k, l, |_, _| entry()),
        }))
    };
    let (a, b, c) = (linear(), linear(), linear());
    LinearCombination::new(vec![(S::one(), a), (S::one(), Box::new(Product::new(b, c)))])
}
