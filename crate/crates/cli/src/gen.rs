//! Seeded random instances. Everything here is a pure function of the
//! RNG state, so a seed reproduces an instance bit for bit.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use spectral_pencil::algebra::{gauss, BiPoly, CMatrix, GaussRat, Scalar, ToleranceConfig, C64};
use spectral_pencil::pencil::{spectral_det, Quadruple};
use spectral_pencil::poisson::{Gradient, Hamiltonian, LinearCombination, LinearFunctional, Product};

use crate::error::{CliError, CliResult};

/// Attempts before [`CliError::GenerationFailed`].
pub const MAX_ATTEMPTS: usize = 100;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed of trial `index` in a run seeded with `seed`: the first word of
/// stream `index`, so trials are independent of thread scheduling.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    let mut r = rng(seed);
    r.set_stream(index);
    r.next_u64()
}

/// Scalars that can be drawn at random.
pub trait Sample: Scalar {
    /// Exact: `a/b + (c/d)i` with `|a|, |c| ≤ 10` and `1 ≤ b, d ≤ 10`.
    /// Float: a standard complex normal, `E|z|² = 1`.
    fn sample(rng: &mut impl Rng) -> Self;
}

impl Sample for GaussRat {
    fn sample(rng: &mut impl Rng) -> Self {
        gauss(
            rng.random_range(-10..=10),
            rng.random_range(1..=10),
            rng.random_range(-10..=10),
            rng.random_range(1..=10),
        )
    }
}

impl Sample for C64 {
    fn sample(rng: &mut impl Rng) -> Self {
        let part = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid deviation");
        C64::new(part.sample(rng), part.sample(rng))
    }
}

pub fn matrix<S: Sample>(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix<S> {
    CMatrix::from_fn(rows, cols, |_, _| S::sample(rng))
}

/// `L·U` with unit diagonals and small integer entries: invertible, with
/// an inverse of the same size.
pub fn group_element<S: Sample>(rng: &mut impl Rng, n: usize) -> CMatrix<S> {
    let mut tri = |lower: bool| {
        CMatrix::from_fn(n, n, |i, j| match (i == j, (i > j) == lower) {
            (true, _) => S::one(),
            (false, true) => S::from_int(rng.random_range(-3..=3)),
            (false, false) => S::zero(),
        })
    };
    let (l, u) = (tri(true), tri(false));
    &l * &u
}

/// `I + 0.3·N` with `N` random: a well-conditioned gauge for float checks,
/// where charpoly roundoff grows like `cond(g)^n`.
pub fn near_identity<S: Sample>(rng: &mut impl Rng, n: usize) -> CMatrix<S> {
    let step = S::from_int(3) / S::from_int(10);
    &CMatrix::identity(n) + &matrix::<S>(rng, n, n).scale(&step)
}

/// A product of `rows × r` and `r × cols` random factors.
pub fn of_rank<S: Sample>(rng: &mut impl Rng, rows: usize, cols: usize, r: usize) -> CMatrix<S> {
    if r == 0 {
        return CMatrix::zeros(rows, cols);
    }
    &matrix(rng, rows, r) * &matrix(rng, r, cols)
}

/// `P·D·P⁻¹` where `D` repeats one random eigenvalue per entry of
/// `multiplicities`. `None` if two eigenvalues collide.
pub fn diagonalizable<S: Sample>(rng: &mut impl Rng, multiplicities: &[usize]) -> Option<CMatrix<S>> {
    let values: Vec<S> = multiplicities.iter().map(|_| S::sample(rng)).collect();
    for (i, a) in values.iter().enumerate() {
        if values[..i].iter().any(|b| a.approx_eq(b, 1e-6)) {
            return None;
        }
    }
    let diag: Vec<S> = values
        .iter()
        .zip(multiplicities)
        .flat_map(|(v, &m)| std::iter::repeat_n(v.clone(), m))
        .collect();
    let p = group_element(rng, diag.len());
    Some(&(&p * &CMatrix::diagonal(&diag)) * &p.inverse()?)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Constraints {
    pub rank_f: Option<usize>,
    pub rank_g: Option<usize>,
    /// Eigenvalue multiplicities of a diagonalizable `X`, summing to `k`.
    pub x_multiplicities: Option<Vec<usize>>,
    pub y_multiplicities: Option<Vec<usize>>,
}

impl Constraints {
    pub fn validate(&self, k: usize, l: usize) -> CliResult<()> {
        if k == 0 || l == 0 {
            return Err(CliError::Usage(format!("need k, l ≥ 1, got k = {k}, l = {l}")));
        }
        for (name, r) in [("rank-f", self.rank_f), ("rank-g", self.rank_g)] {
            if let Some(r) = r.filter(|&r| r > k.min(l)) {
                return Err(CliError::Usage(format!(
                    "{name} = {r} exceeds min(k, l) = {}",
                    k.min(l)
                )));
            }
        }
        for (name, mult, n) in [
            ("x-mult", &self.x_multiplicities, k),
            ("y-mult", &self.y_multiplicities, l),
        ] {
            if let Some(m) = mult {
                if m.contains(&0) || m.iter().sum::<usize>() != n {
                    return Err(CliError::Usage(format!("{name} {m:?} must be positive and sum to {n}")));
                }
            }
        }
        Ok(())
    }
}

fn attempt<S: Sample>(
    rng: &mut impl Rng,
    k: usize,
    l: usize,
    c: &Constraints,
    tol: &ToleranceConfig,
) -> Result<Quadruple<S>, String> {
    let mut square = |n: usize, mult: &Option<Vec<usize>>| match mult {
        Some(m) => diagonalizable(rng, m).ok_or_else(|| "eigenvalues collided".to_string()),
        None => Ok(matrix(rng, n, n)),
    };
    let x = square(k, &c.x_multiplicities)?;
    let y = square(l, &c.y_multiplicities)?;
    let mut rect = |rows: usize, cols: usize, rank: Option<usize>, name: &str| match rank {
        Some(r) => {
            let m = of_rank(rng, rows, cols, r);
            if m.rank(tol) == r {
                Ok(m)
            } else {
                Err(format!("{name} came out with the wrong rank"))
            }
        }
        None => Ok(matrix(rng, rows, cols)),
    };
    let f = rect(k, l, c.rank_f, "F")?;
    let g = rect(l, k, c.rank_g, "G")?;
    let q = Quadruple::new(x, y, f, g).map_err(|e| e.to_string())?;
    spectral_det(&q.embed()).map_err(|e| e.to_string())?;
    Ok(q)
}

/// A random quadruple meeting `constraints`, redrawn until the rank and
/// spectrum constraints hold and `det M ≢ 0`.
pub fn quadruple<S: Sample>(
    rng: &mut impl Rng,
    k: usize,
    l: usize,
    constraints: &Constraints,
    tol: &ToleranceConfig,
) -> CliResult<Quadruple<S>> {
    constraints.validate(k, l)?;
    let mut reason = String::new();
    for _ in 0..MAX_ATTEMPTS {
        match attempt(rng, k, l, constraints, tol) {
            Ok(q) => return Ok(q),
            Err(r) => reason = r,
        }
    }
    Err(CliError::GenerationFailed {
        attempts: MAX_ATTEMPTS,
        reason,
    })
}

/// A curve of exact bidegree `(k, l)` with random coefficients.
pub fn curve<S: Sample>(rng: &mut impl Rng, k: usize, l: usize) -> BiPoly<S> {
    let mut terms = Vec::new();
    for i in 0..=k {
        for j in 0..=l {
            let corner = (i, j) == (k, l) || (i, j) == (0, 0);
            let mut c = S::sample(rng);
            while corner && c.is_zero() {
                c = S::sample(rng);
            }
            terms.push((i, j, c));
        }
    }
    BiPoly::from_terms(&terms)
}

/// `L₁ + L₂·L₃` for random linear functionals `Lᵢ`. Gauge-invariant
/// polynomials of low degree are spectral and pairwise in involution, so
/// bracket identities are exercised on these instead.
pub fn quadratic<S: Sample>(rng: &mut impl Rng, k: usize, l: usize) -> LinearCombination<S> {
    let mut linear = || -> Box<dyn Hamiltonian<S>> {
        Box::new(LinearFunctional::new(Gradient {
            dx: matrix(rng, k, k),
            dy: matrix(rng, l, l),
            df: matrix(rng, l, k),
            dg: matrix(rng, k, l),
        }))
    };
    let (a, b, c) = (linear(), linear(), linear());
    LinearCombination::new(vec![(S::one(), a), (S::one(), Box::new(Product::new(b, c)))])
}
