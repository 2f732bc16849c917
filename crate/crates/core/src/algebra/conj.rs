//! Computable conjugacy-class data: characteristic polynomial, eigenvalues
//! and the ranks of `(T − λ)^m`, which together pin down the Jordan type.
//! On the exact backend the invariant factors of `λI − T` are recorded as
//! well; they classify `T` even when its eigenvalues are not Gaussian
//! rationals.

use super::matrix::CMatrix;
use super::poly::Poly;
use super::scalar::{Backend, Scalar};
use super::tolerance::ToleranceConfig;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ConjClassInvariant<S> {
    pub size: usize,
    pub rank: usize,
    /// Ascending coefficients of `det(λI − T)`.
    pub charpoly: Vec<S>,
    /// Distinct eigenvalues with algebraic multiplicity, ordered by (re, im);
    /// `None` when the characteristic polynomial does not split exactly.
    pub eigenvalues: Option<Vec<(S, usize)>>,
    /// `rank_sequence[i][m − 1] = rank (T − λ_i)^m` for `m = 1..=n`.
    pub rank_sequence: Vec<Vec<usize>>,
    /// Non-constant monic invariant factors `d₁ | d₂ | …` of `λI − T`
    /// (exact backend only).
    pub invariant_factors: Option<Vec<Poly<S>>>,
    /// Whether `T` is diagonalisable.
    pub semisimple: bool,
}

impl<S: Scalar> ConjClassInvariant<S> {
    pub fn of(t: &CMatrix<S>, tol: &ToleranceConfig) -> Result<Self> {
        if !t.is_square() {
            return Err(Error::NotSquare {
                rows: t.rows(),
                cols: t.cols(),
            });
        }
        let n = t.rows();
        let charpoly = t.charpoly().coeffs().to_vec();
        let invariant_factors = (S::BACKEND == Backend::Exact).then(|| invariant_factors(t));
        let eigenvalues = match S::eigenvalues(t, tol) {
            Ok(e) => Some(e),
            Err(Error::NonSplitting { .. }) => None,
            Err(e) => return Err(e),
        };
        let mut rank_sequence = Vec::new();
        let mut semisimple = true;
        for (lambda, mult) in eigenvalues.iter().flatten() {
            let shifted = t - &CMatrix::scalar(n, lambda.clone());
            let mut power = CMatrix::identity(n);
            let mut ranks = Vec::with_capacity(n);
            for _ in 0..n {
                power = &power * &shifted;
                ranks.push(power.rank(tol));
            }
            if ranks[0] != n - mult {
                semisimple = false;
            }
            rank_sequence.push(ranks);
        }
        if let Some(factors) = &invariant_factors {
            // diagonalisable iff the minimal polynomial is squarefree
            semisimple = factors
                .last()
                .is_none_or(|m| m.gcd(&m.derivative()).degree() == Some(0));
        }
        Ok(Self {
            size: n,
            rank: t.rank(tol),
            charpoly,
            eigenvalues,
            rank_sequence,
            invariant_factors,
            semisimple,
        })
    }

    /// Field-by-field agreement; float entries compare within `tol`.
    pub fn agrees(&self, other: &Self, tol: f64) -> bool {
        self.size == other.size
            && self.rank == other.rank
            && self.charpoly.len() == other.charpoly.len()
            && self
                .charpoly
                .iter()
                .zip(&other.charpoly)
                .all(|(a, b)| a.approx_eq(b, tol))
            && match (&self.eigenvalues, &other.eigenvalues) {
                (Some(a), Some(b)) => {
                    a.len() == b.len() && a.iter().zip(b).all(|((x, m), (y, n))| m == n && x.approx_eq(y, tol))
                }
                (None, None) => true,
                _ => false,
            }
            && self.rank_sequence == other.rank_sequence
            && match (&self.invariant_factors, &other.invariant_factors) {
                (Some(a), Some(b)) => a == b,
                _ => true,
            }
    }
}

/// Smith form of `λI − T` over `K[λ]`, keeping the non-constant diagonal.
fn invariant_factors<S: Scalar>(t: &CMatrix<S>) -> Vec<Poly<S>> {
    let n = t.rows();
    let mut a: Vec<Vec<Poly<S>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = -t[(i, j)].clone();
                    if i == j {
                        Poly::new(vec![c, S::one()])
                    } else {
                        Poly::constant(c)
                    }
                })
                .collect()
        })
        .collect();
    for p in 0..n {
        loop {
            let pivot = (p..n)
                .flat_map(|i| (p..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by_key(|&(i, j)| a[i][j].degree());
            let Some((pi, pj)) = pivot else { break };
            a.swap(p, pi);
            for row in a.iter_mut() {
                row.swap(p, pj);
            }
            let mut reduced = true;
            for i in p + 1..n {
                let (quot, rem) = a[i][p].div_rem(&a[p][p]);
                for j in p..n {
                    a[i][j] = a[i][j].sub(&quot.mul(&a[p][j]));
                }
                reduced &= rem.is_zero();
            }
            for j in p + 1..n {
                let (quot, rem) = a[p][j].div_rem(&a[p][p]);
                for row in a.iter_mut().skip(p) {
                    row[j] = row[j].sub(&quot.mul(&row[p]));
                }
                reduced &= rem.is_zero();
            }
            if !reduced {
                continue;
            }
            let bad = (p + 1..n).find(|&i| (p + 1..n).any(|j| !a[i][j].div_rem(&a[p][p]).1.is_zero()));
            match bad {
                Some(i) => {
                    for j in p..n {
                        a[p][j] = a[p][j].add(&a[i][j]);
                    }
                }
                None => break,
            }
        }
    }
    (0..n)
        .map(|i| a[i][i].monic())
        .filter(|d| d.degree().is_some_and(|deg| deg > 0))
        .collect()
}
