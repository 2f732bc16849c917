//! Concrete Hamiltonians and combinators.

use super::{Gradient, Hamiltonian};
use crate::algebra::bipoly::interpolate_many;
use crate::algebra::{BiPoly, CMatrix, Scalar};
use crate::error::{Error, Result};
use crate::pencil::{act_k, Quadruple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Block {
    X,
    Y,
    F,
    G,
}

/// `det M` and the gradient of every coefficient `H_ab` at `q`, indexed
/// `[a][b]`. Uses `d det M = tr(adj M · dM)`, with `adj M` interpolated on
/// the same grid as the determinant.
pub fn spectral_gradients<S: Scalar>(q: &Quadruple<S>) -> (BiPoly<S>, Vec<Vec<Gradient<S>>>) {
    let (k, l, n) = (q.k(), q.l(), q.n());
    let mut polys = interpolate_many(k, l, 1 + n * n, |z, e| {
        let m = q.matrix_at(z, e);
        let mut out = vec![m.det().expect("square")];
        out.extend(m.adjugate().expect("square").into_vec());
        out
    });
    let adj = polys.split_off(1);
    let det = polys.pop().expect("determinant");
    let block = |a: usize, b: usize, r0: usize, r1: usize, c0: usize, c1: usize| {
        CMatrix::from_fn(r1 - r0, c1 - c0, |i, j| adj[(r0 + i) * n + c0 + j].coeff(a, b))
    };
    let grads = (0..=k)
        .map(|a| {
            (0..=l)
                .map(|b| Gradient {
                    dx: block(a, b, 0, k, 0, k),
                    dy: block(a, b, k, n, k, n),
                    df: block(a, b, k, n, 0, k),
                    dg: block(a, b, 0, k, k, n),
                })
                .collect()
        })
        .collect();
    (det, grads)
}

/// `H_ab(q)`: the coefficient of `ζ^a η^b` in `det M(ζ, η)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectralHamiltonian {
    pub a: usize,
    pub b: usize,
}

pub fn spectral_hamiltonian(a: usize, b: usize) -> SpectralHamiltonian {
    SpectralHamiltonian { a, b }
}

impl<S: Scalar> Hamiltonian<S> for SpectralHamiltonian {
    fn value(&self, q: &Quadruple<S>) -> S {
        let det = interpolate_many(q.k(), q.l(), 1, |z, e| vec![q.matrix_at(z, e).det().expect("square")]);
        det[0].coeff(self.a, self.b)
    }

    fn gradient(&self, q: &Quadruple<S>) -> Gradient<S> {
        if self.a > q.k() || self.b > q.l() {
            return Gradient::zeros(q.k(), q.l());
        }
        let (_, mut grads) = spectral_gradients(q);
        grads.swap_remove(self.a).swap_remove(self.b)
    }
}

/// A single matrix entry as a function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coordinate {
    pub block: Block,
    pub i: usize,
    pub j: usize,
}

impl Coordinate {
    pub fn new(block: Block, i: usize, j: usize) -> Self {
        Self { block, i, j }
    }
}

impl<S: Scalar> Hamiltonian<S> for Coordinate {
    fn value(&self, q: &Quadruple<S>) -> S {
        let m = match self.block {
            Block::X => &q.x,
            Block::Y => &q.y,
            Block::F => &q.f,
            Block::G => &q.g,
        };
        m[(self.i, self.j)].clone()
    }

    fn gradient(&self, q: &Quadruple<S>) -> Gradient<S> {
        let mut g = Gradient::zeros(q.k(), q.l());
        let slot = match self.block {
            Block::X => &mut g.dx,
            Block::Y => &mut g.dy,
            Block::F => &mut g.df,
            Block::G => &mut g.dg,
        };
        slot[(self.j, self.i)] = S::one();
        g
    }
}

/// `tr(Cx·X) + tr(Cy·Y) + tr(Cf·F) + tr(Cg·G)` for constant matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFunctional<S> {
    pub coefficients: Gradient<S>,
}

impl<S: Scalar> LinearFunctional<S> {
    pub fn new(coefficients: Gradient<S>) -> Self {
        Self { coefficients }
    }

    /// `tr(C·X)` on quadruples with `k = C.rows()` and the given `l`.
    pub fn on_x(c: CMatrix<S>, l: usize) -> Self {
        let mut coefficients = Gradient::zeros(c.rows(), l);
        coefficients.dx = c;
        Self { coefficients }
    }

    /// `tr(C·Y)` on quadruples with the given `k` and `l = C.rows()`.
    pub fn on_y(c: CMatrix<S>, k: usize) -> Self {
        let mut coefficients = Gradient::zeros(k, c.rows());
        coefficients.dy = c;
        Self { coefficients }
    }
}

impl<S: Scalar> Hamiltonian<S> for LinearFunctional<S> {
    fn value(&self, q: &Quadruple<S>) -> S {
        let c = &self.coefficients;
        (&c.dx * &q.x).trace() + (&c.dy * &q.y).trace() + (&c.df * &q.f).trace() + (&c.dg * &q.g).trace()
    }

    fn gradient(&self, _q: &Quadruple<S>) -> Gradient<S> {
        self.coefficients.clone()
    }
}

/// `tr(M₁ M₂ ⋯ M_r)` for a cyclically composable word in `X, Y, F, G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceWord {
    letters: Vec<Block>,
}

/// Which side (`k` or `l`) a letter's rows and columns live on.
fn sides(b: Block) -> (bool, bool) {
    match b {
        Block::X => (true, true),
        Block::Y => (false, false),
        Block::F => (true, false),
        Block::G => (false, true),
    }
}

impl TraceWord {
    pub fn new(letters: Vec<Block>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidArgument("empty trace word".into()));
        }
        let n = letters.len();
        for i in 0..n {
            let (_, out) = sides(letters[i]);
            let (inp, _) = sides(letters[(i + 1) % n]);
            if out != inp {
                return Err(Error::InvalidArgument(format!(
                    "letters {:?} and {:?} do not compose",
                    letters[i],
                    letters[(i + 1) % n]
                )));
            }
        }
        Ok(Self { letters })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(|c| match c {
                'X' => Ok(Block::X),
                'Y' => Ok(Block::Y),
                'F' => Ok(Block::F),
                'G' => Ok(Block::G),
                other => Err(Error::InvalidArgument(format!("unknown letter `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }

    pub fn letters(&self) -> &[Block] {
        &self.letters
    }

    fn matrix<'a, S>(q: &'a Quadruple<S>, b: Block) -> &'a CMatrix<S> {
        match b {
            Block::X => &q.x,
            Block::Y => &q.y,
            Block::F => &q.f,
            Block::G => &q.g,
        }
    }

    /// `M_{i+1} ⋯ M_r M_1 ⋯ M_{i−1}`.
    fn cyclic_rest<S: Scalar>(&self, q: &Quadruple<S>, i: usize) -> CMatrix<S> {
        let n = self.letters.len();
        let first = self.letters[i];
        let size = if sides(first).1 { q.k() } else { q.l() };
        let mut acc = CMatrix::identity(size);
        for step in 1..n {
            acc = &acc * Self::matrix(q, self.letters[(i + step) % n]);
        }
        acc
    }
}

impl<S: Scalar> Hamiltonian<S> for TraceWord {
    fn value(&self, q: &Quadruple<S>) -> S {
        (Self::matrix(q, self.letters[0]) * &self.cyclic_rest(q, 0)).trace()
    }

    fn gradient(&self, q: &Quadruple<S>) -> Gradient<S> {
        let mut g = Gradient::zeros(q.k(), q.l());
        for (i, &b) in self.letters.iter().enumerate() {
            let rest = self.cyclic_rest(q, i);
            let slot = match b {
                Block::X => &mut g.dx,
                Block::Y => &mut g.dy,
                Block::F => &mut g.df,
                Block::G => &mut g.dg,
            };
            *slot = &*slot + &rest;
        }
        g
    }
}

/// `Σ c_i · tr(word_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TracePolynomial<S> {
    pub terms: Vec<(S, TraceWord)>,
}

impl<S: Scalar> TracePolynomial<S> {
    /// Parses sums like `XFYG + 2*XX - FG`; coefficients are integers.
    pub fn parse(s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let normalized = s.replace('-', "+-");
        for raw in normalized.split('+') {
            let raw = raw.trim();
            if raw.is_empty() {
                continue;
            }
            let (negative, body) = match raw.strip_prefix('-') {
                Some(rest) => (true, rest.trim()),
                None => (false, raw),
            };
            let (coeff, word) = match body.split_once('*') {
                Some((c, w)) => {
                    let c: i64 = c
                        .trim()
                        .parse()
                        .map_err(|_| Error::InvalidArgument(format!("bad coefficient in `{raw}`")))?;
                    (c, w)
                }
                None => (1, body),
            };
            let coeff = if negative { -coeff } else { coeff };
            terms.push((S::from_int(coeff), TraceWord::parse(word)?));
        }
        if terms.is_empty() {
            return Err(Error::InvalidArgument("empty trace polynomial".into()));
        }
        Ok(Self { terms })
    }
}

impl<S: Scalar> Hamiltonian<S> for TracePolynomial<S> {
    fn value(&self, q: &Quadruple<S>) -> S {
        self.terms
            .iter()
            .fold(S::zero(), |acc, (c, w)| acc + c.clone() * w.value(q))
    }

    fn gradient(&self, q: &Quadruple<S>) -> Gradient<S> {
        self.terms.iter().fold(Gradient::zeros(q.k(), q.l()), |acc, (c, w)| {
            acc.add(&Hamiltonian::<S>::gradient(w, q).scale(c))
        })
    }
}

/// `f·g`, with the Leibniz gradient.
pub struct Product<S> {
    pub left: Box<dyn Hamiltonian<S>>,
    pub right: Box<dyn Hamiltonian<S>>,
}

impl<S: Scalar> Product<S> {
    pub fn new(left: Box<dyn Hamiltonian<S>>, right: Box<dyn Hamiltonian<S>>) -> Self {
        Self { left, right }
    }
}

impl<S: Scalar> Hamiltonian<S> for Product<S> {
    fn value(&self, q: &Quadruple<S>) -> S {
        self.left.value(q) * self.right.value(q)
    }

    fn gradient(&self, q: &Quadruple<S>) -> Gradient<S> {
        let (a, b) = (self.left.value(q), self.right.value(q));
        self.left.gradient(q).scale(&b).add(&self.right.gradient(q).scale(&a))
    }
}

/// `Σ c_i · f_i`.
pub struct LinearCombination<S> {
    pub terms: Vec<(S, Box<dyn Hamiltonian<S>>)>,
}

impl<S: Scalar> LinearCombination<S> {
    pub fn new(terms: Vec<(S, Box<dyn Hamiltonian<S>>)>) -> Self {
        Self { terms }
    }
}

impl<S: Scalar> Hamiltonian<S> for LinearCombination<S> {
    fn value(&self, q: &Quadruple<S>) -> S {
        self.terms
            .iter()
            .fold(S::zero(), |acc, (c, h)| acc + c.clone() * h.value(q))
    }

    fn gradient(&self, q: &Quadruple<S>) -> Gradient<S> {
        self.terms.iter().fold(Gradient::zeros(q.k(), q.l()), |acc, (c, h)| {
            acc.add(&h.gradient(q).scale(c))
        })
    }
}

/// `f ∘ a` for the constant gauge `a = act_K(·, g, h)`.
pub struct Pullback<S> {
    inner: Box<dyn Hamiltonian<S>>,
    g: CMatrix<S>,
    h: CMatrix<S>,
    g_inv: CMatrix<S>,
    h_inv: CMatrix<S>,
}

impl<S: Scalar> Pullback<S> {
    pub fn new(inner: Box<dyn Hamiltonian<S>>, g: CMatrix<S>, h: CMatrix<S>) -> Result<Self> {
        let g_inv = g.inverse().ok_or(Error::SingularGroupElement("g"))?;
        let h_inv = h.inverse().ok_or(Error::SingularGroupElement("h"))?;
        Ok(Self {
            inner,
            g,
            h,
            g_inv,
            h_inv,
        })
    }

    fn moved(&self, q: &Quadruple<S>) -> Quadruple<S> {
        act_k(q, &self.g, &self.h).expect("invertibility checked at construction")
    }
}

impl<S: Scalar> Hamiltonian<S> for Pullback<S> {
    fn value(&self, q: &Quadruple<S>) -> S {
        self.inner.value(&self.moved(q))
    }

    fn gradient(&self, q: &Quadruple<S>) -> Gradient<S> {
        let d = self.inner.gradient(&self.moved(q));
        Gradient {
            dx: &(&self.g_inv * &d.dx) * &self.g,
            dy: &(&self.h_inv * &d.dy) * &self.h,
            df: &(&self.h_inv * &d.df) * &self.g,
            dg: &(&self.g_inv * &d.dg) * &self.h,
        }
    }
}
