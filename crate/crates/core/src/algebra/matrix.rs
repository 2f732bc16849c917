//! Dense matrices over a [`Scalar`] backend.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use super::poly::Poly;
use super::scalar::{Scalar, C64};
use super::tolerance::ToleranceConfig;
use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for CMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<S> Index<(usize, usize)> for CMatrix<S> {
    type Output = S;

    fn index(&self, (r, c): (usize, usize)) -> &S {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<S> IndexMut<(usize, usize)> for CMatrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<S> CMatrix<S> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<S> {
        self.data
    }

    pub fn try_from_vec(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Self {
        Self::try_from_vec(rows, cols, data).expect("matrix entry count")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn map<T>(&self, f: impl FnMut(&S) -> T) -> CMatrix<T> {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl<S: Clone> CMatrix<S> {
    pub fn from_rows(rows: &[Vec<S>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.iter().flat_map(|row| row.iter().cloned()).collect(),
        }
    }

    pub fn column(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn from_columns(rows: usize, columns: &[Vec<S>]) -> Self {
        Self::from_fn(rows, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(r1 - r0, c1 - c0, |r, c| self[(r0 + r, c0 + c)].clone())
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |r, c| self[(rows[r], cols[c])].clone())
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Self::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Replaces the block whose top-left corner is `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(r0 + r, c0 + c)] = block[(r, c)].clone();
            }
        }
    }
}

impl<S: Scalar> CMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { S::one() } else { S::zero() })
    }

    pub fn scalar(n: usize, s: S) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { s.clone() } else { S::zero() })
    }

    pub fn diagonal(entries: &[S]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |r, c| if r == c { entries[r].clone() } else { S::zero() })
    }

    /// `[[a, b], [c, d]]`.
    pub fn block2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        a.hstack(b).vstack(&c.hstack(d))
    }

    pub fn block_diag(blocks: &[Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn trace(&self) -> S {
        assert!(self.is_square(), "trace of non-square matrix");
        (0..self.rows).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// `self · other − other · self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn pow(&self, e: u32) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn max_modulus(&self) -> f64 {
        self.data.iter().map(Scalar::modulus).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.to_c64().norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn to_c64(&self) -> CMatrix<C64> {
        self.map(Scalar::to_c64)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b, tol))
    }

    pub fn rank(&self, tol: &ToleranceConfig) -> usize {
        S::rank(self, tol)
    }

    /// Columns span the right kernel.
    pub fn kernel(&self, tol: &ToleranceConfig) -> Self {
        S::kernel(self, tol)
    }

    fn check_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn best_pivot(&self, col: usize, from_row: usize, scale: f64, tol: f64) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for r in from_row..self.rows {
            let v = &self[(r, col)];
            if v.is_negligible(scale, tol) {
                continue;
            }
            let score = v.pivot_score();
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((r, score));
            }
        }
        best.map(|(r, _)| r)
    }

    /// Determinant by Gaussian elimination. Float pivots are treated as zero
    /// only when they are exactly zero.
    pub fn det(&self) -> Result<S> {
        self.check_square()?;
        Ok(self.det_unchecked())
    }

    fn det_unchecked(&self) -> S {
        let n = self.rows;
        let mut a = self.clone();
        let mut det = S::one();
        for c in 0..n {
            let Some(p) = a.best_pivot(c, c, 0.0, 0.0) else {
                return S::zero();
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let pivot = a[(c, c)].clone();
            for r in c + 1..n {
                if a[(r, c)].is_zero() {
                    continue;
                }
                let factor = a[(r, c)].clone() / pivot.clone();
                for j in c + 1..n {
                    let v = a[(r, j)].clone() - factor.clone() * a[(c, j)].clone();
                    a[(r, j)] = v;
                }
            }
            det = det * pivot;
        }
        det
    }

    /// Gauss–Jordan inverse; `None` when a pivot column is exactly zero.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.hstack(&Self::identity(n));
        for c in 0..n {
            let p = a.best_pivot(c, c, 0.0, 0.0)?;
            a.swap_rows(p, c);
            let inv = S::one() / a[(c, c)].clone();
            for j in 0..2 * n {
                let v = a[(c, j)].clone() * inv.clone();
                a[(c, j)] = v;
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let factor = a[(r, c)].clone();
                for j in 0..2 * n {
                    let v = a[(r, j)].clone() - factor.clone() * a[(c, j)].clone();
                    a[(r, j)] = v;
                }
            }
        }
        Some(a.submatrix(0, n, n, 2 * n))
    }

    /// Reduced row echelon form and pivot columns. On floats an entry below
    /// `tol.rank_rel_tol · max|a_ij|` is treated as zero.
    pub fn rref(&self, tol: &ToleranceConfig) -> (Self, Vec<usize>) {
        let scale = self.max_modulus();
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..a.cols {
            if row == a.rows {
                break;
            }
            let Some(p) = a.best_pivot(c, row, scale, tol.rank_rel_tol) else {
                for r in row..a.rows {
                    a[(r, c)] = S::zero();
                }
                continue;
            };
            a.swap_rows(p, row);
            let inv = S::one() / a[(row, c)].clone();
            for j in c..a.cols {
                let v = a[(row, j)].clone() * inv.clone();
                a[(row, j)] = v;
            }
            for r in 0..a.rows {
                if r == row || a[(r, c)].is_zero() {
                    continue;
                }
                let factor = a[(r, c)].clone();
                for j in c..a.cols {
                    let v = a[(r, j)].clone() - factor.clone() * a[(row, j)].clone();
                    a[(r, j)] = v;
                }
            }
            pivots.push(c);
            row += 1;
        }
        (a, pivots)
    }

    /// Kernel basis read off the reduced row echelon form.
    pub fn rref_kernel(&self, tol: &ToleranceConfig) -> Self {
        let (r, pivots) = self.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let columns: Vec<Vec<S>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect();
        Self::from_columns(self.cols, &columns)
    }

    /// Full-rank factorization `self = C · R` with `C` the pivot columns of
    /// `self` and `R` the nonzero rows of its reduced echelon form.
    pub fn rank_factorization(&self, tol: &ToleranceConfig) -> (Self, Self) {
        let (r, pivots) = self.rref(tol);
        let c = self.select(&(0..self.rows).collect::<Vec<_>>(), &pivots);
        let rr = r.submatrix(0, pivots.len(), 0, self.cols);
        (c, rr)
    }

    /// Solves `self · x = b` for square invertible `self`.
    pub fn solve(&self, b: &Self) -> Option<Self> {
        Some(&self.inverse()? * b)
    }

    /// Characteristic polynomial `det(λI − M)` by the Faddeev–LeVerrier
    /// recurrence; the only divisions are by the integers `1..n`.
    pub fn charpoly(&self) -> Poly<S> {
        self.faddeev_leverrier().0
    }

    fn faddeev_leverrier(&self) -> (Poly<S>, Self) {
        assert!(self.is_square(), "charpoly of non-square matrix");
        let n = self.rows;
        let mut coeffs = vec![S::zero(); n + 1];
        coeffs[n] = S::one();
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            let mut next = self * &m;
            for i in 0..n {
                let v = next[(i, i)].clone() + coeffs[n - k + 1].clone();
                next[(i, i)] = v;
            }
            m = next;
            let am = self * &m;
            coeffs[n - k] = -am.trace() / S::from_int(k as i64);
        }
        (Poly::new(coeffs), m)
    }

    /// Classical adjugate. Uses `det · M⁻¹` when the elimination is well
    /// conditioned and cofactor expansion otherwise.
    pub fn adjugate(&self) -> Result<Self> {
        self.check_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(Self::zeros(0, 0));
        }
        if n == 1 {
            return Ok(Self::identity(1));
        }
        if let Some((det, inv)) = self.det_and_inverse_if_stable() {
            return Ok(inv.scale(&det));
        }
        Ok(self.cofactor_adjugate())
    }

    fn det_and_inverse_if_stable(&self) -> Option<(S, Self)> {
        let det = self.det_unchecked();
        let scale = self.max_modulus().max(f64::MIN_POSITIVE);
        let n = self.rows as i32;
        // float: a determinant many orders below scale^n signals near singularity
        if det.is_negligible(scale.powi(n), 1e-6) {
            return None;
        }
        let inv = self.inverse()?;
        Some((det, inv))
    }

    /// Adjugate from signed `(n−1)`-minors.
    pub fn cofactor_adjugate(&self) -> Self {
        let n = self.rows;
        let mut adj = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let minor = self.select(&rows, &cols).det_unchecked();
                adj[(i, j)] = if (i + j) % 2 == 0 { minor } else { -minor };
            }
        }
        adj
    }
}

impl<S: Scalar> Add for &CMatrix<S> {
    type Output = CMatrix<S>;

    fn add(self, rhs: &CMatrix<S>) -> CMatrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for &CMatrix<S> {
    type Output = CMatrix<S>;

    fn sub(self, rhs: &CMatrix<S>) -> CMatrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<S: Scalar> Neg for &CMatrix<S> {
    type Output = CMatrix<S>;

    fn neg(self) -> CMatrix<S> {
        self.map(|x| -x.clone())
    }
}

impl<S: Scalar> Mul for &CMatrix<S> {
    type Output = CMatrix<S>;

    fn mul(self, rhs: &CMatrix<S>) -> CMatrix<S> {
        assert_eq!(self.cols, rhs.rows, "mul shape");
        let mut out = CMatrix::<S>::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out[(i, j)].clone() + a.clone() * rhs[(k, j)].clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{gauss, GaussRat};

    fn q(v: i64) -> GaussRat {
        GaussRat::from_int(v)
    }

    fn int_matrix(rows: &[&[i64]]) -> CMatrix<GaussRat> {
        CMatrix::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&v| q(v)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn det_and_inverse() {
        let m = int_matrix(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det().unwrap(), q(18));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, CMatrix::identity(3));
    }

    #[test]
    fn charpoly_two_by_two() {
        let m = int_matrix(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.charpoly(), Poly::new(vec![q(-2), q(-5), q(1)]));
        let z = CMatrix::<GaussRat>::zeros(2, 2);
        assert_eq!(z.charpoly(), Poly::new(vec![q(0), q(0), q(1)]));
    }

    #[test]
    fn charpoly_of_diagonal() {
        let a = gauss(3, 2, 1, 1);
        let b = gauss(-1, 1, 0, 1);
        let m = CMatrix::diagonal(&[a.clone(), b.clone()]);
        let expected = Poly::new(vec![a.clone() * b.clone(), -(a + b), q(1)]);
        assert_eq!(m.charpoly(), expected);
    }

    #[test]
    fn adjugate_of_singular_matrix() {
        let m = int_matrix(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let adj = m.adjugate().unwrap();
        assert_eq!(adj, m.cofactor_adjugate());
        assert_eq!(&m * &adj, CMatrix::zeros(3, 3));
        let fl = m.to_c64();
        let adj_f = fl.adjugate().unwrap();
        assert!(adj_f.approx_eq(&adj.to_c64(), 1e-12));
    }

    #[test]
    fn adjugate_identity_relation() {
        let m = int_matrix(&[&[2, -1, 0, 1], &[1, 3, 1, 0], &[0, 1, 4, 2], &[5, 0, 1, 1]]);
        let det = m.det().unwrap();
        assert_eq!(&m * &m.adjugate().unwrap(), CMatrix::scalar(4, det));
    }

    #[test]
    fn rref_kernel_spans_kernel() {
        let tol = ToleranceConfig::default();
        let m = int_matrix(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let k = m.rref_kernel(&tol);
        assert_eq!(k.cols(), 2);
        assert!((&m * &k).is_zero());
    }

    #[test]
    fn rank_factorization_reproduces() {
        let tol = ToleranceConfig::default();
        let m = int_matrix(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        let (c, r) = m.rank_factorization(&tol);
        assert_eq!((c.cols(), r.rows()), (2, 2));
        assert_eq!(&c * &r, m);
    }
}
