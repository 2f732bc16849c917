//! Float-backend kernels backed by nalgebra's SVD and Schur decompositions.

use nalgebra::DMatrix;

use super::matrix::CMatrix;
use super::poly::Poly;
use super::scalar::{Scalar, C64};

fn to_dmatrix(m: &CMatrix<C64>) -> DMatrix<C64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

/// Number of singular values `σ ≥ rel_tol · σ_max`; values exactly at the
/// threshold count as nonzero.
pub fn svd_rank(m: &CMatrix<C64>, rel_tol: f64) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let sv = to_dmatrix(m).svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s >= rel_tol * smax).count()
}

/// Orthonormal kernel basis from the right singular vectors.
pub fn svd_kernel(m: &CMatrix<C64>, rel_tol: f64) -> CMatrix<C64> {
    let (rows, cols) = (m.rows(), m.cols());
    if cols == 0 {
        return CMatrix::zeros(0, 0);
    }
    if rows == 0 || m.is_zero() {
        return CMatrix::identity(cols);
    }
    // pad to at least as many rows as columns so V is square
    let padded = if rows < cols {
        m.vstack(&CMatrix::zeros(cols - rows, cols))
    } else {
        m.clone()
    };
    let svd = to_dmatrix(&padded).svd(false, true);
    let v_t = svd.v_t.expect("requested V^H");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let null: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] < rel_tol * smax)
        .collect();
    CMatrix::from_fn(cols, null.len(), |r, c| v_t[(null[c], r)].conj())
}

/// Eigenvalues from the complex Schur form, unclustered.
pub fn raw_eigenvalues(m: &CMatrix<C64>) -> Vec<C64> {
    let n = m.rows();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![m[(0, 0)]];
    }
    let schur = to_dmatrix(m).schur();
    let (_, t) = schur.unpack();
    (0..n).map(|i| t[(i, i)]).collect()
}

/// Groups values closer than `tol · max(1, max|v|)` and returns cluster means
/// with sizes, ordered by (re, im).
pub fn cluster(values: &[C64], tol: f64) -> Vec<(C64, usize)> {
    let scale = values.iter().map(|v| v.norm()).fold(1.0, f64::max);
    let thresh = tol * scale;
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= thresh {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<(usize, C64, usize)> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == root) {
            Some(g) => {
                g.1 += values[i];
                g.2 += 1;
            }
            None => groups.push((root, values[i], 1)),
        }
    }
    let mut out: Vec<(C64, usize)> = groups
        .into_iter()
        .map(|(_, sum, count)| (sum / count as f64, count))
        .collect();
    out.sort_by(|a, b| a.0.cmp_re_im(&b.0));
    out
}

pub fn eigenvalues(m: &CMatrix<C64>, tol: f64) -> Vec<(C64, usize)> {
    cluster(&raw_eigenvalues(m), tol)
}

/// Roots of a float polynomial via its companion matrix, polished by a few
/// Newton steps.
pub fn roots_raw(p: &Poly<C64>) -> Vec<C64> {
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let lead = *p.leading().expect("nonzero");
    let c: Vec<C64> = p.coeffs().iter().map(|x| x / lead).collect();
    let companion = CMatrix::from_fn(deg, deg, |r, col| {
        if col == deg - 1 {
            -c[r]
        } else if r == col + 1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let dp = p.derivative();
    raw_eigenvalues(&companion)
        .into_iter()
        .map(|mut z| {
            for _ in 0..3 {
                let d = dp.eval(&z);
                if d.norm() == 0.0 {
                    break;
                }
                let step = p.eval(&z) / d;
                if !step.is_finite() {
                    break;
                }
                z -= step;
            }
            z
        })
        .collect()
}

pub fn roots(p: &Poly<C64>, tol: f64) -> Vec<(C64, usize)> {
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    // cluster unpolished companion eigenvalues: Newton stalls on multiple roots
    let lead = *p.leading().expect("nonzero");
    let c: Vec<C64> = p.coeffs().iter().map(|x| x / lead).collect();
    let companion = CMatrix::from_fn(deg, deg, |r, col| {
        if col == deg - 1 {
            -c[r]
        } else if r == col + 1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    cluster(&raw_eigenvalues(&companion), tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn rank_threshold() {
        let m = CMatrix::from_rows(&[vec![c(1.0), c(0.0)], vec![c(0.0), c(1e-15)]]);
        assert_eq!(svd_rank(&m, 1e-9), 1);
        assert_eq!(svd_rank(&CMatrix::<C64>::zeros(2, 4), 1e-9), 0);
        assert_eq!(svd_rank(&CMatrix::<C64>::identity(3), 1e-9), 3);
    }

    #[test]
    fn kernel_of_wide_matrix() {
        let m = CMatrix::from_rows(&[vec![c(1.0), c(1.0), c(0.0)]]);
        let k = svd_kernel(&m, 1e-9);
        assert_eq!(k.cols(), 2);
        assert!((&m * &k).max_modulus() < 1e-12);
    }

    #[test]
    fn eigenvalues_cluster() {
        let m = CMatrix::diagonal(&[c(1.0), c(1.0), c(2.0)]);
        let e = eigenvalues(&m, 1e-9);
        assert_eq!(e.len(), 2);
        assert_eq!(e[0].1, 2);
        assert!((e[0].0 - c(1.0)).norm() < 1e-12);
        let nil = CMatrix::from_rows(&[vec![c(0.0), c(1.0)], vec![c(0.0), c(0.0)]]);
        assert_eq!(eigenvalues(&nil, 1e-9), vec![(c(0.0), 2)]);
    }

    #[test]
    fn polynomial_roots() {
        // (x - 2)(x + i)
        let p = Poly::new(vec![C64::new(0.0, -2.0), C64::new(-2.0, 1.0), c(1.0)]);
        let r = roots(&p, 1e-9);
        assert_eq!(r.len(), 2);
        assert!((r[0].0 - C64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((r[1].0 - c(2.0)).norm() < 1e-12);
    }
}
