//! Brute-force Čech cohomology of `O(p, q)` on P¹×P¹.
//!
//! Each factor is covered by two charts: chart 0 where the coordinate is
//! finite and chart 1 where it is nonzero. The product cover has the four
//! charts `(i, j)`. Sections are written in the trivialization of chart
//! `(0, 0)`, so a cochain on an intersection is a Laurent polynomial, and
//! the monomial `ζ^a η^b` is regular on an intersection iff
//! `(a ≥ 0 or chart 1 is used) and (a ≤ p or chart 0 is used)`, likewise
//! for `b`. The coboundary preserves the weight `(a, b)`, so the complex
//! splits into finite pieces, one per weight, which are computed here by
//! plain elimination with no use of the closed forms.

use num_traits::{One, Zero};
use spectral_pencil::algebra::{BiPoly, CMatrix, GaussRat, Scalar};
use spectral_pencil::cohomology::{CohClassSpace, Twist};

type Q = GaussRat;

/// `(summand, weight)` of a basis class.
pub type Label = (usize, (i64, i64));

/// Nonzero entry `(row label, column label, value)` of an induced map.
pub type Entry = (Label, Label, Q);

/// Cochain values keyed by chart set.
type Cochain = Vec<(Vec<usize>, Q)>;

/// `(ζ chart, η chart)` of each chart, in the order of the cochain index.
const CHARTS: [(usize, usize); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

/// Weights outside this box have acyclic pieces for all twists in use.
const BOX: i64 = 10;

fn subsets(size: usize) -> Vec<Vec<usize>> {
    (0u32..16)
        .filter(|m| m.count_ones() as usize == size)
        .map(|m| (0..4).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

fn factor_regular(used: [bool; 2], a: i64, d: i64) -> bool {
    (a >= 0 || used[1]) && (a <= d || used[0])
}

fn regular(s: &[usize], a: i64, b: i64, t: Twist) -> bool {
    let mut zeta = [false; 2];
    let mut eta = [false; 2];
    for &c in s {
        zeta[CHARTS[c].0] = true;
        eta[CHARTS[c].1] = true;
    }
    factor_regular(zeta, a, t.p) && factor_regular(eta, b, t.q)
}

/// Degree-`d` cochains of weight `(a, b)`: the chart sets carrying a
/// regular monomial.
fn cochain_basis(d: usize, a: i64, b: i64, t: Twist) -> Vec<Vec<usize>> {
    subsets(d + 1).into_iter().filter(|s| regular(s, a, b, t)).collect()
}

/// Matrix of `δ: C^d → C^{d+1}` on one weight piece.
fn coboundary(d: usize, a: i64, b: i64, t: Twist) -> CMatrix<Q> {
    let src = cochain_basis(d, a, b, t);
    let dst = cochain_basis(d + 1, a, b, t);
    let mut m = CMatrix::zeros(dst.len(), src.len());
    for (r, s) in dst.iter().enumerate() {
        for omit in 0..s.len() {
            let face: Vec<usize> = s
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != omit)
                .map(|(_, &c)| c)
                .collect();
            if let Some(c) = src.iter().position(|f| *f == face) {
                m[(r, c)] = if omit % 2 == 0 { Q::one() } else { -Q::one() };
            }
        }
    }
    m
}

/// Row echelon form by Gauss–Jordan; returns the pivot columns.
fn reduce(m: &mut [Vec<Q>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Q::one() / m[row][c].clone();
        for x in m[row].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for r in 0..m.len() {
            if r != row && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let pivot_row = m[row].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row) {
                    *x = x.clone() - f.clone() * p.clone();
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    pivots
}

fn rows_of(m: &CMatrix<Q>) -> Vec<Vec<Q>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

fn rank(m: &CMatrix<Q>) -> usize {
    reduce(&mut rows_of(m), m.cols()).len()
}

/// Basis of `{x : x·m = 0}`.
fn left_kernel(m: &CMatrix<Q>) -> Vec<Vec<Q>> {
    let n = m.rows();
    let mut t: Vec<Vec<Q>> = (0..m.cols()).map(|c| m.column(c)).collect();
    let pivots = reduce(&mut t, n);
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); n];
            v[free] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -t[r][free].clone();
            }
            v
        })
        .collect()
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter()
        .zip(b)
        .fold(Q::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

fn apply(m: &CMatrix<Q>, v: &[Q]) -> Vec<Q> {
    (0..m.rows()).map(|r| dot(m.row(r), v)).collect()
}

/// Dimension of `H^d` in weight `(a, b)`.
fn piece_dim(d: usize, a: i64, b: i64, t: Twist) -> usize {
    let dim = cochain_basis(d, a, b, t).len();
    let out = if d < 3 { rank(&coboundary(d, a, b, t)) } else { 0 };
    let inc = if d > 0 { rank(&coboundary(d - 1, a, b, t)) } else { 0 };
    dim - out - inc
}

/// Weights carrying `H^d(O(t))`, each piece being at most a line.
pub fn class_weights(t: Twist, d: usize) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for a in -BOX..=BOX {
        for b in -BOX..=BOX {
            match piece_dim(d, a, b, t) {
                0 => {}
                1 => out.push((a, b)),
                n => panic!("weight ({a}, {b}) of O({}, {}) has H^{d} of dimension {n}", t.p, t.q),
            }
        }
    }
    out
}

pub fn dims(t: Twist) -> (usize, usize, usize) {
    (
        class_weights(t, 0).len(),
        class_weights(t, 1).len(),
        class_weights(t, 2).len(),
    )
}

/// `±1` on an ordered pair of factor charts, `0` on a repeated one.
fn orient(i: usize, j: usize) -> i64 {
    i as i64 - j as i64
}

/// Standard cocycle of weight `(a, b)`: the constant section in degree 0,
/// the pullback of a factor class along a projection in degree 1, and the
/// cup product of the two pullbacks in degree 2.
fn standard_cocycle(d: usize, a: i64, b: i64, t: Twist) -> Vec<Q> {
    let zeta_class = |s: usize, u: usize| -orient(CHARTS[s].0, CHARTS[u].0);
    let eta_class = |s: usize, u: usize| -orient(CHARTS[s].1, CHARTS[u].1);
    cochain_basis(d, a, b, t)
        .iter()
        .map(|s| {
            let v = match d {
                0 => 1,
                1 if a < 0 => zeta_class(s[0], s[1]),
                1 => eta_class(s[0], s[1]),
                _ => zeta_class(s[0], s[1]) * eta_class(s[1], s[2]),
            };
            Q::from_int(v)
        })
        .collect()
}

/// Coefficient of the standard class of weight `w` in the class of the
/// cochain `values` (indexed by chart set), which must be a cocycle.
fn class_coefficient(d: usize, w: (i64, i64), t: Twist, values: &[(Vec<usize>, Q)]) -> Q {
    let basis = cochain_basis(d, w.0, w.1, t);
    let mut v = vec![Q::zero(); basis.len()];
    for (s, x) in values {
        let i = basis.iter().position(|b| b == s).expect("product stays regular");
        v[i] = v[i].clone() + x.clone();
    }
    if d < 3 {
        assert!(
            apply(&coboundary(d, w.0, w.1, t), &v).iter().all(Zero::is_zero),
            "image is not a cocycle"
        );
    }
    if piece_dim(d, w.0, w.1, t) == 0 {
        return Q::zero();
    }
    let z = standard_cocycle(d, w.0, w.1, t);
    let incoming = if d == 0 {
        CMatrix::zeros(basis.len(), 0)
    } else {
        coboundary(d - 1, w.0, w.1, t)
    };
    let ell = left_kernel(&incoming);
    let ell = ell
        .into_iter()
        .find(|e| !dot(e, &z).is_zero())
        .expect("standard cocycle is not a coboundary");
    dot(&ell, &v) / dot(&ell, &z)
}

/// The map on `H^d` induced by multiplication with `entries`, in the basis
/// of standard classes. Rows and columns are labelled by
/// `(summand, weight)`.
pub fn induced(entries: &CMatrix<BiPoly<Q>>, src: &[Twist], dst: &[Twist], d: usize) -> Vec<Entry> {
    let mut out = Vec::new();
    for (j, &ts) in src.iter().enumerate() {
        for w in class_weights(ts, d) {
            let z = standard_cocycle(d, w.0, w.1, ts);
            let chart_sets = cochain_basis(d, w.0, w.1, ts);
            for (i, &td) in dst.iter().enumerate() {
                // chart-wise multiplication, collected by target weight
                let mut images: Vec<((i64, i64), Cochain)> = Vec::new();
                for (dz, de, c) in entries[(i, j)].terms() {
                    let target = (w.0 + dz as i64, w.1 + de as i64);
                    let vals = chart_sets.iter().cloned().zip(z.iter().map(|x| x.clone() * c.clone()));
                    match images.iter_mut().find(|(t, _)| *t == target) {
                        Some((_, v)) => v.extend(vals),
                        None => images.push((target, vals.collect())),
                    }
                }
                for (target, vals) in images {
                    let x = class_coefficient(d, target, td, &vals);
                    if !x.is_zero() {
                        out.push(((i, target), (j, w), x));
                    }
                }
            }
        }
    }
    out
}

/// Compares `matrix`, laid out in the library's class basis, with the
/// oracle's entries. Returns a description of the first disagreement.
pub fn compare(matrix: &CMatrix<Q>, entries: &[Entry], src: &[Twist], dst: &[Twist], d: u8) -> Result<(), String> {
    let index = |twists: &[Twist], s: usize, w: (i64, i64)| -> Result<usize, String> {
        let mut off = 0;
        for (k, &t) in twists.iter().enumerate() {
            let space = CohClassSpace::new(t, d);
            if k == s {
                return space
                    .basis
                    .iter()
                    .position(|&m| m == w)
                    .map(|p| off + p)
                    .ok_or_else(|| format!("weight {w:?} of summand {s} is not a library basis class"));
            }
            off += space.dim();
        }
        Err(format!("summand {s} out of range"))
    };
    for &t in src.iter().chain(dst) {
        let mut mine = class_weights(t, d as usize);
        let mut lib = CohClassSpace::new(t, d).basis;
        mine.sort_unstable();
        lib.sort_unstable();
        if mine != lib {
            return Err(format!(
                "class weights of O({}, {}) differ: {mine:?} vs {lib:?}",
                t.p, t.q
            ));
        }
    }
    let mut expected = CMatrix::<Q>::zeros(matrix.rows(), matrix.cols());
    for ((i, wi), (j, wj), x) in entries {
        let (r, c) = (index(dst, *i, *wi)?, index(src, *j, *wj)?);
        expected[(r, c)] = expected[(r, c)].clone() + x.clone();
    }
    if expected.rows() != matrix.rows() || expected.cols() != matrix.cols() {
        return Err("shape mismatch".into());
    }
    for r in 0..matrix.rows() {
        for c in 0..matrix.cols() {
            if expected[(r, c)] != matrix[(r, c)] {
                return Err(format!(
                    "entry ({r}, {c}): oracle {:?}, library {:?}",
                    expected[(r, c)],
                    matrix[(r, c)]
                ));
            }
        }
    }
    Ok(())
}
