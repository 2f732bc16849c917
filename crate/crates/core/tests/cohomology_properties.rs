mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use spectral_pencil::algebra::{BiPoly, CMatrix, GaussRat, Scalar, ToleranceConfig};
use spectral_pencil::cohomology::{
    hilbert_polynomial, monad_cohomology, p1_splitting_type, rank_theorem_check, sheaf_cohomology, theorem1_check,
    HilbertPolynomial, MonadComplex, Twist,
};
use spectral_pencil::pencil::Quadruple;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

/// `P·E_r·Q` with `E_r` the rank-`r` coordinate projection and `P`, `Q`
/// invertible, so the rank is `r` for every draw (products of random
/// factors can drop rank when an entry comes out zero).
fn of_rank(rng: &mut impl Rng, rows: usize, cols: usize, r: usize) -> CMatrix<GaussRat> {
    let e = CMatrix::from_fn(rows, cols, |i, j| GaussRat::from_int((i == j && i < r) as i64));
    &(&exact_group_element(rng, rows) * &e) * &exact_group_element(rng, cols)
}

/// A random curve of bidegree `(k, l)` and its Koszul resolution
/// `O(−k, −l) → O`.
fn koszul(rng: &mut impl Rng, k: usize, l: usize) -> MonadComplex<GaussRat> {
    let mut terms = Vec::new();
    for i in 0..=k {
        for j in 0..=l {
            terms.push((i, j, exact_entry(rng, 9, 1)));
        }
    }
    // keep the corner coefficients nonzero so the bidegree is exact
    terms.push((k, l, GaussRat::from_int(1)));
    terms.push((0, 0, GaussRat::from_int(1)));
    let p = BiPoly::from_terms(&terms);
    MonadComplex::new(
        &[(Twist::new(-(k as i64), -(l as i64)), 1)],
        &[(Twist::new(0, 0), 1)],
        CMatrix::from_vec(1, 1, vec![p]),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generic_sheaves_are_acyclic((k, l, seed) in (1usize..=3, 1usize..=3, any::<u64>())) {
        let q = exact_quadruple(&mut rng(seed), k, l);
        prop_assert_eq!(sheaf_cohomology(&q, Twist::new(0, 0), &tol()).unwrap(), (0, 0));
    }

    #[test]
    fn hilbert_polynomial_is_lx_plus_ky((k, l, seed) in (1usize..=2, 1usize..=3, any::<u64>())) {
        let q = exact_quadruple(&mut rng(seed), k, l);
        let expected = HilbertPolynomial { x_coeff: l as i64, y_coeff: k as i64, constant: 0 };
        prop_assert_eq!(hilbert_polynomial(&q, &tol()).unwrap(), expected);
    }

    #[test]
    fn curve_genus((k, l, seed) in (1usize..=4, 1usize..=4, any::<u64>())) {
        let c = koszul(&mut rng(seed), k, l);
        let d = monad_cohomology(&c, Twist::new(0, 0), &tol()).unwrap();
        prop_assert_eq!((d.h0, d.h1), (1, (k - 1) * (l - 1)));
    }

    /// Mixed full-rank and deficient `F`, `G` with `k ≤ l`.
    #[test]
    fn rank_equivalence((k, extra, rf, rg, seed) in (1usize..=3, 0usize..=1, 0usize..=3, 0usize..=3, any::<u64>())) {
        let l = k + extra;
        let (rf, rg) = (rf.min(k), rg.min(k));
        let mut r = rng(seed);
        let q = Quadruple::new(
            exact_matrix(&mut r, k, k),
            exact_matrix(&mut r, l, l),
            of_rank(&mut r, k, l, rf),
            of_rank(&mut r, l, k, rg),
        ).unwrap();
        let report = rank_theorem_check(&q, &tol()).unwrap();
        prop_assert_eq!((report.rank_f, report.rank_g), (rf, rg));
        prop_assert!(report.equivalence_holds);
        prop_assert!(report.g_pairing_holds && report.f_pairing_holds);
        prop_assert!(report.w1_route_agrees && report.w2_route_agrees);
        let t1 = theorem1_check(&q, &tol()).unwrap();
        prop_assert!(t1.agrees_with_rank_theorem);
        prop_assert_eq!(t1.chi_l, k as i64);
    }

    /// Kronecker blocks `O(e)`, torsion points and free rows, hidden by
    /// random constant changes of basis.
    #[test]
    fn splitting_of_known_sums(
        degrees in proptest::collection::vec(1usize..=3, 0..=2),
        free in 0usize..=2,
        torsion in 0usize..=2,
        seed in any::<u64>(),
    ) {
        prop_assume!(!degrees.is_empty() || free + torsion > 0);
        let mut r = rng(seed);
        let m: usize = degrees.iter().sum::<usize>() + torsion;
        let n: usize = degrees.iter().map(|e| e + 1).sum::<usize>() + torsion + free;
        let mut c0 = CMatrix::zeros(n, m);
        let mut c1 = CMatrix::zeros(n, m);
        let (mut row, mut col) = (0, 0);
        for &e in &degrees {
            for j in 0..e {
                c0[(row + j, col + j)] = GaussRat::from_int(1);
                c1[(row + j + 1, col + j)] = GaussRat::from_int(1);
            }
            row += e + 1;
            col += e;
        }
        for _ in 0..torsion {
            c0[(row, col)] = exact_entry(&mut r, 5, 2);
            c1[(row, col)] = GaussRat::from_int(-1);
            row += 1;
            col += 1;
        }
        let (p, s) = (exact_group_element(&mut r, n), exact_group_element(&mut r, m));
        let (c0, c1) = (&(&p * &c0) * &s, &(&p * &c1) * &s);
        let split = p1_splitting_type(&c0, &c1, &tol()).unwrap();
        let mut expected: Vec<i64> = degrees.iter().map(|&e| e as i64).collect();
        expected.extend(std::iter::repeat_n(0, free));
        expected.sort_unstable_by(|a, b| b.cmp(a));
        prop_assert_eq!(split.degrees, expected);
        prop_assert_eq!(split.torsion, torsion);
    }

    /// A generic `n × m` pencil has a balanced cokernel.
    #[test]
    fn generic_splitting_is_balanced((m, extra, seed) in (1usize..=3, 1usize..=3, any::<u64>())) {
        let mut r = rng(seed);
        let n = m + extra;
        let split = p1_splitting_type(&exact_matrix(&mut r, n, m), &exact_matrix(&mut r, n, m), &tol()).unwrap();
        prop_assert_eq!(split.rank(), extra);
        prop_assert_eq!(split.degree(), m as i64);
        prop_assert_eq!(split.torsion, 0);
        let (hi, lo) = (split.degrees[0], *split.degrees.last().unwrap());
        prop_assert!(hi - lo <= 1);
    }
}

#[test]
fn float_backend_agrees_on_generic_cohomology() {
    for seed in 0..10u64 {
        let mut r = rng(seed);
        let (k, l) = (1 + seed as usize % 3, 1 + (seed as usize / 3) % 3);
        let q = exact_quadruple(&mut r, k, l);
        for t in [
            Twist::new(0, 0),
            Twist::new(-1, 1),
            Twist::new(1, -1),
            Twist::new(2, 1),
            Twist::new(-2, -1),
        ] {
            assert_eq!(
                sheaf_cohomology(&q, t, &tol()).unwrap(),
                sheaf_cohomology(&q.to_c64(), t, &tol()).unwrap(),
                "seed {seed}, twist {t:?}"
            );
        }
    }
}
