mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use spectral_pencil::algebra::{CMatrix, GaussRat, Scalar, ToleranceConfig, C64};
use spectral_pencil::loop_orbit::{
    boundary_data, free_properness_check, from_rational_map, orbit_invariants, to_rational_map, Direction, RationalMap,
};
use spectral_pencil::pencil::{act_k, spectral_det, Quadruple};

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

/// `P·diag(d)·P⁻¹` with the given integer eigenvalues.
fn with_spectrum(rng: &mut impl Rng, eigenvalues: &[i64]) -> CMatrix<GaussRat> {
    let p = exact_group_element(rng, eigenvalues.len());
    let d = CMatrix::diagonal(&eigenvalues.iter().map(|&e| GaussRat::from_int(e)).collect::<Vec<_>>());
    &(&p * &d) * &p.inverse().unwrap()
}

/// Distinct eigenvalues for `X`, repeats allowed in blocks of `mult`.
fn spectrum(rng: &mut impl Rng, k: usize, mult: usize) -> Vec<i64> {
    let mut out = Vec::new();
    let mut next = rng.random_range(-4..=0);
    while out.len() < k {
        for _ in 0..mult.min(k - out.len()) {
            out.push(next);
        }
        next += rng.random_range(1..=3);
    }
    out
}

fn semisimple_quadruple(rng: &mut impl Rng, k: usize, l: usize, mult: usize) -> Quadruple<GaussRat> {
    let xs = spectrum(rng, k, mult);
    let ys = spectrum(rng, l, 1);
    Quadruple::new(
        with_spectrum(rng, &xs),
        with_spectrum(rng, &ys),
        exact_matrix(rng, k, l),
        exact_matrix(rng, l, k),
    )
    .unwrap()
}

fn random_rational_map(rng: &mut impl Rng, l: usize, poles: usize) -> RationalMap<GaussRat> {
    let ps: Vec<GaussRat> = (0..poles)
        .map(|i| GaussRat::from_parts_i64(2 * i as i64 - 3, i as i64 % 2))
        .collect();
    let residues = (0..poles)
        .map(|_| {
            let r = rng.random_range(1..=l);
            &exact_matrix(rng, l, r) * &exact_matrix(rng, r, l)
        })
        .collect();
    RationalMap::new(exact_matrix(rng, l, l), ps, residues).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rational_map_round_trip((l, poles, seed) in (1usize..=3, 0usize..=3, any::<u64>())) {
        let mut r = rng(seed);
        let map = random_rational_map(&mut r, l, poles);
        let q = from_rational_map(&map, &tol());
        prop_assert_eq!(q.k(), map.residue_ranks(&tol()).iter().sum::<usize>());
        prop_assert!(free_properness_check(&q, &tol()).unwrap());
        prop_assert_eq!(to_rational_map(&q, &tol()).unwrap(), map);
    }

    #[test]
    fn quadruple_round_trip_preserves_r_and_det((k, l, mult, seed) in (1usize..=3, 1usize..=3, 1usize..=2, any::<u64>())) {
        let mut r = rng(seed);
        let q = semisimple_quadruple(&mut r, k, l, mult);
        let map = to_rational_map(&q, &tol()).unwrap();
        let back = from_rational_map(&map, &tol());
        prop_assert_eq!(to_rational_map(&back, &tol()).unwrap(), map.clone());
        for _ in 0..5 {
            let z = exact_entry(&mut r, 9, 4);
            if let Some(v) = map.eval(&z) {
                prop_assert_eq!(Some(v), spectral_pencil::loop_orbit::resolvent_form(&q, &z));
            }
        }
        // generic F, G give full-rank residue blocks, so `back` has the same k
        if back.k() == k {
            prop_assert_eq!(spectral_det(&back.embed()).unwrap(), spectral_det(&q.embed()).unwrap());
        }
    }

    #[test]
    fn boundary_points_are_the_roots_of_det_x((k, l, mult, seed) in (1usize..=3, 1usize..=3, 1usize..=2, any::<u64>())) {
        let mut r = rng(seed);
        let q = semisimple_quadruple(&mut r, k, l, mult);
        let b = boundary_data(&q, Direction::EtaInfinity, &tol()).unwrap();
        prop_assert_eq!(b.points.iter().map(|(_, m)| m).sum::<usize>(), k);
        let roots = GaussRat::roots(&q.x.charpoly(), &tol()).unwrap();
        prop_assert_eq!(&b.points, &roots);
        for (slopes, (_, m)) in b.slopes.iter().zip(&b.points) {
            if let Some(s) = slopes {
                prop_assert_eq!(s.len(), *m);
            }
        }
        prop_assert!(b.charpoly_identity);
        let by = boundary_data(&q, Direction::ZetaInfinity, &tol()).unwrap();
        prop_assert_eq!(by.points.iter().map(|(_, m)| m).sum::<usize>(), l);
        prop_assert!(by.charpoly_identity);
    }
}

/// Fifty random gauges `(g, h)` leave the orbit data unchanged.
#[test]
fn orbit_spec_is_gauge_invariant() {
    let mut r = rng(11);
    let q = semisimple_quadruple(&mut r, 3, 3, 2);
    let spec = orbit_invariants(&to_rational_map(&q, &tol()).unwrap(), &tol()).unwrap();
    assert_eq!(spec.k(), 3);
    for trial in 0..50 {
        let (g, h) = (exact_group_element(&mut r, 3), exact_group_element(&mut r, 3));
        let moved = act_k(&q, &g, &h).unwrap();
        let other = orbit_invariants(&to_rational_map(&moved, &tol()).unwrap(), &tol()).unwrap();
        assert!(spec.agrees(&other, 0.0), "gauge {trial}");
        assert_eq!(other, spec, "gauge {trial}");
    }
}

/// With `X`, `Y` diagonal and simple, the slopes at `η = ∞` are the
/// diagonal entries of `FG` and those at `ζ = ∞` the diagonal of `GF`.
#[test]
fn simple_spectrum_slopes_are_diagonal_entries() {
    for seed in 0..20u64 {
        let mut r = rng(500 + seed);
        let (k, l) = (r.random_range(1..=3), r.random_range(1..=3));
        let xs: Vec<GaussRat> = spectrum(&mut r, k, 1).into_iter().map(GaussRat::from_int).collect();
        let ys: Vec<GaussRat> = spectrum(&mut r, l, 1).into_iter().map(GaussRat::from_int).collect();
        let q = Quadruple::new(
            CMatrix::diagonal(&xs),
            CMatrix::diagonal(&ys),
            exact_matrix(&mut r, k, l),
            exact_matrix(&mut r, l, k),
        )
        .unwrap();
        let (fg, gf) = (&q.f * &q.g, &q.g * &q.f);
        let bx = boundary_data(&q, Direction::EtaInfinity, &tol()).unwrap();
        let by = boundary_data(&q, Direction::ZetaInfinity, &tol()).unwrap();
        let want_x: Vec<_> = (0..k).map(|i| Some(vec![fg[(i, i)].clone()])).collect();
        let want_y: Vec<_> = (0..l).map(|j| Some(vec![gf[(j, j)].clone()])).collect();
        assert_eq!(bx.slopes, want_x, "seed {seed}");
        assert_eq!(by.slopes, want_y, "seed {seed}");
    }
}

/// Round trip on the float backend: `R` agrees at ten sample points to `1e-10`.
#[test]
fn float_round_trip() {
    for seed in 0..20u64 {
        let mut r = rng(700 + seed);
        let l = r.random_range(1..=3);
        let poles: Vec<C64> = (0..3).map(|_| normal(&mut r) * 3.0).collect();
        let residues = (0..3)
            .map(|_| {
                let rank = r.random_range(1..=l);
                &float_matrix(&mut r, l, rank) * &float_matrix(&mut r, rank, l)
            })
            .collect();
        let map = RationalMap::new(float_matrix(&mut r, l, l), poles, residues).unwrap();
        let back = to_rational_map(&from_rational_map(&map, &tol()), &tol()).unwrap();
        for _ in 0..10 {
            let z = normal(&mut r) * 2.0;
            let (a, b) = (map.eval(&z).unwrap(), back.eval(&z).unwrap());
            let rel = (&a - &b).max_modulus() / a.max_modulus().max(1.0);
            assert!(rel <= 1e-10, "seed {seed}: {rel:e}");
        }
    }
}
