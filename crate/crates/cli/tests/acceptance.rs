//! Acceptance suite. Prints one `[PASS]` or `[FAIL]` line per criterion
//! and exits nonzero if any criterion fails.

#[path = "support/cech_oracle.rs"]
mod cech_oracle;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::Rng;
use spectral_pencil::algebra::{Backend, BiPoly, CMatrix, GaussRat, Scalar, ToleranceConfig, C64};
use spectral_pencil::cohomology::{induced_map, line_bundle_dims, Twist};
use spectral_pencil::loop_orbit::resolvent_form;
use spectral_pencil::pencil::{spectral_det, Quadruple};
use spectral_pencil_cli::gen::{self, Constraints, Sample};
use spectral_pencil_cli::suites::{run_suite, Suite, SuiteConfig, SuiteReport};

const SEED: u64 = 20240;

type Verdict = (bool, String);

type Criterion = (&'static str, fn() -> Verdict);

fn suite(s: Suite, trials: u64, backend: Backend) -> SuiteReport {
    let mut c = SuiteConfig::new(s, SEED, trials);
    c.backend = backend;
    run_suite(&c).unwrap_or_else(|e| panic!("{} did not run: {e}", s.name()))
}

fn tally(r: &SuiteReport) -> String {
    let failed: Vec<u64> = r.results.iter().filter(|t| !t.passed()).map(|t| t.index).collect();
    let mut s = format!("{} {}/{}", r.config.suite.name(), r.passed(), r.results.len());
    if !failed.is_empty() {
        s += &format!(" (failing trials {failed:?})");
    }
    for (k, v) in r.max_metrics() {
        s += &format!(", max {k} {v:.1e}");
    }
    for c in &r.checks {
        s += &format!(", {} {}", c.name, if c.pass { "ok" } else { "FAILED" });
    }
    s
}

fn acyclicity() -> Verdict {
    let start = Instant::now();
    let r = suite(Suite::Acyclicity, 200, Backend::Exact);
    let took = start.elapsed();
    let fast = took < Duration::from_secs(60);
    (
        r.all_pass() && fast,
        format!("{} in {:.1} s (limit 60 s)", tally(&r), took.as_secs_f64()),
    )
}

fn hilbert() -> Verdict {
    let r = suite(Suite::Hilbert, 100, Backend::Exact);
    (
        r.all_pass(),
        format!("{}, chi(F(x,y)) = l·x + k·y on {{-2..3}}²", tally(&r)),
    )
}

fn genus() -> Verdict {
    let r = suite(Suite::Genus, 50, Backend::Exact);
    (r.all_pass(), tally(&r))
}

fn rank_equivalence() -> Verdict {
    let ranks = suite(Suite::RankTheorem, 200, Backend::Exact);
    let thm = suite(Suite::Theorem1, 200, Backend::Exact);
    let deficient = ranks
        .results
        .iter()
        .filter_map(|t| t.outcome.as_ref())
        .filter(|o| o.detail["ranks_full"] == false)
        .count();
    (
        ranks.all_pass() && thm.all_pass() && ranks.results.len() == 200 && thm.results.len() == 200,
        format!(
            "{}; {}; {deficient} rank-deficient instances",
            tally(&ranks),
            tally(&thm)
        ),
    )
}

/// `det M(ζ, η)` against `det(X − ζ)·det(R(ζ) − η)` at 20 random points.
fn block_det_instance<S: Sample>(rng: &mut impl Rng) -> Result<f64, String> {
    let tol = ToleranceConfig::default();
    let (k, l) = (rng.random_range(1..=3), rng.random_range(1..=3));
    let q: Quadruple<S> = gen::quadruple(rng, k, l, &Constraints::default(), &tol).map_err(|e| e.to_string())?;
    let det = spectral_det(&q.embed()).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut points = 0;
    while points < 20 {
        let (zeta, eta) = (S::sample(rng), S::sample(rng));
        let Some(rz) = resolvent_form(&q, &zeta) else { continue };
        points += 1;
        let lhs = det.eval(&zeta, &eta);
        let rhs = (&q.x - &CMatrix::scalar(k, zeta)).det().map_err(|e| e.to_string())?
            * (&rz - &CMatrix::scalar(l, eta)).det().map_err(|e| e.to_string())?;
        match S::BACKEND {
            Backend::Exact if lhs != rhs => return Err(format!("k={k} l={l}: exact mismatch")),
            Backend::Exact => {}
            Backend::Float => {
                let scale = lhs.modulus().max(rhs.modulus()).max(f64::MIN_POSITIVE);
                worst = worst.max((lhs - rhs).modulus() / scale);
            }
        }
    }
    Ok(worst)
}

fn block_determinant() -> Verdict {
    let mut rng = gen::rng(SEED);
    let mut exact_ok = 0;
    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    for _ in 0..50 {
        match block_det_instance::<GaussRat>(&mut rng) {
            Ok(_) => exact_ok += 1,
            Err(e) => errors.push(e),
        }
    }
    let mut float_ok = 0;
    for _ in 0..50 {
        match block_det_instance::<C64>(&mut rng) {
            Ok(rel) if rel <= 1e-10 => {
                float_ok += 1;
                worst = worst.max(rel);
            }
            Ok(rel) => {
                worst = worst.max(rel);
                errors.push(format!("relative error {rel:e}"));
            }
            Err(e) => errors.push(e),
        }
    }
    (
        errors.is_empty(),
        format!(
            "exact 50 instances x 20 points {exact_ok}/50 equal, float {float_ok}/50 with max relative error {worst:.1e} (limit 1e-10){}",
            if errors.is_empty() { String::new() } else { format!("; first error: {}", errors[0]) }
        ),
    )
}

fn poisson_axioms() -> Verdict {
    let exact = suite(Suite::Jacobi, 50, Backend::Exact);
    let float = suite(Suite::Jacobi, 50, Backend::Float);
    (
        exact.all_pass() && float.all_pass(),
        format!("exact: {}; float: {}", tally(&exact), tally(&float)),
    )
}

fn leaf_commutation() -> Verdict {
    let r = suite(Suite::LeafCommute, 50, Backend::Float);
    (r.all_pass(), format!("{} (limit 1e-9)", tally(&r)))
}

fn isospectral_flow() -> Verdict {
    let r = suite(Suite::Isospectral, 50, Backend::Float);
    let closed = r.checks.iter().any(|c| c.name == "closed_form_k1_l1");
    (r.all_pass() && closed, format!("dt 1e-3, T 1: {}", tally(&r)))
}

fn random_twist(rng: &mut impl Rng) -> Twist {
    Twist::new(rng.random_range(-4..=4), rng.random_range(-4..=4))
}

/// Random entries of bidegree at most `dst − src`, zero where that is
/// negative.
fn random_entries(rng: &mut impl Rng, src: &[Twist], dst: &[Twist]) -> CMatrix<BiPoly<GaussRat>> {
    CMatrix::from_fn(dst.len(), src.len(), |i, j| {
        let room = dst[i].minus(src[j]);
        if room.p < 0 || room.q < 0 {
            return BiPoly::zero();
        }
        let mut terms = Vec::new();
        for a in 0..=room.p as usize {
            for b in 0..=room.q as usize {
                if rng.random_bool(0.7) {
                    terms.push((a, b, GaussRat::from_int(rng.random_range(-5..=5))));
                }
            }
        }
        BiPoly::from_terms(&terms)
    })
}

fn cech_oracle() -> Verdict {
    let mut dims_ok = 0;
    let mut problems = Vec::new();
    for p in -4..=4 {
        for q in -4..=4 {
            let t = Twist::new(p, q);
            if cech_oracle::dims(t) == line_bundle_dims(t) {
                dims_ok += 1;
            } else {
                problems.push(format!("dims of O({p}, {q})"));
            }
        }
    }

    let mut rng = gen::rng(SEED);
    let mut maps_ok = 0;
    let mut nonzero = 0;
    for m in 0..50 {
        let src: Vec<Twist> = (0..rng.random_range(1..=2)).map(|_| random_twist(&mut rng)).collect();
        // targets above the first source, so most entries are nonzero
        let dst: Vec<Twist> = (0..rng.random_range(1..=2))
            .map(|_| {
                let mut lift = |x: i64| (x + rng.random_range(0..=3)).min(4);
                Twist::new(lift(src[0].p), lift(src[0].q))
            })
            .collect();
        let entries = random_entries(&mut rng, &src, &dst);
        let mut ok = true;
        for d in 0..=2u8 {
            let lib = match induced_map(&entries, &src, &dst, d) {
                Ok(m) => m,
                Err(e) => {
                    problems.push(format!("map {m}, H^{d}: {e}"));
                    ok = false;
                    continue;
                }
            };
            let oracle = cech_oracle::induced(&entries, &src, &dst, d as usize);
            nonzero += oracle.len();
            if let Err(e) = cech_oracle::compare(&lib, &oracle, &src, &dst, d) {
                problems.push(format!("map {m}, H^{d}: {e}"));
                ok = false;
            }
        }
        maps_ok += ok as usize;
    }
    (
        problems.is_empty(),
        format!(
            "line bundle dims {dims_ok}/81, induced maps {maps_ok}/50 in degrees 0..2 ({nonzero} nonzero entries){}",
            problems
                .first()
                .map(|p| format!("; first problem: {p}"))
                .unwrap_or_default()
        ),
    )
}

fn orbit() -> Verdict {
    let exact = suite(Suite::Roundtrip, 50, Backend::Exact);
    let float = suite(Suite::Roundtrip, 50, Backend::Float);
    (
        exact.all_pass() && float.all_pass(),
        format!("exact: {}; float: {}", tally(&exact), tally(&float)),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("acyclicity", acyclicity),
        ("hilbert polynomial", hilbert),
        ("genus", genus),
        ("rank equivalence", rank_equivalence),
        ("block determinant", block_determinant),
        ("poisson axioms", poisson_axioms),
        ("leaf commutation", leaf_commutation),
        ("isospectral flow", isospectral_flow),
        ("cech oracle", cech_oracle),
        ("orbit", orbit),
    ];
    let mut failures = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        });
        failures += !pass as usize;
        println!(
            "[{}] {}. {name}: {detail} [{:.1} s]",
            if pass { "PASS" } else { "FAIL" },
            n + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
