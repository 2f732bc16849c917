//! Named property suites behind `verify`. Trials run in parallel and are
//! merged by index, so a report depends only on its configuration.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};

use clap::ValueEnum;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use spectral_pencil::algebra::{encode_f64, Backend, CMatrix, GaussRat, Scalar, ToleranceConfig, C64};
use spectral_pencil::cohomology::{
    hilbert_polynomial, monad_cohomology, rank_theorem_check, sheaf_cohomology, theorem1_check, HilbertPolynomial,
    MonadComplex, Twist,
};
use spectral_pencil::json::{encode_bipoly, encode_rank_theorem, encode_theorem1};
use spectral_pencil::loop_orbit::{
    boundary_data, from_rational_map, orbit_invariants, to_rational_map, Direction, RationalMap,
};
use spectral_pencil::pencil::{act_k, Quadruple};
use spectral_pencil::poisson::numeric::interpolated_gradient;
use spectral_pencil::poisson::{
    bracket, bracket_of_gradients, flow, leaf_bracket_of_gradients, phase_speed, spectral_gradients,
    spectral_hamiltonian, Block, Coordinate, FlowConfig, FlowMode, Hamiltonian, LinearCombination,
};

use crate::error::{CliError, CliResult};
use crate::gen::{self, Constraints, Sample};

pub const THREADS_ENV: &str = "SPECTRAL_PENCIL_THREADS";

/// Float thresholds for the bracket axioms.
pub const ANTISYMMETRY_TOL: f64 = 1e-9;
pub const LEIBNIZ_TOL: f64 = 1e-9;
pub const JACOBI_TOL: f64 = 1e-8;
pub const LEAF_COMMUTE_TOL: f64 = 1e-9;
pub const CASIMIR_TOL: f64 = 1e-8;
pub const CLOSED_FORM_TOL: f64 = 1e-8;
pub const ROUNDTRIP_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Acyclicity,
    Hilbert,
    Genus,
    RankTheorem,
    Theorem1,
    Jacobi,
    LeafCommute,
    Isospectral,
    Roundtrip,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Acyclicity => "acyclicity",
            Suite::Hilbert => "hilbert",
            Suite::Genus => "genus",
            Suite::RankTheorem => "rank-theorem",
            Suite::Theorem1 => "theorem1",
            Suite::Jacobi => "jacobi",
            Suite::LeafCommute => "leaf-commute",
            Suite::Isospectral => "isospectral",
            Suite::Roundtrip => "roundtrip",
        }
    }

    /// Flows integrate in floating point only; everything else defaults
    /// to exact arithmetic.
    pub fn default_backend(self) -> Backend {
        match self {
            Suite::Isospectral => Backend::Float,
            _ => Backend::Exact,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub seed: u64,
    /// Index of the first trial; `--start i --trials 1` reruns trial `i`.
    pub start: u64,
    pub trials: u64,
    pub backend: Backend,
    pub tol: ToleranceConfig,
    pub dt: f64,
    pub horizon: f64,
}

impl SuiteConfig {
    pub fn new(suite: Suite, seed: u64, trials: u64) -> Self {
        Self {
            suite,
            seed,
            start: 0,
            trials,
            backend: suite.default_backend(),
            tol: ToleranceConfig::default(),
            dt: 1e-3,
            horizon: 1.0,
        }
    }
}

/// What one trial measured.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub k: usize,
    pub l: usize,
    pub pass: bool,
    /// Named magnitudes, maximised over the run in the report.
    pub metrics: BTreeMap<String, f64>,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialResult {
    pub index: u64,
    pub seed: u64,
    pub outcome: Option<Outcome>,
    /// Error or panic message when the trial did not complete.
    pub error: Option<String>,
}

impl TrialResult {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.outcome.as_ref().is_some_and(|o| o.pass)
    }
}

/// A run-level check outside the random trials.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub results: Vec<TrialResult>,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.results.iter().filter(|r| r.passed()).count()
    }

    pub fn all_pass(&self) -> bool {
        self.passed() == self.results.len() && self.checks.iter().all(|c| c.pass)
    }

    /// Largest value of each metric over completed trials.
    pub fn max_metrics(&self) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        for o in self.results.iter().filter_map(|r| r.outcome.as_ref()) {
            for (name, &v) in &o.metrics {
                let slot = out.entry(name.clone()).or_insert(v);
                if v > *slot || v.is_nan() {
                    *slot = v;
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let c = &self.config;
        let base = format!(
            "spectral-pencil verify {} --seed {} --backend {}",
            c.suite.name(),
            c.seed,
            c.backend.as_str()
        );
        // only settings that differ from the defaults
        let defaults = SuiteConfig::new(c.suite, c.seed, c.trials);
        let mut extra = String::new();
        for (flag, value, default) in [
            ("--dt", c.dt, defaults.dt),
            ("--horizon", c.horizon, defaults.horizon),
            ("--tol-rank", c.tol.rank_rel_tol, defaults.tol.rank_rel_tol),
            ("--tol-drift", c.tol.flow_drift_tol, defaults.tol.flow_drift_tol),
        ] {
            if value != default {
                extra += &format!(" {flag} {value:e}");
            }
        }
        let failures: Vec<Value> = self
            .results
            .iter()
            .filter(|r| !r.passed())
            .map(|r| {
                let (k, l, detail) = match &r.outcome {
                    Some(o) => (json!(o.k), json!(o.l), o.detail.clone()),
                    None => (Value::Null, Value::Null, Value::Null),
                };
                json!({
                    "index": r.index,
                    "seed": r.seed,
                    "k": k,
                    "l": l,
                    "detail": detail,
                    "error": r.error,
                    "reproduce": format!("{base} --start {} --trials 1{extra}", r.index),
                })
            })
            .collect();
        let metrics: Map<String, Value> = self
            .max_metrics()
            .into_iter()
            .map(|(k, v)| (format!("max_{k}"), encode_f64(v)))
            .collect();
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|ch| json!({"name": ch.name, "pass": ch.pass, "detail": ch.detail}))
            .collect();
        json!({
            "kind": "verify_report",
            "suite": c.suite.name(),
            "backend": c.backend.as_str(),
            "seed": c.seed,
            "start": c.start,
            "trials": c.trials,
            "passed": self.passed(),
            "failed": self.results.len() - self.passed(),
            "pass": self.all_pass(),
            "metrics": metrics,
            "checks": checks,
            "failures": failures,
            "tolerances": {
                "rank_rel_tol": encode_f64(c.tol.rank_rel_tol),
                "eig_tol": encode_f64(c.tol.eig_tol),
                "flow_drift_tol": encode_f64(c.tol.flow_drift_tol),
            },
            "flow": {"dt": encode_f64(c.dt), "horizon": encode_f64(c.horizon)},
        })
    }
}

/// A pool capped by [`THREADS_ENV`] when it is set.
pub fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let n: usize = raw
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker threads: {e}")))
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        format!("panic: {s}")
    } else if let Some(s) = payload.downcast_ref::<String>() {
        format!("panic: {s}")
    } else {
        "panic".into()
    }
}

pub fn run_suite(config: &SuiteConfig) -> CliResult<SuiteReport> {
    config.tol.validate()?;
    if config.suite == Suite::Isospectral && config.backend == Backend::Exact {
        return Err(CliError::Usage(
            "the isospectral suite integrates on the float backend only".into(),
        ));
    }
    if !(config.dt > 0.0 && config.dt.is_finite() && config.horizon >= 0.0 && config.horizon.is_finite()) {
        return Err(CliError::Usage(format!(
            "need dt > 0 and horizon ≥ 0, got dt = {}, horizon = {}",
            config.dt, config.horizon
        )));
    }
    let end = config
        .start
        .checked_add(config.trials)
        .ok_or_else(|| CliError::Usage("start + trials overflows".into()))?;
    let pool = thread_pool()?;
    let results = pool.install(|| {
        (config.start..end)
            .into_par_iter()
            .map(|index| {
                let seed = gen::trial_seed(config.seed, index);
                let run = catch_unwind(AssertUnwindSafe(|| run_trial(config, &mut gen::rng(seed))));
                let (outcome, error) = match run {
                    Ok(Ok(o)) => (Some(o), None),
                    Ok(Err(e)) => (None, Some(e.to_string())),
                    Err(p) => (None, Some(panic_message(p))),
                };
                TrialResult {
                    index,
                    seed,
                    outcome,
                    error,
                }
            })
            .collect()
    });
    let checks = match config.suite {
        Suite::Isospectral => vec![closed_form_check(config)],
        Suite::Jacobi => vec![canonical_pair_check()],
        _ => Vec::new(),
    };
    Ok(SuiteReport {
        config: config.clone(),
        results,
        checks,
    })
}

fn run_trial(c: &SuiteConfig, rng: &mut ChaCha8Rng) -> CliResult<Outcome> {
    match c.backend {
        Backend::Exact => trial::<GaussRat>(c, rng),
        Backend::Float => trial::<C64>(c, rng),
    }
}

fn trial<S: Sample>(c: &SuiteConfig, rng: &mut ChaCha8Rng) -> CliResult<Outcome> {
    match c.suite {
        Suite::Acyclicity => acyclicity::<S>(c, rng),
        Suite::Hilbert => hilbert::<S>(c, rng),
        Suite::Genus => genus::<S>(c, rng),
        Suite::RankTheorem => rank_theorem::<S>(c, rng),
        Suite::Theorem1 => theorem1::<S>(c, rng),
        Suite::Jacobi => jacobi::<S>(rng),
        Suite::LeafCommute => leaf_commute::<S>(rng),
        Suite::Isospectral => isospectral(c, rng),
        Suite::Roundtrip => roundtrip::<S>(c, rng),
    }
}

fn shape(rng: &mut impl Rng, max: usize) -> (usize, usize) {
    (rng.random_range(1..=max), rng.random_range(1..=max))
}

fn generic<S: Sample>(c: &SuiteConfig, rng: &mut ChaCha8Rng, max: usize) -> CliResult<Quadruple<S>> {
    let (k, l) = shape(rng, max);
    gen::quadruple(rng, k, l, &Constraints::default(), &c.tol)
}

fn metrics(items: &[(&str, f64)]) -> BTreeMap<String, f64> {
    items.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Zero on the exact backend, `≤ tol` on floats.
fn small<S: Scalar>(v: &S, tol: f64) -> bool {
    match S::BACKEND {
        Backend::Exact => v.is_zero(),
        Backend::Float => v.modulus() <= tol,
    }
}

fn acyclicity<S: Sample>(c: &SuiteConfig, rng: &mut ChaCha8Rng) -> CliResult<Outcome> {
    let q: Quadruple<S> = generic(c, rng, 3)?;
    let (h0, h1) = sheaf_cohomology(&q, Twist::new(0, 0), &c.tol)?;
    Ok(Outcome {
        k: q.k(),
        l: q.l(),
        pass: h0 == 0 && h1 == 0,
        metrics: BTreeMap::new(),
        detail: json!({"h0": h0, "h1": h1}),
    })
}

fn hilbert<S: Sample>(c: &SuiteConfig, rng: &mut ChaCha8Rng) -> CliResult<Outcome> {
    let q: Quadruple<S> = generic(c, rng, 3)?;
    let (k, l) = (q.k(), q.l());
    // the fit already checks linearity and the closed form on the grid
    let h = hilbert_polynomial(&q, &c.tol)?;
    let expected = HilbertPolynomial {
        x_coeff: l as i64,
        y_coeff: k as i64,
        constant: 0,
    };
    Ok(Outcome {
        k,
        l,
        pass: h == expected,
        metrics: BTreeMap::new(),
        detail: json!({"x": h.x_coeff, "y": h.y_coeff, "constant": h.constant}),
    })
}

/// A random curve of bidegree `(k, l)` through its Koszul resolution
/// `O(−k, −l) → O`.
fn genus<S: Sample>(c: &SuiteConfig, rng: &mut ChaCha8Rng) -> CliResult<Outcome> {
    let (k, l) = shape(rng, 4);
    let curve = gen::curve::<S>(rng, k, l);
    let complex = MonadComplex::new(
        &[(Twist::new(-(k as i64), -(l as i64)), 1)],
        &[(Twist::new(0, 0), 1)],
        CMatrix::from_vec(1, 1, vec![curve.clone()]),
    )?;
    let d = monad_cohomology(&complex, Twist::new(0, 0), &c.tol)?;
    Ok(Outcome {
        k,
        l,
        pass: d.h0 == 1 && d.h1 == (k - 1) * (l - 1),
        metrics: BTreeMap::new(),
        detail: json!({"curve": encode_bipoly(&curve), "h0": d.h0, "h1": d.h1, "genus": (k - 1) * (l - 1)}),
    })
}

/// `k ≤ l ≤ 4` with ranks of `F` and `G` drawn from `0..=k`.
fn mixed_rank<S: Sample>(c: &SuiteConfig, rng: &mut ChaCha8Rng) -> CliResult<(Quadruple<S>, usize, usize)> {
    let k = rng.random_range(1..=4);
    let l = rng.random_range(k..=4);
    let (rf, rg) = (rng.random_range(0..=k), rng.random_range(0..=k));
    let constraints = Constraints {
        rank_f: Some(rf),
        rank_g: Some(rg),
        ..Constraints::default()
    };
    Ok((gen::quadruple(rng, k, l, &constraints, &c.tol)?, rf, rg))
}

fn rank_theorem<S: Sample>(c: &SuiteConfig, rng: &mut ChaCha8Rng) -> CliResult<Outcome> {
    let (q, rf, rg) = mixed_rank::<S>(c, rng)?;
    let r = rank_theorem_check(&q, &c.tol)?;
    let pass = (r.rank_f, r.rank_g) == (rf, rg)
        && r.equivalence_holds
        && r.g_pairing_holds
        && r.f_pairing_holds
        && r.w1_route_agrees
        && r.w2_route_agrees;
    Ok(Outcome {
        k: q.k(),
        l: q.l(),
        pass,
        metrics: BTreeMap::new(),
        detail: encode_rank_theorem(&r),
    })
}

fn theorem1<S: Sample>(c: &SuiteConfig, rng: &mut ChaCha8Rng) -> CliResult<Outcome> {
    let (q, _, _) = mixed_rank::<S>(c, rng)?;
    let t = theorem1_check(&q, &c.tol)?;
    Ok(Outcome {
        k: q.k(),
        l: q.l(),
        pass: t.agrees_with_rank_theorem && t.chi_l == q.k() as i64,
        metrics: BTreeMap::new(),
        detail: encode_theorem1(&t),
    })
}

/// Node spacing for differentiating brackets by interpolation. Any step is
/// exact on the exact backend; on floats a wide step keeps roundoff in the
/// linear coefficient small (200 float trials: Leibniz error 5e-11 at
/// step 2 against 6e-10 at step 1/4).
fn jacobi_step<S: Scalar>() -> S {
    match S::BACKEND {
        Backend::Exact => S::one(),
        Backend::Float => S::from_int(2),
    }
}

/// Antisymmetry, Leibniz and Jacobi on three random quadratics.
fn jacobi<S: Sample>(rng: &mut ChaCha8Rng) -> CliResult<Outcome> {
    // exact heights grow quickly through the nested interpolation
    let max = match S::BACKEND {
        Backend::Exact => 2,
        Backend::Float => 3,
    };
    let (k, l) = shape(rng, max);
    let q: Quadruple<S> = gen::quadruple(rng, k, l, &Constraints::default(), &ToleranceConfig::default())?;
    let step = jacobi_step::<S>();
    let hs: Vec<LinearCombination<S>> = (0..3).map(|_| gen::quadratic(rng, k, l)).collect();
    let (f, g, h) = (&hs[0], &hs[1], &hs[2]);

    let fg = bracket(f, g, &q);
    let anti = fg.clone() + bracket(g, f, &q);

    // {f, g·h} = {f, g}·h + g·{f, h}, with the product differentiated
    // numerically so the check does not reuse the product rule
    let gh = interpolated_gradient(|p| g.value(p) * h.value(p), &q, 4, step.clone());
    let leibniz =
        bracket_of_gradients(&q, &f.gradient(&q), &gh) - (fg.clone() * h.value(&q) + g.value(&q) * bracket(f, h, &q));

    // brackets of quadratics are cubic
    let outer = |a: &dyn Hamiltonian<S>, b: &dyn Hamiltonian<S>, c: &dyn Hamiltonian<S>| {
        let inner = interpolated_gradient(|p| bracket(b, c, p), &q, 3, step.clone());
        bracket_of_gradients(&q, &a.gradient(&q), &inner)
    };
    let jacobi = outer(f, g, h) + outer(g, h, f) + outer(h, f, g);

    Ok(Outcome {
        k,
        l,
        pass: small(&anti, ANTISYMMETRY_TOL) && small(&leibniz, LEIBNIZ_TOL) && small(&jacobi, JACOBI_TOL),
        metrics: metrics(&[
            ("antisymmetry", anti.modulus()),
            ("leibniz", leibniz.modulus()),
            ("jacobi", jacobi.modulus()),
        ]),
        detail: json!({"bracket_fg": encode_f64(fg.modulus())}),
    })
}

/// `{F₁₁, G₁₁} = 1`, exactly.
fn canonical_pair_check() -> Check {
    let one = || CMatrix::scalar(1, GaussRat::from_int(1));
    let q = Quadruple::new(one(), one(), one(), one()).expect("1×1 blocks");
    let v = bracket(&Coordinate::new(Block::F, 0, 0), &Coordinate::new(Block::G, 0, 0), &q);
    Check {
        name: "canonical_pair",
        pass: v == GaussRat::from_int(1),
        detail: json!({"bracket": v.display()}),
    }
}

fn leaf_commute<S: Sample>(rng: &mut ChaCha8Rng) -> CliResult<Outcome> {
    let (k, l) = shape(rng, 3);
    let q: Quadruple<S> = gen::quadruple(rng, k, l, &Constraints::default(), &ToleranceConfig::default())?;
    let (_, grads) = spectral_gradients(&q);
    let flat: Vec<_> = grads.iter().flatten().collect();
    let mut worst = 0.0f64;
    let mut pass = true;
    for (i, a) in flat.iter().enumerate() {
        for b in &flat[i + 1..] {
            let v = leaf_bracket_of_gradients(a, b);
            worst = worst.max(v.modulus());
            pass &= small(&v, LEAF_COMMUTE_TOL);
        }
    }
    Ok(Outcome {
        k,
        l,
        pass,
        metrics: metrics(&[("leaf_bracket", worst)]),
        detail: json!({"pairs": flat.len() * flat.len().saturating_sub(1) / 2}),
    })
}

/// `H_ab` divided by its initial phase speed (when that exceeds 1): the
/// same orbit, traversed at a rate the fixed step can resolve.
pub fn unit_speed_hamiltonian(q: &Quadruple<C64>, a: usize, b: usize) -> (f64, LinearCombination<C64>) {
    let raw = spectral_hamiltonian(a, b);
    let speed = phase_speed(q, &raw, FlowMode::Leaf).max(1.0);
    let h = LinearCombination::new(vec![(
        C64::new(1.0 / speed, 0.0),
        Box::new(raw) as Box<dyn Hamiltonian<C64>>,
    )]);
    (speed, h)
}

fn isospectral(c: &SuiteConfig, rng: &mut ChaCha8Rng) -> CliResult<Outcome> {
    let (k, l) = shape(rng, 3);
    let q: Quadruple<C64> = gen::quadruple(rng, k, l, &Constraints::default(), &c.tol)?;
    let (a, b) = (rng.random_range(0..=k), rng.random_range(0..=l));
    let (speed, h) = unit_speed_hamiltonian(&q, a, b);
    let config = FlowConfig {
        dt: c.dt,
        horizon: c.horizon,
        mode: FlowMode::Leaf,
    };
    let traj = flow(&q, &h, &config, &c.tol)?;
    let (spectral, casimir) = (traj.max_spectral_drift(), traj.max_casimir_drift());
    let frozen = traj.last().q.x == q.x && traj.last().q.y == q.y;
    Ok(Outcome {
        k,
        l,
        pass: spectral <= c.tol.flow_drift_tol && casimir <= CASIMIR_TOL && frozen,
        metrics: metrics(&[
            ("spectral_drift", spectral),
            ("casimir_drift", casimir),
            ("hamiltonian_drift", traj.max_hamiltonian_drift()),
        ]),
        detail: json!({"hamiltonian": [a, b], "speed_scale": encode_f64(speed), "xy_frozen": frozen}),
    })
}

/// `X = Y = 0`, `F = G = 1` under `H₀₀ = −FG`: `f = e^{−t}`, `g = e^t`.
fn closed_form_check(c: &SuiteConfig) -> Check {
    let s = |v: f64| CMatrix::scalar(1, C64::new(v, 0.0));
    let q = Quadruple::new(s(0.0), s(0.0), s(1.0), s(1.0)).expect("1×1 blocks");
    let config = FlowConfig {
        dt: c.dt,
        horizon: c.horizon,
        mode: FlowMode::Leaf,
    };
    match flow(&q, &spectral_hamiltonian(0, 0), &config, &c.tol) {
        Ok(traj) => {
            let err = traj
                .points
                .iter()
                .map(|p| {
                    let f = (p.q.f[(0, 0)] - C64::new((-p.t).exp(), 0.0)).norm();
                    let g = (p.q.g[(0, 0)] - C64::new(p.t.exp(), 0.0)).norm();
                    f.max(g)
                })
                .fold(0.0, f64::max);
            Check {
                name: "closed_form_k1_l1",
                pass: err <= CLOSED_FORM_TOL,
                detail: json!({"max_error": encode_f64(err)}),
            }
        }
        Err(e) => Check {
            name: "closed_form_k1_l1",
            pass: false,
            detail: json!({"error": e.to_string()}),
        },
    }
}

/// A partition of `n` into parts of size 1 or 2.
fn multiplicities(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut left = n;
    while left > 0 {
        let m = if left >= 2 && rng.random_bool(0.3) { 2 } else { 1 };
        out.push(m);
        left -= m;
    }
    out
}

/// Largest relative difference at five points `(a + bi)/4`, `|a|, |b| ≤ 12`.
fn map_distance<S: Scalar>(a: &RationalMap<S>, b: &RationalMap<S>, rng: &mut impl Rng) -> f64 {
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let z = S::from_parts_i64(rng.random_range(-12..=12), rng.random_range(-12..=12)) / S::from_int(4);
        if let (Some(u), Some(v)) = (a.eval(&z), b.eval(&z)) {
            worst = worst.max((&u - &v).max_modulus() / u.max_modulus().max(1.0));
        }
    }
    worst
}

fn roundtrip<S: Sample>(c: &SuiteConfig, rng: &mut ChaCha8Rng) -> CliResult<Outcome> {
    let (k, l) = shape(rng, 3);
    // repeated eigenvalues do not survive rounding, so floats get simple spectra
    let exact = S::BACKEND == Backend::Exact;
    let spectrum = |rng: &mut ChaCha8Rng, n: usize| if exact { multiplicities(rng, n) } else { vec![1; n] };
    let constraints = Constraints {
        x_multiplicities: Some(spectrum(rng, k)),
        y_multiplicities: Some(spectrum(rng, l)),
        ..Constraints::default()
    };
    let q: Quadruple<S> = gen::quadruple(rng, k, l, &constraints, &c.tol)?;

    let map = to_rational_map(&q, &c.tol)?;
    let again = to_rational_map(&from_rational_map(&map, &c.tol), &c.tol)?;
    let round_error = map_distance(&map, &again, rng);
    let round_ok = if exact {
        again == map
    } else {
        round_error <= ROUNDTRIP_TOL
    };

    let spec = orbit_invariants(&map, &c.tol)?;
    let gauge = |rng: &mut ChaCha8Rng, n: usize| {
        if exact {
            gen::group_element::<S>(rng, n)
        } else {
            gen::near_identity::<S>(rng, n)
        }
    };
    let (g, h) = (gauge(rng, k), gauge(rng, l));
    let moved = act_k(&q, &g, &h)?;
    let moved_spec = orbit_invariants(&to_rational_map(&moved, &c.tol)?, &c.tol)?;
    let gauge_ok = if exact {
        moved_spec == spec
    } else {
        spec.agrees(&moved_spec, 1e3 * c.tol.eig_tol)
    };

    // diagonal X, Y with simple spectra: slopes are the diagonals of FG, GF
    let diag = |rng: &mut ChaCha8Rng, n: usize| loop {
        let v: Vec<S> = (0..n).map(|_| S::sample(rng)).collect();
        if v.iter()
            .enumerate()
            .all(|(i, a)| v[..i].iter().all(|b| !a.approx_eq(b, 1e-6)))
        {
            return CMatrix::diagonal(&v);
        }
    };
    let dq = Quadruple::new(diag(rng, k), diag(rng, l), q.f.clone(), q.g.clone())?;
    let (fg, gf) = (&dq.f * &dq.g, &dq.g * &dq.f);
    let bx = boundary_data(&dq, Direction::EtaInfinity, &c.tol)?;
    let by = boundary_data(&dq, Direction::ZetaInfinity, &c.tol)?;
    let slope_ok = |b: &spectral_pencil::loop_orbit::BoundaryData<S>, m: &CMatrix<S>, x: &CMatrix<S>| {
        b.points.iter().zip(&b.slopes).all(|((p, mult), s)| {
            let i = (0..m.rows()).find(|&i| x[(i, i)].approx_eq(p, ROUNDTRIP_TOL));
            *mult == 1
                && matches!((i, s), (Some(i), Some(s)) if s.len() == 1 && s[0].approx_eq(&m[(i, i)], ROUNDTRIP_TOL))
        }) && b.points.len() == m.rows()
    };
    let slopes_ok = slope_ok(&bx, &fg, &dq.x) && slope_ok(&by, &gf, &dq.y);

    Ok(Outcome {
        k,
        l,
        pass: round_ok && gauge_ok && slopes_ok,
        metrics: metrics(&[("roundtrip_error", round_error)]),
        detail: json!({
            "round_trip": round_ok,
            "gauge_invariant": gauge_ok,
            "slopes": slopes_ok,
            "x_multiplicities": constraints.x_multiplicities,
            "y_multiplicities": constraints.y_multiplicities,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_run(suite: Suite, trials: u64) -> SuiteReport {
        run_suite(&SuiteConfig::new(suite, 3, trials)).unwrap()
    }

    #[test]
    fn every_suite_passes_a_few_trials() {
        for suite in Suite::value_variants() {
            let report = small_run(*suite, 3);
            assert!(report.all_pass(), "{}: {:#}", suite.name(), report.to_json());
        }
    }

    #[test]
    fn reports_do_not_depend_on_scheduling() {
        let a = small_run(Suite::Acyclicity, 6).to_json();
        let b = small_run(Suite::Acyclicity, 6).to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn start_offset_reruns_a_single_trial() {
        let full = small_run(Suite::Hilbert, 4);
        let mut config = SuiteConfig::new(Suite::Hilbert, 3, 1);
        config.start = 2;
        let one = run_suite(&config).unwrap();
        assert_eq!(one.results[0], full.results[2]);
    }

    #[test]
    fn exact_isospectral_is_rejected() {
        let mut config = SuiteConfig::new(Suite::Isospectral, 1, 1);
        config.backend = Backend::Exact;
        assert_eq!(run_suite(&config).unwrap_err().exit_code(), crate::error::EXIT_USAGE);
    }
}
