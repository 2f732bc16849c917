//! Subcommands. Each returns its JSON document and whether every check
//! held; `run` maps that onto the exit-code contract.

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use spectral_pencil::algebra::{encode_f64, Backend, GaussRat, Scalar, ToleranceConfig, C64};
use spectral_pencil::cohomology::{
    hilbert_polynomial, rank_theorem_check, sheaf_cohomology, sheaf_cohomology_pencil, theorem1_check,
    HilbertPolynomial, Twist,
};
use spectral_pencil::json::{
    encode_bipurity, encode_boundary, encode_hilbert, encode_orbit_spec, encode_pencil, encode_quadruple,
    encode_rank_theorem, encode_rational_map, encode_scalar, encode_spectral_curve, encode_theorem1, parse_document,
    parse_quadruple, to_pretty_string, AnyBackend, Document,
};
use spectral_pencil::loop_orbit::{
    boundary_data, from_rational_map, orbit_invariants, to_rational_map, Direction, RationalMap,
};
use spectral_pencil::pencil::{
    bipurity_check, normalize, sample_curve, spectral_curve, CurveSample, Pencil, Quadruple,
};
use spectral_pencil::poisson::{flow, spectral_hamiltonian, FlowConfig, FlowMode, Hamiltonian, TracePolynomial};

use crate::error::{CliError, CliResult, EXIT_MATH, EXIT_PASS};
use crate::gen::{self, Constraints};
use crate::suites::{run_suite, unit_speed_hamiltonian, Suite, SuiteConfig};

#[derive(Debug, Parser)]
#[command(
    name = "spectral-pencil",
    version,
    about = "Matrix pencils, spectral curves and sheaf cohomology on P1 x P1"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a random quadruple.
    Gen(GenArgs),
    /// Run a named property suite over seeded random instances.
    Verify(VerifyArgs),
    /// Derived data for one instance: curve, cohomology, ranks, orbit.
    Inspect(InspectArgs),
    /// Spectral curve coefficients and real-ζ samples.
    Curve(CurveArgs),
    /// Integrate a Hamiltonian flow from one instance.
    Flow(FlowArgs),
}

#[derive(Debug, Args)]
pub struct Tolerances {
    /// Relative singular-value cutoff for numerical rank.
    #[arg(long)]
    pub tol_rank: Option<f64>,
    /// Largest admissible flow drift.
    #[arg(long)]
    pub tol_drift: Option<f64>,
}

impl Tolerances {
    pub fn config(&self) -> CliResult<ToleranceConfig> {
        let mut tol = ToleranceConfig::default();
        if let Some(r) = self.tol_rank {
            tol.rank_rel_tol = r;
        }
        if let Some(d) = self.tol_drift {
            tol.flow_drift_tol = d;
        }
        tol.validate()?;
        Ok(tol)
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "exact", value_parser = parse_backend)]
    pub backend: Backend,
    #[arg(short, long, default_value_t = 1)]
    pub k: usize,
    #[arg(short, long, default_value_t = 1)]
    pub l: usize,
    #[arg(long)]
    pub rank_f: Option<usize>,
    #[arg(long)]
    pub rank_g: Option<usize>,
    /// Diagonalizable X with these eigenvalue multiplicities, e.g. `2,1`.
    #[arg(long, value_delimiter = ',')]
    pub x_mult: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub y_mult: Option<Vec<usize>>,
    #[command(flatten)]
    pub tol: Tolerances,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub suite: Suite,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    /// First trial index.
    #[arg(long, default_value_t = 0)]
    pub start: u64,
    /// Defaults to float for `isospectral` and exact otherwise.
    #[arg(long, value_parser = parse_backend)]
    pub backend: Option<Backend>,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 1.0)]
    pub horizon: f64,
    #[command(flatten)]
    pub tol: Tolerances,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Input document; `-` reads standard input.
    #[arg(required_unless_present = "json", conflicts_with = "json")]
    pub input: Option<PathBuf>,
    /// Inline JSON instead of a file.
    #[arg(long)]
    pub json: Option<String>,
}

impl Input {
    pub fn read(&self) -> CliResult<String> {
        if let Some(text) = &self.json {
            return Ok(text.clone());
        }
        let path = self.input.as_deref().expect("clap enforces one input");
        if path == Path::new("-") {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|source| CliError::Io {
                    path: "<stdin>".into(),
                    source,
                })?;
            return Ok(text);
        }
        std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[command(flatten)]
    pub input: Input,
    /// Real ζ values at which to sample the curve.
    #[arg(
        long,
        value_delimiter = ',',
        allow_negative_numbers = true,
        default_value = "-2,-1,0,1,2"
    )]
    pub zetas: Vec<f64>,
    /// Also write the curve samples as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub tol: Tolerances,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(
        long,
        value_delimiter = ',',
        allow_negative_numbers = true,
        default_value = "-2,-1,0,1,2"
    )]
    pub zetas: Vec<f64>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Leaf,
    Full,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[command(flatten)]
    pub input: Input,
    /// `H:a,b` for the coefficient of ζ^a η^b in det M, or a trace
    /// polynomial such as `XX + 2*FG`.
    #[arg(long, default_value = "H:0,0")]
    pub hamiltonian: String,
    #[arg(long, value_enum, default_value_t = Mode::Leaf)]
    pub mode: Mode,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 1.0)]
    pub horizon: f64,
    /// Divide `H` by its initial phase speed when that exceeds 1.
    #[arg(long)]
    pub unit_speed: bool,
    /// Write the monitored trajectory as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub tol: Tolerances,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    s.parse()
}

/// Parses arguments, runs, prints diagnostics and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match run(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(command: &Command) -> CliResult<i32> {
    let (doc, pass, out) = match command {
        Command::Gen(a) => (cmd_gen(a)?, true, &a.out),
        Command::Verify(a) => {
            let (doc, pass) = cmd_verify(a)?;
            (doc, pass, &a.out)
        }
        Command::Inspect(a) => {
            let (doc, pass) = cmd_inspect(a)?;
            (doc, pass, &a.out)
        }
        Command::Curve(a) => (cmd_curve(a)?, true, &a.out),
        Command::Flow(a) => {
            let (doc, pass) = cmd_flow(a)?;
            (doc, pass, &a.out)
        }
    };
    emit(&to_pretty_string(&doc), out.as_deref())?;
    Ok(if pass { EXIT_PASS } else { EXIT_MATH })
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn cmd_gen(a: &GenArgs) -> CliResult<Value> {
    let tol = a.tol.config()?;
    let constraints = Constraints {
        rank_f: a.rank_f,
        rank_g: a.rank_g,
        x_multiplicities: a.x_mult.clone(),
        y_multiplicities: a.y_mult.clone(),
    };
    let mut rng = gen::rng(a.seed);
    Ok(match a.backend {
        Backend::Exact => encode_quadruple(&gen::quadruple::<GaussRat>(&mut rng, a.k, a.l, &constraints, &tol)?),
        Backend::Float => encode_quadruple(&gen::quadruple::<C64>(&mut rng, a.k, a.l, &constraints, &tol)?),
    })
}

pub fn cmd_verify(a: &VerifyArgs) -> CliResult<(Value, bool)> {
    let config = SuiteConfig {
        suite: a.suite,
        seed: a.seed,
        start: a.start,
        trials: a.trials,
        backend: a.backend.unwrap_or(a.suite.default_backend()),
        tol: a.tol.config()?,
        dt: a.dt,
        horizon: a.horizon,
    };
    let report = run_suite(&config)?;
    Ok((report.to_json(), report.all_pass()))
}

/// One named pass/fail entry of an inspect report.
fn check(name: &str, pass: bool) -> Value {
    json!({"name": name, "pass": pass})
}

fn unavailable(e: impl std::fmt::Display) -> Value {
    json!({"available": false, "reason": e.to_string()})
}

fn samples_json(s: &CurveSample) -> Value {
    Value::Array(
        s.slices
            .iter()
            .map(|slice| {
                json!({
                    "zeta": encode_scalar(&slice.zeta),
                    "etas": slice.etas.iter().map(encode_scalar).collect::<Vec<_>>(),
                    "degree_drop": slice.degree_drop,
                    "vertical_line": slice.vertical_line,
                })
            })
            .collect(),
    )
}

/// `(h⁰, h¹)` of `F(a, b)` for `a, b ∈ −2..=2`.
fn cohomology_table(
    h: impl Fn(Twist) -> spectral_pencil::Result<(usize, usize)>,
) -> CliResult<(Value, (usize, usize))> {
    let mut rows = Vec::new();
    let mut origin = (0, 0);
    for a in -2..=2 {
        for b in -2..=2 {
            let (h0, h1) = h(Twist::new(a, b))?;
            if (a, b) == (0, 0) {
                origin = (h0, h1);
            }
            rows.push(json!({"twist": [a, b], "h0": h0, "h1": h1}));
        }
    }
    Ok((Value::Array(rows), origin))
}

struct Report {
    sections: serde_json::Map<String, Value>,
    checks: Vec<Value>,
    flags: serde_json::Map<String, Value>,
}

impl Report {
    fn new(kind: &str) -> Self {
        let mut sections = serde_json::Map::new();
        sections.insert("kind".into(), json!(kind));
        Self {
            sections,
            checks: Vec::new(),
            flags: serde_json::Map::new(),
        }
    }

    fn pass(&self) -> bool {
        self.checks.iter().all(|c| c["pass"] == json!(true))
    }

    fn finish(mut self) -> (Value, bool) {
        let pass = self.pass();
        self.sections.insert("checks".into(), Value::Array(self.checks));
        self.sections.insert("flags".into(), Value::Object(self.flags));
        self.sections.insert("pass".into(), json!(pass));
        (Value::Object(self.sections), pass)
    }
}

fn orbit_section<S: Scalar>(map: &RationalMap<S>, tol: &ToleranceConfig) -> Value {
    match orbit_invariants(map, tol) {
        Ok(spec) => json!({
            "available": true,
            "rational_map": encode_rational_map(map),
            "invariants": encode_orbit_spec(&spec),
        }),
        Err(e) => unavailable(e),
    }
}

fn inspect_quadruple<S: Scalar>(
    q: &Quadruple<S>,
    zetas: &[f64],
    tol: &ToleranceConfig,
    r: &mut Report,
) -> CliResult<CurveSample> {
    let (k, l) = (q.k(), q.l());
    let p = q.embed();
    r.sections.insert("input".into(), encode_quadruple(q));
    r.sections
        .insert("curve".into(), encode_spectral_curve(&spectral_curve(&p)?));
    let samples = sample_curve(&p, zetas)?;
    r.sections.insert("curve_samples".into(), samples_json(&samples));

    let hilbert = hilbert_polynomial(q, tol)?;
    let expected = HilbertPolynomial {
        x_coeff: l as i64,
        y_coeff: k as i64,
        constant: 0,
    };
    r.sections.insert("hilbert".into(), encode_hilbert(&hilbert));
    r.checks.push(check("hilbert_is_lx_plus_ky", hilbert == expected));

    let (table, origin) = cohomology_table(|t| sheaf_cohomology(q, t, tol))?;
    r.sections.insert("cohomology".into(), table);
    r.checks.push(check("acyclic", origin == (0, 0)));

    let rank = rank_theorem_check(q, tol)?;
    let t1 = theorem1_check(q, tol)?;
    r.checks.push(check(
        "rank_equivalence",
        rank.equivalence_holds
            && rank.g_pairing_holds
            && rank.f_pairing_holds
            && rank.w1_route_agrees
            && rank.w2_route_agrees,
    ));
    r.checks.push(check("theorem1_agrees", t1.agrees_with_rank_theorem));
    r.sections.insert("ranks".into(), encode_rank_theorem(&rank));
    r.sections.insert("theorem1".into(), encode_theorem1(&t1));

    let bipurity = bipurity_check(q, tol);
    r.flags.insert("bipure".into(), json!(bipurity.is_bipure()));
    r.sections.insert("bipurity".into(), encode_bipurity(&bipurity));

    let orbit = match to_rational_map(q, tol) {
        Ok(map) => orbit_section(&map, tol),
        Err(e) => unavailable(e),
    };
    r.sections.insert("orbit".into(), orbit);

    let mut boundary = serde_json::Map::new();
    for direction in [Direction::EtaInfinity, Direction::ZetaInfinity] {
        let name = match direction {
            Direction::EtaInfinity => "eta=inf",
            Direction::ZetaInfinity => "zeta=inf",
        };
        let entry = match boundary_data(q, direction, tol) {
            Ok(b) => {
                r.checks
                    .push(check(&format!("boundary_charpoly_{name}"), b.charpoly_identity));
                encode_boundary(&b)
            }
            Err(e) => unavailable(e),
        };
        boundary.insert(name.into(), entry);
    }
    r.sections.insert("boundary".into(), Value::Object(boundary));
    Ok(samples)
}

/// A pencil whose `(∞, ∞)` fibre misses the support is inspected through
/// its normal form; otherwise only the pencil-level data is reported.
fn inspect_pencil<S: Scalar>(
    p: &Pencil<S>,
    zetas: &[f64],
    tol: &ToleranceConfig,
    r: &mut Report,
) -> CliResult<CurveSample> {
    match normalize(p, tol) {
        Ok((q, gauge)) => {
            let samples = inspect_quadruple(&q, zetas, tol, r)?;
            r.sections.insert("pencil".into(), encode_pencil(p));
            r.sections
                .insert("normalizing_gauge".into(), spectral_pencil::json::encode_matrix(&gauge));
            Ok(samples)
        }
        Err(e) => {
            r.sections.insert("input".into(), encode_pencil(p));
            r.sections.insert("normal_form".into(), unavailable(e));
            r.sections
                .insert("curve".into(), encode_spectral_curve(&spectral_curve(p)?));
            let samples = sample_curve(p, zetas)?;
            r.sections.insert("curve_samples".into(), samples_json(&samples));
            let (table, origin) = cohomology_table(|t| sheaf_cohomology_pencil(p, t, tol))?;
            r.sections.insert("cohomology".into(), table);
            r.checks.push(check("acyclic", origin == (0, 0)));
            Ok(samples)
        }
    }
}

fn inspect_map<S: Scalar>(
    map: &RationalMap<S>,
    zetas: &[f64],
    tol: &ToleranceConfig,
    r: &mut Report,
) -> CliResult<CurveSample> {
    let q = from_rational_map(map, tol);
    let samples = inspect_quadruple(&q, zetas, tol, r)?;
    r.sections.insert("rational_map".into(), encode_rational_map(map));
    r.sections.insert("orbit".into(), orbit_section(map, tol));
    Ok(samples)
}

pub fn cmd_inspect(a: &InspectArgs) -> CliResult<(Value, bool)> {
    let tol = a.tol.config()?;
    let doc = parse_document(&a.input.read()?)?;
    let mut r = Report::new("inspect_report");
    let samples = match &doc {
        Document::Quadruple(AnyBackend::Exact(q)) => inspect_quadruple(q, &a.zetas, &tol, &mut r)?,
        Document::Quadruple(AnyBackend::Float(q)) => inspect_quadruple(q, &a.zetas, &tol, &mut r)?,
        Document::Pencil(AnyBackend::Exact(p)) => inspect_pencil(p, &a.zetas, &tol, &mut r)?,
        Document::Pencil(AnyBackend::Float(p)) => inspect_pencil(p, &a.zetas, &tol, &mut r)?,
        Document::RationalMap(AnyBackend::Exact(m)) => inspect_map(m, &a.zetas, &tol, &mut r)?,
        Document::RationalMap(AnyBackend::Float(m)) => inspect_map(m, &a.zetas, &tol, &mut r)?,
    };
    if let Some(path) = &a.csv {
        write_file(path, &samples.to_csv())?;
    }
    Ok(r.finish())
}

fn curve_of<S: Scalar>(p: &Pencil<S>, zetas: &[f64]) -> CliResult<(Value, CurveSample)> {
    let samples = sample_curve(p, zetas)?;
    let doc = json!({
        "kind": "curve_report",
        "curve": encode_spectral_curve(&spectral_curve(p)?),
        "samples": samples_json(&samples),
    });
    Ok((doc, samples))
}

pub fn cmd_curve(a: &CurveArgs) -> CliResult<Value> {
    let (doc, samples) = match parse_document(&a.input.read()?)? {
        Document::Quadruple(AnyBackend::Exact(q)) => curve_of(&q.embed(), &a.zetas)?,
        Document::Quadruple(AnyBackend::Float(q)) => curve_of(&q.embed(), &a.zetas)?,
        Document::Pencil(AnyBackend::Exact(p)) => curve_of(&p, &a.zetas)?,
        Document::Pencil(AnyBackend::Float(p)) => curve_of(&p, &a.zetas)?,
        Document::RationalMap(AnyBackend::Exact(m)) => {
            curve_of(&from_rational_map(&m, &ToleranceConfig::default()).embed(), &a.zetas)?
        }
        Document::RationalMap(AnyBackend::Float(m)) => {
            curve_of(&from_rational_map(&m, &ToleranceConfig::default()).embed(), &a.zetas)?
        }
    };
    if let Some(path) = &a.csv {
        write_file(path, &samples.to_csv())?;
    }
    Ok(doc)
}

/// `H:a,b` or a trace polynomial.
fn parse_hamiltonian(
    spec: &str,
    q: &Quadruple<C64>,
    unit_speed: bool,
    mode: FlowMode,
) -> CliResult<(Box<dyn Hamiltonian<C64>>, f64)> {
    if let Some(rest) = spec.trim().strip_prefix("H:") {
        let (a, b) = rest
            .split_once(',')
            .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
            .ok_or_else(|| CliError::Usage(format!("expected `H:a,b`, got `{spec}`")))?;
        if a > q.k() || b > q.l() {
            return Err(CliError::Usage(format!(
                "H:{a},{b} is outside 0..={} x 0..={}",
                q.k(),
                q.l()
            )));
        }
        if unit_speed && mode == FlowMode::Leaf {
            let (speed, h) = unit_speed_hamiltonian(q, a, b);
            return Ok((Box::new(h), speed));
        }
        return Ok((Box::new(spectral_hamiltonian(a, b)), 1.0));
    }
    let h = TracePolynomial::<C64>::parse(spec)?;
    Ok((Box::new(h), 1.0))
}

pub fn cmd_flow(a: &FlowArgs) -> CliResult<(Value, bool)> {
    let tol = a.tol.config()?;
    let q = match parse_quadruple(&a.input.read()?)? {
        AnyBackend::Exact(q) => q.to_c64(),
        AnyBackend::Float(q) => q,
    };
    let mode = match a.mode {
        Mode::Leaf => FlowMode::Leaf,
        Mode::Full => FlowMode::Full,
    };
    let (h, scale) = parse_hamiltonian(&a.hamiltonian, &q, a.unit_speed, mode)?;
    let config = FlowConfig {
        dt: a.dt,
        horizon: a.horizon,
        mode,
    };
    if !(a.dt > 0.0 && a.dt.is_finite() && a.horizon >= 0.0 && a.horizon.is_finite()) {
        return Err(CliError::Usage(format!(
            "need dt > 0 and horizon ≥ 0, got {} and {}",
            a.dt, a.horizon
        )));
    }
    let mut doc = json!({
        "kind": "flow_report",
        "hamiltonian": a.hamiltonian,
        "mode": match mode { FlowMode::Leaf => "leaf", FlowMode::Full => "full" },
        "dt": encode_f64(a.dt),
        "horizon": encode_f64(a.horizon),
        "speed_scale": encode_f64(scale),
        "flow_drift_tol": encode_f64(tol.flow_drift_tol),
    });
    match flow(&q, &h, &config, &tol) {
        Ok(traj) => {
            if let Some(path) = &a.csv {
                write_file(path, &traj.to_csv())?;
            }
            let (spectral, casimir, ham) = (
                traj.max_spectral_drift(),
                traj.max_casimir_drift(),
                traj.max_hamiltonian_drift(),
            );
            // the spectral invariants are conserved on leaves only
            let spectral_ok = mode == FlowMode::Full || spectral <= tol.flow_drift_tol;
            let pass = spectral_ok && ham <= tol.flow_drift_tol && casimir <= crate::suites::CASIMIR_TOL;
            doc["steps"] = json!(traj.points.len() - 1);
            doc["max_spectral_drift"] = encode_f64(spectral);
            doc["max_casimir_drift"] = encode_f64(casimir);
            doc["max_hamiltonian_drift"] = encode_f64(ham);
            doc["final"] = encode_quadruple(&traj.last().q);
            doc["pass"] = json!(pass);
            Ok((doc, pass))
        }
        Err(e @ spectral_pencil::Error::StepRejected { .. }) => {
            doc["error"] = json!(e.to_string());
            doc["pass"] = json!(false);
            Ok((doc, false))
        }
        Err(e) => Err(e.into()),
    }
}
