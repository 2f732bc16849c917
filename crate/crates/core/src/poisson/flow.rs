//! Fixed-step RK4 for Hamiltonian flows on the float backend.

use std::fmt::Write as _;

use super::{Gradient, Hamiltonian};
use crate::algebra::bipoly::interpolate_many;
use crate::algebra::{CMatrix, ToleranceConfig, C64};
use crate::error::{Error, Result};
use crate::pencil::Quadruple;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowMode {
    /// All four blocks move under the full bracket.
    Full,
    /// `X`, `Y` frozen; only the canonical `(F, G)` part flows.
    Leaf,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowConfig {
    pub dt: f64,
    pub horizon: f64,
    pub mode: FlowMode,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            horizon: 1.0,
            mode: FlowMode::Leaf,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub q: Quadruple<C64>,
    pub h: C64,
    /// Coefficients of `det M`, row-major over `(a, b) ∈ [0, k] × [0, l]`.
    pub spectral: Vec<C64>,
    /// `tr X^m` for `m = 1..=max(k, l)`.
    pub trace_x: Vec<C64>,
    pub trace_y: Vec<C64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub k: usize,
    pub l: usize,
    pub points: Vec<TrajectoryPoint>,
}

fn velocity(q: &Quadruple<C64>, d: &Gradient<C64>, mode: FlowMode) -> Quadruple<C64> {
    let (dx, dy) = match mode {
        FlowMode::Full => (d.dx.commutator(&q.x), d.dy.commutator(&q.y)),
        FlowMode::Leaf => (CMatrix::zeros(q.k(), q.k()), CMatrix::zeros(q.l(), q.l())),
    };
    Quadruple {
        x: dx,
        y: dy,
        f: d.dg.clone(),
        g: d.df.scale(&C64::new(-1.0, 0.0)),
    }
}

/// Largest entry of the velocity `q̇` at `q`. Dividing `H` by this gives
/// a unit-speed start along the same trajectory.
pub fn phase_speed(q: &Quadruple<C64>, h: &(impl Hamiltonian<C64> + ?Sized), mode: FlowMode) -> f64 {
    let v = velocity(q, &h.gradient(q), mode);
    [&v.x, &v.y, &v.f, &v.g]
        .iter()
        .map(|m| m.max_modulus())
        .fold(0.0, f64::max)
}

fn axpy(q: &Quadruple<C64>, s: f64, v: &Quadruple<C64>) -> Quadruple<C64> {
    let s = C64::new(s, 0.0);
    Quadruple {
        x: &q.x + &v.x.scale(&s),
        y: &q.y + &v.y.scale(&s),
        f: &q.f + &v.f.scale(&s),
        g: &q.g + &v.g.scale(&s),
    }
}

fn rk4_step(q: &Quadruple<C64>, h: &(impl Hamiltonian<C64> + ?Sized), dt: f64, mode: FlowMode) -> Quadruple<C64> {
    let k1 = velocity(q, &h.gradient(q), mode);
    let q2 = axpy(q, dt / 2.0, &k1);
    let k2 = velocity(&q2, &h.gradient(&q2), mode);
    let q3 = axpy(q, dt / 2.0, &k2);
    let k3 = velocity(&q3, &h.gradient(&q3), mode);
    let q4 = axpy(q, dt, &k3);
    let k4 = velocity(&q4, &h.gradient(&q4), mode);
    let mut out = axpy(q, dt / 6.0, &k1);
    out = axpy(&out, dt / 3.0, &k2);
    out = axpy(&out, dt / 3.0, &k3);
    axpy(&out, dt / 6.0, &k4)
}

fn monitor(t: f64, q: Quadruple<C64>, h: C64) -> TrajectoryPoint {
    let (k, l) = (q.k(), q.l());
    let det = interpolate_many(k, l, 1, |z, e| vec![q.matrix_at(z, e).det().expect("square")])
        .pop()
        .expect("determinant");
    let spectral = (0..=k)
        .flat_map(|a| (0..=l).map(move |b| (a, b)))
        .map(|(a, b)| det.coeff(a, b))
        .collect();
    let top = k.max(l) as u32;
    let powers = |m: &CMatrix<C64>| (1..=top).map(|p| m.pow(p).trace()).collect();
    TrajectoryPoint {
        t,
        trace_x: powers(&q.x),
        trace_y: powers(&q.y),
        spectral,
        h,
        q,
    }
}

/// Integrates `ḟ = {f, H}` from `q0` over `[0, horizon]`. A step whose
/// relative change in `H` exceeds `tol.flow_drift_tol` is rejected.
pub fn flow(
    q0: &Quadruple<C64>,
    h: &(impl Hamiltonian<C64> + ?Sized),
    config: &FlowConfig,
    tol: &ToleranceConfig,
) -> Result<Trajectory> {
    if !(config.dt > 0.0 && config.dt.is_finite()) || !(config.horizon >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need dt > 0 and horizon ≥ 0, got dt = {}, horizon = {}",
            config.dt, config.horizon
        )));
    }
    let steps = (config.horizon / config.dt).round() as usize;
    let mut q = q0.clone();
    let mut value = h.value(&q);
    let mut points = vec![monitor(0.0, q.clone(), value)];
    for i in 0..steps {
        let t = i as f64 * config.dt;
        let next = rk4_step(&q, h, config.dt, config.mode);
        let next_value = h.value(&next);
        let drift = (next_value - value).norm() / value.norm().max(1.0);
        if !(drift <= tol.flow_drift_tol) {
            return Err(Error::StepRejected {
                t,
                drift,
                tol: tol.flow_drift_tol,
            });
        }
        q = next;
        value = next_value;
        points.push(monitor((i + 1) as f64 * config.dt, q.clone(), value));
    }
    Ok(Trajectory {
        k: q0.k(),
        l: q0.l(),
        points,
    })
}

fn relative_drift(series: impl Iterator<Item = C64> + Clone) -> f64 {
    let mut it = series.clone();
    let Some(first) = it.next() else { return 0.0 };
    let scale = first.norm().max(1.0);
    series.map(|v| (v - first).norm() / scale).fold(0.0, f64::max)
}

fn absolute_drift(series: impl Iterator<Item = C64> + Clone) -> f64 {
    let mut it = series.clone();
    let Some(first) = it.next() else { return 0.0 };
    series.map(|v| (v - first).norm()).fold(0.0, f64::max)
}

impl Trajectory {
    pub fn last(&self) -> &TrajectoryPoint {
        self.points.last().expect("at least the initial point")
    }

    /// Largest `|c(t) − c(0)| / max(1, |c(0)|)` over all spectral
    /// coefficients and times.
    pub fn max_spectral_drift(&self) -> f64 {
        let width = self.points[0].spectral.len();
        (0..width)
            .map(|i| relative_drift(self.points.iter().map(move |p| p.spectral[i])))
            .fold(0.0, f64::max)
    }

    pub fn max_hamiltonian_drift(&self) -> f64 {
        relative_drift(self.points.iter().map(|p| p.h))
    }

    /// Largest absolute drift of `tr X^m` and `tr Y^m`.
    pub fn max_casimir_drift(&self) -> f64 {
        let width = self.points[0].trace_x.len();
        (0..width)
            .flat_map(|i| {
                [
                    absolute_drift(self.points.iter().map(move |p| p.trace_x[i])),
                    absolute_drift(self.points.iter().map(move |p| p.trace_y[i])),
                ]
            })
            .fold(0.0, f64::max)
    }

    /// `t, ‖X‖, ‖Y‖, H, H_ab…, tr X^m drift…, tr Y^m drift…`; complex
    /// values take two columns.
    pub fn to_csv(&self) -> String {
        let mut header = vec![
            "t".to_string(),
            "norm_x".into(),
            "norm_y".into(),
            "h_re".into(),
            "h_im".into(),
        ];
        for a in 0..=self.k {
            for b in 0..=self.l {
                header.push(format!("h_{a}_{b}_re"));
                header.push(format!("h_{a}_{b}_im"));
            }
        }
        let powers = self.points[0].trace_x.len();
        for m in 1..=powers {
            header.push(format!("trx{m}_drift"));
        }
        for m in 1..=powers {
            header.push(format!("try{m}_drift"));
        }
        let mut out = header.join(",");
        out.push('\n');
        let first = &self.points[0];
        for p in &self.points {
            let mut row = vec![p.t, p.q.x.frobenius_norm(), p.q.y.frobenius_norm(), p.h.re, p.h.im];
            for c in &p.spectral {
                row.extend([c.re, c.im]);
            }
            row.extend(p.trace_x.iter().zip(&first.trace_x).map(|(a, b)| (a - b).norm()));
            row.extend(p.trace_y.iter().zip(&first.trace_y).map(|(a, b)| (a - b).norm()));
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(out, "{}", cells.join(",")).expect("string write");
        }
        out
    }
}
