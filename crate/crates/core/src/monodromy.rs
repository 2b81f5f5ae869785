//! Floating-point analytic continuation of the Frobenius basis around the
//! singular points `0`, `1/36` and `1/4` of the Picard–Fuchs equation.
//!
//! In `d/dx` form the operator reads
//! `x³A y‴ + x²(3A+B) y″ + x(A+B+C) y′ + D y = 0` with
//! `A = (1−36x)(1−4x)`, `B = 432x²−60x`, `C = 396x²−32x`, `D = 108x²−6x`.
//! Paths are piecewise circular/linear, integrated by classical RK4 with
//! step-doubling error control.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::picard_fuchs::frobenius_basis;
use crate::series::LogSeries;

type C = Complex64;
pub type CMatrix = [[C; 3]; 3];

/// A regular singular point of the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SingularPoint {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1/36")]
    Conifold,
    #[serde(rename = "1/4")]
    Quarter,
}

impl SingularPoint {
    pub fn value(self) -> f64 {
        match self {
            SingularPoint::Zero => 0.0,
            SingularPoint::Conifold => 1.0 / 36.0,
            SingularPoint::Quarter => 0.25,
        }
    }
}

impl fmt::Display for SingularPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SingularPoint::Zero => "0",
            SingularPoint::Conifold => "1/36",
            SingularPoint::Quarter => "1/4",
        })
    }
}

impl FromStr for SingularPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "0" => Ok(SingularPoint::Zero),
            "1/36" => Ok(SingularPoint::Conifold),
            "1/4" => Ok(SingularPoint::Quarter),
            other => Err(Error::Integration(format!("unknown singular point {other:?}; use 0, 1/36 or 1/4"))),
        }
    }
}

/// The ODE right-hand side `y‴ = −(x²(3A+B)y″ + x(A+B+C)y′ + Dy)/(x³A)`.
fn third_derivative(x: C, y: C, y1: C, y2: C) -> C {
    let a = (C::new(1.0, 0.0) - 36.0 * x) * (C::new(1.0, 0.0) - 4.0 * x);
    let b = 432.0 * x * x - 60.0 * x;
    let c = 396.0 * x * x - 32.0 * x;
    let d = 108.0 * x * x - 6.0 * x;
    -(x * x * (3.0 * a + b) * y2 + x * (a + b + c) * y1 + d * y) / (x * x * x * a)
}

/// Three solutions stacked as `(y, y′, y″)` columns.
type State = [[C; 3]; 3];

/// One piece of a path, parametrized on `s ∈ [0, 1]`.
#[derive(Clone, Copy, Debug)]
enum Segment {
    Line { from: C, to: C },
    Arc { center: C, radius: f64, theta0: f64, theta1: f64 },
}

impl Segment {
    fn point(&self, s: f64) -> (C, C) {
        match *self {
            Segment::Line { from, to } => (from + (to - from) * s, to - from),
            Segment::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => {
                let th = theta0 + (theta1 - theta0) * s;
                let e = C::from_polar(radius, th);
                (center + e, e * C::new(0.0, theta1 - theta0))
            }
        }
    }

    fn reversed(&self) -> Segment {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => Segment::Arc {
                center,
                radius,
                theta0: theta1,
                theta1: theta0,
            },
        }
    }
}

fn rhs(seg: &Segment, s: f64, st: &State) -> State {
    let (x, dx) = seg.point(s);
    let mut out = [[C::new(0.0, 0.0); 3]; 3];
    for j in 0..3 {
        let [y, y1, y2] = st[j];
        out[j] = [y1 * dx, y2 * dx, third_derivative(x, y, y1, y2) * dx];
    }
    out
}

fn axpy(a: &State, h: f64, k: &State) -> State {
    let mut out = *a;
    for j in 0..3 {
        for i in 0..3 {
            out[j][i] += k[j][i] * h;
        }
    }
    out
}

fn rk4_step(seg: &Segment, s: f64, h: f64, st: &State) -> State {
    let k1 = rhs(seg, s, st);
    let k2 = rhs(seg, s + h / 2.0, &axpy(st, h / 2.0, &k1));
    let k3 = rhs(seg, s + h / 2.0, &axpy(st, h / 2.0, &k2));
    let k4 = rhs(seg, s + h, &axpy(st, h, &k3));
    let mut out = *st;
    for j in 0..3 {
        for i in 0..3 {
            out[j][i] += (k1[j][i] + 2.0 * k2[j][i] + 2.0 * k3[j][i] + k4[j][i]) * (h / 6.0);
        }
    }
    out
}

fn state_norm(st: &State) -> f64 {
    st.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
}

fn state_diff(a: &State, b: &State) -> f64 {
    let mut m: f64 = 0.0;
    for j in 0..3 {
        for i in 0..3 {
            m = m.max((a[j][i] - b[j][i]).norm());
        }
    }
    m
}

/// Integration statistics for one loop.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct IntegrationStats {
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub max_local_error: f64,
}

const MAX_STEPS: usize = 2_000_000;

fn integrate_segment(seg: &Segment, st: State, tol: f64, stats: &mut IntegrationStats) -> Result<State> {
    let mut s = 0.0;
    let mut h: f64 = 1e-3;
    let mut st = st;
    while s < 1.0 {
        if stats.accepted_steps + stats.rejected_steps > MAX_STEPS {
            return Err(Error::Integration(format!("step budget exhausted on {seg:?}")));
        }
        h = h.min(1.0 - s);
        let full = rk4_step(seg, s, h, &st);
        let half = rk4_step(seg, s, h / 2.0, &st);
        let half = rk4_step(seg, s + h / 2.0, h / 2.0, &half);
        let err = state_diff(&full, &half) / 15.0;
        let scale = state_norm(&half).max(1.0);
        if !err.is_finite() {
            return Err(Error::Integration(format!("non-finite state near s = {s} on {seg:?}")));
        }
        if err <= tol * scale {
            s += h;
            // Richardson extrapolation of the two estimates
            st = axpy(&axpy(&half, 1.0 / 15.0, &half), -1.0 / 15.0, &full);
            stats.accepted_steps += 1;
            stats.max_local_error = stats.max_local_error.max(err / scale);
        } else {
            stats.rejected_steps += 1;
        }
        let factor = if err == 0.0 {
            4.0
        } else {
            (0.9 * (tol * scale / err).powf(0.2)).clamp(0.2, 4.0)
        };
        h *= factor;
        if h < 1e-14 {
            return Err(Error::Integration(format!("step size underflow near s = {s} on {seg:?}")));
        }
    }
    Ok(st)
}

fn loop_path(point: SingularPoint, base: f64) -> Vec<Segment> {
    let r = |re: f64| C::new(re, 0.0);
    let con = 1.0 / 36.0;
    match point {
        SingularPoint::Zero => vec![Segment::Arc {
            center: r(0.0),
            radius: base,
            theta0: 0.0,
            theta1: 2.0 * PI,
        }],
        SingularPoint::Conifold => {
            let rad = con / 2.0;
            let go = Segment::Line {
                from: r(base),
                to: r(con - rad),
            };
            vec![
                go,
                Segment::Arc {
                    center: r(con),
                    radius: rad,
                    theta0: PI,
                    theta1: 3.0 * PI,
                },
                go.reversed(),
            ]
        }
        SingularPoint::Quarter => {
            let q = 0.25;
            let rad = (q - con) / 2.0;
            let small = con / 2.0;
            let go = vec![
                Segment::Line {
                    from: r(base),
                    to: r(con - small),
                },
                // over the top of 1/36
                Segment::Arc {
                    center: r(con),
                    radius: small,
                    theta0: PI,
                    theta1: 0.0,
                },
                Segment::Line {
                    from: r(con + small),
                    to: r(q - rad),
                },
            ];
            let mut out = go.clone();
            out.push(Segment::Arc {
                center: r(q),
                radius: rad,
                theta0: PI,
                theta1: 3.0 * PI,
            });
            out.extend(go.iter().rev().map(Segment::reversed));
            out
        }
    }
}

/// Columns `(y_j, y_j′, y_j″)` of the Frobenius basis at real `x > 0`.
pub fn frobenius_frame(x: f64, order: usize) -> Result<State> {
    let fb = frobenius_basis(order)?;
    let mut out = [[C::new(0.0, 0.0); 3]; 3];
    for (j, y) in fb.solutions().iter().enumerate() {
        let ty = y.theta();
        let tty = ty.theta();
        let v0 = y.eval_f64(x);
        let v1 = ty.eval_f64(x) / x;
        let v2 = (tty.eval_f64(x) - ty.eval_f64(x)) / (x * x);
        out[j] = [C::new(v0, 0.0), C::new(v1, 0.0), C::new(v2, 0.0)];
    }
    Ok(out)
}

/// Truncation order for which the tail of the series at `x` drops below
/// `1e-18` (coefficients grow like `36^N`).
fn series_order(x: f64) -> usize {
    let ratio = 36.0 * x;
    let n = (-18.0 * std::f64::consts::LN_10 / ratio.ln()).ceil() as usize;
    n.clamp(8, 400) + 8
}

fn frame_matrix(st: &State) -> CMatrix {
    // rows: derivative order, columns: solution
    let mut m = [[C::new(0.0, 0.0); 3]; 3];
    for j in 0..3 {
        for i in 0..3 {
            m[i][j] = st[j][i];
        }
    }
    m
}

pub fn cmat_mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut m = [[C::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                m[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    m
}

pub fn cmat_det(m: &CMatrix) -> C {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub fn cmat_trace(m: &CMatrix) -> C {
    m[0][0] + m[1][1] + m[2][2]
}

pub fn cmat_identity() -> CMatrix {
    let mut m = [[C::new(0.0, 0.0); 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C::new(1.0, 0.0);
    }
    m
}

pub fn cmat_inverse(m: &CMatrix) -> Result<CMatrix> {
    let det = cmat_det(m);
    if det.norm() < 1e-300 {
        return Err(Error::Integration("singular Wronskian frame".into()));
    }
    let mut inv = [[C::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            inv[i][j] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / det;
        }
    }
    Ok(inv)
}

pub fn cmat_max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

/// `M₀` from `log x ↦ log x + 2πi` acting on `(y₀, y₁, y₂)`, column convention.
pub fn analytic_m0() -> CMatrix {
    let tpi = C::new(0.0, 2.0 * PI);
    let o = C::new(0.0, 0.0);
    let one = C::new(1.0, 0.0);
    [[one, tpi, tpi * tpi], [o, one, 2.0 * tpi], [o, o, one]]
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Invariants {
    #[serde(serialize_with = "ser_c")]
    pub det: C,
    #[serde(serialize_with = "ser_c")]
    pub trace: C,
    /// `max |(M² − I)_{ij}|`.
    pub order2_residual: f64,
}

impl Invariants {
    pub fn of(m: &CMatrix) -> Self {
        Invariants {
            det: cmat_det(m),
            trace: cmat_trace(m),
            order2_residual: cmat_max_diff(&cmat_mul(m, m), &cmat_identity()),
        }
    }
}

fn ser_c<S: Serializer>(z: &C, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

fn ser_cm<S: Serializer>(m: &CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<[f64; 2]>> = m.iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect();
    rows.serialize(s)
}

/// A monodromy matrix in the Frobenius basis at the basepoint:
/// continuing `y_j` around the loop gives `Σ_k M_{kj} y_k`.
#[derive(Clone, Debug, Serialize)]
pub struct MonodromyResult {
    #[serde(rename = "loop")]
    pub point: SingularPoint,
    pub basepoint: f64,
    #[serde(serialize_with = "ser_cm")]
    pub matrix: CMatrix,
    pub invariants: Invariants,
    /// For `0`: distance between the analytic and the integrated matrix.
    /// For the other points: `max(|M²−I|, |det+1|, |trace−1|)`.
    pub residual: f64,
    pub stats: IntegrationStats,
}

impl MonodromyResult {
    /// Accepts the result if its residual is within `tol`.
    pub fn verify(&self, tol: f64) -> Result<()> {
        if self.residual <= tol {
            Ok(())
        } else {
            Err(Error::Tolerance(format!(
                "monodromy around {} has residual {:.3e} > {tol:.1e}",
                self.point, self.residual
            )))
        }
    }
}

pub const DEFAULT_BASEPOINT: f64 = 0.01;
pub const LOCAL_TOLERANCE: f64 = 1e-12;

/// Integrates the Frobenius frame once around the loop and returns the
/// matrix `W₀⁻¹ W_end`.
pub fn integrate_loop(point: SingularPoint, basepoint: f64) -> Result<(CMatrix, IntegrationStats)> {
    if !(basepoint > 0.0 && basepoint < 1.0 / 36.0) {
        return Err(Error::Integration(format!("basepoint {basepoint} outside (0, 1/36)")));
    }
    let frame = frobenius_frame(basepoint, series_order(basepoint))?;
    let mut st = frame;
    let mut stats = IntegrationStats::default();
    for seg in loop_path(point, basepoint) {
        st = integrate_segment(&seg, st, LOCAL_TOLERANCE, &mut stats)?;
    }
    let w0 = frame_matrix(&frame);
    let w1 = frame_matrix(&st);
    Ok((cmat_mul(&cmat_inverse(&w0)?, &w1), stats))
}

pub fn numeric_monodromy(point: SingularPoint, basepoint: f64) -> Result<MonodromyResult> {
    let (numeric, stats) = integrate_loop(point, basepoint)?;
    let (matrix, residual) = match point {
        SingularPoint::Zero => {
            let m0 = analytic_m0();
            (m0, cmat_max_diff(&m0, &numeric))
        }
        _ => {
            let inv = Invariants::of(&numeric);
            let r = inv
                .order2_residual
                .max((inv.det + 1.0).norm())
                .max((inv.trace - 1.0).norm());
            (numeric, r)
        }
    };
    Ok(MonodromyResult {
        point,
        basepoint,
        invariants: Invariants::of(&matrix),
        matrix,
        residual,
        stats,
    })
}

/// All three loops, integrated concurrently; output order is `0, 1/36, 1/4`.
pub fn all_monodromies(basepoint: f64) -> Result<[MonodromyResult; 3]> {
    let pts = [SingularPoint::Zero, SingularPoint::Conifold, SingularPoint::Quarter];
    let results: Vec<Result<MonodromyResult>> = std::thread::scope(|s| {
        let hs: Vec<_> = pts
            .iter()
            .map(|&p| s.spawn(move || numeric_monodromy(p, basepoint)))
            .collect();
        hs.into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Error::Integration("worker panicked".into()))))
            .collect()
    });
    let mut it = results.into_iter();
    Ok([
        it.next().expect("three results")?,
        it.next().expect("three results")?,
        it.next().expect("three results")?,
    ])
}

/// ODE residual of a log series solution at `x`, for validating the `θ → d/dx`
/// conversion against the exact θ-operator.
pub fn ode_residual(y: &LogSeries, x: f64) -> f64 {
    let ty = y.theta();
    let tty = ty.theta();
    let ttty = tty.theta();
    let (t0, t1, t2, t3) = (y.eval_f64(x), ty.eval_f64(x), tty.eval_f64(x), ttty.eval_f64(x));
    let d1 = t1 / x;
    let d2 = (t2 - t1) / (x * x);
    let d3 = (t3 - 3.0 * t2 + 2.0 * t1) / (x * x * x);
    let lhs = third_derivative(C::new(x, 0.0), C::new(t0, 0.0), C::new(d1, 0.0), C::new(d2, 0.0));
    (lhs.re - d3).abs() / d3.abs().max(1.0)
}
