//! Numerical flows, phase portraits and parameter sweeps.
//!
//! Fixed-step classical Runge-Kutta in `f64`. For Liouville fields the
//! first integral `x f(y)` is monitored along every trajectory.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::contact3d::Field3;
use crate::error::{Error, Result};
use crate::liouville2d::{
    equilibria, unfolding_q, unfolding_t, Equilibrium, EquilibriumType, PlaneField,
};
use crate::Rational;

/// States whose norm exceeds this count as escaped.
pub const ESCAPE_NORM: f64 = 1e12;

/// Something that can be integrated numerically.
pub trait Flow: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, p: &[f64]) -> Vec<f64>;
    fn first_integral(&self, _p: &[f64]) -> Option<f64> {
        None
    }
}

impl Flow for PlaneField {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, p: &[f64]) -> Vec<f64> {
        self.eval_f64([p[0], p[1]]).to_vec()
    }

    fn first_integral(&self, p: &[f64]) -> Option<f64> {
        PlaneField::first_integral(self, [p[0], p[1]])
    }
}

impl Flow for Field3 {
    fn dim(&self) -> usize {
        3
    }

    fn eval(&self, p: &[f64]) -> Vec<f64> {
        self.eval_f64([p[0], p[1], p[2]]).to_vec()
    }

    /// `x f(y)` when the plane part is a Liouville field (then it is
    /// conserved by the full flow too).
    fn first_integral(&self, p: &[f64]) -> Option<f64> {
        let plane = crate::contact3d::project_to_plane(self, 0).ok()?;
        plane.first_integral([p[0], p[1]])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

/// Sampled solution. Times advance by `h` forward or by `-h` backward.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// `max |I(p(t)) - I(p(0))|` for the first integral `I`, when known.
    pub drift: Option<f64>,
    /// Stopped early because the state left the allowed region.
    pub stopped: bool,
}

impl Trajectory {
    pub fn last(&self) -> &[f64] {
        self.states
            .last()
            .expect("trajectories hold the initial state")
    }
}

fn axpy(p: &[f64], s: f64, k: &[f64]) -> Vec<f64> {
    p.iter().zip(k).map(|(a, b)| a + s * b).collect()
}

fn rk4_step<F: Flow + ?Sized>(field: &F, p: &[f64], h: f64) -> Vec<f64> {
    let k1 = field.eval(p);
    let k2 = field.eval(&axpy(p, h / 2.0, &k1));
    let k3 = field.eval(&axpy(p, h / 2.0, &k2));
    let k4 = field.eval(&axpy(p, h, &k3));
    (0..p.len())
        .map(|i| p[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

fn norm(p: &[f64]) -> f64 {
    p.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn check_step(t_end: f64, h: f64) -> Result<usize> {
    if !(h > 0.0 && t_end > 0.0 && h.is_finite() && t_end.is_finite()) {
        return Err(Error::InvalidArgument("need T > 0 and h > 0".into()));
    }
    Ok((t_end / h).round().max(1.0) as usize)
}

/// Core loop. Returns the trajectory and whether `stop` fired; escape past
/// [`ESCAPE_NORM`] or a non-finite state is an error carrying the partial
/// trajectory.
fn run<F: Flow + ?Sized>(
    field: &F,
    x0: &[f64],
    t_end: f64,
    h: f64,
    dir: Direction,
    stop: &dyn Fn(&[f64]) -> bool,
) -> Result<Trajectory> {
    if x0.len() != field.dim() {
        return Err(Error::InvalidArgument(format!(
            "initial point has {} coordinates, field needs {}",
            x0.len(),
            field.dim()
        )));
    }
    let steps = check_step(t_end, h)?;
    let signed = match dir {
        Direction::Forward => h,
        Direction::Backward => -h,
    };
    let i0 = field.first_integral(x0);
    let mut traj = Trajectory {
        times: Vec::with_capacity(steps + 1),
        states: Vec::with_capacity(steps + 1),
        drift: i0.map(|_| 0.0),
        stopped: false,
    };
    traj.times.push(0.0);
    traj.states.push(x0.to_vec());
    let mut p = x0.to_vec();
    for n in 1..=steps {
        p = rk4_step(field, &p, signed);
        let t = n as f64 * signed;
        if !p.iter().all(|v| v.is_finite()) || norm(&p) > ESCAPE_NORM {
            return Err(Error::StepOverflow {
                time: t,
                partial: Box::new(traj),
            });
        }
        if let (Some(i0), Some(i)) = (i0, field.first_integral(&p)) {
            let d = (i - i0).abs();
            let cur = traj.drift.get_or_insert(0.0);
            if d > *cur {
                *cur = d;
            }
        }
        traj.times.push(t);
        traj.states.push(p.clone());
        if stop(&p) {
            traj.stopped = true;
            break;
        }
    }
    Ok(traj)
}

/// Forward integration over `[0, T]` with step `h`.
pub fn integrate<F: Flow + ?Sized>(
    field: &F,
    x0: &[f64],
    t_end: f64,
    h: f64,
) -> Result<Trajectory> {
    run(field, x0, t_end, h, Direction::Forward, &|_| false)
}

pub fn integrate_directed<F: Flow + ?Sized>(
    field: &F,
    x0: &[f64],
    t_end: f64,
    h: f64,
    dir: Direction,
) -> Result<Trajectory> {
    run(field, x0, t_end, h, dir, &|_| false)
}

/// Axis-aligned rectangle `[x_min, x_max] × [y_min, y_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        if !(x_min < x_max && y_min < y_max) {
            return Err(Error::InvalidArgument("empty window".into()));
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    pub fn square(r: f64) -> Self {
        Self {
            x_min: -r,
            x_max: r,
            y_min: -r,
            y_max: r,
        }
    }

    fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    /// Same center, each side scaled by `s`.
    fn grown(&self, s: f64) -> Self {
        let (cx, cy) = (
            (self.x_min + self.x_max) / 2.0,
            (self.y_min + self.y_max) / 2.0,
        );
        let (w, h) = (self.width() * s / 2.0, self.height() * s / 2.0);
        Self {
            x_min: cx - w,
            x_max: cx + w,
            y_min: cy - h,
            y_max: cy + h,
        }
    }

    fn contains(&self, p: &[f64]) -> bool {
        p[0] >= self.x_min && p[0] <= self.x_max && p[1] >= self.y_min && p[1] <= self.y_max
    }
}

/// Portrait sampling parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PortraitSpec {
    pub window: Window,
    /// Seeds per axis, placed at cell centers.
    pub seeds: (usize, usize),
    pub t_end: f64,
    pub step: f64,
}

impl Default for PortraitSpec {
    fn default() -> Self {
        Self {
            window: Window::square(2.0),
            seeds: (8, 8),
            t_end: 5.0,
            step: 1e-2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PortraitCurve {
    pub seed: [f64; 2],
    pub direction: Direction,
    pub trajectory: Trajectory,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PortraitData {
    pub spec: PortraitSpec,
    pub curves: Vec<PortraitCurve>,
    pub equilibria: Vec<Equilibrium>,
}

impl PortraitData {
    pub fn saddles(&self) -> impl Iterator<Item = &Equilibrium> {
        self.equilibria
            .iter()
            .filter(|e| e.kind == EquilibriumType::HyperbolicSaddle)
    }

    /// `y` values of degenerate lines.
    pub fn lines(&self) -> Vec<f64> {
        self.equilibria
            .iter()
            .filter(|e| e.kind == EquilibriumType::DegenerateLine)
            .map(Equilibrium::y_f64)
            .collect()
    }

    /// SVG with the window as view box and `y` pointing up.
    pub fn to_svg(&self) -> String {
        let w = &self.spec.window;
        let stroke = w.width().max(w.height()) / 400.0;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
            w.x_min,
            -w.y_max,
            w.width(),
            w.height()
        );
        let _ = writeln!(
            s,
            r#"<g fill="none" stroke="black" stroke-width="{:.6}">"#,
            stroke
        );
        for c in &self.curves {
            let pts: Vec<String> = c
                .trajectory
                .states
                .iter()
                .map(|p| format!("{:.6},{:.6}", p[0], -p[1]))
                .collect();
            if pts.len() > 1 {
                let _ = writeln!(s, r#"<polyline points="{}"/>"#, pts.join(" "));
            }
        }
        let _ = writeln!(s, "</g>");
        for y in self.lines() {
            let _ = writeln!(
                s,
                r#"<line class="degenerate" x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}" stroke="red" stroke-width="{:.6}" stroke-dasharray="{:.6} {:.6}"/>"#,
                w.x_min,
                -y,
                w.x_max,
                -y,
                2.0 * stroke,
                stroke,
                3.0 * stroke
            );
        }
        for e in self.saddles() {
            let [x, y] = e.location_f64();
            let _ = writeln!(
                s,
                r#"<circle class="saddle" cx="{:.6}" cy="{:.6}" r="{:.6}" fill="blue"/>"#,
                x,
                -y,
                4.0 * stroke
            );
        }
        s.push_str("</svg>\n");
        s
    }

    /// One row per sample: `curve,t,x,y`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("curve,t,x,y\n");
        for (i, c) in self.curves.iter().enumerate() {
            for (t, p) in c.trajectory.times.iter().zip(&c.trajectory.states) {
                let _ = writeln!(s, "{},{:.6},{:.6},{:.6}", i, t, p[0], p[1]);
            }
        }
        s
    }
}

/// Trajectories from a seed grid, both time directions, each stopped once
/// it leaves the window grown fourfold; equilibria inside the window's `y`
/// range are annotated.
pub fn phase_portrait(field: &PlaneField, spec: &PortraitSpec) -> Result<PortraitData> {
    let w = spec.window;
    let equilibria = equilibria(field, w.y_min, w.y_max)?;
    let (nx, ny) = spec.seeds;
    let bounds = w.grown(4.0);
    let stop = move |p: &[f64]| !bounds.contains(p);
    let mut curves = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let seed = [
                w.x_min + (i as f64 + 0.5) * w.width() / nx as f64,
                w.y_min + (j as f64 + 0.5) * w.height() / ny as f64,
            ];
            for dir in [Direction::Forward, Direction::Backward] {
                let trajectory = match run(field, &seed, spec.t_end, spec.step, dir, &stop) {
                    Ok(t) => t,
                    Err(Error::StepOverflow { partial, .. }) => *partial,
                    Err(e) => return Err(e),
                };
                curves.push(PortraitCurve {
                    seed,
                    direction: dir,
                    trajectory,
                });
            }
        }
    }
    Ok(PortraitData {
        spec: *spec,
        curves,
        equilibria,
    })
}

/// The unfoldings that can be swept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    Q,
    T,
}

impl Family {
    pub fn params(self) -> usize {
        match self {
            Family::Q => 1,
            Family::T => 2,
        }
    }

    pub fn field(self, params: &[Rational], order: usize) -> Result<PlaneField> {
        if params.len() != self.params() {
            return Err(Error::InvalidArgument(format!(
                "{:?} takes {} parameters, got {}",
                self,
                self.params(),
                params.len()
            )));
        }
        Ok(match self {
            Family::Q => unfolding_q(&params[0], order),
            Family::T => unfolding_t(&params[0], &params[1], order),
        })
    }
}

/// Equilibrium census at one grid point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub saddles: usize,
    pub lines: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    #[serde(serialize_with = "ser_params")]
    pub params: Vec<Rational>,
    pub equilibria: Vec<Equilibrium>,
    pub summary: Summary,
}

/// Structure change between grid points `between.0` and `between.1`; `at`
/// is the endpoint carrying the degenerate configuration, if one does.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bifurcation {
    pub between: (usize, usize),
    pub at: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub family: Family,
    pub y_range: (f64, f64),
    pub points: Vec<SweepPoint>,
    pub bifurcations: Vec<Bifurcation>,
}

impl SweepResult {
    /// Grid indices at which a bifurcation is flagged, without repeats.
    pub fn flagged(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.bifurcations.iter().filter_map(|b| b.at).collect();
        v.dedup();
        v
    }
}

fn ser_params<S: Serializer>(p: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<String> = p.iter().map(|r| r.to_string()).collect();
    v.serialize(s)
}

fn types(eq: &[Equilibrium]) -> Vec<EquilibriumType> {
    eq.iter().map(|e| e.kind).collect()
}

/// Equilibria of the family at every grid point (in parallel, order
/// preserved), with structure changes between neighbours flagged.
pub fn parameter_sweep(
    family: Family,
    grid: &[Vec<Rational>],
    y_range: (f64, f64),
) -> Result<SweepResult> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty parameter grid".into()));
    }
    let points: Vec<SweepPoint> = grid
        .par_iter()
        .map(|params| {
            let field = family.field(params, crate::DEFAULT_ORDER)?;
            let equilibria = equilibria(&field, y_range.0, y_range.1)?;
            let lines = equilibria
                .iter()
                .filter(|e| e.kind == EquilibriumType::DegenerateLine)
                .count();
            Ok(SweepPoint {
                params: params.clone(),
                summary: Summary {
                    saddles: equilibria.len() - lines,
                    lines,
                },
                equilibria,
            })
        })
        .collect::<Result<_>>()?;
    let bifurcations = points
        .windows(2)
        .enumerate()
        .filter(|(_, w)| types(&w[0].equilibria) != types(&w[1].equilibria))
        .map(|(i, w)| Bifurcation {
            between: (i, i + 1),
            at: if w[1].summary.lines > 0 {
                Some(i + 1)
            } else if w[0].summary.lines > 0 {
                Some(i)
            } else {
                None
            },
        })
        .collect();
    Ok(SweepResult {
        family,
        y_range,
        points,
        bifurcations,
    })
}
