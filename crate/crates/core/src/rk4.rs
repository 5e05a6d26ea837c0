//! Classical fixed-step RK4, the CFL gate, and the run loop.

use num_complex::Complex64;

use crate::diagnostics::{DiagnosticsRecorder, RunDiagnostics};
use crate::error::{Error, Result};
use crate::grid::{Dim, Grid};
use crate::model::{ModelParams, PreparedModel, SimState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CflPolicy {
    /// Refuse to start when the ratio exceeds 1.
    Reject,
    /// Run anyway; the ratio is reported in the summary.
    Warn,
}

impl CflPolicy {
    pub fn name(self) -> &'static str {
        match self {
            CflPolicy::Reject => "reject",
            CflPolicy::Warn => "warn",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "reject" => Some(CflPolicy::Reject),
            "warn" => Some(CflPolicy::Warn),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    /// Time step, ps.
    pub h: f64,
    /// ps
    pub t_end: f64,
    /// Emit a snapshot every this many steps.
    pub snapshot_every: u64,
    pub cfl_policy: CflPolicy,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0) || !self.h.is_finite() {
            return Err(Error::param("h", format!("time step must be positive, got {}", self.h)));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(Error::param("t_end", format!("must be positive, got {}", self.t_end)));
        }
        if self.snapshot_every == 0 {
            return Err(Error::param("snapshot_every", "must be at least 1"));
        }
        Ok(())
    }

    /// Number of steps to reach `t_end`, rounded to the nearest integer.
    pub fn steps(&self) -> u64 {
        (self.t_end / self.h).round() as u64
    }
}

/// Stability ratio `(ħ/m) h/dx²`, plus `(ħ/m) h/dy²` in 2D. Stable iff ≤ 1.
pub fn cfl_ratio(grid: &Grid, h: f64, hbar: f64, mass: f64) -> f64 {
    let coeff = hbar / mass;
    let x = coeff * h / (grid.dx * grid.dx);
    match grid.ndim {
        Dim::One => x,
        Dim::Two => x + coeff * h / (grid.dy * grid.dy),
    }
}

/// Scratch buffers for one RK4 step.
#[derive(Debug, Clone)]
pub struct Rk4Workspace {
    k: [SimState; 4],
    stage: SimState,
}

impl Rk4Workspace {
    pub fn new(like: &SimState) -> Self {
        let z = SimState::zeros(like.tag, like.grid);
        Rk4Workspace { k: [z.clone(), z.clone(), z.clone(), z.clone()], stage: z }
    }
}

fn check_stage(k: &SimState, stage: usize) -> Result<()> {
    k.check_finite().map_err(|e| match e {
        Error::NonFinite { field, node } => Error::NonFinite { field: format!("{field} (stage k{stage})"), node },
        other => other,
    })
}

/// Advances `y` by one step in place.
///
/// `f(state, out)` writes the time derivative of `state` into `out`.
/// Dirichlet-pinned amplitudes are re-zeroed on every stage input and on the
/// result; every field (including `n_R`) moves inside the same four stages.
pub fn rk4_advance<F>(y: &mut SimState, h: f64, ws: &mut Rk4Workspace, mut f: F) -> Result<()>
where
    F: FnMut(&SimState, &mut SimState) -> Result<()>,
{
    let t0 = y.t;
    let [k1, k2, k3, k4] = &mut ws.k;
    let stage = &mut ws.stage;

    f(y, k1)?;
    check_stage(k1, 1)?;

    stage.clone_from(y);
    stage.axpy(0.5 * h, k1);
    stage.t = t0 + 0.5 * h;
    stage.apply_dirichlet();
    f(stage, k2)?;
    check_stage(k2, 2)?;

    stage.clone_from(y);
    stage.axpy(0.5 * h, k2);
    stage.t = t0 + 0.5 * h;
    stage.apply_dirichlet();
    f(stage, k3)?;
    check_stage(k3, 3)?;

    stage.clone_from(y);
    stage.axpy(h, k3);
    stage.t = t0 + h;
    stage.apply_dirichlet();
    f(stage, k4)?;
    check_stage(k4, 4)?;

    let w = h / 6.0;
    for (((yv, a), (b, c)), d) in y
        .amplitudes
        .iter_mut()
        .zip(&k1.amplitudes)
        .zip(k2.amplitudes.iter().zip(&k3.amplitudes))
        .zip(&k4.amplitudes)
    {
        combine(yv, a, b, c, d, w);
    }
    if let (Some(yv), Some(a), Some(b), Some(c), Some(d)) =
        (&mut y.reservoir, &k1.reservoir, &k2.reservoir, &k3.reservoir, &k4.reservoir)
    {
        for i in 0..yv.len() {
            yv[i] += w * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]);
        }
    }
    y.t = t0 + h;
    y.apply_dirichlet();
    Ok(())
}

fn combine(y: &mut [Complex64], a: &[Complex64], b: &[Complex64], c: &[Complex64], d: &[Complex64], w: f64) {
    for i in 0..y.len() {
        y[i] += (a[i] + b[i] * 2.0 + c[i] * 2.0 + d[i]) * w;
    }
}

/// One RK4 step with an allocating right-hand side.
pub fn rk4_step<F>(state: &SimState, mut rhs: F, h: f64) -> Result<SimState>
where
    F: FnMut(&SimState) -> Result<SimState>,
{
    if !(h > 0.0) {
        return Err(Error::param("h", format!("time step must be positive, got {h}")));
    }
    let mut y = state.clone();
    let mut ws = Rk4Workspace::new(state);
    rk4_advance(&mut y, h, &mut ws, |s, out| {
        let d = rhs(s)?;
        if d.tag != s.tag || d.grid != s.grid {
            return Err(Error::TagMismatch { expected: s.tag, found: d.tag });
        }
        *out = d;
        Ok(())
    })?;
    Ok(y)
}

/// Receives the states selected for output.
pub trait SnapshotSink {
    fn emit(&mut self, index: usize, state: &SimState) -> Result<()>;
}

/// Keeps every emitted state in memory.
#[derive(Debug, Clone, Default)]
pub struct MemorySink {
    pub states: Vec<SimState>,
}

impl SnapshotSink for MemorySink {
    fn emit(&mut self, _index: usize, state: &SimState) -> Result<()> {
        self.states.push(state.clone());
        Ok(())
    }
}

/// Discards snapshots; diagnostics are still recorded by the run loop.
#[derive(Debug, Clone, Copy, Default)]
pub struct NullSink;

impl SnapshotSink for NullSink {
    fn emit(&mut self, _index: usize, _state: &SimState) -> Result<()> {
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub steps: u64,
    pub snapshots: usize,
    pub cfl: f64,
    pub diagnostics: RunDiagnostics,
    pub final_state: SimState,
}

/// Integrates `init` to `cfg.t_end`, emitting the initial state and every
/// `snapshot_every`-th step. Time is kept as `step · h`.
pub fn run_simulation(
    init: &SimState,
    params: &ModelParams,
    cfg: &RunConfig,
    sink: &mut dyn SnapshotSink,
) -> Result<RunSummary> {
    cfg.validate()?;
    if init.tag != params.tag() {
        return Err(Error::TagMismatch { expected: params.tag(), found: init.tag });
    }
    init.check_finite()?;
    let model = params.prepare(&init.grid)?;
    let cfl = cfl_ratio(&init.grid, cfg.h, params.hbar(), params.kinetic_mass());
    if cfl > 1.0 && cfg.cfl_policy == CflPolicy::Reject {
        return Err(Error::CflRejected { ratio: cfl });
    }
    integrate(init, &model, cfg, cfl, sink)
}

fn integrate(
    init: &SimState,
    model: &PreparedModel,
    cfg: &RunConfig,
    cfl: f64,
    sink: &mut dyn SnapshotSink,
) -> Result<RunSummary> {
    let steps = cfg.steps();
    let mut state = init.clone();
    let mut ws = Rk4Workspace::new(&state);
    let mut diag = DiagnosticsRecorder::new(state.tag);
    let mut emitted = 0usize;
    let mut last_good_t = state.t;

    sink.emit(emitted, &state)?;
    diag.record(&state);
    emitted += 1;

    let t_origin = init.t;
    for step in 1..=steps {
        let advanced = rk4_advance(&mut state, cfg.h, &mut ws, |s, out| {
            model.eval_into(s, out);
            Ok(())
        });
        if advanced.is_err() {
            return Err(Error::Diverged { step, last_good_t });
        }
        state.t = t_origin + step as f64 * cfg.h;
        if step % cfg.snapshot_every == 0 {
            sink.emit(emitted, &state)?;
            diag.record(&state);
            emitted += 1;
            last_good_t = state.t;
        }
    }
    Ok(RunSummary { steps, snapshots: emitted, cfl, diagnostics: diag.finish(), final_state: state })
}
