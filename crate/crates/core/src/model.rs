//! Right-hand sides of the four pumping-scheme models.
//!
//! Every model is written as `dState/dt = f(State, t)` on a [`SimState`].
//! Condensate amplitudes pinned by a Dirichlet boundary get a zero
//! derivative, so they stay at zero through every Runge-Kutta stage.
//!
//! Units: energies in meV, lengths in μm, times in ps.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{laplacian_into, ComplexField, Grid, RealField};
use crate::pump::{IncoherentPumpSpec, PumpProfile, PumpSpec};

/// Reduced Planck constant, meV·ps.
pub const HBAR: f64 = 0.6582;

/// Electron mass scale used by the parameter tables, meV/(μm/ps)².
pub const M0: f64 = 5.677e3;

const PAR_MIN_NODES: usize = 4096;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelTag {
    /// Coupled photon/exciton fields, coherent pump.
    Cnrp1,
    /// Spin-resolved photon/exciton fields, two coherent pumps.
    Cnrp1Spin,
    /// Lower-polariton GPE with a coherent source.
    Cnrp2,
    /// Lower-polariton GPE fed by an incoherently pumped reservoir.
    Hinrp,
}

impl ModelTag {
    pub const ALL: [ModelTag; 4] = [ModelTag::Cnrp1, ModelTag::Cnrp1Spin, ModelTag::Cnrp2, ModelTag::Hinrp];

    pub fn name(self) -> &'static str {
        match self {
            ModelTag::Cnrp1 => "cnrp1",
            ModelTag::Cnrp1Spin => "cnrp1_spin",
            ModelTag::Cnrp2 => "cnrp2",
            ModelTag::Hinrp => "hinrp",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == name)
    }

    pub fn code(self) -> u32 {
        match self {
            ModelTag::Cnrp1 => 0,
            ModelTag::Cnrp1Spin => 1,
            ModelTag::Cnrp2 => 2,
            ModelTag::Hinrp => 3,
        }
    }

    pub fn from_code(code: u32) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.code() == code)
    }

    /// Names of the complex amplitudes, in storage order.
    pub fn amplitude_names(self) -> &'static [&'static str] {
        match self {
            ModelTag::Cnrp1 => &["psi_c", "psi_x"],
            ModelTag::Cnrp1Spin => &["psi_c_plus", "psi_c_minus", "psi_x_plus", "psi_x_minus"],
            ModelTag::Cnrp2 | ModelTag::Hinrp => &["psi"],
        }
    }

    pub fn has_reservoir(self) -> bool {
        self == ModelTag::Hinrp
    }

    /// All field names: amplitudes followed by `n_R` when present.
    pub fn field_names(self) -> Vec<&'static str> {
        let mut names = self.amplitude_names().to_vec();
        if self.has_reservoir() {
            names.push("n_R");
        }
        names
    }
}

impl fmt::Display for ModelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelTag::Cnrp1 => "CNRP1",
            ModelTag::Cnrp1Spin => "CNRP1_SPIN",
            ModelTag::Cnrp2 => "CNRP2",
            ModelTag::Hinrp => "HINRP",
        })
    }
}

/// Dynamical unknowns of one model at one instant.
///
/// Derivatives returned by the right-hand sides use the same type, with each
/// entry holding the time derivative of the corresponding field.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub tag: ModelTag,
    pub grid: Grid,
    /// ps
    pub t: f64,
    /// Complex amplitudes in [`ModelTag::amplitude_names`] order.
    pub amplitudes: Vec<Vec<Complex64>>,
    /// Reservoir density `n_R`, present only for [`ModelTag::Hinrp`].
    pub reservoir: Option<Vec<f64>>,
}

impl SimState {
    pub fn new(
        tag: ModelTag,
        grid: Grid,
        t: f64,
        amplitudes: Vec<Vec<Complex64>>,
        reservoir: Option<Vec<f64>>,
    ) -> Result<Self> {
        let want = tag.amplitude_names().len();
        if amplitudes.len() != want {
            return Err(Error::param(
                "amplitudes",
                format!("{tag} carries {want} complex fields, got {}", amplitudes.len()),
            ));
        }
        for a in &amplitudes {
            grid.check_len(a.len())?;
        }
        match (&reservoir, tag.has_reservoir()) {
            (Some(r), true) => grid.check_len(r.len())?,
            (None, false) => {}
            (Some(_), false) => return Err(Error::param("n_R", format!("{tag} has no reservoir field"))),
            (None, true) => return Err(Error::param("n_R", format!("{tag} requires a reservoir field"))),
        }
        if !(t >= 0.0) {
            return Err(Error::param("t", format!("time must be non-negative, got {t}")));
        }
        Ok(SimState { tag, grid, t, amplitudes, reservoir })
    }

    pub fn zeros(tag: ModelTag, grid: Grid) -> Self {
        let n = grid.len();
        SimState {
            tag,
            grid,
            t: 0.0,
            amplitudes: vec![vec![Complex64::new(0.0, 0.0); n]; tag.amplitude_names().len()],
            reservoir: tag.has_reservoir().then(|| vec![0.0; n]),
        }
    }

    pub fn amplitude(&self, name: &str) -> Option<ComplexField> {
        let idx = self.tag.amplitude_names().iter().position(|n| *n == name)?;
        Some(ComplexField { grid: self.grid, values: self.amplitudes[idx].clone() })
    }

    pub fn reservoir_field(&self) -> Option<RealField> {
        self.reservoir.as_ref().map(|r| RealField { grid: self.grid, values: r.clone() })
    }

    /// Fails on the first NaN or infinity.
    pub fn check_finite(&self) -> Result<()> {
        for (name, a) in self.tag.amplitude_names().iter().zip(&self.amplitudes) {
            if let Some(node) = a.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(Error::NonFinite { field: (*name).to_string(), node });
            }
        }
        if let Some(r) = &self.reservoir {
            if let Some(node) = r.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { field: "n_R".to_string(), node });
            }
        }
        Ok(())
    }

    /// Zeroes every amplitude on Dirichlet-pinned nodes. The reservoir has no
    /// spatial coupling and is left alone.
    pub fn apply_dirichlet(&mut self) {
        let grid = self.grid;
        for a in &mut self.amplitudes {
            for k in grid.pinned_nodes() {
                a[k] = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// `self += a * x`, over every field.
    pub(crate) fn axpy(&mut self, a: f64, x: &SimState) {
        for (dst, src) in self.amplitudes.iter_mut().zip(&x.amplitudes) {
            for (d, s) in dst.iter_mut().zip(src) {
                *d += s * a;
            }
        }
        if let (Some(dst), Some(src)) = (&mut self.reservoir, &x.reservoir) {
            for (d, s) in dst.iter_mut().zip(src) {
                *d += a * s;
            }
        }
    }
}

/// Sign of the kinetic term in the coherent-source GPE.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KineticSign {
    /// `−ħ²∇²/2m`, the usual Schrödinger sign.
    Negative,
    /// `+ħ²∇²/2m`, as the source-driven equation is sometimes printed.
    Positive,
}

impl KineticSign {
    pub fn factor(self) -> f64 {
        match self {
            KineticSign::Negative => -1.0,
            KineticSign::Positive => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cnrp1Params {
    pub hbar: f64,
    /// Rabi coupling, meV.
    pub omega_r: f64,
    /// ps⁻¹
    pub gamma_c: f64,
    /// ps⁻¹
    pub gamma_x: f64,
    /// Photon mass, meV/(μm/ps)².
    pub m_c: f64,
    /// Exciton nonlinearity, meV·μm.
    pub g: f64,
    /// Exciton detuning, meV.
    pub delta: f64,
    pub pump: PumpSpec,
}

impl Cnrp1Params {
    /// Spinless coupled-field parameters for the 1D microwire.
    pub fn table2() -> Self {
        let gamma_c = 0.1;
        Cnrp1Params {
            hbar: HBAR,
            omega_r: 4.4,
            gamma_c,
            gamma_x: 0.01,
            m_c: M0 * 2e-5,
            g: 1.132 * HBAR * gamma_c,
            delta: 5.0,
            pump: PumpSpec { f_p: 0.5, k_p: [1.0, 0.0], delta_omega: 5.0, w: 10.0, x0: [0.0; 2] },
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_common(self.hbar, self.m_c, "m_c", &[("gamma_c", self.gamma_c), ("gamma_x", self.gamma_x)])?;
        self.pump.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cnrp1SpinParams {
    pub hbar: f64,
    pub omega_r: f64,
    pub gamma_c: f64,
    pub gamma_x: f64,
    pub m_c: f64,
    /// Same-spin nonlinearity, meV·μm.
    pub g1: f64,
    /// Opposite-spin nonlinearity, meV·μm.
    pub g2: f64,
    pub delta: f64,
    /// Drive of the σ = +1 photon field.
    pub pump_plus: PumpSpec,
    /// Drive of the σ = −1 photon field.
    pub pump_minus: PumpSpec,
}

impl Cnrp1SpinParams {
    /// Spin-resolved parameters: the spinless set plus two pumps, `g1 = 10 g2`.
    pub fn table3() -> Self {
        let base = Cnrp1Params::table2();
        let pump = base.pump;
        Cnrp1SpinParams {
            hbar: base.hbar,
            omega_r: base.omega_r,
            gamma_c: base.gamma_c,
            gamma_x: base.gamma_x,
            m_c: base.m_c,
            g1: 1.132 * base.hbar * base.gamma_c,
            g2: 0.1132 * base.hbar * base.gamma_c,
            delta: base.delta,
            pump_plus: pump,
            pump_minus: pump,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_common(self.hbar, self.m_c, "m_c", &[("gamma_c", self.gamma_c), ("gamma_x", self.gamma_x)])?;
        self.pump_plus.validate()?;
        self.pump_minus.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cnrp2Params {
    pub hbar: f64,
    /// Lower-polariton mass, meV/(μm/ps)².
    pub m: f64,
    pub gamma_c: f64,
    /// meV·μm (1D), enters as `ħ g |ψ|²`.
    pub g: f64,
    /// Pump-to-polariton coupling, dimensionless.
    pub eta: f64,
    /// External potential, meV. `None` is zero everywhere.
    pub v_ext: Option<RealField>,
    pub pump: PumpSpec,
    pub kinetic_sign: KineticSign,
}

impl Cnrp2Params {
    pub fn table1() -> Self {
        let gamma_c = 0.5 / HBAR;
        Cnrp2Params {
            hbar: HBAR,
            m: 7.44e-5 * M0,
            gamma_c,
            g: 0.86,
            eta: 1.0,
            v_ext: None,
            pump: PumpSpec { f_p: 0.05, k_p: [0.0; 2], delta_omega: 0.0, w: 10.0, x0: [0.0; 2] },
            kinetic_sign: KineticSign::Negative,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_common(self.hbar, self.m, "m", &[("gamma_c", self.gamma_c)])?;
        if !self.eta.is_finite() {
            return Err(Error::param("eta", "must be finite"));
        }
        self.pump.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HinrpParams {
    pub hbar: f64,
    /// Bottom of the lower-polariton branch, meV.
    pub e0: f64,
    pub m: f64,
    pub gamma_c: f64,
    /// Reservoir relaxation rate, ps⁻¹.
    pub gamma_r: f64,
    /// Gain coefficient: the condensate gains at rate `R n_R`.
    pub r: f64,
    /// meV·μm, enters as `ħ g |ψ|²`.
    pub g: f64,
    /// Reservoir blueshift coefficient.
    pub g_r: f64,
    /// Pump-induced blueshift coefficient, μm.
    pub big_g: f64,
    pub v_ext: Option<RealField>,
    pub pump: IncoherentPumpSpec,
}

impl HinrpParams {
    pub fn table1() -> Self {
        HinrpParams {
            hbar: HBAR,
            e0: 0.0,
            m: 7.44e-5 * M0,
            gamma_c: 0.5 / HBAR,
            gamma_r: 2.0 / HBAR,
            r: 0.05 / HBAR,
            g: 0.86,
            g_r: 0.0,
            big_g: 0.0175,
            v_ext: None,
            pump: IncoherentPumpSpec { p0: 60.790, sigma_p: 20.0, profile: PumpProfile::Gaussian },
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_common(self.hbar, self.m, "m", &[("gamma_c", self.gamma_c)])?;
        if !(self.gamma_r > 0.0) {
            return Err(Error::param("gamma_R", format!("must be positive, got {}", self.gamma_r)));
        }
        if !(self.r >= 0.0) {
            return Err(Error::param("R", format!("must be non-negative, got {}", self.r)));
        }
        self.pump.validate()
    }

    /// Pump rate above which a uniform reservoir at `P/γ_R` outgains the loss.
    pub fn threshold_pump(&self) -> f64 {
        self.gamma_r * self.gamma_c / self.r
    }

    /// Net linear amplitude gain `(R n_R − γ_c)/2` with the reservoir relaxed to `p / γ_R`.
    pub fn linear_gain_below_condensation(&self, p: f64) -> f64 {
        (self.r * p / self.gamma_r - self.gamma_c) / 2.0
    }

    /// Uniform steady state with a non-empty condensate: `(n_R, |ψ|²)`.
    pub fn uniform_fixed_point(&self, p: f64) -> (f64, f64) {
        let n = self.gamma_c / self.r;
        (n, (p - self.gamma_r * n) / (self.r * n))
    }
}

fn check_common(hbar: f64, mass: f64, mass_name: &'static str, rates: &[(&'static str, f64)]) -> Result<()> {
    if !(hbar > 0.0) {
        return Err(Error::param("hbar", format!("must be positive, got {hbar}")));
    }
    if !(mass > 0.0) {
        return Err(Error::param(mass_name, format!("must be positive, got {mass}")));
    }
    for &(name, v) in rates {
        if !(v >= 0.0) {
            return Err(Error::param(name, format!("decay rate must be non-negative, got {v}")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelParams {
    Cnrp1(Cnrp1Params),
    Cnrp1Spin(Cnrp1SpinParams),
    Cnrp2(Cnrp2Params),
    Hinrp(HinrpParams),
}

impl ModelParams {
    pub fn tag(&self) -> ModelTag {
        match self {
            ModelParams::Cnrp1(_) => ModelTag::Cnrp1,
            ModelParams::Cnrp1Spin(_) => ModelTag::Cnrp1Spin,
            ModelParams::Cnrp2(_) => ModelTag::Cnrp2,
            ModelParams::Hinrp(_) => ModelTag::Hinrp,
        }
    }

    pub fn hbar(&self) -> f64 {
        match self {
            ModelParams::Cnrp1(p) => p.hbar,
            ModelParams::Cnrp1Spin(p) => p.hbar,
            ModelParams::Cnrp2(p) => p.hbar,
            ModelParams::Hinrp(p) => p.hbar,
        }
    }

    /// Mass in the kinetic term; this is what the CFL bound depends on.
    pub fn kinetic_mass(&self) -> f64 {
        match self {
            ModelParams::Cnrp1(p) => p.m_c,
            ModelParams::Cnrp1Spin(p) => p.m_c,
            ModelParams::Cnrp2(p) => p.m,
            ModelParams::Hinrp(p) => p.m,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelParams::Cnrp1(p) => p.validate(),
            ModelParams::Cnrp1Spin(p) => p.validate(),
            ModelParams::Cnrp2(p) => p.validate(),
            ModelParams::Hinrp(p) => p.validate(),
        }
    }

    /// Validates the parameters and caches grid-sampled pump profiles.
    pub fn prepare(&self, grid: &Grid) -> Result<PreparedModel> {
        self.validate()?;
        let check_v = |v: &Option<RealField>| -> Result<Option<Vec<f64>>> {
            match v {
                None => Ok(None),
                Some(f) => {
                    if f.grid != *grid {
                        return Err(Error::param("V_ext", "potential sampled on a different grid"));
                    }
                    Ok(Some(f.values.clone()))
                }
            }
        };
        let (coherent, incoherent, v_ext) = match self {
            ModelParams::Cnrp1(p) => (vec![p.pump.profile(grid)], None, None),
            ModelParams::Cnrp1Spin(p) => {
                (vec![p.pump_plus.profile(grid), p.pump_minus.profile(grid)], None, None)
            }
            ModelParams::Cnrp2(p) => (vec![p.pump.profile(grid)], None, check_v(&p.v_ext)?),
            ModelParams::Hinrp(p) => (Vec::new(), Some(p.pump.sample(grid).values), check_v(&p.v_ext)?),
        };
        Ok(PreparedModel { params: self.clone(), grid: *grid, coherent, incoherent, v_ext })
    }
}

/// Model parameters bound to a grid, with pump profiles sampled once.
#[derive(Debug, Clone)]
pub struct PreparedModel {
    params: ModelParams,
    grid: Grid,
    coherent: Vec<Vec<Complex64>>,
    incoherent: Option<Vec<f64>>,
    v_ext: Option<Vec<f64>>,
}

impl PreparedModel {
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn tag(&self) -> ModelTag {
        self.params.tag()
    }

    /// Incoherent pump rate sampled on the grid (HINRP only).
    pub fn pump_rate(&self) -> Option<&[f64]> {
        self.incoherent.as_deref()
    }

    /// Checked evaluation: tag, grid and finiteness of the input are verified.
    pub fn rhs(&self, state: &SimState) -> Result<SimState> {
        if state.tag != self.tag() {
            return Err(Error::TagMismatch { expected: self.tag(), found: state.tag });
        }
        if state.grid != self.grid {
            return Err(Error::InvalidGrid("state and model live on different grids".into()));
        }
        state.check_finite()?;
        let mut out = SimState::zeros(state.tag, state.grid);
        out.t = state.t;
        self.eval_into(state, &mut out);
        Ok(out)
    }

    /// Unchecked evaluation into a preallocated derivative of matching shape.
    pub(crate) fn eval_into(&self, s: &SimState, out: &mut SimState) {
        let t = s.t;
        for (src, dst) in s.amplitudes.iter().zip(out.amplitudes.iter_mut()) {
            laplacian_into(&self.grid, src, dst);
        }
        match &self.params {
            ModelParams::Cnrp1(p) => self.eval_cnrp1(p, t, s, out),
            ModelParams::Cnrp1Spin(p) => self.eval_cnrp1_spin(p, t, s, out),
            ModelParams::Cnrp2(p) => self.eval_cnrp2(p, t, s, out),
            ModelParams::Hinrp(p) => self.eval_hinrp(p, s, out),
        }
        let grid = self.grid;
        for a in &mut out.amplitudes {
            for k in grid.pinned_nodes() {
                a[k] = Complex64::new(0.0, 0.0);
            }
        }
    }

    // Each out-amplitude holds the Laplacian of its field on entry and is
    // overwritten node by node with the time derivative.

    fn eval_cnrp1(&self, p: &Cnrp1Params, t: f64, s: &SimState, out: &mut SimState) {
        let carrier = p.pump.carrier(t);
        let pump = &self.coherent[0];
        let kin = p.hbar * p.hbar / (2.0 * p.m_c);
        let inv = -I / p.hbar;
        let (psi_c, psi_x) = (&s.amplitudes[0], &s.amplitudes[1]);
        let [d_c, d_x] = &mut out.amplitudes[..] else { unreachable!() };
        for_each_node(d_c, d_x, |k, lap_c, dx| {
            let (c, x) = (psi_c[k], psi_x[k]);
            let f = pump[k] * carrier;
            *lap_c = inv * (x * p.omega_r + f - *lap_c * kin - I * (p.hbar * p.gamma_c / 2.0) * c);
            let shift = Complex64::new(p.g * x.norm_sqr() + p.delta, -p.hbar * p.gamma_x / 2.0);
            *dx = inv * (c * p.omega_r + shift * x);
        });
    }

    fn eval_cnrp1_spin(&self, p: &Cnrp1SpinParams, t: f64, s: &SimState, out: &mut SimState) {
        let (car_p, car_m) = (p.pump_plus.carrier(t), p.pump_minus.carrier(t));
        let (pump_p, pump_m) = (&self.coherent[0], &self.coherent[1]);
        let kin = p.hbar * p.hbar / (2.0 * p.m_c);
        let inv = -I / p.hbar;
        let loss_c = I * (p.hbar * p.gamma_c / 2.0);
        let [cp, cm, xp, xm] = &s.amplitudes[..] else { unreachable!() };
        let [d_cp, d_cm, d_xp, d_xm] = &mut out.amplitudes[..] else { unreachable!() };
        for_each_node(d_cp, d_cm, |k, lp, lm| {
            *lp = inv * (xp[k] * p.omega_r + pump_p[k] * car_p - *lp * kin - loss_c * cp[k]);
            *lm = inv * (xm[k] * p.omega_r + pump_m[k] * car_m - *lm * kin - loss_c * cm[k]);
        });
        let exciton = |own: Complex64, other: Complex64, photon: Complex64| -> Complex64 {
            let shift = Complex64::new(
                p.g1 * own.norm_sqr() + p.g2 * other.norm_sqr() + p.delta,
                -p.hbar * p.gamma_x / 2.0,
            );
            inv * (photon * p.omega_r + shift * own)
        };
        for_each_node(d_xp, d_xm, |k, dp, dm| {
            *dp = exciton(xp[k], xm[k], cp[k]);
            *dm = exciton(xm[k], xp[k], cm[k]);
        });
    }

    fn eval_cnrp2(&self, p: &Cnrp2Params, t: f64, s: &SimState, out: &mut SimState) {
        let carrier = p.pump.carrier(t);
        let pump = &self.coherent[0];
        let kin = p.kinetic_sign.factor() * p.hbar * p.hbar / (2.0 * p.m);
        let inv = -I / p.hbar;
        let loss = I * (p.hbar * p.gamma_c / 2.0);
        let source = p.eta / p.hbar;
        let psi = &s.amplitudes[0];
        let v = self.v_ext.as_deref();
        for_each_node1(&mut out.amplitudes[0], |k, d| {
            let z = psi[k];
            let pot = v.map_or(0.0, |v| v[k]) + p.hbar * p.g * z.norm_sqr();
            *d = inv * (*d * kin + z * pot - loss * z) + pump[k] * carrier * source;
        });
    }

    fn eval_hinrp(&self, p: &HinrpParams, s: &SimState, out: &mut SimState) {
        let kin = p.hbar * p.hbar / (2.0 * p.m);
        let inv = -I / p.hbar;
        let psi = &s.amplitudes[0];
        let n_r = s.reservoir.as_ref().expect("HINRP state carries n_R");
        let pump = self.incoherent.as_ref().expect("HINRP model samples P");
        let v = self.v_ext.as_deref();
        for_each_node1(&mut out.amplitudes[0], |k, d| {
            let z = psi[k];
            let n = n_r[k];
            let v_r = p.hbar * p.big_g * pump[k] + p.hbar * p.g_r * n;
            let real = p.e0 + v.map_or(0.0, |v| v[k]) + p.hbar * p.g * z.norm_sqr() + v_r;
            let gain = Complex64::new(0.0, p.hbar / 2.0 * (p.r * n - p.gamma_c));
            *d = inv * (z * real - *d * kin + gain * z);
        });
        let dn = out.reservoir.as_mut().expect("HINRP derivative carries n_R");
        for (k, d) in dn.iter_mut().enumerate() {
            let n = n_r[k];
            *d = pump[k] - p.gamma_r * n - p.r * n * psi[k].norm_sqr();
        }
    }
}

fn for_each_node1(a: &mut [Complex64], f: impl Fn(usize, &mut Complex64) + Sync) {
    if a.len() >= PAR_MIN_NODES {
        a.par_iter_mut().enumerate().for_each(|(k, v)| f(k, v));
    } else {
        a.iter_mut().enumerate().for_each(|(k, v)| f(k, v));
    }
}

fn for_each_node(
    a: &mut [Complex64],
    b: &mut [Complex64],
    f: impl Fn(usize, &mut Complex64, &mut Complex64) + Sync,
) {
    if a.len() >= PAR_MIN_NODES {
        a.par_iter_mut().zip(b.par_iter_mut()).enumerate().for_each(|(k, (u, v))| f(k, u, v));
    } else {
        a.iter_mut().zip(b.iter_mut()).enumerate().for_each(|(k, (u, v))| f(k, u, v));
    }
}

fn expect_tag(s: &SimState, tag: ModelTag) -> Result<()> {
    if s.tag != tag {
        return Err(Error::TagMismatch { expected: tag, found: s.tag });
    }
    Ok(())
}

/// Spinless coupled photon/exciton system.
pub fn rhs_cnrp1(s: &SimState, p: &Cnrp1Params) -> Result<SimState> {
    expect_tag(s, ModelTag::Cnrp1)?;
    ModelParams::Cnrp1(p.clone()).prepare(&s.grid)?.rhs(s)
}

/// Spin-resolved photon/exciton system with same- and opposite-spin nonlinearities.
pub fn rhs_cnrp1_spin(s: &SimState, p: &Cnrp1SpinParams) -> Result<SimState> {
    expect_tag(s, ModelTag::Cnrp1Spin)?;
    ModelParams::Cnrp1Spin(p.clone()).prepare(&s.grid)?.rhs(s)
}

/// Lower-polariton GPE with loss and a coherent source `i η F`.
pub fn rhs_cnrp2(s: &SimState, p: &Cnrp2Params) -> Result<SimState> {
    expect_tag(s, ModelTag::Cnrp2)?;
    ModelParams::Cnrp2(p.clone()).prepare(&s.grid)?.rhs(s)
}

/// Condensate coupled to an incoherently pumped reservoir with linear gain `R n_R`.
pub fn rhs_hinrp(s: &SimState, p: &HinrpParams) -> Result<SimState> {
    expect_tag(s, ModelTag::Hinrp)?;
    ModelParams::Hinrp(p.clone()).prepare(&s.grid)?.rhs(s)
}
