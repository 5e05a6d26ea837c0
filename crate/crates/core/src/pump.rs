//! Coherent laser drive, incoherent reservoir pumping, and the conversions
//! from laser power to model units.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid, RealField};

/// Speed of light in μm/ps (3×10¹⁴ μm/s).
pub const SPEED_OF_LIGHT: f64 = 300.0;

/// Vacuum permittivity in e²/(meV·μm).
pub const VACUUM_PERMITTIVITY: f64 = 55.2635e-3;

/// 10 nW in meV/ps, written to three significant figures (6.24×10¹³ meV/s).
/// The published field amplitudes were computed from this figure.
pub const POWER_10NW_3SF: f64 = 62.4;

/// 10 nW in meV/ps, written to four significant figures.
/// The published pump rates were computed from this figure.
pub const POWER_10NW_4SF: f64 = 62.42;

/// Gaussian laser spot with a plane-wave phase, in the frame rotating with the cavity mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpSpec {
    /// meV·μm^(-1/2) in 1D, meV·μm^(-1) in 2D.
    pub f_p: f64,
    /// μm⁻¹, per axis.
    pub k_p: [f64; 2],
    /// Pump detuning from the cavity mode, ps⁻¹.
    pub delta_omega: f64,
    /// Spot width, μm.
    pub w: f64,
    /// Spot center, μm.
    pub x0: [f64; 2],
}

impl PumpSpec {
    pub fn off() -> Self {
        PumpSpec { f_p: 0.0, k_p: [0.0; 2], delta_omega: 0.0, w: 1.0, x0: [0.0; 2] }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.w > 0.0) {
            return Err(Error::param("w", format!("spot width must be positive, got {}", self.w)));
        }
        if !(self.f_p >= 0.0) {
            return Err(Error::param("F_p", format!("amplitude must be non-negative, got {}", self.f_p)));
        }
        Ok(())
    }

    /// Time-independent part `F_p e^{i k·x} e^{-|x-x0|²/2w²}`.
    pub fn spatial(&self, pos: [f64; 2]) -> Complex64 {
        let phase = self.k_p[0] * pos[0] + self.k_p[1] * pos[1];
        let dx = pos[0] - self.x0[0];
        let dy = pos[1] - self.x0[1];
        let envelope = (-(dx * dx + dy * dy) / (2.0 * self.w * self.w)).exp();
        Complex64::from_polar(self.f_p * envelope, phase)
    }

    /// `e^{-i δω t}`
    pub fn carrier(&self, t: f64) -> Complex64 {
        Complex64::from_polar(1.0, -self.delta_omega * t)
    }

    /// Samples the spatial profile on every node of `grid`.
    pub fn profile(&self, grid: &Grid) -> Vec<Complex64> {
        (0..grid.len()).map(|k| self.spatial(grid.position(k))).collect()
    }
}

/// `F(x, t) = F_p e^{i(k_p·x − δω t)} e^{−|x−x0|²/(2w²)}`.
pub fn pump_field(spec: &PumpSpec, pos: [f64; 2], t: f64) -> Complex64 {
    spec.spatial(pos) * spec.carrier(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PumpProfile {
    Gaussian,
    Uniform,
}

impl PumpProfile {
    pub fn name(self) -> &'static str {
        match self {
            PumpProfile::Gaussian => "gaussian",
            PumpProfile::Uniform => "uniform",
        }
    }
}

/// Non-resonant pumping rate P(x) feeding the reservoir.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncoherentPumpSpec {
    /// μm⁻¹·ps⁻¹ in 1D, μm⁻²·ps⁻¹ in 2D.
    pub p0: f64,
    /// μm
    pub sigma_p: f64,
    pub profile: PumpProfile,
}

impl IncoherentPumpSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.p0 >= 0.0) {
            return Err(Error::param("P", format!("pump rate must be non-negative, got {}", self.p0)));
        }
        if !(self.sigma_p > 0.0) {
            return Err(Error::param("sigma_p", format!("width must be positive, got {}", self.sigma_p)));
        }
        Ok(())
    }

    pub fn sample(&self, grid: &Grid) -> RealField {
        RealField::from_fn(*grid, |x, y| incoherent_pump(self, [x, y]))
    }
}

pub fn incoherent_pump(spec: &IncoherentPumpSpec, pos: [f64; 2]) -> f64 {
    match spec.profile {
        PumpProfile::Uniform => spec.p0,
        PumpProfile::Gaussian => {
            let r2 = pos[0] * pos[0] + pos[1] * pos[1];
            spec.p0 * (-r2 / (2.0 * spec.sigma_p * spec.sigma_p)).exp()
        }
    }
}

/// Illuminated region a laser power is spread over.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extent {
    /// Microwire length, μm.
    Length(f64),
    /// Cavity area, μm².
    Area(f64),
}

impl Extent {
    fn measure(self) -> f64 {
        match self {
            Extent::Length(l) => l,
            Extent::Area(a) => a,
        }
    }
}

/// Field amplitude from laser power via `P/A = (c ε₀ / 2) F_p²`.
///
/// `power` is in meV/ps. Returns meV·μm^(-1/2) for a length, meV·μm⁻¹ for an area.
pub fn power_to_field_amplitude(power: f64, extent: Extent) -> Result<f64> {
    if !(power >= 0.0) {
        return Err(Error::param("P", format!("laser power must be non-negative, got {power}")));
    }
    let size = extent.measure();
    if !(size > 0.0) {
        return Err(Error::param("extent", format!("must be positive, got {size}")));
    }
    Ok((2.0 * power / (SPEED_OF_LIGHT * VACUUM_PERMITTIVITY * size)).sqrt())
}

/// Pumping rate per unit length (1D) or area (2D) from laser power in meV/ps.
pub fn power_to_pump_rate(power: f64, extent: Extent) -> Result<f64> {
    if !(power >= 0.0) {
        return Err(Error::param("P", format!("laser power must be non-negative, got {power}")));
    }
    let size = extent.measure();
    if !(size > 0.0) {
        return Err(Error::param("extent", format!("must be positive, got {size}")));
    }
    Ok(power / size)
}
