//! Initial states: empty cavities for the coupled photon/exciton models,
//! Gaussian condensate (and reservoir) for the single-field models.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::model::{ModelTag, SimState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitKind {
    Zero,
    Gaussian,
}

impl InitKind {
    pub fn name(self) -> &'static str {
        match self {
            InitKind::Zero => "zero",
            InitKind::Gaussian => "gaussian",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitSpec {
    pub kind: InitKind,
    /// Initial particle number scale of the Gaussian.
    pub n_c: f64,
    /// Gaussian width, μm.
    pub sigma_p: f64,
    /// Pump amplitude setting the initial reservoir height (HINRP).
    pub p0: f64,
    /// Reservoir relaxation rate, ps⁻¹ (HINRP).
    pub gamma_r: f64,
}

impl InitSpec {
    pub fn zero() -> Self {
        InitSpec { kind: InitKind::Zero, n_c: 0.0, sigma_p: 20.0, p0: 0.0, gamma_r: 1.0 }
    }

    pub fn gaussian(n_c: f64, sigma_p: f64) -> Self {
        InitSpec { kind: InitKind::Gaussian, n_c, sigma_p, p0: 0.0, gamma_r: 1.0 }
    }

    pub fn with_reservoir(mut self, p0: f64, gamma_r: f64) -> Self {
        self.p0 = p0;
        self.gamma_r = gamma_r;
        self
    }

    /// Peak of the condensate Gaussian, `√N_c / (σ_p √π)`.
    pub fn psi_peak(&self) -> f64 {
        self.n_c.sqrt() / (self.sigma_p * std::f64::consts::PI.sqrt())
    }
}

/// Builds the `t = 0` state for `tag`.
///
/// Gaussian amplitudes follow `ψ = √N_c/(σ_p√π) · exp(−|x|²/2σ_p²)` in both
/// geometries (the 1D norm is therefore `N_c/(σ_p√π)`, not `N_c`), and the
/// HINRP reservoir starts at `n_R = P0/γ_R · exp(−|x|²/2σ_p²)`. Amplitudes on
/// Dirichlet-pinned nodes are set to zero.
pub fn init_state(spec: &InitSpec, grid: &Grid, tag: ModelTag) -> Result<SimState> {
    if !(spec.n_c >= 0.0) {
        return Err(Error::param("N_c", format!("must be non-negative, got {}", spec.n_c)));
    }
    let mut state = SimState::zeros(tag, *grid);
    match (spec.kind, tag) {
        (InitKind::Zero, ModelTag::Cnrp1 | ModelTag::Cnrp1Spin | ModelTag::Cnrp2) => {}
        (InitKind::Zero, ModelTag::Hinrp) => {
            return Err(Error::param("kind", "the reservoir model starts from Gaussian distributions"));
        }
        (InitKind::Gaussian, ModelTag::Cnrp1 | ModelTag::Cnrp1Spin) => {
            return Err(Error::param("kind", format!("{tag} starts from empty fields")));
        }
        (InitKind::Gaussian, ModelTag::Cnrp2 | ModelTag::Hinrp) => {
            if !(spec.sigma_p > 0.0) {
                return Err(Error::param("sigma_p", format!("must be positive, got {}", spec.sigma_p)));
            }
            let two_s2 = 2.0 * spec.sigma_p * spec.sigma_p;
            let envelope: Vec<f64> = (0..grid.len())
                .map(|k| {
                    let [x, y] = grid.position(k);
                    (-(x * x + y * y) / two_s2).exp()
                })
                .collect();
            let peak = spec.psi_peak();
            state.amplitudes[0] = envelope.iter().map(|e| Complex64::new(peak * e, 0.0)).collect();
            if tag == ModelTag::Hinrp {
                if !(spec.gamma_r > 0.0) {
                    return Err(Error::param("gamma_R", format!("must be positive, got {}", spec.gamma_r)));
                }
                let height = spec.p0 / spec.gamma_r;
                state.reservoir = Some(envelope.iter().map(|e| height * e).collect());
            }
        }
    }
    state.apply_dirichlet();
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::HBAR;

    #[test]
    fn gaussian_peak_value() {
        let grid = Grid::square(241, 241, 24.0, 24.0).unwrap();
        let s = init_state(&InitSpec::gaussian(1.0, 20.0), &grid, ModelTag::Cnrp2).unwrap();
        let center = s.amplitudes[0][120 * 241 + 120];
        assert!((center.re - 0.028209479177387815).abs() < 1e-15);
        assert!((center.re - 1.0 / (20.0 * std::f64::consts::PI.sqrt())).abs() < 1e-16);
    }

    #[test]
    fn empty_gaussian_and_zero_states() {
        let grid = Grid::line(21, 10.0).unwrap();
        let s = init_state(&InitSpec::gaussian(0.0, 5.0), &grid, ModelTag::Cnrp2).unwrap();
        assert!(s.amplitudes[0].iter().all(|z| z.norm() == 0.0));
        let s = init_state(&InitSpec::zero(), &grid, ModelTag::Cnrp1Spin).unwrap();
        assert!(s.amplitudes.iter().flatten().all(|z| z.norm() == 0.0));
        assert_eq!(s.t, 0.0);
    }

    #[test]
    fn reservoir_height() {
        let grid = Grid::line(201, 100.0).unwrap();
        let spec = InitSpec::gaussian(1.0, 20.0).with_reservoir(60.790, 2.0 / HBAR);
        let s = init_state(&spec, &grid, ModelTag::Hinrp).unwrap();
        let n0 = s.reservoir.as_ref().unwrap()[100];
        assert!((n0 - 60.790 * HBAR / 2.0).abs() < 1e-12);
        assert!((n0 - 20.006).abs() < 1e-3);
    }

    #[test]
    fn inconsistent_specs_are_rejected() {
        let grid = Grid::line(21, 10.0).unwrap();
        assert!(init_state(&InitSpec::zero(), &grid, ModelTag::Hinrp).is_err());
        assert!(init_state(&InitSpec::gaussian(1.0, 2.0), &grid, ModelTag::Cnrp1).is_err());
        assert!(init_state(&InitSpec::gaussian(1.0, 0.0), &grid, ModelTag::Cnrp2).is_err());
        assert!(init_state(&InitSpec::gaussian(-1.0, 2.0), &grid, ModelTag::Cnrp2).is_err());
    }

    #[test]
    fn radial_symmetry_on_symmetric_grid() {
        let grid = Grid::square(31, 31, 12.0, 12.0).unwrap();
        let s = init_state(&InitSpec::gaussian(1.0, 2.0), &grid, ModelTag::Cnrp2).unwrap();
        let f = |i: usize, j: usize| s.amplitudes[0][j * 31 + i];
        // x ends are Dirichlet-pinned, so transposition only holds off them
        for j in 1..30 {
            for i in 1..30 {
                assert_eq!(f(i, j), f(j, i));
                assert_eq!(f(i, j), f(30 - i, j));
            }
        }
    }

    #[test]
    fn dirichlet_nodes_start_empty() {
        let grid = Grid::line(11, 4.0).unwrap();
        let s = init_state(&InitSpec::gaussian(1.0, 20.0), &grid, ModelTag::Cnrp2).unwrap();
        assert_eq!(s.amplitudes[0][0].norm(), 0.0);
        assert_eq!(s.amplitudes[0][10].norm(), 0.0);
        assert!(s.amplitudes[0][1].norm() > 0.0);
    }
}
