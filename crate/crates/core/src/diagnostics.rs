//! Densities, particle numbers, condensation onset and per-run peak summaries.

use std::fmt::Write as _;

use crate::grid::{ComplexField, RealField};
use crate::model::{ModelTag, SimState};

/// Fraction of the peak number that marks condensation onset.
pub const ONSET_FRACTION: f64 = 0.05;

/// Consecutive snapshots the number must stay above threshold.
pub const ONSET_PERSISTENCE: usize = 10;

pub fn density(f: &ComplexField) -> RealField {
    RealField { grid: f.grid, values: f.values.iter().map(|z| z.norm_sqr()).collect() }
}

/// Riemann sum `Σ|ψ|²·dx` (1D) or `Σ|ψ|²·dx·dy` (2D), boundary nodes at full weight.
pub fn total_number(f: &ComplexField) -> f64 {
    sum_norm_sqr(&f.values) * f.grid.cell_measure()
}

fn sum_norm_sqr(values: &[num_complex::Complex64]) -> f64 {
    values.iter().map(|z| z.norm_sqr()).sum()
}

/// First time the number reaches [`ONSET_FRACTION`] of its maximum and then
/// stays there for [`ONSET_PERSISTENCE`] snapshots (or until the series ends).
///
/// `series` holds `(t, N)` with increasing `t`. Returns `None` when the
/// series is empty or its maximum is 0.
pub fn condensation_onset(series: &[(f64, f64)]) -> Option<f64> {
    let max = series.iter().map(|&(_, n)| n).fold(0.0, f64::max);
    if !(max > 0.0) {
        return None;
    }
    let threshold = ONSET_FRACTION * max;
    let mut run_start: Option<usize> = None;
    for (idx, &(_, n)) in series.iter().enumerate() {
        if n >= threshold {
            let start = *run_start.get_or_insert(idx);
            if idx + 1 - start >= ONSET_PERSISTENCE {
                return Some(series[start].0);
            }
        } else {
            run_start = None;
        }
    }
    run_start.map(|s| series[s].0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldSeries {
    pub name: String,
    /// `(t, N)`: particle number for amplitudes, integrated density for `n_R`.
    pub samples: Vec<(f64, f64)>,
    /// Largest pointwise density seen (`|ψ|²` or `n_R`).
    pub peak_density: f64,
    pub peak_number: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunDiagnostics {
    pub model: ModelTag,
    pub fields: Vec<FieldSeries>,
    /// `(t, N_total)` summed over all condensate amplitudes.
    pub condensate: Vec<(f64, f64)>,
    /// Max over space-time of `|ψ|²`, over every amplitude field.
    pub peak_density: f64,
    /// Max over time of the condensate total.
    pub peak_number: f64,
    pub onset_time: Option<f64>,
    /// Count of (snapshot, node) pairs with `n_R < 0`.
    pub negativity_events: usize,
}

impl RunDiagnostics {
    pub fn field(&self, name: &str) -> Option<&FieldSeries> {
        self.fields.iter().find(|f| f.name == name)
    }

    /// Plain `key: value` summary.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "model: {}", self.model.name());
        let _ = writeln!(out, "snapshots: {}", self.condensate.len());
        if let Some(&(t, _)) = self.condensate.last() {
            let _ = writeln!(out, "t_last: {t}");
        }
        let _ = writeln!(out, "peak_density: {:.9e}", self.peak_density);
        let _ = writeln!(out, "peak_number: {:.9e}", self.peak_number);
        match self.onset_time {
            Some(t) => {
                let _ = writeln!(out, "onset_time: {t}");
            }
            None => {
                let _ = writeln!(out, "onset_time: none");
            }
        }
        let _ = writeln!(out, "negativity_events: {}", self.negativity_events);
        for f in &self.fields {
            let _ = writeln!(out, "{}.peak_density: {:.9e}", f.name, f.peak_density);
            let _ = writeln!(out, "{}.peak_number: {:.9e}", f.name, f.peak_number);
            if let Some(&(_, n)) = f.samples.last() {
                let _ = writeln!(out, "{}.final_number: {:.9e}", f.name, n);
            }
        }
        out
    }
}

/// Folds snapshots into [`RunDiagnostics`] one at a time.
#[derive(Debug, Clone)]
pub struct DiagnosticsRecorder {
    model: ModelTag,
    fields: Vec<FieldSeries>,
    condensate: Vec<(f64, f64)>,
    negativity_events: usize,
}

impl DiagnosticsRecorder {
    pub fn new(model: ModelTag) -> Self {
        let fields = model
            .field_names()
            .into_iter()
            .map(|name| FieldSeries { name: name.to_string(), samples: Vec::new(), peak_density: 0.0, peak_number: 0.0 })
            .collect();
        DiagnosticsRecorder { model, fields, condensate: Vec::new(), negativity_events: 0 }
    }

    pub fn record(&mut self, state: &SimState) {
        let w = state.grid.cell_measure();
        let mut total = 0.0;
        for (series, amp) in self.fields.iter_mut().zip(&state.amplitudes) {
            let peak = amp.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
            let n = sum_norm_sqr(amp) * w;
            total += n;
            series.push(state.t, n, peak);
        }
        if let Some(res) = &state.reservoir {
            let series = self.fields.last_mut().expect("reservoir series");
            let peak = res.iter().copied().fold(0.0, f64::max);
            series.push(state.t, res.iter().sum::<f64>() * w, peak);
            self.negativity_events += res.iter().filter(|&&n| n < 0.0).count();
        }
        self.condensate.push((state.t, total));
    }

    pub fn finish(self) -> RunDiagnostics {
        let n_amp = self.model.amplitude_names().len();
        let peak_density = self.fields[..n_amp].iter().map(|f| f.peak_density).fold(0.0, f64::max);
        let peak_number = self.condensate.iter().map(|&(_, n)| n).fold(0.0, f64::max);
        RunDiagnostics {
            model: self.model,
            onset_time: condensation_onset(&self.condensate),
            fields: self.fields,
            condensate: self.condensate,
            peak_density,
            peak_number,
            negativity_events: self.negativity_events,
        }
    }
}

impl FieldSeries {
    fn push(&mut self, t: f64, n: f64, peak: f64) {
        self.samples.push((t, n));
        self.peak_density = self.peak_density.max(peak);
        self.peak_number = self.peak_number.max(n);
    }
}

/// Diagnostics of a whole snapshot series. Returns `None` for an empty series.
pub fn peak_report(series: &[SimState]) -> Option<RunDiagnostics> {
    let first = series.first()?;
    let mut rec = DiagnosticsRecorder::new(first.tag);
    for s in series {
        rec.record(s);
    }
    Some(rec.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::init::{init_state, InitSpec};
    use num_complex::Complex64;
    use proptest::prelude::*;

    #[test]
    fn density_basics() {
        let g = Grid::line(3, 2.0).unwrap();
        let f = ComplexField::new(g, vec![Complex64::new(0.0, 0.0), Complex64::new(3.0, 4.0), Complex64::new(0.0, -1.0)])
            .unwrap();
        assert_eq!(density(&f).values, vec![0.0, 25.0, 1.0]);
        assert_eq!(total_number(&ComplexField::zeros(g)), 0.0);
    }

    #[test]
    fn uniform_number_uses_full_weight_ends() {
        let g = Grid::line(201, 100.0).unwrap();
        let f = ComplexField::from_fn(g, |_, _| Complex64::new(0.6, 0.8));
        assert!((total_number(&f) - 100.5).abs() < 1e-11);
    }

    #[test]
    fn resolved_gaussian_closes_to_n_c() {
        // σ_p = 2 on the 24 μm, 241² cavity: 20 nodes per σ and ±6σ extent
        let g = Grid::square(241, 241, 24.0, 24.0).unwrap();
        let s = init_state(&InitSpec::gaussian(1.0, 2.0), &g, ModelTag::Cnrp2).unwrap();
        let n = total_number(&s.amplitude("psi").unwrap());
        assert!((n - 1.0).abs() < 0.01, "{n}");
    }

    #[test]
    fn onset_rules() {
        let flat: Vec<_> = (0..5).map(|i| (i as f64, 2.0)).collect();
        assert_eq!(condensation_onset(&flat), Some(0.0));
        let empty: Vec<_> = (0..5).map(|i| (i as f64, 0.0)).collect();
        assert_eq!(condensation_onset(&empty), None);
        assert_eq!(condensation_onset(&[]), None);

        // an early blip above threshold that collapses is not onset
        let mut s: Vec<(f64, f64)> = (0..40).map(|i| (i as f64 * 0.5, 0.0)).collect();
        s[2].1 = 10.0;
        for (i, v) in s.iter_mut().enumerate().skip(10) {
            v.1 = 100.0 * (i as f64 - 9.0) / 30.0;
        }
        // threshold 5 → first index ≥ 10 with 100(i-9)/30 ≥ 5 is i = 11
        assert_eq!(condensation_onset(&s), Some(5.5));
    }

    #[test]
    fn report_on_zero_snapshot() {
        let g = Grid::line(11, 5.0).unwrap();
        let d = peak_report(&[SimState::zeros(ModelTag::Cnrp1, g)]).unwrap();
        assert_eq!(d.peak_density, 0.0);
        assert_eq!(d.peak_number, 0.0);
        assert_eq!(d.onset_time, None);
        assert!(peak_report(&[]).is_none());
        assert!(d.to_text().contains("onset_time: none"));
    }

    #[test]
    fn reservoir_negativity_is_counted() {
        let g = Grid::line(5, 4.0).unwrap();
        let mut s = SimState::zeros(ModelTag::Hinrp, g);
        s.reservoir.as_mut().unwrap()[1] = -0.5;
        s.reservoir.as_mut().unwrap()[3] = -0.1;
        let d = peak_report(&[s.clone(), s]).unwrap();
        assert_eq!(d.negativity_events, 4);
    }

    proptest! {
        #[test]
        fn number_is_phase_invariant_and_nonnegative(
            vals in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 7),
            theta in 0.0f64..6.3,
        ) {
            let g = Grid::line(7, 3.0).unwrap();
            let f = ComplexField::new(g, vals.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).unwrap();
            let rot = Complex64::from_polar(1.0, theta);
            let r = ComplexField::new(g, f.values.iter().map(|z| z * rot).collect()).unwrap();
            let n = total_number(&f);
            prop_assert!(n >= 0.0);
            prop_assert!((total_number(&r) - n).abs() <= 1e-12 * (1.0 + n));
            for (a, b) in density(&f).values.iter().zip(&density(&r).values) {
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a));
            }
            prop_assert_eq!(n == 0.0, f.values.iter().all(|z| z.norm() == 0.0));
        }
    }
}
