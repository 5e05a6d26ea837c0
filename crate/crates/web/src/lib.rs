//! WebAssembly bindings for the browser demo in `www/`.
//!
//! The plain functions ([`spacetime`], [`preset_cfl`], [`field_from_nanowatts`])
//! hold the logic and run natively; the `#[wasm_bindgen]` wrappers only
//! convert errors for JavaScript.

use polariton::config::{preset_text, RawConfig};
use polariton::pump::{power_to_field_amplitude, Extent};
use polariton::rk4::MemorySink;
use polariton::{Error, ModelTag, Result};
use wasm_bindgen::prelude::*;

/// 1 nW in meV/ps.
pub const MEV_PER_PS_PER_NW: f64 = 6.241509074;

/// Density of the first amplitude field sampled on a (time, x) raster.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTime {
    pub field: String,
    pub xs: Vec<f64>,
    pub times: Vec<f64>,
    /// `times.len()` rows of `xs.len()` densities.
    pub density: Vec<f64>,
    pub peak_number: f64,
    pub onset_time: Option<f64>,
}

fn preset_for(model: &str) -> Result<(&'static str, &'static str)> {
    match model {
        "cnrp1" => Ok(("table2", "F_p")),
        "cnrp2" => Ok(("table1_1d", "F_p")),
        "hinrp" => Ok(("hinrp_1d", "P")),
        other => Err(Error::BadValue {
            key: "model".into(),
            reason: format!("`{other}` has no 1D demo (expected cnrp1, cnrp2 or hinrp)"),
        }),
    }
}

/// Runs a 1D preset with the given interaction ratio and drive strength
/// (`F_p`, or `P` for the reservoir model) and keeps `frames + 1` snapshots.
pub fn spacetime(model: &str, g_ratio: f64, drive: f64, t_end: f64, frames: u32) -> Result<SpaceTime> {
    let (name, drive_key) = preset_for(model)?;
    if frames == 0 {
        return Err(Error::BadValue { key: "frames".into(), reason: "need at least one frame".into() });
    }
    let mut raw = RawConfig::parse(preset_text(name)?)?;
    raw.set("g_ratio", &g_ratio.to_string())?;
    raw.set(drive_key, &drive.to_string())?;
    raw.set("t_end", &t_end.to_string())?;
    let mut cfg = raw.resolve()?;
    cfg.run.snapshot_every = (cfg.run.steps() / frames as u64).max(1);
    let mut sink = MemorySink::default();
    let summary = cfg.simulate(&mut sink)?;
    let first = sink.states.first().expect("initial snapshot");
    let field = ModelTag::amplitude_names(first.tag)[0].to_string();
    Ok(SpaceTime {
        field,
        xs: first.grid.xs(),
        times: sink.states.iter().map(|s| s.t).collect(),
        density: sink.states.iter().flat_map(|s| s.amplitudes[0].iter().map(|z| z.norm_sqr())).collect(),
        peak_number: summary.diagnostics.peak_number,
        onset_time: summary.diagnostics.onset_time,
    })
}

/// Stability ratio of a shipped preset at time step `h`.
pub fn preset_cfl(preset: &str, h: f64) -> Result<f64> {
    let mut raw = RawConfig::parse(preset_text(preset)?)?;
    raw.set("h", &h.to_string())?;
    raw.resolve()?.cfl_ratio()
}

/// Coherent drive amplitude for a laser of `nanowatts` spread over a wire of
/// `size` μm (1D) or a cavity of `size`² μm² (2D).
pub fn field_from_nanowatts(nanowatts: f64, size: f64, two_d: bool) -> Result<f64> {
    let extent = if two_d { Extent::Area(size * size) } else { Extent::Length(size) };
    power_to_field_amplitude(nanowatts * MEV_PER_PS_PER_NW, extent)
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub struct Heatmap(SpaceTime);

#[wasm_bindgen]
impl Heatmap {
    #[wasm_bindgen(getter)]
    pub fn field(&self) -> String {
        self.0.field.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn nx(&self) -> usize {
        self.0.xs.len()
    }

    #[wasm_bindgen(getter)]
    pub fn frames(&self) -> usize {
        self.0.times.len()
    }

    pub fn xs(&self) -> Vec<f64> {
        self.0.xs.clone()
    }

    pub fn times(&self) -> Vec<f64> {
        self.0.times.clone()
    }

    /// Row-major `frames × nx` densities.
    pub fn density(&self) -> Vec<f64> {
        self.0.density.clone()
    }

    #[wasm_bindgen(getter, js_name = peakNumber)]
    pub fn peak_number(&self) -> f64 {
        self.0.peak_number
    }

    /// Onset time in ps, or NaN when the number never grows.
    #[wasm_bindgen(getter, js_name = onsetTime)]
    pub fn onset_time(&self) -> f64 {
        self.0.onset_time.unwrap_or(f64::NAN)
    }
}

#[wasm_bindgen(js_name = runSpacetime)]
pub fn run_spacetime(model: &str, g_ratio: f64, drive: f64, t_end: f64, frames: u32) -> Result<Heatmap, JsError> {
    spacetime(model, g_ratio, drive, t_end, frames).map(Heatmap).map_err(js)
}

#[wasm_bindgen(js_name = cflRatio)]
pub fn cfl_ratio(preset: &str, h: f64) -> Result<f64, JsError> {
    preset_cfl(preset, h).map_err(js)
}

#[wasm_bindgen(js_name = fieldFromNanowatts)]
pub fn field_from_nanowatts_js(nanowatts: f64, size: f64, two_d: bool) -> Result<f64, JsError> {
    field_from_nanowatts(nanowatts, size, two_d).map_err(js)
}
