//! Sectioned `key = value` run configuration and the shipped presets.
//!
//! ```text
//! # comment
//! [model cnrp2]
//! g_ratio = 10
//! [grid]
//! ndim = 2
//! [pump]
//! F_p = 0.5
//! [init]
//! [run]
//! t_end = 10
//! ```
//!
//! Units are fixed: meV, μm, ps. Omitted keys take the default for the
//! chosen model; the nonlinearity may be given directly (`g`) or relative to
//! the linewidth (`g_ratio`), never both.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::grid::{Boundary, Dim, Grid};
use crate::init::{init_state, InitKind, InitSpec};
use crate::model::{
    Cnrp1Params, Cnrp1SpinParams, Cnrp2Params, HinrpParams, KineticSign, ModelParams, ModelTag, HBAR, M0,
};
use crate::pump::{IncoherentPumpSpec, PumpProfile, PumpSpec};
use crate::rk4::{cfl_ratio, run_simulation, CflPolicy, RunConfig, RunSummary, SnapshotSink};

pub const PRESETS: [&str; 6] = ["table1_1d", "table1_2d", "table2", "table3", "hinrp_1d", "hinrp_2d"];

/// Text of a shipped preset.
pub fn preset_text(name: &str) -> Result<&'static str> {
    Ok(match name {
        "table1_1d" => include_str!("../presets/table1_1d.cfg"),
        "table1_2d" => include_str!("../presets/table1_2d.cfg"),
        "table2" => include_str!("../presets/table2.cfg"),
        "table3" => include_str!("../presets/table3.cfg"),
        "hinrp_1d" => include_str!("../presets/hinrp_1d.cfg"),
        "hinrp_2d" => include_str!("../presets/hinrp_2d.cfg"),
        _ => return Err(Error::UnknownPreset(name.to_string())),
    })
}

pub fn preset(name: &str) -> Result<ConfigFile> {
    parse_config(preset_text(name)?)
}

/// Mesh as written in the file; [`GridSpec::build`] turns it into a [`Grid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub ndim: Dim,
    pub xsize: usize,
    pub ysize: usize,
    pub cavsizex: f64,
    pub cavsizey: f64,
    pub bc_x: Boundary,
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid> {
        let grid = match self.ndim {
            Dim::One => Grid::line(self.xsize, self.cavsizex)?,
            Dim::Two => Grid::square(self.xsize, self.ysize, self.cavsizex, self.cavsizey)?,
        };
        Ok(grid.with_boundaries(self.bc_x, grid.bc_y))
    }
}

/// A fully resolved configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigFile {
    pub params: ModelParams,
    pub grid: GridSpec,
    pub init: InitSpec,
    pub run: RunConfig,
    /// Pump spot separation `d`, μm. Accepted for completeness of the
    /// parameter tables; no equation uses it.
    pub pump_separation: Option<f64>,
}

impl ConfigFile {
    pub fn tag(&self) -> ModelTag {
        self.params.tag()
    }

    /// Builds the grid and initial state and integrates to `run.t_end`.
    pub fn simulate(&self, sink: &mut dyn SnapshotSink) -> Result<RunSummary> {
        let grid = self.grid.build()?;
        let init = init_state(&self.init, &grid, self.tag())?;
        run_simulation(&init, &self.params, &self.run, sink)
    }

    /// Stability ratio of this configuration's mesh and time step.
    pub fn cfl_ratio(&self) -> Result<f64> {
        let grid = self.grid.build()?;
        Ok(cfl_ratio(&grid, self.run.h, self.params.hbar(), self.params.kinetic_mass()))
    }

    /// Serializes every resolved value; parsing the result yields `self`.
    pub fn to_text(&self) -> String {
        let mut model: Vec<(&str, String)> = Vec::new();
        let mut pump: Vec<(String, String)> = Vec::new();
        let coherent = |p: &PumpSpec, spin: &str, v: &mut Vec<(String, String)>| {
            v.push((pump_key("F_p", spin), fmt(p.f_p)));
            v.push((pump_key("k_px", spin), fmt(p.k_p[0])));
            v.push((pump_key("k_py", spin), fmt(p.k_p[1])));
            v.push((pump_key("delta_omega", spin), fmt(p.delta_omega)));
            v.push((pump_key("w", spin), fmt(p.w)));
            v.push((pump_key("x0", spin), fmt(p.x0[0])));
            v.push((pump_key("y0", spin), fmt(p.x0[1])));
        };
        match &self.params {
            ModelParams::Cnrp1(p) => {
                model.extend([
                    ("hbar", fmt(p.hbar)),
                    ("Omega_R", fmt(p.omega_r)),
                    ("gamma_c", fmt(p.gamma_c)),
                    ("gamma_x", fmt(p.gamma_x)),
                    ("m_c", fmt(p.m_c)),
                    ("g", fmt(p.g)),
                    ("delta", fmt(p.delta)),
                ]);
                coherent(&p.pump, "", &mut pump);
            }
            ModelParams::Cnrp1Spin(p) => {
                model.extend([
                    ("hbar", fmt(p.hbar)),
                    ("Omega_R", fmt(p.omega_r)),
                    ("gamma_c", fmt(p.gamma_c)),
                    ("gamma_x", fmt(p.gamma_x)),
                    ("m_c", fmt(p.m_c)),
                    ("g1", fmt(p.g1)),
                    ("g2", fmt(p.g2)),
                    ("delta", fmt(p.delta)),
                ]);
                coherent(&p.pump_plus, "A", &mut pump);
                coherent(&p.pump_minus, "B", &mut pump);
            }
            ModelParams::Cnrp2(p) => {
                model.extend([
                    ("hbar", fmt(p.hbar)),
                    ("m", fmt(p.m)),
                    ("gamma_c", fmt(p.gamma_c)),
                    ("g", fmt(p.g)),
                    ("eta", fmt(p.eta)),
                    ("kinetic_sign", sign_name(p.kinetic_sign).to_string()),
                ]);
                coherent(&p.pump, "", &mut pump);
            }
            ModelParams::Hinrp(p) => {
                model.extend([
                    ("hbar", fmt(p.hbar)),
                    ("E0", fmt(p.e0)),
                    ("m", fmt(p.m)),
                    ("gamma_c", fmt(p.gamma_c)),
                    ("gamma_R", fmt(p.gamma_r)),
                    ("R", fmt(p.r)),
                    ("g", fmt(p.g)),
                    ("g_R", fmt(p.g_r)),
                    ("G", fmt(p.big_g)),
                ]);
                pump.push(("P".into(), fmt(p.pump.p0)));
                pump.push(("sigma_p".into(), fmt(p.pump.sigma_p)));
                pump.push(("profile".into(), p.pump.profile.name().into()));
            }
        }
        if let Some(d) = self.pump_separation {
            pump.push(("d".into(), fmt(d)));
        }

        let mut out = String::new();
        let mut section = |header: &str, entries: &[(&str, String)]| {
            let _ = writeln!(out, "[{header}]");
            for (k, v) in entries {
                let _ = writeln!(out, "{k} = {v}");
            }
        };
        section(&format!("model {}", self.tag().name()), &model);
        let mut grid = vec![
            ("ndim", self.grid.ndim.as_usize().to_string()),
            ("xsize", self.grid.xsize.to_string()),
            ("cavsizex", fmt(self.grid.cavsizex)),
        ];
        if self.grid.ndim == Dim::Two {
            grid.push(("ysize", self.grid.ysize.to_string()));
            grid.push(("cavsizey", fmt(self.grid.cavsizey)));
        }
        grid.push(("bc_x", boundary_name(self.grid.bc_x).into()));
        section("grid", &grid);
        let pump: Vec<(&str, String)> = pump.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
        section("pump", &pump);
        let mut init = vec![("kind", self.init.kind.name().to_string())];
        if self.init.kind == InitKind::Gaussian {
            init.push(("N_c", fmt(self.init.n_c)));
            init.push(("sigma_p", fmt(self.init.sigma_p)));
        }
        section("init", &init);
        section(
            "run",
            &[
                ("h", fmt(self.run.h)),
                ("t_end", fmt(self.run.t_end)),
                ("snapshot_every", self.run.snapshot_every.to_string()),
                ("policy", self.run.cfl_policy.name().into()),
            ],
        );
        out
    }
}

/// Pump key for the spin component `spin` ("", "A" or "B"): `F_pA`, `k_pxA`,
/// `delta_omega_A`, `w_A`, ...
fn pump_key(base: &str, spin: &str) -> String {
    if spin.is_empty() || base.starts_with("F_p") || base.starts_with("k_p") {
        format!("{base}{spin}")
    } else {
        format!("{base}_{spin}")
    }
}

fn fmt(v: f64) -> String {
    format!("{v:?}")
}

fn sign_name(s: KineticSign) -> &'static str {
    match s {
        KineticSign::Negative => "negative",
        KineticSign::Positive => "positive",
    }
}

fn boundary_name(b: Boundary) -> &'static str {
    match b {
        Boundary::DirichletZero => "dirichlet",
        Boundary::Periodic => "periodic",
    }
}

/// Unresolved sections: what was written, keyed by section name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    pub model: Option<String>,
    pub sections: BTreeMap<String, BTreeMap<String, String>>,
}

const SECTIONS: [&str; 5] = ["model", "grid", "pump", "init", "run"];

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = RawConfig::default();
        let mut current: Option<String> = None;
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(inner) = line.strip_prefix('[') {
                let inner = inner
                    .strip_suffix(']')
                    .ok_or_else(|| Error::ConfigSyntax { line: lineno, reason: "unterminated section header".into() })?;
                let mut words = inner.split_whitespace();
                let name = words.next().unwrap_or("");
                if !SECTIONS.contains(&name) {
                    return Err(Error::ConfigSyntax { line: lineno, reason: format!("unknown section [{name}]") });
                }
                if name == "model" {
                    let tag = words.next().ok_or_else(|| Error::ConfigSyntax {
                        line: lineno,
                        reason: "model section needs a tag, e.g. [model cnrp2]".into(),
                    })?;
                    if raw.model.is_some() {
                        return Err(Error::ConfigSyntax { line: lineno, reason: "second [model] section".into() });
                    }
                    raw.model = Some(tag.to_string());
                }
                if words.next().is_some() {
                    return Err(Error::ConfigSyntax { line: lineno, reason: format!("unexpected words in [{inner}]") });
                }
                if raw.sections.contains_key(name) && name != "model" {
                    return Err(Error::ConfigSyntax { line: lineno, reason: format!("repeated section [{name}]") });
                }
                raw.sections.entry(name.to_string()).or_default();
                current = Some(name.to_string());
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::ConfigSyntax { line: lineno, reason: format!("expected key = value, got `{line}`") })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(Error::ConfigSyntax { line: lineno, reason: "empty key".into() });
            }
            let section = current
                .as_ref()
                .ok_or_else(|| Error::ConfigSyntax { line: lineno, reason: format!("`{key}` outside any section") })?;
            let map = raw.sections.get_mut(section).expect("section registered");
            if map.insert(key.to_string(), value.to_string()).is_some() {
                return Err(Error::ConfigSyntax { line: lineno, reason: format!("duplicate key `{key}`") });
            }
        }
        Ok(raw)
    }

    /// Sets `key` (bare, or `section.key`) to `value`.
    ///
    /// A bare key goes to the section that accepts it for this model. Setting
    /// `g_ratio` drops an absolute `g` (and vice versa) so sweeps can
    /// override either form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let tag = self.tag()?;
        let (section, key) = match key.split_once('.') {
            Some((s, k)) => (s.to_string(), k.to_string()),
            None => {
                let owners: Vec<&str> =
                    SECTIONS.iter().copied().filter(|s| allowed_keys(tag, s).contains(&key)).collect();
                match owners.as_slice() {
                    [one] => (one.to_string(), key.to_string()),
                    [] => return Err(Error::UnknownKey { section: "any".into(), key: key.into() }),
                    _ => {
                        return Err(Error::BadValue {
                            key: key.into(),
                            reason: format!("ambiguous; qualify it as one of {}", owners.iter().map(|s| format!("{s}.{key}")).collect::<Vec<_>>().join(", ")),
                        })
                    }
                }
            }
        };
        if !SECTIONS.contains(&section.as_str()) || !allowed_keys(tag, &section).contains(&key.as_str()) {
            return Err(Error::UnknownKey { section, key });
        }
        let map = self.sections.entry(section).or_default();
        for (a, b) in [("g", "g_ratio"), ("g1", "g1_ratio"), ("g2", "g2_ratio")] {
            if key == a {
                map.remove(b);
            } else if key == b {
                map.remove(a);
            }
        }
        map.insert(key, value.to_string());
        Ok(())
    }

    fn tag(&self) -> Result<ModelTag> {
        let name = self
            .model
            .as_deref()
            .ok_or_else(|| Error::MissingKey { section: "model".into(), key: "tag".into() })?;
        ModelTag::from_name(name).ok_or_else(|| Error::BadValue {
            key: "model".into(),
            reason: format!("unknown model `{name}` (expected cnrp1, cnrp1_spin, cnrp2 or hinrp)"),
        })
    }

    pub fn resolve(&self) -> Result<ConfigFile> {
        let tag = self.tag()?;
        let empty = BTreeMap::new();
        let sec = |name: &'static str| -> Result<Section<'_>> {
            let map = self.sections.get(name).unwrap_or(&empty);
            let allowed = allowed_keys(tag, name);
            if let Some(k) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
                return Err(Error::UnknownKey { section: name.into(), key: k.clone() });
            }
            Ok(Section { map })
        };
        let model = sec("model")?;
        let grid = sec("grid")?;
        let pump = sec("pump")?;
        let init = sec("init")?;
        let run = sec("run")?;

        let hbar = model.f64_or("hbar", HBAR)?;
        let m0 = model.f64_or("m0", M0)?;
        let params = match tag {
            ModelTag::Cnrp1 => {
                let gamma_c = model.f64_or("gamma_c", 0.1)?;
                let linewidth = hbar * gamma_c;
                ModelParams::Cnrp1(Cnrp1Params {
                    hbar,
                    omega_r: model.f64_or("Omega_R", 4.4)?,
                    gamma_c,
                    gamma_x: model.f64_or("gamma_x", 0.01)?,
                    m_c: model.f64_or("m_c", m0 * 2e-5)?,
                    g: model.coupling("g", "g_ratio", linewidth, 1.132)?,
                    delta: model.f64_or("delta", 5.0)?,
                    pump: pump.coherent("", table2_pump())?,
                })
            }
            ModelTag::Cnrp1Spin => {
                let gamma_c = model.f64_or("gamma_c", 0.1)?;
                let linewidth = hbar * gamma_c;
                ModelParams::Cnrp1Spin(Cnrp1SpinParams {
                    hbar,
                    omega_r: model.f64_or("Omega_R", 4.4)?,
                    gamma_c,
                    gamma_x: model.f64_or("gamma_x", 0.01)?,
                    m_c: model.f64_or("m_c", m0 * 2e-5)?,
                    g1: model.coupling("g1", "g1_ratio", linewidth, 1.132)?,
                    g2: model.coupling("g2", "g2_ratio", linewidth, 0.1132)?,
                    delta: model.f64_or("delta", 5.0)?,
                    pump_plus: pump.coherent("A", table2_pump())?,
                    pump_minus: pump.coherent("B", table2_pump())?,
                })
            }
            ModelTag::Cnrp2 => {
                let gamma_c = model.f64_or("gamma_c", 0.5 / hbar)?;
                let kinetic_sign = match model.get("kinetic_sign") {
                    None | Some("negative") => KineticSign::Negative,
                    Some("positive") => KineticSign::Positive,
                    Some(other) => {
                        return Err(Error::BadValue {
                            key: "kinetic_sign".into(),
                            reason: format!("expected negative or positive, got `{other}`"),
                        })
                    }
                };
                ModelParams::Cnrp2(Cnrp2Params {
                    hbar,
                    m: model.f64_or("m", 7.44e-5 * m0)?,
                    gamma_c,
                    g: model.coupling_or_value("g", "g_ratio", gamma_c, 0.86)?,
                    eta: model.f64_or("eta", 1.0)?,
                    v_ext: None,
                    pump: pump.coherent(
                        "",
                        PumpSpec { f_p: 0.05, k_p: [0.0; 2], delta_omega: 0.0, w: 10.0, x0: [0.0; 2] },
                    )?,
                    kinetic_sign,
                })
            }
            ModelTag::Hinrp => {
                let gamma_c = model.f64_or("gamma_c", 0.5 / hbar)?;
                let p0 = match (pump.get("P"), pump.get("P0")) {
                    (Some(_), Some(_)) => {
                        return Err(Error::BadValue { key: "P0".into(), reason: "give either P or P0, not both".into() })
                    }
                    (Some(_), None) => pump.f64_or("P", 0.0)?,
                    (None, Some(_)) => pump.f64_or("P0", 0.0)?,
                    (None, None) => 60.790,
                };
                let profile = match pump.get("profile") {
                    None | Some("gaussian") => PumpProfile::Gaussian,
                    Some("uniform") => PumpProfile::Uniform,
                    Some(other) => {
                        return Err(Error::BadValue {
                            key: "profile".into(),
                            reason: format!("expected gaussian or uniform, got `{other}`"),
                        })
                    }
                };
                ModelParams::Hinrp(HinrpParams {
                    hbar,
                    e0: model.f64_or("E0", 0.0)?,
                    m: model.f64_or("m", 7.44e-5 * m0)?,
                    gamma_c,
                    gamma_r: model.f64_or("gamma_R", 2.0 / hbar)?,
                    r: model.f64_or("R", 0.05 / hbar)?,
                    g: model.coupling_or_value("g", "g_ratio", gamma_c, 0.86)?,
                    g_r: model.f64_or("g_R", 0.0)?,
                    big_g: model.f64_or("G", 0.0175)?,
                    v_ext: None,
                    pump: IncoherentPumpSpec { p0, sigma_p: pump.f64_or("sigma_p", 20.0)?, profile },
                })
            }
        };
        params.validate()?;

        let ndim = Dim::from_usize(grid.usize_or("ndim", 1)?)?;
        let two_d = ndim == Dim::Two;
        let default_nodes = if two_d { 241 } else { 201 };
        let default_size = if two_d { 24.0 } else { 100.0 };
        if !two_d {
            if let Some(k) = ["ysize", "cavsizey"].into_iter().find(|k| grid.get(k).is_some()) {
                return Err(Error::BadValue { key: k.into(), reason: "only meaningful when ndim = 2".into() });
            }
        }
        let bc_x = match grid.get("bc_x") {
            None | Some("dirichlet") => Boundary::DirichletZero,
            Some("periodic") => Boundary::Periodic,
            Some(other) => {
                return Err(Error::BadValue {
                    key: "bc_x".into(),
                    reason: format!("expected dirichlet or periodic, got `{other}`"),
                })
            }
        };
        let grid = GridSpec {
            ndim,
            xsize: grid.usize_or("xsize", default_nodes)?,
            ysize: if two_d { grid.usize_or("ysize", default_nodes)? } else { 1 },
            cavsizex: grid.f64_or("cavsizex", default_size)?,
            cavsizey: if two_d { grid.f64_or("cavsizey", default_size)? } else { 0.0 },
            bc_x,
        };
        grid.build()?;

        let default_kind = match tag {
            ModelTag::Cnrp1 | ModelTag::Cnrp1Spin => InitKind::Zero,
            ModelTag::Cnrp2 | ModelTag::Hinrp => InitKind::Gaussian,
        };
        let kind = match init.get("kind") {
            None => default_kind,
            Some("zero") => InitKind::Zero,
            Some("gaussian") => InitKind::Gaussian,
            Some(other) => {
                return Err(Error::BadValue { key: "kind".into(), reason: format!("expected zero or gaussian, got `{other}`") })
            }
        };
        let mut init_spec = match kind {
            InitKind::Zero => {
                if let Some(k) = ["N_c", "sigma_p"].into_iter().find(|k| init.get(k).is_some()) {
                    return Err(Error::BadValue { key: k.into(), reason: "only meaningful for kind = gaussian".into() });
                }
                InitSpec::zero()
            }
            InitKind::Gaussian => InitSpec::gaussian(init.f64_or("N_c", 1.0)?, init.f64_or("sigma_p", 20.0)?),
        };
        if let ModelParams::Hinrp(p) = &params {
            init_spec = init_spec.with_reservoir(p.pump.p0, p.gamma_r);
        }

        let cfl_policy = match run.get("policy") {
            None => CflPolicy::Reject,
            Some(s) => CflPolicy::from_name(s).ok_or_else(|| Error::BadValue {
                key: "policy".into(),
                reason: format!("expected reject or warn, got `{s}`"),
            })?,
        };
        let run = RunConfig {
            h: run.f64_or("h", 0.001)?,
            t_end: run.f64_or("t_end", if two_d { 10.0 } else { 20.0 })?,
            snapshot_every: run.usize_or("snapshot_every", 100)? as u64,
            cfl_policy,
        };
        run.validate()?;

        let pump_separation = match pump.get("d") {
            Some(_) => Some(pump.f64_or("d", 0.0)?),
            None => None,
        };
        Ok(ConfigFile { params, grid, init: init_spec, run, pump_separation })
    }
}

/// Parses and resolves a configuration text.
pub fn parse_config(text: &str) -> Result<ConfigFile> {
    RawConfig::parse(text)?.resolve()
}

fn table2_pump() -> PumpSpec {
    PumpSpec { f_p: 0.5, k_p: [1.0, 0.0], delta_omega: 5.0, w: 10.0, x0: [0.0; 2] }
}

const COHERENT_KEYS: [&str; 9] = ["F_p", "k_p", "k_px", "k_py", "delta_omega", "w", "x0", "y0", "d"];
const SPIN_KEYS: [&str; 17] = [
    "F_pA",
    "k_pA",
    "k_pxA",
    "k_pyA",
    "delta_omega_A",
    "w_A",
    "x0_A",
    "y0_A",
    "F_pB",
    "k_pB",
    "k_pxB",
    "k_pyB",
    "delta_omega_B",
    "w_B",
    "x0_B",
    "y0_B",
    "d",
];

/// Every key accepted in `section` for `tag`.
pub fn allowed_keys(tag: ModelTag, section: &str) -> Vec<&'static str> {
    match section {
        "model" => match tag {
            ModelTag::Cnrp1 => vec!["hbar", "m0", "Omega_R", "gamma_c", "gamma_x", "m_c", "g", "g_ratio", "delta"],
            ModelTag::Cnrp1Spin => vec![
                "hbar", "m0", "Omega_R", "gamma_c", "gamma_x", "m_c", "g1", "g1_ratio", "g2", "g2_ratio", "delta",
            ],
            ModelTag::Cnrp2 => vec!["hbar", "m0", "m", "gamma_c", "g", "g_ratio", "eta", "kinetic_sign"],
            ModelTag::Hinrp => {
                vec!["hbar", "m0", "E0", "m", "gamma_c", "gamma_R", "R", "g", "g_ratio", "g_R", "G"]
            }
        },
        "grid" => vec!["ndim", "xsize", "ysize", "cavsizex", "cavsizey", "bc_x"],
        "pump" => match tag {
            ModelTag::Cnrp1 | ModelTag::Cnrp2 => COHERENT_KEYS.to_vec(),
            ModelTag::Cnrp1Spin => SPIN_KEYS.to_vec(),
            ModelTag::Hinrp => vec!["P", "P0", "sigma_p", "profile"],
        },
        "init" => vec!["kind", "N_c", "sigma_p"],
        "run" => vec!["h", "t_end", "snapshot_every", "policy"],
        _ => Vec::new(),
    }
}

struct Section<'a> {
    map: &'a BTreeMap<String, String>,
}

impl Section<'_> {
    fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.get(key) {
            None => Ok(default),
            Some(s) => {
                let v: f64 = s.parse().map_err(|_| Error::BadValue {
                    key: key.into(),
                    reason: format!("expected a number, got `{s}`"),
                })?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::BadValue { key: key.into(), reason: format!("must be finite, got `{s}`") })
                }
            }
        }
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.get(key) {
            None => Ok(default),
            Some(s) => s.parse().map_err(|_| Error::BadValue {
                key: key.into(),
                reason: format!("expected a non-negative integer, got `{s}`"),
            }),
        }
    }

    /// Absolute `key`, or `ratio_key × unit`, defaulting to `default_ratio × unit`.
    fn coupling(&self, key: &str, ratio_key: &str, unit: f64, default_ratio: f64) -> Result<f64> {
        match (self.get(key), self.get(ratio_key)) {
            (Some(_), Some(_)) => Err(Error::BadValue {
                key: ratio_key.into(),
                reason: format!("give either `{key}` or `{ratio_key}`, not both"),
            }),
            (Some(_), None) => self.f64_or(key, 0.0),
            (None, Some(_)) => Ok(self.f64_or(ratio_key, 0.0)? * unit),
            (None, None) => Ok(default_ratio * unit),
        }
    }

    /// Like [`Section::coupling`] but with an absolute default.
    fn coupling_or_value(&self, key: &str, ratio_key: &str, unit: f64, default: f64) -> Result<f64> {
        if self.get(key).is_none() && self.get(ratio_key).is_none() {
            return Ok(default);
        }
        self.coupling(key, ratio_key, unit, 0.0)
    }

    fn coherent(&self, spin: &str, default: PumpSpec) -> Result<PumpSpec> {
        let key = |base: &str| pump_key(base, spin);
        let k = self.f64_or(&key("k_p"), default.k_p[0])?;
        if self.get(&key("k_p")).is_some() && self.get(&key("k_px")).is_some() {
            return Err(Error::BadValue {
                key: key("k_px"),
                reason: format!("give either `{}` or `{}`, not both", key("k_p"), key("k_px")),
            });
        }
        Ok(PumpSpec {
            f_p: self.f64_or(&key("F_p"), default.f_p)?,
            k_p: [self.f64_or(&key("k_px"), k)?, self.f64_or(&key("k_py"), default.k_p[1])?],
            delta_omega: self.f64_or(&key("delta_omega"), default.delta_omega)?,
            w: self.f64_or(&key("w"), default.w)?,
            x0: [self.f64_or(&key("x0"), default.x0[0])?, self.f64_or(&key("y0"), default.x0[1])?],
        })
    }
}
