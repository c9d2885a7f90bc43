//! Flat `key = value` run configuration.

use std::f64::consts::PI;
use std::path::PathBuf;

use pem::{Geometry, InnerCondition, ModelParams, SimConfig, TractionForm};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Stationary,
    Polynomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementKind {
    TimeTranslation,
    XTranslation,
    YTranslation,
    Rotation,
    ConcentrationScaling,
    PressureShift,
    DisplacementShift,
    /// `G = (x², 0)`, which is not an elastic solution.
    NegativeControl,
}

impl ElementKind {
    pub const ALL: [ElementKind; 8] = [
        ElementKind::TimeTranslation,
        ElementKind::XTranslation,
        ElementKind::YTranslation,
        ElementKind::Rotation,
        ElementKind::ConcentrationScaling,
        ElementKind::PressureShift,
        ElementKind::DisplacementShift,
        ElementKind::NegativeControl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ElementKind::TimeTranslation => "time-translation",
            ElementKind::XTranslation => "x-translation",
            ElementKind::YTranslation => "y-translation",
            ElementKind::Rotation => "rotation",
            ElementKind::ConcentrationScaling => "concentration-scaling",
            ElementKind::PressureShift => "pressure-shift",
            ElementKind::DisplacementShift => "displacement-shift",
            ElementKind::NegativeControl => "negative-control",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepTask {
    Rst,
    Transient,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryOptions {
    pub field: FieldKind,
    pub elements: Vec<ElementKind>,
    pub epsilon: f64,
    /// Rotation angle.
    pub angle: f64,
    /// Degree of the harmonic potentials (or of the anisotropic solution).
    pub degree: u8,
    pub tolerance: f64,
    pub points: usize,
    pub seed: u64,
    /// Sample the field on a grid of this spacing and check at its nodes.
    pub grid_spacing: Option<f64>,
    /// Stiffness `[e11, e22, e33, e12, e13, e23]`; `None` is isotropic.
    pub moduli: Option<[f64; 6]>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOptions {
    pub key: String,
    pub values: Vec<f64>,
    pub task: SweepTask,
}

/// Everything a subcommand needs.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams<f64>,
    pub sim: SimConfig<f64>,
    pub initial_density: f64,
    pub initial_porosity: f64,
    pub case: InnerCondition,
    /// Sample radii of the stationary profiles.
    pub samples: usize,
    /// Steady radius override for `stationary`.
    pub r_st: Option<f64>,
    pub svg: bool,
    pub symmetry: SymmetryOptions,
    pub sweep: Option<SweepOptions>,
    sweep_key: String,
    sweep_task: SweepTask,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: ModelParams::default(),
            sim: SimConfig { stop_when_steady: false, ..SimConfig::default() },
            initial_density: 1.00001,
            initial_porosity: 0.99999,
            case: InnerCondition::Neumann,
            samples: 101,
            r_st: None,
            svg: false,
            symmetry: SymmetryOptions {
                field: FieldKind::Polynomial,
                elements: ElementKind::ALL.to_vec(),
                epsilon: 0.5,
                angle: std::f64::consts::FRAC_PI_2,
                degree: 3,
                tolerance: 1e-12,
                points: 16,
                seed: 1,
                grid_spacing: None,
                moduli: None,
            },
            sweep: None,
            sweep_key: "load".into(),
            sweep_task: SweepTask::Rst,
            out: PathBuf::from("out"),
        }
    }
}

fn bad(key: &str, value: &str, what: &str) -> CliError {
    CliError::Config(format!("{key} = {value:?}: expected {what}"))
}

/// A number, optionally with a `pi` factor: `2.5`, `16pi`, `16*pi`, `pi`.
pub fn parse_number(key: &str, value: &str) -> Result<f64, CliError> {
    let v = value.trim();
    let lower = v.to_ascii_lowercase();
    let parsed = if let Some(head) = lower.strip_suffix("pi") {
        let head = head.trim().trim_end_matches('*').trim();
        if head.is_empty() {
            Ok(PI)
        } else {
            head.parse::<f64>().map(|x| x * PI)
        }
    } else {
        v.parse::<f64>()
    };
    match parsed {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(bad(key, value, "a finite number")),
    }
}

fn parse_usize(key: &str, value: &str) -> Result<usize, CliError> {
    value.trim().parse().map_err(|_| bad(key, value, "a non-negative integer"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value.trim().to_ascii_lowercase().as_str() {
        "on" | "true" | "yes" | "1" => Ok(true),
        "off" | "false" | "no" | "0" => Ok(false),
        _ => Err(bad(key, value, "on or off")),
    }
}

fn parse_optional(key: &str, value: &str) -> Result<Option<f64>, CliError> {
    match value.trim().to_ascii_lowercase().as_str() {
        "none" | "" => Ok(None),
        _ => parse_number(key, value).map(Some),
    }
}

/// `a, b, c` or `from:to:count` (inclusive, evenly spaced).
pub fn parse_values(key: &str, value: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = value.split(':').collect();
    if parts.len() == 3 {
        let (a, b) = (parse_number(key, parts[0])?, parse_number(key, parts[1])?);
        let n = parse_usize(key, parts[2])?;
        if n < 2 {
            return Err(bad(key, value, "a count of at least 2"));
        }
        return Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect());
    }
    let values = value
        .split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| parse_number(key, s))
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err(bad(key, value, "at least one value"));
    }
    Ok(values)
}

pub fn normalize_key(key: &str) -> String {
    key.trim().replace('-', "_")
}

impl RunConfig {
    /// Applies one setting. Keys are matched after mapping `-` to `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = normalize_key(key);
        let k = key.as_str();
        let num = || parse_number(k, value);
        let p = &mut self.params;
        let s = &mut self.sim;
        match k {
            "conductivity" => p.conductivity = num()?,
            "lambda" => p.lambda = num()?,
            "mu" => p.mu = num()?,
            "rho_fluid" => p.rho_fluid = num()?,
            "diffusivity" => p.diffusivity = num()?,
            "sieving" => p.sieving = num()?,
            "osmotic" => p.osmotic = num()?,
            "p_ambient" => p.p_ambient = num()?,
            "p_steady" => p.p_steady = num()?,
            "load" => p.load = num()?,
            "inner_radius" => p.inner_radius = num()?,
            "outer_radius" => p.outer_radius = num()?,

            "cells" => s.cells = parse_usize(k, value)?,
            "dt" => s.dt = num()?,
            "dt_max" => s.dt_max = num()?,
            "t_end" => s.t_end = num()?,
            "quasi_static" => s.quasi_static = parse_bool(k, value)?,
            "steady_tol" => s.steady_tol = num()?,
            "load_ramp" => s.load_ramp = num()?,
            "load_release" => s.load_release = parse_optional(k, value)?,
            "output_interval" => s.output_interval = parse_optional(k, value)?,
            "stop_when_steady" => s.stop_when_steady = parse_bool(k, value)?,
            "max_steps" => s.max_steps = parse_usize(k, value)?,
            "length_scale" | "pressure_scale" => {
                let x = parse_optional(k, value)?;
                let (mut l, mut pr) = s.scales.unwrap_or((f64::NAN, f64::NAN));
                if k == "length_scale" {
                    l = x.unwrap_or(f64::NAN);
                } else {
                    pr = x.unwrap_or(f64::NAN);
                }
                s.scales = if l.is_nan() && pr.is_nan() { None } else { Some((l, pr)) };
            }
            "geometry" => {
                s.geometry = match value.trim() {
                    "circle" => Geometry::Circle,
                    "annulus" => Geometry::Annulus,
                    _ => return Err(bad(k, value, "circle or annulus")),
                }
            }
            "traction_form" => {
                s.traction_form = match value.trim() {
                    "ring" => TractionForm::Ring,
                    "annulus" => TractionForm::Annulus,
                    _ => return Err(bad(k, value, "ring or annulus")),
                }
            }
            "initial_density" => self.initial_density = num()?,
            "initial_porosity" => self.initial_porosity = num()?,

            "case" => {
                self.case = match value.trim() {
                    "dirichlet" => InnerCondition::Dirichlet,
                    "neumann" => InnerCondition::Neumann,
                    _ => return Err(bad(k, value, "dirichlet or neumann")),
                }
            }
            "samples" => self.samples = parse_usize(k, value)?,
            "r_st" => self.r_st = parse_optional(k, value)?,
            "svg" => self.svg = parse_bool(k, value)?,

            "field" => {
                self.symmetry.field = match value.trim() {
                    "stationary" => FieldKind::Stationary,
                    "polynomial" => FieldKind::Polynomial,
                    _ => return Err(bad(k, value, "stationary or polynomial")),
                }
            }
            "elements" => {
                let mut out = Vec::new();
                for name in value.split(',').map(str::trim).filter(|n| !n.is_empty()) {
                    if name == "all" {
                        out.extend(ElementKind::ALL);
                        continue;
                    }
                    let e = ElementKind::ALL
                        .into_iter()
                        .find(|e| e.name() == name)
                        .ok_or_else(|| bad(k, name, "a group element name"))?;
                    out.push(e);
                }
                if out.is_empty() {
                    return Err(bad(k, value, "at least one element"));
                }
                self.symmetry.elements = out;
            }
            "epsilon" => self.symmetry.epsilon = num()?,
            "angle" => self.symmetry.angle = num()?,
            "degree" => {
                let d = parse_usize(k, value)?;
                if !(1..=12).contains(&d) {
                    return Err(bad(k, value, "a degree between 1 and 12"));
                }
                self.symmetry.degree = d as u8;
            }
            "tolerance" => self.symmetry.tolerance = num()?,
            "points" => self.symmetry.points = parse_usize(k, value)?,
            "seed" => self.symmetry.seed = value.trim().parse().map_err(|_| bad(k, value, "an unsigned integer"))?,
            "grid_spacing" => self.symmetry.grid_spacing = parse_optional(k, value)?,
            "moduli" => {
                if value.trim() == "isotropic" {
                    self.symmetry.moduli = None;
                } else {
                    let v = parse_values(k, value)?;
                    let arr: [f64; 6] = v.try_into().map_err(|_| bad(k, value, "six stiffness entries or isotropic"))?;
                    self.symmetry.moduli = Some(arr);
                }
            }

            "sweep_key" => {
                let probe = normalize_key(value);
                let mut scratch = self.clone();
                scratch.set(&probe, "1").map_err(|_| bad(k, value, "a numeric configuration key"))?;
                if probe.starts_with("sweep") {
                    return Err(bad(k, value, "a key other than the sweep settings"));
                }
                self.sweep_key = probe;
                self.sync_sweep(None);
            }
            "sweep_values" => {
                let values = parse_values(k, value)?;
                self.sync_sweep(Some(values));
            }
            "sweep_task" => {
                self.sweep_task = match value.trim() {
                    "rst" => SweepTask::Rst,
                    "transient" => SweepTask::Transient,
                    _ => return Err(bad(k, value, "rst or transient")),
                };
                self.sync_sweep(None);
            }
            "out" => self.out = PathBuf::from(value.trim()),
            _ => return Err(CliError::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    fn sync_sweep(&mut self, values: Option<Vec<f64>>) {
        let values = values.or_else(|| self.sweep.as_ref().map(|s| s.values.clone()));
        self.sweep = values.map(|values| SweepOptions { key: self.sweep_key.clone(), values, task: self.sweep_task });
    }

    /// Applies a config text: one `key = value` per line, `#` comments.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<(), CliError> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("{origin}:{}: expected key = value", no + 1)))?;
            self.set(key, value).map_err(|e| match e {
                CliError::Config(m) => CliError::Config(format!("{origin}:{}: {m}", no + 1)),
                other => other,
            })?;
        }
        Ok(())
    }

    /// Cross-field checks that single keys cannot see.
    pub fn validate(&self) -> Result<(), CliError> {
        self.params.validate().map_err(|e| CliError::Config(e.to_string()))?;
        self.sim.validate().map_err(CliError::Config)?;
        if let Some((l, p)) = self.sim.scales {
            if l.is_nan() || p.is_nan() {
                return Err(CliError::Config("length_scale and pressure_scale must be given together".into()));
            }
        }
        if self.samples < 2 {
            return Err(CliError::Config("samples must be >= 2".into()));
        }
        if !(self.symmetry.tolerance > 0.0) {
            return Err(CliError::Config("tolerance must be > 0".into()));
        }
        if self.symmetry.points == 0 {
            return Err(CliError::Config("points must be >= 1".into()));
        }
        if let Some(h) = self.symmetry.grid_spacing {
            if !(h > 0.0) {
                return Err(CliError::Config("grid_spacing must be > 0".into()));
            }
        }
        if self.symmetry.moduli.is_some() && self.symmetry.elements.contains(&ElementKind::Rotation) {
            return Err(CliError::Config("rotation is not a symmetry of the anisotropic system; drop it from elements".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_with_pi() {
        assert_eq!(parse_number("load", "16pi").unwrap(), 16.0 * PI);
        assert_eq!(parse_number("load", "16 * pi").unwrap(), 16.0 * PI);
        assert_eq!(parse_number("load", "pi").unwrap(), PI);
        assert_eq!(parse_number("load", "2.5e-1").unwrap(), 0.25);
        assert!(parse_number("load", "abc").is_err());
        assert!(parse_number("load", "inf").is_err());
    }

    #[test]
    fn value_lists() {
        assert_eq!(parse_values("v", "1, 2,3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(parse_values("v", "0:1:5").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(parse_values("v", "0:1:1").is_err());
    }

    #[test]
    fn text_with_comments_and_dashes() {
        let mut c = RunConfig::default();
        c.apply_text("# reference\nload = 16pi  # step load\nquasi-static = off\n\ngeometry=circle\n", "t").unwrap();
        assert_eq!(c.params.load, 16.0 * PI);
        assert!(!c.sim.quasi_static);
        assert_eq!(c.sim.geometry, Geometry::Circle);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut c = RunConfig::default();
        let err = c.apply_text("lambda = 1\nlamda = 2\n", "f.conf").unwrap_err();
        assert!(err.to_string().contains("f.conf:2") && err.to_string().contains("lamda"), "{err}");
        assert!(c.set("R0", "2").is_err());
    }

    #[test]
    fn sweep_settings_combine_in_any_order() {
        let mut c = RunConfig::default();
        c.set("sweep_values", "0:2:3").unwrap();
        c.set("sweep_key", "mu").unwrap();
        c.set("sweep-task", "transient").unwrap();
        let s = c.sweep.clone().unwrap();
        assert_eq!((s.key.as_str(), s.values.len(), s.task), ("mu", 3, SweepTask::Transient));
        assert!(c.set("sweep_key", "geometry").is_err());
        assert!(c.set("sweep_key", "sweep_values").is_err());
    }

    #[test]
    fn cross_checks() {
        let mut c = RunConfig::default();
        c.set("length_scale", "2").unwrap();
        assert!(c.validate().is_err());
        c.set("pressure_scale", "3").unwrap();
        assert!(c.validate().is_ok());
        c.set("moduli", "2, 3, 1, 0.5, 0.1, 0.1").unwrap();
        assert!(c.validate().is_err());
        c.set("elements", "pressure-shift,displacement-shift").unwrap();
        assert!(c.validate().is_ok());
        c.set("cells", "4").unwrap();
        assert!(c.validate().is_err());
    }
}
