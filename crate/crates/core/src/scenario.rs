//! Scenario files: one TOML document describing the atom, both lasers, the
//! vapor cell, the sweep and the analyzer.
//!
//! Rates and detunings are unit-tagged tables, `{ value = 3.45, unit = "MHz" }`,
//! where `MHz`/`GHz` mean 2π·MHz/2π·GHz and `gamma` means Γ_a = 2π·5.75 MHz.
//! Angles are in degrees. Unknown keys are rejected.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::Deserialize;

use crate::atom::decay::b_min_sq;
use crate::atom::{CascadeRoute, DecayParams, DipoleLeg, FieldRole, LevelScheme};
use crate::doppler::grid::{self, Geometry, VelocityGrid};
use crate::doppler::{linspace, SweepSpec};
use crate::error::{Error, Result};
use crate::liouville::{FieldSet, FieldSpec, Model, Polarization, Representation};
use crate::polarimetry::{triangular_voltages, AnalyzerChain, LcrCalibration, MediumParams};

pub const SCHEMA: &str = "waveplate-scenario/1";
/// Γ_a / 2π in MHz.
pub const GAMMA_A_MHZ: f64 = 5.75;

pub const PRESETS: [(&str, &str); 7] = [
    ("fig1-ideal", include_str!("../scenarios/fig1-ideal.toml")),
    ("fig7-full", include_str!("../scenarios/fig7-full.toml")),
    ("fig7-reservoir", include_str!("../scenarios/fig7-reservoir.toml")),
    ("fig7-reduced", include_str!("../scenarios/fig7-reduced.toml")),
    ("fig7-slow-ground", include_str!("../scenarios/fig7-slow-ground.toml")),
    ("fig8-qwp", include_str!("../scenarios/fig8-qwp.toml")),
    ("two-level-oracle", include_str!("../scenarios/two-level-oracle.toml")),
];

#[derive(Clone, Copy, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
pub enum Unit {
    #[serde(rename = "gamma")]
    Gamma,
    #[serde(rename = "MHz")]
    MHz,
    #[serde(rename = "GHz")]
    GHz,
}

impl Quantity {
    /// Value in units of Γ_a.
    pub fn gamma(&self) -> f64 {
        match self.unit {
            Unit::Gamma => self.value,
            Unit::MHz => self.value / GAMMA_A_MHZ,
            Unit::GHz => self.value * 1e3 / GAMMA_A_MHZ,
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    Rb87Full,
    Rb87Reservoir,
    Rb87Reduced,
    FourLevel,
    TwoLevel,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeFile {
    kind: SchemeKind,
    /// Only `rb87_full` and `rb87_reduced` honour this.
    cascade: Option<CascadeRoute>,
    #[serde(default)]
    representation: RepresentationFile,
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RepresentationFile {
    #[default]
    Homogeneous,
    TraceEliminated,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecayFile {
    gamma_a: Quantity,
    gamma_b: Quantity,
    gamma_g: Quantity,
    gamma_r: Option<Quantity>,
    d1_d2_ratio: Option<f64>,
}

/// `"sigma_plus"`, `"sigma_minus"`, `"x"`, `"y"`, `{ linear_deg = 45 }` or
/// `{ plus = [re, im], minus = [re, im] }`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum PolarizationFile {
    Named(String),
    Linear {
        linear_deg: f64,
    },
    Amplitudes {
        plus: [f64; 2],
        minus: [f64; 2],
    },
}

impl PolarizationFile {
    fn build(&self) -> Result<Polarization> {
        match self {
            PolarizationFile::Named(n) => match n.as_str() {
                "sigma_plus" => Ok(Polarization::sigma_plus()),
                "sigma_minus" => Ok(Polarization::sigma_minus()),
                "x" => Ok(Polarization::x()),
                "y" => Ok(Polarization::y()),
                _ => Err(Error::Config(format!("unknown polarization '{n}'"))),
            },
            PolarizationFile::Linear { linear_deg } => Ok(Polarization::linear(linear_deg.to_radians())),
            PolarizationFile::Amplitudes { plus, minus } => {
                Polarization::new(C64::new(plus[0], plus[1]), C64::new(minus[0], minus[1]))
            }
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldFile {
    rabi: Quantity,
    detuning: Quantity,
    polarization: PolarizationFile,
    wavelength_nm: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MediumFile {
    n_atom_per_cm3: f64,
    length_cm: f64,
    /// Γ in β±; γ_b when absent.
    gamma: Option<Quantity>,
    b_min_sq: Option<f64>,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    GaussHermite,
    Uniform,
    Single,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridFile {
    kind: GridKind,
    #[serde(default = "one")]
    points: usize,
    span: Option<f64>,
    temperature_k: Option<f64>,
    mass_amu: Option<f64>,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    detuning_min: Quantity,
    detuning_max: Quantity,
    points: usize,
    #[serde(default)]
    geometry: Geometry,
    grid: GridFile,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RampFile {
    volts_high: f64,
    volts_low: f64,
    points_per_leg: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnalyzerFile {
    #[serde(default = "default_lcr_axis")]
    lcr_axis_deg: f64,
    #[serde(default)]
    polarizer_axis_deg: f64,
    #[serde(default = "default_e0")]
    e0: f64,
    /// `[volts, retardance_deg]` pairs.
    calibration: Option<Vec<[f64; 2]>>,
    ramp: Option<RampFile>,
}

fn default_lcr_axis() -> f64 {
    45.0
}

fn default_e0() -> f64 {
    1.0
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    schema: String,
    name: String,
    #[serde(default)]
    description: String,
    scheme: SchemeFile,
    decay: DecayFile,
    pump: FieldFile,
    signal: FieldFile,
    medium: MediumFile,
    sweep: SweepFile,
    analyzer: Option<AnalyzerFile>,
}

#[derive(Clone, Debug)]
pub struct Analyzer {
    pub chain: AnalyzerChain,
    pub e0: f64,
    pub calibration: LcrCalibration,
    /// LCR drive voltages of one scan.
    pub volts: Vec<f64>,
}

impl Analyzer {
    /// Retardance at each scan voltage, radians.
    pub fn thetas(&self) -> Vec<f64> {
        self.volts.iter().map(|&v| self.calibration.theta(v)).collect()
    }
}

impl Default for Analyzer {
    fn default() -> Self {
        Analyzer {
            chain: AnalyzerChain::default(),
            e0: 1.0,
            calibration: LcrCalibration::default(),
            volts: triangular_voltages(10.0, 0.0, 51),
        }
    }
}

/// A fully built scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub model: Model,
    pub fields: FieldSet,
    pub medium: MediumParams,
    pub detunings: Vec<f64>,
    pub geometry: Geometry,
    pub grid: VelocityGrid,
    pub analyzer: Analyzer,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Config(format!("{name} must be positive, got {v}")))
    }
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::build(file)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn preset(name: &str) -> Result<Self> {
        let text = preset_source(name)?;
        Self::from_toml(text)
    }

    fn build(f: ScenarioFile) -> Result<Self> {
        if f.schema != SCHEMA {
            return Err(Error::Config(format!("unsupported schema '{}', expected '{SCHEMA}'", f.schema)));
        }
        let defaults = DecayParams::default();
        let decay = DecayParams {
            gamma_a: f.decay.gamma_a.gamma(),
            gamma_b: f.decay.gamma_b.gamma(),
            gamma_g: f.decay.gamma_g.gamma(),
            gamma_r: f.decay.gamma_r.map_or(defaults.gamma_r, |q| q.gamma()),
            d1_d2_ratio: f.decay.d1_d2_ratio.unwrap_or(defaults.d1_d2_ratio),
            cascade: f.scheme.cascade.unwrap_or(defaults.cascade),
        };
        let scheme = match f.scheme.kind {
            SchemeKind::Rb87Full => LevelScheme::rb87_full(decay),
            SchemeKind::Rb87Reservoir => LevelScheme::rb87_with_reservoir(decay),
            SchemeKind::Rb87Reduced => LevelScheme::rb87_reduced(decay),
            SchemeKind::FourLevel => LevelScheme::four_level(decay),
            SchemeKind::TwoLevel => LevelScheme::two_level(decay),
        }?;
        let mut model = Model::new(scheme)?;
        model.representation = match f.scheme.representation {
            RepresentationFile::Homogeneous => Representation::Homogeneous,
            RepresentationFile::TraceEliminated => Representation::TraceEliminated,
        };

        let field = |ff: &FieldFile, role| -> Result<FieldSpec> {
            let spec = FieldSpec {
                role,
                rabi: ff.rabi.gamma(),
                detuning: ff.detuning.gamma(),
                polarization: ff.polarization.build()?,
                k: grid::wavevector(positive("wavelength_nm", ff.wavelength_nm)?),
            };
            spec.validate()?;
            Ok(spec)
        };
        let fields = FieldSet { pump: field(&f.pump, FieldRole::Pump)?, signal: field(&f.signal, FieldRole::Signal)? };

        let b_min = match f.medium.b_min_sq {
            Some(b) => b,
            None => b_min_sq(DipoleLeg::RB87_HALF_HALF, 1, 1, &[1, 2])?,
        };
        let omega_min = if fields.signal.rabi > 0.0 { fields.signal.rabi } else { 0.1 };
        let medium = MediumParams {
            n_atom: f.medium.n_atom_per_cm3,
            length_cm: f.medium.length_cm,
            lambda_nm: f.signal.wavelength_nm,
            gamma: f.medium.gamma.map_or(decay.gamma_b, |q| q.gamma()),
            omega_min,
            b_min_sq: b_min,
        };
        medium.validate()?;

        let s = &f.sweep;
        let t = s.grid.temperature_k.unwrap_or(grid::DEFAULT_TEMPERATURE_K);
        let m = s.grid.mass_amu.unwrap_or(grid::RB87_MASS_AMU);
        let vgrid = match s.grid.kind {
            GridKind::GaussHermite => VelocityGrid::gauss_hermite(s.grid.points, t, m)?,
            GridKind::Uniform => {
                VelocityGrid::uniform(s.grid.points, t, m, s.grid.span.unwrap_or(grid::DEFAULT_SPAN))?
            }
            GridKind::Single => VelocityGrid::single(0.0),
        };
        let detunings = linspace(s.detuning_min.gamma(), s.detuning_max.gamma(), s.points);

        let analyzer = match f.analyzer {
            None => Analyzer::default(),
            Some(a) => {
                let calibration = match a.calibration {
                    Some(c) => LcrCalibration::new(c.iter().map(|p| (p[0], p[1].to_radians())).collect())?,
                    None => LcrCalibration::default(),
                };
                let volts = match a.ramp {
                    Some(r) => triangular_voltages(r.volts_high, r.volts_low, r.points_per_leg),
                    None => triangular_voltages(10.0, 0.0, 51),
                };
                Analyzer {
                    chain: AnalyzerChain {
                        lcr_axis: a.lcr_axis_deg * PI / 180.0,
                        polarizer_axis: a.polarizer_axis_deg * PI / 180.0,
                    },
                    e0: positive("e0", a.e0)?,
                    calibration,
                    volts,
                }
            }
        };

        let sc = Scenario {
            name: f.name,
            description: f.description,
            model,
            fields,
            medium,
            detunings,
            geometry: s.geometry,
            grid: vgrid,
            analyzer,
        };
        sc.sweep_spec().validate()?;
        Ok(sc)
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        SweepSpec {
            model: self.model.clone(),
            fields: self.fields,
            medium: self.medium,
            detunings: self.detunings.clone(),
            geometry: self.geometry,
            grid: self.grid.clone(),
        }
    }
}

pub fn preset_source(name: &str) -> Result<&'static str> {
    PRESETS
        .iter()
        .find(|p| p.0 == name)
        .map(|p| p.1)
        .ok_or_else(|| {
            let names: Vec<_> = PRESETS.iter().map(|p| p.0).collect();
            Error::Config(format!("unknown preset '{name}' (available: {})", names.join(", ")))
        })
}
