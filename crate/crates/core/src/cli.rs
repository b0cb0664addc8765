//! Command-line front end. `main.rs` only forwards to [`run_main`].

use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;

use crate::atom::{
    decay_distribution, load_table1, BranchingTable, DecayNetwork, DecayParams, FieldRole, LevelScheme, Manifold,
    SublevelId,
};
use crate::atom::branching::COLUMN_SUM_TOLERANCE;
use crate::doppler::grid::{doppler_shifts, Geometry, VelocityGrid};
use crate::doppler::sweep::{self, SweepOptions};
use crate::error::{Error, Result};
use crate::liouville::{residual, steady_state, DensityMatrix, Model, Tolerances};
use crate::polarimetry::{
    chain_intensity, detector_intensity, ideal_probe_state, invert_least_squares, invert_scan, jones,
    response_from_density, synthesize_scan, Inversion, JonesVector, LcrScan,
    OpticalResponse,
};
use crate::scenario::{Analyzer, Scenario};

#[derive(Debug, Parser)]
#[command(name = "waveplate", version, about = "Optically controlled waveplate in a Rb vapor ladder")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct ScenarioArgs {
    /// Scenario TOML file.
    #[arg(long, conflicts_with = "preset")]
    pub scenario: Option<PathBuf>,
    /// Built-in scenario (fig1-ideal, fig7-full, fig7-reservoir, fig7-reduced,
    /// fig7-slow-ground, fig8-qwp, two-level-oracle).
    #[arg(long)]
    pub preset: Option<String>,
    /// Beam geometry, overriding the scenario: co or counter.
    #[arg(long)]
    pub geometry: Option<Geometry>,
}

impl ScenarioArgs {
    fn load(&self) -> Result<Option<Scenario>> {
        let mut s = match (&self.scenario, &self.preset) {
            (Some(p), _) => Scenario::from_path(p)?,
            (None, Some(n)) => Scenario::preset(n)?,
            (None, None) => return Ok(None),
        };
        if let Some(g) = self.geometry {
            s.geometry = g;
        }
        Ok(Some(s))
    }

    fn require(&self) -> Result<Scenario> {
        self.load()?.ok_or_else(|| Error::Config("pass --scenario <path> or --preset <name>".into()))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Steady state of one (detuning, velocity) cell.
    Solve {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Signal detuning in Γ_a; the scenario's value when absent.
        #[arg(long, allow_hyphen_values = true)]
        delta_s: Option<f64>,
        /// Atomic velocity along the pump, m/s.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        velocity: f64,
    },
    /// Doppler-averaged sweep over signal detuning, written as CSV.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Override the number of signal detunings.
        #[arg(long)]
        detunings: Option<usize>,
        /// Override the number of velocity nodes.
        #[arg(long)]
        velocities: Option<usize>,
        /// Checkpoint file; defaults to `<out>.checkpoint`.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
    /// Synthesize an LCR scan, from a scenario cell or from explicit (α_d, φ_d).
    Lcr {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, requires = "phi_d_deg")]
        alpha_d: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        phi_d_deg: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        alpha_minus: f64,
        /// Signal detuning in Γ_a for the scenario-driven scan.
        #[arg(long, allow_hyphen_values = true)]
        delta_s: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recover (α_d, φ_d) from a scan CSV.
    Invert {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        scan: PathBuf,
        /// Known common attenuation; when given, the residual is measured
        /// against the forward model with the file's e0.
        #[arg(long)]
        alpha_minus: Option<f64>,
    },
    /// Run the embedded consistency checks.
    Validate {
        /// Check this branching table (CSV as written by export-table1)
        /// instead of the embedded one.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Write the embedded effective-branching table as CSV.
    ExportTable1 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    match run(cli.command, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Solve { scenario, delta_s, velocity } => {
            let s = scenario.require()?;
            let ds = delta_s.unwrap_or(s.fields.signal.detuning);
            write!(out, "{}", cmd_solve(&s, ds, velocity)?)?;
        }
        Command::Sweep { scenario, out: path, workers, detunings, velocities, checkpoint, quiet } => {
            let mut s = scenario.require()?;
            if let Some(n) = detunings {
                let (lo, hi) = (s.detunings[0], s.detunings[s.detunings.len() - 1]);
                s.detunings = sweep::linspace(lo, hi, n);
            }
            if let Some(n) = velocities {
                s.grid = regrid(&s.grid, n)?;
            }
            let ck = checkpoint.unwrap_or_else(|| path.with_extension("checkpoint"));
            let rows = cmd_sweep(&s, &path, workers, Some(&ck), !quiet)?;
            writeln!(out, "wrote {rows} rows to {}", path.display())?;
        }
        Command::Lcr { scenario, alpha_d, phi_d_deg, alpha_minus, delta_s, out: path } => {
            let s = scenario.load()?;
            let analyzer = s.as_ref().map(|s| s.analyzer.clone()).unwrap_or_default();
            let response = match (alpha_d, phi_d_deg, &s) {
                (Some(a), Some(p), _) => OpticalResponse {
                    phi_plus: p.to_radians(),
                    phi_minus: 0.0,
                    alpha_plus: alpha_minus + a,
                    alpha_minus,
                },
                (None, None, Some(s)) => scenario_response(s, delta_s.unwrap_or(s.fields.signal.detuning))?,
                _ => return Err(Error::Config("pass --alpha-d and --phi-d-deg, or a scenario".into())),
            };
            let scan = cmd_lcr(&analyzer, &response);
            scan.write_csv(BufWriter::new(File::create(&path)?))?;
            writeln!(
                out,
                "alpha_d = {:.9}\nphi_d_deg = {:.9}\nwrote {} samples to {}",
                response.alpha_d(),
                response.phi_d_deg_wrapped(),
                scan.samples.len(),
                path.display()
            )?;
        }
        Command::Invert { scenario, scan, alpha_minus } => {
            let cal = scenario.load()?.map(|s| s.analyzer.calibration).unwrap_or_default();
            let scan = LcrScan::read_csv(BufReader::new(File::open(&scan)?), &cal)?;
            let inv = cmd_invert(&scan, alpha_minus)?;
            let [a, b] = inv.phi_d_branches();
            writeln!(out, "alpha_d = {:.9}", inv.alpha_d)?;
            writeln!(out, "phi_d_deg = {:.9} (or {:.9})", a.to_degrees(), b.to_degrees().rem_euclid(360.0))?;
            writeln!(out, "scale = {:.9}", inv.fitted_scale)?;
            writeln!(out, "residual = {:.3e}", inv.residual)?;
        }
        Command::Validate { table } => {
            let t = match table {
                Some(p) => BranchingTable::read_csv(File::open(p)?)?,
                None => load_table1(),
            };
            let checks = cmd_validate(&t);
            let mut failed = 0;
            for c in &checks {
                writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
                failed += usize::from(!c.passed);
            }
            if failed > 0 {
                return Err(Error::invalid(format!("{failed} of {} checks failed", checks.len())));
            }
            writeln!(out, "all {} checks passed", checks.len())?;
        }
        Command::ExportTable1 { out: path } => match path {
            Some(p) => load_table1().write_csv(BufWriter::new(File::create(&p)?))?,
            None => load_table1().write_csv(&mut *out)?,
        },
    }
    Ok(())
}

fn regrid(g: &VelocityGrid, n: usize) -> Result<VelocityGrid> {
    if g.len() == 1 {
        return Ok(g.clone());
    }
    // Keep the kind: Gauss–Hermite nodes are never evenly spaced.
    let even = g.points.windows(3).all(|w| ((w[2].0 - w[1].0) - (w[1].0 - w[0].0)).abs() < 1e-9 * g.v_rms());
    if even {
        VelocityGrid::uniform(n, g.temperature, g.mass, g.span)
    } else {
        VelocityGrid::gauss_hermite(n, g.temperature, g.mass)
    }
}

/// Doppler-averaged response at a single signal detuning.
pub fn scenario_response(s: &Scenario, delta_s: f64) -> Result<OpticalResponse> {
    let mut spec = s.sweep_spec();
    spec.detunings = vec![delta_s];
    Ok(sweep::sweep(&spec, &SweepOptions { workers: 1, ..Default::default() })?[0])
}

pub struct SolveReport {
    pub scheme: LevelScheme,
    pub rho: DensityMatrix,
    pub residual: f64,
    pub tolerance_ok: bool,
    pub response: Option<OpticalResponse>,
    pub delta_s: f64,
    pub velocity: f64,
    pub shifts: (f64, f64),
    coherences: Vec<(String, C64)>,
}

impl SolveReport {
    pub fn excited_population(&self) -> f64 {
        (0..self.scheme.len())
            .filter(|&i| !matches!(self.scheme.level(i).manifold, Manifold::G1 | Manifold::G2))
            .map(|i| self.rho.population(i))
            .sum()
    }
}

impl std::fmt::Display for SolveReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "delta_s = {} gamma, v = {} m/s, shifts = ({:.6}, {:.6})", self.delta_s, self.velocity, self.shifts.0, self.shifts.1)?;
        writeln!(f, "populations:")?;
        for (i, l) in self.scheme.levels().iter().enumerate() {
            writeln!(f, "  {:<12} {:.12}", l.to_string(), self.rho.population(i))?;
        }
        writeln!(f, "largest coherences:")?;
        for (name, z) in &self.coherences {
            writeln!(f, "  {name:<26} {:+.6e} {:+.6e}i", z.re, z.im)?;
        }
        writeln!(
            f,
            "checks: trace-1 = {:.2e}, hermiticity = {:.2e}, min population = {:.2e}, residual = {:.2e} ({})",
            self.rho.trace().re - 1.0,
            self.rho.hermiticity_error(),
            self.rho.min_population(),
            self.residual,
            if self.tolerance_ok { "ok" } else { "FAILED" }
        )?;
        match &self.response {
            Some(r) => writeln!(
                f,
                "response: phi_plus = {:.9}, phi_minus = {:.9}, alpha_plus = {:.9}, alpha_minus = {:.9}, phi_d_deg = {:.6}, alpha_d = {:.9}",
                r.phi_plus,
                r.phi_minus,
                r.alpha_plus,
                r.alpha_minus,
                r.phi_d_deg_wrapped(),
                r.alpha_d()
            ),
            None => writeln!(f, "response: scheme has no signal transitions"),
        }
    }
}

pub fn cmd_solve(s: &Scenario, delta_s: f64, velocity: f64) -> Result<SolveReport> {
    let wrap = |e: Error| Error::Cell { detuning: delta_s, velocity, source: Box::new(e) };
    let mut fields = s.fields;
    fields.signal.detuning = delta_s;
    let shifts = doppler_shifts(velocity, s.geometry, fields.pump.k, fields.signal.k);
    let l = s.model.liouvillian(&fields, shifts).map_err(wrap)?;
    let rho = steady_state(&l).map_err(wrap)?;
    let res = residual(&l, &rho);
    let tolerance_ok = rho.check(Tolerances::default()).is_ok() && res <= 1e-9 * l.norm_inf().max(1.0);
    let has_signal = s.model.transitions.for_field(FieldRole::Signal).next().is_some();
    let response = if has_signal {
        Some(response_from_density(&rho, &s.model.transitions, &fields.signal.polarization, &s.medium).map_err(wrap)?)
    } else {
        None
    };
    let mut coherences: Vec<(String, C64)> = s
        .model
        .transitions
        .entries()
        .iter()
        .map(|t| (format!("rho[{}, {}]", t.lower, t.upper), rho.rho[(t.lower_index, t.upper_index)]))
        .collect();
    coherences.sort_by(|a, b| b.1.norm().total_cmp(&a.1.norm()));
    coherences.truncate(6);
    Ok(SolveReport {
        scheme: s.model.scheme.clone(),
        rho,
        residual: res,
        tolerance_ok,
        response,
        delta_s,
        velocity,
        shifts,
        coherences,
    })
}

/// Runs the scenario sweep and writes the CSV; returns the row count.
pub fn cmd_sweep(s: &Scenario, out: &Path, workers: usize, checkpoint: Option<&Path>, progress: bool) -> Result<usize> {
    let spec = s.sweep_spec();
    let opts = SweepOptions { workers, checkpoint: checkpoint.map(Path::to_path_buf), progress };
    let r = sweep::sweep(&spec, &opts)?;
    let mut f = BufWriter::new(File::create(out)?);
    sweep::write_csv(&mut f, &spec.detunings, &r)?;
    f.flush()?;
    if let Some(c) = checkpoint {
        if c.exists() {
            std::fs::remove_file(c)?;
        }
    }
    Ok(r.len())
}

/// Detector trace over the analyzer's LCR ramp for a y-polarized probe.
pub fn cmd_lcr(analyzer: &Analyzer, response: &OpticalResponse) -> LcrScan {
    let e_in = JonesVector::y_hat().scale(C64::new(analyzer.e0.sqrt(), 0.0));
    let e_out = jones::propagate_cell(&e_in, response);
    LcrScan {
        samples: analyzer.thetas().into_iter().map(|t| (t, analyzer.chain.intensity(&e_out, t))).collect(),
        e0: analyzer.e0,
    }
}

/// Three samples use the closed form, longer scans the least-squares fit.
pub fn cmd_invert(scan: &LcrScan, alpha_minus: Option<f64>) -> Result<Inversion> {
    scan.validate()?;
    match scan.samples.len() {
        0..=2 => Err(Error::invalid("a scan needs at least three samples")),
        3 => invert_scan([scan.samples[0], scan.samples[1], scan.samples[2]], scan.e0, alpha_minus.unwrap_or(0.0)),
        _ => invert_least_squares(&scan.samples, alpha_minus.map(|_| scan.e0), alpha_minus.unwrap_or(0.0)),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

/// The embedded invariant suite, run against `table` as the branching data.
pub fn cmd_validate(table: &BranchingTable) -> Vec<Check> {
    let mut out = Vec::new();

    let sums = table.column_sums();
    let worst = sums.iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max);
    out.push(check(
        "branching column sums",
        table.validate(COLUMN_SUM_TOLERANCE).is_ok(),
        format!("largest |sum - 1| = {worst:.2e} (tolerance {COLUMN_SUM_TOLERANCE:.0e})"),
    ));
    out.push(check("branching mF reflection symmetry", table.is_reflection_symmetric(), String::new()));
    let closure = LevelScheme::rb87_full(DecayParams::default())
        .and_then(|s| DecayNetwork::with_table(&s, table).and_then(|n| n.check_closure(&s)));
    out.push(check(
        "decay network conserves population",
        closure.is_ok(),
        closure.err().map(|e| e.to_string()).unwrap_or_default(),
    ));

    let dist = LevelScheme::rb87_full(DecayParams::default()).and_then(|s| {
        decay_distribution(SublevelId { manifold: Manifold::E2, mf: Some(0) }, &s, 1.0)
    });
    let got = |target: SublevelId, d: &[(SublevelId, f64)]| -> f64 {
        d.iter().filter(|x| x.0 == target).map(|x| x.1).sum()
    };
    let (ok, detail) = match dist {
        Ok(d) => {
            let g2 = |m| SublevelId { manifold: Manifold::G2, mf: Some(m) };
            let v = [got(g2(-1), &d), got(g2(1), &d), got(g2(0), &d), got(SublevelId::lumped(Manifold::G1), &d)];
            let want = [0.25, 0.25, 0.0, 0.5];
            (
                v.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-14),
                format!("F'=2 mF=0 -> F=2 mF=-1, +1, 0 and F=1: {:.6} {:.6} {:.6} {:.6} x gamma_a", v[0], v[1], v[2].abs(), v[3]),
            )
        }
        Err(e) => (false, e.to_string()),
    };
    out.push(check("decay distribution example", ok, detail));

    let d = C64::new(-1.0, 1.0);
    let (a, b) = (C64::new(0.0, 1.0) / d, C64::new(1.0, 0.0) / d);
    let ov = |p: Result<JonesVector>, t: JonesVector| p.map(|p| jones::overlap(&p, &t)).unwrap_or(0.0);
    let q = ov(ideal_probe_state(a, b, PI / 2.0), JonesVector::sigma_plus());
    let y = ov(ideal_probe_state(a, b, 0.0), JonesVector::y_hat());
    let x = ov(ideal_probe_state(C64::new(1.0, 0.0), C64::new(0.0, 0.0), PI), JonesVector::x_hat());
    out.push(check(
        "probe polarization special cases",
        (q - 1.0).abs() < 1e-10 && (y - 1.0).abs() < 1e-12 && (x - 1.0).abs() < 1e-10,
        format!("overlaps: quarter-wave/sigma+ {q:.12}, identity/y {y:.12}, half-wave/x {x:.12}"),
    ));

    let mut worst = 0.0f64;
    for k in 0..500 {
        let t = k as f64;
        let r = OpticalResponse {
            phi_plus: 3.0 * (0.71 * t).sin(),
            phi_minus: 2.0 * (1.37 * t).cos(),
            alpha_plus: 0.5 + 0.5 * (0.53 * t).sin(),
            alpha_minus: 0.5 + 0.5 * (0.29 * t).cos(),
        };
        let th = (0.917 * t).rem_euclid(PI);
        worst = worst.max(
            (chain_intensity(1.3, &r, th) - detector_intensity(1.3, r.alpha_minus, r.alpha_d(), r.phi_d(), th)).abs(),
        );
    }
    out.push(check("Jones chain matches closed form", worst < 1e-12, format!("max deviation {worst:.2e}")));

    let th = [0.3, 1.4, 2.6];
    let scan = synthesize_scan(1.0, 0.2, 0.3, 2.0, &th);
    let inv = invert_scan([scan.samples[0], scan.samples[1], scan.samples[2]], 1.0, 0.2);
    let (ok, detail) = match inv {
        Ok(i) => ((i.alpha_d - 0.3).abs() < 1e-6 && (i.phi_d - 2.0).abs() < 1e-6, format!("recovered ({:.9}, {:.9})", i.alpha_d, i.phi_d)),
        Err(e) => (false, e.to_string()),
    };
    out.push(check("three-point inversion round trip", ok, detail));

    let flat = synthesize_scan(1.0, 0.0, 0.0, PI / 2.0, &crate::doppler::linspace(0.0, PI, 25));
    let (ok, detail) = match invert_least_squares(&flat.samples, Some(1.0), 0.0) {
        Ok(i) => ((i.phi_d.to_degrees() - 90.0).abs() < 1e-6, format!("phi_d = {:.9} deg", i.phi_d.to_degrees())),
        Err(e) => (false, e.to_string()),
    };
    out.push(check("flat trace means 90 degrees", ok, detail));

    let two = LevelScheme::two_level(DecayParams { gamma_g: 0.0, ..DecayParams::default() })
        .and_then(Model::new)
        .and_then(|m| {
            let mut f = crate::liouville::FieldSet {
                pump: crate::liouville::FieldSpec {
                    role: FieldRole::Pump,
                    rabi: 1.0,
                    detuning: 0.0,
                    polarization: crate::liouville::Polarization::sigma_plus(),
                    k: 0.0,
                },
                signal: crate::liouville::FieldSpec {
                    role: FieldRole::Signal,
                    rabi: 0.0,
                    detuning: 0.0,
                    polarization: crate::liouville::Polarization::y(),
                    k: 0.0,
                },
            };
            f.pump.rabi = 1.0 / m.transitions.entries()[0].strength.abs();
            m.steady_state(&f, (0.0, 0.0))
        });
    let (ok, detail) = match two {
        Ok(rho) => ((rho.population(1) - 1.0 / 3.0).abs() < 1e-9, format!("excited population {:.12}", rho.population(1))),
        Err(e) => (false, e.to_string()),
    };
    out.push(check("two-level analytic steady state", ok, detail));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (Result<()>, String) {
        let cli = Cli::try_parse_from(std::iter::once("waveplate").chain(args.iter().copied())).unwrap();
        let mut buf = Vec::new();
        let r = run(cli.command, &mut buf);
        (r, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn validate_passes_on_embedded_data() {
        let checks = cmd_validate(&load_table1());
        assert!(checks.iter().all(|c| c.passed), "{checks:#?}");
    }

    #[test]
    fn validate_flags_corrupted_table() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        let mut text = Vec::new();
        load_table1().write_csv(&mut text).unwrap();
        let text = String::from_utf8(text).unwrap().replacen("0.68852", "0.78852", 1);
        std::fs::write(&p, text).unwrap();
        let (r, out) = run_args(&["validate", "--table", p.to_str().unwrap()]);
        assert_eq!(r.unwrap_err().exit_code(), 1);
        assert!(out.contains("FAIL branching column sums"), "{out}");
    }

    #[test]
    fn two_level_oracle_solve() {
        let s = Scenario::preset("two-level-oracle").unwrap();
        let rep = cmd_solve(&s, 0.0, 0.0).unwrap();
        // The preset sets the weakest-line Rabi frequency; rescale to Ω = Γ on the one line.
        let a = s.model.transitions.entries()[0].strength.abs();
        let om = a * s.fields.pump.rabi;
        let want = 0.25 * om * om / (0.25 + 0.5 * om * om);
        assert!((rep.excited_population() - want).abs() < 1e-9);
        assert!(rep.tolerance_ok && rep.response.is_none());
        assert!(rep.to_string().contains("E1(mF=+1)"));
    }

    #[test]
    fn fig1_without_pump_stays_in_ground() {
        let mut s = Scenario::preset("fig1-ideal").unwrap();
        s.fields.pump.rabi = 0.0;
        let rep = cmd_solve(&s, 0.0, 0.0).unwrap();
        assert!((rep.rho.population(0) - 1.0).abs() < 1e-12);
        let r = rep.response.unwrap();
        assert!(r.phi_d().abs() < 1e-12 && r.alpha_d().abs() < 1e-12);
    }

    #[test]
    fn lcr_then_invert_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("scan.csv");
        let (r, _) = run_args(&["lcr", "--alpha-d", "0.3", "--phi-d-deg", "114.59155902616465", "--out", p.to_str().unwrap()]);
        r.unwrap();
        let scan = LcrScan::read_csv(BufReader::new(File::open(&p).unwrap()), &crate::polarimetry::LcrCalibration::default()).unwrap();
        let inv = cmd_invert(&scan, Some(0.0)).unwrap();
        assert!((inv.alpha_d - 0.3).abs() < 1e-6 && (inv.phi_d - 2.0).abs() < 1e-6, "{inv:?}");
        let (r, out) = run_args(&["invert", "--scan", p.to_str().unwrap()]);
        r.unwrap();
        assert!(out.contains("alpha_d = 0.3000000"), "{out}");
    }

    #[test]
    fn missing_files_are_io_errors() {
        let (r, _) = run_args(&["invert", "--scan", "/nonexistent/scan.csv"]);
        assert_eq!(r.unwrap_err().exit_code(), 2);
        let (r, _) = run_args(&["sweep", "--preset", "fig1-ideal", "--quiet", "--out", "/nonexistent/dir/x.csv"]);
        assert_eq!(r.unwrap_err().exit_code(), 2);
    }

    #[test]
    fn export_table1_to_stdout() {
        let (r, out) = run_args(&["export-table1"]);
        r.unwrap();
        assert!(out.starts_with("# schema: waveplate-branching v1\n"));
        assert_eq!(out.lines().count(), 2 + 64);
    }
}
