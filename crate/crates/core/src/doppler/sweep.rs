//! Parallel (detuning × velocity) sweep with a fixed-order reduction.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::grid::{doppler_shifts, Geometry, VelocityGrid};
use crate::error::{Error, Result};
use crate::liouville::{steady_state, FieldSet, Model};
use crate::polarimetry::{response_from_density, MediumParams, OpticalResponse};

pub const SWEEP_SCHEMA: &str = "# schema: waveplate-sweep v1";
pub const SWEEP_COLUMNS: [&str; 7] =
    ["delta_s", "phi_plus", "phi_minus", "alpha_plus", "alpha_minus", "phi_d_deg", "alpha_d"];
/// Detunings per checkpoint.
pub const CHECKPOINT_BLOCK: usize = 16;

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub model: Model,
    /// The signal detuning in here is ignored; `detunings` replaces it.
    pub fields: FieldSet,
    pub medium: MediumParams,
    pub detunings: Vec<f64>,
    pub geometry: Geometry,
    pub grid: VelocityGrid,
}

/// `n` evenly spaced values over `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.detunings.is_empty() {
            return Err(Error::invalid("sweep has no detunings"));
        }
        if self.detunings.iter().any(|d| !d.is_finite()) {
            return Err(Error::invalid("non-finite signal detuning"));
        }
        let up = self.detunings.windows(2).all(|w| w[1] > w[0]);
        let down = self.detunings.windows(2).all(|w| w[1] < w[0]);
        if !(up || down) {
            return Err(Error::invalid("signal detunings must be strictly monotone"));
        }
        self.fields.validate()?;
        self.medium.validate()?;
        self.grid.validate()
    }

    /// Response of the atoms moving at `v` for signal detuning `delta_s`.
    pub fn solve_cell(&self, delta_s: f64, v: f64) -> Result<OpticalResponse> {
        let wrap = |e: Error| Error::Cell { detuning: delta_s, velocity: v, source: Box::new(e) };
        let mut fields = self.fields;
        fields.signal.detuning = delta_s;
        let shifts = doppler_shifts(v, self.geometry, fields.pump.k, fields.signal.k);
        let l = self.model.liouvillian(&fields, shifts).map_err(wrap)?;
        let rho = steady_state(&l).map_err(wrap)?;
        let r = response_from_density(&rho, &self.model.transitions, &fields.signal.polarization, &self.medium)
            .map_err(wrap)?;
        if !r.is_finite() {
            return Err(wrap(Error::invalid("non-finite response")));
        }
        Ok(r)
    }

    /// Stable 64-bit digest of everything that determines the output.
    pub fn fingerprint(&self) -> u64 {
        let text = format!(
            "{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}",
            self.model.scheme.levels(),
            self.model.scheme.decay,
            self.model.representation,
            self.fields,
            self.medium,
            self.detunings,
            self.geometry,
            self.grid.points,
        );
        text.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
    }
}

#[derive(Clone, Debug, Default)]
pub struct SweepOptions {
    /// Worker threads; 0 means one per available core.
    pub workers: usize,
    /// Partial results are written here every [`CHECKPOINT_BLOCK`] detunings
    /// and picked up again on the next run.
    pub checkpoint: Option<PathBuf>,
    pub progress: bool,
}

pub fn available_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Doppler-averaged response at every detuning, in input order.
pub fn sweep(spec: &SweepSpec, opts: &SweepOptions) -> Result<Vec<OpticalResponse>> {
    spec.validate()?;
    let workers = if opts.workers == 0 { available_workers() } else { opts.workers };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {workers} workers: {e}")))?;
    let fp = spec.fingerprint();

    let mut done = match &opts.checkpoint {
        Some(p) if p.exists() => resume(p, spec, fp)?,
        _ => Vec::new(),
    };
    let n = spec.detunings.len();
    let nv = spec.grid.len();
    if opts.progress && !done.is_empty() {
        eprintln!("sweep: resuming at detuning {}/{n}", done.len());
    }
    while done.len() < n {
        let start = done.len();
        let end = (start + CHECKPOINT_BLOCK).min(n);
        let cells: Vec<(usize, usize)> = (start..end).flat_map(|d| (0..nv).map(move |v| (d, v))).collect();
        let solved: Vec<Result<OpticalResponse>> = pool.install(|| {
            cells
                .par_iter()
                .map(|&(d, v)| spec.solve_cell(spec.detunings[d], spec.grid.points[v].0))
                .collect()
        });
        let mut it = solved.into_iter();
        for _ in start..end {
            let mut acc = OpticalResponse::default();
            for &(_, w) in &spec.grid.points {
                acc = acc.add(&it.next().expect("one result per cell")?.scaled(w));
            }
            done.push(acc);
        }
        if let Some(p) = &opts.checkpoint {
            write_checkpoint(p, &spec.detunings[..done.len()], &done, fp)?;
        }
        if opts.progress {
            eprintln!("sweep: {}/{n} detunings", done.len());
        }
    }
    Ok(done)
}

fn resume(path: &Path, spec: &SweepSpec, fp: u64) -> Result<Vec<OpticalResponse>> {
    let table = read_csv(BufReader::new(fs::File::open(path)?))?;
    if table.fingerprint != Some(fp) {
        return Err(Error::Config(format!(
            "checkpoint {} was written for a different sweep",
            path.display()
        )));
    }
    if table.detunings.len() > spec.detunings.len() || table.detunings[..] != spec.detunings[..table.detunings.len()] {
        return Err(Error::Config(format!("checkpoint {} detunings do not match", path.display())));
    }
    Ok(table.responses)
}

fn write_checkpoint(path: &Path, detunings: &[f64], responses: &[OpticalResponse], fp: u64) -> Result<()> {
    let tmp = path.with_extension("partial");
    {
        let mut f = std::io::BufWriter::new(fs::File::create(&tmp)?);
        writeln!(f, "# fingerprint: {fp:016x}")?;
        write_csv(&mut f, detunings, responses)?;
        f.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Sweep results as CSV. Floats use the shortest exact representation,
/// so a file read back reproduces the in-memory values bit for bit.
pub fn write_csv<W: Write>(mut out: W, detunings: &[f64], responses: &[OpticalResponse]) -> Result<()> {
    if detunings.len() != responses.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} detunings vs {} responses",
            detunings.len(),
            responses.len()
        )));
    }
    writeln!(out, "{SWEEP_SCHEMA}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_COLUMNS)?;
    for (d, r) in detunings.iter().zip(responses) {
        let row = [*d, r.phi_plus, r.phi_minus, r.alpha_plus, r.alpha_minus, r.phi_d_deg_wrapped(), r.alpha_d()];
        w.write_record(row.iter().map(|v| format!("{v:e}")))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub detunings: Vec<f64>,
    pub responses: Vec<OpticalResponse>,
    pub fingerprint: Option<u64>,
}

pub fn read_csv<R: BufRead>(input: R) -> Result<SweepTable> {
    let mut fingerprint = None;
    let mut body = String::new();
    for line in input.lines() {
        let line = line?;
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("fingerprint:") {
                fingerprint = Some(
                    u64::from_str_radix(v.trim(), 16)
                        .map_err(|_| Error::Config(format!("bad fingerprint line '{line}'")))?,
                );
            }
            continue;
        }
        body.push_str(&line);
        body.push('\n');
    }
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    if rdr.headers()?.iter().collect::<Vec<_>>() != SWEEP_COLUMNS {
        return Err(Error::invalid("sweep CSV has unexpected columns"));
    }
    let (mut detunings, mut responses) = (Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec?;
        let v: Vec<f64> = rec
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::invalid(format!("bad number in sweep row {rec:?}")))?;
        detunings.push(v[0]);
        responses.push(OpticalResponse { phi_plus: v[1], phi_minus: v[2], alpha_plus: v[3], alpha_minus: v[4] });
    }
    Ok(SweepTable { detunings, responses, fingerprint })
}

/// Height and full width at half height of the tallest peak of `y(x)`,
/// measured from the smallest value in the trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Feature {
    pub center: f64,
    pub depth: f64,
    pub fwhm: f64,
}

pub fn absorption_feature(x: &[f64], y: &[f64]) -> Option<Feature> {
    if x.len() != y.len() || x.len() < 3 {
        return None;
    }
    let (ip, &peak) = y.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1))?;
    let base = y.iter().copied().fold(f64::INFINITY, f64::min);
    let depth = peak - base;
    if !(depth > 0.0) {
        return None;
    }
    let half = base + 0.5 * depth;
    let cross = |i: usize, j: usize| x[i] + (x[j] - x[i]) * (half - y[i]) / (y[j] - y[i]);
    let left = (1..=ip).rev().find(|&i| y[i - 1] < half).map(|i| cross(i - 1, i)).unwrap_or(x[0]);
    let right = (ip..y.len() - 1).find(|&i| y[i + 1] < half).map(|i| cross(i, i + 1)).unwrap_or(x[x.len() - 1]);
    Some(Feature { center: x[ip], depth, fwhm: (right - left).abs() })
}
