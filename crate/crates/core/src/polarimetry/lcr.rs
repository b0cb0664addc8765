//! Liquid-crystal retarder calibration, scan synthesis and scan files.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use super::jones::detector_intensity;
use crate::error::{Error, Result};

/// Voltage to retardance map, linearly interpolated between anchors and
/// clamped outside them.
#[derive(Clone, Debug, PartialEq)]
pub struct LcrCalibration {
    /// `(volts, theta_rad)`, sorted by voltage.
    points: Vec<(f64, f64)>,
}

impl LcrCalibration {
    pub fn new(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("calibration needs at least two points"));
        }
        if points.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
            return Err(Error::invalid("non-finite calibration point"));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        let rising = points[1].1 > points[0].1;
        for w in points.windows(2) {
            let ok = w[1].0 > w[0].0 && if rising { w[1].1 > w[0].1 } else { w[1].1 < w[0].1 };
            if !ok {
                return Err(Error::invalid(format!(
                    "calibration not strictly monotone between {} V and {} V",
                    w[0].0, w[1].0
                )));
            }
        }
        Ok(LcrCalibration { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn theta(&self, volts: f64) -> f64 {
        let p = &self.points;
        if volts <= p[0].0 {
            return p[0].1;
        }
        if volts >= p[p.len() - 1].0 {
            return p[p.len() - 1].1;
        }
        let i = p.partition_point(|q| q.0 <= volts) - 1;
        let (v0, t0) = p[i];
        let (v1, t1) = p[i + 1];
        t0 + (t1 - t0) * (volts - v0) / (v1 - v0)
    }
}

impl Default for LcrCalibration {
    /// About π at 2 V and 0 at 8 V.
    fn default() -> Self {
        LcrCalibration { points: vec![(2.0, PI), (8.0, 0.0)] }
    }
}

/// Linear `hi -> lo -> hi` voltage ramp with `n` points per leg (shared turning point).
pub fn triangular_voltages(hi: f64, lo: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let down = (0..n).map(|i| hi + (lo - hi) * i as f64 / (n - 1) as f64);
    let up = (1..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64);
    down.chain(up).collect()
}

/// One LCR sweep as seen by the detector.
#[derive(Clone, Debug, PartialEq)]
pub struct LcrScan {
    /// `(theta_rad, intensity)`
    pub samples: Vec<(f64, f64)>,
    /// Input intensity scale.
    pub e0: f64,
}

/// Ideal detector readings for `(α₋, α_d, φ_d)` at each retardance.
pub fn synthesize_scan(e0: f64, alpha_minus: f64, alpha_d: f64, phi_d: f64, thetas: &[f64]) -> LcrScan {
    LcrScan {
        samples: thetas
            .iter()
            .map(|&t| (t, detector_intensity(e0, alpha_minus, alpha_d, phi_d, t)))
            .collect(),
        e0,
    }
}

/// Same as [`synthesize_scan`] with the retardance taken from a voltage ramp.
pub fn synthesize_voltage_scan(
    e0: f64,
    alpha_minus: f64,
    alpha_d: f64,
    phi_d: f64,
    volts: &[f64],
    cal: &LcrCalibration,
) -> LcrScan {
    let thetas: Vec<f64> = volts.iter().map(|&v| cal.theta(v)).collect();
    synthesize_scan(e0, alpha_minus, alpha_d, phi_d, &thetas)
}

pub const SCAN_SCHEMA: &str = "# schema: waveplate-lcr-scan v1";

impl LcrScan {
    pub fn validate(&self) -> Result<()> {
        for &(t, i) in &self.samples {
            if !t.is_finite() || !(i >= 0.0) {
                return Err(Error::invalid(format!("bad scan sample theta={t}, intensity={i}")));
            }
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{SCAN_SCHEMA}")?;
        writeln!(out, "# e0: {}", self.e0)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["theta_rad", "intensity"])?;
        for &(t, i) in &self.samples {
            w.write_record([format!("{t:.17e}"), format!("{i:.17e}")])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a scan written by [`write_csv`](Self::write_csv). A `voltage`
    /// column instead of `theta_rad` is mapped through `cal`.
    pub fn read_csv<R: BufRead>(input: R, cal: &LcrCalibration) -> Result<Self> {
        let mut e0 = 1.0;
        let mut body = String::new();
        for line in input.lines() {
            let line = line?;
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(v) = rest.trim().strip_prefix("e0:") {
                    e0 = v.trim().parse().map_err(|_| Error::invalid(format!("bad e0 line '{line}'")))?;
                }
                continue;
            }
            body.push_str(&line);
            body.push('\n');
        }
        let mut rdr = csv::Reader::from_reader(body.as_bytes());
        let headers = rdr.headers()?.clone();
        let col = |name: &str| headers.iter().position(|h| h.trim() == name);
        let ic = col("intensity").ok_or_else(|| Error::invalid("scan file lacks an intensity column"))?;
        let (xc, volts) = match (col("theta_rad"), col("voltage")) {
            (Some(c), _) => (c, false),
            (None, Some(c)) => (c, true),
            _ => return Err(Error::invalid("scan file needs theta_rad or voltage")),
        };
        let mut samples = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let num = |c: usize| -> Result<f64> {
                rec.get(c)
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| Error::invalid(format!("bad number in scan row {:?}", rec)))
            };
            let x = num(xc)?;
            samples.push((if volts { cal.theta(x) } else { x }, num(ic)?));
        }
        let scan = LcrScan { samples, e0 };
        scan.validate()?;
        Ok(scan)
    }
}
