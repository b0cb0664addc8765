//! Branching tables: fraction of a decaying level that lands in each lower level.

use std::fmt;

use super::levels::{Manifold, SublevelId};
use super::strength::DipoleLeg;
use crate::error::{Error, Result};

/// Column-stochastic matrix of branching fractions. Rows are the lower
/// (target) states, columns the decaying states.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchingTable<L = SublevelId> {
    rows: Vec<L>,
    cols: Vec<L>,
    /// Row-major, `rows.len() x cols.len()`.
    data: Vec<f64>,
}

/// Column-sum tolerance for the printed table.
pub const COLUMN_SUM_TOLERANCE: f64 = 2e-3;

impl<L: Clone + PartialEq + fmt::Display> BranchingTable<L> {
    pub fn new(rows: Vec<L>, cols: Vec<L>, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows.len() * cols.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a {}x{} table",
                data.len(),
                rows.len(),
                cols.len()
            )));
        }
        Ok(BranchingTable { rows, cols, data })
    }

    /// Identity table on `levels`.
    pub fn identity(levels: Vec<L>) -> Self {
        let n = levels.len();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        BranchingTable { rows: levels.clone(), cols: levels, data }
    }

    pub fn rows(&self) -> &[L] {
        &self.rows
    }

    pub fn cols(&self) -> &[L] {
        &self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols.len() + col]
    }

    pub fn fraction(&self, row: &L, col: &L) -> Option<f64> {
        let r = self.rows.iter().position(|x| x == row)?;
        let c = self.cols.iter().position(|x| x == col)?;
        Some(self.get(r, c))
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = (&L, f64)> + '_ {
        self.rows.iter().enumerate().map(move |(r, l)| (l, self.get(r, col)))
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.cols.len()).map(|c| self.column(c).map(|(_, v)| v).sum()).collect()
    }

    /// Entries in [0, 1] and every column summing to 1 within `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        for (i, v) in self.data.iter().enumerate() {
            if !(0.0..=1.0).contains(v) {
                let (r, c) = (i / self.cols.len(), i % self.cols.len());
                return Err(Error::invalid(format!(
                    "fraction {v} for ({} | {}) outside [0, 1]",
                    self.rows[r], self.cols[c]
                )));
            }
        }
        for (c, s) in self.column_sums().into_iter().enumerate() {
            if (s - 1.0).abs() > tol {
                return Err(Error::invalid(format!(
                    "column {} sums to {s}, not 1 within {tol}",
                    self.cols[c]
                )));
            }
        }
        Ok(())
    }
}

/// Chains two decay steps: `result = mid_to_ground · upper_to_mid`.
///
/// The rows of `upper_to_mid` must be the columns of `mid_to_ground`, in order.
pub fn effective_branching<L: Clone + PartialEq + fmt::Display>(
    upper_to_mid: &BranchingTable<L>,
    mid_to_ground: &BranchingTable<L>,
) -> Result<BranchingTable<L>> {
    if upper_to_mid.rows != mid_to_ground.cols {
        return Err(Error::DimensionMismatch(format!(
            "intermediate levels differ: {} rows vs {} columns",
            upper_to_mid.rows.len(),
            mid_to_ground.cols.len()
        )));
    }
    let (ng, nm, nu) = (mid_to_ground.rows.len(), mid_to_ground.cols.len(), upper_to_mid.cols.len());
    let mut data = vec![0.0; ng * nu];
    for g in 0..ng {
        for u in 0..nu {
            data[g * nu + u] = (0..nm).map(|m| mid_to_ground.get(g, m) * upper_to_mid.get(m, u)).sum();
        }
    }
    BranchingTable::new(mid_to_ground.rows.clone(), upper_to_mid.cols.clone(), data)
}

impl BranchingTable<SublevelId> {
    /// True if `f(mF -> -mF on rows, -mF on cols) == f` exactly.
    pub fn is_reflection_symmetric(&self) -> bool {
        let flip = |l: &SublevelId| SublevelId { manifold: l.manifold, mf: l.mf.map(|m| -m) };
        for (r, row) in self.rows.iter().enumerate() {
            for (c, col) in self.cols.iter().enumerate() {
                match self.fraction(&flip(row), &flip(col)) {
                    Some(v) if v == self.get(r, c) => {}
                    _ => return false,
                }
            }
        }
        true
    }

    /// Writes the table as `row, col, fraction` CSV with a schema line.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# schema: waveplate-branching v1")?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["ground", "excited", "fraction"])?;
        for (r, row) in self.rows.iter().enumerate() {
            for (c, col) in self.cols.iter().enumerate() {
                w.write_record([row.to_string(), col.to_string(), format!("{}", self.get(r, c))])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the layout written by [`write_csv`](Self::write_csv). Rows and
    /// columns keep their first-seen order; missing cells are zero.
    pub fn read_csv<R: std::io::Read>(input: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
        let (mut rows, mut cols, mut cells) = (Vec::new(), Vec::new(), Vec::new());
        for rec in rdr.records() {
            let rec = rec?;
            if rec.len() != 3 {
                return Err(Error::invalid(format!("branching row needs 3 fields: {rec:?}")));
            }
            let g: SublevelId = rec[0].parse()?;
            let e: SublevelId = rec[1].parse()?;
            let v: f64 = rec[2].trim().parse().map_err(|_| Error::invalid(format!("bad fraction '{}'", &rec[2])))?;
            if !rows.contains(&g) {
                rows.push(g);
            }
            if !cols.contains(&e) {
                cols.push(e);
            }
            cells.push((g, e, v));
        }
        let mut data = vec![0.0; rows.len() * cols.len()];
        for (g, e, v) in cells {
            let r = rows.iter().position(|x| *x == g).unwrap();
            let c = cols.iter().position(|x| *x == e).unwrap();
            data[r * cols.len() + c] = v;
        }
        BranchingTable::new(rows, cols, data)
    }
}

const TABLE1: [[f64; 8]; 8] = [
    [0.68852, 0.19426, 0.05055, 0.0, 0.0, 0.2361, 0.09722, 0.0],
    [0.19426, 0.47296, 0.190277, 0.07583, 0.0, 0.1667, 0.11805, 0.04861],
    [0.05055, 0.190277, 0.45166, 0.190277, 0.05055, 0.104167, 0.125, 0.104167],
    [0.0, 0.07583, 0.190277, 0.47296, 0.19426, 0.04861, 0.11805, 0.1667],
    [0.0, 0.0, 0.05055, 0.19426, 0.68852, 0.0, 0.09722, 0.2361],
    [0.04722, 0.03333, 0.02083, 0.009722, 0.0, 0.21296, 0.1226875, 0.1088],
    [0.01944, 0.023611, 0.025, 0.023611, 0.01944, 0.1226875, 0.199, 0.1226875],
    [0.0, 0.009722, 0.02083, 0.03333, 0.04722, 0.1088, 0.1226875, 0.21296],
];

fn sublevels(manifold: Manifold, f: i32) -> impl Iterator<Item = SublevelId> {
    (-f..=f).map(move |m| SublevelId { manifold, mf: Some(m) })
}

/// Effective 6S1/2 -> 5S1/2 branching through 5P3/2 for 87Rb, as printed.
///
/// Rows: F=2 mF=-2..2 then F=1 mF=-1..1. Columns: F''=2 mF=-2..2 then
/// F''=1 mF=-1..1.
pub fn load_table1() -> BranchingTable {
    let rows: Vec<_> = sublevels(Manifold::G2, 2).chain(sublevels(Manifold::G1, 1)).collect();
    let cols: Vec<_> = sublevels(Manifold::U2, 2).chain(sublevels(Manifold::U1, 1)).collect();
    let data = TABLE1.iter().flatten().copied().collect();
    BranchingTable::new(rows, cols, data).expect("8x8 literal")
}

/// A hyperfine Zeeman sublevel of any fine-structure term, for composing
/// branching chains through manifolds that the model itself lumps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HyperfineSublevel {
    /// Term label, e.g. "5S1/2".
    pub term: &'static str,
    pub f: i32,
    pub mf: i32,
}

impl fmt::Display for HyperfineSublevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} F={} mF={:+}", self.term, self.f, self.mf)
    }
}

/// Spontaneous-emission branching between two terms from squared dipole
/// amplitudes. Columns of a complete lower term sum to one.
pub fn dipole_branching(
    leg: DipoleLeg,
    upper: (&'static str, &[i32]),
    lower: (&'static str, &[i32]),
) -> Result<BranchingTable<HyperfineSublevel>> {
    let expand = |(term, fs): (&'static str, &[i32])| -> Vec<HyperfineSublevel> {
        fs.iter()
            .flat_map(|&f| (-f..=f).map(move |mf| HyperfineSublevel { term, f, mf }))
            .collect()
    };
    let (cols, rows) = (expand(upper), expand(lower));
    let mut data = Vec::with_capacity(rows.len() * cols.len());
    for l in &rows {
        for u in &cols {
            let a = leg.amplitude(u.f, u.mf, l.f, l.mf, u.mf - l.mf)?;
            data.push(a * a);
        }
    }
    BranchingTable::new(rows, cols, data)
}

/// 87Rb 6S1/2 -> 5P3/2 -> 5S1/2 branching built from isotropic dipole
/// strengths alone.
pub fn rb87_cascade_from_dipole() -> Result<BranchingTable<HyperfineSublevel>> {
    let six_s = ("6S1/2", &[2, 1][..]);
    let p32 = ("5P3/2", &[0, 1, 2, 3][..]);
    let five_s = ("5S1/2", &[2, 1][..]);
    let up = dipole_branching(DipoleLeg { j_upper2: 1, j_lower2: 3, nuclear_spin2: 3 }, six_s, p32)?;
    let down = dipole_branching(DipoleLeg { j_upper2: 3, j_lower2: 1, nuclear_spin2: 3 }, p32, five_s)?;
    effective_branching(&up, &down)
}
