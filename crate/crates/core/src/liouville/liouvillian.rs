use std::io::Write;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::density::DensityMatrix;
use crate::atom::{DecayNetwork, LevelScheme};
use crate::error::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pos {
    Resolved(usize),
    Lumped(usize),
}

/// Maps density-matrix entries onto vector slots. Every pair of resolved
/// levels gets a slot (`a * nr + b`); lumped levels only get a population
/// slot, appended after the resolved block.
#[derive(Clone, Debug, PartialEq)]
pub struct StateLayout {
    resolved: Vec<usize>,
    lumped: Vec<usize>,
    pos: Vec<Pos>,
}

impl StateLayout {
    pub fn new(scheme: &LevelScheme) -> Self {
        let mut resolved = Vec::new();
        let mut lumped = Vec::new();
        let pos = scheme
            .levels()
            .iter()
            .enumerate()
            .map(|(i, l)| {
                if l.is_lumped() {
                    lumped.push(i);
                    Pos::Lumped(lumped.len() - 1)
                } else {
                    resolved.push(i);
                    Pos::Resolved(resolved.len() - 1)
                }
            })
            .collect();
        StateLayout { resolved, lumped, pos }
    }

    pub fn n_levels(&self) -> usize {
        self.pos.len()
    }

    pub fn n_resolved(&self) -> usize {
        self.resolved.len()
    }

    pub fn dim(&self) -> usize {
        self.resolved.len().pow(2) + self.lumped.len()
    }

    /// Slot of ρ_ij (scheme indices), `None` for coherences of lumped levels.
    pub fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let nr = self.resolved.len();
        match (self.pos[i], self.pos[j]) {
            (Pos::Resolved(a), Pos::Resolved(b)) => Some(a * nr + b),
            (Pos::Lumped(a), Pos::Lumped(b)) if a == b => Some(nr * nr + a),
            _ => None,
        }
    }

    pub fn pop_slot(&self, i: usize) -> usize {
        self.slot(i, i).expect("diagonal always has a slot")
    }

    /// Scheme indices `(i, j)` stored in `slot`.
    pub fn entry(&self, slot: usize) -> (usize, usize) {
        let nr = self.resolved.len();
        if slot < nr * nr {
            (self.resolved[slot / nr], self.resolved[slot % nr])
        } else {
            let l = self.lumped[slot - nr * nr];
            (l, l)
        }
    }

    pub fn is_population(&self, slot: usize) -> bool {
        let (i, j) = self.entry(slot);
        i == j
    }

    pub fn vectorize(&self, rho: &DensityMatrix) -> DVector<C64> {
        DVector::from_fn(self.dim(), |s, _| {
            let (i, j) = self.entry(s);
            rho.rho[(i, j)]
        })
    }

    pub fn unvectorize(&self, x: &DVector<C64>) -> DensityMatrix {
        let mut d = DensityMatrix::zeros(self.n_levels());
        for (s, v) in x.iter().enumerate() {
            let (i, j) = self.entry(s);
            d.rho[(i, j)] = *v;
        }
        d
    }
}

/// How the trace constraint is carried.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Representation {
    /// All slots kept, s = 0. The solver swaps the last population row for
    /// the trace row.
    #[default]
    Homogeneous,
    /// The last population slot is eliminated as 1 - Σ(other populations),
    /// which moves its column into a nonzero source vector s.
    TraceEliminated,
}

/// d x/dt = M x + s, with M stored as merged sparse triplets.
#[derive(Clone, Debug)]
pub struct Liouvillian {
    pub layout: StateLayout,
    pub representation: Representation,
    /// `(row, col, value)`, sorted and merged.
    pub m: Vec<(usize, usize, C64)>,
    pub s: DVector<C64>,
}

fn merge(mut t: Vec<(usize, usize, C64)>) -> Vec<(usize, usize, C64)> {
    t.sort_by_key(|e| (e.0, e.1));
    let mut out: Vec<(usize, usize, C64)> = Vec::with_capacity(t.len());
    for (r, c, v) in t {
        match out.last_mut() {
            Some(last) if last.0 == r && last.1 == c => last.2 += v,
            _ => out.push((r, c, v)),
        }
    }
    out.retain(|e| e.2 != ZERO);
    out
}

/// Builds the Liouvillian of -i[H, ρ] plus the decay network.
pub fn vectorize(
    h: &DMatrix<C64>,
    scheme: &LevelScheme,
    network: &DecayNetwork,
    representation: Representation,
) -> Result<Liouvillian> {
    let n = scheme.len();
    if h.nrows() != n || h.ncols() != n {
        return Err(Error::DimensionMismatch(format!("H is {}x{}, scheme has {n} levels", h.nrows(), h.ncols())));
    }
    if network.total.len() != n {
        return Err(Error::DimensionMismatch("decay network does not match the scheme".into()));
    }
    network.check_closure(scheme)?;
    let layout = StateLayout::new(scheme);
    let res = &layout.resolved;
    for &l in &layout.lumped {
        for i in 0..n {
            if i != l && (h[(i, l)] != ZERO || h[(l, i)] != ZERO) {
                return Err(Error::invalid(format!("lumped level {} is field-coupled", scheme.level(l))));
            }
        }
    }

    let mut t = Vec::new();
    let minus_i = C64::new(0.0, -1.0);
    // Couplings per resolved level, to skip the zeros of H.
    let nz: Vec<Vec<(usize, C64)>> = res
        .iter()
        .map(|&a| {
            res.iter()
                .enumerate()
                .filter(|(_, &c)| h[(a, c)] != ZERO)
                .map(|(k, &c)| (k, h[(a, c)]))
                .collect()
        })
        .collect();
    let nr = res.len();
    for i in 0..nr {
        for j in 0..nr {
            let row = i * nr + j;
            // -i H_ac ρ_cb
            for &(k, hv) in &nz[i] {
                t.push((row, k * nr + j, minus_i * hv));
            }
            // +i ρ_ac H_cb, with H_cb = conj(H_bc)
            for &(k, hv) in &nz[j] {
                t.push((row, i * nr + k, -minus_i * hv.conj()));
            }
            if i != j {
                let g = 0.5 * (network.total[res[i]] + network.total[res[j]]);
                if g != 0.0 {
                    t.push((row, row, C64::new(-g, 0.0)));
                }
            }
        }
    }
    for (a, &g) in network.total.iter().enumerate() {
        let p = layout.pop_slot(a);
        t.push((p, p, C64::new(-g, 0.0)));
    }
    for &(from, to, r) in &network.transfers {
        t.push((layout.pop_slot(to), layout.pop_slot(from), C64::new(r, 0.0)));
    }
    let full = Liouvillian {
        s: DVector::zeros(layout.dim()),
        layout,
        representation: Representation::Homogeneous,
        m: merge(t),
    };
    Ok(match representation {
        Representation::Homogeneous => full,
        Representation::TraceEliminated => full.eliminate_trace(),
    })
}

impl Liouvillian {
    /// Number of unknowns in this representation.
    pub fn dim(&self) -> usize {
        match self.representation {
            Representation::Homogeneous => self.layout.dim(),
            Representation::TraceEliminated => self.layout.dim() - 1,
        }
    }

    /// Index of the population slot the trace constraint is attached to.
    pub fn trace_slot(&self) -> usize {
        self.layout.dim() - 1
    }

    fn eliminate_trace(self) -> Liouvillian {
        let last = self.trace_slot();
        let mut s = DVector::zeros(last);
        let mut t = Vec::with_capacity(self.m.len() * 2);
        let pops: Vec<usize> = (0..last).filter(|&c| self.layout.is_population(c)).collect();
        for &(r, c, v) in &self.m {
            if r == last {
                continue;
            }
            if c == last {
                s[r] += v;
                for &p in &pops {
                    t.push((r, p, -v));
                }
            } else {
                t.push((r, c, v));
            }
        }
        Liouvillian {
            layout: self.layout,
            representation: Representation::TraceEliminated,
            m: merge(t),
            s,
        }
    }

    /// State vector of `rho` in this representation.
    pub fn to_state(&self, rho: &DensityMatrix) -> DVector<C64> {
        let x = self.layout.vectorize(rho);
        match self.representation {
            Representation::Homogeneous => x,
            Representation::TraceEliminated => x.rows(0, self.dim()).into_owned(),
        }
    }

    pub fn from_state(&self, x: &DVector<C64>) -> DensityMatrix {
        match self.representation {
            Representation::Homogeneous => self.layout.unvectorize(x),
            Representation::TraceEliminated => {
                let mut full = DVector::zeros(self.layout.dim());
                full.rows_mut(0, self.dim()).copy_from(x);
                let mut rest = C64::new(1.0, 0.0);
                for p in 0..self.dim() {
                    if self.layout.is_population(p) {
                        rest -= x[p];
                    }
                }
                full[self.trace_slot()] = rest;
                self.layout.unvectorize(&full)
            }
        }
    }

    /// M x + s.
    pub fn apply(&self, x: &DVector<C64>) -> DVector<C64> {
        let mut y = self.s.clone();
        for &(r, c, v) in &self.m {
            y[r] += v * x[c];
        }
        y
    }

    /// dρ/dt as a full matrix. In the trace-eliminated representation the
    /// missing population derivative is restored from trace conservation.
    pub fn derivative(&self, rho: &DensityMatrix) -> DensityMatrix {
        let y = self.apply(&self.to_state(rho));
        match self.representation {
            Representation::Homogeneous => self.layout.unvectorize(&y),
            Representation::TraceEliminated => {
                let mut full = DVector::zeros(self.layout.dim());
                full.rows_mut(0, self.dim()).copy_from(&y);
                let mut rest = ZERO;
                for p in 0..self.dim() {
                    if self.layout.is_population(p) {
                        rest -= y[p];
                    }
                }
                full[self.trace_slot()] = rest;
                self.layout.unvectorize(&full)
            }
        }
    }

    /// Largest absolute row sum of M.
    pub fn norm_inf(&self) -> f64 {
        let mut rows = vec![0.0; self.dim()];
        for &(r, _, v) in &self.m {
            rows[r] += v.norm();
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut d = DMatrix::zeros(self.dim(), self.dim());
        for &(r, c, v) in &self.m {
            d[(r, c)] += v;
        }
        d
    }

    /// Writes M and s as CSV: `# schema`, a slot legend, then
    /// `kind,row,col,re,im` records (`kind` is `M` or `s`, `col` empty for s).
    pub fn write_csv<W: Write>(&self, scheme: &LevelScheme, mut out: W) -> Result<()> {
        writeln!(out, "# schema: waveplate-liouvillian v1")?;
        writeln!(out, "# representation: {:?}", self.representation)?;
        for slot in 0..self.dim() {
            let (i, j) = self.layout.entry(slot);
            writeln!(out, "# slot {slot}: rho[{}, {}]", scheme.level(i), scheme.level(j))?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["kind", "row", "col", "re", "im"])?;
        for &(r, c, v) in &self.m {
            w.write_record(["M", &r.to_string(), &c.to_string(), &v.re.to_string(), &v.im.to_string()])?;
        }
        for (r, v) in self.s.iter().enumerate() {
            if *v != ZERO {
                w.write_record(["s", &r.to_string(), "", &v.re.to_string(), &v.im.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}
