//! Spontaneous-decay network: who decays where, and how fast.

use super::branching::{load_table1, BranchingTable};
use super::levels::{CascadeRoute, LevelScheme, Manifold, SublevelId, Tier};
use super::strength::DipoleLeg;
use crate::error::{Error, Result};

/// Target of a decay channel before it is mapped onto the scheme.
fn map_target(scheme: &LevelScheme, id: SublevelId) -> Option<usize> {
    scheme
        .index_of(&id)
        .or_else(|| scheme.index_of(&SublevelId::lumped(id.manifold)))
}

/// Accumulates `(index, weight)` pairs, merging repeats.
fn push(acc: &mut Vec<(usize, f64)>, idx: usize, w: f64) {
    if w == 0.0 {
        return;
    }
    match acc.iter_mut().find(|(i, _)| *i == idx) {
        Some(e) => e.1 += w,
        None => acc.push((idx, w)),
    }
}

/// Squared-amplitude channels from a resolved level into a J=1/2 manifold pair.
fn dipole_channels(
    scheme: &LevelScheme,
    level: SublevelId,
    targets: [Manifold; 2],
) -> Result<Vec<(usize, f64)>> {
    let leg = DipoleLeg { j_upper2: 1, j_lower2: 1, nuclear_spin2: scheme.nuclear_spin2 };
    let (fu, mu) = (level.f().unwrap(), level.mf.unwrap());
    let mut out = Vec::new();
    for manifold in targets {
        let fl = manifold.f().unwrap();
        for ml in -fl..=fl {
            let a = leg.amplitude(fu, mu, fl, ml, mu - ml)?;
            if let Some(idx) = map_target(scheme, SublevelId { manifold, mf: Some(ml) }) {
                push(&mut out, idx, a * a);
            }
        }
    }
    Ok(out)
}

fn ground_slots(scheme: &LevelScheme) -> Vec<(usize, f64)> {
    scheme
        .in_tier(Tier::Ground)
        .map(|(i, l)| {
            let w = if l.is_lumped() { l.manifold.degeneracy(scheme.nuclear_spin2) as f64 } else { 1.0 };
            (i, w)
        })
        .collect()
}

fn table1_channels(scheme: &LevelScheme, table: &BranchingTable, level: SublevelId) -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    if let Some(c) = table.cols().iter().position(|x| *x == level) {
        for (row, v) in table.column(c) {
            if let Some(idx) = map_target(scheme, *row) {
                push(&mut out, idx, v);
            }
        }
    }
    out
}

/// Splits `total_rate` over the legs, each leg spread by its weights.
/// Legs with no surviving targets hand their share to the others.
fn distribute(legs: Vec<(f64, Vec<(usize, f64)>)>, total_rate: f64, what: SublevelId) -> Result<Vec<(usize, f64)>> {
    let live: Vec<_> = legs
        .into_iter()
        .filter(|(share, ch)| *share > 0.0 && ch.iter().map(|c| c.1).sum::<f64>() > 0.0)
        .collect();
    let share_sum: f64 = live.iter().map(|l| l.0).sum();
    if live.is_empty() {
        return Err(Error::NoDecayChannels(what.to_string()));
    }
    let mut out = Vec::new();
    for (share, ch) in live {
        let w: f64 = ch.iter().map(|c| c.1).sum();
        for (idx, v) in ch {
            push(&mut out, idx, total_rate * (share / share_sum) * v / w);
        }
    }
    Ok(out)
}

fn distribution_indexed(
    scheme: &LevelScheme,
    table: &BranchingTable,
    level: SublevelId,
    total_rate: f64,
) -> Result<Vec<(usize, f64)>> {
    let d = &scheme.decay;
    match level.tier() {
        Tier::Intermediate if !level.is_lumped() => {
            let ch = dipole_channels(scheme, level, [Manifold::G2, Manifold::G1])?;
            distribute(vec![(1.0, ch)], total_rate, level)
        }
        Tier::Upper if !level.is_lumped() => {
            let r = d.d1_fraction();
            let d1 = dipole_channels(scheme, level, [Manifold::E1, Manifold::E2])?;
            let cascade = match d.cascade {
                CascadeRoute::None => Vec::new(),
                CascadeRoute::Table1 => table1_channels(scheme, table, level),
                CascadeRoute::Reservoir => scheme
                    .index_of(&SublevelId::lumped(Manifold::R))
                    .map(|i| vec![(i, 1.0)])
                    .unwrap_or_default(),
            };
            distribute(vec![(r, d1), (1.0 - r, cascade)], total_rate, level)
        }
        Tier::Reservoir => distribute(vec![(1.0, ground_slots(scheme))], total_rate, level),
        _ => Err(Error::invalid(format!("{level} is not an excited level"))),
    }
}

/// Partial decay rates out of an excited level. Rates follow the squared
/// dipole amplitudes and sum to `total_rate`; channels into a lumped slot are
/// aggregated, and channels into sublevels absent from the scheme are dropped
/// before normalizing.
pub fn decay_distribution(level: SublevelId, scheme: &LevelScheme, total_rate: f64) -> Result<Vec<(SublevelId, f64)>> {
    scheme.require(&level)?;
    let table = load_table1();
    Ok(distribution_indexed(scheme, &table, level, total_rate)?
        .into_iter()
        .map(|(i, r)| (scheme.level(i), r))
        .collect())
}

/// Rate-equation part of the master equation: each level `k` loses
/// population at `total[k]` and feeds `rate` into `to` for each transfer.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayNetwork {
    /// `(from, to, rate)`; `from == to` is allowed for the ground relaxation.
    pub transfers: Vec<(usize, usize, f64)>,
    /// Total out-rate of each level; coherences ρ_ij damp at (Γ_i + Γ_j)/2.
    pub total: Vec<f64>,
}

impl DecayNetwork {
    pub fn from_scheme(scheme: &LevelScheme) -> Result<Self> {
        Self::with_table(scheme, &load_table1())
    }

    /// As [`from_scheme`](Self::from_scheme) with a caller-supplied cascade table.
    pub fn with_table(scheme: &LevelScheme, table: &BranchingTable) -> Result<Self> {
        let d = &scheme.decay;
        let n = scheme.len();
        let mut transfers = Vec::new();
        let mut total = vec![0.0; n];
        let ground = ground_slots(scheme);
        let weight: f64 = ground.iter().map(|g| g.1).sum();
        for (k, level) in scheme.levels().iter().enumerate() {
            let rate = match level.tier() {
                Tier::Ground => {
                    if d.gamma_g > 0.0 {
                        for &(j, w) in &ground {
                            transfers.push((k, j, d.gamma_g * w / weight));
                        }
                    }
                    total[k] = d.gamma_g;
                    continue;
                }
                Tier::Intermediate => d.gamma_a,
                Tier::Upper => d.gamma_b,
                Tier::Reservoir => d.gamma_r,
            };
            total[k] = rate;
            if rate > 0.0 {
                for (j, r) in distribution_indexed(scheme, table, *level, rate)? {
                    transfers.push((k, j, r));
                }
            }
        }
        let net = DecayNetwork { transfers, total };
        net.check_closure(scheme)?;
        Ok(net)
    }

    /// Every level's outflow must be fully redistributed.
    pub fn check_closure(&self, scheme: &LevelScheme) -> Result<()> {
        let mut inflow = vec![0.0; self.total.len()];
        for &(k, _, r) in &self.transfers {
            inflow[k] += r;
        }
        for (k, (&out, &inn)) in self.total.iter().zip(&inflow).enumerate() {
            if (out - inn).abs() > 1e-12 * out.max(1.0) {
                return Err(Error::OrphanedPopulation {
                    level: scheme.level(k).to_string(),
                    outflow: out,
                    inflow: inn,
                });
            }
        }
        Ok(())
    }

    /// Fastest and slowest nonzero rates.
    pub fn rate_range(&self) -> Option<(f64, f64)> {
        let pos = self.total.iter().copied().filter(|&r| r > 0.0);
        let min = pos.clone().fold(f64::INFINITY, f64::min);
        let max = pos.fold(0.0, f64::max);
        (max > 0.0).then_some((min, max))
    }
}

/// Fraction of a decaying resolved level that goes down its weakest dipole
/// channel, over the complete J=1/2 lower term with hyperfine levels `lower_fs`.
pub fn b_min_sq(leg: DipoleLeg, f_upper: i32, mf_upper: i32, lower_fs: &[i32]) -> Result<f64> {
    let mut min = f64::INFINITY;
    for &fl in lower_fs {
        for ml in -fl..=fl {
            let a = leg.amplitude(f_upper, mf_upper, fl, ml, mf_upper - ml)?;
            if a * a > 1e-12 {
                min = min.min(a * a);
            }
        }
    }
    if min.is_finite() {
        Ok(min)
    } else {
        Err(Error::NoDecayChannels(format!("F={f_upper} mF={mf_upper}")))
    }
}
