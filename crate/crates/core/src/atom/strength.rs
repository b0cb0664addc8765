//! Relative dipole strengths and the transition table.

use super::angular::{clebsch_gordan, wigner_6j};
use super::levels::{LevelScheme, SublevelId, Tier};
use crate::error::{Error, Result};

/// A fine-structure dipole leg `J_upper -> J_lower` in an atom with nuclear
/// spin `I`. All values doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DipoleLeg {
    pub j_upper2: i64,
    pub j_lower2: i64,
    pub nuclear_spin2: i64,
}

impl DipoleLeg {
    /// ns1/2 <-> n'p1/2 style leg of an I = 3/2 atom (both D1 and the
    /// 5P1/2 - 6S1/2 signal leg).
    pub const RB87_HALF_HALF: DipoleLeg = DipoleLeg { j_upper2: 1, j_lower2: 1, nuclear_spin2: 3 };

    /// Signed amplitude of `|F_u m_u> -> |F_l m_l>` with polarization
    /// `q = m_u - m_l`. Its square is the spontaneous-emission branching
    /// fraction, so squares summed over all lower sublevels equal one.
    ///
    /// The sign follows the Wigner-Eckart decomposition, which keeps relative
    /// phases between hyperfine paths physical.
    pub fn amplitude(&self, f_upper: i32, mf_upper: i32, f_lower: i32, mf_lower: i32, q: i32) -> Result<f64> {
        for (f, m) in [(f_upper, mf_upper), (f_lower, mf_lower)] {
            if f < 0 || m.abs() > f {
                return Err(Error::InvalidQuantumNumbers(format!("F={f}, mF={m}")));
            }
        }
        if q.abs() > 1 || q != mf_upper - mf_lower {
            return Ok(0.0);
        }
        let (fu2, fl2) = (2 * f_upper as i64, 2 * f_lower as i64);
        let six_j = wigner_6j(self.j_upper2, self.j_lower2, 2, fl2, fu2, self.nuclear_spin2);
        let cg = clebsch_gordan(fl2, 2 * mf_lower as i64, 2, 2 * q as i64, fu2, 2 * mf_upper as i64);
        let parity = (fl2 + self.j_upper2 + 2 + self.nuclear_spin2) / 2;
        let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
        Ok(sign * (((fl2 + 1) * (self.j_upper2 + 1)) as f64).sqrt() * six_j * cg)
    }
}

/// Relative dipole amplitude on the J = 1/2 <-> J = 1/2 legs of 87Rb.
pub fn relative_strength(f_upper: i32, mf_upper: i32, f_lower: i32, mf_lower: i32, q: i32) -> Result<f64> {
    DipoleLeg::RB87_HALF_HALF.amplitude(f_upper, mf_upper, f_lower, mf_lower, q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldRole {
    Pump,
    Signal,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transition {
    pub upper: SublevelId,
    pub lower: SublevelId,
    /// Scheme indices of `upper` and `lower`.
    pub upper_index: usize,
    pub lower_index: usize,
    /// -1 (σ-), 0 (π), +1 (σ+)
    pub q: i32,
    /// Signed amplitude in multiples of the weakest transition of the same field.
    pub strength: f64,
    pub field: FieldRole,
}

/// Field-coupled dipole transitions between resolved levels.
#[derive(Clone, Debug, Default)]
pub struct TransitionTable {
    entries: Vec<Transition>,
}

impl TransitionTable {
    /// Every dipole-allowed transition between resolved levels of adjacent
    /// tiers: ground <-> intermediate is driven by the pump, intermediate <->
    /// upper by the signal. Strengths are normalized per field so that the
    /// weakest nonzero transition has magnitude 1.
    pub fn from_scheme(scheme: &LevelScheme) -> Result<Self> {
        let leg = DipoleLeg {
            j_upper2: 1,
            j_lower2: 1,
            nuclear_spin2: scheme.nuclear_spin2,
        };
        let mut entries = Vec::new();
        for (upper_tier, lower_tier, field) in [
            (Tier::Intermediate, Tier::Ground, FieldRole::Pump),
            (Tier::Upper, Tier::Intermediate, FieldRole::Signal),
        ] {
            for (ui, u) in scheme.in_tier(upper_tier).filter(|(_, l)| !l.is_lumped()) {
                for (li, l) in scheme.in_tier(lower_tier).filter(|(_, l)| !l.is_lumped()) {
                    let (mu, ml) = (u.mf.unwrap(), l.mf.unwrap());
                    let q = mu - ml;
                    let a = leg.amplitude(u.f().unwrap(), mu, l.f().unwrap(), ml, q)?;
                    if a.abs() > 1e-12 {
                        entries.push(Transition {
                            upper: u,
                            lower: l,
                            upper_index: ui,
                            lower_index: li,
                            q,
                            strength: a,
                            field,
                        });
                    }
                }
            }
        }
        let mut table = TransitionTable { entries };
        table.normalize();
        Ok(table)
    }

    /// Builds a table from explicit entries, checked against `scheme`.
    pub fn from_entries(scheme: &LevelScheme, entries: Vec<Transition>) -> Result<Self> {
        let table = TransitionTable { entries };
        table.validate(scheme)?;
        Ok(table)
    }

    fn normalize(&mut self) {
        for field in [FieldRole::Pump, FieldRole::Signal] {
            let weakest = self
                .entries
                .iter()
                .filter(|t| t.field == field)
                .map(|t| t.strength.abs())
                .fold(f64::INFINITY, f64::min);
            if weakest.is_finite() {
                for t in self.entries.iter_mut().filter(|t| t.field == field) {
                    t.strength /= weakest;
                }
            }
        }
    }

    /// Checks that every entry references a level of `scheme` at the stated
    /// index and obeys the selection rule.
    pub fn validate(&self, scheme: &LevelScheme) -> Result<()> {
        for t in &self.entries {
            for (id, idx) in [(t.upper, t.upper_index), (t.lower, t.lower_index)] {
                if scheme.index_of(&id) != Some(idx) {
                    return Err(Error::UnknownLevel(format!("{id} at index {idx}")));
                }
            }
            if let (Some(mu), Some(ml)) = (t.upper.mf, t.lower.mf) {
                if t.q != mu - ml {
                    return Err(Error::invalid(format!(
                        "transition {} -> {} labelled q={} but ΔmF={}",
                        t.upper,
                        t.lower,
                        t.q,
                        mu - ml
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn entries(&self) -> &[Transition] {
        &self.entries
    }

    pub fn for_field(&self, field: FieldRole) -> impl Iterator<Item = &Transition> {
        self.entries.iter().filter(move |t| t.field == field)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::levels::{DecayParams, Manifold};

    const SQRT3: f64 = 1.7320508075688772;

    #[test]
    fn f2_mf0_decay_amplitude_ratios() {
        // F'=2, mF=0 to F=2: σ+ : σ- : π = √3 : √3 : 0 in units of the weakest line.
        let unit = relative_strength(1, 1, 2, 0, 1).unwrap().abs();
        let sp = relative_strength(2, 0, 2, -1, 1).unwrap().abs() / unit;
        let sm = relative_strength(2, 0, 2, 1, -1).unwrap().abs() / unit;
        let pi = relative_strength(2, 0, 2, 0, 0).unwrap().abs() / unit;
        assert!((sp - SQRT3).abs() < 1e-12);
        assert!((sm - SQRT3).abs() < 1e-12);
        assert!(pi.abs() < 1e-12);
        // ... and to F=1: 1 : 1 : 2
        let sp = relative_strength(2, 0, 1, -1, 1).unwrap().abs() / unit;
        let sm = relative_strength(2, 0, 1, 1, -1).unwrap().abs() / unit;
        let pi = relative_strength(2, 0, 1, 0, 0).unwrap().abs() / unit;
        assert!((sp - 1.0).abs() < 1e-12 && (sm - 1.0).abs() < 1e-12);
        assert!((pi - 2.0).abs() < 1e-12);
    }

    #[test]
    fn selection_rule_and_bad_input() {
        assert_eq!(relative_strength(1, 1, 2, 0, 0).unwrap(), 0.0);
        assert_eq!(relative_strength(1, 1, 2, -1, 2).unwrap(), 0.0);
        assert!(relative_strength(1, 2, 2, 0, 1).is_err());
        assert!(relative_strength(2, 0, 1, 3, 1).is_err());
    }

    #[test]
    fn full_scheme_table_is_normalized() {
        let s = LevelScheme::rb87_full(DecayParams::default()).unwrap();
        let t = TransitionTable::from_scheme(&s).unwrap();
        t.validate(&s).unwrap();
        for field in [FieldRole::Pump, FieldRole::Signal] {
            let min = t.for_field(field).map(|e| e.strength.abs()).fold(f64::INFINITY, f64::min);
            assert!((min - 1.0).abs() < 1e-12);
        }
        // The weakest pump line is F=2 mF=0 -> F'=1 mF=1.
        let weakest = t
            .for_field(FieldRole::Pump)
            .find(|e| e.upper.manifold == Manifold::E1 && e.upper.mf == Some(1) && e.lower.mf == Some(0))
            .unwrap();
        assert!((weakest.strength.abs() - 1.0).abs() < 1e-12);
    }
}
