use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which rung of the ladder a manifold sits on. Determines the rotating-frame
/// energy and which field couples it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tier {
    /// 5S1/2
    Ground,
    /// 5P1/2, reached by the pump
    Intermediate,
    /// 6S1/2, reached by the signal
    Upper,
    /// 5P3/2 population reservoir on the 6S -> 5P3/2 -> 5S cascade
    Reservoir,
}

/// Hyperfine manifolds of the 87Rb 5S1/2 - 5P1/2 - 6S1/2 ladder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Manifold {
    /// 5S1/2 F=2
    G2,
    /// 5S1/2 F=1
    G1,
    /// 5P1/2 F'=1
    E1,
    /// 5P1/2 F'=2
    E2,
    /// 6S1/2 F''=1
    U1,
    /// 6S1/2 F''=2
    U2,
    /// 5P3/2, all hyperfine levels
    R,
}

impl Manifold {
    pub fn tier(self) -> Tier {
        match self {
            Manifold::G2 | Manifold::G1 => Tier::Ground,
            Manifold::E1 | Manifold::E2 => Tier::Intermediate,
            Manifold::U1 | Manifold::U2 => Tier::Upper,
            Manifold::R => Tier::Reservoir,
        }
    }

    /// Total angular momentum F. `None` for the 5P3/2 reservoir, which spans
    /// several hyperfine levels.
    pub fn f(self) -> Option<i32> {
        match self {
            Manifold::G2 | Manifold::E2 | Manifold::U2 => Some(2),
            Manifold::G1 | Manifold::E1 | Manifold::U1 => Some(1),
            Manifold::R => None,
        }
    }

    /// Twice the electronic angular momentum J.
    pub fn j2(self) -> i64 {
        match self {
            Manifold::R => 3,
            _ => 1,
        }
    }

    /// Number of magnetic sublevels aggregated by a lumped slot of this manifold.
    pub fn degeneracy(self, nuclear_spin2: i64) -> usize {
        match self.f() {
            Some(f) => (2 * f + 1) as usize,
            // (2J+1)(2I+1)
            None => ((self.j2() + 1) * (nuclear_spin2 + 1)) as usize,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Manifold::G2 => "G2",
            Manifold::G1 => "G1",
            Manifold::E1 => "E1",
            Manifold::E2 => "E2",
            Manifold::U1 => "U1",
            Manifold::U2 => "U2",
            Manifold::R => "R",
        }
    }
}

/// One state of the model: either a resolved Zeeman sublevel or a lumped
/// reservoir slot (`mf == None`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SublevelId {
    pub manifold: Manifold,
    pub mf: Option<i32>,
}

impl SublevelId {
    pub fn resolved(manifold: Manifold, mf: i32) -> Result<Self> {
        let f = manifold.f().ok_or_else(|| {
            Error::InvalidQuantumNumbers(format!("{} has no resolved sublevels", manifold.label()))
        })?;
        if mf.abs() > f {
            return Err(Error::InvalidQuantumNumbers(format!(
                "|mF| = {} exceeds F = {f} for {}",
                mf.abs(),
                manifold.label()
            )));
        }
        Ok(SublevelId { manifold, mf: Some(mf) })
    }

    pub fn lumped(manifold: Manifold) -> Self {
        SublevelId { manifold, mf: None }
    }

    pub fn is_lumped(&self) -> bool {
        self.mf.is_none()
    }

    pub fn f(&self) -> Option<i32> {
        self.manifold.f()
    }

    pub fn tier(&self) -> Tier {
        self.manifold.tier()
    }
}

impl fmt::Display for SublevelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mf {
            Some(m) => write!(f, "{}(mF={m:+})", self.manifold.label()),
            None => write!(f, "{}(lumped)", self.manifold.label()),
        }
    }
}

impl std::str::FromStr for SublevelId {
    type Err = Error;

    /// Parses the `Display` form, e.g. `G2(mF=-2)` or `G1(lumped)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownLevel(s.to_string());
        let (label, rest) = s.trim().split_once('(').ok_or_else(bad)?;
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let manifold = [Manifold::G2, Manifold::G1, Manifold::E1, Manifold::E2, Manifold::U1, Manifold::U2, Manifold::R]
            .into_iter()
            .find(|m| m.label() == label)
            .ok_or_else(bad)?;
        if inner == "lumped" {
            return Ok(SublevelId::lumped(manifold));
        }
        let m = inner.strip_prefix("mF=").and_then(|v| v.parse::<i32>().ok()).ok_or_else(bad)?;
        SublevelId::resolved(manifold, m)
    }
}

/// What happens to the 6S1/2 -> 5P3/2 share of the upper-level decay.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CascadeRoute {
    /// Straight to the ground slots using the embedded effective-branching table.
    Table1,
    /// Into a lumped 5P3/2 slot, which drains isotropically into the ground.
    Reservoir,
    /// Ignored: the whole upper decay goes down the 5P1/2 leg.
    None,
}

/// Decay parameters in units of Γ_a.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayParams {
    /// Decay rate of every 5P1/2 sublevel.
    pub gamma_a: f64,
    /// Decay rate of every 6S1/2 sublevel.
    pub gamma_b: f64,
    /// Ground-state cross-relaxation rate.
    pub gamma_g: f64,
    /// Ratio of 6S decay into 5P1/2 over 5P3/2.
    pub d1_d2_ratio: f64,
    pub cascade: CascadeRoute,
    /// Decay rate of the lumped 5P3/2 reservoir.
    pub gamma_r: f64,
}

impl DecayParams {
    /// D1:D2 line-strength ratio of an alkali ns1/2 level (1:2).
    pub const DEFAULT_D1_D2_RATIO: f64 = 0.5;

    /// Fraction of the upper-level decay that goes into 5P1/2.
    pub fn d1_fraction(&self) -> f64 {
        match self.cascade {
            CascadeRoute::None => 1.0,
            _ => self.d1_d2_ratio / (1.0 + self.d1_d2_ratio),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gamma_a", self.gamma_a),
            ("gamma_b", self.gamma_b),
            ("gamma_g", self.gamma_g),
            ("d1_d2_ratio", self.d1_d2_ratio),
            ("gamma_r", self.gamma_r),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }

    /// Whether the rates sit in the usual γ_g ≪ γ_b < γ_a ordering.
    pub fn in_nominal_regime(&self) -> bool {
        self.gamma_g < 0.1 * self.gamma_b && self.gamma_b < self.gamma_a
    }
}

impl Default for DecayParams {
    fn default() -> Self {
        DecayParams {
            gamma_a: 1.0,
            gamma_b: 3.45 / 5.75,
            gamma_g: 0.01 / 5.75,
            d1_d2_ratio: Self::DEFAULT_D1_D2_RATIO,
            cascade: CascadeRoute::Table1,
            gamma_r: 6.07 / 5.75,
        }
    }
}

/// Ordered state space plus energies and decay parameters.
#[derive(Clone, Debug)]
pub struct LevelScheme {
    levels: Vec<SublevelId>,
    index: HashMap<SublevelId, usize>,
    energy_offsets: Vec<f64>,
    /// F'=2 above F'=1, units of Γ_a.
    pub intermediate_splitting: f64,
    /// F''=2 above F''=1, units of Γ_a.
    pub upper_splitting: f64,
    pub nuclear_spin2: i64,
    pub decay: DecayParams,
}

impl LevelScheme {
    /// 87Rb 5P1/2 F'=1 to F'=2 splitting in units of Γ_a.
    pub const RB87_INTERMEDIATE_SPLITTING: f64 = 141.4;
    /// 87Rb 6S1/2 hyperfine splitting (1615.3 MHz) in units of Γ_a.
    pub const RB87_UPPER_SPLITTING: f64 = 1615.3 / 5.75;

    pub fn new(
        levels: Vec<SublevelId>,
        intermediate_splitting: f64,
        upper_splitting: f64,
        nuclear_spin2: i64,
        decay: DecayParams,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::invalid("level scheme is empty"));
        }
        if !(intermediate_splitting > 0.0) {
            return Err(Error::invalid(format!(
                "F' splitting must be positive, got {intermediate_splitting}"
            )));
        }
        if nuclear_spin2 < 0 {
            return Err(Error::invalid("nuclear spin must be >= 0"));
        }
        decay.validate()?;

        let mut index = HashMap::with_capacity(levels.len());
        for (i, id) in levels.iter().enumerate() {
            if let Some(m) = id.mf {
                SublevelId::resolved(id.manifold, m)?;
            } else if id.manifold.tier() != Tier::Ground && id.manifold.tier() != Tier::Reservoir {
                return Err(Error::invalid(format!(
                    "{} cannot be lumped: only ground and reservoir manifolds are population slots",
                    id.manifold.label()
                )));
            }
            if id.manifold == Manifold::R && id.mf.is_some() {
                return Err(Error::invalid("the 5P3/2 reservoir has no resolved sublevels"));
            }
            if index.insert(*id, i).is_some() {
                return Err(Error::invalid(format!("duplicate level {id}")));
            }
        }
        // A manifold is either fully lumped or (partly) resolved, never both.
        for id in &levels {
            if id.is_lumped() && levels.iter().any(|o| o.manifold == id.manifold && !o.is_lumped()) {
                return Err(Error::invalid(format!(
                    "{} appears both lumped and resolved",
                    id.manifold.label()
                )));
            }
        }
        let has_reservoir = levels.iter().any(|l| l.manifold == Manifold::R);
        match (decay.cascade, has_reservoir) {
            (CascadeRoute::Reservoir, false) => {
                return Err(Error::invalid("reservoir cascade requires an R level in the scheme"))
            }
            (CascadeRoute::Table1 | CascadeRoute::None, true) => {
                return Err(Error::invalid(
                    "R level present but the cascade route does not use it",
                ))
            }
            _ => {}
        }

        let energy_offsets = levels
            .iter()
            .map(|l| match l.manifold {
                Manifold::E2 => intermediate_splitting,
                Manifold::U2 => upper_splitting,
                _ => 0.0,
            })
            .collect();

        Ok(LevelScheme {
            levels,
            index,
            energy_offsets,
            intermediate_splitting,
            upper_splitting,
            nuclear_spin2,
            decay,
        })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[SublevelId] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> SublevelId {
        self.levels[i]
    }

    pub fn index_of(&self, id: &SublevelId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn require(&self, id: &SublevelId) -> Result<usize> {
        self.index_of(id).ok_or_else(|| Error::UnknownLevel(id.to_string()))
    }

    /// Energy offset of level `i` within its tier, units of Γ_a.
    pub fn energy_offset(&self, i: usize) -> f64 {
        self.energy_offsets[i]
    }

    pub fn energy_offsets(&self) -> &[f64] {
        &self.energy_offsets
    }

    pub fn in_tier(&self, tier: Tier) -> impl Iterator<Item = (usize, SublevelId)> + '_ {
        self.levels
            .iter()
            .copied()
            .enumerate()
            .filter(move |(_, l)| l.tier() == tier)
    }

    pub fn has_manifold(&self, m: Manifold) -> bool {
        self.levels.iter().any(|l| l.manifold == m)
    }

    /// Every resolved sublevel of the given manifolds, in mF order.
    pub fn full_manifold(manifold: Manifold) -> Vec<SublevelId> {
        let f = manifold.f().unwrap_or(0);
        (-f..=f)
            .map(|m| SublevelId { manifold, mf: Some(m) })
            .collect()
    }

    /// The 16 resolved sublevels of F=2, F'=1,2, F''=1 plus lumped F=1, with
    /// the effective-branching cascade.
    pub fn rb87_full(decay: DecayParams) -> Result<Self> {
        let mut levels = Self::full_manifold(Manifold::G2);
        levels.push(SublevelId::lumped(Manifold::G1));
        levels.extend(Self::full_manifold(Manifold::E1));
        levels.extend(Self::full_manifold(Manifold::E2));
        levels.extend(Self::full_manifold(Manifold::U1));
        LevelScheme::new(
            levels,
            Self::RB87_INTERMEDIATE_SPLITTING,
            Self::RB87_UPPER_SPLITTING,
            3,
            decay,
        )
    }

    /// [`rb87_full`](Self::rb87_full) plus a lumped 5P3/2 slot fed by the
    /// upper-level cascade.
    pub fn rb87_with_reservoir(decay: DecayParams) -> Result<Self> {
        let decay = DecayParams { cascade: CascadeRoute::Reservoir, ..decay };
        let mut levels = Self::rb87_full(DecayParams { cascade: CascadeRoute::None, ..decay })?.levels;
        levels.push(SublevelId::lumped(Manifold::R));
        LevelScheme::new(
            levels,
            Self::RB87_INTERMEDIATE_SPLITTING,
            Self::RB87_UPPER_SPLITTING,
            3,
            decay,
        )
    }

    /// 15 levels: F=2 restricted to mF = -1..1, lumped F=1, all of 5P1/2 and F''=1.
    pub fn rb87_reduced(decay: DecayParams) -> Result<Self> {
        let mut levels: Vec<_> = (-1..=1).map(|m| SublevelId { manifold: Manifold::G2, mf: Some(m) }).collect();
        levels.push(SublevelId::lumped(Manifold::G1));
        levels.extend(Self::full_manifold(Manifold::E1));
        levels.extend(Self::full_manifold(Manifold::E2));
        levels.extend(Self::full_manifold(Manifold::U1));
        LevelScheme::new(
            levels,
            Self::RB87_INTERMEDIATE_SPLITTING,
            Self::RB87_UPPER_SPLITTING,
            3,
            decay,
        )
    }

    /// Idealized four-level ladder: F=2 mF=0, F'=1 mF=±1, F''=1 mF=0.
    /// No cascade, so the upper level decays only through the two middle levels.
    pub fn four_level(decay: DecayParams) -> Result<Self> {
        let decay = DecayParams { cascade: CascadeRoute::None, ..decay };
        let levels = vec![
            SublevelId { manifold: Manifold::G2, mf: Some(0) },
            SublevelId { manifold: Manifold::E1, mf: Some(1) },
            SublevelId { manifold: Manifold::E1, mf: Some(-1) },
            SublevelId { manifold: Manifold::U1, mf: Some(0) },
        ];
        LevelScheme::new(
            levels,
            Self::RB87_INTERMEDIATE_SPLITTING,
            Self::RB87_UPPER_SPLITTING,
            3,
            decay,
        )
    }

    /// F=2 mF=0 and F'=1 mF=+1: a closed two-level atom for a σ+ field,
    /// decaying at `decay.gamma_a`.
    pub fn two_level(decay: DecayParams) -> Result<Self> {
        let decay = DecayParams { cascade: CascadeRoute::None, ..decay };
        let levels = vec![
            SublevelId { manifold: Manifold::G2, mf: Some(0) },
            SublevelId { manifold: Manifold::E1, mf: Some(1) },
        ];
        LevelScheme::new(
            levels,
            Self::RB87_INTERMEDIATE_SPLITTING,
            Self::RB87_UPPER_SPLITTING,
            3,
            decay,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_scheme_index_is_bijective() {
        let s = LevelScheme::rb87_full(DecayParams::default()).unwrap();
        assert_eq!(s.len(), 17);
        for (i, l) in s.levels().iter().enumerate() {
            assert_eq!(s.index_of(l), Some(i));
        }
        assert_eq!(s.intermediate_splitting, 141.4);
        assert_eq!(LevelScheme::rb87_reduced(DecayParams::default()).unwrap().len(), 15);
        let r = LevelScheme::rb87_with_reservoir(DecayParams::default()).unwrap();
        assert_eq!(r.len(), 18);
        assert_eq!(r.levels().iter().filter(|l| l.is_lumped()).count(), 2);
    }

    #[test]
    fn rejects_bad_sublevels() {
        assert!(SublevelId::resolved(Manifold::E1, 2).is_err());
        assert!(SublevelId::resolved(Manifold::R, 0).is_err());
        let dup = vec![
            SublevelId::resolved(Manifold::G2, 0).unwrap(),
            SublevelId::resolved(Manifold::G2, 0).unwrap(),
        ];
        let d = DecayParams { cascade: CascadeRoute::None, ..Default::default() };
        assert!(LevelScheme::new(dup, 141.4, 281.0, 3, d).is_err());
    }

    #[test]
    fn rejects_lumped_excited_levels() {
        let d = DecayParams { cascade: CascadeRoute::None, ..Default::default() };
        let lv = vec![SublevelId::resolved(Manifold::G2, 0).unwrap(), SublevelId::lumped(Manifold::E1)];
        assert!(LevelScheme::new(lv, 141.4, 281.0, 3, d).is_err());
    }

    #[test]
    fn reservoir_route_needs_reservoir_level() {
        let d = DecayParams { cascade: CascadeRoute::Reservoir, ..Default::default() };
        let lv = LevelScheme::full_manifold(Manifold::G2);
        assert!(LevelScheme::new(lv, 141.4, 281.0, 3, d).is_err());
    }

    #[test]
    fn nominal_regime_flag() {
        assert!(DecayParams::default().in_nominal_regime());
        let odd = DecayParams { gamma_b: 2.0, ..Default::default() };
        assert!(!odd.in_nominal_regime());
    }
}
