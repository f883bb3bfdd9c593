//! Rule interpretations of the circuit puzzle.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::ratio::Ratio;

/// Named rule presets.
///
/// * `Free`: no ants, any start phase, partially eaten rations may be thrown away.
/// * `Ants`: open rations left at nightfall are lost, any start phase.
/// * `Dawn`: ants, walking starts at dawn, nothing may be thrown away.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Preset {
    Free,
    Ants,
    Dawn,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Free, Preset::Ants, Preset::Dawn];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Free => "FREE",
            Preset::Ants => "ANTS",
            Preset::Dawn => "DAWN",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown rule preset `{0}` (valid: FREE, ANTS, DAWN)")]
pub struct UnknownPreset(pub String);

impl FromStr for Preset {
    type Err = UnknownPreset;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownPreset(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("{field} must be strictly positive, got {value}")]
    NonPositive { field: &'static str, value: Ratio },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleSet {
    pub ants_active: bool,
    pub require_dawn_start: bool,
    pub allow_discard: bool,
    pub capacity_ration_days: Ratio,
    pub circuit_miles: Ratio,
    pub daily_miles: Ratio,
}

impl RuleSet {
    pub fn preset(preset: Preset) -> Self {
        let (ants_active, require_dawn_start, allow_discard) = match preset {
            Preset::Free => (false, false, true),
            Preset::Ants => (true, false, true),
            Preset::Dawn => (true, true, false),
        };
        RuleSet {
            ants_active,
            require_dawn_start,
            allow_discard,
            capacity_ration_days: Ratio::from(2),
            circuit_miles: Ratio::from(100),
            daily_miles: Ratio::from(20),
        }
    }

    /// Looks a preset up by name (case-insensitive).
    pub fn by_name(name: &str) -> Result<Self, UnknownPreset> {
        name.parse().map(Self::preset)
    }

    pub fn validate(&self) -> Result<(), RuleError> {
        for (field, value) in [
            ("capacity_ration_days", &self.capacity_ration_days),
            ("circuit_miles", &self.circuit_miles),
            ("daily_miles", &self.daily_miles),
        ] {
            if !value.is_positive() {
                return Err(RuleError::NonPositive { field, value: value.clone() });
            }
        }
        Ok(())
    }

    /// Circuit length in day-units (5 for the default puzzle).
    pub fn circuit_units(&self) -> Ratio {
        &self.circuit_miles / &self.daily_miles
    }
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet::preset(Preset::Free)
    }
}
