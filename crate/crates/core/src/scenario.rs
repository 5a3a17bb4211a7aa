//! Routed Bell scenario: input/output cardinalities for Alice and Bob's two
//! measurement locations, plus the optional no-click outcome.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which path the switch selects for Bob's particle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Path {
    /// Near device, `z = S`.
    Short,
    /// Far device, `z = L`.
    Long,
}

impl std::fmt::Display for Path {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Path::Short => write!(f, "S"),
            Path::Long => write!(f, "L"),
        }
    }
}

/// One of Bob's measurement settings: a local input `y` at a path `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BobSetting {
    pub y: usize,
    pub path: Path,
}

/// Cardinalities of a routed Bell experiment.
///
/// `m_bs = 0` describes a standard Bell test without the switch. The switch
/// label `z = S` is valid only when `m_bs > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutedScenario {
    /// Alice's number of settings.
    pub m_a: usize,
    /// Alice's number of (click) outcomes.
    pub d_a: usize,
    /// Short-path settings (0 for a standard Bell test).
    pub m_bs: usize,
    /// Short-path outcomes.
    pub d_bs: usize,
    /// Long-path settings.
    pub m_bl: usize,
    /// Long-path outcomes.
    pub d_bl: usize,
    /// Whether the outcome alphabet includes the no-click outcome.
    pub has_noclick: bool,
}

impl RoutedScenario {
    pub fn new(
        m_a: usize,
        d_a: usize,
        m_bs: usize,
        d_bs: usize,
        m_bl: usize,
        d_bl: usize,
        has_noclick: bool,
    ) -> Result<Self> {
        if m_a < 1 || d_a < 1 || d_bs < 1 || m_bl < 1 || d_bl < 1 {
            return Err(Error::Domain(
                "all cardinalities must be >= 1 (m_bs may be 0)".into(),
            ));
        }
        Ok(Self { m_a, d_a, m_bs, d_bs, m_bl, d_bl, has_noclick })
    }

    /// The routed CHSH scenario: binary inputs and outputs everywhere.
    pub fn routed_chsh() -> Self {
        Self { m_a: 2, d_a: 2, m_bs: 2, d_bs: 2, m_bl: 2, d_bl: 2, has_noclick: false }
    }

    /// A standard CHSH test: no switch, no short-path device.
    pub fn standard_chsh() -> Self {
        Self { m_a: 2, d_a: 2, m_bs: 0, d_bs: 2, m_bl: 2, d_bl: 2, has_noclick: false }
    }

    pub fn with_noclick(mut self, has_noclick: bool) -> Self {
        self.has_noclick = has_noclick;
        self
    }

    /// Total number of Bob settings, short-path block first.
    pub fn n_settings(&self) -> usize {
        self.m_bs + self.m_bl
    }

    /// Flat index of a Bob setting: short-path block `0..m_bs`, then long.
    pub fn setting_index(&self, s: BobSetting) -> Result<usize> {
        match s.path {
            Path::Short => {
                if s.y >= self.m_bs {
                    return Err(Error::Domain(format!(
                        "setting y={} out of range for short path (m_bs={})",
                        s.y, self.m_bs
                    )));
                }
                Ok(s.y)
            }
            Path::Long => {
                if s.y >= self.m_bl {
                    return Err(Error::Domain(format!(
                        "setting y={} out of range for long path (m_bl={})",
                        s.y, self.m_bl
                    )));
                }
                Ok(self.m_bs + s.y)
            }
        }
    }

    /// All Bob settings in flat order.
    pub fn settings(&self) -> Vec<BobSetting> {
        let mut out = Vec::with_capacity(self.n_settings());
        for y in 0..self.m_bs {
            out.push(BobSetting { y, path: Path::Short });
        }
        for y in 0..self.m_bl {
            out.push(BobSetting { y, path: Path::Long });
        }
        out
    }

    pub fn setting_at(&self, index: usize) -> BobSetting {
        if index < self.m_bs {
            BobSetting { y: index, path: Path::Short }
        } else {
            BobSetting { y: index - self.m_bs, path: Path::Long }
        }
    }

    /// Click outcomes of Bob's device at a given path.
    pub fn d_b(&self, path: Path) -> usize {
        match path {
            Path::Short => self.d_bs,
            Path::Long => self.d_bl,
        }
    }

    /// Number of stored outcomes on Alice's side (clicks plus optional no-click).
    pub fn n_a(&self) -> usize {
        self.d_a + usize::from(self.has_noclick)
    }

    /// Number of stored outcomes for Bob's device at `path`.
    pub fn n_b(&self, path: Path) -> usize {
        self.d_b(path) + usize::from(self.has_noclick)
    }

    /// Width of the rectangular outcome axis for Bob (max over paths).
    pub fn n_b_max(&self) -> usize {
        self.d_bs.max(self.d_bl) + usize::from(self.has_noclick)
    }

    /// The no-click index on Alice's side, if present.
    pub fn noclick_a(&self) -> Option<usize> {
        self.has_noclick.then_some(self.d_a)
    }

    /// The no-click index for Bob's device at `path`, if present.
    pub fn noclick_b(&self, path: Path) -> Option<usize> {
        self.has_noclick.then_some(self.d_b(path))
    }

    /// Same cardinalities, ignoring the no-click flag.
    pub fn same_cardinalities(&self, other: &Self) -> bool {
        self.m_a == other.m_a
            && self.d_a == other.d_a
            && self.m_bs == other.m_bs
            && self.d_bs == other.d_bs
            && self.m_bl == other.m_bl
            && self.d_bl == other.d_bl
    }
}

/// Numeric value an outcome label contributes to first-moment correlators.
///
/// Binary outcomes are read as `0 -> +1`, `1 -> -1`; the no-click label
/// contributes 0. Only defined for `d = 2` devices.
pub fn outcome_value(label: usize, d: usize, has_noclick: bool) -> Result<f64> {
    if d != 2 {
        return Err(Error::UnsupportedQuery(
            "correlator semantics are defined for binary (+ optional no-click) outcomes".into(),
        ));
    }
    match label {
        0 => Ok(1.0),
        1 => Ok(-1.0),
        2 if has_noclick => Ok(0.0),
        _ => Err(Error::Domain(format!("outcome label {label} out of range"))),
    }
}

/// Click indicator of an outcome label (squared-observable value).
pub fn outcome_click(label: usize, d: usize, has_noclick: bool) -> Result<f64> {
    if d != 2 {
        return Err(Error::UnsupportedQuery(
            "correlator semantics are defined for binary (+ optional no-click) outcomes".into(),
        ));
    }
    match label {
        0 | 1 => Ok(1.0),
        2 if has_noclick => Ok(0.0),
        _ => Err(Error::Domain(format!("outcome label {label} out of range"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn setting_indices_are_short_block_then_long() {
        let sc = RoutedScenario::routed_chsh();
        assert_eq!(sc.setting_index(BobSetting { y: 0, path: Path::Short }).unwrap(), 0);
        assert_eq!(sc.setting_index(BobSetting { y: 1, path: Path::Short }).unwrap(), 1);
        assert_eq!(sc.setting_index(BobSetting { y: 0, path: Path::Long }).unwrap(), 2);
        assert_eq!(sc.setting_index(BobSetting { y: 1, path: Path::Long }).unwrap(), 3);
        assert_eq!(sc.settings().len(), 4);
    }

    #[test]
    fn standard_scenario_has_no_short_settings() {
        let sc = RoutedScenario::standard_chsh();
        assert_eq!(sc.n_settings(), 2);
        assert!(sc.setting_index(BobSetting { y: 0, path: Path::Short }).is_err());
        assert_eq!(sc.setting_at(0), BobSetting { y: 0, path: Path::Long });
    }

    #[test]
    fn outcome_values() {
        assert_eq!(outcome_value(0, 2, false).unwrap(), 1.0);
        assert_eq!(outcome_value(1, 2, false).unwrap(), -1.0);
        assert_eq!(outcome_value(2, 2, true).unwrap(), 0.0);
        assert!(outcome_value(2, 2, false).is_err());
        assert_eq!(outcome_click(2, 2, true).unwrap(), 0.0);
        assert_eq!(outcome_click(0, 2, true).unwrap(), 1.0);
    }

    #[test]
    fn rejects_zero_cardinalities() {
        assert!(RoutedScenario::new(0, 2, 2, 2, 2, 2, false).is_err());
        assert!(RoutedScenario::new(2, 2, 0, 2, 2, 2, false).is_ok());
    }
}
