//! Correlation tables `p(a,b|x,y,z)` with normalization and no-signalling
//! validation, plus the no-click binning map.
//!
//! Entries are stored in a flat rectangular array in row-major order over
//! `(a, b, x, yz)` where `yz` runs over Bob's settings with the short-path
//! block first (`(0,S), .., (m_bs-1,S), (0,L), .., (m_bl-1,L)`). When the
//! short- and long-path devices have different outcome counts, the `b` axis
//! is sized by the larger device and out-of-range entries must be zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::{BobSetting, Path, RoutedScenario};

/// Default tolerance for probability validity checks.
pub const PROB_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTable {
    scenario: RoutedScenario,
    entries: Vec<f64>,
}

impl CorrelationTable {
    /// Validates and wraps a flat probability array (see module docs for the
    /// layout). Uses the default tolerance [`PROB_TOL`].
    pub fn new(scenario: RoutedScenario, entries: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(scenario, entries, PROB_TOL)
    }

    pub fn with_tolerance(scenario: RoutedScenario, entries: Vec<f64>, tol: f64) -> Result<Self> {
        let expected = scenario.n_a() * scenario.n_b_max() * scenario.m_a * scenario.n_settings();
        if entries.len() != expected {
            return Err(Error::InvalidInput(format!(
                "expected {expected} entries, got {}",
                entries.len()
            )));
        }
        let table = Self { scenario, entries };
        table.validate(tol)?;
        Ok(table)
    }

    /// Builds a table by evaluating `f(a, b, x, setting)` on every cell.
    pub fn from_fn<F>(scenario: RoutedScenario, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize, usize, BobSetting) -> f64,
    {
        let (na, nb) = (scenario.n_a(), scenario.n_b_max());
        let mut entries = vec![0.0; na * nb * scenario.m_a * scenario.n_settings()];
        for a in 0..na {
            for b in 0..nb {
                for x in 0..scenario.m_a {
                    for (s_idx, s) in scenario.settings().iter().enumerate() {
                        if b < scenario.n_b(s.path) {
                            entries[Self::index_of(&scenario, a, b, x, s_idx)] = f(a, b, x, *s);
                        }
                    }
                }
            }
        }
        Self::new(scenario, entries)
    }

    /// The uniformly random table (all correlators vanish).
    pub fn uniform(scenario: RoutedScenario) -> Self {
        Self::from_fn(scenario, |_, _, _, s| {
            1.0 / (scenario.n_a() * scenario.n_b(s.path)) as f64
        })
        .expect("uniform table is valid")
    }

    /// A local deterministic table: Alice outputs `fa(x)`, Bob outputs
    /// `fb(setting)`.
    pub fn deterministic<FA, FB>(scenario: RoutedScenario, mut fa: FA, mut fb: FB) -> Result<Self>
    where
        FA: FnMut(usize) -> usize,
        FB: FnMut(BobSetting) -> usize,
    {
        Self::from_fn(scenario, |a, b, x, s| {
            if a == fa(x) && b == fb(s) {
                1.0
            } else {
                0.0
            }
        })
    }

    fn index_of(sc: &RoutedScenario, a: usize, b: usize, x: usize, s_idx: usize) -> usize {
        ((a * sc.n_b_max() + b) * sc.m_a + x) * sc.n_settings() + s_idx
    }

    pub fn scenario(&self) -> &RoutedScenario {
        &self.scenario
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// `p(a, b | x, setting)`.
    pub fn prob(&self, a: usize, b: usize, x: usize, s: BobSetting) -> f64 {
        let s_idx = self.scenario.setting_index(s).expect("setting in range");
        self.entries[Self::index_of(&self.scenario, a, b, x, s_idx)]
    }

    fn prob_at(&self, a: usize, b: usize, x: usize, s_idx: usize) -> f64 {
        self.entries[Self::index_of(&self.scenario, a, b, x, s_idx)]
    }

    /// Alice's marginal `p(a|x)`, computed from the first Bob setting.
    pub fn marginal_a(&self, a: usize, x: usize) -> f64 {
        let s = self.scenario.setting_at(0);
        (0..self.scenario.n_b(s.path)).map(|b| self.prob_at(a, b, x, 0)).sum()
    }

    /// Bob's marginal `p(b|y,z)`, computed from Alice's first setting.
    pub fn marginal_b(&self, b: usize, s: BobSetting) -> f64 {
        let s_idx = self.scenario.setting_index(s).expect("setting in range");
        (0..self.scenario.n_a()).map(|a| self.prob_at(a, b, 0, s_idx)).sum()
    }

    /// Checks entry range, normalization, vanishing out-of-range mass, and
    /// no-signalling in both directions at tolerance `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let sc = &self.scenario;
        for (i, &p) in self.entries.iter().enumerate() {
            if !(-tol..=1.0 + tol).contains(&p) || !p.is_finite() {
                return Err(Error::InvalidProbability { value: p, context: format!("entry {i}") });
            }
        }
        for x in 0..sc.m_a {
            for (s_idx, s) in sc.settings().iter().enumerate() {
                let mut sum = 0.0;
                for a in 0..sc.n_a() {
                    for b in 0..sc.n_b_max() {
                        let p = self.prob_at(a, b, x, s_idx);
                        if b >= sc.n_b(s.path) && p.abs() > tol {
                            return Err(Error::InvalidProbability {
                                value: p,
                                context: format!("out-of-range outcome b={b} at z={}", s.path),
                            });
                        }
                        sum += p;
                    }
                }
                if (sum - 1.0).abs() > tol {
                    return Err(Error::Normalization { context: format!("x={x}, yz={s_idx}"), sum });
                }
            }
        }
        // Alice's marginal independent of (y, z).
        for x in 0..sc.m_a {
            for a in 0..sc.n_a() {
                let reference: f64 =
                    (0..sc.n_b_max()).map(|b| self.prob_at(a, b, x, 0)).sum();
                for s_idx in 1..sc.n_settings() {
                    let m: f64 = (0..sc.n_b_max()).map(|b| self.prob_at(a, b, x, s_idx)).sum();
                    if (m - reference).abs() > tol {
                        return Err(Error::NoSignalling(format!(
                            "p(a={a}|x={x}) depends on Bob's setting ({m} vs {reference})"
                        )));
                    }
                }
            }
        }
        // Bob's marginal independent of x.
        for s_idx in 0..sc.n_settings() {
            for b in 0..sc.n_b_max() {
                let reference: f64 = (0..sc.n_a()).map(|a| self.prob_at(a, b, 0, s_idx)).sum();
                for x in 1..sc.m_a {
                    let m: f64 = (0..sc.n_a()).map(|a| self.prob_at(a, b, x, s_idx)).sum();
                    if (m - reference).abs() > tol {
                        return Err(Error::NoSignalling(format!(
                            "p(b={b}|yz={s_idx}) depends on x ({m} vs {reference})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Merges the no-click mass into the `+1` outcome on both sides.
    pub fn bin_noclick(&self) -> Result<CorrelationTable> {
        let sc = &self.scenario;
        if !sc.has_noclick {
            return Ok(self.clone());
        }
        let out_sc = sc.with_noclick(false);
        let empty_a = sc.noclick_a().expect("has noclick");
        CorrelationTable::from_fn(out_sc, |a, b, x, s| {
            let empty_b = sc.noclick_b(s.path).expect("has noclick");
            let mut p = self.prob(a, b, x, s);
            if a == 0 {
                p += self.prob(empty_a, b, x, s);
            }
            if b == 0 {
                p += self.prob(a, empty_b, x, s);
            }
            if a == 0 && b == 0 {
                p += self.prob(empty_a, empty_b, x, s);
            }
            p
        })
    }

    /// Convex mixture of two tables over the same scenario.
    pub fn mix(&self, other: &CorrelationTable, lambda: f64) -> Result<CorrelationTable> {
        if self.scenario != other.scenario {
            return Err(Error::IncompatibleScenario("mixing tables over different scenarios".into()));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Domain(format!("mixing weight {lambda} outside [0,1]")));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(p, q)| lambda * p + (1.0 - lambda) * q)
            .collect();
        CorrelationTable::new(self.scenario, entries)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CorrelationTable =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        CorrelationTable::new(raw.scenario, raw.entries)
    }

    /// Largest absolute entry difference between two tables.
    pub fn max_abs_diff(&self, other: &CorrelationTable) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max)
    }
}
