//! Expectation values of the observables `A_x`, `B_yz` and their squares.
//!
//! For binary devices the observable takes the value `+1` or `-1`; the
//! no-click outcome contributes 0 to the observable and to its square, so
//! squared moments are click probabilities. Tables without a no-click
//! outcome populate only the degree-(1,1) moments.

use crate::error::{Error, Result};
use crate::scenario::{outcome_click, outcome_value, BobSetting, RoutedScenario};
use crate::table::CorrelationTable;

/// Squared-observable moments, present only when the table resolves the
/// no-click outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMoments {
    pub mean_a2: Vec<f64>,
    pub mean_b2: Vec<f64>,
    pub mean_a2b: Vec<f64>,
    pub mean_ab2: Vec<f64>,
    pub mean_a2b2: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedCorrelators {
    pub scenario: RoutedScenario,
    /// `<A_x>` indexed by `x`.
    pub mean_a: Vec<f64>,
    /// `<B_yz>` indexed by the flat Bob setting.
    pub mean_b: Vec<f64>,
    /// `<A_x B_yz>` indexed by `x * n_settings + yz`.
    pub mean_ab: Vec<f64>,
    pub squares: Option<SquareMoments>,
}

impl ExtendedCorrelators {
    pub fn ab_index(&self, x: usize, s_idx: usize) -> usize {
        x * self.scenario.n_settings() + s_idx
    }

    /// Extracts all moments from a binary (+ optional no-click) table.
    pub fn from_table(table: &CorrelationTable) -> Result<Self> {
        let sc = *table.scenario();
        if sc.d_a != 2 || sc.d_bs != 2 || sc.d_bl != 2 {
            return Err(Error::UnsupportedQuery(
                "extended correlators require binary devices".into(),
            ));
        }
        let ns = sc.n_settings();
        let mut mean_a = vec![0.0; sc.m_a];
        let mut mean_b = vec![0.0; ns];
        let mut mean_ab = vec![0.0; sc.m_a * ns];
        let mut sq = SquareMoments {
            mean_a2: vec![0.0; sc.m_a],
            mean_b2: vec![0.0; ns],
            mean_a2b: vec![0.0; sc.m_a * ns],
            mean_ab2: vec![0.0; sc.m_a * ns],
            mean_a2b2: vec![0.0; sc.m_a * ns],
        };
        for x in 0..sc.m_a {
            for (s_idx, s) in sc.settings().iter().enumerate() {
                let mut acc = [0.0_f64; 8]; // a, b, ab, a2, b2, a2b, ab2, a2b2
                for a in 0..sc.n_a() {
                    let va = outcome_value(a, sc.d_a, sc.has_noclick)?;
                    let ca = outcome_click(a, sc.d_a, sc.has_noclick)?;
                    for b in 0..sc.n_b(s.path) {
                        let vb = outcome_value(b, sc.d_b(s.path), sc.has_noclick)?;
                        let cb = outcome_click(b, sc.d_b(s.path), sc.has_noclick)?;
                        let p = table.prob(a, b, x, *s);
                        acc[0] += va * p;
                        acc[1] += vb * p;
                        acc[2] += va * vb * p;
                        acc[3] += ca * p;
                        acc[4] += cb * p;
                        acc[5] += ca * vb * p;
                        acc[6] += va * cb * p;
                        acc[7] += ca * cb * p;
                    }
                }
                if s_idx == 0 {
                    mean_a[x] = acc[0];
                    sq.mean_a2[x] = acc[3];
                }
                if x == 0 {
                    mean_b[s_idx] = acc[1];
                    sq.mean_b2[s_idx] = acc[4];
                }
                let k = x * ns + s_idx;
                mean_ab[k] = acc[2];
                sq.mean_a2b[k] = acc[5];
                sq.mean_ab2[k] = acc[6];
                sq.mean_a2b2[k] = acc[7];
            }
        }
        Ok(Self {
            scenario: sc,
            mean_a,
            mean_b,
            mean_ab,
            squares: sc.has_noclick.then_some(sq),
        })
    }

    /// Reconstructs the table; exact for binary devices (+ optional no-click).
    pub fn to_table(&self) -> Result<CorrelationTable> {
        let sc = self.scenario;
        let ns = sc.n_settings();
        // Per-side linear maps from the moment vector to outcome weights.
        // Binary: moments (1, m1); with no-click: (1, m1, m2).
        let rows_binary = [[0.5, 0.5], [0.5, -0.5]];
        let rows_noclick = [[0.0, 0.5, 0.5], [0.0, -0.5, 0.5], [1.0, 0.0, -1.0]];
        CorrelationTable::from_fn(sc, |a, b, x, s: BobSetting| {
            let s_idx = sc.setting_index(s).expect("setting in range");
            let k = x * ns + s_idx;
            if let Some(sq) = &self.squares {
                let ma = [1.0, self.mean_a[x], sq.mean_a2[x]];
                let mb = [1.0, self.mean_b[s_idx], sq.mean_b2[s_idx]];
                let mab = [
                    [1.0, mb[1], mb[2]],
                    [ma[1], self.mean_ab[k], sq.mean_ab2[k]],
                    [ma[2], sq.mean_a2b[k], sq.mean_a2b2[k]],
                ];
                let ra = rows_noclick[a];
                let rb = rows_noclick[b];
                let mut p = 0.0;
                for (i, &wa) in ra.iter().enumerate() {
                    for (j, &wb) in rb.iter().enumerate() {
                        p += wa * wb * mab[i][j];
                    }
                }
                p
            } else {
                let mab = [[1.0, self.mean_b[s_idx]], [self.mean_a[x], self.mean_ab[k]]];
                let ra = rows_binary[a];
                let rb = rows_binary[b];
                let mut p = 0.0;
                for (i, &wa) in ra.iter().enumerate() {
                    for (j, &wb) in rb.iter().enumerate() {
                        p += wa * wb * mab[i][j];
                    }
                }
                p
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Path;

    #[test]
    fn uniform_table_has_zero_correlators() {
        let c = ExtendedCorrelators::from_table(&CorrelationTable::uniform(
            RoutedScenario::routed_chsh(),
        ))
        .unwrap();
        assert!(c.mean_a.iter().all(|v| v.abs() < 1e-15));
        assert!(c.mean_ab.iter().all(|v| v.abs() < 1e-15));
        assert!(c.squares.is_none());
    }

    #[test]
    fn roundtrip_binary() {
        let sc = RoutedScenario::routed_chsh();
        let t = CorrelationTable::deterministic(sc, |x| x, |s| usize::from(s.path == Path::Long))
            .unwrap();
        let c = ExtendedCorrelators::from_table(&t).unwrap();
        assert!(t.max_abs_diff(&c.to_table().unwrap()) < 1e-15);
    }

    #[test]
    fn roundtrip_with_noclick() {
        let sc = RoutedScenario::routed_chsh().with_noclick(true);
        // A structured noisy table with some no-click mass.
        let t = CorrelationTable::from_fn(sc, |a, b, _x, _s| {
            let wa = [0.5, 0.3, 0.2][a];
            let wb = [0.4, 0.35, 0.25][b];
            wa * wb
        })
        .unwrap();
        let c = ExtendedCorrelators::from_table(&t).unwrap();
        let sq = c.squares.as_ref().unwrap();
        // Click probabilities.
        assert!((sq.mean_a2[0] - 0.8).abs() < 1e-12);
        assert!((sq.mean_b2[0] - 0.75).abs() < 1e-12);
        assert!(t.max_abs_diff(&c.to_table().unwrap()) < 1e-14);
    }
}
