//! Detection-efficiency maps: keeping the no-click outcome as an extra
//! outcome, or binning it into `+1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::Path;
use crate::table::CorrelationTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DetectionMode {
    /// No-click becomes an additional outcome on both sides.
    KeepNoClick,
    /// No-click is relabeled to the `+1` outcome.
    BinToPlusOne,
}

impl std::fmt::Display for DetectionMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DetectionMode::KeepNoClick => write!(f, "keep"),
            DetectionMode::BinToPlusOne => write!(f, "bin"),
        }
    }
}

/// Detector efficiencies of the three measurement devices. The same mode
/// applies to every detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyVector {
    pub eta_a: f64,
    pub eta_bs: f64,
    pub eta_bl: f64,
    pub mode: DetectionMode,
}

impl EfficiencyVector {
    pub fn new(eta_a: f64, eta_bs: f64, eta_bl: f64, mode: DetectionMode) -> Result<Self> {
        for (name, eta) in [("eta_a", eta_a), ("eta_bs", eta_bs), ("eta_bl", eta_bl)] {
            if !(0.0..=1.0).contains(&eta) {
                return Err(Error::Domain(format!("{name} = {eta} outside [0,1]")));
            }
        }
        Ok(Self { eta_a, eta_bs, eta_bl, mode })
    }

    pub fn eta_z(&self, path: Path) -> f64 {
        match path {
            Path::Short => self.eta_bs,
            Path::Long => self.eta_bl,
        }
    }
}

/// Applies independent detector losses to an ideal (always-click) table.
///
/// With [`DetectionMode::KeepNoClick`] the output gains a no-click outcome on
/// both sides; with [`DetectionMode::BinToPlusOne`] the no-click mass is
/// folded into the `+1` outcome and the scenario is unchanged.
pub fn apply_detection(table: &CorrelationTable, eff: &EfficiencyVector) -> Result<CorrelationTable> {
    let sc = *table.scenario();
    if sc.has_noclick {
        return Err(Error::InvalidInput(
            "detection maps expect ideal correlations without a no-click outcome".into(),
        ));
    }
    let ea = eff.eta_a;
    match eff.mode {
        DetectionMode::KeepNoClick => {
            let out_sc = sc.with_noclick(true);
            CorrelationTable::from_fn(out_sc, |a, b, x, s| {
                let ez = eff.eta_z(s.path);
                let a_click = a < sc.d_a;
                let b_click = b < sc.d_b(s.path);
                match (a_click, b_click) {
                    (true, true) => ea * ez * table.prob(a, b, x, s),
                    (true, false) => ea * (1.0 - ez) * table.marginal_a(a, x),
                    (false, true) => (1.0 - ea) * ez * table.marginal_b(b, s),
                    (false, false) => (1.0 - ea) * (1.0 - ez),
                }
            })
        }
        DetectionMode::BinToPlusOne => CorrelationTable::from_fn(sc, |a, b, x, s| {
            let ez = eff.eta_z(s.path);
            let mut p = ea * ez * table.prob(a, b, x, s);
            if a == 0 {
                p += (1.0 - ea) * ez * table.marginal_b(b, s);
            }
            if b == 0 {
                p += ea * (1.0 - ez) * table.marginal_a(a, x);
            }
            if a == 0 && b == 0 {
                p += (1.0 - ea) * (1.0 - ez);
            }
            p
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expression::BellExpression;
    use crate::scenario::{BobSetting, RoutedScenario};
    use crate::table::CorrelationTable;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn chsh_ideal() -> CorrelationTable {
        // <A_x B_yz> = (-1)^{xy} / sqrt(2) on both paths.
        let sc = RoutedScenario::routed_chsh();
        CorrelationTable::from_fn(sc, |a, b, x, s| {
            let sign = if x == 1 && s.y == 1 { -1.0 } else { 1.0 };
            let va = if a == 0 { 1.0 } else { -1.0 };
            let vb = if b == 0 { 1.0 } else { -1.0 };
            (1.0 + va * vb * sign / std::f64::consts::SQRT_2) / 4.0
        })
        .unwrap()
    }

    #[test]
    fn lossless_detection_is_identity() {
        let t = chsh_ideal();
        let bin = EfficiencyVector::new(1.0, 1.0, 1.0, DetectionMode::BinToPlusOne).unwrap();
        assert!(t.max_abs_diff(&apply_detection(&t, &bin).unwrap()) < 1e-15);
        let keep = EfficiencyVector::new(1.0, 1.0, 1.0, DetectionMode::KeepNoClick).unwrap();
        let kept = apply_detection(&t, &keep).unwrap();
        let sc = kept.scenario();
        assert!(sc.has_noclick);
        // no-click mass is zero
        let empty = sc.noclick_a().unwrap();
        for x in 0..2 {
            assert!(kept.marginal_a(empty, x).abs() < 1e-15);
        }
    }

    #[test]
    fn binned_long_path_chsh_scales_linearly() {
        let t = chsh_ideal();
        let sc = *t.scenario();
        let eta = 0.8;
        let eff = EfficiencyVector::new(1.0, 1.0, eta, DetectionMode::BinToPlusOne).unwrap();
        let lossy = apply_detection(&t, &eff).unwrap();
        let chsh_l = BellExpression::chsh(sc, crate::scenario::Path::Long).unwrap();
        let v = chsh_l.evaluate_table(&lossy).unwrap();
        assert!((v - eta * 2.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
        // Short path untouched.
        let chsh_s = BellExpression::chsh(sc, crate::scenario::Path::Short).unwrap();
        let vs = chsh_s.evaluate_table(&lossy).unwrap();
        assert!((vs - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn binned_short_path_matches_closed_form() {
        let t = chsh_ideal();
        let eta_s = 0.9;
        let eff = EfficiencyVector::new(eta_s, eta_s, 0.7, DetectionMode::BinToPlusOne).unwrap();
        let lossy = apply_detection(&t, &eff).unwrap();
        let corr =
            crate::correlators::ExtendedCorrelators::from_table(&lossy).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                let sign = if x == 1 && y == 1 { -1.0 } else { 1.0 };
                let expect = eta_s * eta_s * sign / std::f64::consts::SQRT_2
                    + (1.0 - eta_s) * (1.0 - eta_s);
                let s_idx = t
                    .scenario()
                    .setting_index(BobSetting { y, path: crate::scenario::Path::Short })
                    .unwrap();
                assert!((corr.mean_ab[corr.ab_index(x, s_idx)] - expect).abs() < 1e-12);
            }
        }
    }

    /// Oracle for the algebraic identity between the two detection maps:
    /// binning after keeping must equal direct binning, on random tables.
    #[test]
    fn keep_then_bin_equals_direct_bin_on_random_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sc = RoutedScenario::routed_chsh();
        for _ in 0..50 {
            // Random product-noise table: mixture of deterministic tables.
            let mut entries =
                vec![0.0; sc.n_a() * sc.n_b_max() * sc.m_a * sc.n_settings()];
            let n_mix = 6;
            for _ in 0..n_mix {
                let fa: Vec<usize> = (0..sc.m_a).map(|_| rng.random_range(0..2)).collect();
                let fb: Vec<usize> =
                    (0..sc.n_settings()).map(|_| rng.random_range(0..2)).collect();
                let det =
                    CorrelationTable::deterministic(sc, |x| fa[x], |s| {
                        fb[sc.setting_index(s).unwrap()]
                    })
                    .unwrap();
                for (acc, v) in entries.iter_mut().zip(det.entries()) {
                    *acc += v / n_mix as f64;
                }
            }
            let table = CorrelationTable::new(sc, entries).unwrap();
            let (ea, es, el) =
                (rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>());
            let keep = EfficiencyVector::new(ea, es, el, DetectionMode::KeepNoClick).unwrap();
            let bin = EfficiencyVector::new(ea, es, el, DetectionMode::BinToPlusOne).unwrap();
            let via_keep = apply_detection(&table, &keep).unwrap().bin_noclick().unwrap();
            let direct = apply_detection(&table, &bin).unwrap();
            assert!(via_keep.max_abs_diff(&direct) < 1e-14);
        }
    }

    #[test]
    fn fully_lossy_binned_table_is_deterministic_plus_plus() {
        let t = chsh_ideal();
        let eff = EfficiencyVector::new(0.0, 0.0, 0.0, DetectionMode::BinToPlusOne).unwrap();
        let lossy = apply_detection(&t, &eff).unwrap();
        for x in 0..2 {
            for s in t.scenario().settings() {
                assert!((lossy.prob(0, 0, x, s) - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_tables_that_already_have_noclick() {
        let sc = RoutedScenario::routed_chsh().with_noclick(true);
        let t = CorrelationTable::uniform(sc);
        let eff = EfficiencyVector::new(0.9, 0.9, 0.9, DetectionMode::KeepNoClick).unwrap();
        assert!(apply_detection(&t, &eff).is_err());
    }
}
