//! Bell expressions: linear functionals on extended correlators, with the
//! named families used throughout the crate.

use std::f64::consts::FRAC_PI_2;

use crate::correlators::ExtendedCorrelators;
use crate::error::{Error, Result};
use crate::scenario::{BobSetting, Path, RoutedScenario};
use crate::table::CorrelationTable;

/// A linear functional on extended correlators, with an optional constant
/// term. Coefficient vectors are indexed like [`ExtendedCorrelators`].
#[derive(Debug, Clone, PartialEq)]
pub struct BellExpression {
    pub scenario: RoutedScenario,
    pub name: String,
    pub constant: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub ab: Vec<f64>,
    pub a2: Vec<f64>,
    pub b2: Vec<f64>,
    pub a2b: Vec<f64>,
    pub ab2: Vec<f64>,
    pub a2b2: Vec<f64>,
}

impl BellExpression {
    pub fn zero(scenario: RoutedScenario) -> Self {
        let ns = scenario.n_settings();
        Self {
            scenario,
            name: String::new(),
            constant: 0.0,
            a: vec![0.0; scenario.m_a],
            b: vec![0.0; ns],
            ab: vec![0.0; scenario.m_a * ns],
            a2: vec![0.0; scenario.m_a],
            b2: vec![0.0; ns],
            a2b: vec![0.0; scenario.m_a * ns],
            ab2: vec![0.0; scenario.m_a * ns],
            a2b2: vec![0.0; scenario.m_a * ns],
        }
    }

    fn ab_idx(&self, x: usize, s: BobSetting) -> usize {
        let s_idx = self.scenario.setting_index(s).expect("setting in range");
        x * self.scenario.n_settings() + s_idx
    }

    /// The CHSH expression on the given path:
    /// `<A0 B0z> + <A0 B1z> + <A1 B0z> - <A1 B1z>`.
    pub fn chsh(scenario: RoutedScenario, path: Path) -> Result<Self> {
        let m_b = match path {
            Path::Short => scenario.m_bs,
            Path::Long => scenario.m_bl,
        };
        if scenario.m_a < 2 || m_b < 2 {
            return Err(Error::IncompatibleScenario(
                "CHSH needs two settings on each side".into(),
            ));
        }
        let mut e = Self::zero(scenario);
        e.name = format!("CHSH_{path}");
        for x in 0..2 {
            for y in 0..2 {
                let sign = if x == 1 && y == 1 { -1.0 } else { 1.0 };
                let k = e.ab_idx(x, BobSetting { y, path });
                e.ab[k] = sign;
            }
        }
        Ok(e)
    }

    /// The one-parameter long-path family
    /// `t <A0 B0L> + <A0 B1L> + <A1 B0L> - t <A1 B1L>` with `t = tan(theta)`,
    /// `theta` in `[0, pi/4]`.
    pub fn jtheta(scenario: RoutedScenario, theta: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::FRAC_PI_4 + 1e-12).contains(&theta) {
            return Err(Error::Domain(format!("theta = {theta} outside [0, pi/4]")));
        }
        if scenario.m_a < 2 || scenario.m_bl < 2 {
            return Err(Error::IncompatibleScenario("family needs two settings per side".into()));
        }
        let t = theta.tan();
        let mut e = Self::zero(scenario);
        e.name = format!("J[theta={theta:.6}]");
        let path = Path::Long;
        e.ab[e.ab_idx(0, BobSetting { y: 0, path })] = t;
        e.ab[e.ab_idx(0, BobSetting { y: 1, path })] = 1.0;
        e.ab[e.ab_idx(1, BobSetting { y: 0, path })] = 1.0;
        e.ab[e.ab_idx(1, BobSetting { y: 1, path })] = -t;
        Ok(e)
    }

    /// The two-parameter long-path family with marginal terms:
    /// `(c+ + s- s+) <A1 B0L> + (c+ - s- s+) <A1 B1L> + (s+ - s- c+) <A0 B0L>
    ///  + (s+ + s- c+) <A0 B1L> + c- (<B0L> + <B1L>)`.
    pub fn j_two_angle(scenario: RoutedScenario, theta_plus: f64, theta_minus: f64) -> Result<Self> {
        if !(0.0..FRAC_PI_2).contains(&theta_plus) {
            return Err(Error::Domain(format!("theta_plus = {theta_plus} outside [0, pi/2)")));
        }
        if theta_minus <= 0.0 || theta_minus >= FRAC_PI_2 {
            return Err(Error::Domain(format!("theta_minus = {theta_minus} outside (0, pi/2)")));
        }
        if scenario.m_a < 2 || scenario.m_bl < 2 {
            return Err(Error::IncompatibleScenario("family needs two settings per side".into()));
        }
        let (cp, sp) = (theta_plus.cos(), theta_plus.sin());
        let (cm, sm) = (theta_minus.cos(), theta_minus.sin());
        let mut e = Self::zero(scenario);
        e.name = format!("J[{theta_plus:.6},{theta_minus:.6}]");
        let path = Path::Long;
        e.ab[e.ab_idx(1, BobSetting { y: 0, path })] = cp + sm * sp;
        e.ab[e.ab_idx(1, BobSetting { y: 1, path })] = cp - sm * sp;
        e.ab[e.ab_idx(0, BobSetting { y: 0, path })] = sp - sm * cp;
        e.ab[e.ab_idx(0, BobSetting { y: 1, path })] = sp + sm * cp;
        let b0 = scenario.setting_index(BobSetting { y: 0, path })?;
        let b1 = scenario.setting_index(BobSetting { y: 1, path })?;
        e.b[b0] = cm;
        e.b[b1] = cm;
        Ok(e)
    }

    /// The no-click-aware long-path family
    /// `c <A1 B0L> - s <A1 B1L> + s <A0 B0L> + c <A0 B1L> - (T0L + T1L)/2`,
    /// where `T_yL` is the click probability of the long-path device.
    /// Requires a scenario with the no-click outcome.
    pub fn jtilde(scenario: RoutedScenario, theta: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::FRAC_PI_4 + 1e-12).contains(&theta) {
            return Err(Error::Domain(format!("theta = {theta} outside [0, pi/4]")));
        }
        if !scenario.has_noclick {
            return Err(Error::MissingMoment(
                "click-probability terms need a no-click outcome in the scenario".into(),
            ));
        }
        if scenario.m_a < 2 || scenario.m_bl < 2 {
            return Err(Error::IncompatibleScenario("family needs two settings per side".into()));
        }
        let (c, s) = (theta.cos(), theta.sin());
        let mut e = Self::zero(scenario);
        e.name = format!("Jtilde[theta={theta:.6}]");
        let path = Path::Long;
        e.ab[e.ab_idx(1, BobSetting { y: 0, path })] = c;
        e.ab[e.ab_idx(1, BobSetting { y: 1, path })] = -s;
        e.ab[e.ab_idx(0, BobSetting { y: 0, path })] = s;
        e.ab[e.ab_idx(0, BobSetting { y: 1, path })] = c;
        let b0 = scenario.setting_index(BobSetting { y: 0, path })?;
        let b1 = scenario.setting_index(BobSetting { y: 1, path })?;
        e.b2[b0] = -0.5;
        e.b2[b1] = -0.5;
        Ok(e)
    }

    /// Whether any squared-observable moment carries a nonzero coefficient.
    pub fn uses_squares(&self) -> bool {
        self.a2.iter().chain(&self.b2).chain(&self.a2b).chain(&self.ab2).chain(&self.a2b2).any(|c| *c != 0.0)
    }

    pub fn evaluate(&self, corr: &ExtendedCorrelators) -> Result<f64> {
        if !self.scenario.same_cardinalities(&corr.scenario) {
            return Err(Error::IncompatibleScenario(format!(
                "expression over {:?} evaluated on {:?}",
                self.scenario, corr.scenario
            )));
        }
        let dot = |c: &[f64], v: &[f64]| -> f64 { c.iter().zip(v).map(|(a, b)| a * b).sum() };
        let mut value = self.constant + dot(&self.a, &corr.mean_a) + dot(&self.b, &corr.mean_b)
            + dot(&self.ab, &corr.mean_ab);
        if self.uses_squares() {
            let sq = corr.squares.as_ref().ok_or_else(|| {
                Error::MissingMoment(format!(
                    "{} needs squared moments, but the correlators do not resolve the no-click outcome",
                    self.name
                ))
            })?;
            value += dot(&self.a2, &sq.mean_a2)
                + dot(&self.b2, &sq.mean_b2)
                + dot(&self.a2b, &sq.mean_a2b)
                + dot(&self.ab2, &sq.mean_ab2)
                + dot(&self.a2b2, &sq.mean_a2b2);
        }
        Ok(value)
    }

    pub fn evaluate_table(&self, table: &CorrelationTable) -> Result<f64> {
        self.evaluate(&ExtendedCorrelators::from_table(table)?)
    }

    /// Sum of absolute coefficient mass, assuming each correlator
    /// independently reaches its extreme. First-moment correlators range over
    /// `[-1, 1]`; click-indicator moments over `[0, 1]`.
    pub fn algebraic_bound(&self) -> f64 {
        let signed: f64 = self
            .a
            .iter()
            .chain(&self.b)
            .chain(&self.ab)
            .chain(&self.a2b)
            .chain(&self.ab2)
            .map(|c| c.abs())
            .sum();
        let indicator: f64 =
            self.a2.iter().chain(&self.b2).chain(&self.a2b2).map(|c| c.max(0.0)).sum();
        self.constant + signed + indicator
    }

    /// Scaled sum of two expressions over the same scenario.
    pub fn linear_combination(terms: &[(f64, &BellExpression)]) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::InvalidInput("empty combination".into()))?;
        let mut out = Self::zero(first.1.scenario);
        out.name = terms
            .iter()
            .map(|(w, e)| format!("{w:.4}*{}", e.name))
            .collect::<Vec<_>>()
            .join(" + ");
        for (w, e) in terms {
            if e.scenario != out.scenario {
                return Err(Error::IncompatibleScenario("combining across scenarios".into()));
            }
            out.constant += w * e.constant;
            for (dst, src) in [
                (&mut out.a, &e.a),
                (&mut out.b, &e.b),
                (&mut out.ab, &e.ab),
                (&mut out.a2, &e.a2),
                (&mut out.b2, &e.b2),
                (&mut out.a2b, &e.a2b),
                (&mut out.ab2, &e.ab2),
                (&mut out.a2b2, &e.a2b2),
            ] {
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d += w * s;
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_3};

    #[test]
    fn chsh_on_uniform_table_is_zero() {
        let sc = RoutedScenario::routed_chsh();
        let e = BellExpression::chsh(sc, Path::Long).unwrap();
        let v = e.evaluate_table(&CorrelationTable::uniform(sc)).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn all_plus_one_table_gives_two_for_any_theta() {
        let sc = RoutedScenario::routed_chsh();
        let t = CorrelationTable::deterministic(sc, |_| 0, |_| 0).unwrap();
        for theta in [0.0, 0.1, FRAC_PI_4 / 2.0, FRAC_PI_4] {
            let e = BellExpression::jtheta(sc, theta).unwrap();
            assert!((e.evaluate_table(&t).unwrap() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn algebraic_bounds() {
        let sc = RoutedScenario::routed_chsh();
        assert!((BellExpression::chsh(sc, Path::Long).unwrap().algebraic_bound() - 4.0).abs() < 1e-12);
        assert!((BellExpression::jtheta(sc, 0.0).unwrap().algebraic_bound() - 2.0).abs() < 1e-12);
        // Two-angle family with s+ - s- c+ >= 0: algebraic bound matches
        // 2(c+ + s+ + c-).
        let (tp, tm) = (FRAC_PI_4, FRAC_PI_3);
        let e = BellExpression::j_two_angle(sc, tp, tm).unwrap();
        let expect = 2.0 * (tp.cos() + tp.sin() + tm.cos());
        assert!((e.algebraic_bound() - expect).abs() < 1e-12);
    }

    #[test]
    fn jtilde_needs_square_moments() {
        let sc = RoutedScenario::routed_chsh().with_noclick(true);
        let e = BellExpression::jtilde(sc, 0.0).unwrap();
        assert!(e.uses_squares());
        // Evaluating against a binary table lacking the no-click outcome
        // fails with a missing-moment error.
        let binary = CorrelationTable::uniform(RoutedScenario::routed_chsh());
        let corr = ExtendedCorrelators::from_table(&binary).unwrap();
        assert!(matches!(e.evaluate(&corr), Err(Error::MissingMoment(_))));
    }

    #[test]
    fn evaluation_is_linear_in_the_table() {
        let sc = RoutedScenario::routed_chsh();
        let e = BellExpression::chsh(sc, Path::Short).unwrap();
        let p = CorrelationTable::deterministic(sc, |_| 0, |_| 0).unwrap();
        let q = CorrelationTable::uniform(sc);
        for lambda in [0.0, 0.3, 0.77, 1.0] {
            let mixed = p.mix(&q, lambda).unwrap();
            let lhs = e.evaluate_table(&mixed).unwrap();
            let rhs = lambda * e.evaluate_table(&p).unwrap()
                + (1.0 - lambda) * e.evaluate_table(&q).unwrap();
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn scenario_mismatch_is_rejected() {
        let routed = RoutedScenario::routed_chsh();
        let standard = RoutedScenario::standard_chsh();
        let e = BellExpression::chsh(routed, Path::Long).unwrap();
        let t = CorrelationTable::uniform(standard);
        assert!(matches!(e.evaluate_table(&t), Err(Error::IncompatibleScenario(_))));
    }
}
