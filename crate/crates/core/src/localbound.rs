//! Exact local bounds by enumeration over deterministic assignments.
//!
//! Bob's routed device is treated as a single party with `m_bs + m_bl`
//! settings, so a deterministic strategy assigns one outcome to each of
//! Alice's settings and one to each Bob setting.

use crate::error::{Error, Result};
use crate::expression::BellExpression;

/// Outcome alphabet for the enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeAlphabet {
    /// `{+1, -1}`.
    PlusMinus,
    /// `{+1, -1, no-click}`; the no-click outcome contributes 0 to the
    /// observable and to its square.
    PlusMinusNoClick,
}

impl OutcomeAlphabet {
    fn values(self) -> &'static [(f64, f64)] {
        // (observable value, click indicator)
        match self {
            OutcomeAlphabet::PlusMinus => &[(1.0, 1.0), (-1.0, 1.0)],
            OutcomeAlphabet::PlusMinusNoClick => &[(1.0, 1.0), (-1.0, 1.0), (0.0, 0.0)],
        }
    }
}

const ENUMERATION_GUARD: f64 = 1e6;

/// Exact maximum of `expr` over local deterministic strategies.
pub fn local_bound(expr: &BellExpression, alphabet: OutcomeAlphabet) -> Result<f64> {
    Ok(local_bound_with_argmax(expr, alphabet)?.0)
}

/// As [`local_bound`], also returning one maximizing assignment
/// `(alice values, bob values)` as indices into the alphabet.
pub fn local_bound_with_argmax(
    expr: &BellExpression,
    alphabet: OutcomeAlphabet,
) -> Result<(f64, Vec<usize>, Vec<usize>)> {
    let sc = &expr.scenario;
    let vals = alphabet.values();
    let k = vals.len() as f64;
    if k.powi(sc.m_a as i32) > ENUMERATION_GUARD || k.powi(sc.n_settings() as i32) > ENUMERATION_GUARD
    {
        return Err(Error::TooLarge(format!(
            "deterministic enumeration over {}^{} x {}^{} assignments",
            vals.len(),
            sc.m_a,
            vals.len(),
            sc.n_settings()
        )));
    }
    let ns = sc.n_settings();
    let mut best = f64::NEG_INFINITY;
    let mut best_a = vec![0; sc.m_a];
    let mut best_b = vec![0; ns];

    let mut assign_a = vec![0usize; sc.m_a];
    loop {
        let mut assign_b = vec![0usize; ns];
        loop {
            let mut v = expr.constant;
            for x in 0..sc.m_a {
                let (va, ca) = vals[assign_a[x]];
                v += expr.a[x] * va + expr.a2[x] * ca;
                for s in 0..ns {
                    let (vb, cb) = vals[assign_b[s]];
                    let idx = x * ns + s;
                    v += expr.ab[idx] * va * vb
                        + expr.a2b[idx] * ca * vb
                        + expr.ab2[idx] * va * cb
                        + expr.a2b2[idx] * ca * cb;
                }
            }
            for s in 0..ns {
                let (vb, cb) = vals[assign_b[s]];
                v += expr.b[s] * vb + expr.b2[s] * cb;
            }
            if v > best {
                best = v;
                best_a.copy_from_slice(&assign_a);
                best_b.copy_from_slice(&assign_b);
            }
            if !increment(&mut assign_b, vals.len()) {
                break;
            }
        }
        if !increment(&mut assign_a, vals.len()) {
            break;
        }
    }
    Ok((best, best_a, best_b))
}

fn increment(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::RoutedScenario;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_8};

    #[test]
    fn chsh_local_bound_is_two() {
        let sc = RoutedScenario::routed_chsh();
        let e = BellExpression::chsh(sc, crate::scenario::Path::Long).unwrap();
        let b = local_bound(&e, OutcomeAlphabet::PlusMinus).unwrap();
        assert!((b - 2.0).abs() < 1e-12);
    }

    #[test]
    fn jtheta_local_bound_is_two() {
        let sc = RoutedScenario::routed_chsh();
        for theta in [0.0, FRAC_PI_8, FRAC_PI_4] {
            let e = BellExpression::jtheta(sc, theta).unwrap();
            let b = local_bound(&e, OutcomeAlphabet::PlusMinus).unwrap();
            assert!((b - 2.0).abs() < 1e-12, "theta={theta}: {b}");
        }
    }

    #[test]
    fn jtilde_local_bound_at_zero() {
        let sc = RoutedScenario::routed_chsh().with_noclick(true);
        let e = BellExpression::jtilde(sc, 0.0).unwrap();
        let b = local_bound(&e, OutcomeAlphabet::PlusMinusNoClick).unwrap();
        assert!((b - 1.0).abs() < 1e-12, "{b}");
    }

    #[test]
    fn two_angle_local_bound() {
        let sc = RoutedScenario::routed_chsh();
        let e = BellExpression::j_two_angle(sc, 0.0, FRAC_PI_3).unwrap();
        let b = local_bound(&e, OutcomeAlphabet::PlusMinus).unwrap();
        assert!((b - 3.0).abs() < 1e-12, "{b}");
    }

    #[test]
    fn argmax_achieves_the_bound() {
        let sc = RoutedScenario::routed_chsh();
        let e = BellExpression::jtheta(sc, FRAC_PI_8).unwrap();
        let (b, aa, bb) = local_bound_with_argmax(&e, OutcomeAlphabet::PlusMinus).unwrap();
        // Re-evaluate the assignment through the deterministic table path.
        let vals = [0usize, 1usize];
        let t = crate::table::CorrelationTable::deterministic(
            sc,
            |x| vals[aa[x]],
            |s| vals[bb[sc.setting_index(s).unwrap()]],
        )
        .unwrap();
        let v = e.evaluate_table(&t).unwrap();
        assert!((v - b).abs() < 1e-12);
    }

    #[test]
    fn guard_rejects_huge_enumerations() {
        let sc = RoutedScenario::new(2, 2, 10, 2, 10, 2, false).unwrap();
        let e = BellExpression::zero(sc);
        assert!(matches!(
            local_bound(&e, OutcomeAlphabet::PlusMinusNoClick),
            Err(Error::TooLarge(_))
        ));
    }
}
