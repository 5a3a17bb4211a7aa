//! Parent POVMs: single measurements whose post-processed outcomes reproduce
//! a family of jointly-measurable observables, plus the matrix witnesses used
//! to certify joint-measurability bounds.

use crate::error::{Error, Result};
use crate::qmat::{
    c, dagger, id, is_hermitian, min_eigenvalue, pauli_x, pauli_z, rotate_xz, scale, trace, CMat,
};

/// Default eigenvalue tolerance for PSD checks on 2x2/4x4 matrices.
pub const PSD_TOL: f64 = 1e-10;

/// A parent measurement `{N_lambda}` together with the conditional response
/// `p(b|y,lambda)`. Outputs are labeled `0 -> +1`, `1 -> -1`, and `2` for the
/// no-click outcome where applicable.
#[derive(Debug, Clone)]
pub struct ParentPovm {
    pub elements: Vec<CMat>,
    /// `response[lambda][y][b]`.
    pub response: Vec<Vec<Vec<f64>>>,
}

impl ParentPovm {
    /// A parent POVM whose outcome `lambda` deterministically fixes the
    /// output for every input: `outputs[lambda][y]` is the label emitted for
    /// input `y`, over `n_outcomes` possible labels.
    pub fn deterministic(elements: Vec<CMat>, outputs: Vec<Vec<usize>>, n_outcomes: usize) -> Self {
        let response = outputs
            .iter()
            .map(|beta| {
                beta.iter()
                    .map(|&b| {
                        let mut row = vec![0.0; n_outcomes];
                        row[b] = 1.0;
                        row
                    })
                    .collect()
            })
            .collect();
        Self { elements, response }
    }

    pub fn n_inputs(&self) -> usize {
        self.response.first().map_or(0, |r| r.len())
    }

    pub fn n_outcomes(&self) -> usize {
        self.response.first().and_then(|r| r.first()).map_or(0, |row| row.len())
    }

    /// Checks element positivity, completeness, and response normalization.
    pub fn validate(&self, tol: f64) -> Result<()> {
        if self.elements.is_empty() || self.elements.len() != self.response.len() {
            return Err(Error::InvalidInput("POVM element/response count mismatch".into()));
        }
        let dim = self.elements[0].nrows();
        let mut sum = CMat::zeros((dim, dim));
        for (i, n) in self.elements.iter().enumerate() {
            if !is_hermitian(n, tol) {
                return Err(Error::InvalidInput(format!("element {i} is not Hermitian")));
            }
            if min_eigenvalue(n) < -tol {
                return Err(Error::InvalidInput(format!(
                    "element {i} has eigenvalue {}",
                    min_eigenvalue(n)
                )));
            }
            sum = &sum + n;
        }
        let dev = &sum - &id(dim);
        if dev.iter().any(|z| z.norm() > tol * 10.0) {
            return Err(Error::InvalidInput("POVM elements do not sum to identity".into()));
        }
        for (l, rows) in self.response.iter().enumerate() {
            for (y, row) in rows.iter().enumerate() {
                let s: f64 = row.iter().sum();
                if (s - 1.0).abs() > tol || row.iter().any(|p| *p < -tol) {
                    return Err(Error::InvalidInput(format!(
                        "response row (lambda={l}, y={y}) is not a distribution"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Effect operator of outcome `b` for input `y`:
    /// `M_{b|y} = sum_lambda p(b|y,lambda) N_lambda`.
    pub fn effect(&self, y: usize, b: usize) -> CMat {
        let dim = self.elements[0].nrows();
        let mut m = CMat::zeros((dim, dim));
        for (n, rows) in self.elements.iter().zip(&self.response) {
            let w = rows[y][b];
            if w != 0.0 {
                m = &m + &scale(n, w);
            }
        }
        m
    }

    /// Induced observable for input `y` (no-click contributes 0).
    pub fn effective_observable(&self, y: usize) -> CMat {
        &self.effect(y, 0) - &self.effect(y, 1)
    }

    /// Induced click operator `T_y = M_{+1|y} + M_{-1|y}`.
    pub fn effective_click(&self, y: usize) -> CMat {
        &self.effect(y, 0) + &self.effect(y, 1)
    }

    /// Conjugates every element by the X-Z plane rotation of angle `t`.
    pub fn rotated(&self, t: f64) -> Self {
        Self {
            elements: self.elements.iter().map(|n| rotate_xz(n, t)).collect(),
            response: self.response.clone(),
        }
    }

    /// For deterministic responses, the output vector `(b_0, .., b_{m-1})`
    /// associated with element `lambda`.
    pub fn output_vector(&self, lambda: usize) -> Vec<usize> {
        self.response[lambda]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite"))
                    .map(|(i, _)| i)
                    .expect("nonempty row")
            })
            .collect()
    }
}

/// True iff `cap - m` is PSD (min eigenvalue >= -tol) for every `m`.
pub fn psd_dominance_check(matrices: &[CMat], cap: &CMat, tol: f64) -> bool {
    matrices.iter().all(|m| min_eigenvalue(&(cap - m)) >= -tol)
}

/// The four-element joint measurement reproducing the two-angle long-path
/// observables at detection efficiency `1/(1 + cos(theta_minus))`.
///
/// Stated for `theta_plus = 0`; other rotations conjugate every element
/// uniformly. The all-minus element is identically zero.
pub fn parent_povm_two_angle(theta_minus: f64, theta_plus: f64) -> Result<ParentPovm> {
    let margin = 1e-9;
    if theta_minus <= margin || theta_minus >= std::f64::consts::FRAC_PI_2 - margin {
        return Err(Error::Domain(format!(
            "theta_minus = {theta_minus} outside the open interval (0, pi/2)"
        )));
    }
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&theta_plus) {
        return Err(Error::Domain(format!("theta_plus = {theta_plus} outside [0, pi/2)")));
    }
    let (cm, sm) = (theta_minus.cos(), theta_minus.sin());
    let one = id(2);
    let (x, z) = (pauli_x(), pauli_z());
    let plus_z = scale(&(&one + &z), 0.5);
    let minus_z = scale(&(&one - &z), 0.5);
    let n00 = scale(&(&one + &z), cm / (1.0 + cm));
    let n01 = scale(
        &(&(&scale(&x, -sm / (1.0 + cm)) + &scale(&plus_z, (1.0 - cm) / (1.0 + cm))) + &minus_z),
        0.5,
    );
    let n10 = scale(
        &(&(&scale(&x, sm / (1.0 + cm)) + &scale(&plus_z, (1.0 - cm) / (1.0 + cm))) + &minus_z),
        0.5,
    );
    let n11 = CMat::zeros((2, 2));
    let povm = ParentPovm::deterministic(
        vec![n00, n01, n10, n11],
        vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]],
        2,
    )
    .rotated(theta_plus);
    povm.validate(PSD_TOL)?;
    Ok(povm)
}

/// Families of jointly-measurable strategies that saturate the corresponding
/// witness bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaturatingFamily {
    /// Both inputs measure `(Z+X)/sqrt(2)`; saturates the sqrt(2) witness.
    SimpleJm,
    /// Half-strength Z/X measurements with a no-click outcome; saturates the
    /// 1/2 witness.
    TildeJm,
}

pub fn jm_saturating_povm(family: SaturatingFamily) -> ParentPovm {
    let one = id(2);
    match family {
        SaturatingFamily::SimpleJm => {
            let w = scale(&(&pauli_z() + &pauli_x()), 1.0 / std::f64::consts::SQRT_2);
            let plus = scale(&(&one + &w), 0.5);
            let minus = scale(&(&one - &w), 0.5);
            ParentPovm::deterministic(vec![plus, minus], vec![vec![0, 0], vec![1, 1]], 2)
        }
        SaturatingFamily::TildeJm => {
            let z = pauli_z();
            let x = pauli_x();
            let elements = vec![
                scale(&(&one + &z), 0.25),
                scale(&(&one - &z), 0.25),
                scale(&(&one + &x), 0.25),
                scale(&(&one - &x), 0.25),
            ];
            // Flip a fair coin: measure Z and answer only y=0, or measure X
            // and answer only y=1; the other input reports no-click.
            let outputs = vec![vec![0, 2], vec![1, 2], vec![2, 0], vec![2, 1]];
            ParentPovm::deterministic(elements, outputs, 3)
        }
    }
}

/// A matrix witness for joint measurability: target operators indexed by the
/// parent-outcome label, a dominating cap, and the implied bound
/// `scale * tr(cap)`.
#[derive(Debug, Clone)]
pub struct JmWitness {
    /// `(output vector, target matrix)` pairs.
    pub targets: Vec<(Vec<usize>, CMat)>,
    pub cap: CMat,
    pub scale: f64,
}

impl JmWitness {
    pub fn bound(&self) -> f64 {
        self.scale * trace(&self.cap).re
    }

    /// Every target is dominated by the cap.
    pub fn check_dominance(&self, tol: f64) -> bool {
        let mats: Vec<CMat> = self.targets.iter().map(|(_, m)| m.clone()).collect();
        psd_dominance_check(&mats, &self.cap, tol)
    }

    /// `scale * sum_lambda tr(C_{beta(lambda)} N_lambda)` for a parent POVM
    /// with deterministic responses.
    pub fn evaluate(&self, povm: &ParentPovm) -> Result<f64> {
        let mut total = 0.0;
        for lambda in 0..povm.elements.len() {
            let beta = povm.output_vector(lambda);
            let target = self
                .targets
                .iter()
                .find(|(b, _)| *b == beta)
                .map(|(_, m)| m)
                .ok_or_else(|| {
                    Error::InvalidInput(format!("witness has no target for outputs {beta:?}"))
                })?;
            total += trace(&target.dot(&povm.elements[lambda])).re;
        }
        Ok(self.scale * total)
    }
}

/// Witness behind the sqrt(2) bound: `C_{b0 b1} = (-1)^{b0} Z + (-1)^{b1} X`
/// capped by `sqrt(2) * 1`.
pub fn witness_simple_jm() -> JmWitness {
    let (x, z) = (pauli_x(), pauli_z());
    let mut targets = Vec::new();
    for b0 in 0..2usize {
        for b1 in 0..2usize {
            let m = &scale(&z, if b0 == 0 { 1.0 } else { -1.0 })
                + &scale(&x, if b1 == 0 { 1.0 } else { -1.0 });
            targets.push((vec![b0, b1], m));
        }
    }
    JmWitness { targets, cap: scale(&id(2), std::f64::consts::SQRT_2), scale: 0.5 }
}

/// Witness behind the two-angle bound of 2, capped by `1 + cos(t-) Z`.
pub fn witness_two_angle_jm(theta_minus: f64) -> JmWitness {
    let (cm, sm) = (theta_minus.cos(), theta_minus.sin());
    let (x, z) = (pauli_x(), pauli_z());
    let one = id(2);
    let mut targets = Vec::new();
    for b0 in 0..2usize {
        for b1 in 0..2usize {
            let m = if b0 == b1 {
                scale(&(&z + &scale(&one, cm)), if b0 == 0 { 1.0 } else { -1.0 })
            } else {
                scale(&x, if b1 == 0 { sm } else { -sm })
            };
            targets.push((vec![b0, b1], m));
        }
    }
    JmWitness { targets, cap: &one + &scale(&z, cm), scale: 1.0 }
}

/// Witness behind the 1/2 bound for trinary-outcome devices, capped by `1/2`.
pub fn witness_tilde_jm() -> JmWitness {
    let (x, z) = (pauli_x(), pauli_z());
    let one = id(2);
    let sign = |b: usize| -> f64 {
        match b {
            0 => 1.0,
            1 => -1.0,
            _ => 0.0,
        }
    };
    let click = |b: usize| -> f64 { if b == 2 { 0.0 } else { 1.0 } };
    let mut targets = Vec::new();
    for b0 in 0..3usize {
        for b1 in 0..3usize {
            let m = &(&scale(&z, sign(b0)) + &scale(&x, sign(b1)))
                - &scale(&one, (click(b0) + click(b1)) / 2.0);
            targets.push((vec![b0, b1], m));
        }
    }
    JmWitness { targets, cap: scale(&id(2), 0.5), scale: 0.5 }
}
