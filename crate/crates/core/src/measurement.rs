//! POVMs, process POVMs and outcome probabilities.
//!
//! A process POVM (PPOVM) measuring a qubit channel with a one-qubit ancilla
//! is a family `{S_m}` of positive 4×4 operators on `reference ⊗ output`
//! with `Σ_m S_m = ρᵀ ⊗ I`, where `ρ` is the ancilla marginal of the probe
//! state and the transpose is taken in the computational basis. The outcome
//! probabilities are `p_m(Ψ) = tr[S_m J_Ψ]`.
//!
//! Worked example: probing with `|ψ₊⟩ = (|00⟩ + |11⟩)/√2` and measuring the
//! projector `P₊ = |ψ₊⟩⟨ψ₊|` gives `S = P₊/2`, whose entries are `1/4` at
//! indices `(0,0), (0,3), (3,0), (3,3)` and zero elsewhere.

use nalgebra::{Matrix2, Matrix4};

use crate::channels::{apply_on_second, QubitChannel};
use crate::error::{Error, Result};
use crate::qubit::{
    c, hermitian_eigen2, hermitian_eigen4, hermiticity_defect, kron, max_abs, partial_trace_op,
    Mat2, Mat4, QubitState, Subsystem, TwoQubitState, VALIDATION_TOL,
};

/// Square complex matrices usable as POVM effects.
pub trait Effect: Clone + std::fmt::Debug {
    fn identity() -> Self;
    fn sum(effects: &[Self]) -> Self;
    fn hermiticity_defect(&self) -> f64;
    /// Smallest and largest eigenvalue of the Hermitian part.
    fn eigen_range(&self) -> (f64, f64);
    fn max_abs_diff(&self, other: &Self) -> f64;
}

impl Effect for Mat2 {
    fn identity() -> Self {
        Matrix2::identity()
    }
    fn sum(effects: &[Self]) -> Self {
        effects.iter().fold(Matrix2::zeros(), |acc, e| acc + e)
    }
    fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(self)
    }
    fn eigen_range(&self) -> (f64, f64) {
        let vals = hermitian_eigen2(self).0;
        (vals[0], vals[1])
    }
    fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs(&(self - other))
    }
}

impl Effect for Mat4 {
    fn identity() -> Self {
        Matrix4::identity()
    }
    fn sum(effects: &[Self]) -> Self {
        effects.iter().fold(Matrix4::zeros(), |acc, e| acc + e)
    }
    fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(self)
    }
    fn eigen_range(&self) -> (f64, f64) {
        let vals = hermitian_eigen4(self).0;
        (vals[0], vals[3])
    }
    fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs(&(self - other))
    }
}

/// A POVM on one qubit (`Povm<Mat2>`) or two qubits (`Povm<Mat4>`).
#[derive(Clone, Debug, PartialEq)]
pub struct Povm<M> {
    effects: Vec<M>,
}

impl<M: Effect> Povm<M> {
    pub fn new(effects: Vec<M>) -> Result<Self> {
        if effects.is_empty() {
            return Err(Error::validation("POVM has no effects"));
        }
        for (k, e) in effects.iter().enumerate() {
            if e.hermiticity_defect() > VALIDATION_TOL {
                return Err(Error::validation(format!("effect {k} is not Hermitian")));
            }
            let (lo, hi) = e.eigen_range();
            if lo < -VALIDATION_TOL || hi > 1.0 + VALIDATION_TOL {
                return Err(Error::validation(format!("effect {k} has eigenvalues outside [0, 1]")));
            }
        }
        let defect = M::sum(&effects).max_abs_diff(&M::identity());
        if defect > VALIDATION_TOL {
            return Err(Error::validation(format!("effects do not sum to the identity (defect {defect:.3e})")));
        }
        Ok(Povm { effects })
    }

    pub fn effects(&self) -> &[M] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }
}

impl Povm<Mat2> {
    /// Projective measurement in the orthonormal basis `{|b₀⟩, |b₁⟩}`.
    pub fn projective(b0: &crate::qubit::PureState, b1: &crate::qubit::PureState) -> Result<Self> {
        Povm::new(vec![b0.projector(), b1.projector()])
    }
}

/// Born rule `tr[E ρ]` for a qubit.
pub fn state_probability(effect: &Mat2, rho: &QubitState) -> f64 {
    (effect * rho.matrix()).trace().re
}

/// Born rule `tr[E ρ]` for two qubits.
pub fn two_qubit_state_probability(effect: &Mat4, rho: &TwoQubitState) -> f64 {
    rho.expectation(effect)
}

/// A single process effect `S` with `0 ⪯ S ⪯ ρ₀ᵀ ⊗ I`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProcessEffect {
    op: Mat4,
    marginal: QubitState,
}

/// Largest eigenvalue of `M^{+½} S M^{+½}` with `M = ρᵀ ⊗ I`, after checking
/// that `S` vanishes off the support of `M`.
fn conditional_max_eigenvalue(s: &Mat4, marginal: &QubitState) -> Result<f64> {
    let (vals, vecs) = hermitian_eigen2(&marginal.transpose().matrix().clone_owned());
    let mut inv_sqrt = Mat2::zeros();
    let mut kernel = Mat2::zeros();
    for k in 0..2 {
        let col = vecs.column(k);
        let proj = col * col.adjoint();
        if vals[k] > VALIDATION_TOL {
            inv_sqrt += proj * c(1.0 / vals[k].sqrt());
        } else {
            kernel += proj;
        }
    }
    let kernel_part = kron(&kernel, &Mat2::identity());
    if max_abs(&(kernel_part * s * kernel_part)) > VALIDATION_TOL {
        return Err(Error::validation("process effect has weight outside the ancilla support"));
    }
    let m = kron(&inv_sqrt, &Mat2::identity());
    Ok(hermitian_eigen4(&(m * s * m)).0[3])
}

impl ProcessEffect {
    /// When `marginal` is omitted it is taken as `ρ₀ᵀ = tr₂S / tr S`.
    pub fn new(op: Mat4, marginal: Option<QubitState>) -> Result<Self> {
        if hermiticity_defect(&op) > VALIDATION_TOL {
            return Err(Error::validation("process effect is not Hermitian"));
        }
        let op = (op + op.adjoint()).scale(0.5);
        if hermitian_eigen4(&op).0[0] < -VALIDATION_TOL {
            return Err(Error::validation("process effect is not positive semidefinite"));
        }
        let marginal = match marginal {
            Some(m) => m,
            None => {
                let weight = op.trace().re;
                if weight <= 1e-12 {
                    return Err(Error::validation("cannot infer the ancilla marginal of a zero effect"));
                }
                let reduced = partial_trace_op(&op, Subsystem::Second) / c(weight);
                QubitState::new(reduced.transpose())?
            }
        };
        let top = conditional_max_eigenvalue(&op, &marginal)?;
        if top > 1.0 + VALIDATION_TOL {
            return Err(Error::validation(format!(
                "process effect exceeds the PPOVM normalization (conditional eigenvalue {top:.6})"
            )));
        }
        Ok(ProcessEffect { op, marginal })
    }

    pub fn operator(&self) -> &Mat4 {
        &self.op
    }

    pub fn marginal(&self) -> &QubitState {
        &self.marginal
    }

    pub fn weight(&self) -> f64 {
        self.op.trace().re
    }
}

/// `p(Ψ) = tr[S J_Ψ]`.
pub fn channel_probability(effect: &ProcessEffect, channel: &QubitChannel) -> f64 {
    channel_probability_op(effect.operator(), channel)
}

pub(crate) fn channel_probability_op(s: &Mat4, channel: &QubitChannel) -> f64 {
    (s * channel.choi()).trace().re
}

/// `tr[E (id ⊗ Ψ) ρ]`: prepare `ρ`, send its second qubit through `Ψ`, measure `E`.
pub fn two_step_probability(effect: &Mat4, input: &TwoQubitState, channel: &QubitChannel) -> f64 {
    (effect * apply_on_second(channel, input.matrix())).trace().re
}

/// `(τ_S, tr S)` with `τ_S = S / tr S`.
pub fn normalize_effect(effect: &ProcessEffect) -> Result<(TwoQubitState, f64)> {
    let weight = effect.weight();
    if weight <= 1e-12 {
        return Err(Error::validation("a nonzero process effect is required"));
    }
    let tau = TwoQubitState::new(effect.operator() / c(weight))?;
    Ok((tau, weight))
}

/// A process POVM with a one-qubit ancilla.
#[derive(Clone, Debug, PartialEq)]
pub struct Ppovm {
    effects: Vec<Mat4>,
    labels: Vec<String>,
    ancilla_marginal: QubitState,
}

impl Ppovm {
    pub fn new(labels: Vec<String>, effects: Vec<Mat4>, ancilla_marginal: QubitState) -> Result<Self> {
        if effects.is_empty() {
            return Err(Error::validation("PPOVM has no effects"));
        }
        if labels.len() != effects.len() {
            return Err(Error::validation("need one label per PPOVM effect"));
        }
        let mut clean = Vec::with_capacity(effects.len());
        for (label, s) in labels.iter().zip(&effects) {
            if hermiticity_defect(s) > VALIDATION_TOL {
                return Err(Error::validation(format!("effect {label:?} is not Hermitian")));
            }
            let h = (s + s.adjoint()).scale(0.5);
            if hermitian_eigen4(&h).0[0] < -VALIDATION_TOL {
                return Err(Error::validation(format!("effect {label:?} is not positive semidefinite")));
            }
            clean.push(h);
        }
        let target = kron(&ancilla_marginal.transpose().matrix().clone_owned(), &Mat2::identity());
        let defect = max_abs(&(Effect::sum(&clean) - target));
        if defect > VALIDATION_TOL {
            return Err(Error::validation(format!(
                "effects do not sum to ρᵀ ⊗ I (defect {defect:.3e})"
            )));
        }
        Ok(Ppovm { effects: clean, labels, ancilla_marginal })
    }

    pub fn effects(&self) -> &[Mat4] {
        &self.effects
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn ancilla_marginal(&self) -> &QubitState {
        &self.ancilla_marginal
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn effect(&self, index: usize) -> ProcessEffect {
        ProcessEffect { op: self.effects[index], marginal: self.ancilla_marginal }
    }

    pub fn effect_by_label(&self, label: &str) -> Option<ProcessEffect> {
        self.labels.iter().position(|l| l == label).map(|k| self.effect(k))
    }

    pub fn probabilities(&self, channel: &QubitChannel) -> Vec<f64> {
        self.effects.iter().map(|s| channel_probability_op(s, channel)).collect()
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|k| k.to_string()).collect()
}

/// `{ρᵀ ⊗ E_m}`: probe with `ρ`, measure the output with `{E_m}`.
pub fn ancilla_free_ppovm(rho: &QubitState, povm: &Povm<Mat2>) -> Ppovm {
    let rt = rho.transpose().matrix().clone_owned();
    let effects: Vec<Mat4> = povm.effects().iter().map(|e| kron(&rt, e)).collect();
    Ppovm {
        labels: default_labels(effects.len()),
        effects,
        ancilla_marginal: *rho,
    }
}

/// `{E_m / 2}`: probe with the maximally entangled state, measure `{E_m}` jointly.
pub fn entangled_ppovm(povm: &Povm<Mat4>) -> Ppovm {
    let effects: Vec<Mat4> = povm.effects().iter().map(|e| e.scale(0.5)).collect();
    Ppovm {
        labels: default_labels(effects.len()),
        effects,
        ancilla_marginal: QubitState::maximally_mixed(),
    }
}

/// Combine several PPOVMs, each chosen with the given probability.
pub fn mixed_ppovm(parts: &[(f64, Ppovm)]) -> Result<Ppovm> {
    if parts.is_empty() {
        return Err(Error::validation("no PPOVMs to mix"));
    }
    let total: f64 = parts.iter().map(|(p, _)| p).sum();
    if parts.iter().any(|(p, _)| *p < 0.0) || (total - 1.0).abs() > VALIDATION_TOL {
        return Err(Error::validation("mixing weights must be a probability distribution"));
    }
    let mut labels = Vec::new();
    let mut effects = Vec::new();
    let mut marginal = Mat2::zeros();
    for (k, (p, ppovm)) in parts.iter().enumerate() {
        marginal += ppovm.ancilla_marginal().matrix() * c(*p);
        for (label, s) in ppovm.labels().iter().zip(ppovm.effects()) {
            labels.push(format!("{k}:{label}"));
            effects.push(s * c(*p));
        }
    }
    Ppovm::new(labels, effects, QubitState::new(marginal)?)
}
