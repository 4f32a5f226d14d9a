//! Closed-form upper bounds `C̃(τ, 𝒳) ≥ max_{Ψ ∈ 𝒳} tr[τ J_Ψ]`.
//!
//! With `b = b(tr₁ τ)` the Bloch vector of the output-side marginal and
//! `N = N(τ)` the correlation matrix:
//!
//! | class | bound                        | exact |
//! |-------|------------------------------|-------|
//! | D     | `½(1 + ‖b‖)`                 | yes   |
//! | R     | `½(1 + ‖N‖_KF^±)`            | yes   |
//! | UE    | `½(1 + ‖N‖)`                 | no    |
//! | GE    | `½(1 + √(‖b‖² + ‖N‖²))`      | no    |
//! | C     | `½(1 + √(‖b‖² + ‖N‖²_KF))`   | when `b = 0` |
//!
//! `‖N‖_KF^± = s₁ + s₂ − sgn(det N)·s₃` is the Ky Fan norm with the smallest
//! singular value signed by orientation. It equals `‖N‖_KF` when `det N ≤ 0`
//! and falls short of it by `2s₃` otherwise. With `b = 0` the C bound takes
//! the oriented value.
//!
//! All formulas are total, so rank-deficient and product `τ` need no
//! special handling.

use crate::channels::ChannelClass;
use crate::error::{Error, Result};
use crate::measurement::{normalize_effect, ProcessEffect};
use crate::qubit::TwoQubitState;

/// `‖b(τ₂)‖` at or below this counts as a maximally mixed marginal.
pub const MIXED_MARGINAL_TOL: f64 = 1e-9;
/// Slack allowed in the ordering between class bounds.
pub const DOMINANCE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub class: ChannelClass,
    pub tau: TwoQubitState,
    pub value: f64,
    /// `true` when `value` is the maximum itself rather than an upper estimate.
    pub exact: bool,
}

fn report(class: ChannelClass, tau: &TwoQubitState, value: f64, exact: bool) -> BoundReport {
    BoundReport { class, tau: *tau, value, exact }
}

fn marginal_norm(tau: &TwoQubitState) -> f64 {
    tau.second_marginal_bloch().norm()
}

pub fn bound_depolarizing(tau: &TwoQubitState) -> BoundReport {
    report(ChannelClass::Depolarizing, tau, 0.5 * (1.0 + marginal_norm(tau)), true)
}

pub fn bound_unital(tau: &TwoQubitState) -> BoundReport {
    let kf = tau.correlation_matrix().oriented_kyfan();
    report(ChannelClass::RandomUnitary, tau, 0.5 * (1.0 + kf), true)
}

/// Fully entangled fraction `max_U ⟨ψ₊|(I⊗U†) τ (I⊗U)|ψ₊⟩ = ¼(1 + ‖N(τ)‖_KF^±)`.
pub fn fef(tau: &TwoQubitState) -> f64 {
    0.25 * (1.0 + tau.correlation_matrix().oriented_kyfan())
}

pub fn bound_unital_eb(tau: &TwoQubitState) -> BoundReport {
    let s = tau.correlation_matrix().spectral_norm();
    report(ChannelClass::UnitalEntanglementBreaking, tau, 0.5 * (1.0 + s), false)
}

pub fn bound_general_eb(tau: &TwoQubitState) -> BoundReport {
    let b = marginal_norm(tau);
    let s = tau.correlation_matrix().spectral_norm();
    report(ChannelClass::EntanglementBreaking, tau, 0.5 * (1.0 + b.hypot(s)), false)
}

/// Exact, and equal to [`bound_unital`], when the output marginal is `I/2`.
pub fn bound_all_channels(tau: &TwoQubitState) -> BoundReport {
    let b = marginal_norm(tau);
    let n = tau.correlation_matrix();
    if b <= MIXED_MARGINAL_TOL {
        report(ChannelClass::General, tau, 0.5 * (1.0 + n.oriented_kyfan()), true)
    } else {
        report(ChannelClass::General, tau, 0.5 * (1.0 + b.hypot(n.kyfan_norm())), false)
    }
}

pub fn bound_for(class: ChannelClass, tau: &TwoQubitState) -> BoundReport {
    match class {
        ChannelClass::Depolarizing => bound_depolarizing(tau),
        ChannelClass::RandomUnitary => bound_unital(tau),
        ChannelClass::UnitalEntanglementBreaking => bound_unital_eb(tau),
        ChannelClass::EntanglementBreaking => bound_general_eb(tau),
        ChannelClass::General => bound_all_channels(tau),
    }
}

/// Bound on `tr[S J_Ψ]` for a process effect: `(tr S) · C̃(S / tr S, 𝒳)`.
pub fn bound_probability(effect: &ProcessEffect, class: ChannelClass) -> Result<f64> {
    let (tau, weight) = normalize_effect(effect)?;
    Ok(weight * bound_for(class, &tau).value)
}

/// All five bounds for one `τ`, indexed in [`ChannelClass::ALL`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct DominanceReport {
    pub reports: [BoundReport; 5],
}

impl DominanceReport {
    pub fn value(&self, class: ChannelClass) -> f64 {
        self.reports.iter().find(|r| r.class == class).map(|r| r.value).expect("every class present")
    }

    pub fn values(&self) -> [f64; 5] {
        std::array::from_fn(|k| self.reports[k].value)
    }
}

/// Evaluate all five bounds and check that they respect the class inclusions.
pub fn bound_dominance_check(tau: &TwoQubitState) -> Result<DominanceReport> {
    use ChannelClass::*;
    let out = DominanceReport { reports: ChannelClass::ALL.map(|class| bound_for(class, tau)) };
    let chain = [
        (UnitalEntanglementBreaking, RandomUnitary),
        (RandomUnitary, General),
        (UnitalEntanglementBreaking, EntanglementBreaking),
        (EntanglementBreaking, General),
        (Depolarizing, EntanglementBreaking),
    ];
    for (small, large) in chain {
        let (a, b) = (out.value(small), out.value(large));
        if a > b + DOMINANCE_TOL {
            return Err(Error::validation(format!(
                "bound ordering violated: C̃({small}) = {a} > C̃({large}) = {b}"
            )));
        }
    }
    Ok(out)
}
