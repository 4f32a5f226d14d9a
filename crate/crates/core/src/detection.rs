//! Certifying that a Werner channel `Ψ_w = w·id + (1 − w)·Ψ_{I/2}` is not
//! entanglement breaking.
//!
//! A measured success probability above `(tr S)·C̃(τ_S, UE)` rules out every
//! unital entanglement-breaking channel. Two schemes are provided:
//!
//! - entangled: probe with `|ψ₊⟩`, project onto `P₊`. Effect `P₊/2`,
//!   probability `(1 + 3w)/4`, threshold `1/2`.
//! - ancilla-free: pick `ρ ∈ {|0⟩, |+⟩, |+i⟩}` uniformly, send it, test for
//!   `ρ`. Effect `⅓ Σ ρᵀ ⊗ ρ`, probability `(1 + w)/2`, threshold `2/3`.
//!
//! Both flag exactly the channels with `w > 1/3`. The test is one-sided: an
//! inconclusive verdict does not certify entanglement breaking.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;

use crate::bounds::bound_probability;
use crate::channels::{ChannelClass, QubitChannel};
use crate::error::{Error, Result};
use crate::measurement::{
    ancilla_free_ppovm, channel_probability, entangled_ppovm, mixed_ppovm, Povm, Ppovm, ProcessEffect,
};
use crate::qubit::{unnormalized_max_entangled, Mat4, PureState};

/// Margin by which the probability must exceed the bound.
pub const DETECTION_MARGIN: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WernerChannel {
    w: f64,
}

impl WernerChannel {
    pub fn new(w: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::validation(format!("Werner parameter {w} outside [0, 1]")));
        }
        Ok(WernerChannel { w })
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn channel(&self) -> QubitChannel {
        QubitChannel::werner(self.w).expect("w validated")
    }

    /// Choi eigenvalues, ascending: `(1 − w)/2` three times, then `(1 + 3w)/2`.
    pub fn choi_eigenvalues(&self) -> [f64; 4] {
        let low = 0.5 * (1.0 - self.w);
        [low, low, low, 0.5 * (1.0 + 3.0 * self.w)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Entangled,
    AncillaFree,
}

impl Scheme {
    pub const ALL: [Scheme; 2] = [Scheme::Entangled, Scheme::AncillaFree];
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::Entangled => "entangled",
            Scheme::AncillaFree => "ancilla-free",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectionVerdict {
    NotEntanglementBreaking,
    Inconclusive,
}

impl std::fmt::Display for DetectionVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DetectionVerdict::NotEntanglementBreaking => "not-eb",
            DetectionVerdict::Inconclusive => "inconclusive",
        })
    }
}

/// `(1 + 3w)/4`.
pub fn prob_entangled_input(w: f64) -> Result<f64> {
    WernerChannel::new(w)?;
    Ok(0.25 * (1.0 + 3.0 * w))
}

/// `(1 + w)/2`.
pub fn prob_ancilla_free(w: f64) -> Result<f64> {
    WernerChannel::new(w)?;
    Ok(0.5 * (1.0 + w))
}

/// `{P₊/2, (I − P₊)/2}`.
pub fn entangled_scheme() -> Ppovm {
    let p_plus = unnormalized_max_entangled().scale(0.5);
    let povm = Povm::new(vec![p_plus, Mat4::identity() - p_plus]).expect("projective measurement");
    entangled_ppovm(&povm)
}

/// Probe states `|0⟩, |+⟩, |+i⟩`.
pub fn ancilla_free_probes() -> [PureState; 3] {
    [PureState::zero(), PureState::plus(), PureState::plus_y()]
}

/// The three ancilla-free PPOVMs `{ρᵀ ⊗ ρ, ρᵀ ⊗ (I − ρ)}`.
pub fn ancilla_free_schemes() -> [Ppovm; 3] {
    ancilla_free_probes().map(|s| {
        let povm = Povm::projective(&s, &s.orthogonal()).expect("orthonormal basis");
        ancilla_free_ppovm(&s.density(), &povm)
    })
}

/// The three ancilla-free PPOVMs, each used with probability 1/3.
pub fn ancilla_free_scheme() -> Ppovm {
    let parts: Vec<(f64, Ppovm)> = ancilla_free_schemes().into_iter().map(|p| (1.0 / 3.0, p)).collect();
    mixed_ppovm(&parts).expect("uniform mixture")
}

/// The coarse-grained success effect of a scheme.
pub fn success_effect(scheme: Scheme) -> ProcessEffect {
    match scheme {
        Scheme::Entangled => entangled_scheme().effect(0),
        Scheme::AncillaFree => {
            let ppovm = ancilla_free_scheme();
            let op = ppovm
                .labels()
                .iter()
                .zip(ppovm.effects())
                .filter(|(label, _)| label.ends_with(":0"))
                .fold(Mat4::zeros(), |acc, (_, s)| acc + s);
            ProcessEffect::new(op, Some(*ppovm.ancilla_marginal())).expect("sub-normalized effect")
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Detection {
    pub scheme: Scheme,
    pub w: f64,
    pub probability: f64,
    /// Largest probability any unital entanglement-breaking channel can give.
    pub bound: f64,
    pub verdict: DetectionVerdict,
}

fn verdict(probability: f64, bound: f64) -> DetectionVerdict {
    if probability > bound + DETECTION_MARGIN {
        DetectionVerdict::NotEntanglementBreaking
    } else {
        DetectionVerdict::Inconclusive
    }
}

pub fn detect_not_eb(w: f64, scheme: Scheme) -> Result<Detection> {
    let channel = WernerChannel::new(w)?.channel();
    let effect = success_effect(scheme);
    let probability = channel_probability(&effect, &channel);
    let bound = bound_probability(&effect, ChannelClass::UnitalEntanglementBreaking)?;
    Ok(Detection { scheme, w, probability, bound, verdict: verdict(probability, bound) })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub w: f64,
    pub p_entangled: f64,
    pub p_ancilla_free: f64,
    pub bound_entangled: f64,
    pub bound_ancilla_free: f64,
    pub verdict_entangled: DetectionVerdict,
    pub verdict_ancilla_free: DetectionVerdict,
}

/// `n` evenly spaced points covering `[0, 1]`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|k| k as f64 / (n - 1) as f64).collect(),
    }
}

pub fn threshold_sweep(grid: &[f64]) -> Result<Vec<SweepRow>> {
    grid.iter()
        .map(|&w| {
            let e = detect_not_eb(w, Scheme::Entangled)?;
            let a = detect_not_eb(w, Scheme::AncillaFree)?;
            Ok(SweepRow {
                w,
                p_entangled: e.probability,
                p_ancilla_free: a.probability,
                bound_entangled: e.bound,
                bound_ancilla_free: a.bound,
                verdict_entangled: e.verdict,
                verdict_ancilla_free: a.verdict,
            })
        })
        .collect()
}

/// First grid point flagged as not entanglement breaking.
pub fn detected_threshold(rows: &[SweepRow], scheme: Scheme) -> Option<f64> {
    rows.iter()
        .find(|r| {
            let v = match scheme {
                Scheme::Entangled => r.verdict_entangled,
                Scheme::AncillaFree => r.verdict_ancilla_free,
            };
            v == DetectionVerdict::NotEntanglementBreaking
        })
        .map(|r| r.w)
}

pub const SWEEP_CSV_HEADER: &str =
    "w,p_entangled,p_ancilla_free,bound_entangled,bound_ancilla_free,verdict_entangled,verdict_ancilla_free";

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{}\n",
            r.w, r.p_entangled, r.p_ancilla_free, r.bound_entangled, r.bound_ancilla_free,
            r.verdict_entangled, r.verdict_ancilla_free
        ));
    }
    out
}

/// Wilson score interval for `successes` out of `shots` at normal quantile `z`.
pub fn wilson_interval(successes: u64, shots: u64, z: f64) -> (f64, f64) {
    if shots == 0 {
        return (0.0, 1.0);
    }
    let n = shots as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SampledDetection {
    pub scheme: Scheme,
    pub w: f64,
    pub shots: u64,
    pub successes: u64,
    pub estimate: f64,
    pub interval: (f64, f64),
    pub bound: f64,
    /// Not entanglement breaking only when the whole interval lies above the bound.
    pub verdict: DetectionVerdict,
}

/// Simulate `shots` runs of a scheme and decide from the Wilson interval.
pub fn sampled_detection(w: f64, scheme: Scheme, shots: u64, seed: u64, z: f64) -> Result<SampledDetection> {
    if shots == 0 {
        return Err(Error::validation("at least one shot is required"));
    }
    let exact = detect_not_eb(w, scheme)?;
    let p = exact.probability.clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let successes = Binomial::new(shots, p).expect("p in [0, 1]").sample(&mut rng);
    let interval = wilson_interval(successes, shots, z);
    Ok(SampledDetection {
        scheme,
        w,
        shots,
        successes,
        estimate: successes as f64 / shots as f64,
        interval,
        bound: exact.bound,
        verdict: verdict(interval.0, exact.bound),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::is_entanglement_breaking_unital;
    use crate::qubit::hermitian_eigen4;

    #[test]
    fn closed_form_probabilities() {
        assert_eq!(prob_entangled_input(1.0).unwrap(), 1.0);
        assert_eq!(prob_entangled_input(0.0).unwrap(), 0.25);
        assert!((prob_entangled_input(1.0 / 3.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(prob_ancilla_free(0.0).unwrap(), 0.5);
        assert_eq!(prob_ancilla_free(1.0).unwrap(), 1.0);
        assert!((prob_ancilla_free(1.0 / 3.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(prob_entangled_input(1.1).is_err());
    }

    #[test]
    fn measured_probabilities_match_closed_forms() {
        for k in 0..=20 {
            let w = k as f64 / 20.0;
            let e = detect_not_eb(w, Scheme::Entangled).unwrap();
            let a = detect_not_eb(w, Scheme::AncillaFree).unwrap();
            assert!((e.probability - prob_entangled_input(w).unwrap()).abs() < 1e-12);
            assert!((a.probability - prob_ancilla_free(w).unwrap()).abs() < 1e-12);
            assert!((e.bound - 0.5).abs() < 1e-12);
            assert!((a.bound - 2.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ancilla_free_correlation_matrix() {
        let effect = success_effect(Scheme::AncillaFree);
        assert!((effect.weight() - 1.0).abs() < 1e-15);
        let n = crate::measurement::normalize_effect(&effect).unwrap().0.correlation_matrix();
        let expected = nalgebra::Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, -1.0, 1.0)) / 3.0;
        assert!((n.matrix() - expected).abs().max() < 1e-15);
    }

    #[test]
    fn verdict_examples() {
        for scheme in Scheme::ALL {
            assert_eq!(detect_not_eb(0.5, scheme).unwrap().verdict, DetectionVerdict::NotEntanglementBreaking);
            assert_eq!(detect_not_eb(0.2, scheme).unwrap().verdict, DetectionVerdict::Inconclusive);
            assert_eq!(detect_not_eb(1.0 / 3.0, scheme).unwrap().verdict, DetectionVerdict::Inconclusive);
        }
        let ch = WernerChannel::new(0.2).unwrap().channel();
        assert!(is_entanglement_breaking_unital(&ch).unwrap());
        assert!(detect_not_eb(-0.1, Scheme::Entangled).is_err());
    }

    #[test]
    fn choi_spectrum() {
        let wc = WernerChannel::new(0.6).unwrap();
        let numeric = hermitian_eigen4(wc.channel().choi()).0;
        for (a, b) in numeric.iter().zip(wc.choi_eigenvalues()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn sweep_grids() {
        let rows = threshold_sweep(&uniform_grid(101)).unwrap();
        assert_eq!(detected_threshold(&rows, Scheme::Entangled), Some(0.34));
        assert_eq!(detected_threshold(&rows, Scheme::AncillaFree), Some(0.34));
        let rows = threshold_sweep(&[0.0, 1.0 / 3.0, 1.0]).unwrap();
        let flags: Vec<_> = rows.iter().map(|r| r.verdict_entangled).collect();
        use DetectionVerdict::*;
        assert_eq!(flags, vec![Inconclusive, Inconclusive, NotEntanglementBreaking]);
        assert!(threshold_sweep(&[]).unwrap().is_empty());
        let csv = sweep_csv(&rows);
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with(SWEEP_CSV_HEADER));
    }

    #[test]
    fn wilson_and_sampling() {
        let (lo, hi) = wilson_interval(50, 100, 1.96);
        assert!(lo < 0.5 && hi > 0.5 && (0.5 - lo - (hi - 0.5)).abs() < 1e-12);
        let a = sampled_detection(0.9, Scheme::Entangled, 10_000, 4, 3.0).unwrap();
        let b = sampled_detection(0.9, Scheme::Entangled, 10_000, 4, 3.0).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.verdict, DetectionVerdict::NotEntanglementBreaking);
        let c = sampled_detection(0.1, Scheme::AncillaFree, 10_000, 4, 3.0).unwrap();
        assert_eq!(c.verdict, DetectionVerdict::Inconclusive);
    }
}
