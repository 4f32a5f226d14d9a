//! Random states, unitaries and channels for sweeps and property tests.

use nalgebra::{Vector4, SMatrix};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::channels::{ChannelClass, GeneralizedExtremePoint, QubitChannel};
use crate::qubit::{c, Mat2, Mat4, PureState, QubitState, TwoQubitState};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Probability vector drawn uniformly from the simplex.
pub fn simplex_weights<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

/// Haar-random 2×2 unitary (Gram–Schmidt on a Ginibre matrix).
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let a = pure_state(rng);
    let b = pure_state(rng);
    let first = *a.vector();
    let proj = first.dotc(b.vector());
    let second = b.vector() - first * proj;
    let second = second.unscale(second.norm());
    Mat2::from_columns(&[first, second])
}

/// Haar-random pure qubit state.
pub fn pure_state<R: Rng + ?Sized>(rng: &mut R) -> PureState {
    loop {
        if let Ok(s) = PureState::normalized(gaussian(rng), gaussian(rng)) {
            return s;
        }
    }
}

/// Hilbert–Schmidt random qubit state.
pub fn qubit_state<R: Rng + ?Sized>(rng: &mut R) -> QubitState {
    let g = Mat2::from_fn(|_, _| gaussian(rng));
    let m = g * g.adjoint();
    let tr = m.trace().re;
    QubitState::new(m.unscale(tr)).expect("Wishart matrix is positive")
}

pub fn two_qubit_pure<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitState {
    let v = Vector4::from_fn(|_, _| gaussian(rng));
    TwoQubitState::pure(v.unscale(v.norm())).expect("normalized")
}

/// Mixture of one to four random pure two-qubit states with simplex weights.
pub fn two_qubit_state<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitState {
    let k = rng.random_range(1..=4);
    let weights = simplex_weights(rng, k);
    let parts: Vec<(f64, TwoQubitState)> = weights.into_iter().map(|p| (p, two_qubit_pure(rng))).collect();
    TwoQubitState::mixture(&parts).expect("convex combination of states")
}

/// Random two-qubit state whose second marginal is exactly `I/2`: a mixture
/// of locally rotated maximally entangled states and products `ρ ⊗ I/2`.
pub fn two_qubit_state_mixed_output<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitState {
    let k = rng.random_range(1..=3);
    let weights = simplex_weights(rng, k);
    let parts: Vec<(f64, TwoQubitState)> = weights
        .into_iter()
        .map(|p| {
            let part = if rng.random::<f64>() < 0.8 {
                TwoQubitState::maximally_entangled().local_conjugate(&haar_unitary(rng), &haar_unitary(rng))
            } else {
                TwoQubitState::product(&qubit_state(rng), &QubitState::maximally_mixed())
            };
            (p, part)
        })
        .collect();
    TwoQubitState::mixture(&parts).expect("convex combination of states")
}

/// A random channel from `class`.
pub fn channel_in_class<R: Rng + ?Sized>(rng: &mut R, class: ChannelClass) -> QubitChannel {
    let channel = match class {
        ChannelClass::Depolarizing => {
            let rho = if rng.random::<f64>() < 0.3 { pure_state(rng).density() } else { qubit_state(rng) };
            QubitChannel::depolarizing(&rho)
        }
        ChannelClass::RandomUnitary => {
            let k = rng.random_range(1..=4);
            let weights = simplex_weights(rng, k);
            let unitaries: Vec<Mat2> = (0..k).map(|_| haar_unitary(rng)).collect();
            QubitChannel::random_unitary(&weights, &unitaries).expect("valid mixture")
        }
        ChannelClass::UnitalEntanglementBreaking => {
            let radius = if rng.random::<f64>() < 0.5 { 1.0 } else { rng.random::<f64>() };
            let w = simplex_weights(rng, 3);
            let lambda: [f64; 3] = std::array::from_fn(|i| {
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                sign * radius * w[i]
            });
            QubitChannel::unital_entanglement_breaking(&haar_unitary(rng), lambda, &haar_unitary(rng))
                .expect("Σ|λ| ≤ 1")
        }
        ChannelClass::EntanglementBreaking => {
            let k = rng.random_range(1..=3);
            let weights = simplex_weights(rng, k);
            let mut choi = Mat4::zeros();
            for p in weights {
                let basis = pure_state(rng);
                let ch = QubitChannel::extreme_cq(&pure_state(rng), &pure_state(rng), [&basis, &basis.orthogonal()])
                    .expect("orthonormal basis");
                choi += ch.choi() * c(p);
            }
            QubitChannel::from_choi(choi).expect("mixture of channels")
        }
        ChannelClass::General => {
            if rng.random::<f64>() < 0.5 {
                stinespring_channel(rng)
            } else {
                let tau = std::f64::consts::TAU;
                let g = GeneralizedExtremePoint::new(
                    haar_unitary(rng),
                    haar_unitary(rng),
                    rng.random::<f64>() * tau,
                    rng.random::<f64>() * tau,
                )
                .expect("unitary factors");
                QubitChannel::generalized_extreme(&g).expect("extreme point")
            }
        }
    };
    channel.with_class(class)
}

/// Channel with four Kraus operators cut from a random 8×2 isometry.
fn stinespring_channel<R: Rng + ?Sized>(rng: &mut R) -> QubitChannel {
    let g = SMatrix::<Complex64, 8, 2>::from_fn(|_, _| gaussian(rng));
    let a = g.column(0).into_owned();
    let a = a.unscale(a.norm());
    let b = g.column(1) - a * a.dotc(&g.column(1));
    let b = b.unscale(b.norm());
    let ops = (0..4)
        .map(|k| Mat2::from_fn(|r, col| if col == 0 { a[2 * k + r] } else { b[2 * k + r] }))
        .collect();
    QubitChannel::from_kraus(ops).expect("isometry gives a channel")
}
