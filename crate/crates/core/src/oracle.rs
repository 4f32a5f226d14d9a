//! Numerical maximization of `tr[τ J_Ψ]` over a channel class.
//!
//! Each class is searched over the parameterization of its extreme points:
//!
//! - D: output Bloch vector `(r, θ, ϕ)`
//! - R: one rotation, ZYZ Euler angles (the maximum over random unitary
//!   channels is attained at a unitary)
//! - UE: two rotations and `λ` on the surface `Σ|λᵢ| = 1`
//! - GE: extreme classical-quantum channels (two output states and a
//!   measurement basis)
//! - C: generalized extreme points (two rotations and `(u₁, u₂)`)
//!
//! The objective is linear in the PTM: `tr[τ J_Ψ] = Σ_{μν} K_{μν} T_{μν}`
//! with `K_{μν} = ½ tr[τ (σ_νᵀ ⊗ σ_μ)]`.
//!
//! The search draws `n_starts` random parameter vectors, gives each one
//! round of coordinate-wise golden-section refinement, and then refines the
//! best `n_refine` of them until a round gains less than `tolerance`. Every
//! start has its own RNG stream, and ties are broken by the lowest start
//! index, so results do not depend on thread scheduling.

use std::f64::consts::TAU;

use nalgebra::{Matrix3, Matrix4, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::bound_for;
use crate::channels::{ChannelClass, GeneralizedExtremePoint, QubitChannel};
use crate::error::Result;
use crate::qubit::{kron, pauli, unitary_from_rotation, BlochVector, PureState, QubitState, TwoQubitState};
use crate::random;

/// One search coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coord {
    pub lo: f64,
    pub hi: f64,
    /// Periodic coordinates wrap instead of being clamped.
    pub periodic: bool,
}

impl Coord {
    pub const ANGLE: Coord = Coord { lo: 0.0, hi: TAU, periodic: true };
    pub const UNIT: Coord = Coord { lo: 0.0, hi: 1.0, periodic: false };

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        self.lo + (self.hi - self.lo) * rng.random::<f64>()
    }

    fn initial_radius(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    pub n_starts: usize,
    pub n_refine: usize,
    pub refine_iters: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { n_starts: 256, n_refine: 16, refine_iters: 400, seed: 0, tolerance: 1e-8 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub value: f64,
    pub params: Vec<f64>,
    pub start_index: usize,
    pub evaluations: u64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const LINE_TOL: f64 = 1e-10;
const MIN_RADIUS: f64 = 1e-6;

struct Counted<'a, F> {
    f: &'a F,
    evaluations: u64,
}

impl<F: Fn(&[f64]) -> f64> Counted<'_, F> {
    fn eval(&mut self, p: &[f64]) -> f64 {
        self.evaluations += 1;
        (self.f)(p)
    }
}

/// Golden-section maximization of `p[k]` over `[a, b]`; returns the best point seen.
fn line_search<F: Fn(&[f64]) -> f64>(f: &mut Counted<'_, F>, p: &mut [f64], k: usize, a: f64, b: f64) -> (f64, f64) {
    let at = |t: f64, p: &mut [f64], f: &mut Counted<'_, F>| {
        p[k] = t;
        f.eval(p)
    };
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = at(c, p, f);
    let mut fd = at(d, p, f);
    while b - a > LINE_TOL {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = at(c, p, f);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = at(d, p, f);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Round-robin coordinate refinement; returns the final value.
fn refine<F: Fn(&[f64]) -> f64>(
    f: &mut Counted<'_, F>,
    coords: &[Coord],
    p: &mut [f64],
    mut value: f64,
    rounds: usize,
    tolerance: f64,
) -> f64 {
    let mut radius: Vec<f64> = coords.iter().map(Coord::initial_radius).collect();
    for _ in 0..rounds {
        let before = value;
        for (k, coord) in coords.iter().enumerate() {
            let current = p[k];
            let (mut a, mut b) = (current - radius[k], current + radius[k]);
            if !coord.periodic {
                a = a.max(coord.lo);
                b = b.min(coord.hi);
            }
            let (t, v) = line_search(f, p, k, a, b);
            if v > value {
                p[k] = if coord.periodic { t.rem_euclid(coord.hi - coord.lo) + coord.lo } else { t };
                value = v;
                radius[k] = (4.0 * (t - current).abs()).clamp(MIN_RADIUS, coord.initial_radius());
            } else {
                p[k] = current;
                radius[k] = (0.5 * radius[k]).max(MIN_RADIUS);
            }
        }
        if value - before < tolerance {
            break;
        }
    }
    value
}

fn better(a: &SearchResult, b: &SearchResult) -> bool {
    a.value > b.value || (a.value == b.value && a.start_index < b.start_index)
}

/// Multistart maximization of `f` over the box described by `coords`.
pub fn multistart_maximize<F>(f: F, coords: &[Coord], config: &SearchConfig) -> SearchResult
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let screened: Vec<SearchResult> = (0..config.n_starts.max(1))
        .into_par_iter()
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(index as u64);
            let mut params: Vec<f64> = coords.iter().map(|c| c.sample(&mut rng)).collect();
            let mut counted = Counted { f: &f, evaluations: 0 };
            let start = counted.eval(&params);
            let value = refine(&mut counted, coords, &mut params, start, 1, config.tolerance);
            SearchResult { value, params, start_index: index, evaluations: counted.evaluations }
        })
        .collect();
    let screening_evals: u64 = screened.iter().map(|r| r.evaluations).sum();

    let mut order: Vec<&SearchResult> = screened.iter().collect();
    order.sort_by(|a, b| b.value.total_cmp(&a.value).then(a.start_index.cmp(&b.start_index)));
    order.truncate(config.n_refine.max(1));

    let refined: Vec<SearchResult> = order
        .into_par_iter()
        .map(|r| {
            let mut params = r.params.clone();
            let mut counted = Counted { f: &f, evaluations: 0 };
            let value = refine(&mut counted, coords, &mut params, r.value, config.refine_iters, config.tolerance);
            SearchResult { value, params, start_index: r.start_index, evaluations: counted.evaluations }
        })
        .collect();
    let refine_evals: u64 = refined.iter().map(|r| r.evaluations).sum();

    let mut best = refined.into_iter().reduce(|a, b| if better(&b, &a) { b } else { a }).expect("at least one start");
    best.evaluations = screening_evals + refine_evals;
    best
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    pub class: ChannelClass,
    pub n_starts: usize,
    /// Number of screened starts that receive full refinement.
    pub n_refine: usize,
    pub refine_iters: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl OracleConfig {
    pub fn new(class: ChannelClass) -> Self {
        let s = SearchConfig::default();
        OracleConfig {
            class,
            n_starts: s.n_starts,
            n_refine: s.n_refine,
            refine_iters: s.refine_iters,
            seed: s.seed,
            tolerance: s.tolerance,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn search(&self) -> SearchConfig {
        SearchConfig {
            n_starts: self.n_starts,
            n_refine: self.n_refine,
            refine_iters: self.refine_iters,
            seed: self.seed,
            tolerance: self.tolerance,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub best_value: f64,
    pub witness: QubitChannel,
    pub evaluations: u64,
}

/// `K_{μν} = ½ tr[τ (σ_νᵀ ⊗ σ_μ)]`.
pub fn objective_weights(tau: &TwoQubitState) -> Matrix4<f64> {
    Matrix4::from_fn(|mu, nu| 0.5 * tau.expectation(&kron(&pauli(nu).transpose(), &pauli(mu))))
}

fn rot_z(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

fn rot_y(b: f64) -> Matrix3<f64> {
    let (s, c) = b.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

fn rotation(p: &[f64]) -> Matrix3<f64> {
    rot_z(p[0]) * rot_y(p[1]) * rot_z(p[2])
}

fn sphere(theta: f64, phi: f64) -> Vector3<f64> {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Vector3::new(st * cp, st * sp, ct)
}

fn l1_direction(theta: f64, phi: f64) -> [f64; 3] {
    let n = sphere(theta, phi);
    let l1 = n.abs().sum();
    [n[0] / l1, n[1] / l1, n[2] / l1]
}

fn embed(r: &Matrix3<f64>) -> Matrix4<f64> {
    let mut t = Matrix4::zeros();
    t[(0, 0)] = 1.0;
    t.fixed_view_mut::<3, 3>(1, 1).copy_from(r);
    t
}

fn coordinates(class: ChannelClass) -> Vec<Coord> {
    let a = Coord::ANGLE;
    match class {
        ChannelClass::Depolarizing => vec![Coord::UNIT, a, a],
        ChannelClass::RandomUnitary => vec![a; 3],
        ChannelClass::UnitalEntanglementBreaking => vec![a; 8],
        ChannelClass::EntanglementBreaking => vec![a; 6],
        ChannelClass::General => vec![a; 8],
    }
}

/// PTM of the class member with parameters `p`.
fn ptm(class: ChannelClass, p: &[f64]) -> Matrix4<f64> {
    match class {
        ChannelClass::Depolarizing => {
            let b = sphere(p[1], p[2]) * p[0];
            let mut t = Matrix4::zeros();
            t[(0, 0)] = 1.0;
            t.fixed_view_mut::<3, 1>(1, 0).copy_from(&b);
            t
        }
        ChannelClass::RandomUnitary => embed(&rotation(p)),
        ChannelClass::UnitalEntanglementBreaking => {
            let l = l1_direction(p[6], p[7]);
            let d = Matrix3::from_diagonal(&Vector3::new(l[0], l[1], l[2]));
            embed(&(rotation(&p[0..3]) * d * rotation(&p[3..6])))
        }
        ChannelClass::EntanglementBreaking => {
            let (a, b, m) = (sphere(p[0], p[1]), sphere(p[2], p[3]), sphere(p[4], p[5]));
            let mut t = Matrix4::zeros();
            t[(0, 0)] = 1.0;
            t.fixed_view_mut::<3, 1>(1, 0).copy_from(&((a + b) * 0.5));
            t.fixed_view_mut::<3, 3>(1, 1).copy_from(&((a - b) * 0.5 * m.transpose()));
            t
        }
        ChannelClass::General => {
            let (s1, c1) = p[6].sin_cos();
            let (s2, c2) = p[7].sin_cos();
            let mut l = Matrix4::zeros();
            l[(0, 0)] = 1.0;
            l[(1, 1)] = c1;
            l[(2, 2)] = c2;
            l[(3, 3)] = c1 * c2;
            l[(3, 0)] = s1 * s2;
            embed(&rotation(&p[0..3])) * l * embed(&rotation(&p[3..6]))
        }
    }
}

fn witness(class: ChannelClass, p: &[f64]) -> Result<QubitChannel> {
    let ch = match class {
        ChannelClass::Depolarizing => {
            let b = sphere(p[1], p[2]) * p[0];
            QubitChannel::depolarizing(&QubitState::from_bloch(&BlochVector(b))?)
        }
        ChannelClass::RandomUnitary => QubitChannel::unitary(&unitary_from_rotation(&rotation(p)))?,
        ChannelClass::UnitalEntanglementBreaking => QubitChannel::unital_entanglement_breaking(
            &unitary_from_rotation(&rotation(&p[0..3])),
            l1_direction(p[6], p[7]),
            &unitary_from_rotation(&rotation(&p[3..6])),
        )?,
        ChannelClass::EntanglementBreaking => {
            let basis = PureState::from_angles(p[4], p[5]);
            QubitChannel::extreme_cq(
                &PureState::from_angles(p[0], p[1]),
                &PureState::from_angles(p[2], p[3]),
                [&basis, &basis.orthogonal()],
            )?
        }
        ChannelClass::General => QubitChannel::generalized_extreme(&GeneralizedExtremePoint::new(
            unitary_from_rotation(&rotation(&p[0..3])),
            unitary_from_rotation(&rotation(&p[3..6])),
            p[6],
            p[7],
        )?)?,
    };
    Ok(ch.with_class(class))
}

/// Maximize `tr[τ J_Ψ]` over `config.class`.
pub fn maximize(tau: &TwoQubitState, config: &OracleConfig) -> Result<OracleResult> {
    let k = objective_weights(tau);
    let class = config.class;
    let f = |p: &[f64]| k.component_mul(&ptm(class, p)).sum();
    let found = multistart_maximize(f, &coordinates(class), &config.search());
    Ok(OracleResult {
        best_value: found.value,
        witness: witness(class, &found.params)?,
        evaluations: found.evaluations,
    })
}

/// Worst observed `tr[τ J_Ψ] − C̃(τ, class)` over random states and in-class channels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominanceSweep {
    pub class: ChannelClass,
    pub n_tau: usize,
    pub n_channels: usize,
    /// `None` when no pair was evaluated.
    pub max_excess: Option<f64>,
    /// Pairs exceeding the bound by more than [`SOUNDNESS_TOL`].
    pub violations: usize,
}

pub const SOUNDNESS_TOL: f64 = 1e-9;

pub fn dominance_sweep(class: ChannelClass, n_tau: usize, n_channels: usize, seed: u64) -> DominanceSweep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let taus: Vec<TwoQubitState> = (0..n_tau).map(|_| random::two_qubit_state(&mut rng)).collect();
    let channels: Vec<QubitChannel> = (0..n_channels).map(|_| random::channel_in_class(&mut rng, class)).collect();
    let mut max_excess: Option<f64> = None;
    let mut violations = 0;
    for tau in &taus {
        let bound = bound_for(class, tau).value;
        for ch in &channels {
            let excess = tau.expectation(ch.choi()) - bound;
            max_excess = Some(max_excess.map_or(excess, |m| m.max(excess)));
            if excess > SOUNDNESS_TOL {
                violations += 1;
            }
        }
    }
    DominanceSweep { class, n_tau, n_channels, max_excess, violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::{rotation_of, Subsystem};

    fn quick(class: ChannelClass) -> OracleConfig {
        OracleConfig { n_starts: 32, n_refine: 4, ..OracleConfig::new(class) }
    }

    #[test]
    fn objective_matches_choi_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let tau = random::two_qubit_state(&mut rng);
        let k = objective_weights(&tau);
        for class in ChannelClass::ALL {
            let p: Vec<f64> = coordinates(class).iter().map(|c| c.sample(&mut rng)).collect();
            let fast = k.component_mul(&ptm(class, &p)).sum();
            let ch = witness(class, &p).unwrap();
            assert!((fast - tau.expectation(ch.choi())).abs() < 1e-13, "{class}");
            assert!((ch.ptm() - ptm(class, &p)).abs().max() < 1e-12, "{class}");
        }
    }

    #[test]
    fn euler_rotation_matches_unitary_lift() {
        let r = rotation(&[0.3, 1.2, -2.0]);
        assert!((rotation_of(&unitary_from_rotation(&r)) - r).abs().max() < 1e-12);
    }

    #[test]
    fn depolarizing_on_product_state() {
        let z = PureState::zero().density();
        let tau = TwoQubitState::product(&z, &z);
        let r = maximize(&tau, &quick(ChannelClass::Depolarizing)).unwrap();
        assert!((r.best_value - 1.0).abs() < 1e-9);
        let out = r.witness.apply(&PureState::one().projector());
        assert!((out[(0, 0)].re - 1.0).abs() < 1e-4);
    }

    #[test]
    fn unitary_on_maximally_entangled() {
        let r = maximize(&TwoQubitState::maximally_entangled(), &quick(ChannelClass::RandomUnitary)).unwrap();
        assert!((r.best_value - 2.0).abs() < 1e-6);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let tau = random::two_qubit_state(&mut rng);
        let cfg = quick(ChannelClass::General).with_seed(99);
        let a = maximize(&tau, &cfg).unwrap();
        let b = maximize(&tau, &cfg).unwrap();
        assert_eq!(a.best_value.to_bits(), b.best_value.to_bits());
        assert_eq!(a.evaluations, b.evaluations);
    }

    #[test]
    fn general_class_reaches_unital_bound_for_mixed_output() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let tau = random::two_qubit_state_mixed_output(&mut rng);
        assert!(tau.partial_trace(Subsystem::First).bloch_vector().norm() < 1e-12);
        let r = maximize(&tau, &quick(ChannelClass::General)).unwrap();
        assert!((r.best_value - crate::bounds::bound_unital(&tau).value).abs() < 1e-6);
    }

    #[test]
    fn sweep_edge_cases() {
        let empty = dominance_sweep(ChannelClass::General, 0, 10, 1);
        assert_eq!(empty.max_excess, None);
        assert_eq!(empty.violations, 0);
        let s = dominance_sweep(ChannelClass::UnitalEntanglementBreaking, 5, 20, 42);
        assert_eq!(s.violations, 0);
    }
}
