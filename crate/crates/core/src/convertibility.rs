//! Joint convertibility of pure-state pairs `(ψ, φ) → (e, f)`.
//!
//! The figure of merit is the average fidelity
//! `½⟨e|Ψ(|ψ⟩⟨ψ|)|e⟩ + ½⟨f|Ψ(|φ⟩⟨φ|)|f⟩ = tr[τ J_Ψ]` with
//! `τ = ½(|ψ⟩⟨ψ|ᵀ ⊗ |e⟩⟨e| + |φ⟩⟨φ|ᵀ ⊗ |f⟩⟨f|)`. The pair is jointly
//! convertible within a class exactly when the class maximum equals one.
//! Everything depends only on `x = |⟨ψ|φ⟩|` and `y = |⟨e|f⟩|`.

use serde::Serialize;

use crate::bounds::bound_for;
use crate::channels::{ChannelClass, GeneralizedExtremePoint, QubitChannel};
use crate::error::{Error, Result};
use crate::qubit::{c, kron, max_abs, Mat2, PureState, TwoQubitState};

/// Values within this of one count as one.
pub const UNITY_TOL: f64 = 1e-9;
/// Slack in the `x ≤ y` test.
pub const OVERLAP_TOL: f64 = 1e-12;
/// Overlaps this close to 0 or 1 use the degenerate basis prescriptions.
pub const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConversionInstance {
    pub psi: PureState,
    pub phi: PureState,
    pub e: PureState,
    pub f: PureState,
    pub x: f64,
    pub y: f64,
}

impl ConversionInstance {
    pub fn new(psi: PureState, phi: PureState, e: PureState, f: PureState) -> Self {
        let x = psi.overlap(&phi);
        let y = e.overlap(&f);
        ConversionInstance { psi, phi, e, f, x, y }
    }

    /// Real states in the σ₃/σ₁ plane: `ψ = e = |0⟩`,
    /// `φ = x|0⟩ + √(1−x²)|1⟩`, `f = y|0⟩ + √(1−y²)|1⟩`.
    pub fn from_overlaps(x: f64, y: f64) -> Result<Self> {
        for (name, v) in [("x", x), ("y", y)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::validation(format!("overlap {name} = {v} outside [0, 1]")));
            }
        }
        let tilted = |t: f64| PureState::new(c(t), c((1.0 - t * t).max(0.0).sqrt()));
        let mut inst = ConversionInstance::new(PureState::zero(), tilted(x)?, PureState::zero(), tilted(y)?);
        inst.x = x;
        inst.y = y;
        Ok(inst)
    }
}

pub fn build_tau(inst: &ConversionInstance) -> TwoQubitState {
    let a = kron(&inst.psi.projector().transpose(), &inst.e.projector());
    let b = kron(&inst.phi.projector().transpose(), &inst.f.projector());
    TwoQubitState::new((a + b).scale(0.5)).expect("mixture of product states is a state")
}

fn root(x: f64, y: f64) -> f64 {
    ((1.0 - x * x) * (1.0 - y * y)).max(0.0).sqrt()
}

/// Singular values of `N(τ)`, descending: a permutation of `{xy, √((1−x²)(1−y²)), 0}`.
pub fn tau_singular_values(inst: &ConversionInstance) -> [f64; 3] {
    let (a, b) = (inst.x * inst.y, root(inst.x, inst.y));
    [a.max(b), a.min(b), 0.0]
}

/// Closed-form class value in terms of `(x, y)`; exact for D, R and UE, an
/// upper estimate for GE and C.
pub fn convertibility_value(inst: &ConversionInstance, class: ChannelClass) -> f64 {
    let (x, y) = (inst.x, inst.y);
    let (a, b) = (x * y, root(x, y));
    match class {
        ChannelClass::Depolarizing => 0.5 * (1.0 + y),
        ChannelClass::RandomUnitary => 0.5 * (1.0 + a + b),
        ChannelClass::UnitalEntanglementBreaking => 0.5 * (1.0 + a.max(b)),
        ChannelClass::EntanglementBreaking => 0.5 * (1.0 + y.hypot(a.max(b))),
        ChannelClass::General => 0.5 * (1.0 + y.hypot(a + b)),
    }
}

/// Convertibility within all channels holds iff `x ≤ y`.
pub fn is_convertible_all_channels(inst: &ConversionInstance) -> bool {
    inst.x <= inst.y + OVERLAP_TOL
}

/// `½⟨e|Ψ(|ψ⟩⟨ψ|)|e⟩ + ½⟨f|Ψ(|φ⟩⟨φ|)|f⟩`.
pub fn average_fidelity(inst: &ConversionInstance, channel: &QubitChannel) -> f64 {
    let fid = |input: &PureState, target: &PureState| {
        let out = channel.apply(&input.projector());
        (target.vector().adjoint() * out * target.vector())[(0, 0)].re
    };
    0.5 * (fid(&inst.psi, &inst.e) + fid(&inst.phi, &inst.f))
}

/// Largest entry of `|Ψ(|ψ⟩⟨ψ|) − |e⟩⟨e||` and of `|Ψ(|φ⟩⟨φ|) − |f⟩⟨f||`.
pub fn conversion_residuals(inst: &ConversionInstance, channel: &QubitChannel) -> (f64, f64) {
    (
        max_abs(&(channel.apply(&inst.psi.projector()) - inst.e.projector())),
        max_abs(&(channel.apply(&inst.phi.projector()) - inst.f.projector())),
    )
}

/// `|a±⟩ ∝ |a⟩ ± (⟨b|a⟩/|⟨b|a⟩|)|b⟩`, with `|a±⟩ = (|a⟩ ± |b⟩)/√2` for
/// orthogonal inputs and `(|a⟩, |a⊥⟩)` for parallel ones.
fn split_basis(a: &PureState, b: &PureState) -> (PureState, PureState) {
    let overlap = b.inner(a);
    let r = overlap.norm();
    if r >= 1.0 - DEGENERATE_TOL {
        return (*a, a.orthogonal());
    }
    let phase = if r <= DEGENERATE_TOL { c(1.0) } else { overlap / r };
    let plus = PureState::superposition(c(1.0), a, phase, b).expect("non-parallel states");
    let minus = PureState::superposition(c(1.0), a, -phase, b).expect("non-parallel states");
    (plus, minus)
}

fn ket_bra(ket: &PureState, bra: &PureState) -> Mat2 {
    ket.vector() * bra.vector().adjoint()
}

/// A channel from `class` attaining [`convertibility_value`] (D, R, UE), or
/// converting both pairs exactly (C with `x ≤ y`).
pub fn build_achiever(inst: &ConversionInstance, class: ChannelClass) -> Result<QubitChannel> {
    let (psi_p, psi_m) = split_basis(&inst.psi, &inst.phi);
    let (e_p, e_m) = split_basis(&inst.e, &inst.f);
    match class {
        ChannelClass::Depolarizing => Ok(QubitChannel::depolarizing(&e_p.density())),
        ChannelClass::RandomUnitary => {
            let u = ket_bra(&e_p, &psi_p) + ket_bra(&e_m, &psi_m);
            QubitChannel::unitary(&u)
        }
        ChannelClass::UnitalEntanglementBreaking => {
            let (a, b) = (inst.x * inst.y, root(inst.x, inst.y));
            let (inputs, outputs) = if a >= b {
                ([psi_p, psi_m], [e_p, e_m])
            } else {
                let rotate = |p: &PureState, m: &PureState| {
                    [
                        PureState::superposition(c(1.0), p, c(1.0), m).expect("orthogonal"),
                        PureState::superposition(c(1.0), p, c(-1.0), m).expect("orthogonal"),
                    ]
                };
                (rotate(&psi_p, &psi_m), rotate(&e_p, &e_m))
            };
            let ch = QubitChannel::extreme_cq(&outputs[0], &outputs[1], [&inputs[0], &inputs[1]])?;
            Ok(ch.with_class(ChannelClass::UnitalEntanglementBreaking))
        }
        ChannelClass::EntanglementBreaking => Err(Error::Unsupported(
            "no closed-form achiever is known for entanglement-breaking channels".into(),
        )),
        ChannelClass::General => general_achiever(inst, (&psi_p, &psi_m), (&e_p, &e_m)),
    }
}

fn general_achiever(
    inst: &ConversionInstance,
    (psi_p, psi_m): (&PureState, &PureState),
    (e_p, e_m): (&PureState, &PureState),
) -> Result<QubitChannel> {
    let (x, y) = (inst.x, inst.y);
    if !is_convertible_all_channels(inst) {
        return Err(Error::Infeasible(format!(
            "|<psi|phi>| = {x} exceeds |<e|f>| = {y}; no channel converts both pairs"
        )));
    }
    if y >= 1.0 - DEGENERATE_TOL {
        return Ok(QubitChannel::depolarizing(&inst.e.density()).with_class(ChannelClass::General));
    }
    if x <= DEGENERATE_TOL {
        let ch = QubitChannel::extreme_cq(&inst.e, &inst.f, [&inst.psi, &inst.phi])?;
        return Ok(ch.with_class(ChannelClass::General));
    }
    let ratio = ((1.0 - y * y) / (1.0 - x * x)).sqrt();
    let u1 = ratio.clamp(0.0, 1.0).acos();
    let u2 = (x / y * ratio).clamp(0.0, 1.0).acos();
    let zero = PureState::zero();
    let one = PureState::one();
    let v = ket_bra(e_p, &zero) + ket_bra(e_m, &one);
    let w = ket_bra(&zero, psi_p) + ket_bra(&one, psi_m);
    let g = GeneralizedExtremePoint::new(v, w, u1, u2)?;
    QubitChannel::generalized_extreme(&g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Convertible,
    NotConvertible,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Convertible => "convertible",
            Verdict::NotConvertible => "not-convertible",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassConvertibility {
    pub class: ChannelClass,
    pub value: f64,
    pub exact: bool,
    pub verdict: Verdict,
    #[serde(skip)]
    pub achiever: Option<QubitChannel>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvertibilityReport {
    pub x: f64,
    pub y: f64,
    pub classes: Vec<ClassConvertibility>,
}

impl ConvertibilityReport {
    pub fn get(&self, class: ChannelClass) -> &ClassConvertibility {
        self.classes.iter().find(|r| r.class == class).expect("every class present")
    }
}

pub fn convertibility_report(inst: &ConversionInstance) -> ConvertibilityReport {
    let classes = ChannelClass::ALL
        .iter()
        .map(|&class| {
            let value = convertibility_value(inst, class);
            let reaches_one = value >= 1.0 - UNITY_TOL;
            let (exact, verdict) = match class {
                ChannelClass::EntanglementBreaking => {
                    (false, if reaches_one { Verdict::Inconclusive } else { Verdict::NotConvertible })
                }
                ChannelClass::General => {
                    let ok = is_convertible_all_channels(inst);
                    (false, if ok { Verdict::Convertible } else { Verdict::NotConvertible })
                }
                _ => (true, if reaches_one { Verdict::Convertible } else { Verdict::NotConvertible }),
            };
            let achiever = build_achiever(inst, class).ok();
            ClassConvertibility { class, value, exact, verdict, achiever }
        })
        .collect();
    ConvertibilityReport { x: inst.x, y: inst.y, classes }
}

/// One-parameter families of instances swept by [`compare_classes`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    /// `x` held fixed, `y` swept over `[0, 1]`.
    FixedX(f64),
    /// `y` held fixed, `x` swept over `[0, 1]`.
    FixedY(f64),
}

impl Family {
    pub fn instance(&self, t: f64) -> Result<ConversionInstance> {
        match *self {
            Family::FixedX(x) => ConversionInstance::from_overlaps(x, t),
            Family::FixedY(y) => ConversionInstance::from_overlaps(t, y),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DifferenceSample {
    pub param: f64,
    pub diff: f64,
    /// −1, 0 or 1; differences within [`ZERO_TOL`] count as zero.
    pub sign: i8,
}

/// `|C̃(𝒳) − C̃(𝒴)|` at or below this counts as zero.
pub const ZERO_TOL: f64 = 1e-12;
/// Bisection stops once the bracket is this narrow.
pub const BISECTION_TOL: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub first: ChannelClass,
    pub second: ChannelClass,
    pub samples: Vec<DifferenceSample>,
    /// Zeros of the difference: grid points where it vanishes and bisected sign changes.
    pub crossings: Vec<f64>,
}

fn sign_of(v: f64) -> i8 {
    if v.abs() <= ZERO_TOL {
        0
    } else if v > 0.0 {
        1
    } else {
        -1
    }
}

/// Sample `C̃(first) − C̃(second)` on `grid + 1` evenly spaced parameters in
/// `[0, 1]` and locate its zeros.
pub fn compare_classes(
    family: Family,
    first: ChannelClass,
    second: ChannelClass,
    grid: usize,
) -> Result<ComparisonReport> {
    if grid == 0 {
        return Err(Error::validation("grid must have at least one interval"));
    }
    family.instance(0.0)?;
    let diff = |t: f64| {
        let inst = family.instance(t).expect("parameter in [0, 1]");
        convertibility_value(&inst, first) - convertibility_value(&inst, second)
    };
    let samples: Vec<DifferenceSample> = (0..=grid)
        .map(|k| {
            let param = k as f64 / grid as f64;
            let d = diff(param);
            DifferenceSample { param, diff: d, sign: sign_of(d) }
        })
        .collect();

    let mut crossings = Vec::new();
    for (k, s) in samples.iter().enumerate() {
        if s.sign == 0 {
            crossings.push(s.param);
            continue;
        }
        if let Some(next) = samples.get(k + 1) {
            if next.sign != 0 && next.sign != s.sign {
                crossings.push(bisect(&diff, s.param, next.param, s.sign));
            }
        }
    }
    Ok(ComparisonReport { first, second, samples, crossings })
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, lo_sign: i8) -> f64 {
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        let s = sign_of(f(mid));
        if s == 0 {
            return mid;
        }
        if s == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Common value `½(1 + √(1 − x²))` of the R, UE, GE and C values at `y = 0`.
pub fn special_case_orthogonal_targets(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::validation(format!("overlap x = {x} outside [0, 1]")));
    }
    Ok(0.5 * (1.0 + (1.0 - x * x).sqrt()))
}

/// [`convertibility_value`] recomputed from the generic class bound on `build_tau(inst)`.
pub fn value_via_bounds(inst: &ConversionInstance, class: ChannelClass) -> f64 {
    bound_for(class, &build_tau(inst)).value
}
