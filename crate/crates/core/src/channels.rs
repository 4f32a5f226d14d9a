//! Qubit channels in Kraus, Pauli-transfer-matrix (PTM) and Choi form.
//!
//! Choi convention: `J_Ψ = (id ⊗ Ψ) P'₊` with `P'₊ = Σ_{ij} |i⟩⟨j| ⊗ |i⟩⟨j|`.
//! The first tensor factor is the reference (identity) side, the second is
//! the channel output, so `J[2i + a, 2j + b] = ⟨a|Ψ(|i⟩⟨j|)|b⟩` and
//! `tr[J] = 2`.
//!
//! PTM convention: `T_{μν} = ½ tr[σ_μ Ψ(σ_ν)]`, so
//! `J = ½ Σ_{μν} T_{μν} σ_νᵀ ⊗ σ_μ`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Matrix4, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubit::{
    c, hermitian_eigen4, hermiticity_defect, is_unitary, kron, max_abs, partial_trace_op, pauli,
    rotation_of, unitary_from_rotation, unnormalized_max_entangled, Mat2, Mat4, PureState,
    QubitState, Subsystem, VALIDATION_TOL, ZERO,
};
use crate::svd::svd3;

/// Eigenvalues of a Choi matrix below this are dropped when extracting Kraus operators.
pub const KRAUS_CUTOFF: f64 = 1e-10;

/// The five channel classes with dedicated bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChannelClass {
    /// Depolarizing (replacement) channels `A ↦ (tr A) ρ`.
    #[serde(rename = "D")]
    Depolarizing,
    /// Random unitary channels; for qubits these are exactly the unital channels.
    #[serde(rename = "R")]
    RandomUnitary,
    /// Unital entanglement-breaking channels.
    #[serde(rename = "UE")]
    UnitalEntanglementBreaking,
    /// Entanglement-breaking channels.
    #[serde(rename = "GE")]
    EntanglementBreaking,
    /// All channels.
    #[serde(rename = "C")]
    General,
}

impl ChannelClass {
    pub const ALL: [ChannelClass; 5] = [
        ChannelClass::Depolarizing,
        ChannelClass::RandomUnitary,
        ChannelClass::UnitalEntanglementBreaking,
        ChannelClass::EntanglementBreaking,
        ChannelClass::General,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            ChannelClass::Depolarizing => "D",
            ChannelClass::RandomUnitary => "R",
            ChannelClass::UnitalEntanglementBreaking => "UE",
            ChannelClass::EntanglementBreaking => "GE",
            ChannelClass::General => "C",
        }
    }

    /// Whether `self ⊆ other` as sets of channels.
    pub fn is_subset_of(&self, other: ChannelClass) -> bool {
        use ChannelClass::*;
        match (self, other) {
            (a, b) if *a == b => true,
            (_, General) => true,
            (Depolarizing, EntanglementBreaking) => true,
            (UnitalEntanglementBreaking, RandomUnitary | EntanglementBreaking) => true,
            _ => false,
        }
    }
}

impl fmt::Display for ChannelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ChannelClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "D" => Ok(ChannelClass::Depolarizing),
            "R" => Ok(ChannelClass::RandomUnitary),
            "UE" => Ok(ChannelClass::UnitalEntanglementBreaking),
            "GE" => Ok(ChannelClass::EntanglementBreaking),
            "C" => Ok(ChannelClass::General),
            other => Err(Error::validation(format!("unknown channel class {other:?} (expected D, R, UE, GE or C)"))),
        }
    }
}

/// The form a channel was specified in.
#[derive(Clone, Debug, PartialEq)]
pub enum Representation {
    Kraus(Vec<Mat2>),
    Ptm(Matrix4<f64>),
    Choi(Mat4),
}

/// A validated completely positive, trace-preserving qubit map.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitChannel {
    repr: Representation,
    choi: Mat4,
    class: Option<ChannelClass>,
}

fn choi_from_kraus(ops: &[Mat2]) -> Mat4 {
    Mat4::from_fn(|r, col| {
        let (i, a, j, b) = (r / 2, r % 2, col / 2, col % 2);
        ops.iter().map(|k| k[(a, i)] * k[(b, j)].conj()).sum()
    })
}

fn choi_from_ptm(t: &Matrix4<f64>) -> Mat4 {
    let mut j = Mat4::zeros();
    for mu in 0..4 {
        for nu in 0..4 {
            let coeff = t[(mu, nu)];
            if coeff != 0.0 {
                j += kron(&pauli(nu).transpose(), &pauli(mu)).scale(0.5 * coeff);
            }
        }
    }
    j
}

/// `Ψ(A) = Σ_{ij} A_ij Ψ(|i⟩⟨j|)`, reading the blocks of the Choi matrix.
fn apply_choi(j: &Mat4, a: &Mat2) -> Mat2 {
    Mat2::from_fn(|x, y| {
        let mut acc = ZERO;
        for i in 0..2 {
            for k in 0..2 {
                acc += a[(i, k)] * j[(2 * i + x, 2 * k + y)];
            }
        }
        acc
    })
}

fn ptm_from_choi(j: &Mat4) -> Matrix4<f64> {
    let images: [Mat2; 4] = std::array::from_fn(|nu| apply_choi(j, &pauli(nu)));
    Matrix4::from_fn(|mu, nu| 0.5 * (pauli(mu) * images[nu]).trace().re)
}

/// PTM of the unitary channel `A ↦ U A U†`: `1 ⊕ O(U)`.
pub fn unitary_ptm(u: &Mat2) -> Matrix4<f64> {
    let mut t = Matrix4::zeros();
    t[(0, 0)] = 1.0;
    t.fixed_view_mut::<3, 3>(1, 1).copy_from(&rotation_of(u));
    t
}

fn validate_choi(j: &Mat4) -> Result<Mat4> {
    if j.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::validation("Choi matrix has non-finite entries"));
    }
    let defect = hermiticity_defect(j);
    if defect > VALIDATION_TOL {
        return Err(Error::validation(format!("Choi matrix is not Hermitian (defect {defect:.3e})")));
    }
    let h = (j + j.adjoint()).scale(0.5);
    let min = hermitian_eigen4(&h).0[0];
    if min < -VALIDATION_TOL {
        return Err(Error::validation(format!("map is not completely positive (Choi eigenvalue {min:.3e})")));
    }
    let reference = partial_trace_op(&h, Subsystem::Second);
    let tp_defect = max_abs(&(reference - Mat2::identity()));
    if tp_defect > VALIDATION_TOL {
        return Err(Error::validation(format!("map is not trace preserving (defect {tp_defect:.3e})")));
    }
    Ok(h)
}

impl QubitChannel {
    pub fn from_kraus(ops: Vec<Mat2>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::validation("Kraus list is empty"));
        }
        let choi = validate_choi(&choi_from_kraus(&ops))?;
        Ok(QubitChannel { repr: Representation::Kraus(ops), choi, class: None })
    }

    pub fn from_ptm(t: Matrix4<f64>) -> Result<Self> {
        if t.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("PTM has non-finite entries"));
        }
        let first_row = (t[(0, 0)] - 1.0).abs().max(t[(0, 1)].abs()).max(t[(0, 2)].abs()).max(t[(0, 3)].abs());
        if first_row > 1e-12 {
            return Err(Error::validation("PTM first row must be (1, 0, 0, 0)"));
        }
        let choi = validate_choi(&choi_from_ptm(&t))?;
        Ok(QubitChannel { repr: Representation::Ptm(t), choi, class: None })
    }

    pub fn from_choi(j: Mat4) -> Result<Self> {
        let choi = validate_choi(&j)?;
        Ok(QubitChannel { repr: Representation::Choi(j), choi, class: None })
    }

    pub fn with_class(mut self, class: ChannelClass) -> Self {
        self.class = Some(class);
        self
    }

    pub fn class(&self) -> Option<ChannelClass> {
        self.class
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    pub fn choi(&self) -> &Mat4 {
        &self.choi
    }

    pub fn ptm(&self) -> Matrix4<f64> {
        match &self.repr {
            Representation::Ptm(t) => *t,
            _ => ptm_from_choi(&self.choi),
        }
    }

    /// Kraus operators; extracted from the Choi eigendecomposition unless
    /// the channel was built from a Kraus list.
    pub fn kraus(&self) -> Vec<Mat2> {
        if let Representation::Kraus(ops) = &self.repr {
            return ops.clone();
        }
        let (vals, vecs) = hermitian_eigen4(&self.choi);
        (0..4)
            .rev()
            .filter(|&k| vals[k] > KRAUS_CUTOFF)
            .map(|k| {
                let s = vals[k].sqrt();
                Mat2::from_fn(|a, i| vecs[(2 * i + a, k)] * s)
            })
            .collect()
    }

    pub fn apply(&self, a: &Mat2) -> Mat2 {
        apply_choi(&self.choi, a)
    }

    pub fn apply_state(&self, rho: &QubitState) -> QubitState {
        QubitState::new(self.apply(rho.matrix())).expect("channel output of a valid state is a state")
    }

    /// `Ψ(I) = I` within `tol`.
    pub fn is_unital(&self, tol: f64) -> bool {
        max_abs(&(self.apply(&Mat2::identity()) - Mat2::identity())) <= tol
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &QubitChannel) -> QubitChannel {
        let t = self.ptm() * inner.ptm();
        QubitChannel { choi: choi_from_ptm(&t), repr: Representation::Ptm(t), class: None }
    }

    pub fn identity() -> Self {
        QubitChannel::unitary(&Mat2::identity()).expect("identity is unitary")
    }

    /// `A ↦ (tr A) ρ`, Choi matrix `I ⊗ ρ`.
    pub fn depolarizing(rho: &QubitState) -> Self {
        let j = kron(&Mat2::identity(), rho.matrix());
        QubitChannel { repr: Representation::Choi(j), choi: j, class: Some(ChannelClass::Depolarizing) }
    }

    pub fn unitary(u: &Mat2) -> Result<Self> {
        if !is_unitary(u, VALIDATION_TOL) {
            return Err(Error::validation("matrix is not unitary"));
        }
        Ok(QubitChannel::from_kraus(vec![*u])?.with_class(ChannelClass::RandomUnitary))
    }

    /// `A ↦ Σ_x p_x U_x A U_x†`.
    pub fn random_unitary(weights: &[f64], unitaries: &[Mat2]) -> Result<Self> {
        if weights.is_empty() || weights.len() != unitaries.len() {
            return Err(Error::validation("need one weight per unitary"));
        }
        let total: f64 = weights.iter().sum();
        if weights.iter().any(|&p| p.is_nan() || p < -1e-12) || (total - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::validation("weights must be a probability distribution"));
        }
        if let Some(k) = unitaries.iter().position(|u| !is_unitary(u, VALIDATION_TOL)) {
            return Err(Error::validation(format!("element {k} is not unitary")));
        }
        let ops = weights.iter().zip(unitaries).map(|(p, u)| u * c(p.max(0.0).sqrt())).collect();
        Ok(QubitChannel::from_kraus(ops)?.with_class(ChannelClass::RandomUnitary))
    }

    /// Extreme classical-quantum channel
    /// `A ↦ |ψ⟩⟨x₀|A|x₀⟩⟨ψ| + |φ⟩⟨x₁|A|x₁⟩⟨φ|`.
    pub fn extreme_cq(psi: &PureState, phi: &PureState, basis: [&PureState; 2]) -> Result<Self> {
        if basis[0].overlap(basis[1]) > VALIDATION_TOL {
            return Err(Error::validation("measurement basis is not orthonormal"));
        }
        let k0 = psi.vector() * basis[0].vector().adjoint();
        let k1 = phi.vector() * basis[1].vector().adjoint();
        Ok(QubitChannel::from_kraus(vec![k0, k1])?.with_class(ChannelClass::EntanglementBreaking))
    }

    pub fn generalized_extreme(g: &GeneralizedExtremePoint) -> Result<Self> {
        Ok(QubitChannel::from_ptm(g.ptm())?.with_class(ChannelClass::General))
    }

    /// `Ψ_V ∘ Λ ∘ Ψ_W` with `Λ` Pauli-diagonal, restricted to `Σ|λᵢ| ≤ 1`.
    ///
    /// The restriction implies complete positivity: for any signs,
    /// `|λ₁ ± λ₂| ± λ₃ ≤ Σ|λᵢ| ≤ 1`, which is `1 ± λ₃ ≥ |λ₁ ± λ₂|`.
    pub fn unital_entanglement_breaking(v: &Mat2, lambda: [f64; 3], w: &Mat2) -> Result<Self> {
        let l1: f64 = lambda.iter().map(|l| l.abs()).sum();
        if l1 > 1.0 + 1e-12 {
            return Err(Error::validation(format!("Σ|λ| = {l1} exceeds 1")));
        }
        let form = UnitalCanonicalForm { v: *v, lambda, w: *w };
        Ok(QubitChannel::from_ptm(form.ptm())?.with_class(ChannelClass::UnitalEntanglementBreaking))
    }

    /// `Ψ_w = w·id + (1 − w)·Ψ_{I/2}`, PTM `diag(1, w, w, w)`.
    pub fn werner(w: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::validation(format!("Werner parameter {w} outside [0, 1]")));
        }
        let t = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, w, w, w));
        Ok(QubitChannel::from_ptm(t)?.with_class(ChannelClass::RandomUnitary))
    }
}

pub fn choi(channel: &QubitChannel) -> &Mat4 {
    channel.choi()
}

/// `(id ⊗ Ψ)` applied to a two-qubit operator.
pub fn apply_on_second(channel: &QubitChannel, m: &Mat4) -> Mat4 {
    let mut out = Mat4::zeros();
    for i in 0..2 {
        for k in 0..2 {
            let block = Mat2::from_fn(|a, b| m[(2 * i + a, 2 * k + b)]);
            let image = channel.apply(&block);
            for a in 0..2 {
                for b in 0..2 {
                    out[(2 * i + a, 2 * k + b)] = image[(a, b)];
                }
            }
        }
    }
    out
}

/// `Ψ_V ∘ Λ ∘ Ψ_W` where `Λ` has PTM
/// ```text
/// 1            0         0         0
/// 0            cos u₁    0         0
/// 0            0         cos u₂    0
/// sin u₁ sin u₂ 0        0         cos u₁ cos u₂
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneralizedExtremePoint {
    pub v: Mat2,
    pub w: Mat2,
    /// In `[0, 2π)`.
    pub u1: f64,
    /// In `[0, π]`.
    pub u2: f64,
}

impl GeneralizedExtremePoint {
    /// Angles are wrapped into range: `(u₁, u₂) ~ (−u₁, 2π − u₂)` leaves the PTM unchanged.
    pub fn new(v: Mat2, w: Mat2, u1: f64, u2: f64) -> Result<Self> {
        if !is_unitary(&v, VALIDATION_TOL) || !is_unitary(&w, VALIDATION_TOL) {
            return Err(Error::validation("V and W must be unitary"));
        }
        if !u1.is_finite() || !u2.is_finite() {
            return Err(Error::validation("angles must be finite"));
        }
        let tau = std::f64::consts::TAU;
        let (mut u1, mut u2) = (u1.rem_euclid(tau), u2.rem_euclid(tau));
        if u2 > std::f64::consts::PI {
            u2 = tau - u2;
            u1 = (-u1).rem_euclid(tau);
        }
        Ok(GeneralizedExtremePoint { v, w, u1, u2 })
    }

    pub fn lambda_ptm(&self) -> Matrix4<f64> {
        let (s1, c1) = self.u1.sin_cos();
        let (s2, c2) = self.u2.sin_cos();
        let mut t = Matrix4::zeros();
        t[(0, 0)] = 1.0;
        t[(1, 1)] = c1;
        t[(2, 2)] = c2;
        t[(3, 3)] = c1 * c2;
        t[(3, 0)] = s1 * s2;
        t
    }

    pub fn ptm(&self) -> Matrix4<f64> {
        unitary_ptm(&self.v) * self.lambda_ptm() * unitary_ptm(&self.w)
    }
}

/// `Ψ = Ψ_V ∘ Λ ∘ Ψ_W` with `Λ = diag(1, λ₁, λ₂, λ₃)` in the Pauli basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitalCanonicalForm {
    pub v: Mat2,
    pub lambda: [f64; 3],
    pub w: Mat2,
}

impl UnitalCanonicalForm {
    pub fn ptm(&self) -> Matrix4<f64> {
        let l = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, self.lambda[0], self.lambda[1], self.lambda[2]));
        unitary_ptm(&self.v) * l * unitary_ptm(&self.w)
    }

    pub fn recompose(&self) -> Result<QubitChannel> {
        QubitChannel::from_ptm(self.ptm())
    }

    pub fn lambda_l1(&self) -> f64 {
        self.lambda.iter().map(|l| l.abs()).sum()
    }

    /// `1 ± λ₃ ≥ |λ₁ ± λ₂|`.
    pub fn is_completely_positive(&self, tol: f64) -> bool {
        let [l1, l2, l3] = self.lambda;
        1.0 + l3 + tol >= (l1 + l2).abs() && 1.0 - l3 + tol >= (l1 - l2).abs()
    }
}

/// Factor a unital channel as `Ψ_V ∘ Λ ∘ Ψ_W`.
///
/// The 3×3 PTM block is decomposed by SVD; when a factor has determinant −1
/// its last column and `λ₃` are negated so both factors are rotations.
/// `|λ₁| ≥ |λ₂| ≥ |λ₃|`.
pub fn unital_canonical_decomposition(channel: &QubitChannel) -> Result<UnitalCanonicalForm> {
    if !channel.is_unital(VALIDATION_TOL) {
        return Err(Error::validation("channel is not unital"));
    }
    let t = channel.ptm();
    let block: Matrix3<f64> = t.fixed_view::<3, 3>(1, 1).into_owned();
    let svd = svd3(&block);
    let (mut u, mut v) = (svd.u, svd.v);
    let mut s: Vector3<f64> = svd.singular_values;
    if u.determinant() < 0.0 {
        u.column_mut(2).neg_mut();
        s[2] = -s[2];
    }
    if v.determinant() < 0.0 {
        v.column_mut(2).neg_mut();
        s[2] = -s[2];
    }
    Ok(UnitalCanonicalForm {
        v: unitary_from_rotation(&u),
        lambda: [s[0], s[1], s[2]],
        w: unitary_from_rotation(&v.transpose()),
    })
}

/// A unital qubit channel is entanglement breaking iff `Σ|λᵢ| ≤ 1`.
pub fn is_entanglement_breaking_unital(channel: &QubitChannel) -> Result<bool> {
    Ok(unital_canonical_decomposition(channel)?.lambda_l1() <= 1.0 + VALIDATION_TOL)
}

/// `P'₊` as a channel-side object: the Choi matrix of the identity channel.
pub fn identity_choi() -> Mat4 {
    unnormalized_max_entangled()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::{euler_unitary, TwoQubitState};
    use nalgebra::Vector4;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn identity_choi_is_unnormalized_max_entangled() {
        let id = QubitChannel::identity();
        assert!(max_abs(&(id.choi() - unnormalized_max_entangled())) < 1e-15);
        assert!((id.choi().trace().re - 2.0).abs() < 1e-15);
    }

    #[test]
    fn depolarizing_choi_and_ptm() {
        let rho = PureState::zero().density();
        let ch = QubitChannel::depolarizing(&rho);
        assert!(max_abs(&(ch.choi() - kron(&Mat2::identity(), rho.matrix()))) < 1e-15);
        let t = ch.ptm();
        // T₃₀ = ½ tr[σ₃ Ψ(I)] = tr[σ₃ |0⟩⟨0|] = 1
        let expected = Matrix4::from_fn(|r, c| if (r, c) == (0, 0) || (r, c) == (3, 0) { 1.0 } else { 0.0 });
        assert!((t - expected).abs().max() < 1e-15);

        let mixed = QubitChannel::depolarizing(&QubitState::maximally_mixed());
        let expected = Matrix4::from_fn(|r, c| if (r, c) == (0, 0) { 1.0 } else { 0.0 });
        assert!((mixed.ptm() - expected).abs().max() < 1e-15);
    }

    #[test]
    fn werner_zero_is_complete_depolarizer() {
        let w0 = QubitChannel::werner(0.0).unwrap();
        assert!(max_abs(&(w0.choi() - Mat4::identity().scale(0.5))) < 1e-15);
        assert!(QubitChannel::werner(1.2).is_err());
    }

    #[test]
    fn unitary_ptm_blocks() {
        assert!((QubitChannel::identity().ptm() - Matrix4::identity()).abs().max() < 1e-15);
        let x = QubitChannel::unitary(&pauli(1)).unwrap();
        let expected = Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, -1.0, -1.0));
        assert!((x.ptm() - expected).abs().max() < 1e-15);
        let u = euler_unitary(0.4, 2.1, -1.3);
        let block: Matrix3<f64> = QubitChannel::unitary(&u).unwrap().ptm().fixed_view::<3, 3>(1, 1).into_owned();
        assert!((block.transpose() * block - Matrix3::identity()).abs().max() < 1e-10);
        assert!((block.determinant() - 1.0).abs() < 1e-10);
        assert!(QubitChannel::unitary(&Mat2::identity().scale(2.0)).is_err());
    }

    #[test]
    fn pauli_twirl_is_complete_depolarizer() {
        let ops: Vec<Mat2> = (0..4).map(pauli).collect();
        let ch = QubitChannel::random_unitary(&[0.25; 4], &ops).unwrap();
        assert!(max_abs(&(ch.choi() - Mat4::identity().scale(0.5))) < 1e-15);

        let single = QubitChannel::random_unitary(&[1.0], &[pauli(2)]).unwrap();
        assert!(max_abs(&(single.choi() - QubitChannel::unitary(&pauli(2)).unwrap().choi())) < 1e-15);

        let two = QubitChannel::random_unitary(&[0.3, 0.7], &[pauli(1), euler_unitary(1.0, 0.5, 0.2)]).unwrap();
        assert!((two.choi().trace().re - 2.0).abs() < 1e-14);

        assert!(QubitChannel::random_unitary(&[0.5, 0.6], &[pauli(1), pauli(2)]).is_err());
        assert!(QubitChannel::random_unitary(&[1.2, -0.2], &[pauli(1), pauli(2)]).is_err());
    }

    #[test]
    fn extreme_cq_cases() {
        let basis = [&PureState::zero(), &PureState::one()];
        let unital = QubitChannel::extreme_cq(&PureState::plus(), &PureState::minus(), basis).unwrap();
        assert!(unital.is_unital(1e-12));

        let psi = PureState::from_angles(0.8, 0.3);
        let constant = QubitChannel::extreme_cq(&psi, &psi, basis).unwrap();
        let dep = QubitChannel::depolarizing(&psi.density());
        assert!(max_abs(&(constant.choi() - dep.choi())) < 1e-14);

        let generic = QubitChannel::extreme_cq(
            &PureState::from_angles(0.3, 1.0),
            &PureState::from_angles(2.0, -0.4),
            [&PureState::plus_y(), &PureState::minus_y()],
        )
        .unwrap();
        assert!(generic.kraus().len() <= 2);

        assert!(QubitChannel::extreme_cq(&psi, &psi, [&PureState::zero(), &PureState::plus()]).is_err());
    }

    #[test]
    fn generalized_extreme_points() {
        let id = Mat2::identity();
        let g = GeneralizedExtremePoint::new(id, id, 0.0, 0.0).unwrap();
        let ch = QubitChannel::generalized_extreme(&g).unwrap();
        assert!(max_abs(&(ch.choi() - unnormalized_max_entangled())) < 1e-15);

        // u₁ = u₂ = π/2 gives T = [[1,0,0,0],[0,0,0,0],[0,0,0,0],[1,0,0,0]]
        let g = GeneralizedExtremePoint::new(id, id, FRAC_PI_2, FRAC_PI_2).unwrap();
        let ch = QubitChannel::generalized_extreme(&g).unwrap();
        let dep = QubitChannel::depolarizing(&PureState::zero().density());
        assert!(max_abs(&(ch.choi() - dep.choi())) < 1e-15);

        let g = GeneralizedExtremePoint::new(euler_unitary(0.2, 0.4, 0.6), id, 1.1, 0.0).unwrap();
        assert!(QubitChannel::generalized_extreme(&g).unwrap().is_unital(1e-12));
    }

    #[test]
    fn generalized_extreme_lambda_choi_matches_pauli_expansion() {
        let (u1, u2) = (0.7, 2.3);
        let g = GeneralizedExtremePoint::new(Mat2::identity(), Mat2::identity(), u1, u2).unwrap();
        let ch = QubitChannel::generalized_extreme(&g).unwrap();
        let p = |i: usize, j: usize| kron(&pauli(i), &pauli(j));
        let expected = (p(0, 0) + p(0, 3).scale(u1.sin() * u2.sin()) + p(1, 1).scale(u1.cos())
            - p(2, 2).scale(u2.cos())
            + p(3, 3).scale(u1.cos() * u2.cos()))
        .scale(0.5);
        assert!(max_abs(&(ch.choi() - expected)) < 1e-12);
    }

    #[test]
    fn angle_wrapping_preserves_ptm() {
        let v = euler_unitary(0.1, 0.2, 0.3);
        let w = euler_unitary(1.1, 1.2, 1.3);
        let raw = GeneralizedExtremePoint { v, w, u1: 0.9, u2: 4.0 };
        let wrapped = GeneralizedExtremePoint::new(v, w, 0.9, 4.0).unwrap();
        assert!(wrapped.u2 <= PI && wrapped.u1 < std::f64::consts::TAU);
        assert!((raw.ptm() - wrapped.ptm()).abs().max() < 1e-14);
    }

    #[test]
    fn canonical_decomposition_examples() {
        let u = euler_unitary(0.3, 1.2, 2.2);
        let form = unital_canonical_decomposition(&QubitChannel::unitary(&u).unwrap()).unwrap();
        assert!(form.lambda.iter().all(|l| (l.abs() - 1.0).abs() < 1e-12));

        let form = unital_canonical_decomposition(&QubitChannel::werner(0.4).unwrap()).unwrap();
        for l in form.lambda {
            assert!((l - 0.4).abs() < 1e-14);
        }

        let form = unital_canonical_decomposition(&QubitChannel::werner(0.0).unwrap()).unwrap();
        assert_eq!(form.lambda_l1(), 0.0);

        let nonunital = QubitChannel::depolarizing(&PureState::zero().density());
        assert!(unital_canonical_decomposition(&nonunital).is_err());
    }

    #[test]
    fn canonical_decomposition_recomposes_with_negative_determinant() {
        // σ₁-conjugation composed with a reflection-like diagonal: block det < 0
        let t = Matrix4::from_diagonal(&Vector4::new(1.0, -0.5, 0.3, 0.2));
        let ch = QubitChannel::from_ptm(t).unwrap();
        let form = unital_canonical_decomposition(&ch).unwrap();
        assert!((form.ptm() - t).abs().max() < 1e-12);
        assert!(form.lambda[0].abs() >= form.lambda[1].abs() && form.lambda[1].abs() >= form.lambda[2].abs());
        assert!(form.is_completely_positive(1e-12));
    }

    #[test]
    fn entanglement_breaking_threshold() {
        assert!(is_entanglement_breaking_unital(&QubitChannel::werner(1.0 / 3.0).unwrap()).unwrap());
        assert!(!is_entanglement_breaking_unital(&QubitChannel::werner(0.5).unwrap()).unwrap());
        assert!(is_entanglement_breaking_unital(&QubitChannel::werner(0.0).unwrap()).unwrap());
    }

    #[test]
    fn validation_errors() {
        assert!(QubitChannel::from_kraus(vec![]).is_err());
        assert!(QubitChannel::from_kraus(vec![Mat2::identity().scale(0.5)]).is_err());
        let mut t = Matrix4::identity();
        t[(0, 1)] = 0.1;
        assert!(QubitChannel::from_ptm(t).is_err());
        // transpose map: trace preserving but not completely positive
        let t = Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, -1.0, 1.0));
        assert!(matches!(QubitChannel::from_ptm(t), Err(Error::Validation(_))));
        assert!(QubitChannel::from_choi(Mat4::identity()).is_err());
    }

    #[test]
    fn apply_on_second_reproduces_choi() {
        let ch = QubitChannel::werner(0.6).unwrap();
        let out = apply_on_second(&ch, &unnormalized_max_entangled());
        assert!(max_abs(&(out - ch.choi())) < 1e-15);
        let werner_state = TwoQubitState::werner(0.6).unwrap();
        let out = apply_on_second(&ch, TwoQubitState::maximally_entangled().matrix());
        assert!(max_abs(&(out - werner_state.matrix())) < 1e-15);
    }

    #[test]
    fn class_tags_round_trip() {
        for class in ChannelClass::ALL {
            assert_eq!(class.tag().parse::<ChannelClass>().unwrap(), class);
        }
        assert!("X".parse::<ChannelClass>().is_err());
        assert!(ChannelClass::Depolarizing.is_subset_of(ChannelClass::EntanglementBreaking));
        assert!(!ChannelClass::Depolarizing.is_subset_of(ChannelClass::RandomUnitary));
    }
}
