//! Pauli-basis linear algebra for one and two qubits.
//!
//! Two-qubit operators act on `H_1 ⊗ H_2` with the computational basis
//! ordered `|00⟩, |01⟩, |10⟩, |11⟩`, i.e. index `2 * i + a` for `|i⟩ ⊗ |a⟩`.

use nalgebra::{Matrix2, Matrix3, Matrix4, Vector2, Vector3, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::svd;

pub type Mat2 = Matrix2<Complex64>;
pub type Mat4 = Matrix4<Complex64>;

/// Tolerance for Hermiticity, trace and positivity checks on user input.
pub const VALIDATION_TOL: f64 = 1e-9;
/// Tolerance on the norm of a pure state.
pub const NORM_TOL: f64 = 1e-12;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Pauli matrix `σ_index`, with `σ_0 = I`.
pub fn pauli(index: usize) -> Mat2 {
    match index {
        0 => Mat2::new(ONE, ZERO, ZERO, ONE),
        1 => Mat2::new(ZERO, ONE, ONE, ZERO),
        2 => Mat2::new(ZERO, -I, I, ZERO),
        3 => Mat2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("Pauli index {index} out of range"),
    }
}

pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

/// Largest entry modulus.
pub fn max_abs<const R: usize, const C: usize>(m: &nalgebra::SMatrix<Complex64, R, C>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn is_unitary(u: &Mat2, tol: f64) -> bool {
    max_abs(&(u.adjoint() * u - Mat2::identity())) <= tol
}

/// Largest entry of `|m - m†|`.
pub fn hermiticity_defect<const N: usize>(
    m: &nalgebra::SMatrix<Complex64, N, N>,
) -> f64 {
    max_abs(&(m - m.adjoint()))
}

fn hermitize<const N: usize>(
    m: &nalgebra::SMatrix<Complex64, N, N>,
) -> nalgebra::SMatrix<Complex64, N, N> {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian 2×2.
pub fn hermitian_eigen2(m: &Mat2) -> (Vector2<f64>, Mat2) {
    let eig = hermitize(m).symmetric_eigen();
    sort_eigen2(eig.eigenvalues, eig.eigenvectors)
}

/// Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian 4×4.
pub fn hermitian_eigen4(m: &Mat4) -> (Vector4<f64>, Mat4) {
    let eig = hermitize(m).symmetric_eigen();
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = Vector4::from_fn(|k, _| eig.eigenvalues[order[k]]);
    let mut vectors = Mat4::zeros();
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

fn sort_eigen2(values: Vector2<f64>, vectors: Mat2) -> (Vector2<f64>, Mat2) {
    if values[0] <= values[1] {
        (values, vectors)
    } else {
        let mut v = Mat2::zeros();
        v.set_column(0, &vectors.column(1));
        v.set_column(1, &vectors.column(0));
        (Vector2::new(values[1], values[0]), v)
    }
}

pub fn min_eigenvalue4(m: &Mat4) -> f64 {
    hermitian_eigen4(m).0[0]
}

pub fn max_eigenvalue4(m: &Mat4) -> f64 {
    hermitian_eigen4(m).0[3]
}

/// Square root of a PSD 2×2 matrix; negative rounding residue is clamped.
pub fn sqrt_psd2(m: &Mat2) -> Mat2 {
    let (vals, vecs) = hermitian_eigen2(m);
    let d = Mat2::from_diagonal(&Vector2::new(c(vals[0].max(0.0).sqrt()), c(vals[1].max(0.0).sqrt())));
    vecs * d * vecs.adjoint()
}

/// Validate a density matrix and return its cleaned-up form.
///
/// Hermiticity, unit trace and positivity are checked at [`VALIDATION_TOL`].
/// Accepted input is made exactly Hermitian, negative eigenvalue residue is
/// clamped to zero, and the trace is renormalized.
fn validate_density<const N: usize>(
    m: &nalgebra::SMatrix<Complex64, N, N>,
    eigen: impl Fn(&nalgebra::SMatrix<Complex64, N, N>) -> (Vec<f64>, nalgebra::SMatrix<Complex64, N, N>),
) -> Result<nalgebra::SMatrix<Complex64, N, N>> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::validation("matrix has non-finite entries"));
    }
    let defect = hermiticity_defect(m);
    if defect > VALIDATION_TOL {
        return Err(Error::validation(format!("matrix is not Hermitian (defect {defect:.3e})")));
    }
    let h = hermitize(m);
    let tr = h.trace().re;
    if (tr - 1.0).abs() > VALIDATION_TOL {
        return Err(Error::validation(format!("trace is {tr}, expected 1")));
    }
    let (vals, vecs) = eigen(&h);
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -VALIDATION_TOL {
        return Err(Error::validation(format!("matrix is not positive semidefinite (eigenvalue {min:.3e})")));
    }
    let cleaned = if min < 0.0 {
        let d = nalgebra::SMatrix::<Complex64, N, N>::from_fn(|r, k| if r == k { c(vals[r].max(0.0)) } else { ZERO });
        hermitize(&(vecs * d * vecs.adjoint()))
    } else {
        h
    };
    let tr = cleaned.trace().re;
    Ok(cleaned.unscale(tr))
}

/// Normalized two-component state vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureState(Vector2<Complex64>);

impl PureState {
    /// Amplitudes must already be normalized (within [`NORM_TOL`]).
    pub fn new(a0: Complex64, a1: Complex64) -> Result<Self> {
        let n2 = a0.norm_sqr() + a1.norm_sqr();
        if !n2.is_finite() || (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::validation(format!("state has squared norm {n2}, expected 1")));
        }
        Ok(PureState(Vector2::new(a0, a1)))
    }

    /// Normalizes any nonzero vector.
    pub fn normalized(a0: Complex64, a1: Complex64) -> Result<Self> {
        let n = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        if !n.is_finite() || n < 1e-15 {
            return Err(Error::validation("cannot normalize a zero vector"));
        }
        Ok(PureState(Vector2::new(a0 / n, a1 / n)))
    }

    pub fn zero() -> Self {
        PureState(Vector2::new(ONE, ZERO))
    }

    pub fn one() -> Self {
        PureState(Vector2::new(ZERO, ONE))
    }

    /// `(|0⟩ + |1⟩)/√2`
    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState(Vector2::new(c(h), c(h)))
    }

    pub fn minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState(Vector2::new(c(h), c(-h)))
    }

    /// `(|0⟩ + i|1⟩)/√2`
    pub fn plus_y() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState(Vector2::new(c(h), Complex64::new(0.0, h)))
    }

    pub fn minus_y() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState(Vector2::new(c(h), Complex64::new(0.0, -h)))
    }

    /// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (s, co) = (0.5 * theta).sin_cos();
        PureState(Vector2::new(c(co), Complex64::from_polar(s, phi)))
    }

    /// Normalized `a·x + b·y`.
    pub fn superposition(a: Complex64, x: &PureState, b: Complex64, y: &PureState) -> Result<Self> {
        let v = x.0 * a + y.0 * b;
        PureState::normalized(v[0], v[1])
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        [self.0[0], self.0[1]]
    }

    pub fn vector(&self) -> &Vector2<Complex64> {
        &self.0
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.0.dotc(&other.0)
    }

    /// `|⟨self|other⟩|`, clamped to `[0, 1]`.
    pub fn overlap(&self, other: &PureState) -> f64 {
        self.inner(other).norm().min(1.0)
    }

    pub fn projector(&self) -> Mat2 {
        self.0 * self.0.adjoint()
    }

    /// The fixed orthogonal complement `(-ā₁, ā₀)`.
    pub fn orthogonal(&self) -> Self {
        PureState(Vector2::new(-self.0[1].conj(), self.0[0].conj()))
    }

    pub fn conjugate(&self) -> Self {
        PureState(self.0.map(|z| z.conj()))
    }

    pub fn transformed(&self, u: &Mat2) -> Self {
        let v = u * self.0;
        let n = v.norm();
        PureState(v.unscale(n))
    }

    pub fn density(&self) -> QubitState {
        QubitState(self.projector())
    }

    pub fn bloch_vector(&self) -> BlochVector {
        self.density().bloch_vector()
    }
}

/// Single-qubit density operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitState(Mat2);

impl QubitState {
    pub fn new(m: Mat2) -> Result<Self> {
        validate_density(&m, |h| {
            let (v, e) = hermitian_eigen2(h);
            (v.iter().copied().collect(), e)
        })
        .map(QubitState)
    }

    pub fn maximally_mixed() -> Self {
        QubitState(Mat2::identity().scale(0.5))
    }

    /// `(I + b·σ)/2`; requires `‖b‖ ≤ 1`.
    pub fn from_bloch(b: &BlochVector) -> Result<Self> {
        if b.norm() > 1.0 + VALIDATION_TOL {
            return Err(Error::validation(format!("Bloch vector length {} exceeds 1", b.norm())));
        }
        let m = (pauli(0) + pauli(1) * c(b.0[0]) + pauli(2) * c(b.0[1]) + pauli(3) * c(b.0[2])).scale(0.5);
        Ok(QubitState(m))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        QubitState(self.0.transpose())
    }

    pub fn bloch_vector(&self) -> BlochVector {
        BlochVector(Vector3::from_fn(|i, _| (pauli(i + 1) * self.0).trace().re))
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        let (v, _) = hermitian_eigen2(&self.0);
        [v[0], v[1]]
    }
}

/// Which tensor factor of a two-qubit operator to trace out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Two-qubit density operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitState(Mat4);

impl TwoQubitState {
    pub fn new(m: Mat4) -> Result<Self> {
        validate_density(&m, |h| {
            let (v, e) = hermitian_eigen4(h);
            (v.iter().copied().collect(), e)
        })
        .map(TwoQubitState)
    }

    /// `P₊ = |ψ₊⟩⟨ψ₊|` with `|ψ₊⟩ = (|00⟩ + |11⟩)/√2`.
    pub fn maximally_entangled() -> Self {
        TwoQubitState(unnormalized_max_entangled().scale(0.5))
    }

    pub fn maximally_mixed() -> Self {
        TwoQubitState(Mat4::identity().scale(0.25))
    }

    pub fn product(a: &QubitState, b: &QubitState) -> Self {
        TwoQubitState(kron(a.matrix(), b.matrix()))
    }

    /// Pure state from four amplitudes (normalized here).
    pub fn pure(amplitudes: Vector4<Complex64>) -> Result<Self> {
        let n = amplitudes.norm();
        if !n.is_finite() || n < 1e-15 {
            return Err(Error::validation("cannot normalize a zero vector"));
        }
        let v = amplitudes.unscale(n);
        Ok(TwoQubitState(v * v.adjoint()))
    }

    /// Convex mixture; weights must be non-negative and sum to one.
    pub fn mixture(parts: &[(f64, TwoQubitState)]) -> Result<Self> {
        let total: f64 = parts.iter().map(|(w, _)| *w).sum();
        if parts.iter().any(|(w, _)| *w < -VALIDATION_TOL) || (total - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::validation("mixture weights must be a probability distribution"));
        }
        let m = parts.iter().fold(Mat4::zeros(), |acc, (w, s)| acc + s.0.scale(*w));
        TwoQubitState::new(m)
    }

    /// `(1 - w) I/4 + w P₊`, i.e. `(id ⊗ Ψ_w) P₊` for the Werner channel.
    pub fn werner(w: f64) -> Result<Self> {
        if !(-1.0 / 3.0..=1.0).contains(&w) {
            return Err(Error::validation(format!("Werner parameter {w} outside [-1/3, 1]")));
        }
        Ok(TwoQubitState(
            Self::maximally_entangled().0.scale(w) + Self::maximally_mixed().0.scale(1.0 - w),
        ))
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    /// `(V₁ ⊗ V₂) τ (V₁ ⊗ V₂)†`
    pub fn local_conjugate(&self, v1: &Mat2, v2: &Mat2) -> Self {
        let k = kron(v1, v2);
        TwoQubitState(hermitize(&(k * self.0 * k.adjoint())))
    }

    pub fn partial_trace(&self, which: Subsystem) -> QubitState {
        QubitState(partial_trace_op(&self.0, which))
    }

    /// Bloch vector of the second marginal `tr₁ τ`.
    pub fn second_marginal_bloch(&self) -> BlochVector {
        self.partial_trace(Subsystem::First).bloch_vector()
    }

    pub fn correlation_matrix(&self) -> CorrelationMatrix {
        CorrelationMatrix(Matrix3::from_fn(|i, j| {
            (self.0 * kron(&pauli(i + 1), &pauli(j + 1))).trace().re
        }))
    }

    /// `tr[τ X]`, real part.
    pub fn expectation(&self, x: &Mat4) -> f64 {
        (self.0 * x).trace().re
    }
}

/// Partial trace of an arbitrary 4×4 operator.
pub fn partial_trace_op(m: &Mat4, which: Subsystem) -> Mat2 {
    Mat2::from_fn(|r, col| match which {
        Subsystem::First => m[(r, col)] + m[(2 + r, 2 + col)],
        Subsystem::Second => m[(2 * r, 2 * col)] + m[(2 * r + 1, 2 * col + 1)],
    })
}

/// `P'₊ = Σ_{ij} |i⟩⟨j| ⊗ |i⟩⟨j|`.
pub fn unnormalized_max_entangled() -> Mat4 {
    let mut m = Mat4::zeros();
    for (r, col) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        m[(r, col)] = ONE;
    }
    m
}

/// Real 3-vector of Pauli expectations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector(pub Vector3<f64>);

impl BlochVector {
    pub fn new(b1: f64, b2: f64, b3: f64) -> Self {
        BlochVector(Vector3::new(b1, b2, b3))
    }

    pub fn norm(&self) -> f64 {
        euclidean_norm(self)
    }

    pub fn components(&self) -> [f64; 3] {
        [self.0[0], self.0[1], self.0[2]]
    }
}

/// Real 3×3 matrix `N_ij = tr[τ (σ_i ⊗ σ_j)]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationMatrix(pub Matrix3<f64>);

impl CorrelationMatrix {
    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn singular_values(&self) -> [f64; 3] {
        svd::singular_values(&self.0)
    }

    pub fn kyfan_norm(&self) -> f64 {
        kyfan_norm(&self.0)
    }

    pub fn spectral_norm(&self) -> f64 {
        spectral_norm(&self.0)
    }

    /// `s₁ + s₂ − sgn(det N)·s₃`, the largest `tr[Σ N O]` over rotations `O`
    /// with `Σ = diag(1, −1, 1)`. Equals the Ky Fan norm when `det N ≤ 0`.
    pub fn oriented_kyfan(&self) -> f64 {
        let [s1, s2, s3] = self.singular_values();
        if self.0.determinant() > 0.0 {
            s1 + s2 - s3
        } else {
            s1 + s2 + s3
        }
    }
}

pub fn bloch_vector(rho: &QubitState) -> BlochVector {
    rho.bloch_vector()
}

pub fn correlation_matrix(tau: &TwoQubitState) -> CorrelationMatrix {
    tau.correlation_matrix()
}

pub fn partial_trace(tau: &TwoQubitState, which: Subsystem) -> QubitState {
    tau.partial_trace(which)
}

pub fn euclidean_norm(v: &BlochVector) -> f64 {
    let [a, b, c] = v.components();
    (a * a + b * b + c * c).sqrt()
}

/// Sum of singular values, `tr √(X Xᵀ)`.
pub fn kyfan_norm(x: &Matrix3<f64>) -> f64 {
    svd::singular_values(x).iter().sum()
}

/// Largest singular value (operator norm induced by the Euclidean norm).
pub fn spectral_norm(x: &Matrix3<f64>) -> f64 {
    svd::singular_values(x)[0]
}

/// Rotation induced by conjugation: `O(U)_{li} = ½ tr[σ_l U σ_i U†]`.
pub fn rotation_of(u: &Mat2) -> Matrix3<f64> {
    let ud = u.adjoint();
    let conj: [Mat2; 3] = [u * pauli(1) * ud, u * pauli(2) * ud, u * pauli(3) * ud];
    Matrix3::from_fn(|l, i| 0.5 * (pauli(l + 1) * conj[i]).trace().re)
}

/// SU(2) lift of a rotation in SO(3), inverse to [`rotation_of`] up to sign.
///
/// The representative has `Re U₀₀ ≥ 0`.
pub fn unitary_from_rotation(r: &Matrix3<f64>) -> Mat2 {
    let (w, x, y, z) = rotation_to_quaternion(r);
    let (w, x, y, z) = if w < 0.0 { (-w, -x, -y, -z) } else { (w, x, y, z) };
    // U = w I - i (x σ₁ + y σ₂ + z σ₃)
    Mat2::new(
        Complex64::new(w, -z),
        Complex64::new(-y, -x),
        Complex64::new(y, -x),
        Complex64::new(w, z),
    )
}

fn rotation_to_quaternion(r: &Matrix3<f64>) -> (f64, f64, f64, f64) {
    let tr = r[(0, 0)] + r[(1, 1)] + r[(2, 2)];
    let (w, x, y, z) = if tr > 0.0 {
        let s = (tr + 1.0).sqrt() * 2.0;
        (0.25 * s, (r[(2, 1)] - r[(1, 2)]) / s, (r[(0, 2)] - r[(2, 0)]) / s, (r[(1, 0)] - r[(0, 1)]) / s)
    } else if r[(0, 0)] > r[(1, 1)] && r[(0, 0)] > r[(2, 2)] {
        let s = (1.0 + r[(0, 0)] - r[(1, 1)] - r[(2, 2)]).sqrt() * 2.0;
        ((r[(2, 1)] - r[(1, 2)]) / s, 0.25 * s, (r[(0, 1)] + r[(1, 0)]) / s, (r[(0, 2)] + r[(2, 0)]) / s)
    } else if r[(1, 1)] > r[(2, 2)] {
        let s = (1.0 + r[(1, 1)] - r[(0, 0)] - r[(2, 2)]).sqrt() * 2.0;
        ((r[(0, 2)] - r[(2, 0)]) / s, (r[(0, 1)] + r[(1, 0)]) / s, 0.25 * s, (r[(1, 2)] + r[(2, 1)]) / s)
    } else {
        let s = (1.0 + r[(2, 2)] - r[(0, 0)] - r[(1, 1)]).sqrt() * 2.0;
        ((r[(1, 0)] - r[(0, 1)]) / s, (r[(0, 2)] + r[(2, 0)]) / s, (r[(1, 2)] + r[(2, 1)]) / s, 0.25 * s)
    };
    let n = (w * w + x * x + y * y + z * z).sqrt();
    (w / n, x / n, y / n, z / n)
}

/// ZYZ Euler unitary `R_z(α) R_y(β) R_z(γ)`.
pub fn euler_unitary(alpha: f64, beta: f64, gamma: f64) -> Mat2 {
    let rz = |t: f64| Mat2::new(Complex64::from_polar(1.0, -0.5 * t), ZERO, ZERO, Complex64::from_polar(1.0, 0.5 * t));
    let (s, co) = (0.5 * beta).sin_cos();
    let ry = Mat2::new(c(co), c(-s), c(s), c(co));
    rz(alpha) * ry * rz(gamma)
}

/// Uhlmann fidelity `tr √(√σ ρ √σ)`.
///
/// Uses the qubit identity `F² = tr(ρσ) + 2√(det ρ det σ)`, which stays
/// accurate for pure states where the square-root route loses half the digits.
pub fn fidelity(rho: &QubitState, sigma: &QubitState) -> f64 {
    let overlap = (rho.matrix() * sigma.matrix()).trace().re;
    let dets = rho.matrix().determinant().re.max(0.0) * sigma.matrix().determinant().re.max(0.0);
    (overlap + 2.0 * dets.sqrt()).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn bloch_vectors_of_basic_states() {
        assert_eq!(QubitState::maximally_mixed().bloch_vector().components(), [0.0, 0.0, 0.0]);
        let b = PureState::zero().bloch_vector().components();
        assert!(close(b[0], 0.0, 1e-15) && close(b[2], 1.0, 1e-15));
        let b = PureState::plus().bloch_vector().components();
        assert!(close(b[0], 1.0, 1e-15) && close(b[1], 0.0, 1e-15) && close(b[2], 0.0, 1e-15));
        let b = PureState::plus_y().bloch_vector().components();
        assert!(close(b[1], 1.0, 1e-15));
    }

    #[test]
    fn state_validation_rejects_bad_input() {
        let non_hermitian = Mat2::new(c(0.5), c(0.1), c(0.0), c(0.5));
        assert!(matches!(QubitState::new(non_hermitian), Err(Error::Validation(_))));
        let wrong_trace = Mat2::identity();
        assert!(QubitState::new(wrong_trace).is_err());
        let negative = Mat2::new(c(1.5), ZERO, ZERO, c(-0.5));
        assert!(QubitState::new(negative).is_err());
        let mut nan = Mat2::identity().scale(0.5);
        nan[(0, 1)] = c(f64::NAN);
        assert!(QubitState::new(nan).is_err());
    }

    #[test]
    fn state_validation_clamps_rounding() {
        let slightly_negative = Mat2::new(c(1.0 + 5e-10), ZERO, ZERO, c(-5e-10));
        let s = QubitState::new(slightly_negative).unwrap();
        assert!(s.eigenvalues()[0] >= 0.0);
        assert!(close(s.matrix().trace().re, 1.0, 1e-15));
    }

    #[test]
    fn pure_state_normalization() {
        assert!(PureState::new(ONE, ONE).is_err());
        let s = PureState::normalized(ONE, ONE).unwrap();
        assert!(close(s.inner(&s).re, 1.0, 1e-15));
        assert!(PureState::normalized(ZERO, ZERO).is_err());
        let psi = PureState::from_angles(0.7, 1.3);
        assert!(psi.inner(&psi.orthogonal()).norm() < 1e-15);
    }

    #[test]
    fn correlation_matrix_of_max_entangled() {
        let n = TwoQubitState::maximally_entangled().correlation_matrix();
        let expected = Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, 1.0));
        assert!((n.0 - expected).abs().max() < 1e-15);
        assert!(close(n.kyfan_norm(), 3.0, 1e-14));
        assert!(close(n.spectral_norm(), 1.0, 1e-14));
    }

    #[test]
    fn correlation_matrix_of_mixed_and_product() {
        let n = TwoQubitState::maximally_mixed().correlation_matrix();
        assert_eq!(n.0, Matrix3::zeros());
        assert_eq!(n.kyfan_norm(), 0.0);
        assert_eq!(n.spectral_norm(), 0.0);

        // independent route: explicit dense traces with hand-written σ⊗σ
        let zz = TwoQubitState::product(&PureState::zero().density(), &PureState::zero().density());
        let mut dense = [[0.0; 3]; 3];
        for (i, row) in dense.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let op = kron(&pauli(i + 1), &pauli(j + 1));
                *entry = (0..4).map(|k| (zz.matrix().row(k) * op.column(k))[0].re).sum();
            }
        }
        assert_eq!(dense, [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]]);
        let n = zz.correlation_matrix();
        assert!((n.0 - Matrix3::from_row_slice(&dense.concat())).abs().max() < 1e-15);
    }

    #[test]
    fn partial_traces() {
        let pm = TwoQubitState::maximally_entangled();
        assert!(max_abs(&(pm.partial_trace(Subsystem::First).matrix() - Mat2::identity().scale(0.5))) < 1e-15);
        let s01 = TwoQubitState::product(&PureState::zero().density(), &PureState::one().density());
        assert_eq!(s01.partial_trace(Subsystem::First).matrix(), &PureState::one().projector());
        assert_eq!(s01.partial_trace(Subsystem::Second).matrix(), &PureState::zero().projector());
    }

    #[test]
    fn norms() {
        assert_eq!(euclidean_norm(&BlochVector::new(1.0, 0.0, 0.0)), 1.0);
        assert_eq!(euclidean_norm(&BlochVector::new(0.0, 0.0, 0.0)), 0.0);
        assert!(close(euclidean_norm(&BlochVector::new(1.0, 1.0, 1.0)), 3f64.sqrt(), 1e-15));

        let (x, y) = (FRAC_1_SQRT_2, FRAC_1_SQRT_2);
        let m = Matrix3::from_diagonal(&Vector3::new(x * y, ((1.0 - x * x) * (1.0 - y * y)).sqrt(), 0.0));
        assert!(close(kyfan_norm(&m), 1.0, 1e-15));
    }

    #[test]
    fn werner_state_correlations() {
        let n = TwoQubitState::werner(0.4).unwrap().correlation_matrix();
        assert!(close(n.kyfan_norm(), 1.2, 1e-14));
        assert!(TwoQubitState::werner(1.5).is_err());
    }

    #[test]
    fn rotation_round_trip() {
        for &(a, b, g) in &[(0.3, 1.1, -0.7), (0.0, std::f64::consts::PI, 0.0), (2.0, 3.0, 1.0), (0.0, 0.0, 0.0)] {
            let u = euler_unitary(a, b, g);
            let r = rotation_of(&u);
            assert!((r.transpose() * r - Matrix3::identity()).abs().max() < 1e-12);
            assert!(close(r.determinant(), 1.0, 1e-12));
            let lifted = unitary_from_rotation(&r);
            assert!((rotation_of(&lifted) - r).abs().max() < 1e-12);
            assert!(lifted[(0, 0)].re >= 0.0);
        }
    }

    #[test]
    fn rotation_of_pauli_x() {
        let r = rotation_of(&pauli(1));
        assert!((r - Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, -1.0))).abs().max() < 1e-15);
    }

    #[test]
    fn fidelity_matches_square_root_route() {
        let rho = QubitState::from_bloch(&BlochVector::new(0.2, -0.3, 0.5)).unwrap();
        let sigma = QubitState::from_bloch(&BlochVector::new(-0.6, 0.1, 0.4)).unwrap();
        let s = sqrt_psd2(sigma.matrix());
        let (vals, _) = hermitian_eigen2(&(s * rho.matrix() * s));
        let via_sqrt: f64 = vals.iter().map(|v| v.max(0.0).sqrt()).sum();
        assert!(close(fidelity(&rho, &sigma), via_sqrt, 1e-12));

        let psi = PureState::from_angles(0.4, 0.2);
        let phi = PureState::from_angles(1.4, -0.9);
        assert!(close(fidelity(&psi.density(), &phi.density()), psi.overlap(&phi), 1e-14));
    }
}
