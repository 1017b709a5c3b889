//! Two-qubit density operators and a handful of named single-qubit kets.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::matrix::{kron, kron_ket, ComplexMatrix};
use crate::pauli::pauli;
use crate::scalar::{c, cr, Real};

/// Validation floor for hermiticity, positivity and trace bounds.
pub const STATE_TOLERANCE: f64 = 1e-12;

pub(crate) fn state_tolerance<T: Real>() -> T {
    T::lit(STATE_TOLERANCE).max(T::epsilon() * T::lit(1e3))
}

/// Subnormalized two-qubit density matrix. The trace records the success
/// probability of whatever filtration produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState<T: Real> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> QuantumState<T> {
    /// Validates hermiticity, positivity and `0 ≤ Tr ρ ≤ 1`.
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        let tol = state_tolerance::<T>();
        if matrix.dim() != 4 {
            return Err(invalid(format!(
                "two-qubit state must be 4x4, got {0}x{0}",
                matrix.dim()
            )));
        }
        if matrix
            .entries()
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(invalid("state has non-finite entries"));
        }
        if !matrix.is_hermitian(tol) {
            return Err(invalid("state is not Hermitian"));
        }
        let tr = matrix.trace().re;
        if tr < -tol || tr > T::one() + tol {
            return Err(invalid(format!("state trace {tr} outside [0, 1]")));
        }
        let (vals, _) = matrix.hermitian_eigen();
        if vals[0] < -tol {
            return Err(invalid(format!(
                "state has negative eigenvalue {}",
                vals[0]
            )));
        }
        Ok(Self { matrix })
    }

    /// For outputs of maps already known to preserve the invariants.
    pub(crate) fn from_trusted(matrix: ComplexMatrix<T>) -> Self {
        debug_assert_eq!(matrix.dim(), 4);
        Self { matrix }
    }

    pub fn zero() -> Self {
        Self::from_trusted(ComplexMatrix::zeros(4))
    }

    /// `|ψ⟩⟨ψ|` for a normalized four-component ket.
    pub fn from_pure(ket: &[Complex<T>]) -> Result<Self> {
        if ket.len() != 4 {
            return Err(invalid("two-qubit ket must have 4 components"));
        }
        check_normalized(ket)?;
        Ok(Self::from_trusted(ComplexMatrix::outer(ket)))
    }

    /// `G G† / Tr(G G†)`; any nonzero `G` gives a valid normalized state.
    pub fn from_factor(g: &ComplexMatrix<T>) -> Result<Self> {
        if g.dim() != 4 {
            return Err(invalid("factor must be 4x4"));
        }
        let m = g.try_mul(&g.adjoint())?;
        let tr = m.trace().re;
        if tr.is_nan() || tr <= T::zero() {
            return Err(invalid("factor must be nonzero"));
        }
        // Remove the round-off anti-Hermitian part.
        let m = (&m + &m.adjoint()).scale_real(T::half() / tr);
        Ok(Self::from_trusted(m))
    }

    /// `|++⟩⟨++| = ¼(σ₀⊗σ₀ + σ₀⊗σ₁ + σ₁⊗σ₀ + σ₁⊗σ₁)`.
    pub fn plus_plus() -> Self {
        Self::from_trusted(ComplexMatrix::from_real_rows([[0.25; 4]; 4]))
    }

    pub fn bell_phi_plus() -> Self {
        let h = T::frac_1_sqrt_2();
        Self::from_trusted(ComplexMatrix::outer(&[
            c(h, T::zero()),
            Complex::zero(),
            Complex::zero(),
            c(h, T::zero()),
        ]))
    }

    pub fn bell_phi_minus() -> Self {
        let h = T::frac_1_sqrt_2();
        Self::from_trusted(ComplexMatrix::outer(&[
            c(h, T::zero()),
            Complex::zero(),
            Complex::zero(),
            c(-h, T::zero()),
        ]))
    }

    pub fn maximally_mixed() -> Self {
        Self::from_trusted(ComplexMatrix::identity(4).scale_real(T::lit(0.25)))
    }

    /// `ρ₁ ⊗ ρ₂` with `ρ = ½(σ₀ + r·σ)` for Bloch vectors with `|r| ≤ 1`.
    pub fn product(bloch1: [T; 3], bloch2: [T; 3]) -> Result<Self> {
        let a = qubit_density(bloch1)?;
        let b = qubit_density(bloch2)?;
        Ok(Self::from_trusted(kron(&a, &b)?))
    }

    pub fn product_pure(ket1: &[Complex<T>; 2], ket2: &[Complex<T>; 2]) -> Result<Self> {
        check_normalized(ket1)?;
        check_normalized(ket2)?;
        Ok(Self::from_trusted(ComplexMatrix::outer(&kron_ket(
            ket1, ket2,
        ))))
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        self.matrix.hermitian_eigen().0
    }

    /// Entrywise sum; the caller is responsible for keeping the trace ≤ 1.
    pub fn add(&self, other: &Self) -> Self {
        Self::from_trusted(&self.matrix + &other.matrix)
    }

    /// Conjugates by `op` and scales by `weight`, i.e. `weight · op ρ op†`.
    pub(crate) fn sandwich(&self, op: &ComplexMatrix<T>, weight: T) -> Self {
        let m = op.conjugate(&self.matrix).expect("4x4 operators");
        Self::from_trusted(m.scale_real(weight))
    }

    pub fn approx_eq(&self, other: &Self, tolerance: T) -> bool {
        self.matrix.approx_eq(&other.matrix, tolerance)
    }
}

fn qubit_density<T: Real>(r: [T; 3]) -> Result<ComplexMatrix<T>> {
    let norm2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
    if norm2.is_nan() || norm2 > T::one() + state_tolerance::<T>() {
        return Err(invalid(format!(
            "Bloch vector length {} exceeds 1",
            norm2.sqrt()
        )));
    }
    let mut m = pauli::<T>(0)?;
    for (k, x) in r.iter().enumerate() {
        m = &m + &pauli::<T>(k + 1)?.scale_real(*x);
    }
    Ok(m.scale_real(T::half()))
}

pub(crate) fn check_normalized<T: Real>(ket: &[Complex<T>]) -> Result<()> {
    let n: T = ket
        .iter()
        .map(|z| z.norm_sqr())
        .fold(T::zero(), |a, b| a + b);
    if (n - T::one()).abs() > T::lit(1e-10).max(T::epsilon() * T::lit(1e3)) {
        return Err(invalid(format!("ket is not normalized (norm² = {n})")));
    }
    Ok(())
}

/// Named single-qubit kets in the computational basis.
pub mod kets {
    use super::*;

    pub fn zero<T: Real>() -> [Complex<T>; 2] {
        [Complex::one(), Complex::zero()]
    }

    pub fn one<T: Real>() -> [Complex<T>; 2] {
        [Complex::zero(), Complex::one()]
    }

    /// `σ₁` eigenvector with eigenvalue `+1`.
    pub fn plus<T: Real>() -> [Complex<T>; 2] {
        let h = T::frac_1_sqrt_2();
        [c(h, T::zero()), c(h, T::zero())]
    }

    pub fn minus<T: Real>() -> [Complex<T>; 2] {
        let h = T::frac_1_sqrt_2();
        [c(h, T::zero()), c(-h, T::zero())]
    }

    /// `σ₂` eigenvector with eigenvalue `+1`.
    pub fn left<T: Real>() -> [Complex<T>; 2] {
        let h = T::frac_1_sqrt_2();
        [c(h, T::zero()), c(T::zero(), h)]
    }

    pub fn right<T: Real>() -> [Complex<T>; 2] {
        let h = T::frac_1_sqrt_2();
        [c(h, T::zero()), c(T::zero(), -h)]
    }

    /// Pure state with unit Bloch vector `r`.
    pub fn from_bloch<T: Real>(r: [T; 3]) -> Result<[Complex<T>; 2]> {
        let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if (norm - T::one()).abs() > T::lit(1e-9) {
            return Err(invalid(format!(
                "pure polarization needs a unit Bloch vector, got length {norm}"
            )));
        }
        let z = (r[2] / norm).max(-T::one()).min(T::one());
        let half_theta = z.acos() * T::half();
        let phi = r[1].atan2(r[0]);
        Ok([
            cr::<T>(1.0) * half_theta.cos(),
            Complex::from_polar(half_theta.sin(), phi),
        ])
    }

    pub fn bloch<T: Real>(ket: &[Complex<T>; 2]) -> [T; 3] {
        let coh = ket[0].conj() * ket[1];
        [
            T::two() * coh.re,
            T::two() * coh.im,
            ket[0].norm_sqr() - ket[1].norm_sqr(),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{expectation, PauliString};

    #[test]
    fn plus_plus_matches_pauli_expansion() {
        let mut sum = ComplexMatrix::<f64>::zeros(4);
        for s in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            sum = &sum + &PauliString::new(s.0, s.1).unwrap().matrix();
        }
        let expected = sum.scale_real(0.25);
        assert!(QuantumState::<f64>::plus_plus()
            .matrix()
            .approx_eq(&expected, 1e-15));
        let from_kets = QuantumState::product_pure(&kets::plus::<f64>(), &kets::plus()).unwrap();
        assert!(from_kets.approx_eq(&QuantumState::plus_plus(), 1e-15));
    }

    #[test]
    fn bell_expectations() {
        let phi = QuantumState::<f64>::bell_phi_plus();
        let e33 = expectation(&phi, &PauliString::S33.matrix()).unwrap();
        let e22 = expectation(&phi, &PauliString::S22.matrix()).unwrap();
        assert!((e33 - 1.0).abs() < 1e-15);
        assert!((e22 + 1.0).abs() < 1e-15);
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let not_psd = ComplexMatrix::<f64>::diag(&[cr(1.0), cr(-0.5), cr(0.25), cr(0.25)]);
        assert!(QuantumState::new(not_psd).is_err());
        let too_big = ComplexMatrix::<f64>::identity(4).scale_real(0.5);
        assert!(QuantumState::new(too_big).is_err());
        let mut non_herm = ComplexMatrix::<f64>::identity(4).scale_real(0.25);
        non_herm.set(0, 1, cr(0.1));
        assert!(QuantumState::new(non_herm).is_err());
        assert!(QuantumState::new(ComplexMatrix::<f64>::identity(2)).is_err());
        assert!(QuantumState::new(QuantumState::<f64>::plus_plus().into_matrix()).is_ok());
    }

    #[test]
    fn product_state_from_bloch_vectors() {
        let rho = QuantumState::<f64>::product([1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]).unwrap();
        let e11 = expectation(&rho, &PauliString::S11.matrix()).unwrap();
        assert!((e11 + 1.0).abs() < 1e-15);
        assert!(QuantumState::<f64>::product([1.0, 1.0, 0.0], [0.0; 3]).is_err());
    }

    #[test]
    fn bloch_round_trip() {
        for r in [
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, -1.0],
            [0.6, 0.0, 0.8],
        ] {
            let ket = kets::from_bloch::<f64>(r).unwrap();
            let back = kets::bloch(&ket);
            for k in 0..3 {
                assert!((back[k] - r[k]).abs() < 1e-12);
            }
        }
        assert!(kets::from_bloch::<f64>([0.5, 0.0, 0.0]).is_err());
    }
}
