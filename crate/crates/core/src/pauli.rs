//! Pauli operators, two-qubit Pauli strings and the product identities behind
//! the contextuality witness.
//!
//! Conventions: basis order `|00⟩, |01⟩, |10⟩, |11⟩` with qubit 1 the left
//! tensor factor; `σ₃ = diag(1, −1)`; `σ₂ = (0, −i; i, 0)`, so that
//! `|L⟩ = (|0⟩ + i|1⟩)/√2` is its `+1` eigenvector.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::matrix::{commutator, kron, ComplexMatrix};
use crate::scalar::{ci, cr, Real};
use crate::state::QuantumState;

/// Single-qubit `σ_μ`, with `σ₀` the identity.
pub fn pauli<T: Real>(mu: usize) -> Result<ComplexMatrix<T>> {
    let z = cr::<T>(0.0);
    let one = cr::<T>(1.0);
    let m = match mu {
        0 => ComplexMatrix::identity(2),
        1 => ComplexMatrix::from_rows([[z, one], [one, z]]),
        2 => ComplexMatrix::from_rows([[z, ci(-1.0)], [ci(1.0), z]]),
        3 => ComplexMatrix::from_rows([[one, z], [z, cr(-1.0)]]),
        _ => return Err(invalid(format!("Pauli index {mu} is not in 0..=3"))),
    };
    Ok(m)
}

/// `σ_μ ⊗ σ_ν` on the two-qubit space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PauliString {
    mu: u8,
    nu: u8,
}

impl PauliString {
    pub const S11: Self = Self { mu: 1, nu: 1 };
    pub const S22: Self = Self { mu: 2, nu: 2 };
    pub const S33: Self = Self { mu: 3, nu: 3 };
    pub const S23: Self = Self { mu: 2, nu: 3 };
    pub const S32: Self = Self { mu: 3, nu: 2 };

    pub fn new(mu: usize, nu: usize) -> Result<Self> {
        if mu > 3 || nu > 3 {
            return Err(invalid(format!(
                "Pauli string indices ({mu}, {nu}) out of range"
            )));
        }
        Ok(Self {
            mu: mu as u8,
            nu: nu as u8,
        })
    }

    pub fn mu(self) -> usize {
        self.mu as usize
    }

    pub fn nu(self) -> usize {
        self.nu as usize
    }

    pub fn is_identity(self) -> bool {
        self.mu == 0 && self.nu == 0
    }

    pub fn all() -> impl Iterator<Item = Self> {
        (0..16u8).map(|k| Self {
            mu: k / 4,
            nu: k % 4,
        })
    }

    pub fn matrix<T: Real>(self) -> ComplexMatrix<T> {
        // Indices are validated at construction.
        let a = pauli::<T>(self.mu()).expect("valid index");
        let b = pauli::<T>(self.nu()).expect("valid index");
        kron(&a, &b).expect("2x2 factors")
    }
}

impl std::fmt::Display for PauliString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "s{}s{}", self.mu, self.nu)
    }
}

/// The five two-qubit operators entering the witness identities.
#[derive(Debug, Clone)]
pub struct IdentityOperands<T: Real> {
    pub s22: ComplexMatrix<T>,
    pub s33: ComplexMatrix<T>,
    pub s23: ComplexMatrix<T>,
    pub s32: ComplexMatrix<T>,
    pub s11: ComplexMatrix<T>,
}

impl<T: Real> Default for IdentityOperands<T> {
    fn default() -> Self {
        Self {
            s22: PauliString::S22.matrix(),
            s33: PauliString::S33.matrix(),
            s23: PauliString::S23.matrix(),
            s32: PauliString::S32.matrix(),
            s11: PauliString::S11.matrix(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck<T: Real> {
    pub name: &'static str,
    pub residual: T,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport<T: Real> {
    pub tolerance: T,
    pub checks: Vec<IdentityCheck<T>>,
}

impl<T: Real> IdentityReport<T> {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn max_residual(&self) -> T {
        self.checks
            .iter()
            .map(|c| c.residual)
            .fold(T::zero(), T::max)
    }
}

/// Checks both vanishing commutators and the two product identities equating
/// `−(σ₂⊗σ₂)(σ₃⊗σ₃)` and `(σ₂⊗σ₃)(σ₃⊗σ₂)` with `σ₁⊗σ₁`.
pub fn verify_identities<T: Real>(tolerance: T) -> Result<IdentityReport<T>> {
    check_identities(&IdentityOperands::default(), tolerance)
}

/// Same checks on caller-supplied operands; used for negative controls.
pub fn check_identities<T: Real>(
    ops: &IdentityOperands<T>,
    tolerance: T,
) -> Result<IdentityReport<T>> {
    if tolerance.is_nan() || tolerance < T::zero() {
        return Err(invalid("tolerance must be nonnegative"));
    }
    let zero = ComplexMatrix::zeros(4);
    let p2233 = ops.s22.try_mul(&ops.s33)?;
    let p2332 = ops.s23.try_mul(&ops.s32)?;
    let residuals = [
        (
            "[s22, s33] = 0",
            commutator(&ops.s22, &ops.s33)?.max_abs_diff(&zero),
        ),
        (
            "[s23, s32] = 0",
            commutator(&ops.s23, &ops.s32)?.max_abs_diff(&zero),
        ),
        ("-(s22)(s33) = s11", (-&p2233).max_abs_diff(&ops.s11)),
        ("(s23)(s32) = s11", p2332.max_abs_diff(&ops.s11)),
    ];
    Ok(IdentityReport {
        tolerance,
        checks: residuals
            .into_iter()
            .map(|(name, residual)| IdentityCheck {
                name,
                residual,
                pass: residual <= tolerance,
            })
            .collect(),
    })
}

/// Tolerance used to decide that an observable is Hermitian and that the
/// imaginary part of a trace is numerical noise.
pub const EXPECTATION_TOLERANCE: f64 = 1e-10;

/// `Tr(ρ·obs)` for a Hermitian observable.
pub fn expectation<T: Real>(rho: &QuantumState<T>, obs: &ComplexMatrix<T>) -> Result<T> {
    let tol = T::lit(EXPECTATION_TOLERANCE);
    if obs.dim() != 4 {
        return Err(invalid("observable must be a 4x4 matrix"));
    }
    if !obs.is_hermitian(tol) {
        return Err(invalid("observable is not Hermitian"));
    }
    let tr: Complex<T> = rho.matrix().try_mul(obs)?.trace();
    if tr.im.abs() > tol {
        return Err(Error::NumericIntegrity(format!(
            "expectation has imaginary part {:e}",
            tr.im.as_f64()
        )));
    }
    Ok(tr.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_conventions() {
        assert_eq!(pauli::<f64>(0).unwrap(), ComplexMatrix::identity(2));
        assert_eq!(
            pauli::<f64>(3).unwrap(),
            ComplexMatrix::from_real_rows([[1.0, 0.0], [0.0, -1.0]])
        );
        let s2 = pauli::<f64>(2).unwrap();
        assert_eq!(s2.get(0, 1), ci(-1.0));
        assert_eq!(&s2 * &s2, ComplexMatrix::identity(2));
        assert!(matches!(pauli::<f64>(4), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn kron_conventions() {
        let id = pauli::<f64>(0).unwrap();
        let z = pauli::<f64>(3).unwrap();
        let x = pauli::<f64>(1).unwrap();
        assert_eq!(kron(&id, &id).unwrap(), ComplexMatrix::identity(4));
        assert_eq!(
            kron(&z, &z).unwrap(),
            ComplexMatrix::diag(&[cr(1.0), cr(-1.0), cr(-1.0), cr(1.0)])
        );
        let ket00 = [cr(1.0), cr(0.0), cr(0.0), cr(0.0)];
        let flipped = kron(&x, &id).unwrap().apply(&ket00).unwrap();
        assert_eq!(flipped, vec![cr(0.0), cr(0.0), cr(1.0), cr(0.0)]);
    }

    #[test]
    fn witness_commutators_vanish() {
        let zero = ComplexMatrix::<f64>::zeros(4);
        let s22 = PauliString::S22.matrix::<f64>();
        let c1 = commutator(&s22, &PauliString::S33.matrix()).unwrap();
        let c2 = commutator(
            &PauliString::S23.matrix::<f64>(),
            &PauliString::S32.matrix(),
        )
        .unwrap();
        assert_eq!(c1, zero);
        assert_eq!(c2, zero);
        assert_eq!(commutator(&s22, &s22).unwrap(), zero);
    }

    #[test]
    fn identities_hold_exactly() {
        let report = verify_identities::<f64>(0.0).unwrap();
        assert!(report.all_pass());
        assert_eq!(report.max_residual(), 0.0);
        assert_eq!(report.checks.len(), 4);
        let f32_report = verify_identities::<f32>(0.0).unwrap();
        assert!(f32_report.all_pass());
    }

    #[test]
    fn negated_product_corner_entry() {
        // Hand expansion: (s22)(s33) = -(s11), and s11 maps |11> -> |00>.
        let prod = &PauliString::S22.matrix::<f64>() * &PauliString::S33.matrix();
        assert_eq!((-&prod).get(0, 3), cr(1.0));
    }

    #[test]
    fn corrupted_operand_fails() {
        let mut ops = IdentityOperands::<f64>::default();
        ops.s11.set(0, 3, cr(0.5));
        let report = check_identities(&ops, 1e-12).unwrap();
        assert!(!report.all_pass());
        assert!(report.checks[0].pass && report.checks[1].pass);
    }

    #[test]
    fn negative_tolerance_rejected() {
        assert!(verify_identities::<f64>(-1.0).is_err());
        assert!(verify_identities::<f64>(f64::NAN).is_err());
    }

    #[test]
    fn every_pauli_string_is_hermitian_involution() {
        let id = ComplexMatrix::<f64>::identity(4);
        for s in PauliString::all() {
            let m = s.matrix::<f64>();
            assert_eq!(m, m.adjoint(), "{s}");
            assert_eq!(&m * &m, id, "{s}");
        }
    }

    #[test]
    fn expectation_rejects_non_hermitian() {
        let rho = QuantumState::<f64>::maximally_mixed();
        let mut bad = ComplexMatrix::zeros(4);
        bad.set(0, 1, cr(1.0));
        assert!(matches!(
            expectation(&rho, &bad),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn expectation_examples() {
        let pp = QuantumState::<f64>::plus_plus();
        assert!((expectation(&pp, &PauliString::S11.matrix()).unwrap() - 1.0).abs() < 1e-15);
        assert!(expectation(&pp, &PauliString::S33.matrix()).unwrap().abs() < 1e-15);
        let mixed = QuantumState::<f64>::maximally_mixed();
        for s in PauliString::all().filter(|s| !s.is_identity()) {
            assert_eq!(expectation(&mixed, &s.matrix()).unwrap(), 0.0);
        }
    }
}
