//! Parity filters applied in sequence to a two-qubit state.
//!
//! * stage 1: `σ₃⊗σ₃` parity check, interpolating from quantum (`p = 0`) to
//!   classical (`p = 1`) via `(1 − p/2)·PρP + (p/2)·QρQ`;
//! * stage 2: classical `σ₂⊗σ₂` parity check;
//! * stage 3: `σ₂⊗σ₃` parity check with its own mixing parameter;
//! * stage 4: classical `σ₃⊗σ₂` parity check.
//!
//! Outputs are never renormalized: the trace is the probability that the
//! filter passed.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::matrix::{kron, ComplexMatrix};
use crate::pauli::{pauli, PauliString};
use crate::scalar::Real;
use crate::state::QuantumState;

/// Outcome of a dichotomic measurement, `+1` or `−1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub const BOTH: [Parity; 2] = [Parity::Even, Parity::Odd];

    pub fn from_sign(sign: i64) -> Result<Self> {
        match sign {
            1 => Ok(Parity::Even),
            -1 => Ok(Parity::Odd),
            other => Err(invalid(format!("parity must be +1 or -1, got {other}"))),
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    pub fn times(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    fn value<T: Real>(self) -> T {
        T::lit(f64::from(self.sign()))
    }
}

fn signed_sum<T: Real>(a: PauliString, b: PauliString, parity: Parity) -> ComplexMatrix<T> {
    let m = &a.matrix::<T>() + &b.matrix::<T>().scale_real(parity.value());
    m.scale_real(T::half())
}

fn s(mu: usize, nu: usize) -> PauliString {
    PauliString::new(mu, nu).expect("static indices")
}

/// `½(σ₀⊗σ₀ ± σ₃⊗σ₃)`.
pub fn projector_p<T: Real>(parity: Parity) -> ComplexMatrix<T> {
    signed_sum(s(0, 0), s(3, 3), parity)
}

/// `½(σ₀⊗σ₃ ± σ₃⊗σ₀)`; squares to [`projector_p`].
pub fn operator_q<T: Real>(parity: Parity) -> ComplexMatrix<T> {
    signed_sum(s(0, 3), s(3, 0), parity)
}

/// `½(σ₀⊗σ₀ ± σ₂⊗σ₃)`.
pub fn projector_p_prime<T: Real>(parity: Parity) -> ComplexMatrix<T> {
    signed_sum(s(0, 0), s(2, 3), parity)
}

/// `½(σ₀⊗σ₃ ± σ₂⊗σ₀) = (σ₀⊗σ₃)·P′`; squares to [`projector_p_prime`].
pub fn operator_q_prime<T: Real>(parity: Parity) -> ComplexMatrix<T> {
    signed_sum(s(0, 3), s(2, 0), parity)
}

/// Rank-one projector onto the `value` eigenvector of `σ_axis` (axis 2 or 3).
fn eigen_projector<T: Real>(axis: usize, value: Parity) -> ComplexMatrix<T> {
    let id = pauli::<T>(0).expect("identity");
    let sigma = pauli::<T>(axis).expect("axis in 1..=3");
    (&id + &sigma.scale_real(value.value())).scale_real(T::half())
}

/// Per-qubit projector pairs `(qubit-1 value, qubit-2 value)` whose product is `parity`.
fn value_pairs(parity: Parity) -> [(Parity, Parity); 2] {
    match parity {
        Parity::Even => [(Parity::Even, Parity::Even), (Parity::Odd, Parity::Odd)],
        Parity::Odd => [(Parity::Even, Parity::Odd), (Parity::Odd, Parity::Even)],
    }
}

fn local_projectors<T: Real>(axis1: usize, axis2: usize, parity: Parity) -> [ComplexMatrix<T>; 2] {
    value_pairs(parity).map(|(v1, v2)| {
        kron(&eigen_projector(axis1, v1), &eigen_projector(axis2, v2)).expect("2x2 factors")
    })
}

pub fn check_mixing<T: Real>(p: T, name: &str) -> Result<T> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(invalid(format!("{name} = {p} is outside [0, 1]")));
    }
    Ok(p)
}

fn mixed_parity_check<T: Real>(
    rho: &QuantumState<T>,
    proj: &ComplexMatrix<T>,
    noise: &ComplexMatrix<T>,
    p: T,
) -> QuantumState<T> {
    let half_p = p * T::half();
    let kept = rho.sandwich(proj, T::one() - half_p);
    if half_p.is_zero() {
        return kept;
    }
    kept.add(&rho.sandwich(noise, half_p))
}

fn pinch<T: Real>(rho: &QuantumState<T>, projectors: &[ComplexMatrix<T>; 2]) -> QuantumState<T> {
    rho.sandwich(&projectors[0], T::one())
        .add(&rho.sandwich(&projectors[1], T::one()))
}

/// `σ₃⊗σ₃` parity filter with mixing parameter `p`.
pub fn stage1<T: Real>(rho: &QuantumState<T>, parity: Parity, p: T) -> Result<QuantumState<T>> {
    check_mixing(p, "p")?;
    Ok(mixed_parity_check(
        rho,
        &projector_p(parity),
        &operator_q(parity),
        p,
    ))
}

/// Classical `σ₂⊗σ₂` parity filter: `P_LL ρ P_LL + P_RR ρ P_RR` for even parity,
/// the cross terms for odd.
pub fn stage2<T: Real>(rho: &QuantumState<T>, parity: Parity) -> QuantumState<T> {
    pinch(rho, &local_projectors(2, 2, parity))
}

/// `σ₂⊗σ₃` parity filter with mixing parameter `p_prime`.
pub fn stage3<T: Real>(
    rho: &QuantumState<T>,
    parity: Parity,
    p_prime: T,
) -> Result<QuantumState<T>> {
    check_mixing(p_prime, "p'")?;
    Ok(mixed_parity_check(
        rho,
        &projector_p_prime(parity),
        &operator_q_prime(parity),
        p_prime,
    ))
}

/// Classical `σ₃⊗σ₂` parity filter. Value `+1` belongs to `|0⟩` on qubit 1
/// and to `|L⟩` on qubit 2.
pub fn stage4<T: Real>(rho: &QuantumState<T>, parity: Parity) -> QuantumState<T> {
    pinch(rho, &local_projectors(3, 2, parity))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FilterKind {
    /// Mixed quantum/classical `σ₃⊗σ₃` check.
    Qpc33,
    Cpc22,
    /// Mixed quantum/classical `σ₂⊗σ₃` check.
    Qpc23,
    Cpc32,
}

impl FilterKind {
    pub fn takes_mixing(self) -> bool {
        matches!(self, FilterKind::Qpc33 | FilterKind::Qpc23)
    }
}

/// One filtration step of a pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FilterStage<T: Real> {
    kind: FilterKind,
    parity: Parity,
    mixing: Option<T>,
}

impl<T: Real> FilterStage<T> {
    /// `mixing` is required for the QPC kinds and must be `None` otherwise.
    pub fn new(kind: FilterKind, parity: Parity, mixing: Option<T>) -> Result<Self> {
        match (kind.takes_mixing(), mixing) {
            (true, Some(p)) => {
                check_mixing(p, "mixing")?;
            }
            (true, None) => return Err(invalid(format!("{kind:?} needs a mixing parameter"))),
            (false, Some(_)) => return Err(invalid(format!("{kind:?} takes no mixing parameter"))),
            (false, None) => {}
        }
        Ok(Self {
            kind,
            parity,
            mixing,
        })
    }

    pub fn kind(&self) -> FilterKind {
        self.kind
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn mixing(&self) -> Option<T> {
        self.mixing
    }

    pub fn apply(&self, rho: &QuantumState<T>) -> QuantumState<T> {
        let p = self.mixing.unwrap_or_else(T::zero);
        match self.kind {
            FilterKind::Qpc33 => stage1(rho, self.parity, p).expect("validated mixing"),
            FilterKind::Cpc22 => stage2(rho, self.parity),
            FilterKind::Qpc23 => stage3(rho, self.parity, p).expect("validated mixing"),
            FilterKind::Cpc32 => stage4(rho, self.parity),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::kron_ket;
    use crate::scalar::cr;
    use crate::state::kets;

    fn phi_plus_state() -> QuantumState<f64> {
        QuantumState::bell_phi_plus()
    }

    #[test]
    fn parity_from_sign() {
        assert_eq!(Parity::from_sign(1).unwrap(), Parity::Even);
        assert_eq!(Parity::from_sign(-1).unwrap(), Parity::Odd);
        assert!(Parity::from_sign(0).is_err());
        assert_eq!(Parity::Odd.times(Parity::Odd), Parity::Even);
    }

    #[test]
    fn projector_expansions() {
        let p = projector_p::<f64>(Parity::Even);
        assert_eq!(
            p,
            ComplexMatrix::diag(&[cr(1.0), cr(0.0), cr(0.0), cr(1.0)])
        );
        assert_eq!(&p * &p, p);
        assert_eq!(&p + &projector_p(Parity::Odd), ComplexMatrix::identity(4));
        let q = operator_q::<f64>(Parity::Even);
        assert_eq!(
            q,
            ComplexMatrix::diag(&[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)])
        );
        for parity in Parity::BOTH {
            assert_eq!(
                &operator_q::<f64>(parity) * &operator_q(parity),
                projector_p(parity)
            );
            assert_eq!(
                &operator_q_prime::<f64>(parity) * &operator_q_prime(parity),
                projector_p_prime(parity)
            );
            let s03 = PauliString::new(0, 3).unwrap().matrix::<f64>();
            assert_eq!(
                operator_q_prime::<f64>(parity),
                &s03 * &projector_p_prime(parity)
            );
        }
    }

    #[test]
    fn stage1_examples() {
        let pp = QuantumState::<f64>::plus_plus();
        let out = stage1(&pp, Parity::Even, 0.0).unwrap();
        let expected = phi_plus_state().matrix().scale_real(0.5);
        assert!(out.matrix().approx_eq(&expected, 1e-15));
        assert!((out.trace() - 0.5).abs() < 1e-15);

        let same = stage1(&phi_plus_state(), Parity::Even, 0.0).unwrap();
        assert!(same.approx_eq(&phi_plus_state(), 1e-15));

        let classical = stage1(&pp, Parity::Even, 1.0).unwrap();
        let dephased = ComplexMatrix::diag(&[cr(0.25), cr(0.0), cr(0.0), cr(0.25)]);
        assert!(classical.matrix().approx_eq(&dephased, 1e-15));

        assert!(stage1(&pp, Parity::Even, 1.5).is_err());
        assert!(stage1(&pp, Parity::Even, -0.1).is_err());
        assert!(stage3(&pp, Parity::Even, f64::NAN).is_err());
    }

    #[test]
    fn stage2_examples() {
        let phi = phi_plus_state();
        assert!(stage2(&phi, Parity::Even).trace().abs() < 1e-15);
        let odd = stage2(&phi, Parity::Odd);
        let lr = kron_ket(&kets::left::<f64>(), &kets::right());
        let rl = kron_ket(&kets::right::<f64>(), &kets::left());
        let expected =
            &ComplexMatrix::outer(&lr).scale_real(0.5) + &ComplexMatrix::outer(&rl).scale_real(0.5);
        assert!(odd.matrix().approx_eq(&expected, 1e-15));
        let ll = QuantumState::product_pure(&kets::left::<f64>(), &kets::left()).unwrap();
        assert!(stage2(&ll, Parity::Even).approx_eq(&ll, 1e-15));
    }

    #[test]
    fn stage3_examples() {
        let pp = QuantumState::<f64>::plus_plus();
        let plus = stage3(&pp, Parity::Even, 0.0).unwrap();
        assert!((plus.trace() - 0.5).abs() < 1e-15);
        let minus = stage3(&pp, Parity::Odd, 0.0).unwrap();
        assert!((plus.trace() + minus.trace() - 1.0).abs() < 1e-15);
        let mixed = stage3(&pp, Parity::Even, 0.4).unwrap();
        let vals = mixed.eigenvalues();
        assert!((vals[3] - 0.4).abs() < 1e-12);
        assert!((vals[2] - 0.1).abs() < 1e-12);
    }

    #[test]
    fn stage4_examples() {
        let zl = QuantumState::product_pure(&kets::zero::<f64>(), &kets::left()).unwrap();
        let out = stage4(&zl, Parity::Even);
        assert!(out.approx_eq(&zl, 1e-15));
        assert!((out.trace() - 1.0).abs() < 1e-15);
        let zr = QuantumState::product_pure(&kets::zero::<f64>(), &kets::right()).unwrap();
        assert!(stage4(&zr, Parity::Even).trace().abs() < 1e-15);
        assert!((stage4(&zr, Parity::Odd).trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_state_passes_through() {
        let zero = QuantumState::<f64>::zero();
        assert_eq!(stage1(&zero, Parity::Odd, 0.3).unwrap().trace(), 0.0);
        assert_eq!(stage4(&zero, Parity::Even).trace(), 0.0);
    }

    #[test]
    fn filter_stage_validation() {
        assert!(FilterStage::<f64>::new(FilterKind::Qpc33, Parity::Even, None).is_err());
        assert!(FilterStage::new(FilterKind::Cpc22, Parity::Even, Some(0.1)).is_err());
        assert!(FilterStage::new(FilterKind::Qpc23, Parity::Odd, Some(1.1)).is_err());
        let stage = FilterStage::new(FilterKind::Qpc23, Parity::Even, Some(0.4)).unwrap();
        let pp = QuantumState::plus_plus();
        assert_eq!(stage.apply(&pp), stage3(&pp, Parity::Even, 0.4).unwrap());
        let cpc = FilterStage::<f64>::new(FilterKind::Cpc32, Parity::Odd, None).unwrap();
        assert_eq!(cpc.apply(&pp), stage4(&pp, Parity::Odd));
    }
}
