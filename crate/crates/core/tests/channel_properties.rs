mod common;

use common::arb_state;
use contextuality::channels::{
    operator_q, operator_q_prime, projector_p, projector_p_prime, stage1, stage2, stage3, stage4,
};
use contextuality::matrix::kron_ket;
use contextuality::state::kets;
use contextuality::{Complex, Matrix, Parity, State};
use proptest::prelude::*;

fn all_stage_outputs(rho: &State, parity: Parity, p: f64) -> Vec<State> {
    vec![
        stage1(rho, parity, p).unwrap(),
        stage2(rho, parity),
        stage3(rho, parity, p).unwrap(),
        stage4(rho, parity),
    ]
}

/// `Σ_k |k⟩⟨k| ρ |k⟩⟨k|` over the given orthonormal kets.
fn dephase(rho: &Matrix, basis: &[Vec<Complex<f64>>]) -> Matrix {
    let mut out = Matrix::zeros(4);
    for k in basis {
        let rk = rho.apply(k).unwrap();
        let w: Complex<f64> = k.iter().zip(&rk).map(|(a, b)| a.conj() * b).sum();
        out = &out + &Matrix::outer(k).scale(w);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn trace_never_increases(rho in arb_state(), p in 0.0f64..=1.0, odd in any::<bool>()) {
        let parity = if odd { Parity::Odd } else { Parity::Even };
        for out in all_stage_outputs(&rho, parity, p) {
            prop_assert!(out.trace() <= rho.trace() + 1e-12);
        }
    }

    #[test]
    fn parities_are_complete(rho in arb_state(), p in 0.0f64..=1.0) {
        let even = all_stage_outputs(&rho, Parity::Even, p);
        let odd = all_stage_outputs(&rho, Parity::Odd, p);
        for (e, o) in even.iter().zip(&odd) {
            prop_assert!((e.trace() + o.trace() - rho.trace()).abs() < 1e-12);
        }
    }

    #[test]
    fn positivity_is_preserved(rho in arb_state(), p in 0.0f64..=1.0, odd in any::<bool>()) {
        let parity = if odd { Parity::Odd } else { Parity::Even };
        for out in all_stage_outputs(&rho, parity, p) {
            prop_assert!(out.eigenvalues()[0] >= -1e-10);
            prop_assert!(out.matrix().is_hermitian(1e-12));
        }
    }

    #[test]
    fn classical_endpoint_is_project_then_dephase(rho in arb_state()) {
        let z = kets::zero::<f64>();
        let o = kets::one::<f64>();
        let l = kets::left::<f64>();
        let r = kets::right::<f64>();
        let cases = [
            (Parity::Even, vec![kron_ket(&z, &z), kron_ket(&o, &o)], vec![kron_ket(&l, &z), kron_ket(&r, &o)]),
            (Parity::Odd, vec![kron_ket(&z, &o), kron_ket(&o, &z)], vec![kron_ket(&l, &o), kron_ket(&r, &z)]),
        ];
        for (parity, basis, rotated) in cases {
            let projected = projector_p(parity).conjugate(rho.matrix()).unwrap();
            let oracle = dephase(&projected, &basis);
            prop_assert!(stage1(&rho, parity, 1.0).unwrap().matrix().max_abs_diff(&oracle) < 1e-12);

            let projected = projector_p_prime(parity).conjugate(rho.matrix()).unwrap();
            let oracle = dephase(&projected, &rotated);
            prop_assert!(stage3(&rho, parity, 1.0).unwrap().matrix().max_abs_diff(&oracle) < 1e-12);
        }
    }
}

#[test]
fn noise_operators_square_to_projectors_exactly() {
    for parity in Parity::BOTH {
        let q: Matrix = operator_q(parity);
        assert_eq!(&q * &q, projector_p(parity));
        let qp: Matrix = operator_q_prime(parity);
        assert_eq!(&qp * &qp, projector_p_prime(parity));
    }
}

#[test]
fn stage4_completeness_on_random_states() {
    let mut rng = common::rng(7);
    for _ in 0..50 {
        let rho = common::random_state(&mut rng);
        let total = stage4(&rho, Parity::Even).trace() + stage4(&rho, Parity::Odd).trace();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
