mod common;

use std::f64::consts::FRAC_PI_4;

use contextuality::channels::{stage1, stage3};
use contextuality::experiment::correlation_from_table;
use contextuality::optics::{
    coincidence_table, default_probes, effective_mixing, layout, source_state, Distinguishability,
    Element, OpticalCircuit, PlateKind, ProbeState,
};
use contextuality::state::kets;
use contextuality::{Complex, Error, Matrix, Parity, Setting};
use proptest::prelude::*;

const N: usize = 4;

fn arb_ket() -> impl Strategy<Value = [Complex<f64>; 2]> {
    prop::array::uniform4(-1.0f64..1.0)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            [
                Complex::new(v[0] / n, v[1] / n),
                Complex::new(v[2] / n, v[3] / n),
            ]
        })
}

fn arb_element() -> impl Strategy<Value = Element<f64>> {
    prop_oneof![
        (0..N, 0.0f64..std::f64::consts::PI).prop_map(|(mode, angle)| Element::Plate {
            kind: PlateKind::Hwp,
            mode,
            angle
        }),
        (0..N, 0.0f64..std::f64::consts::PI).prop_map(|(mode, angle)| Element::Plate {
            kind: PlateKind::Qwp,
            mode,
            angle
        }),
        Just(Element::Pbs {
            inputs: (0, 1),
            outputs: (2, 3)
        }),
        Just(Element::Pbs {
            inputs: (1, 3),
            outputs: (0, 2)
        }),
        Just(Element::Swap(0, 2)),
    ]
}

/// Restriction of a single-photon unitary to one internal label.
fn spatial_pol_block(u: &Matrix) -> Matrix {
    let d = u.dim() / 2;
    let mut v = Matrix::zeros(d);
    for a in 0..d {
        for b in 0..d {
            v.set(a, b, u.get(2 * a, 2 * b));
        }
    }
    v
}

fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (m, n) = (a.dim(), b.dim());
    let mut out = Matrix::zeros(m * n);
    for i in 0..m {
        for j in 0..m {
            for k in 0..n {
                for l in 0..n {
                    out.set(i * n + k, j * n + l, a.get(i, j) * b.get(k, l));
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn elements_preserve_norm_and_symmetry(
        k1 in arb_ket(), k2 in arb_ket(), s in 0.0f64..=1.0, e in arb_element()
    ) {
        let src = source_state(N, &k1, &k2, Distinguishability::new(s).unwrap()).unwrap();
        let u = e.unitary(N).unwrap();
        prop_assert!((&u * &u.adjoint()).approx_eq(&Matrix::identity(u.dim()), 1e-12));
        let out = e.apply(&src).unwrap();
        prop_assert!((out.norm_sqr() - src.norm_sqr()).abs() < 1e-12);
        prop_assert!(out.symmetry_defect() < 1e-12);
    }

    #[test]
    fn internal_label_is_a_spectator(
        k1 in arb_ket(), k2 in arb_ket(), s in 0.0f64..=1.0, e in arb_element()
    ) {
        let src = source_state(N, &k1, &k2, Distinguishability::new(s).unwrap()).unwrap();
        let v = spatial_pol_block(&e.unitary(N).unwrap());
        let expected = kron(&v, &v).conjugate(&src.trace_internal()).unwrap();
        let actual = e.apply(&src).unwrap().trace_internal();
        prop_assert!(actual.max_abs_diff(&expected) < 1e-12);
    }
}

#[test]
fn coincidences_never_exceed_unity() {
    let mut rng = common::rng(17);
    for _ in 0..8 {
        let k1 = common::random_pure_qubit(&mut rng);
        let k2 = common::random_pure_qubit(&mut rng);
        for s in [0.0, 0.35, 1.0] {
            let src = source_state(
                layout::N_SPATIAL,
                &k1,
                &k2,
                Distinguishability::new(s).unwrap(),
            )
            .unwrap();
            for setting in Setting::BOTH {
                let table = coincidence_table(setting, &src).unwrap();
                assert!(table.total() <= 1.0 + 1e-12);
                assert!(table.ordered().iter().all(|&x| x >= 0.0));
            }
        }
    }
}

#[test]
fn first_stage_matches_channel_at_endpoints() {
    for probe in default_probes::<f64>() {
        let rho = probe.density().unwrap();
        for (s, p) in [(1.0, 0.0), (0.0, 1.0)] {
            let src = probe.source(Distinguishability::new(s).unwrap()).unwrap();
            for parity in Parity::BOTH {
                for setting in Setting::BOTH {
                    let circuit = OpticalCircuit::for_setting(setting, parity);
                    let optical = circuit.first_stage_output(&src).unwrap();
                    let channel = match setting {
                        Setting::A => stage1(&rho, parity, p).unwrap(),
                        Setting::B => stage3(&rho, parity, p).unwrap(),
                    };
                    assert!(
                        optical.approx_eq(&channel, 1e-10),
                        "s={s} {setting:?} {parity:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn effective_mixing_tracks_overlap() {
    let probes = default_probes::<f64>();
    for setting in Setting::BOTH {
        let fit =
            effective_mixing(Distinguishability::indistinguishable(), setting, &probes).unwrap();
        assert!(fit.p_eff < 1e-6 && fit.residual < 1e-10);
        let fit =
            effective_mixing(Distinguishability::distinguishable(), setting, &probes).unwrap();
        assert!((fit.p_eff - 1.0).abs() < 1e-6 && fit.residual < 1e-10);
        let fit =
            effective_mixing(Distinguishability::new(0.5).unwrap(), setting, &probes).unwrap();
        assert!((fit.p_eff - 0.75).abs() < 1e-6, "{}", fit.p_eff);
    }
    assert!(effective_mixing(
        Distinguishability::<f64>::indistinguishable(),
        Setting::A,
        &[]
    )
    .is_err());
}

#[test]
fn optical_witness_endpoints() {
    let c_at = |s: f64| {
        let src = ProbeState::plus_plus()
            .source(Distinguishability::new(s).unwrap())
            .unwrap();
        let a = correlation_from_table(&coincidence_table(Setting::A, &src).unwrap());
        let b = correlation_from_table(&coincidence_table(Setting::B, &src).unwrap());
        b - a
    };
    assert!((c_at(1.0) - 2.0).abs() < 1e-10);
    assert!(c_at(0.0).abs() < 1e-10);
    assert!((c_at(0.5) - 0.5).abs() < 1e-10);
}

#[test]
fn circuit_dump_lists_elements() {
    let dump = OpticalCircuit::<f64>::for_setting(Setting::B, Parity::Odd).to_string();
    assert!(dump.starts_with("circuit setting=B parity=-1 modes=10"));
    assert!(dump.contains("QWP mode=0 angle_deg=45"));
    assert!(dump.contains("PBS in=(0,1) out=(2,3)"));
    assert!(dump.contains("detect arm=2 plus=8 minus=9"));
}

#[test]
fn swap_exchanges_modes() {
    let s = Distinguishability::indistinguishable();
    let src = source_state(3, &kets::zero::<f64>(), &kets::one(), s).unwrap();
    let out = Element::Swap(1, 2).apply(&src).unwrap();
    assert!((out.coincidence_probability(0, 2).unwrap() - 1.0).abs() < 1e-14);
    assert!(out.coincidence_probability(0, 1).unwrap().abs() < 1e-14);
}

#[test]
fn distinguishability_validated() {
    assert!(matches!(
        Distinguishability::new(1.2),
        Err(Error::InvalidArgument(_))
    ));
    assert!(Distinguishability::new(f64::NAN).is_err());
    let plate = Element::Plate {
        kind: PlateKind::Hwp,
        mode: 0,
        angle: FRAC_PI_4,
    };
    assert!(plate.unitary(0).is_err());
}
