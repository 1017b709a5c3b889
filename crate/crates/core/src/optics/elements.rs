//! Linear-optical elements as single-photon unitaries.
//!
//! Jones conventions: `HWP(θ) = [[cos2θ, sin2θ], [sin2θ, −cos2θ]]` and
//! `QWP(θ) = R(θ)·diag(1, i)·R(−θ)`, so `HWP(0) = diag(1, −1)` and
//! `QWP(0) = diag(1, i)`. The PBS transmits H and reflects V; reflection
//! multiplies the amplitude by `i`.

use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;

use super::photons::{single_photon_dim, PhotonMode, Polarization, TwoPhotonState, INTERNAL_DIM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PlateKind {
    Hwp,
    Qwp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Element<T: Real> {
    Pbs {
        inputs: (usize, usize),
        outputs: (usize, usize),
    },
    Plate {
        kind: PlateKind,
        mode: usize,
        /// Fast-axis angle in radians.
        angle: T,
    },
    Swap(usize, usize),
}

pub fn jones<T: Real>(kind: PlateKind, angle: T) -> [[Complex<T>; 2]; 2] {
    let re = |x: T| Complex::new(x, T::zero());
    match kind {
        PlateKind::Hwp => {
            let (s, c) = (T::two() * angle).sin_cos();
            [[re(c), re(s)], [re(s), re(-c)]]
        }
        PlateKind::Qwp => {
            let (s, c) = angle.sin_cos();
            let i = Complex::new(T::zero(), T::one());
            let off = (Complex::<T>::one() - i) * (c * s);
            [
                [re(c * c) + i * (s * s), off],
                [off, re(s * s) + i * (c * c)],
            ]
        }
    }
}

impl<T: Real> Element<T> {
    pub fn modes(&self) -> Vec<usize> {
        match *self {
            Element::Pbs { inputs, outputs } => vec![inputs.0, inputs.1, outputs.0, outputs.1],
            Element::Plate { mode, .. } => vec![mode],
            Element::Swap(a, b) => vec![a, b],
        }
    }

    pub fn validate(&self, n_spatial: usize) -> Result<()> {
        let modes = self.modes();
        if let Some(m) = modes.iter().find(|&&m| m >= n_spatial) {
            return Err(invalid(format!(
                "{self} references mode {m} outside 0..{n_spatial}"
            )));
        }
        for (k, a) in modes.iter().enumerate() {
            if modes[k + 1..].contains(a) {
                return Err(invalid(format!("{self} uses mode {a} more than once")));
            }
        }
        if let Element::Plate { angle, .. } = self {
            if !angle.is_finite() {
                return Err(invalid("wave-plate angle must be finite"));
            }
        }
        Ok(())
    }

    /// Unitary on the single-photon space of `n_spatial` modes.
    pub fn unitary(&self, n_spatial: usize) -> Result<ComplexMatrix<T>> {
        self.validate(n_spatial)?;
        let d = single_photon_dim(n_spatial);
        let idx = |s: usize, p: Polarization, i: usize| PhotonMode::new(s, p, i).index();
        let mut u = ComplexMatrix::identity(d);
        match *self {
            Element::Plate { kind, mode, angle } => {
                let j = jones(kind, angle);
                for i in 0..INTERNAL_DIM {
                    for out in Polarization::BOTH {
                        for inp in Polarization::BOTH {
                            u.set(
                                idx(mode, out, i),
                                idx(mode, inp, i),
                                j[out.index()][inp.index()],
                            );
                        }
                    }
                }
            }
            Element::Swap(a, b) => {
                for p in Polarization::BOTH {
                    for i in 0..INTERNAL_DIM {
                        let (x, y) = (idx(a, p, i), idx(b, p, i));
                        u.set(x, x, Complex::zero());
                        u.set(y, y, Complex::zero());
                        u.set(x, y, Complex::one());
                        u.set(y, x, Complex::one());
                    }
                }
            }
            Element::Pbs { inputs, outputs } => {
                let (a, b) = inputs;
                let (c, d_) = outputs;
                let r = Complex::new(T::zero(), T::one());
                let one = Complex::one();
                // Each route maps `from` to `to` with the given factor; the
                // reverse routes complete the permutation so U stays unitary.
                let routes = [
                    (a, Polarization::H, c, one),
                    (b, Polarization::H, d_, one),
                    (a, Polarization::V, d_, r),
                    (b, Polarization::V, c, r),
                    (c, Polarization::H, a, one),
                    (d_, Polarization::H, b, one),
                    (d_, Polarization::V, a, r),
                    (c, Polarization::V, b, r),
                ];
                for i in 0..INTERNAL_DIM {
                    for (from, _, _, _) in routes {
                        for p in Polarization::BOTH {
                            let k = idx(from, p, i);
                            u.set(k, k, Complex::zero());
                        }
                    }
                    for (from, p, to, factor) in routes {
                        u.set(idx(to, p, i), idx(from, p, i), factor);
                    }
                }
            }
        }
        Ok(u)
    }

    /// `ψ ↦ U ψ Uᵀ`.
    pub fn apply(&self, state: &TwoPhotonState<T>) -> Result<TwoPhotonState<T>> {
        let u = self.unitary(state.n_spatial())?;
        let ut = transpose(&u);
        let psi = u.try_mul(state.psi())?.try_mul(&ut)?;
        Ok(state.with_psi(psi))
    }
}

fn transpose<T: Real>(m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let n = m.dim();
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out.set(j, i, m.get(i, j));
        }
    }
    out
}

impl<T: Real> fmt::Display for Element<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Pbs { inputs, outputs } => write!(
                f,
                "PBS in=({},{}) out=({},{})",
                inputs.0, inputs.1, outputs.0, outputs.1
            ),
            Element::Plate { kind, mode, angle } => write!(
                f,
                "{} mode={} angle_deg={}",
                match kind {
                    PlateKind::Hwp => "HWP",
                    PlateKind::Qwp => "QWP",
                },
                mode,
                angle.to_degrees().as_f64().round()
            ),
            Element::Swap(a, b) => write!(f, "SWAP modes=({a},{b})"),
        }
    }
}

pub fn pbs_transform<T: Real>(
    state: &TwoPhotonState<T>,
    inputs: (usize, usize),
    outputs: (usize, usize),
) -> Result<TwoPhotonState<T>> {
    Element::Pbs { inputs, outputs }.apply(state)
}

pub fn waveplate<T: Real>(
    state: &TwoPhotonState<T>,
    mode: usize,
    kind: PlateKind,
    angle: T,
) -> Result<TwoPhotonState<T>> {
    Element::Plate { kind, mode, angle }.apply(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::photons::{source_state, Distinguishability};
    use crate::state::kets;
    use std::f64::consts::FRAC_PI_4;

    fn apply_jones(j: [[Complex<f64>; 2]; 2], v: [Complex<f64>; 2]) -> [Complex<f64>; 2] {
        [
            j[0][0] * v[0] + j[0][1] * v[1],
            j[1][0] * v[0] + j[1][1] * v[1],
        ]
    }

    fn equal_up_to_phase(a: [Complex<f64>; 2], b: [Complex<f64>; 2]) -> bool {
        let overlap = a[0].conj() * b[0] + a[1].conj() * b[1];
        (overlap.norm() - 1.0).abs() < 1e-12
    }

    #[test]
    fn jones_conventions() {
        let h = kets::zero::<f64>();
        let v = kets::one::<f64>();
        let hwp45 = jones(PlateKind::Hwp, FRAC_PI_4);
        assert!(equal_up_to_phase(apply_jones(hwp45, h), v));
        assert!(equal_up_to_phase(apply_jones(hwp45, v), h));
        let hwp0 = jones(PlateKind::Hwp, 0.0);
        assert_eq!(apply_jones(hwp0, h), h);
        assert_eq!(apply_jones(hwp0, v), [Complex::zero(), -Complex::one()]);
        let q = jones(PlateKind::Qwp, 0.0);
        let qq = apply_jones(q, apply_jones(q, v));
        assert_eq!(qq, apply_jones(hwp0, v));
    }

    #[test]
    fn qwp45_maps_circular_to_linear() {
        let q = jones(PlateKind::Qwp, FRAC_PI_4);
        assert!(equal_up_to_phase(
            apply_jones(q, kets::left()),
            kets::zero()
        ));
        assert!(equal_up_to_phase(
            apply_jones(q, kets::right()),
            kets::one()
        ));
    }

    #[test]
    fn unitaries_are_unitary() {
        let elems = [
            Element::Pbs {
                inputs: (0, 1),
                outputs: (2, 3),
            },
            Element::Plate {
                kind: PlateKind::Qwp,
                mode: 2,
                angle: 0.3,
            },
            Element::Swap(0, 3),
        ];
        for e in elems {
            let u = e.unitary(4).unwrap();
            assert!(
                (&u * &u.adjoint()).approx_eq(&ComplexMatrix::identity(16), 1e-14),
                "{e}"
            );
        }
    }

    #[test]
    fn pbs_routes_single_photons() {
        // Photon 2 parks in mode 3, which the PBS does not touch.
        let s = Distinguishability::indistinguishable();
        let src = source_state(5, &kets::zero::<f64>(), &kets::zero(), s).unwrap();
        let moved = Element::Swap(1, 4).apply(&src).unwrap();
        let out = pbs_transform(&moved, (0, 1), (2, 3)).unwrap();
        assert!((out.coincidence_probability(2, 4).unwrap() - 1.0).abs() < 1e-14);

        let src = source_state(5, &kets::one::<f64>(), &kets::zero(), s).unwrap();
        let moved = Element::Swap(1, 4).apply(&src).unwrap();
        let out = pbs_transform(&moved, (0, 1), (2, 3)).unwrap();
        assert!((out.coincidence_probability(3, 4).unwrap() - 1.0).abs() < 1e-14);
        let a = out
            .amplitude(
                PhotonMode::new(3, Polarization::V, 0),
                PhotonMode::new(4, Polarization::H, 0),
            )
            .unwrap();
        assert!((a - Complex::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn two_horizontal_photons_exit_separately() {
        let src = source_state(
            4,
            &kets::zero::<f64>(),
            &kets::zero(),
            Distinguishability::indistinguishable(),
        )
        .unwrap();
        let out = pbs_transform(&src, (0, 1), (2, 3)).unwrap();
        let a = out
            .amplitude(
                PhotonMode::new(2, Polarization::H, 0),
                PhotonMode::new(3, Polarization::H, 0),
            )
            .unwrap();
        assert!((a.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn invalid_modes_rejected() {
        let src = source_state(
            4,
            &kets::zero::<f64>(),
            &kets::zero(),
            Distinguishability::indistinguishable(),
        )
        .unwrap();
        assert!(pbs_transform(&src, (0, 1), (1, 2)).is_err());
        assert!(pbs_transform(&src, (0, 1), (2, 9)).is_err());
        assert!(waveplate(&src, 7, PlateKind::Hwp, 0.1).is_err());
        assert!(waveplate(&src, 0, PlateKind::Hwp, f64::INFINITY).is_err());
    }
}
