//! Two-photon states over (spatial mode × polarization × internal label).

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;
use crate::state::{check_normalized, QuantumState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Polarization {
    /// Horizontal, the qubit state `|0⟩`.
    H,
    /// Vertical, the qubit state `|1⟩`.
    V,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::H, Polarization::V];

    pub(crate) fn index(self) -> usize {
        match self {
            Polarization::H => 0,
            Polarization::V => 1,
        }
    }
}

/// Dimension of the internal (temporal/spectral) label space.
pub const INTERNAL_DIM: usize = 2;

/// Single-photon mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PhotonMode {
    pub spatial: usize,
    pub polarization: Polarization,
    pub internal: usize,
}

impl PhotonMode {
    pub fn new(spatial: usize, polarization: Polarization, internal: usize) -> Self {
        Self {
            spatial,
            polarization,
            internal,
        }
    }

    pub(crate) fn index(self) -> usize {
        (self.spatial * 2 + self.polarization.index()) * INTERNAL_DIM + self.internal
    }
}

pub(crate) fn single_photon_dim(n_spatial: usize) -> usize {
    n_spatial * 2 * INTERNAL_DIM
}

/// Overlap of the two photons' internal wavefunctions, in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Distinguishability<T: Real>(T);

impl<T: Real> Distinguishability<T> {
    pub fn new(s: T) -> Result<Self> {
        if !(s >= T::zero() && s <= T::one()) {
            return Err(invalid(format!(
                "internal overlap s = {s} is outside [0, 1]"
            )));
        }
        Ok(Self(s))
    }

    pub fn indistinguishable() -> Self {
        Self(T::one())
    }

    pub fn distinguishable() -> Self {
        Self(T::zero())
    }

    pub fn value(self) -> T {
        self.0
    }

    /// `|ξ₁⟩ = |e₀⟩` and `|ξ₂⟩ = s|e₀⟩ + √(1−s²)|e₁⟩`, so `⟨ξ₁|ξ₂⟩ = s`.
    pub fn internal_states(self) -> [[T; INTERNAL_DIM]; 2] {
        let s = self.0;
        [
            [T::one(), T::zero()],
            [s, (T::one() - s * s).max(T::zero()).sqrt()],
        ]
    }
}

/// Bosonic two-photon state stored as a symmetric first-quantized amplitude
/// `ψ(a, b) = ψ(b, a)` with `Σ_ab |ψ(a, b)|² ≤ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonState<T: Real> {
    n_spatial: usize,
    psi: ComplexMatrix<T>,
}

impl<T: Real> TwoPhotonState<T> {
    pub fn vacuum_like(n_spatial: usize) -> Self {
        Self {
            n_spatial,
            psi: ComplexMatrix::zeros(single_photon_dim(n_spatial)),
        }
    }

    /// Symmetrized product of two single-photon wavefunctions, normalized.
    pub fn from_photons(
        n_spatial: usize,
        first: &[Complex<T>],
        second: &[Complex<T>],
    ) -> Result<Self> {
        let d = single_photon_dim(n_spatial);
        if first.len() != d || second.len() != d {
            return Err(invalid(format!(
                "single-photon wavefunctions must have {d} components"
            )));
        }
        let mut psi = ComplexMatrix::zeros(d);
        for a in 0..d {
            for b in 0..d {
                psi.set(a, b, first[a] * second[b] + second[a] * first[b]);
            }
        }
        let n = psi
            .entries()
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |x, y| x + y);
        if n.is_nan() || n <= T::zero() {
            return Err(invalid(
                "photons are in identical single-mode states that cancel",
            ));
        }
        let state = Self {
            n_spatial,
            psi: psi.scale_real(T::one() / n.sqrt()),
        };
        Ok(state)
    }

    pub fn n_spatial(&self) -> usize {
        self.n_spatial
    }

    pub(crate) fn psi(&self) -> &ComplexMatrix<T> {
        &self.psi
    }

    pub(crate) fn with_psi(&self, psi: ComplexMatrix<T>) -> Self {
        Self {
            n_spatial: self.n_spatial,
            psi,
        }
    }

    fn check_mode(&self, m: PhotonMode) -> Result<()> {
        if m.spatial >= self.n_spatial || m.internal >= INTERNAL_DIM {
            return Err(invalid(format!(
                "mode {m:?} is outside the declared mode set"
            )));
        }
        Ok(())
    }

    /// Amplitude of the normalized Fock state with one photon in each of `m1`
    /// and `m2` (two photons in `m1` when they coincide). Symmetric in its
    /// arguments.
    pub fn amplitude(&self, m1: PhotonMode, m2: PhotonMode) -> Result<Complex<T>> {
        self.check_mode(m1)?;
        self.check_mode(m2)?;
        let z = self.psi.get(m1.index(), m2.index());
        Ok(if m1 == m2 { z } else { z * T::two().sqrt() })
    }

    pub fn norm_sqr(&self) -> T {
        self.psi
            .entries()
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
    }

    /// Largest `|ψ(a, b) − ψ(b, a)|`.
    pub fn symmetry_defect(&self) -> T {
        let d = self.psi.dim();
        let mut worst = T::zero();
        for a in 0..d {
            for b in (a + 1)..d {
                worst = worst.max((self.psi.get(a, b) - self.psi.get(b, a)).norm());
            }
        }
        worst
    }

    /// Probability of finding exactly one photon in spatial mode `s1` and one
    /// in `s2`, summed over polarization and internal labels.
    pub fn coincidence_probability(&self, s1: usize, s2: usize) -> Result<T> {
        if s1 == s2 || s1 >= self.n_spatial || s2 >= self.n_spatial {
            return Err(invalid(format!("invalid coincidence pair ({s1}, {s2})")));
        }
        let mut total = T::zero();
        for a in block(s1) {
            for b in block(s2) {
                total = total + self.psi.get(a, b).norm_sqr();
            }
        }
        Ok(total * T::two())
    }

    /// Polarization density matrix of the photons found one in `s1` (qubit 1)
    /// and one in `s2` (qubit 2), internal labels traced out. Its trace is the
    /// coincidence probability.
    pub fn polarization_state(&self, s1: usize, s2: usize) -> Result<QuantumState<T>> {
        if s1 == s2 || s1 >= self.n_spatial || s2 >= self.n_spatial {
            return Err(invalid(format!("invalid mode pair ({s1}, {s2})")));
        }
        let mut rho = ComplexMatrix::zeros(4);
        for p1 in Polarization::BOTH {
            for p2 in Polarization::BOTH {
                for q1 in Polarization::BOTH {
                    for q2 in Polarization::BOTH {
                        let mut acc = Complex::zero();
                        for i1 in 0..INTERNAL_DIM {
                            for i2 in 0..INTERNAL_DIM {
                                let a = PhotonMode::new(s1, p1, i1).index();
                                let b = PhotonMode::new(s2, p2, i2).index();
                                let a2 = PhotonMode::new(s1, q1, i1).index();
                                let b2 = PhotonMode::new(s2, q2, i2).index();
                                acc = acc + self.psi.get(a, b) * self.psi.get(a2, b2).conj();
                            }
                        }
                        rho.set(
                            p1.index() * 2 + p2.index(),
                            q1.index() * 2 + q2.index(),
                            acc * T::two(),
                        );
                    }
                }
            }
        }
        QuantumState::new(rho)
    }

    /// Reduced state with the internal label of every photon discarded,
    /// indexed by (spatial, polarization) pairs.
    pub fn trace_internal(&self) -> ComplexMatrix<T> {
        let d = 2 * self.n_spatial;
        let mut out = ComplexMatrix::zeros(d * d);
        let full = |m: usize, i: usize| m * INTERNAL_DIM + i;
        for a in 0..d {
            for b in 0..d {
                for a2 in 0..d {
                    for b2 in 0..d {
                        let mut acc = Complex::zero();
                        for i in 0..INTERNAL_DIM {
                            for j in 0..INTERNAL_DIM {
                                acc = acc
                                    + self.psi.get(full(a, i), full(b, j))
                                        * self.psi.get(full(a2, i), full(b2, j)).conj();
                            }
                        }
                        out.set(a * d + b, a2 * d + b2, acc);
                    }
                }
            }
        }
        out
    }
}

fn block(spatial: usize) -> std::ops::Range<usize> {
    let width = 2 * INTERNAL_DIM;
    spatial * width..(spatial + 1) * width
}

/// Input modes of the source.
pub const SOURCE_MODES: (usize, usize) = (0, 1);

/// Photon 1 in spatial mode 0 with polarization `pol1`, photon 2 in mode 1
/// with `pol2`; internal states overlap by `s`.
pub fn source_state<T: Real>(
    n_spatial: usize,
    pol1: &[Complex<T>; 2],
    pol2: &[Complex<T>; 2],
    s: Distinguishability<T>,
) -> Result<TwoPhotonState<T>> {
    check_normalized(pol1)?;
    check_normalized(pol2)?;
    if n_spatial < 2 {
        return Err(invalid("the source needs at least two spatial modes"));
    }
    let [xi1, xi2] = s.internal_states();
    let d = single_photon_dim(n_spatial);
    let photon = |spatial: usize, pol: &[Complex<T>; 2], xi: &[T; INTERNAL_DIM]| {
        let mut v = vec![Complex::zero(); d];
        for p in Polarization::BOTH {
            for (i, x) in xi.iter().enumerate() {
                v[PhotonMode::new(spatial, p, i).index()] = pol[p.index()] * *x;
            }
        }
        v
    };
    TwoPhotonState::from_photons(
        n_spatial,
        &photon(SOURCE_MODES.0, pol1, &xi1),
        &photon(SOURCE_MODES.1, pol2, &xi2),
    )
}
