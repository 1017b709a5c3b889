//! Circuits implementing the two filtration settings with a PBS parity check
//! followed by polarization analyzers, coincidence post-selection, and the fit
//! of optical statistics to the mixing-parameter channel family.

use std::fmt;

use num_complex::Complex;
use serde::Serialize;

use crate::channels::Parity;
use crate::error::{invalid, Error, Result};
use crate::experiment::{joint_probabilities, ExperimentConfig, OutcomeTable, Setting};
use crate::scalar::Real;
use crate::state::{kets, QuantumState};

use super::elements::{Element, PlateKind};
use super::photons::{source_state, Distinguishability, TwoPhotonState};

/// Spatial mode layout shared by every built circuit.
pub mod layout {
    /// Source outputs: photon 1 (qubit 1) and photon 2 (qubit 2).
    pub const INPUT_1: usize = 0;
    pub const INPUT_2: usize = 1;
    /// Outputs of the parity-check PBS; they carry qubits 1 and 2 afterwards.
    pub const ARM_1: usize = 2;
    pub const ARM_2: usize = 3;
    /// Unused input ports of the analyzer PBSs.
    pub const VACUUM_1: usize = 4;
    pub const VACUUM_2: usize = 7;
    pub const DETECT_1_PLUS: usize = 5;
    pub const DETECT_1_MINUS: usize = 6;
    pub const DETECT_2_PLUS: usize = 8;
    pub const DETECT_2_MINUS: usize = 9;
    pub const N_SPATIAL: usize = 10;
}

/// Two detectors behind one analyzer; `plus` registers value `+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DetectorArm {
    pub plus: usize,
    pub minus: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpticalCircuit<T: Real> {
    n_spatial: usize,
    elements: Vec<Element<T>>,
    /// Number of leading elements forming the parity-check stage.
    first_stage_len: usize,
    /// Coincidence requires exactly one photon in each arm.
    arms: [DetectorArm; 2],
    /// Modes carrying qubits 1 and 2 between the two stages.
    qubit_modes: (usize, usize),
    setting: Setting,
    parity: Parity,
}

fn plate<T: Real>(kind: PlateKind, mode: usize, degrees: f64) -> Element<T> {
    Element::Plate {
        kind,
        mode,
        angle: T::lit(degrees.to_radians()),
    }
}

impl<T: Real> OpticalCircuit<T> {
    pub fn new(
        n_spatial: usize,
        elements: Vec<Element<T>>,
        first_stage_len: usize,
        arms: [DetectorArm; 2],
        qubit_modes: (usize, usize),
        setting: Setting,
        parity: Parity,
    ) -> Result<Self> {
        for e in &elements {
            e.validate(n_spatial)?;
        }
        if first_stage_len > elements.len() {
            return Err(invalid("first stage longer than the circuit"));
        }
        let det = [arms[0].plus, arms[0].minus, arms[1].plus, arms[1].minus];
        for (k, m) in det.iter().enumerate() {
            if *m >= n_spatial || det[k + 1..].contains(m) {
                return Err(invalid(format!(
                    "detector pattern must name four distinct modes below {n_spatial}"
                )));
            }
        }
        if qubit_modes.0 == qubit_modes.1 || qubit_modes.0.max(qubit_modes.1) >= n_spatial {
            return Err(invalid("qubit modes must be two distinct valid modes"));
        }
        Ok(Self {
            n_spatial,
            elements,
            first_stage_len,
            arms,
            qubit_modes,
            setting,
            parity,
        })
    }

    /// Builds the parity-`parity` branch of a setting.
    ///
    /// First stage: a PBS on the two source modes, post-selected on one photon
    /// per output, projects onto equal polarizations. Odd parity adds HWP(45°)
    /// on input 2 and on output 2. HWP(0°) on output 1 cancels the `−1` the
    /// VV branch picks up from two reflections. Setting B conjugates qubit 1
    /// by QWP(45°) (σ₂ → σ₃ basis) before the PBS and QWP(−45°) after it.
    ///
    /// Second stage: per arm an optional QWP(45°) (σ₂ analysis) then a PBS;
    /// the transmitted port is value `+1`.
    pub fn for_setting(setting: Setting, parity: Parity) -> Self {
        use layout::*;
        let mut el = Vec::new();
        if setting == Setting::B {
            el.push(plate(PlateKind::Qwp, INPUT_1, 45.0));
        }
        if parity == Parity::Odd {
            el.push(plate(PlateKind::Hwp, INPUT_2, 45.0));
        }
        el.push(Element::Pbs {
            inputs: (INPUT_1, INPUT_2),
            outputs: (ARM_1, ARM_2),
        });
        el.push(plate(PlateKind::Hwp, ARM_1, 0.0));
        if parity == Parity::Odd {
            el.push(plate(PlateKind::Hwp, ARM_2, 45.0));
        }
        if setting == Setting::B {
            el.push(plate(PlateKind::Qwp, ARM_1, -45.0));
        }
        let first_stage_len = el.len();

        // Qubit 1 is analyzed in σ₂ for A and σ₃ for B; qubit 2 always in σ₂.
        if setting == Setting::A {
            el.push(plate(PlateKind::Qwp, ARM_1, 45.0));
        }
        el.push(Element::Pbs {
            inputs: (ARM_1, VACUUM_1),
            outputs: (DETECT_1_PLUS, DETECT_1_MINUS),
        });
        el.push(plate(PlateKind::Qwp, ARM_2, 45.0));
        el.push(Element::Pbs {
            inputs: (ARM_2, VACUUM_2),
            outputs: (DETECT_2_PLUS, DETECT_2_MINUS),
        });

        Self::new(
            N_SPATIAL,
            el,
            first_stage_len,
            [
                DetectorArm {
                    plus: DETECT_1_PLUS,
                    minus: DETECT_1_MINUS,
                },
                DetectorArm {
                    plus: DETECT_2_PLUS,
                    minus: DETECT_2_MINUS,
                },
            ],
            (ARM_1, ARM_2),
            setting,
            parity,
        )
        .expect("static layout is consistent")
    }

    pub fn n_spatial(&self) -> usize {
        self.n_spatial
    }

    pub fn elements(&self) -> &[Element<T>] {
        &self.elements
    }

    pub fn arms(&self) -> [DetectorArm; 2] {
        self.arms
    }

    pub fn setting(&self) -> Setting {
        self.setting
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    fn check_source(&self, source: &TwoPhotonState<T>) -> Result<()> {
        if source.n_spatial() != self.n_spatial {
            return Err(invalid(format!(
                "source has {} spatial modes, circuit expects {}",
                source.n_spatial(),
                self.n_spatial
            )));
        }
        Ok(())
    }

    pub fn propagate(&self, source: &TwoPhotonState<T>) -> Result<TwoPhotonState<T>> {
        self.propagate_prefix(source, self.elements.len())
    }

    pub fn propagate_prefix(
        &self,
        source: &TwoPhotonState<T>,
        n: usize,
    ) -> Result<TwoPhotonState<T>> {
        self.check_source(source)?;
        self.elements[..n.min(self.elements.len())]
            .iter()
            .try_fold(source.clone(), |st, e| e.apply(&st))
    }

    /// Post-selected two-qubit polarization state between the stages.
    pub fn first_stage_output(&self, source: &TwoPhotonState<T>) -> Result<QuantumState<T>> {
        let mid = self.propagate_prefix(source, self.first_stage_len)?;
        mid.polarization_state(self.qubit_modes.0, self.qubit_modes.1)
    }

    /// Probability of each coincidence pattern, keyed by the two detector
    /// values.
    pub fn pattern_probabilities(
        &self,
        source: &TwoPhotonState<T>,
    ) -> Result<Vec<(Parity, Parity, T)>> {
        let out = self.propagate(source)?;
        let mut patterns = Vec::with_capacity(4);
        for (v1, m1) in [
            (Parity::Even, self.arms[0].plus),
            (Parity::Odd, self.arms[0].minus),
        ] {
            for (v2, m2) in [
                (Parity::Even, self.arms[1].plus),
                (Parity::Odd, self.arms[1].minus),
            ] {
                patterns.push((v1, v2, out.coincidence_probability(m1, m2)?));
            }
        }
        Ok(patterns)
    }

    /// Coincidence probabilities binned by the product of detector values,
    /// `[j = +1, j = −1]`.
    pub fn coincidence_probabilities(&self, source: &TwoPhotonState<T>) -> Result<[T; 2]> {
        let mut binned = [T::zero(); 2];
        for (v1, v2, prob) in self.pattern_probabilities(source)? {
            let slot = match v1.times(v2) {
                Parity::Even => 0,
                Parity::Odd => 1,
            };
            binned[slot] = binned[slot] + prob;
        }
        Ok(binned)
    }
}

impl<T: Real> fmt::Display for OpticalCircuit<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "circuit setting={:?} parity={:+} modes={}",
            self.setting,
            self.parity.sign(),
            self.n_spatial
        )?;
        for (k, e) in self.elements.iter().enumerate() {
            let stage = if k < self.first_stage_len { 1 } else { 2 };
            writeln!(f, "  {k:02} stage={stage} {e}")?;
        }
        for (k, arm) in self.arms.iter().enumerate() {
            writeln!(
                f,
                "  detect arm={} plus={} minus={}",
                k + 1,
                arm.plus,
                arm.minus
            )?;
        }
        Ok(())
    }
}

/// Product polarization input for the optical source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeState<T: Real> {
    pub pol1: [Complex<T>; 2],
    pub pol2: [Complex<T>; 2],
}

impl<T: Real> ProbeState<T> {
    pub fn new(pol1: [Complex<T>; 2], pol2: [Complex<T>; 2]) -> Self {
        Self { pol1, pol2 }
    }

    pub fn plus_plus() -> Self {
        Self::new(kets::plus(), kets::plus())
    }

    pub fn density(&self) -> Result<QuantumState<T>> {
        QuantumState::product_pure(&self.pol1, &self.pol2)
    }

    pub fn source(&self, s: Distinguishability<T>) -> Result<TwoPhotonState<T>> {
        source_state(layout::N_SPATIAL, &self.pol1, &self.pol2, s)
    }
}

/// Deterministic probe set used by [`effective_mixing`].
pub fn default_probes<T: Real>() -> Vec<ProbeState<T>> {
    let bloch = |x: f64, y: f64, z: f64| {
        let n = (x * x + y * y + z * z).sqrt();
        kets::from_bloch([T::lit(x / n), T::lit(y / n), T::lit(z / n)]).expect("unit vector")
    };
    vec![
        ProbeState::plus_plus(),
        ProbeState::new(kets::zero(), kets::plus()),
        ProbeState::new(kets::left(), kets::zero()),
        ProbeState::new(kets::plus(), kets::left()),
        ProbeState::new(bloch(0.3, -0.5, 0.8), bloch(-0.6, 0.2, 0.4)),
        ProbeState::new(bloch(0.9, 0.4, -0.2), bloch(0.1, 0.7, -0.7)),
    ]
}

/// Four-entry outcome table from the two parity branches of a setting.
pub fn coincidence_table<T: Real>(
    setting: Setting,
    source: &TwoPhotonState<T>,
) -> Result<OutcomeTable<T>> {
    let mut entries = [T::zero(); 4];
    for (k, parity) in Parity::BOTH.into_iter().enumerate() {
        let circuit = OpticalCircuit::for_setting(setting, parity);
        let [plus, minus] = circuit.coincidence_probabilities(source)?;
        entries[2 * k] = plus;
        entries[2 * k + 1] = minus;
    }
    OutcomeTable::from_ordered(entries)
}

/// Channel-model table at mixing `p` for the same product input.
pub fn channel_table<T: Real>(
    probe: &ProbeState<T>,
    setting: Setting,
    p: T,
) -> Result<OutcomeTable<T>> {
    let config = ExperimentConfig::new(probe.density()?, p, p)?;
    joint_probabilities(&config, setting)
}

/// Residual above which [`effective_mixing`] reports a model mismatch.
pub const MIXING_FIT_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingFit<T: Real> {
    pub p_eff: T,
    /// Max-norm table difference at `p_eff` over the probe set.
    pub residual: T,
}

/// Worst-case table mismatch between optics and channel model at mixing `p`.
pub fn mixing_mismatch<T: Real>(
    optical: &[(ProbeState<T>, OutcomeTable<T>)],
    setting: Setting,
    p: T,
) -> Result<T> {
    let mut worst = T::zero();
    for (probe, table) in optical {
        worst = worst.max(table.max_abs_diff(&channel_table(probe, setting, p)?));
    }
    Ok(worst)
}

/// Mixing parameter whose channel tables best match the optical coincidence
/// tables at overlap `s`, by ternary search on the (convex) max-norm mismatch.
pub fn effective_mixing<T: Real>(
    s: Distinguishability<T>,
    setting: Setting,
    probes: &[ProbeState<T>],
) -> Result<MixingFit<T>> {
    if probes.is_empty() {
        return Err(invalid("effective mixing needs at least one probe state"));
    }
    let optical = probes
        .iter()
        .map(|probe| Ok((*probe, coincidence_table(setting, &probe.source(s)?)?)))
        .collect::<Result<Vec<_>>>()?;

    let (mut lo, mut hi) = (T::zero(), T::one());
    let third = T::one() / T::lit(3.0);
    for _ in 0..200 {
        let m1 = lo + (hi - lo) * third;
        let m2 = hi - (hi - lo) * third;
        if mixing_mismatch(&optical, setting, m1)? <= mixing_mismatch(&optical, setting, m2)? {
            hi = m2;
        } else {
            lo = m1;
        }
        if hi - lo <= T::epsilon() {
            break;
        }
    }
    // The optimum of a piecewise-linear convex function often sits on the
    // boundary; compare the bracket against both endpoints.
    let mut best = (lo + hi) * T::half();
    let mut residual = mixing_mismatch(&optical, setting, best)?;
    for edge in [T::zero(), T::one()] {
        let r = mixing_mismatch(&optical, setting, edge)?;
        if r <= residual {
            best = edge;
            residual = r;
        }
    }
    if residual > T::lit(MIXING_FIT_LIMIT) {
        return Err(Error::ModelMismatch {
            p: best.as_f64(),
            residual: residual.as_f64(),
            limit: MIXING_FIT_LIMIT,
        });
    }
    Ok(MixingFit {
        p_eff: best,
        residual,
    })
}
