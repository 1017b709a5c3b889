//! Sequential-filtration pipelines, outcome tables and the witness
//! `C = ⟨(σ₂⊗σ₃)(σ₃⊗σ₂)⟩ − ⟨(σ₂⊗σ₂)(σ₃⊗σ₃)⟩`.
//!
//! Setting A runs the `σ₃⊗σ₃` check followed by the `σ₂⊗σ₂` check and
//! estimates the second term; setting B runs the `σ₂⊗σ₃` check followed by
//! the `σ₃⊗σ₂` check and estimates the first. Both estimates use the same
//! parity-product weighting of the four outcome probabilities, whatever the
//! mixing parameters are.

use num_complex::Complex;
use serde::Serialize;

use crate::channels::{check_mixing, stage1, stage2, stage3, stage4, Parity};
use crate::error::{invalid, Error, Result};
use crate::matrix::{kron, ComplexMatrix};
use crate::pauli::{expectation, pauli, PauliString};
use crate::scalar::Real;
use crate::state::QuantumState;

/// Tolerance for composed pipelines.
pub const PIPELINE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Setting {
    /// `σ₃⊗σ₃` then `σ₂⊗σ₂`.
    A,
    /// `σ₂⊗σ₃` then `σ₃⊗σ₂`.
    B,
}

impl Setting {
    pub const BOTH: [Setting; 2] = [Setting::A, Setting::B];
}

#[derive(Debug, Clone)]
pub enum StateDescriptor<T: Real> {
    PlusPlus,
    BellPhiPlus,
    BellPhiMinus,
    MaximallyMixed,
    /// Product of two single-qubit states given by Bloch vectors.
    Product([T; 3], [T; 3]),
    Raw(ComplexMatrix<T>),
}

pub fn prepare_state<T: Real>(kind: &StateDescriptor<T>) -> Result<QuantumState<T>> {
    match kind {
        StateDescriptor::PlusPlus => Ok(QuantumState::plus_plus()),
        StateDescriptor::BellPhiPlus => Ok(QuantumState::bell_phi_plus()),
        StateDescriptor::BellPhiMinus => Ok(QuantumState::bell_phi_minus()),
        StateDescriptor::MaximallyMixed => Ok(QuantumState::maximally_mixed()),
        StateDescriptor::Product(a, b) => QuantumState::product(*a, *b),
        StateDescriptor::Raw(m) => {
            let state = QuantumState::new(m.clone())?;
            let tr = state.trace();
            if (tr - T::one()).abs() > T::lit(1e-10).max(T::epsilon() * T::lit(1e3)) {
                return Err(invalid(format!(
                    "prepared state must have unit trace, got {tr}"
                )));
            }
            Ok(state)
        }
    }
}

/// Probabilities `p_ij` indexed by first-stage parity `i` and second-stage
/// parity `j`. Entries are absolute: they are not renormalized by the
/// filtration success rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutcomeTable<T: Real> {
    entries: [[T; 2]; 2],
}

fn idx(p: Parity) -> usize {
    match p {
        Parity::Even => 0,
        Parity::Odd => 1,
    }
}

impl<T: Real> OutcomeTable<T> {
    /// From entries in the order `(+,+), (+,−), (−,+), (−,−)`.
    pub fn from_ordered(values: [T; 4]) -> Result<Self> {
        let tol = T::lit(1e-12);
        for v in values {
            if !(v >= -tol && v <= T::one() + tol) {
                return Err(invalid(format!("table entry {v} is not a probability")));
            }
        }
        Ok(Self {
            entries: [[values[0], values[1]], [values[2], values[3]]],
        })
    }

    pub(crate) fn zeroed() -> Self {
        Self {
            entries: [[T::zero(); 2]; 2],
        }
    }

    pub(crate) fn set(&mut self, i: Parity, j: Parity, value: T) {
        self.entries[idx(i)][idx(j)] = value;
    }

    pub fn get(&self, i: Parity, j: Parity) -> T {
        self.entries[idx(i)][idx(j)]
    }

    /// Entries in the order `(+,+), (+,−), (−,+), (−,−)`.
    pub fn ordered(&self) -> [T; 4] {
        [
            self.entries[0][0],
            self.entries[0][1],
            self.entries[1][0],
            self.entries[1][1],
        ]
    }

    pub fn total(&self) -> T {
        self.ordered().into_iter().fold(T::zero(), |a, b| a + b)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.ordered()
            .into_iter()
            .zip(other.ordered())
            .map(|(a, b)| (a - b).abs())
            .fold(T::zero(), T::max)
    }
}

/// `p₁₁ + p₋₁₋₁ − p₋₁₁ − p₁₋₁`.
pub fn correlation_from_table<T: Real>(table: &OutcomeTable<T>) -> T {
    let [pp, pm, mp, mm] = table.ordered();
    pp + mm - mp - pm
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig<T: Real> {
    pub state: QuantumState<T>,
    pub p: T,
    pub p_prime: T,
}

impl<T: Real> ExperimentConfig<T> {
    pub fn new(state: QuantumState<T>, p: T, p_prime: T) -> Result<Self> {
        check_mixing(p, "p")?;
        check_mixing(p_prime, "p'")?;
        Ok(Self { state, p, p_prime })
    }
}

/// Runs both parity branches of both stages for one setting.
pub fn joint_probabilities<T: Real>(
    config: &ExperimentConfig<T>,
    setting: Setting,
) -> Result<OutcomeTable<T>> {
    let mut table = OutcomeTable::zeroed();
    for i in Parity::BOTH {
        let first = match setting {
            Setting::A => stage1(&config.state, i, config.p)?,
            Setting::B => stage3(&config.state, i, config.p_prime)?,
        };
        for j in Parity::BOTH {
            let second = match setting {
                Setting::A => stage2(&first, j),
                Setting::B => stage4(&first, j),
            };
            table.set(i, j, second.trace().max(T::zero()));
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessEstimate<T: Real> {
    pub table_a: OutcomeTable<T>,
    pub table_b: OutcomeTable<T>,
    pub correlation_a: T,
    pub correlation_b: T,
    pub c: T,
    pub qm_prediction: T,
    /// `(2 − p − p′)·⟨σ₁⊗σ₁⟩`, which is `2 − p − p′` for `|++⟩`.
    pub mixing_law: T,
    pub mixing_law_residual: T,
}

pub fn run_experiment<T: Real>(config: &ExperimentConfig<T>) -> Result<WitnessEstimate<T>> {
    let table_a = joint_probabilities(config, Setting::A)?;
    let table_b = joint_probabilities(config, Setting::B)?;
    let correlation_a = correlation_from_table(&table_a);
    let correlation_b = correlation_from_table(&table_b);
    let c = correlation_b - correlation_a;
    let qm = qm_prediction(&config.state)?;
    let mixing_law = (T::two() - config.p - config.p_prime) * qm * T::half();
    Ok(WitnessEstimate {
        table_a,
        table_b,
        correlation_a,
        correlation_b,
        c,
        qm_prediction: qm,
        mixing_law,
        mixing_law_residual: c - mixing_law,
    })
}

pub fn estimate_c<T: Real>(config: &ExperimentConfig<T>) -> Result<T> {
    Ok(run_experiment(config)?.c)
}

/// `2⟨σ₁⊗σ₁⟩`.
pub fn qm_prediction<T: Real>(state: &QuantumState<T>) -> Result<T> {
    Ok(T::two() * expectation(state, &PauliString::S11.matrix())?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord<T: Real> {
    pub p: T,
    pub p_prime: T,
    pub c: T,
    /// `C − (2 − p − p′)`.
    pub residual: T,
}

/// Witness on `|++⟩` at every grid point, in grid order.
pub fn sweep<T: Real>(grid: &[(T, T)]) -> Result<Vec<SweepRecord<T>>> {
    for &(p, q) in grid {
        if !(p >= T::zero() && p <= T::one() && q >= T::zero() && q <= T::one()) {
            return Err(invalid(format!(
                "grid point ({p}, {q}) outside the unit square"
            )));
        }
    }
    grid.iter()
        .map(|&(p, p_prime)| {
            let config = ExperimentConfig::new(QuantumState::plus_plus(), p, p_prime)?;
            let c = estimate_c(&config)?;
            Ok(SweepRecord {
                p,
                p_prime,
                c,
                residual: c - (T::two() - p - p_prime),
            })
        })
        .collect()
}

/// `steps` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace<T: Real>(start: T, stop: T, steps: usize) -> Result<Vec<T>> {
    match steps {
        0 => Err(invalid("a grid axis needs at least one step")),
        1 => Ok(vec![start]),
        n => {
            let denom = T::from_usize(n - 1).expect("step count representable");
            Ok((0..n)
                .map(|k| {
                    let t = T::from_usize(k).expect("index representable") / denom;
                    start + (stop - start) * t
                })
                .collect())
        }
    }
}

/// Sense of the rotation `exp(∓iθσ/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RotationSense {
    /// `exp(−iθσ/2)`.
    Negative,
    /// `exp(+iθσ/2)`.
    Positive,
}

/// Single-qubit rotation about Pauli axis `axis` by `theta`.
pub fn axis_rotation<T: Real>(
    axis: usize,
    theta: T,
    sense: RotationSense,
) -> Result<ComplexMatrix<T>> {
    if !(1..=3).contains(&axis) {
        return Err(invalid(format!("rotation axis {axis} not in 1..=3")));
    }
    let half = theta * T::half();
    let sign = match sense {
        RotationSense::Negative => -T::one(),
        RotationSense::Positive => T::one(),
    };
    let id = pauli::<T>(0)?.scale_real(half.cos());
    let gen = pauli::<T>(axis)?.scale(Complex::new(T::zero(), sign * half.sin()));
    Ok(&id + &gen)
}

#[derive(Debug, Clone, Serialize)]
pub struct PostMeasurementReport<T: Real> {
    #[serde(skip)]
    pub state: QuantumState<T>,
    /// The two nonzero eigenvalues, largest first.
    pub weights: [T; 2],
    /// `((1 − p′/2)/2, (p′/2)/2)`, sorted largest first.
    pub expected_weights: [T; 2],
    /// Rotation sense that reproduces the closed form.
    pub rotation: RotationSense,
    /// Max entrywise difference to the closed-form density matrix.
    pub state_residual: T,
    pub weight_residual: T,
    /// Max entrywise difference between the dominant eigenprojector and
    /// `|Φ̃⁺⟩⟨Φ̃⁺|`; `None` when the two weights are degenerate.
    pub eigenvector_residual: Option<T>,
    pub rotation_attempts: Vec<(RotationSense, T)>,
}

/// `½{(1 − p′/2)|Φ̃⁺⟩⟨Φ̃⁺| + (p′/2)|Φ̃⁻⟩⟨Φ̃⁻|}` with `Φ̃^± = (U₁(π/2)⊗σ₀)Φ^±`.
pub fn rotated_bell_mixture<T: Real>(p_prime: T, sense: RotationSense) -> Result<ComplexMatrix<T>> {
    let u = kron(
        &axis_rotation(1, T::lit(std::f64::consts::FRAC_PI_2), sense)?,
        &pauli(0)?,
    )?;
    let plus = u.conjugate(QuantumState::<T>::bell_phi_plus().matrix())?;
    let minus = u.conjugate(QuantumState::<T>::bell_phi_minus().matrix())?;
    let half_p = p_prime * T::half();
    Ok((&plus.scale_real(T::one() - half_p) + &minus.scale_real(half_p)).scale_real(T::half()))
}

/// Even-parity output of the `σ₂⊗σ₃` filter on `|++⟩`, checked against the
/// rotated Bell-state mixture. Tries `exp(−iθσ₁/2)` first and falls back to
/// the opposite sense.
pub fn post_measurement_state<T: Real>(
    config: &ExperimentConfig<T>,
) -> Result<PostMeasurementReport<T>> {
    let tol = T::lit(PIPELINE_TOLERANCE);
    if !config.state.approx_eq(&QuantumState::plus_plus(), tol) {
        return Err(invalid(
            "post-measurement check is defined for the |++> input only",
        ));
    }
    let p_prime = config.p_prime;
    let state = stage3(&config.state, Parity::Even, p_prime)?;

    let mut attempts = Vec::new();
    let mut matched = None;
    for sense in [RotationSense::Negative, RotationSense::Positive] {
        let expected = rotated_bell_mixture(p_prime, sense)?;
        let residual = state.matrix().max_abs_diff(&expected);
        attempts.push((sense, residual));
        if residual <= tol {
            matched = Some((sense, residual, expected));
            break;
        }
    }
    let Some((rotation, state_residual, _)) = matched else {
        return Err(Error::NumericIntegrity(format!(
            "stage-3 output does not match the rotated Bell mixture for either rotation sense \
             (residuals {:?})",
            attempts.iter().map(|(_, r)| r.as_f64()).collect::<Vec<_>>()
        )));
    };

    let (vals, vecs) = state.matrix().hermitian_eigen();
    let weights = [vals[3], vals[2]];
    let half_p = p_prime * T::half();
    let a = (T::one() - half_p) * T::half();
    let b = half_p * T::half();
    let expected_weights = [a.max(b), a.min(b)];
    let weight_residual = (weights[0] - expected_weights[0])
        .abs()
        .max((weights[1] - expected_weights[1]).abs())
        .max(vals[0].abs())
        .max(vals[1].abs());

    let eigenvector_residual = if (a - b).abs() > tol {
        let u = kron(
            &axis_rotation(1, T::lit(std::f64::consts::FRAC_PI_2), rotation)?,
            &pauli(0)?,
        )?;
        let phi = if a > b {
            QuantumState::<T>::bell_phi_plus()
        } else {
            QuantumState::<T>::bell_phi_minus()
        };
        let target = u.conjugate(phi.matrix())?;
        let dominant = ComplexMatrix::outer(&vecs[3]);
        Some(dominant.max_abs_diff(&target))
    } else {
        None
    };

    if weight_residual > tol || eigenvector_residual.is_some_and(|r| r > tol) {
        return Err(Error::NumericIntegrity(format!(
            "eigen-decomposition of the post-measurement state disagrees with the closed form \
             (weights {:e}, vectors {:?})",
            weight_residual.as_f64(),
            eigenvector_residual.map(Real::as_f64)
        )));
    }

    Ok(PostMeasurementReport {
        state,
        weights,
        expected_weights,
        rotation,
        state_residual,
        weight_residual,
        eigenvector_residual,
        rotation_attempts: attempts,
    })
}

/// `(σ₂⊗σ₂)(σ₃⊗σ₃)` and `(σ₂⊗σ₃)(σ₃⊗σ₂)`, the products whose averages make up C.
pub fn witness_products<T: Real>() -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let a = &PauliString::S22.matrix::<T>() * &PauliString::S33.matrix::<T>();
    let b = &PauliString::S23.matrix::<T>() * &PauliString::S32.matrix::<T>();
    (a, b)
}
