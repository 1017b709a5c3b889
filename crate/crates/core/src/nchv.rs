//! Noncontextual hidden-variable oracle.
//!
//! Everything here is exact `i8` sign arithmetic and independent of the
//! matrix code: an assignment fixes `v(σ₂¹), v(σ₂²), v(σ₃¹), v(σ₃²)` and
//! functional consistency determines the values of the products.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Tolerance on the normalization of a distribution over assignments.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// Values of the four single-qubit observables, each `+1` or `−1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct NchvAssignment {
    pub s2_1: i8,
    pub s2_2: i8,
    pub s3_1: i8,
    pub s3_2: i8,
}

fn check_sign(v: i8) -> Result<i8> {
    if v == 1 || v == -1 {
        Ok(v)
    } else {
        Err(invalid(format!(
            "hidden-variable value must be +1 or -1, got {v}"
        )))
    }
}

impl NchvAssignment {
    pub fn new(s2_1: i8, s2_2: i8, s3_1: i8, s3_2: i8) -> Result<Self> {
        Ok(Self {
            s2_1: check_sign(s2_1)?,
            s2_2: check_sign(s2_2)?,
            s3_1: check_sign(s3_1)?,
            s3_2: check_sign(s3_2)?,
        })
    }

    pub fn values(&self) -> [i8; 4] {
        [self.s2_1, self.s2_2, self.s3_1, self.s3_2]
    }
}

/// All 16 assignments, lexicographic in `(σ₂¹, σ₂², σ₃¹, σ₃²)` with `+1`
/// before `−1`.
pub fn enumerate_assignments() -> Vec<NchvAssignment> {
    let sign = |bit: u8| if bit == 0 { 1 } else { -1 };
    (0u8..16)
        .map(|k| NchvAssignment {
            s2_1: sign((k >> 3) & 1),
            s2_2: sign((k >> 2) & 1),
            s3_1: sign((k >> 1) & 1),
            s3_2: sign(k & 1),
        })
        .collect()
}

/// Values of `(σ₂⊗σ₂)(σ₃⊗σ₃)` and `(σ₂⊗σ₃)(σ₃⊗σ₂)` forced by functional
/// consistency. Both are the product of all four single-qubit values.
pub fn induced_product_values(a: &NchvAssignment) -> (i8, i8) {
    let first = (a.s2_1 * a.s2_2) * (a.s3_1 * a.s3_2);
    let second = (a.s2_1 * a.s3_2) * (a.s3_1 * a.s2_2);
    (first, second)
}

/// Ensemble average of `second − first` over a distribution on the 16
/// assignments (in [`enumerate_assignments`] order).
pub fn nchv_c<T: Real>(weights: &[T; 16]) -> Result<T> {
    let mut total = T::zero();
    for w in weights {
        if w.is_nan() || *w < T::zero() {
            return Err(invalid(format!("weight {w} is negative or not a number")));
        }
        total = total + *w;
    }
    if (total - T::one()).abs() > T::lit(WEIGHT_SUM_TOLERANCE) {
        return Err(invalid(format!("weights sum to {total}, not 1")));
    }
    Ok(enumerate_assignments()
        .iter()
        .zip(weights)
        .map(|(a, w)| {
            let (first, second) = induced_product_values(a);
            *w * T::lit(f64::from(second - first))
        })
        .fold(T::zero(), |acc, x| acc + x))
}

/// The nine observables of the state-specific proof.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Observable {
    S2_1,
    S2_2,
    S3_1,
    S3_2,
    S22,
    S33,
    S23,
    S32,
    S11,
}

impl Observable {
    pub const ALL: [Observable; 9] = [
        Observable::S2_1,
        Observable::S2_2,
        Observable::S3_1,
        Observable::S3_2,
        Observable::S22,
        Observable::S33,
        Observable::S23,
        Observable::S32,
        Observable::S11,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Observable::S2_1 => "s2(1)",
            Observable::S2_2 => "s2(2)",
            Observable::S3_1 => "s3(1)",
            Observable::S3_2 => "s3(2)",
            Observable::S22 => "s2s2",
            Observable::S33 => "s3s3",
            Observable::S23 => "s2s3",
            Observable::S32 => "s3s2",
            Observable::S11 => "s1s1",
        }
    }
}

/// A `±1` value for each of the nine observables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct NineObservableValues {
    values: [i8; 9],
}

impl NineObservableValues {
    pub fn new(values: [i8; 9]) -> Result<Self> {
        for v in values {
            check_sign(v)?;
        }
        Ok(Self { values })
    }

    pub fn get(&self, obs: Observable) -> i8 {
        self.values[obs as usize]
    }

    pub fn values(&self) -> [i8; 9] {
        self.values
    }

    /// Bit `k` of `code` set means observable `k` takes `−1`.
    fn from_code(code: u16) -> Self {
        let mut values = [1i8; 9];
        for (k, v) in values.iter_mut().enumerate() {
            if (code >> k) & 1 == 1 {
                *v = -1;
            }
        }
        Self { values }
    }

    /// Product observables equal the product of their single-qubit factors.
    pub fn factorizes(&self) -> bool {
        use Observable::*;
        let v = |o| self.get(o);
        v(S22) == v(S2_1) * v(S2_2)
            && v(S33) == v(S3_1) * v(S3_2)
            && v(S23) == v(S2_1) * v(S3_2)
            && v(S32) == v(S3_1) * v(S2_2)
    }
}

/// Which constraints [`contradiction_search`] imposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchConstraints {
    /// Products factor into single-qubit values.
    pub factorization: bool,
    /// `v(σ₂⊗σ₂)·v(σ₃⊗σ₃) = −v(σ₁⊗σ₁)`.
    pub identity_22_33: bool,
    /// `v(σ₂⊗σ₃)·v(σ₃⊗σ₂) = +v(σ₁⊗σ₁)`.
    pub identity_23_32: bool,
    /// `v(σ₁⊗σ₁)` equals the target eigenvalue.
    pub fix_target: bool,
}

impl Default for SearchConstraints {
    fn default() -> Self {
        Self {
            factorization: true,
            identity_22_33: true,
            identity_23_32: true,
            fix_target: true,
        }
    }
}

impl SearchConstraints {
    pub fn without_identities() -> Self {
        Self {
            identity_22_33: false,
            identity_23_32: false,
            ..Self::default()
        }
    }

    pub fn admits(&self, v: &NineObservableValues, target: i8) -> bool {
        use Observable::*;
        (!self.factorization || v.factorizes())
            && (!self.identity_22_33 || v.get(S22) * v.get(S33) == -v.get(S11))
            && (!self.identity_23_32 || v.get(S23) * v.get(S32) == v.get(S11))
            && (!self.fix_target || v.get(S11) == target)
    }
}

/// Exhaustive search over all `2⁹` sign vectors for ones satisfying the
/// selected constraints with `v(σ₁⊗σ₁) = target`.
pub fn contradiction_search(
    target: i8,
    constraints: SearchConstraints,
) -> Result<Vec<NineObservableValues>> {
    check_sign(target)?;
    Ok((0u16..512)
        .map(NineObservableValues::from_code)
        .filter(|v| constraints.admits(v, target))
        .collect())
}
