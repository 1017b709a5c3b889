//! Dense complex matrices for one- and two-qubit operators.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Square complex matrix stored row-major. Only dimensions 2 and 4 occur in
/// practice, but nothing here depends on that.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T: Real> {
    dim: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn new(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("matrix dimension must be positive"));
        }
        if entries.len() != dim * dim {
            return Err(invalid(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows<const N: usize>(rows: [[Complex<T>; N]; N]) -> Self {
        Self {
            dim: N,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        Self {
            dim: N,
            entries: rows
                .into_iter()
                .flatten()
                .map(|x| Complex::new(T::lit(x), T::zero()))
                .collect(),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex::one();
        }
        m
    }

    pub fn diag(values: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m.entries[i * values.len() + i] = *v;
        }
        m
    }

    /// `|v⟩⟨v|` for an arbitrary (not necessarily normalized) ket.
    pub fn outer(ket: &[Complex<T>]) -> Self {
        let dim = ket.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for a in ket {
            for b in ket {
                entries.push(*a * b.conj());
            }
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex<T>) {
        self.entries[row * self.dim + col] = value;
    }

    fn check_same_dim(&self, other: &Self, op: &str) -> Result<()> {
        if self.dim != other.dim {
            return Err(invalid(format!(
                "{op}: dimension mismatch ({} vs {})",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other, "matrix product")?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] = out.entries[i * n + j] + a * other.entries[k * n + j];
                }
            }
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other, "matrix sum")?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other, "matrix difference")?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| *a * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: T) -> Self {
        self.scale(Complex::new(factor, T::zero()))
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim)
            .map(|i| self.entries[i * self.dim + i])
            .fold(Complex::zero(), |acc, x| acc + x)
    }

    /// `A ρ A†`.
    pub fn conjugate(&self, rho: &Self) -> Result<Self> {
        self.try_mul(rho)?.try_mul(&self.adjoint())
    }

    pub fn apply(&self, ket: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if ket.len() != self.dim {
            return Err(invalid(format!(
                "cannot apply a {}x{} matrix to a vector of length {}",
                self.dim,
                self.dim,
                ket.len()
            )));
        }
        Ok((0..self.dim)
            .map(|i| {
                (0..self.dim).fold(Complex::zero(), |acc, j| {
                    acc + self.entries[i * self.dim + j] * ket[j]
                })
            })
            .collect())
    }

    /// Largest entrywise modulus of `self - other`; infinite on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.dim != other.dim {
            return T::infinity();
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn max_abs(&self) -> T {
        self.entries
            .iter()
            .map(|a| a.norm())
            .fold(T::zero(), T::max)
    }

    pub fn approx_eq(&self, other: &Self, tolerance: T) -> bool {
        self.max_abs_diff(other) <= tolerance
    }

    pub fn is_hermitian(&self, tolerance: T) -> bool {
        self.approx_eq(&self.adjoint(), tolerance)
    }

    /// Eigenvalues (ascending) and matching unit eigenvectors of a Hermitian
    /// matrix. The decomposition runs in `f64` regardless of `T`.
    pub fn hermitian_eigen(&self) -> (Vec<T>, Vec<Vec<Complex<T>>>) {
        let n = self.dim;
        // Symmetrize so round-off in the input cannot leak into the solver.
        let m = DMatrix::from_fn(n, n, |i, j| {
            let a = self.get(i, j);
            let b = self.get(j, i).conj();
            Complex::new(
                (a.re.as_f64() + b.re.as_f64()) * 0.5,
                (a.im.as_f64() + b.im.as_f64()) * 0.5,
            )
        });
        let eig = m.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| T::lit(eig.eigenvalues[k])).collect();
        let vectors = order
            .iter()
            .map(|&k| {
                eig.eigenvectors
                    .column(k)
                    .iter()
                    .map(|z| Complex::new(T::lit(z.re), T::lit(z.im)))
                    .collect()
            })
            .collect();
        (values, vectors)
    }
}

/// Tensor product with `a` as the outer (left) factor.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    if a.dim != 2 || b.dim != 2 {
        return Err(invalid(format!(
            "kron expects two 2x2 factors, got {}x{} and {}x{}",
            a.dim, a.dim, b.dim, b.dim
        )));
    }
    Ok(kron_any(a, b))
}

pub(crate) fn kron_any<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (na, nb) = (a.dim, b.dim);
    let n = na * nb;
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..na {
        for j in 0..na {
            let x = a.entries[i * na + j];
            for k in 0..nb {
                for l in 0..nb {
                    out.entries[(i * nb + k) * n + (j * nb + l)] = x * b.entries[k * nb + l];
                }
            }
        }
    }
    out
}

/// Tensor product of two kets, left factor outermost.
pub fn kron_ket<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| *x * *y))
        .collect()
}

/// `ab - ba`.
pub fn commutator<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    a.try_mul(b)?.try_sub(&b.try_mul(a)?)
}

// Operator forms panic on dimension mismatch; use the `try_*` methods when the
// dimensions are not known statically.

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.try_mul(rhs)
            .expect("matrix product dimension mismatch")
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        self.try_add(rhs).expect("matrix sum dimension mismatch")
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        self.try_sub(rhs)
            .expect("matrix difference dimension mismatch")
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        self.scale_real(-T::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ci, cr};

    #[test]
    fn new_rejects_wrong_entry_count() {
        assert!(ComplexMatrix::<f64>::new(2, vec![cr(1.0); 3]).is_err());
        assert!(ComplexMatrix::<f64>::new(0, vec![]).is_err());
    }

    #[test]
    fn product_and_adjoint() {
        let a = ComplexMatrix::<f64>::from_rows([[cr(1.0), ci(2.0)], [cr(0.0), cr(3.0)]]);
        let b = a.adjoint();
        assert_eq!(b.get(1, 0), ci(-2.0));
        let ab = &a * &b;
        assert_eq!(ab.get(0, 0), cr(5.0));
        assert_eq!(ab.get(0, 1), ci(6.0));
        assert!(ab.is_hermitian(0.0));
    }

    #[test]
    fn mismatched_dims_are_errors() {
        let a = ComplexMatrix::<f64>::identity(2);
        let b = ComplexMatrix::<f64>::identity(4);
        assert!(a.try_mul(&b).is_err());
        assert!(commutator(&a, &b).is_err());
        assert!(kron(&b, &a).is_err());
        assert!(a.apply(&[cr(1.0)]).is_err());
    }

    #[test]
    fn eigen_of_diagonal() {
        let m = ComplexMatrix::<f64>::diag(&[cr(0.5), cr(-1.0), cr(2.0), cr(0.0)]);
        let (vals, vecs) = m.hermitian_eigen();
        assert_eq!(vals, vec![-1.0, 0.0, 0.5, 2.0]);
        assert!((vecs[0][1].norm() - 1.0).abs() < 1e-14);
    }
}
