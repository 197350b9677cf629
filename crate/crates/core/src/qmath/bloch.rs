use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use super::TAU_POS;
use crate::error::{Error, Result};

/// A unit vector in R³, used as a measurement axis on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitVector3([f64; 3]);

impl UnitVector3 {
    /// Normalizes `v`. Fails on a (near) zero vector.
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let norm = norm3(&v);
        if !norm.is_finite() || norm <= 1e-300 {
            return Err(Error::InvalidState(format!("cannot normalize {v:?}")));
        }
        Ok(Self([v[0] / norm, v[1] / norm, v[2] / norm]))
    }

    /// Axis of `σ_θ = cos θ σ_x + sin θ σ_y` in the equatorial plane.
    pub fn equatorial(theta: f64) -> Self {
        Self([theta.cos(), theta.sin(), 0.0])
    }

    pub fn x() -> Self {
        Self([1.0, 0.0, 0.0])
    }

    pub fn y() -> Self {
        Self([0.0, 1.0, 0.0])
    }

    pub fn z() -> Self {
        Self([0.0, 0.0, 1.0])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &UnitVector3) -> f64 {
        dot3(&self.0, &other.0)
    }
}

/// Hermitian qubit operator `c0·𝟙 + c·σ`.
///
/// Hermiticity is structural: every coefficient is real. The spectrum is
/// `{c0 − |c|, c0 + |c|}` and the trace is `2·c0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochOperator {
    pub c0: f64,
    pub c: [f64; 3],
}

impl BlochOperator {
    pub const fn new(c0: f64, c: [f64; 3]) -> Self {
        Self { c0, c }
    }

    pub const fn identity() -> Self {
        Self::new(1.0, [0.0; 3])
    }

    pub const fn zero() -> Self {
        Self::new(0.0, [0.0; 3])
    }

    /// `𝟙/2`.
    pub const fn maximally_mixed() -> Self {
        Self::new(0.5, [0.0; 3])
    }

    /// The observable `n·σ`.
    pub fn observable(axis: &UnitVector3) -> Self {
        Self::new(0.0, axis.components())
    }

    /// `σ_θ = cos θ σ_x + sin θ σ_y`.
    pub fn sigma_theta(theta: f64) -> Self {
        Self::observable(&UnitVector3::equatorial(theta))
    }

    /// Noisy dichotomic effect `(𝟙 + η·a·n·σ)/2`. With `eta = 1` this is the
    /// spectral projector of `n·σ` for outcome `a`.
    pub fn dichotomic_effect(axis: &UnitVector3, eta: f64, outcome: i8) -> Self {
        let s = 0.5 * eta * f64::from(outcome);
        let n = axis.components();
        Self::new(0.5, [s * n[0], s * n[1], s * n[2]])
    }

    /// Sharp projector `(𝟙 + a·n·σ)/2`.
    pub fn projector(axis: &UnitVector3, outcome: i8) -> Self {
        Self::dichotomic_effect(axis, 1.0, outcome)
    }

    pub fn vector_norm(&self) -> f64 {
        norm3(&self.c)
    }

    pub fn trace(&self) -> f64 {
        2.0 * self.c0
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let r = self.vector_norm();
        [self.c0 - r, self.c0 + r]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.c0 - self.vector_norm()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.c0 + self.vector_norm()
    }

    /// Positive semidefinite up to [`TAU_POS`].
    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue() >= -TAU_POS
    }

    /// `0 ≤ A ≤ 𝟙` up to [`TAU_POS`].
    pub fn is_effect(&self) -> bool {
        self.is_psd() && self.max_eigenvalue() <= 1.0 + TAU_POS
    }

    /// Positive semidefinite with unit trace.
    pub fn is_density(&self) -> bool {
        self.is_psd() && (self.trace() - 1.0).abs() <= 1e-12
    }

    /// `Tr[self · other]`.
    pub fn trace_product(&self, other: &BlochOperator) -> f64 {
        2.0 * (self.c0 * other.c0 + dot3(&self.c, &other.c))
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(k * self.c0, [k * self.c[0], k * self.c[1], k * self.c[2]])
    }

    /// Largest absolute coefficient difference.
    pub fn max_abs_diff(&self, other: &BlochOperator) -> f64 {
        let mut d = (self.c0 - other.c0).abs();
        for i in 0..3 {
            d = d.max((self.c[i] - other.c[i]).abs());
        }
        d
    }

    /// Positive square root, the Kraus operator of the Lüders instrument.
    pub fn sqrt_psd(&self) -> Result<Self> {
        if !self.is_psd() {
            return Err(Error::InvalidState(format!(
                "square root of operator with eigenvalue {}",
                self.min_eigenvalue()
            )));
        }
        let r = self.vector_norm();
        let lo = (self.c0 - r).max(0.0).sqrt();
        let hi = (self.c0 + r).max(0.0).sqrt();
        if r == 0.0 {
            return Ok(Self::new(hi, [0.0; 3]));
        }
        let k = 0.5 * (hi - lo) / r;
        Ok(Self::new(0.5 * (hi + lo), [k * self.c[0], k * self.c[1], k * self.c[2]]))
    }

    /// `self · rho · self` for Hermitian `self`; the result is Hermitian.
    pub fn sandwich(&self, rho: &BlochOperator) -> Self {
        let (m0, m) = (self.c0, self.c);
        let (r0, r) = (rho.c0, rho.c);
        let m2 = dot3(&m, &m);
        let mr = dot3(&m, &r);
        let c0 = r0 * (m0 * m0 + m2) + 2.0 * m0 * mr;
        let mut c = [0.0; 3];
        for i in 0..3 {
            c[i] = 2.0 * m0 * r0 * m[i] + 2.0 * mr * m[i] + (m0 * m0 - m2) * r[i];
        }
        Self::new(c0, c)
    }

    /// Bloch operator with the vector part negated (the spin-flip of a qubit
    /// effect or state).
    pub fn spin_flipped(&self) -> Self {
        Self::new(self.c0, [-self.c[0], -self.c[1], -self.c[2]])
    }
}

impl Add for BlochOperator {
    type Output = BlochOperator;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.c0 + rhs.c0,
            [self.c[0] + rhs.c[0], self.c[1] + rhs.c[1], self.c[2] + rhs.c[2]],
        )
    }
}

impl Sub for BlochOperator {
    type Output = BlochOperator;
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.c0 - rhs.c0,
            [self.c[0] - rhs.c[0], self.c[1] - rhs.c[1], self.c[2] - rhs.c[2]],
        )
    }
}

impl Mul<f64> for BlochOperator {
    type Output = BlochOperator;
    fn mul(self, k: f64) -> Self {
        self.scale(k)
    }
}

impl std::iter::Sum for BlochOperator {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

/// `Tr[AB] = 2(a0·b0 + a·b)`.
pub fn bloch_trace_product(a: &BlochOperator, b: &BlochOperator) -> f64 {
    a.trace_product(b)
}

/// Angle `kπ/N` of the k-th of N evenly spaced equatorial settings.
pub(crate) fn equatorial_angle(n: usize, k: usize) -> f64 {
    k as f64 * PI / n as f64
}

pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm3(a: &[f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn trace_product_mixed_state() {
        let e = BlochOperator::new(0.5, [0.1, -0.2, 0.3]);
        assert_abs_diff_eq!(BlochOperator::maximally_mixed().trace_product(&e), 0.5);
    }

    #[test]
    fn projector_is_idempotent_in_trace() {
        let p = BlochOperator::projector(&UnitVector3::equatorial(0.7), 1);
        assert_abs_diff_eq!(bloch_trace_product(&p, &p), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn unsharp_x_on_plus_state() {
        let rho = BlochOperator::projector(&UnitVector3::x(), 1);
        let e = BlochOperator::dichotomic_effect(&UnitVector3::x(), 0.6, 1);
        assert_abs_diff_eq!(rho.trace_product(&e), 0.8, epsilon = 1e-15);
    }

    #[test]
    fn sqrt_squares_back() {
        let e = BlochOperator::dichotomic_effect(&UnitVector3::equatorial(1.1), 0.66, -1);
        let k = e.sqrt_psd().unwrap();
        let back = k.sandwich(&BlochOperator::identity());
        assert!(back.max_abs_diff(&e) < 1e-15);
    }

    #[test]
    fn sqrt_of_projector_is_itself() {
        let p = BlochOperator::projector(&UnitVector3::z(), -1);
        assert!(p.sqrt_psd().unwrap().max_abs_diff(&p) < 1e-15);
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        assert!(BlochOperator::observable(&UnitVector3::x()).sqrt_psd().is_err());
    }

    #[test]
    fn unit_vector_normalizes() {
        let u = UnitVector3::new([3.0, 0.0, 4.0]).unwrap();
        assert_abs_diff_eq!(norm3(&u.components()), 1.0, epsilon = 1e-12);
        assert!(UnitVector3::new([0.0; 3]).is_err());
    }

    #[test]
    fn psd_boundary() {
        assert!(BlochOperator::new(0.5, [0.5, 0.0, 0.0]).is_psd());
        assert!(!BlochOperator::new(0.5, [0.5 + 1e-9, 0.0, 0.0]).is_psd());
    }
}
