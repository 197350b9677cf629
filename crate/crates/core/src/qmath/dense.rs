use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::{tau_herm, BlochOperator};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
#[cfg(test)]
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense row-major complex matrix of dimension 2 or 4.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { dim, data: vec![ZERO; dim * dim] })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        Ok(m)
    }

    /// Builds a matrix from rows; the row count fixes the dimension.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        check_dim(dim)?;
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Projector `|ψ⟩⟨ψ|` onto the (unnormalized) vector `psi`.
    pub fn outer(psi: &[Complex64]) -> Result<Self> {
        let dim = psi.len();
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = psi[i] * psi[j].conj();
            }
        }
        Ok(m)
    }

    /// Dense form of `c0·𝟙 + c·σ`.
    pub fn from_bloch(op: &BlochOperator) -> Self {
        let [x, y, z] = op.c;
        let c0 = op.c0;
        Self {
            dim: 2,
            data: vec![
                Complex64::new(c0 + z, 0.0),
                Complex64::new(x, -y),
                Complex64::new(x, y),
                Complex64::new(c0 - z, 0.0),
            ],
        }
    }

    /// Pauli coefficients of a Hermitian 2×2 matrix.
    pub fn to_bloch(&self) -> Result<BlochOperator> {
        if self.dim != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: self.dim });
        }
        self.check_hermitian()?;
        let (a, b, c, d) = (self.data[0], self.data[1], self.data[2], self.data[3]);
        let off = 0.5 * (c + b.conj());
        Ok(BlochOperator::new(
            0.5 * (a.re + d.re),
            [off.re, off.im, 0.5 * (a.re - d.re)],
        ))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = self.data[j * n + i].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance between the matrix and its conjugate transpose.
    pub fn hermiticity_distance(&self) -> f64 {
        (self - &self.dagger()).frobenius_norm()
    }

    pub fn check_hermitian(&self) -> Result<()> {
        let d = self.hermiticity_distance();
        if d > tau_herm(self.frobenius_norm()) {
            return Err(Error::NotHermitian(d));
        }
        Ok(())
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * k).collect() }
    }

    /// Checked product; dimensions must agree.
    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: rhs.dim });
        }
        Ok(self * rhs)
    }

    /// Smallest eigenvalue of a Hermitian matrix.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(eig_hermitian(self)?.values[0])
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        ComplexMatrix { dim: n, data }
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        ComplexMatrix { dim: self.dim, data }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in difference");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        ComplexMatrix { dim: self.dim, data }
    }
}

/// Eigen-decomposition `M = V·diag(values)·V†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unitary whose columns are the eigenvectors, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.vectors.dim;
        let mut lambda = ComplexMatrix { dim: n, data: vec![ZERO; n * n] };
        for (i, &v) in self.values.iter().enumerate() {
            lambda.data[i * n + i] = Complex64::new(v, 0.0);
        }
        &(&self.vectors * &lambda) * &self.vectors.dagger()
    }
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian 2×2 or 4×4 matrix
/// by cyclic complex Jacobi rotations.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    m.check_hermitian()?;
    let n = m.dim;
    // Symmetrize so that round-off asymmetry does not feed the rotations.
    let mut a = (m + &m.dagger()).scale(Complex64::new(0.5, 0.0));
    let mut v = ComplexMatrix::identity(n)?;
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _sweep in 0..64 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a.get(i, j).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-16 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                let mut j = ComplexMatrix::identity(n)?;
                j.set(p, p, Complex64::new(c, 0.0));
                j.set(p, q, Complex64::new(s, 0.0));
                j.set(q, p, -phase.conj() * s);
                j.set(q, q, phase.conj() * c);

                a = &(&j.dagger() * &a) * &j;
                v = &v * &j;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a.get(x, x).re.total_cmp(&a.get(y, y).re));
    let values = order.iter().map(|&i| a.get(i, i).re).collect();
    let mut vectors = ComplexMatrix { dim: n, data: vec![ZERO; n * n] };
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors.set(row, col, v.get(row, src));
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Kronecker product of two 2×2 matrices.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    for m in [a, b] {
        if m.dim != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: m.dim });
        }
    }
    let mut out = ComplexMatrix::zeros(4)?;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.set(2 * i + k, 2 * j + l, a.get(i, j) * b.get(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// Traces out the first tensor factor of a 4×4 matrix.
pub fn partial_trace_first(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.dim != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: m.dim });
    }
    let mut out = ComplexMatrix::zeros(2)?;
    for k in 0..2 {
        for l in 0..2 {
            out.set(k, l, m.get(k, l) + m.get(2 + k, 2 + l));
        }
    }
    Ok(out)
}

#[cfg(test)]
fn pauli(which: usize) -> ComplexMatrix {
    let data = match which {
        0 => vec![ONE, ZERO, ZERO, ONE],
        1 => vec![ZERO, ONE, ONE, ZERO],
        2 => vec![ZERO, -I, I, ZERO],
        3 => vec![ONE, ZERO, ZERO, -ONE],
        _ => panic!("no Pauli matrix {which}"),
    };
    ComplexMatrix { dim: 2, data }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: 4, got: dim })
    }
}
