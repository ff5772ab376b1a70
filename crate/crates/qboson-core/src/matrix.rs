//! Small dense complex matrices.
//!
//! Truncated representations never exceed a few thousand rows, so a plain
//! row-major `Vec<Complex64>` with naive products is entirely adequate. The
//! one nontrivial routine is a cyclic Jacobi eigensolver for Hermitian
//! matrices, used to extract Schmidt spectra.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: alloc::vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch in matrix product"
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for a in &mut out.data {
            *a *= c;
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Kronecker product, first factor on the slow index.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |self − other|` entrywise.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }

    pub fn powi(&self, n: u32) -> Self {
        assert_eq!(self.rows, self.cols);
        let mut acc = Self::identity(self.rows);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

impl core::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns the spectrum in descending order. Convergence is quadratic; the
/// sweep loop stops once all off-diagonal magnitudes fall below
/// `1e-14 · max(1, ‖A‖_F)`.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    assert_eq!(a.rows, a.cols, "eigensolver needs a square matrix");
    let n = a.rows;
    let mut m = a.clone();
    let tol = 1e-14 * m.frobenius().max(1.0);

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(m[(p, q)].norm());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag <= tol * 1e-2 {
                    continue;
                }
                // Unitary 2x2 rotation annihilating the (p, q) entry:
                // with phase φ = a_pq/|a_pq|, the real symmetric reduction has
                // off-diagonal |a_pq| and diagonals a_pp, a_qq.
                let phase = apq / mag;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // columns: col_p' = c col_p − s φ* col_q ; col_q' = s φ col_p + c col_q
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip * c - miq * phase.conj() * s;
                    m[(i, q)] = mip * phase * s + miq * c;
                }
                // rows with the conjugate rotation
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = mpj * c - mqj * phase * s;
                    m[(q, j)] = mpj * phase.conj() * s + mqj * c;
                }
            }
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    eigs.sort_by(|x, y| y.partial_cmp(x).unwrap());
    eigs
}

/// Squared singular values of a rectangular matrix (eigenvalues of `A·A†`),
/// descending.
pub fn singular_values_squared(a: &CMatrix) -> Vec<f64> {
    let gram = a.mul(&a.dagger());
    hermitian_eigenvalues(&gram)
        .into_iter()
        .map(|x| x.max(0.0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kron_and_products() {
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 1)] = c(1.0, 0.0);
        let id = CMatrix::identity(2);
        let k = a.kron(&id);
        assert_eq!(k.rows(), 4);
        assert_eq!(k[(0, 2)], c(1.0, 0.0));
        assert_eq!(k[(1, 3)], c(1.0, 0.0));
        assert!(id.mul(&id).max_diff(&id) < 1e-15);
    }

    #[test]
    fn eigenvalues_of_diagonal() {
        let d = CMatrix::from_diag(&[c(3.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0)]);
        let e = hermitian_eigenvalues(&d);
        assert_eq!(e, alloc::vec![3.0, 2.0, -1.0]);
    }

    #[test]
    fn eigenvalues_of_pauli_like() {
        // [[0, i], [-i, 0]] has eigenvalues ±1
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = c(0.0, 1.0);
        m[(1, 0)] = c(0.0, -1.0);
        let e = hermitian_eigenvalues(&m);
        assert_relative_eq!(e[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(e[1], -1.0, epsilon = 1e-12);
    }

    #[test]
    fn eigenvalues_of_known_hermitian() {
        // [[2, 1−i], [1+i, 3]]: eigenvalues (5 ± √17)/2... check via trace and det
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(2.0, 0.0);
        m[(0, 1)] = c(1.0, -1.0);
        m[(1, 0)] = c(1.0, 1.0);
        m[(1, 1)] = c(3.0, 0.0);
        let e = hermitian_eigenvalues(&m);
        assert_relative_eq!(e[0] + e[1], 5.0, epsilon = 1e-12);
        assert_relative_eq!(e[0] * e[1], 4.0, epsilon = 1e-12); // det = 6 − |1−i|² = 4
    }

    #[test]
    fn jacobi_preserves_trace_on_random_hermitian() {
        // deterministic pseudo-random Hermitian matrix
        let n = 8;
        let mut m = CMatrix::zeros(n, n);
        let mut seed = 0x243f6a8885a308d3u64;
        let mut next = move || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((seed >> 11) as f64) / (1u64 << 53) as f64 - 0.5
        };
        for i in 0..n {
            for j in i..n {
                if i == j {
                    m[(i, i)] = c(next(), 0.0);
                } else {
                    let v = c(next(), next());
                    m[(i, j)] = v;
                    m[(j, i)] = v.conj();
                }
            }
        }
        let trace: f64 = (0..n).map(|i| m[(i, i)].re).sum();
        let e = hermitian_eigenvalues(&m);
        let sum: f64 = e.iter().sum();
        assert_relative_eq!(trace, sum, epsilon = 1e-10);
        // eigenvalue equation residual via characteristic sums: check Frobenius
        let frob2: f64 = m.data.iter().map(|x| x.norm_sqr()).sum();
        let eig2: f64 = e.iter().map(|x| x * x).sum();
        assert_relative_eq!(frob2, eig2, max_relative = 1e-10);
    }

    #[test]
    fn singular_values_of_rank_one() {
        // outer product u v†: single nonzero singular value |u||v|
        let u = [c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 1.0)];
        let v = [c(0.5, 0.5), c(1.0, 0.0)];
        let mut m = CMatrix::zeros(3, 2);
        for i in 0..3 {
            for j in 0..2 {
                m[(i, j)] = u[i] * v[j].conj();
            }
        }
        let s2 = singular_values_squared(&m);
        let nu: f64 = u.iter().map(|x| x.norm_sqr()).sum();
        let nv: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        assert_relative_eq!(s2[0], nu * nv, max_relative = 1e-12);
        for v in &s2[1..] {
            assert!(v.abs() < 1e-12);
        }
    }
}
