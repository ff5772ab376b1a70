//! Truncated matrix representations.
//!
//! The Fock module carries the ladder action `a|n⟩ = √(n)_{α,β}|n−1⟩`,
//! `a†|n⟩ = √(n+1)_{α,β}|n+1⟩` on a `D`-dimensional truncation. Operators
//! declare an interior-validity margin: products are exact on basis states
//! whose index stays below `D − margin`, and all assertions restrict to that
//! window.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::params::DeformationParams;
use crate::special::box_number;
use crate::ualg::{UElement, UTensorElement};

/// A truncated Fock module at fixed deformation parameters.
#[derive(Debug, Clone)]
pub struct FockSpace {
    dim: usize,
    params: DeformationParams,
}

/// A matrix on the truncated Fock space together with the number of top
/// basis states its construction may have corrupted.
#[derive(Debug, Clone)]
pub struct FockOperator {
    pub matrix: CMatrix,
    pub margin: usize,
}

impl FockSpace {
    /// Builds the space, rejecting parameter domains where some ladder norm
    /// `(n)_{α,β}` is negative (no unitarizable representation).
    pub fn new(dim: usize, params: DeformationParams) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParams(alloc::format!(
                "Fock dimension must be at least 2, got {dim}"
            )));
        }
        for n in 1..=dim as i64 {
            let v = box_number(n, &params);
            if v < 0.0 {
                return Err(Error::NotUnitarizable {
                    level: n as usize,
                    value: v,
                });
            }
        }
        Ok(Self { dim, params })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &DeformationParams {
        &self.params
    }

    /// Ladder norms `√(n)_{α,β}` for `n = 0..D`.
    fn root(&self, n: usize) -> f64 {
        box_number(n as i64, &self.params).sqrt()
    }

    /// Annihilation operator `a|n⟩ = √(n)_{α,β}|n−1⟩`.
    pub fn rep_a(&self) -> FockOperator {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for n in 1..self.dim {
            m[(n - 1, n)] = Complex64::new(self.root(n), 0.0);
        }
        FockOperator {
            matrix: m,
            margin: 0,
        }
    }

    /// Creation operator `a†|n⟩ = √(n+1)_{α,β}|n+1⟩`.
    pub fn rep_adag(&self) -> FockOperator {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for n in 0..self.dim - 1 {
            m[(n + 1, n)] = Complex64::new(self.root(n + 1), 0.0);
        }
        FockOperator {
            matrix: m,
            margin: 1,
        }
    }

    /// Number operator `N|n⟩ = n|n⟩`.
    pub fn rep_n(&self) -> FockOperator {
        let diag: Vec<Complex64> = (0..self.dim)
            .map(|n| Complex64::new(n as f64, 0.0))
            .collect();
        FockOperator {
            matrix: CMatrix::from_diag(&diag),
            margin: 0,
        }
    }

    /// Grading element `𝗀|n⟩ = e^{iπβ/α} (−1)^n |n⟩`.
    pub fn rep_g(&self) -> FockOperator {
        let phase = Complex64::new(0.0, core::f64::consts::PI * self.params.beta_ratio()).exp();
        let diag: Vec<Complex64> = (0..self.dim)
            .map(|n| phase * if n % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        FockOperator {
            matrix: CMatrix::from_diag(&diag),
            margin: 0,
        }
    }

    /// Represents a normal-ordered element: each `a†^k f(Ñ) a^m` acts as the
    /// ladder chains with `f` evaluated at `Ñ = n + β/α`.
    pub fn represent(&self, u: &UElement) -> FockOperator {
        let d = self.dim;
        let shift = self.params.beta_ratio();
        let mut out = CMatrix::zeros(d, d);
        let mut margin = 0usize;
        for ((k, m), f) in u.terms() {
            let (k, m) = (*k as usize, *m as usize);
            margin = margin.max(k);
            for col in 0..d {
                if col < m {
                    continue;
                }
                let mid = col - m;
                let row = mid + k;
                if row >= d {
                    continue;
                }
                // a^m ladder norms downward, a†^k upward from the middle state
                let mut amp = 1.0;
                for j in 0..m {
                    amp *= self.root(col - j);
                }
                for j in 0..k {
                    amp *= self.root(mid + j + 1);
                }
                let value = f.eval(Complex64::new(mid as f64 + shift, 0.0)) * amp;
                out[(row, col)] += value;
            }
        }
        FockOperator {
            matrix: out,
            margin,
        }
    }

    /// Legwise Kronecker representation of a tensor element on `D ⊗ D`.
    pub fn represent_tensor(&self, t: &UTensorElement) -> CMatrix {
        let d2 = self.dim * self.dim;
        let mut out = CMatrix::zeros(d2, d2);
        for (l, r) in t.pairs() {
            let ml = self.represent(l).matrix;
            let mr = self.represent(r).matrix;
            out = out.add(&ml.kron(&mr));
        }
        out
    }

    /// The coproduct of a generator as a matrix on `D ⊗ D`, assembled
    /// legwise (`Δ(a)`, `Δ(a†)`, `Δ(Ñ)` or the grading element).
    pub fn tensor_coproduct_matrix(&self, gen: UGen) -> CMatrix {
        let t = match gen {
            UGen::A => crate::ualg::coproduct_a(&self.params),
            UGen::ADag => crate::ualg::coproduct_adag(&self.params),
            UGen::NTilde => crate::ualg::coproduct_ntilde(),
            UGen::G => {
                UTensorElement::from_pairs(alloc::vec![(UElement::gen_g(), UElement::gen_g(),)])
            }
        };
        self.represent_tensor(&t)
    }
}

/// The four distinguished elements of the algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UGen {
    A,
    ADag,
    NTilde,
    G,
}

/// Max entry difference of two matrices restricted to rows and columns below
/// `limit` (the shared interior window).
pub fn interior_diff(a: &CMatrix, b: &CMatrix, limit: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..limit.min(a.rows()) {
        for j in 0..limit.min(a.cols()) {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exppoly::ExpPoly;
    use crate::special::q_number;
    use approx::assert_relative_eq;

    fn space() -> FockSpace {
        FockSpace::new(12, DeformationParams::new(1.3, 2.0, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn ladder_actions() {
        let s = space();
        let a = s.rep_a().matrix;
        let p = *s.params();
        // a|1⟩ = √[β]_q |0⟩
        assert_relative_eq!(
            a[(0, 1)].re,
            q_number(p.beta(), &p).sqrt(),
            max_relative = 1e-13
        );
        // a|0⟩ = 0
        for i in 0..s.dim() {
            assert_eq!(a[(i, 0)], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn defining_relation_on_interior() {
        let s = space();
        let p = *s.params();
        let a = s.rep_a().matrix;
        let adag = s.rep_adag().matrix;
        let anti = a.mul(&adag).add(&adag.mul(&a));
        for n in 0..s.dim() - 1 {
            let expect = q_number(p.alpha() * n as f64 + p.beta(), &p);
            assert_relative_eq!(anti[(n, n)].re, expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn number_commutators_exact() {
        let s = space();
        let a = s.rep_a().matrix;
        let adag = s.rep_adag().matrix;
        let n = s.rep_n().matrix;
        let lhs = n.mul(&a).sub(&a.mul(&n));
        assert!(lhs.max_diff(&a.scale(Complex64::new(-1.0, 0.0))) < 1e-13);
        let lhs2 = n.mul(&adag).sub(&adag.mul(&n));
        // [N, a†] = a† on interior columns; the top column is truncation-corrupted
        assert!(interior_diff(&lhs2, &adag, s.dim() - 1) < 1e-13);
    }

    #[test]
    fn rejects_non_unitarizable_parameters() {
        // α < 0 with q > 1 drives (n) negative quickly
        let p = DeformationParams::new(1.3, -2.0, -1.0).unwrap();
        assert!(matches!(
            FockSpace::new(8, p),
            Err(Error::NotUnitarizable { .. })
        ));
    }

    #[test]
    fn represent_identity_and_ntilde() {
        let s = space();
        let id = s.represent(&UElement::identity());
        assert!(id.matrix.max_diff(&CMatrix::identity(s.dim())) < 1e-15);
        assert_eq!(id.margin, 0);

        let n = s.represent(&UElement::gen_ntilde());
        for i in 0..s.dim() {
            assert_relative_eq!(
                n.matrix[(i, i)].re,
                i as f64 + s.params().beta_ratio(),
                max_relative = 1e-15
            );
        }
    }

    #[test]
    fn represent_matches_ladder_products() {
        let s = space();
        let p = *s.params();
        // represent(a·a†) = rep(a)·rep(a†) on the interior
        let prod = UElement::gen_a().mul(&UElement::gen_adag(), &p).unwrap();
        let sym = s.represent(&prod);
        let num = s.rep_a().matrix.mul(&s.rep_adag().matrix);
        assert!(interior_diff(&sym.matrix, &num, s.dim() - 1) < 1e-12);
        // diagonal is (n+1)_{α,β}
        for n in 0..s.dim() - 1 {
            assert_relative_eq!(
                sym.matrix[(n, n)].re,
                box_number(n as i64 + 1, &p),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn represent_is_algebra_map_on_interior() {
        let s = space();
        let p = *s.params();
        let samples = [
            UElement::basis_e(1, 1, 0),
            UElement::basis_e(0, 1, 2),
            UElement::from_term(2, 1, ExpPoly::q_bracket(&p)),
            UElement::gen_g(),
        ];
        for u in &samples {
            for v in &samples {
                let sym = s.represent(&u.mul(v, &p).unwrap()).matrix;
                let num = s.represent(u).matrix.mul(&s.represent(v).matrix);
                let deg = 6; // generous bound on total ladder degree of the samples
                let d = interior_diff(&sym, &num, s.dim() - deg);
                assert!(d < 1e-10, "residual {d}");
            }
        }
    }

    #[test]
    fn represent_faithful_on_random_pairs_at_d32() {
        use rand_chacha::ChaCha8Rng;
        use rand_core::SeedableRng;
        let p = DeformationParams::new(1.2, 2.0, 1.0).unwrap();
        let s = FockSpace::new(32, p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let u = crate::duality::sample_u(&mut rng);
            let v = crate::duality::sample_u(&mut rng);
            let sym = s.represent(&u.mul(&v, &p).unwrap()).matrix;
            let num = s.represent(&u).matrix.mul(&s.represent(&v).matrix);
            // sampled elements have ladder degree at most 2 per factor;
            // entries reach ~1e13 at the top of the module, so compare
            // relative per entry
            let mut worst = 0.0f64;
            for i in 0..s.dim() - 4 {
                for j in 0..s.dim() - 4 {
                    let scale = 1.0 + sym[(i, j)].norm().max(num[(i, j)].norm());
                    worst = worst.max((sym[(i, j)] - num[(i, j)]).norm() / scale);
                }
            }
            assert!(worst < 1e-10, "residual {worst}");
        }
    }

    #[test]
    fn tensor_coproduct_actions() {
        let s = space();
        let p = *s.params();
        let d = s.dim();
        let da = s.tensor_coproduct_matrix(UGen::A);
        // Δ(a)(|0⟩⊗|0⟩) = 0
        let mut vac = alloc::vec![Complex64::new(0.0, 0.0); d * d];
        vac[0] = Complex64::new(1.0, 0.0);
        let out = da.matvec(&vac);
        assert!(out.iter().all(|c| c.norm() < 1e-15));
        // Δ(a)(|1⟩⊗|0⟩) = √[β]_q q^{β/2} |0⟩⊗|0⟩
        let mut one0 = alloc::vec![Complex64::new(0.0, 0.0); d * d];
        one0[d] = Complex64::new(1.0, 0.0);
        let out = da.matvec(&one0);
        let expect = q_number(p.beta(), &p).sqrt() * p.q().powf(p.beta() / 2.0);
        assert_relative_eq!(out[0].re, expect, max_relative = 1e-12);
        // Δ(Ñ) diagonal at (n, m) is n + m + 2β/α
        let dn = s.tensor_coproduct_matrix(UGen::NTilde);
        let idx = 3 * d + 2;
        assert_relative_eq!(
            dn[(idx, idx)].re,
            3.0 + 2.0 + 2.0 * p.beta_ratio(),
            max_relative = 1e-13
        );
    }
}
