//! Bipartite coherent states: eigenvectors of the coproduct `Δ(a)` on a
//! two-node Fock space.
//!
//! The coefficient matrix solves the double recurrence induced by
//! `Δ(a)|ẑ⟩ = ζ|ẑ⟩`, via the ansatz `c_{n,m} = ζ₁ⁿζ₂ᵐ g_{n,m}/√((n)!(m)!)`
//! and the reparametrization `ρ₁ = (ζ₁/ζ)q^{β/2}`,
//! `ρ₂ = e^{iπβ/α}(ζ₂/ζ)q^{−β/2}`. The geometric-boundary solution carries
//! the factor `q^{−nmα/2}` that forbids factorization for `q ≠ 1`; the
//! Schmidt entropy of the coefficient matrix quantifies it.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fockrep::{FockSpace, UGen};
use crate::matrix::{singular_values_squared, CMatrix};
use crate::params::{DeformationParams, ScalarSeriesBudget};
use crate::special::{box_factorial, box_number, floor_binomial, q_shifted_factorial};

/// Boundary data `g_{0,m} = d_m` for the first row of the solver.
#[derive(Debug, Clone)]
pub enum Boundary {
    /// `d_m = δ^m` with `0 < δ ≤ 1`; admits the closed-form solution.
    Geometric(f64),
    /// An explicit sequence with `0 < d_m ≤ 1`.
    Sequence(Vec<f64>),
}

impl Boundary {
    fn value(&self, m: u32) -> Result<f64> {
        match self {
            Boundary::Geometric(delta) => Ok(delta.powi(m as i32)),
            Boundary::Sequence(d) => d.get(m as usize).copied().ok_or_else(|| {
                Error::Domain(alloc::format!(
                    "boundary sequence too short: need index {m}"
                ))
            }),
        }
    }
}

/// Construction parameters of a bipartite coherent state.
#[derive(Debug, Clone)]
pub struct BipartiteParams {
    pub zeta: Complex64,
    pub zeta1: Complex64,
    pub zeta2: Complex64,
    pub boundary: Boundary,
    rho1: Complex64,
    rho2: Complex64,
}

impl BipartiteParams {
    pub fn new(
        zeta: Complex64,
        zeta1: Complex64,
        zeta2: Complex64,
        boundary: Boundary,
        params: &DeformationParams,
    ) -> Result<Self> {
        if zeta.norm() == 0.0 {
            return Err(Error::InvalidParams("eigenvalue ζ must be nonzero".into()));
        }
        if zeta1.norm() == 0.0 {
            return Err(Error::InvalidParams(
                "ansatz parameter ζ₁ must be nonzero (ρ₁ ≠ 0)".into(),
            ));
        }
        if let Boundary::Geometric(delta) = boundary {
            if !(delta > 0.0 && delta <= 1.0) {
                return Err(Error::InvalidParams(alloc::format!(
                    "geometric boundary needs δ in (0, 1], got {delta}"
                )));
            }
        }
        if let Boundary::Sequence(d) = &boundary {
            if d.iter().any(|v| !(*v > 0.0 && *v <= 1.0)) {
                return Err(Error::InvalidParams(
                    "boundary values must lie in (0, 1]".into(),
                ));
            }
        }
        let phase = Complex64::new(0.0, core::f64::consts::PI * params.beta_ratio()).exp();
        let rho1 = zeta1 / zeta * params.q().powf(params.beta() / 2.0);
        let rho2 = phase * zeta2 / zeta * params.q().powf(-params.beta() / 2.0);
        Ok(Self {
            zeta,
            zeta1,
            zeta2,
            boundary,
            rho1,
            rho2,
        })
    }

    pub fn rho1(&self) -> Complex64 {
        self.rho1
    }

    pub fn rho2(&self) -> Complex64 {
        self.rho2
    }
}

/// The general boundary-driven solution
/// `g_{n,m} = q^{−nmα/2} ρ₁^{−n} Σ_k (−1)^{k(k+1)/2} ⌊n choose k⌋_{q^{−α}}
/// ρ₂^k q^{−k(k−1)α/2} d_{m+k}`.
pub fn g_general(
    n: u32,
    m: u32,
    bp: &BipartiteParams,
    params: &DeformationParams,
) -> Result<Complex64> {
    let q = params.q();
    let alpha = params.alpha();
    let base = q.powf(-alpha);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=n {
        let sign = if (k * (k + 1) / 2) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        let binom = floor_binomial(n, k, base)?;
        let weight = q.powf(-(k as f64) * (k as f64 - 1.0) * alpha / 2.0);
        sum += bp.rho2.powu(k) * (sign * binom * weight * bp.boundary.value(m + k)?);
    }
    let front = q.powf(-(n as f64) * m as f64 * alpha / 2.0);
    Ok(sum * front / bp.rho1.powu(n))
}

/// The closed-form geometric-boundary solution
/// `g_{n,m} = q^{−nmα/2} δ^m ρ₁^{−n} (δρ₂; −q^{−α})_n`.
pub fn g_geometric(
    n: u32,
    m: u32,
    bp: &BipartiteParams,
    params: &DeformationParams,
) -> Result<Complex64> {
    let Boundary::Geometric(delta) = bp.boundary else {
        return Err(Error::Domain(
            "closed form needs the geometric boundary".into(),
        ));
    };
    let q = params.q();
    let alpha = params.alpha();
    let poch = q_shifted_factorial(bp.rho2 * delta, -q.powf(-alpha), n);
    let front = q.powf(-(n as f64) * m as f64 * alpha / 2.0) * delta.powi(m as i32);
    Ok(poch * front / bp.rho1.powu(n))
}

/// Max residual of the simplified recurrence
/// `ρ₁ q^{mα/2} g_{n+1,m} + (−1)^n ρ₂ q^{−nα/2} g_{n,m+1} = g_{n,m}`
/// over the interior cells of a `D×D` coefficient matrix.
pub fn recurrence_residual_g(g: &CMatrix, bp: &BipartiteParams, params: &DeformationParams) -> f64 {
    let q = params.q();
    let alpha = params.alpha();
    let d = g.rows();
    let mut worst = 0.0f64;
    for n in 0..d - 1 {
        for m in 0..d - 1 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let lhs = bp.rho1 * q.powf(m as f64 * alpha / 2.0) * g[(n + 1, m)]
                + bp.rho2 * (sign * q.powf(-(n as f64) * alpha / 2.0)) * g[(n, m + 1)];
            worst = worst.max((lhs - g[(n, m)]).norm());
        }
    }
    worst
}

/// Max residual of the full coefficient recurrence
/// `c_{n+1,m}√((n+1)) q^{(mα+β)/2} + c_{n,m+1}(−1)^{n+β/α}√((m+1)) q^{−(nα+β)/2}
/// = ζ c_{n,m}`.
pub fn recurrence_residual_c(c: &CMatrix, zeta: Complex64, params: &DeformationParams) -> f64 {
    let q = params.q();
    let alpha = params.alpha();
    let beta = params.beta();
    let d = c.rows();
    let mut worst = 0.0f64;
    for n in 0..d - 1 {
        for m in 0..d - 1 {
            let phase = Complex64::new(
                0.0,
                core::f64::consts::PI * (n as f64 + params.beta_ratio()),
            )
            .exp();
            let lhs = c[(n + 1, m)]
                * (box_number(n as i64 + 1, params).sqrt()
                    * q.powf((m as f64 * alpha + beta) / 2.0))
                + c[(n, m + 1)]
                    * phase
                    * (box_number(m as i64 + 1, params).sqrt()
                        * q.powf(-(n as f64 * alpha + beta) / 2.0));
            worst = worst.max((lhs - zeta * c[(n, m)]).norm());
        }
    }
    worst
}

/// A truncated bipartite coherent state with its coefficient matrix.
#[derive(Debug, Clone)]
pub struct BipartiteState {
    pub coefficients: CMatrix,
    pub zeta: Complex64,
    pub normalized: bool,
}

/// Assembles the state `c_{n,m} = ζ₁ⁿ ζ₂ᵐ g_{n,m}/√((n)!(m)!)` on a `D×D`
/// truncation (geometric boundary, closed-form coefficients), normalized.
pub fn assemble_state(
    bp: &BipartiteParams,
    dim: usize,
    params: &DeformationParams,
) -> Result<BipartiteState> {
    let mut c = CMatrix::zeros(dim, dim);
    let mut norm2 = 0.0f64;
    for n in 0..dim {
        for m in 0..dim {
            let g = g_geometric(n as u32, m as u32, bp, params)?;
            let amp = bp.zeta1.powu(n as u32) * bp.zeta2.powu(m as u32) * g
                / (box_factorial(n as u32, params) * box_factorial(m as u32, params)).sqrt();
            if !(amp.re.is_finite() && amp.im.is_finite()) {
                return Err(Error::Domain(alloc::format!(
                    "coefficient overflow at (n, m) = ({n}, {m})"
                )));
            }
            c[(n, m)] = amp;
            norm2 += amp.norm_sqr();
        }
    }
    let scale = Complex64::new(1.0 / norm2.sqrt(), 0.0);
    Ok(BipartiteState {
        coefficients: c.scale(scale),
        zeta: bp.zeta,
        normalized: true,
    })
}

/// `‖(Δ(a) − ζ)|ẑ⟩‖` using the legwise Kronecker coproduct matrix.
///
/// `Δ(a)` is assembled from lowering and diagonal factors only, so the
/// truncated operator is exact on the whole space (margin zero) and the
/// residual is carried entirely by the state's dropped tail: it shrinks
/// with the truncation dimension.
pub fn eigen_residual(state: &BipartiteState, params: &DeformationParams) -> Result<f64> {
    let d = state.coefficients.rows();
    let fock = FockSpace::new(d, *params)?;
    let da = fock.tensor_coproduct_matrix(UGen::A);
    let mut v = alloc::vec![Complex64::new(0.0, 0.0); d * d];
    for n in 0..d {
        for m in 0..d {
            v[n * d + m] = state.coefficients[(n, m)];
        }
    }
    let av = da.matvec(&v);
    let sum: f64 = av
        .iter()
        .zip(&v)
        .map(|(a, b)| (a - state.zeta * b).norm_sqr())
        .sum();
    Ok(sum.sqrt())
}

/// Both closed evaluations of the squared norm `𝒩` of the unnormalized
/// state: the plain double sum over `|c_{n,m}|²` and the single sum with
/// the inner deformed exponential `exp_{α,β}(δ²|ζ₂|² q^{−nα})`.
pub fn norm_check(
    bp: &BipartiteParams,
    dim: usize,
    params: &DeformationParams,
    budget: &ScalarSeriesBudget,
) -> Result<(f64, f64)> {
    let Boundary::Geometric(delta) = bp.boundary else {
        return Err(Error::Domain(
            "norm check needs the geometric boundary".into(),
        ));
    };
    let q = params.q();
    let alpha = params.alpha();
    let beta = params.beta();
    // double sum over the truncated coefficient matrix
    let mut double_sum = 0.0f64;
    for n in 0..dim {
        for m in 0..dim {
            let g = g_geometric(n as u32, m as u32, bp, params)?;
            let amp = bp.zeta1.powu(n as u32) * bp.zeta2.powu(m as u32) * g
                / (box_factorial(n as u32, params) * box_factorial(m as u32, params)).sqrt();
            double_sum += amp.norm_sqr();
        }
    }
    // single sum: the m-tower is the deformed exponential
    let mut single_sum = 0.0f64;
    let z2 = bp.zeta.norm_sqr();
    let inner_arg = delta * delta * bp.zeta2.norm_sqr();
    let mut small = 0usize;
    for n in 0..budget.max_terms {
        let poch = q_shifted_factorial(bp.rho2 * delta, -q.powf(-alpha), n as u32);
        let inner = crate::special::deformed_exp(
            Complex64::new(inner_arg * q.powf(-(n as f64) * alpha), 0.0),
            params,
            budget,
        )?
        .re;
        let term = q.powf(-(n as f64) * beta) * z2.powi(n as i32) * poch.norm_sqr()
            / box_factorial(n as u32, params)
            * inner;
        single_sum += term;
        if term.abs() < budget.tail_tolerance * single_sum.max(1.0) {
            small += 1;
            if small >= 2 {
                break;
            }
        } else {
            small = 0;
        }
        if n + 1 == budget.max_terms {
            return Err(Error::SeriesDivergence {
                terms: budget.max_terms,
                partial: (single_sum, 0.0),
                last_term: term.abs(),
            });
        }
    }
    Ok((double_sum, single_sum))
}

/// Entanglement entropy of the normalized coefficient matrix:
/// `−Σ λ_i ln λ_i` with `λ_i` the normalized squared singular values.
pub fn schmidt_entropy(state: &BipartiteState) -> f64 {
    let s2 = singular_values_squared(&state.coefficients);
    let total: f64 = s2.iter().sum();
    let mut entropy = 0.0;
    for lambda in s2 {
        let p = lambda / total;
        if p > 1e-300 {
            entropy -= p * p.ln();
        }
    }
    entropy
}
