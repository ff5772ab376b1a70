//! The pairing between the function algebra and the boson algebra, and the
//! universal T matrix capping it.
//!
//! The pairing is computed structurally: both sides are expanded over their
//! ordered bases (`e^{kℓm}` and `E_{kℓm}`) and contracted index by index,
//! never through limits of representations. The T matrix exists in three
//! forms: the defining series `Σ e^{kℓm} ⊗ E_{kℓm}`, the closed ordered
//! product of deformed exponentials, and numeric representations on
//! truncated oscillator ⊗ Fock spaces.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::dualalg::{
    self, antipode_f, coproduct_f_element, dual_basis_e, oscillator_z_eigenvalue, FElement,
};
use crate::error::{Error, Result};
use crate::exppoly::ExpPoly;
use crate::fockrep::FockSpace;
use crate::matrix::CMatrix;
use crate::params::DeformationParams;
use crate::special::curly_factorial;
use crate::ualg::UElement;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Per-index bounds for dual-basis expansions in the pairing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairingWindow {
    pub max_k: u32,
    pub max_l: u32,
    pub max_m: u32,
}

impl PairingWindow {
    pub fn new(max_k: u32, max_l: u32, max_m: u32) -> Result<Self> {
        if max_k > 8 || max_l > 8 || max_m > 8 {
            return Err(Error::InvalidParams(alloc::format!(
                "pairing window bounds must be at most 8, got ({max_k}, {max_l}, {max_m})"
            )));
        }
        Ok(Self {
            max_k,
            max_l,
            max_m,
        })
    }
}

impl Default for PairingWindow {
    fn default() -> Self {
        Self {
            max_k: 6,
            max_l: 6,
            max_m: 6,
        }
    }
}

/// `⟨f, u⟩`: contraction of the dual-basis coefficients of `f` against the
/// ordered-basis coefficients of `u` inside the window.
///
/// When `f` carries `z`-exponentials its `ℓ`-support is infinite; the two
/// expansion orders just past the window are then checked, and a
/// contribution above 1e−12 reports the window as insufficient.
pub fn pair(
    f: &FElement,
    u: &UElement,
    window: &PairingWindow,
    params: &DeformationParams,
) -> Result<Complex64> {
    let probe_l = window.max_l + 2;
    let tf = f.dual_coefficients(params, probe_l);
    let tu = u.taylor_table(probe_l);
    let mut sum = Complex64::new(0.0, 0.0);
    for (idx, cf) in &tf {
        let cu = tu.get(idx).copied().unwrap_or_default();
        let contribution = cf * cu;
        if idx[0] > window.max_k || idx[2] > window.max_m || idx[1] > window.max_l {
            // the (k, m) support of an element is finite and exact; the
            // ℓ-support may be an infinite expansion tail
            if contribution.norm() > 1e-12 {
                return Err(Error::WindowInsufficient {
                    index: (idx[0], idx[1], idx[2]),
                    magnitude: contribution.norm(),
                });
            }
            continue;
        }
        sum += contribution;
    }
    Ok(sum)
}

/// Pairs `a ⊗ b` against a coproduct: `Σ ⟨a, u₁⟩⟨b, u₂⟩`.
pub fn pair_tensor_u(
    a: &FElement,
    b: &FElement,
    du: &crate::ualg::UTensorElement,
    window: &PairingWindow,
    params: &DeformationParams,
) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for (l, r) in du.pairs() {
        sum += pair(a, l, window, params)? * pair(b, r, window, params)?;
    }
    Ok(sum)
}

/// Pairs `Δ(a)` against `u ⊗ v`: `Σ ⟨a₁, u⟩⟨a₂, v⟩`.
pub fn pair_f_tensor(
    da: &dualalg::FTensorElement,
    u: &UElement,
    v: &UElement,
    window: &PairingWindow,
    params: &DeformationParams,
) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for (l, r) in da.pairs() {
        sum += pair(l, u, window, params)? * pair(r, v, window, params)?;
    }
    Ok(sum)
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn random_coeff(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(2.0 * uniform(rng) - 1.0, 2.0 * uniform(rng) - 1.0)
}

/// A random polynomial element of the function algebra with small support.
pub fn sample_f(rng: &mut ChaCha8Rng) -> FElement {
    let mut f = FElement::zero();
    let terms = 1 + (rng.next_u64() % 3) as usize;
    for _ in 0..terms {
        let k = (rng.next_u64() % 3) as u32;
        let m = (rng.next_u64() % 3) as u32;
        let j = (rng.next_u64() % 3) as u32;
        f = f.add(&FElement::from_term(
            k,
            m,
            ExpPoly::monomial(j, random_coeff(rng)),
        ));
    }
    f
}

/// A random polynomial element of the boson algebra with small support.
pub fn sample_u(rng: &mut ChaCha8Rng) -> UElement {
    let mut u = UElement::zero();
    let terms = 1 + (rng.next_u64() % 3) as usize;
    for _ in 0..terms {
        let k = (rng.next_u64() % 3) as u32;
        let m = (rng.next_u64() % 3) as u32;
        let j = (rng.next_u64() % 3) as u32;
        u = u.add(&UElement::from_term(
            k,
            m,
            ExpPoly::monomial(j, random_coeff(rng)),
        ));
    }
    u
}

/// Residuals of the five duality axioms on randomized bounded-degree
/// samples. Returns `(axiom name, worst residual)` pairs.
pub fn duality_axiom_check(
    samples: usize,
    seed: u64,
    window: &PairingWindow,
    params: &DeformationParams,
) -> Result<Vec<(&'static str, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = 6;
    let mut worst = [0.0f64; 5];
    for _ in 0..samples {
        let a = sample_f(&mut rng);
        let b = sample_f(&mut rng);
        let u = sample_u(&mut rng);
        let v = sample_u(&mut rng);

        // ⟨ab, u⟩ = ⟨a⊗b, Δ(u)⟩
        let lhs = pair(&a.mul(&b, params)?, &u, window, params)?;
        let rhs = pair_tensor_u(&a, &b, &u.coproduct(params)?, window, params)?;
        worst[0] = worst[0].max((lhs - rhs).norm());

        // ⟨a, uv⟩ = ⟨Δ(a), u⊗v⟩
        let lhs = pair(&a, &u.mul(&v, params)?, window, params)?;
        let da = coproduct_f_element(&a, order, params)?;
        let rhs = pair_f_tensor(&da, &u, &v, window, params)?;
        worst[1] = worst[1].max((lhs - rhs).norm());

        // ⟨a, 1⟩ = ε(a)
        let lhs = pair(&a, &UElement::identity(), window, params)?;
        worst[2] = worst[2].max((lhs - a.counit()).norm());

        // ⟨1, u⟩ = ε(u)
        let lhs = pair(&FElement::one(), &u, window, params)?;
        worst[3] = worst[3].max((lhs - u.counit()).norm());

        // ⟨a, S(u)⟩ = ⟨S(a), u⟩
        let lhs = pair(&a, &u.antipode(params)?, window, params)?;
        let rhs = pair(&antipode_f(&a, order, params)?, &u, window, params)?;
        worst[4] = worst[4].max((lhs - rhs).norm());
    }
    Ok(alloc::vec![
        ("product-coproduct", worst[0]),
        ("coproduct-product", worst[1]),
        ("counit-f", worst[2]),
        ("counit-u", worst[3]),
        ("antipode", worst[4]),
    ])
}

/// A truncated expansion of the universal T matrix as a sum of
/// `FElement ⊗ UElement` pairs.
#[derive(Debug, Clone)]
pub struct TMatrixSeries {
    pairs: Vec<(FElement, UElement)>,
    degree: u32,
}

impl TMatrixSeries {
    pub fn pairs(&self) -> &[(FElement, UElement)] {
        &self.pairs
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// The defining series `Σ_{k+ℓ+m ≤ degree} e^{kℓm} ⊗ E_{kℓm}`.
    pub fn series(degree: u32, params: &DeformationParams) -> Self {
        let mut pairs = Vec::new();
        for k in 0..=degree {
            for l in 0..=degree - k {
                for m in 0..=degree - k - l {
                    pairs.push((dual_basis_e(k, l, m, params), UElement::basis_e(k, l, m)));
                }
            }
        }
        Self { pairs, degree }
    }

    /// The closed ordered product expanded through total degree `degree`:
    /// the `(k, L, m)` term is
    /// `x^k z^L y^m ⊗ a†^k Ñ^L e^{τ_{k,m} Ñ} a^m / ({k}_{q^α}! L! {m}_{q^α}!)`
    /// with `τ_{k,m} = −(α/2)(k−m) ln q − imπ`: the exponential legs are
    /// collected per the ordering marks, ladder factors and `Ñ`-functions
    /// reordered without commutator corrections.
    pub fn closed(degree: u32, params: &DeformationParams) -> Self {
        let qa = params.q_alpha();
        let mut pairs = Vec::new();
        for k in 0..=degree {
            for big_l in 0..=degree - k {
                for m in 0..=degree - k - big_l {
                    let tau = tau_exponent(k, m, params);
                    let mut l_fact = 1.0;
                    for j in 1..=big_l {
                        l_fact *= j as f64;
                    }
                    let norm = curly_factorial(k, qa) * l_fact * curly_factorial(m, qa);
                    let f = FElement::from_term(k, m, ExpPoly::monomial(big_l, one() / norm));
                    let u = UElement::from_term(
                        k,
                        m,
                        ExpPoly::monomial(big_l, one())
                            .mul(&ExpPoly::exp_rate(tau))
                            .expect("small powers"),
                    );
                    pairs.push((f, u));
                }
            }
        }
        Self { pairs, degree }
    }

    /// Coefficient table over `e^{kℓm} ⊗ E_{pqr}` through `max_l` in both
    /// expansion orders.
    pub fn table(
        &self,
        max_l: u32,
        params: &DeformationParams,
    ) -> BTreeMap<([u32; 3], [u32; 3]), Complex64> {
        let mut out = BTreeMap::new();
        for (f, u) in &self.pairs {
            let tf = f.dual_coefficients(params, max_l);
            let tu = u.taylor_table(max_l);
            for (i, cf) in &tf {
                for (j, cu) in &tu {
                    let v: &mut Complex64 = out.entry((*i, *j)).or_default();
                    *v += cf * cu;
                }
            }
        }
        out
    }
}

/// The collected `Ñ`-exponent of the closed-form term at ladder powers
/// `(k, m)`: `τ = −(α/2)(k−m) ln q − imπ`.
fn tau_exponent(k: u32, m: u32, params: &DeformationParams) -> Complex64 {
    Complex64::new(
        -params.alpha() / 2.0 * (k as f64 - m as f64) * params.ln_q(),
        -(m as f64) * core::f64::consts::PI,
    )
}

/// Max coefficient discrepancy between the closed form and the defining
/// series, over all index pairs with both total degrees ≤ `degree`.
pub fn tmatrix_compare(degree: u32, params: &DeformationParams) -> f64 {
    let series = TMatrixSeries::series(degree, params);
    let closed = TMatrixSeries::closed(degree, params);
    let ts = series.table(degree, params);
    let tc = closed.table(degree, params);
    let within = |i: &[u32; 3]| i[0] + i[1] + i[2] <= degree;
    let mut worst = 0.0f64;
    let mut keys: Vec<([u32; 3], [u32; 3])> = ts.keys().copied().collect();
    keys.extend(tc.keys().copied());
    for key in keys {
        let (i, j) = key;
        if !(within(&i) && within(&j)) {
            continue;
        }
        let a = ts.get(&key).copied().unwrap_or_default();
        let b = tc.get(&key).copied().unwrap_or_default();
        worst = worst.max((a - b).norm());
    }
    worst
}

/// The T matrix evaluated with `(x, y, z)` in the two-mode oscillator
/// representation and the boson generators on the Fock module, with the
/// `z ⊗ Ñ` tower summed exactly (both factors are diagonal). The `(x, y)`
/// and ladder series are capped at `k ≤ degree` and `m ≤ degree`
/// independently (the exact tower covers the rest).
pub fn tmatrix_represented(
    d_fock: usize,
    d_osc: usize,
    degree: u32,
    params: &DeformationParams,
) -> Result<CMatrix> {
    let fock = FockSpace::new(d_fock, *params)?;
    let (x, y, _) = dualalg::oscillator_rep(d_osc, params);
    let adag = fock.rep_adag().matrix;
    let a = fock.rep_a().matrix;
    let qa = params.q_alpha();
    let dim_osc = d_osc * d_osc;
    let dim = dim_osc * d_fock;

    let mut exp_zn = CMatrix::zeros(dim, dim);
    for n1 in 0..d_osc {
        for n2 in 0..d_osc {
            let zeta = oscillator_z_eigenvalue(n1, n2, params);
            for nf in 0..d_fock {
                let ntilde = nf as f64 + params.beta_ratio();
                let idx = (n1 * d_osc + n2) * d_fock + nf;
                exp_zn[(idx, idx)] = (zeta * ntilde).exp();
            }
        }
    }

    let mut out = CMatrix::zeros(dim, dim);
    for k in 0..=degree {
        for m in 0..=degree {
            let tau = tau_exponent(k, m, params);
            let mut diag_tau = CMatrix::zeros(d_fock, d_fock);
            for nf in 0..d_fock {
                let ntilde = nf as f64 + params.beta_ratio();
                diag_tau[(nf, nf)] = (tau * ntilde).exp();
            }
            let norm = curly_factorial(k, qa) * curly_factorial(m, qa);
            let left = x.powi(k).kron(&adag.powi(k));
            let right = y.powi(m).kron(&diag_tau.mul(&a.powi(m)));
            let term = left.mul(&exp_zn).mul(&right).scale(one() / norm);
            out = out.add(&term);
        }
    }
    Ok(out)
}

/// Vector bookkeeping on the three-factor probe space `H₁ ⊗ H₂ ⊗ H_F`
/// used by the group-like check; `H₁`, `H₂` are two-mode oscillator pair
/// spaces of one function-algebra copy each.
struct ProbeSpace {
    d_osc: usize,
    d_fock: usize,
}

impl ProbeSpace {
    fn dim_pair(&self) -> usize {
        self.d_osc * self.d_osc
    }

    fn dim(&self) -> usize {
        self.dim_pair() * self.dim_pair() * self.d_fock
    }

    fn index(&self, p1: usize, p2: usize, nf: usize) -> usize {
        (p1 * self.dim_pair() + p2) * self.d_fock + nf
    }

    /// Applies a matrix acting on one factor (0, 1 = the copies, 2 = Fock).
    fn apply_mode(&self, v: &mut Vec<Complex64>, mode: usize, m: &CMatrix) {
        let dp = self.dim_pair();
        let df = self.d_fock;
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); v.len()];
        match mode {
            0 => {
                for p1 in 0..dp {
                    for q1 in 0..dp {
                        let c = m[(p1, q1)];
                        if c.norm_sqr() == 0.0 {
                            continue;
                        }
                        for p2 in 0..dp {
                            for nf in 0..df {
                                out[self.index(p1, p2, nf)] += c * v[self.index(q1, p2, nf)];
                            }
                        }
                    }
                }
            }
            1 => {
                for p2 in 0..dp {
                    for q2 in 0..dp {
                        let c = m[(p2, q2)];
                        if c.norm_sqr() == 0.0 {
                            continue;
                        }
                        for p1 in 0..dp {
                            for nf in 0..df {
                                out[self.index(p1, p2, nf)] += c * v[self.index(p1, q2, nf)];
                            }
                        }
                    }
                }
            }
            _ => {
                for nf in 0..df {
                    for mf in 0..df {
                        let c = m[(nf, mf)];
                        if c.norm_sqr() == 0.0 {
                            continue;
                        }
                        for p1 in 0..dp {
                            for p2 in 0..dp {
                                out[self.index(p1, p2, nf)] += c * v[self.index(p1, p2, mf)];
                            }
                        }
                    }
                }
            }
        }
        *v = out;
    }

    /// Multiplies elementwise by `exp(ñ_F · ζ_copy)`.
    fn apply_exp_diag(&self, v: &mut [Complex64], copy: usize, zeta: &[Complex64], shift: f64) {
        let dp = self.dim_pair();
        let df = self.d_fock;
        for p1 in 0..dp {
            for p2 in 0..dp {
                let z = if copy == 0 { zeta[p1] } else { zeta[p2] };
                for nf in 0..df {
                    let ntilde = nf as f64 + shift;
                    v[self.index(p1, p2, nf)] *= (z * ntilde).exp();
                }
            }
        }
    }
}

fn delta_z_series_coeff(m: u32, params: &DeformationParams) -> f64 {
    use crate::special::curly_number;
    let qa = params.q_alpha();
    let v = (params.q().powf(params.alpha() / 2.0) + params.q().powf(-params.alpha() / 2.0))
        / params.q_diff();
    2.0 * params.alpha() * params.ln_q() / params.q_diff() / curly_number(m, qa)
        * v.powi(m as i32 - 1)
}

/// Residual of the represented group-like relation: the product of two T
/// copies (function legs on two independent oscillator copies, shared Fock
/// leg) against the T matrix built from the coproducts of the dual
/// generators. Probes are low-occupation basis states chosen with enough
/// Fock headroom that truncation cannot reach the compared components, so
/// the residual is rounding-level when the relation holds.
///
/// The ladder series are rectangular in `(k, m)`: `k ≤ degree`,
/// `m ≤ degree` per T copy and twice that on the coproduct side, matching
/// the self-truncation of the probes.
pub fn grouplike_check(
    d_fock: usize,
    d_osc: usize,
    degree: u32,
    params: &DeformationParams,
) -> Result<f64> {
    let fock = FockSpace::new(d_fock, *params)?;
    let space = ProbeSpace { d_osc, d_fock };
    let qa = params.q_alpha();
    let shift = params.beta_ratio();

    // probe occupation cap per oscillator mode, constrained by Fock headroom
    let mut t = degree.min(d_osc as u32 - 1) as usize;
    while t > 0 && (d_fock as i64) - 1 - 2 * (t as i64) < 0 {
        t -= 1;
    }
    let nf_max = d_fock - 1 - 2 * t;

    let (x, y, _) = dualalg::oscillator_rep(d_osc, params);
    let adag = fock.rep_adag().matrix;
    let a = fock.rep_a().matrix;
    let zeta: Vec<Complex64> = (0..space.dim_pair())
        .map(|p| oscillator_z_eigenvalue(p / d_osc, p % d_osc, params))
        .collect();
    // τ(k, m) = k·μ + m·ν with μ = −(α/2)ln q, ν = (α/2)ln q − iπ
    let mu = Complex64::new(-params.alpha() / 2.0 * params.ln_q(), 0.0);
    let nu = Complex64::new(params.alpha() / 2.0 * params.ln_q(), -core::f64::consts::PI);
    let fock_exp = |rate: Complex64| -> CMatrix {
        let mut d = CMatrix::zeros(d_fock, d_fock);
        for nf in 0..d_fock {
            d[(nf, nf)] = (rate * (nf as f64 + shift)).exp();
        }
        d
    };

    // one copy of T with its function legs on `copy`
    let apply_t = |v: &Vec<Complex64>, copy: usize| -> Vec<Complex64> {
        let mut acc = alloc::vec![Complex64::new(0.0, 0.0); v.len()];
        for k in 0..=degree {
            for m in 0..=degree {
                let mut w = v.clone();
                space.apply_mode(&mut w, copy, &y.powi(m));
                space.apply_mode(
                    &mut w,
                    2,
                    &fock_exp(mu * k as f64 + nu * m as f64).mul(&a.powi(m)),
                );
                space.apply_exp_diag(&mut w, copy, &zeta, shift);
                space.apply_mode(&mut w, copy, &x.powi(k));
                space.apply_mode(&mut w, 2, &adag.powi(k));
                let norm = curly_factorial(k, qa) * curly_factorial(m, qa);
                for (o, wi) in acc.iter_mut().zip(&w) {
                    *o += wi / norm;
                }
            }
        }
        acc
    };

    // coproduct legs as pair lists of small per-copy matrices
    let order = 2 * degree;
    let legs_of = |gen: dualalg::FGen| -> Vec<(CMatrix, CMatrix)> {
        dualalg::coproduct_f(gen, dualalg::CoproductForm::Simplified, order, params)
            .pairs()
            .iter()
            .map(|(l, r)| {
                (
                    dualalg::represent_f(l, d_osc, params),
                    dualalg::represent_f(r, d_osc, params),
                )
            })
            .collect()
    };
    let dx_legs = legs_of(dualalg::FGen::X);
    let dy_legs = legs_of(dualalg::FGen::Y);
    let apply_legs = |v: &Vec<Complex64>, legs: &[(CMatrix, CMatrix)]| -> Vec<Complex64> {
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); v.len()];
        for (l, r) in legs {
            let mut w = v.clone();
            space.apply_mode(&mut w, 0, l);
            space.apply_mode(&mut w, 1, r);
            for (o, wi) in out.iter_mut().zip(&w) {
                *o += wi;
            }
        }
        out
    };

    // exp(Δz ⊗ Ñ) through the solvable factorization: nilpotent factors
    // exp(b_m(ñ) y^m⊗x^m) with Fock-level-dependent strength, then the
    // diagonal part on both copies
    let w_pairs: Vec<(CMatrix, CMatrix)> = (1..=order.max(1))
        .map(|m| {
            (
                dualalg::represent_f(&FElement::from_term(0, m, ExpPoly::one()), d_osc, params),
                dualalg::represent_f(&FElement::from_term(m, 0, ExpPoly::one()), d_osc, params),
            )
        })
        .collect();
    let apply_exp_dz = |v: &mut Vec<Complex64>| {
        let df = space.d_fock;
        for (mi, (wl, wr)) in w_pairs.iter().enumerate() {
            let m = mi as u32 + 1;
            let mu_m = 2.0 * m as f64 * params.alpha() * params.ln_q();
            let a_m = delta_z_series_coeff(m, params);
            let b_at: Vec<Complex64> = (0..df)
                .map(|nf| {
                    let ntilde = nf as f64 + shift;
                    if mu_m.abs() < 1e-14 {
                        Complex64::new(ntilde * a_m, 0.0)
                    } else {
                        (Complex64::new(ntilde * mu_m, 0.0).exp() - 1.0) / mu_m * a_m
                    }
                })
                .collect();
            let mut term = v.clone();
            let mut inv_fact = 1.0;
            let mut j = 0u32;
            while (j + 1) * m <= 2 * (d_osc as u32 - 1) {
                j += 1;
                space.apply_mode(&mut term, 0, wl);
                space.apply_mode(&mut term, 1, wr);
                if term.iter().all(|c| c.norm_sqr() == 0.0) {
                    break;
                }
                inv_fact /= j as f64;
                for (idx, tv) in term.iter().enumerate() {
                    let nf = idx % df;
                    v[idx] += b_at[nf].powu(j) * inv_fact * tv;
                }
            }
        }
        space.apply_exp_diag(v, 0, &zeta, shift);
        space.apply_exp_diag(v, 1, &zeta, shift);
    };

    let apply_rhs = |v: &Vec<Complex64>| -> Vec<Complex64> {
        // G = Σ_m (ΔY^m ⊗ e^{mνÑ} a^m)/{m}!, built incrementally in m
        let mut g = alloc::vec![Complex64::new(0.0, 0.0); v.len()];
        let mut ym = v.clone();
        for m in 0..=order {
            if m > 0 {
                ym = apply_legs(&ym, &dy_legs);
            }
            let mut w = ym.clone();
            space.apply_mode(&mut w, 2, &fock_exp(nu * m as f64).mul(&a.powi(m)));
            let norm = curly_factorial(m, qa);
            for (o, wi) in g.iter_mut().zip(&w) {
                *o += wi / norm;
            }
        }
        // Σ_k (ΔX^k ⊗ A†^k) · expΔZ · (I ⊗ e^{kμÑ}) · G
        let mut acc = alloc::vec![Complex64::new(0.0, 0.0); v.len()];
        for k in 0..=order {
            let mut w = g.clone();
            space.apply_mode(&mut w, 2, &fock_exp(mu * k as f64));
            apply_exp_dz(&mut w);
            for _ in 0..k {
                w = apply_legs(&w, &dx_legs);
            }
            space.apply_mode(&mut w, 2, &adag.powi(k));
            let norm = curly_factorial(k, qa);
            for (o, wi) in acc.iter_mut().zip(&w) {
                *o += wi / norm;
            }
        }
        acc
    };

    let mut worst = 0.0f64;
    for occ in 0..(t + 1).pow(4) {
        let n1 = occ % (t + 1);
        let n2 = occ / (t + 1) % (t + 1);
        let o1 = occ / ((t + 1) * (t + 1)) % (t + 1);
        let o2 = occ / ((t + 1) * (t + 1) * (t + 1));
        if n1 + n2 + o1 + o2 > t + 2 {
            continue; // a spanning subset of probes keeps the cost modest
        }
        for nf in 0..=nf_max {
            let mut v = alloc::vec![Complex64::new(0.0, 0.0); space.dim()];
            v[space.index(n1 * d_osc + n2, o1 * d_osc + o2, nf)] = one();
            let lhs = apply_t(&apply_t(&v, 1), 0);
            let rhs = apply_rhs(&v);
            let scale = lhs.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1.0);
            let diff = lhs
                .iter()
                .zip(&rhs)
                .map(|(l, r)| (l - r).norm())
                .fold(0.0, f64::max);
            worst = worst.max(diff / scale);
        }
    }
    Ok(worst)
}

/// Worst deviation of `⟨e^{kℓm}, E_{k'ℓ'm'}⟩` from `δδδ` over all indices
/// bounded by `bound`.
pub fn pairing_orthonormality(bound: u32, params: &DeformationParams) -> Result<f64> {
    let window = PairingWindow::new(bound.min(8), bound.min(8), bound.min(8))?;
    let mut worst = 0.0f64;
    for k in 0..=bound {
        for l in 0..=bound {
            for m in 0..=bound {
                let e = dual_basis_e(k, l, m, params);
                for k2 in 0..=bound {
                    for l2 in 0..=bound {
                        for m2 in 0..=bound {
                            let u = UElement::basis_e(k2, l2, m2);
                            let got = pair(&e, &u, &window, params)?;
                            let expect = if (k, l, m) == (k2, l2, m2) { 1.0 } else { 0.0 };
                            worst = worst.max((got - Complex64::new(expect, 0.0)).norm());
                        }
                    }
                }
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualalg::FGen;

    fn params() -> DeformationParams {
        DeformationParams::new(1.3, 2.0, 1.0).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn generator_pairings() {
        let p = params();
        let w = PairingWindow::default();
        assert!(
            (pair(&FElement::gen_x(), &UElement::gen_adag(), &w, &p).unwrap() - c(1.0, 0.0)).norm()
                < 1e-14
        );
        assert!(
            (pair(&FElement::gen_z(), &UElement::gen_ntilde(), &w, &p).unwrap() - c(1.0, 0.0))
                .norm()
                < 1e-14
        );
        assert!(
            (pair(&FElement::gen_y(), &UElement::gen_a(), &w, &p).unwrap() - c(1.0, 0.0)).norm()
                < 1e-14
        );
        // index mismatch pairs to zero
        let e111 = dual_basis_e(1, 1, 1, &p);
        assert!(
            pair(&e111, &UElement::basis_e(1, 0, 1), &w, &p)
                .unwrap()
                .norm()
                < 1e-14
        );
    }

    #[test]
    fn orthonormality_small_window() {
        let p = params();
        assert!(pairing_orthonormality(3, &p).unwrap() < 1e-12);
    }

    #[test]
    fn duality_axioms_on_samples() {
        let p = params();
        let w = PairingWindow::default();
        for (name, residual) in duality_axiom_check(10, 42, &w, &p).unwrap() {
            assert!(residual < 1e-9, "{name} residual {residual}");
        }
    }

    #[test]
    fn axiom_example_hand_checked() {
        let p = params();
        let w = PairingWindow::default();
        // a = x, b = z, u = a†Ñ: both routes of ⟨ab, u⟩ agree
        let a = FElement::gen_x();
        let b = FElement::gen_z();
        let u = UElement::from_term(1, 0, ExpPoly::var());
        let lhs = pair(&a.mul(&b, &p).unwrap(), &u, &w, &p).unwrap();
        let rhs = pair_tensor_u(&a, &b, &u.coproduct(&p).unwrap(), &w, &p).unwrap();
        assert!((lhs - rhs).norm() < 1e-12, "lhs {lhs}, rhs {rhs}");
    }

    #[test]
    fn tmatrix_degree_zero_and_one() {
        let p = params();
        let s = TMatrixSeries::series(0, &p).table(0, &p);
        let cl = TMatrixSeries::closed(0, &p).table(0, &p);
        assert_eq!(s.len(), 1);
        assert!((s[&([0, 0, 0], [0, 0, 0])] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((cl[&([0, 0, 0], [0, 0, 0])] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(tmatrix_compare(1, &p) < 1e-12);
    }

    #[test]
    fn tmatrix_closed_matches_series_through_degree_four() {
        let p = params();
        for degree in 1..=4 {
            let d = tmatrix_compare(degree, &p);
            assert!(d < 1e-10, "degree {degree} discrepancy {d}");
        }
    }

    #[test]
    fn represented_vacuum_entry() {
        let p = params();
        let t = tmatrix_represented(4, 3, 2, &p).unwrap();
        // ⟨0,0,0|T|0,0,0⟩ = 1
        assert!((t[(0, 0)] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn grouplike_relation_small() {
        let p = params();
        let r = grouplike_check(5, 3, 2, &p).unwrap();
        assert!(r < 1e-8, "group-like residual {r}");
    }

    #[test]
    fn window_insufficiency_detected() {
        let p = params();
        // an exponential of z has unbounded ℓ-support; pairing it against a
        // high-ℓ basis element through a tiny window must error
        let f = FElement::exp_z(c(1.0, 0.0));
        let u = UElement::basis_e(0, 3, 0);
        let w = PairingWindow::new(2, 2, 2).unwrap();
        match pair(&f, &u, &w, &p) {
            Err(Error::WindowInsufficient { .. }) => {}
            other => panic!("expected window insufficiency, got {other:?}"),
        }
    }

    #[test]
    fn coproduct_brackets_from_duality_data() {
        let p = params();
        let dz =
            crate::dualalg::coproduct_f(FGen::Z, crate::dualalg::CoproductForm::Simplified, 3, &p);
        let dx =
            crate::dualalg::coproduct_f(FGen::X, crate::dualalg::CoproductForm::Simplified, 3, &p);
        let comm = dz
            .mul(&dx, &p)
            .unwrap()
            .sub(&dx.mul(&dz, &p).unwrap())
            .add(&dx.scale(p.c_plus()));
        assert!(comm.table_norm(&p, 3) < 1e-10);
    }
}
