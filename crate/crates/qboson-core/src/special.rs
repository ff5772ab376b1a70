//! Deformed special functions and combinatorial coefficients.
//!
//! Houses the q-bracket `[X]_q`, the curly bracket `{n}_q` with its
//! factorial, the box numbers `(n)_{α,β}` of the Fock ladder, the σ
//! products entering the dual coproducts, the floor brackets and binomials
//! of the bipartite recurrence, the q-shifted factorial, both deformed
//! exponentials, the product-form coefficients `c_k`, and the pole data of
//! the symmetrized deformed Gamma function.

use alloc::{format, vec::Vec};
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::params::{DeformationParams, ScalarSeriesBudget};

/// `[X]_q = (q^X − q^{−X})/(q − q^{−1})`, odd in `X`.
///
/// Inside the guard radius around `q = 1` the limit value `X` is returned.
pub fn q_number(x: f64, params: &DeformationParams) -> f64 {
    if params.is_classical() {
        return x;
    }
    let p = params.q().powf(x);
    (p - 1.0 / p) / params.q_diff()
}

/// `[X]_q` for complex argument, with the same guarded limit.
pub fn q_number_c(x: Complex64, params: &DeformationParams) -> Complex64 {
    if params.is_classical() {
        return x;
    }
    let p = (x * params.ln_q()).exp();
    (p - 1.0 / p) / params.q_diff()
}

/// `{n}_q = (q^{n/2} − (−1)^n q^{−n/2})/(q^{1/2} + q^{−1/2})`.
pub fn curly_number(n: u32, base: f64) -> f64 {
    let h = base.sqrt();
    let p = h.powi(n as i32);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    (p - sign / p) / (h + 1.0 / h)
}

/// `{n}_q! = Π_{ℓ=1}^{n} {ℓ}_q`, with `{0}_q! = 1`.
pub fn curly_factorial(n: u32, base: f64) -> f64 {
    (1..=n).fold(1.0, |acc, l| acc * curly_number(l, base))
}

/// The box number `(n)_{α,β}` of the Fock ladder,
/// `(q^{α/2} + q^{−α/2})^{−1} ([nα + β − α/2]_q + (−1)^{n+1} [β − α/2]_q)`.
///
/// Negative arguments go through the identity `(−n)_{α,β} = (n)_{−α,β−α}`.
pub fn box_number(n: i64, params: &DeformationParams) -> f64 {
    if n < 0 {
        return box_number(-n, &params.flipped());
    }
    let edge = q_number(params.beta() - params.alpha() / 2.0, params);
    let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
    let main = q_number(
        n as f64 * params.alpha() + params.beta() - params.alpha() / 2.0,
        params,
    );
    (main + sign * edge) / params.u()
}

/// `(n)_{α,β}! = Π_{ℓ=1}^{n} (ℓ)_{α,β}`, with `(0)_{α,β}! = 1`.
pub fn box_factorial(n: u32, params: &DeformationParams) -> f64 {
    (1..=n as i64).fold(1.0, |acc, l| acc * box_number(l, params))
}

/// `σ_1 = 1`; for `m > 1` the product `Π_{k=1}^{m−1} Σ_{ℓ=0}^{k−1} (−1)^ℓ [(k−ℓ)α]_q`.
pub fn sigma(m: u32, params: &DeformationParams) -> f64 {
    let mut acc = 1.0;
    for k in 1..m {
        let mut factor = 0.0;
        for l in 0..k {
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            factor += sign * q_number((k - l) as f64 * params.alpha(), params);
        }
        acc *= factor;
    }
    acc
}

/// Floor bracket `⌊n⌋_q = (1 − (−1)^n q^n)/(1 + q)`.
pub fn floor_bracket(n: u32, base: f64) -> f64 {
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    (1.0 - sign * base.powi(n as i32)) / (1.0 + base)
}

/// `⌊n⌋_q! = Π_{ℓ=1}^{n} ⌊ℓ⌋_q`.
pub fn floor_bracket_factorial(n: u32, base: f64) -> f64 {
    (1..=n).fold(1.0, |acc, l| acc * floor_bracket(l, base))
}

/// Floor binomial `⌊n⌋_q!/(⌊k⌋_q! ⌊n−k⌋_q!)`; errors if `k > n`.
pub fn floor_binomial(n: u32, k: u32, base: f64) -> Result<f64> {
    if k > n {
        return Err(Error::Domain(format!(
            "floor binomial needs k <= n, got k={k}, n={n}"
        )));
    }
    Ok(floor_bracket_factorial(n, base)
        / (floor_bracket_factorial(k, base) * floor_bracket_factorial(n - k, base)))
}

/// q-shifted factorial `(a; q)_n = Π_{ℓ=1}^{n} (1 − a q^{ℓ−1})`; empty product is 1.
pub fn q_shifted_factorial(a: Complex64, base: f64, n: u32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut p = 1.0;
    for _ in 0..n {
        acc *= Complex64::new(1.0, 0.0) - a * p;
        p *= base;
    }
    acc
}

fn sum_series(
    budget: &ScalarSeriesBudget,
    mut term_at: impl FnMut(usize) -> Complex64,
) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut small_streak = 0usize;
    let mut last = 0.0;
    for n in 0..budget.max_terms {
        let t = term_at(n);
        sum += t;
        last = t.norm();
        if last < budget.tail_tolerance {
            small_streak += 1;
            if small_streak >= 2 {
                return Ok(sum);
            }
        } else {
            small_streak = 0;
        }
    }
    Err(Error::SeriesDivergence {
        terms: budget.max_terms,
        partial: (sum.re, sum.im),
        last_term: last,
    })
}

/// Deformed exponential `exp_{α,β}(x) = Σ x^n/(n)_{α,β}!`.
pub fn deformed_exp(
    x: Complex64,
    params: &DeformationParams,
    budget: &ScalarSeriesBudget,
) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut n = 0i64;
    sum_series(budget, move |_| {
        let out = term;
        n += 1;
        term = term * x / box_number(n, params);
        out
    })
}

/// Real-argument deformed exponential; real by construction.
pub fn deformed_exp_real(
    x: f64,
    params: &DeformationParams,
    budget: &ScalarSeriesBudget,
) -> Result<f64> {
    deformed_exp(Complex64::new(x, 0.0), params, budget).map(|v| v.re)
}

/// `ℰxp_q(x) = Σ x^n/{n}_q!`, the curly-denominator exponential of the
/// closed-form T matrix.
pub fn cal_exp(x: Complex64, base: f64, budget: &ScalarSeriesBudget) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut n = 0u32;
    sum_series(budget, move |_| {
        let out = term;
        n += 1;
        term = term * x / curly_number(n, base);
        out
    })
}

/// Coefficients `c_1..c_K` of the product form `exp_{α,β}(x) = exp(Σ c_k x^k)`,
/// from the triangular recurrence
/// `c_k = 1/(k)! − (1/k) Σ_{ℓ=1}^{k−1} ℓ c_ℓ/(k−ℓ)!`.
pub fn ck_coefficients(k_max: usize, params: &DeformationParams) -> Vec<f64> {
    // reciprocal factorial table; overflow to +inf simply turns into 0 here
    let mut inv_fact = Vec::with_capacity(k_max + 1);
    inv_fact.push(1.0f64);
    let mut fact = 1.0f64;
    for n in 1..=k_max {
        fact *= box_number(n as i64, params);
        inv_fact.push(if fact.is_finite() { 1.0 / fact } else { 0.0 });
    }
    let mut c: Vec<f64> = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let mut v = inv_fact[k];
        for (l, cl) in c.iter().enumerate().take(k - 1) {
            let l = l + 1;
            v -= (l as f64) * cl * inv_fact[k - l] / k as f64;
        }
        c.push(v);
    }
    c
}

/// Which analytic continuation `(−1)^n → exp(±iπz)` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContinuationSign {
    Plus,
    Minus,
}

/// Analytic continuation of the box number,
/// `(z)^{(±)}_{α,β} = (q^{α/2}+q^{−α/2})^{−1}([zα + β − α/2]_q − e^{±iπz} [β − α/2]_q)`.
pub fn box_number_analytic(
    z: Complex64,
    sign: ContinuationSign,
    params: &DeformationParams,
) -> Complex64 {
    let s = match sign {
        ContinuationSign::Plus => 1.0,
        ContinuationSign::Minus => -1.0,
    };
    let main = q_number_c(
        z * params.alpha() + params.beta() - params.alpha() / 2.0,
        params,
    );
    let edge = q_number(params.beta() - params.alpha() / 2.0, params);
    let phase = (Complex64::new(0.0, s * PI) * z).exp();
    (main - phase * edge) / params.u()
}

/// The pole weight `𝒫 = A/(A² + B²)` of the symmetrized deformed Gamma,
/// with `A = α [[β−α/2]] ln q/(q − q^{−1})` and `B = ϖ [β−α/2]_q`.
pub fn pole_weight(params: &DeformationParams) -> f64 {
    let (a, b) = pole_components(params);
    a / (a * a + b * b)
}

fn pole_components(params: &DeformationParams) -> (f64, f64) {
    let x = params.beta() - params.alpha() / 2.0;
    let ratio = if params.is_classical() {
        0.5
    } else {
        params.ln_q() / params.q_diff()
    };
    let a = params.alpha() * params.double_bracket(x) * ratio;
    let b = params.varpi() * q_number(x, params);
    (a, b)
}

/// The two continuations `((ε)^{(+)}, (ε)^{(−)})` at a small real ε, for
/// comparison against the first-order form `ε (A ∓ i ϖ [β−α/2]_q)`.
pub fn epsilon_limit_check(eps: f64, params: &DeformationParams) -> (Complex64, Complex64) {
    let z = Complex64::new(eps, 0.0);
    (
        box_number_analytic(z, ContinuationSign::Plus, params),
        box_number_analytic(z, ContinuationSign::Minus, params),
    )
}

/// Residue data of the symmetrized deformed Gamma at `z = −n`:
/// returns `𝒫/(n)_{−α,β−α}!`, computed through the iterated functional
/// relation (never the infinite product).
pub fn gamma_residue(n: u32, params: &DeformationParams) -> f64 {
    pole_weight(params) / box_factorial(n, &params.flipped())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(q: f64, alpha: f64, beta: f64) -> DeformationParams {
        DeformationParams::new(q, alpha, beta).unwrap()
    }

    fn classical() -> DeformationParams {
        params(1.0 + 1e-8, 2.0, 1.0)
    }

    #[test]
    fn q_number_basics() {
        let p = params(3.0, 2.0, 1.0);
        assert_eq!(q_number(0.0, &p), 0.0);
        assert_relative_eq!(q_number(1.0, &p), 1.0, max_relative = 1e-15);
        // oddness against direct evaluation
        let direct = (3.0f64.powf(2.0) - 3.0f64.powf(-2.0)) / (3.0 - 1.0 / 3.0);
        assert_relative_eq!(q_number(-2.0, &p), -direct, max_relative = 1e-14);
    }

    #[test]
    fn q_number_base_inversion_invariance() {
        let p = params(1.7, 2.0, 1.0);
        let pinv = params(1.0 / 1.7, 2.0, 1.0);
        for i in 0..20 {
            let x = -3.0 + 0.37 * i as f64;
            assert_relative_eq!(q_number(x, &p), q_number(x, &pinv), max_relative = 1e-12);
            assert_relative_eq!(q_number(-x, &p), -q_number(x, &p), max_relative = 1e-12);
        }
    }

    #[test]
    fn q_number_guarded_limit() {
        let p = classical();
        assert_eq!(q_number(7.3, &p), 7.3);
    }

    #[test]
    fn curly_values() {
        assert_eq!(curly_factorial(0, 2.0), 1.0);
        assert_relative_eq!(curly_number(1, 5.7), 1.0, max_relative = 1e-15);
        // {2}_4 = (4 - 1/4)/(2 + 1/2)
        assert_relative_eq!(curly_number(2, 4.0), 1.5, max_relative = 1e-15);
    }

    #[test]
    fn box_number_values() {
        let p = params(1.3, 2.0, 1.0);
        assert_relative_eq!(box_number(0, &p), 0.0, epsilon = 1e-15);
        assert_relative_eq!(box_number(1, &p), q_number(1.0, &p), max_relative = 1e-13);
    }

    #[test]
    fn box_number_trace_identity() {
        // (n) + (n+1) = [αn + β]_q  for several parameter sets
        for &(q, a, b) in &[(1.3, 2.0, 1.0), (2.0, 1.5, 0.7), (0.8, -1.0, 2.0)] {
            let p = params(q, a, b);
            for n in 0..=8 {
                let lhs = box_number(n, &p) + box_number(n + 1, &p);
                let rhs = q_number(n as f64 * a + b, &p);
                assert_relative_eq!(lhs, rhs, max_relative = 1e-12, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn box_number_negative_identity() {
        let p = params(1.4, 2.0, 1.0);
        let f = p.flipped();
        for n in 0..=16 {
            assert_relative_eq!(
                box_number(-n, &p),
                box_number(n, &f),
                max_relative = 1e-13,
                epsilon = 1e-13
            );
        }
    }

    #[test]
    fn box_factorial_classical_limit() {
        let p = classical();
        let mut fact = 1.0;
        for n in 1..=8u32 {
            fact *= n as f64;
            assert_relative_eq!(box_factorial(n, &p), fact, max_relative = 1e-6);
        }
    }

    #[test]
    fn curly_number_alternates_at_base_one() {
        // the curly bracket carries the super grading: {n} -> 0 for even n,
        // 1 for odd n as the base goes to 1 (it does not reduce to n)
        for n in 0..8u32 {
            let v = curly_number(n, 1.0 + 1e-9);
            let expect = (n % 2) as f64;
            assert_relative_eq!(v, expect, epsilon = 1e-8);
        }
    }

    #[test]
    fn sigma_values() {
        let p = params(1.3, 2.0, 1.0);
        assert_eq!(sigma(1, &p), 1.0);
        assert_relative_eq!(sigma(2, &p), q_number(2.0, &p), max_relative = 1e-14);
        // recursion σ_{m+1} = σ_m Σ_{ℓ=0}^{m−1} (−1)^ℓ [(m−ℓ)α]_q
        for m in 1..=12u32 {
            let mut step = 0.0;
            for l in 0..m {
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                step += sign * q_number((m - l) as f64 * p.alpha(), &p);
            }
            assert_relative_eq!(sigma(m + 1, &p), sigma(m, &p) * step, max_relative = 1e-12);
        }
    }

    #[test]
    fn sigma_classical_guard() {
        // σ_3 = [2]·([4]−[2]) -> 4 at q -> 1, α = 2
        let p = classical();
        assert_relative_eq!(sigma(3, &p), 4.0, max_relative = 1e-6);
    }

    #[test]
    fn floor_brackets() {
        assert_eq!(floor_bracket(0, 2.0), 0.0);
        assert_relative_eq!(floor_bracket(1, 3.7), 1.0, max_relative = 1e-15);
        assert_relative_eq!(floor_bracket(2, 2.0), -1.0, max_relative = 1e-15);
        assert!(floor_binomial(2, 3, 2.0).is_err());
        assert_relative_eq!(
            floor_binomial(2, 1, 2.0).unwrap(),
            1.0 - 2.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn shifted_factorial() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(q_shifted_factorial(one * 0.3, 0.5, 0), one);
        assert_eq!(q_shifted_factorial(one, 0.7, 3).norm(), 0.0);
        assert_relative_eq!(
            q_shifted_factorial(one * 0.5, 0.5, 2).re,
            0.375,
            max_relative = 1e-15
        );
    }

    #[test]
    fn deformed_exp_values() {
        let b = ScalarSeriesBudget::default();
        let p = params(1.3, 2.0, 1.0);
        assert_eq!(
            deformed_exp(Complex64::new(0.0, 0.0), &p, &b).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        // classical limit reproduces exp
        let c = classical();
        assert_relative_eq!(
            deformed_exp_real(1.0, &c, &b).unwrap(),
            1.0f64.exp(),
            max_relative = 1e-6
        );
        // positivity at a negative argument (checked against the product form)
        let v = deformed_exp_real(-3.0, &p, &b).unwrap();
        assert!(v > 0.0, "exp_(2,1)(-3) = {v} should be positive");
    }

    #[test]
    fn deformed_exp_matches_product_form() {
        // the product form exp(Σ c_k x^k) agrees with the series inside the
        // c_k radius of convergence (set by the nearest complex zero of the
        // series; ~3.5 at q = 1.3, ~4.9 at q = 1.2, beyond 5 at q = 1.05)
        let b = ScalarSeriesBudget::default();
        for (q, half_range, terms) in [(1.05, 5.0, 400), (1.2, 3.5, 400), (1.3, 2.5, 400)] {
            let p = params(q, 2.0, 1.0);
            let ck = ck_coefficients(terms, &p);
            for i in 0..=20 {
                let x = -half_range + half_range * 0.1 * i as f64;
                let series = deformed_exp_real(x, &p, &b).unwrap();
                let exponent: f64 = ck
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * x.powi(k as i32 + 1))
                    .sum();
                assert_relative_eq!(series, exponent.exp(), max_relative = 1e-9);
                assert!(series > 0.0);
            }
        }
    }

    #[test]
    fn cal_exp_against_hand_computed_brackets() {
        // {1}_4 = 1, {2}_4 = 1.5, {3}_4 = 3.25, {4}_4 = 6.375, {5}_4 = 12.8125,
        // {6}_4 = 25.59375, {7}_4 = 51.203125, {8}_4 = 102.3984375
        let brackets = [
            1.0,
            1.5,
            3.25,
            6.375,
            12.8125,
            25.59375,
            51.203125,
            102.3984375,
        ];
        let b = ScalarSeriesBudget::default();
        for &x in &[0.3f64, 0.7, -0.5] {
            let mut expect = 1.0;
            let mut term = 1.0;
            for br in brackets {
                term *= x / br;
                expect += term;
            }
            // remaining tail is below 1e-10 for |x| <= 0.7
            let v = cal_exp(Complex64::new(x, 0.0), 4.0, &b).unwrap();
            assert_relative_eq!(v.re, expect, max_relative = 1e-9);
            assert!(v.im.abs() < 1e-15);
        }
    }

    #[test]
    fn series_budget_errors() {
        let b = ScalarSeriesBudget::new(10, 1e-14).unwrap();
        let p = params(1.3, 2.0, 1.0);
        let err = deformed_exp(Complex64::new(30.0, 0.0), &p, &b).unwrap_err();
        match err {
            Error::SeriesDivergence { terms, .. } => assert_eq!(terms, 10),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn ck_against_closed_forms() {
        for &(q, a, bb) in &[(1.3, 2.0, 1.0), (1.7, 1.2, 0.8)] {
            let p = params(q, a, bb);
            let c = ck_coefficients(3, &p);
            let qb = |x: f64| q_number(x, &p);
            let db = |x: f64| p.double_bracket(x);
            let c1 = 1.0 / qb(bb);
            let c2 = 1.0 / (qb(a) * qb(bb) * db(bb + a / 2.0)) - 1.0 / (2.0 * qb(bb).powi(2));
            let c3 = 1.0 / (qb(a) * qb(bb) * qb(a + bb) * db(1.5 * a) * db(bb + a / 2.0))
                - 1.0 / (qb(a) * qb(bb).powi(2) * db(bb + a / 2.0))
                + 1.0 / (3.0 * qb(bb).powi(3));
            assert_relative_eq!(c[0], c1, max_relative = 1e-13);
            assert_relative_eq!(c[1], c2, max_relative = 1e-12, epsilon = 1e-15);
            assert_relative_eq!(c[2], c3, max_relative = 1e-12, epsilon = 1e-15);
        }
    }

    #[test]
    fn ck_classical_limit() {
        let p = classical();
        let c = ck_coefficients(3, &p);
        assert_relative_eq!(c[0], 1.0, max_relative = 1e-6);
        assert!(c[1].abs() < 1e-6);
        assert!(c[2].abs() < 1e-6);
    }

    #[test]
    fn analytic_continuation_at_integers() {
        let p = params(1.3, 2.0, 1.0);
        for n in 0..6 {
            let z = Complex64::new(n as f64, 0.0);
            for sign in [ContinuationSign::Plus, ContinuationSign::Minus] {
                let v = box_number_analytic(z, sign, &p);
                assert_relative_eq!(
                    v.re,
                    box_number(n, &p),
                    max_relative = 1e-12,
                    epsilon = 1e-12
                );
                assert!(v.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn epsilon_limit_matches_pole_weight() {
        let p = params(1.3, 2.0, 1.0);
        let eps = 1e-6;
        let (plus, minus) = epsilon_limit_check(eps, &p);
        let avg = 0.5 * (eps / plus + eps / minus);
        assert_relative_eq!(avg.re, pole_weight(&p), max_relative = 1e-4);
        assert!(avg.im.abs() < 1e-4);
        // first-order form ε(A ∓ iB)
        let (a, b) = super::pole_components(&p);
        assert_relative_eq!(plus.re, eps * a, max_relative = 1e-4);
        assert_relative_eq!(plus.im, -eps * b, max_relative = 1e-4);
        assert_relative_eq!(minus.im, eps * b, max_relative = 1e-4);
    }

    #[test]
    fn pole_weight_at_half_shift() {
        // β = α/2 kills [β−α/2]_q, so 𝒫 = (α [[0]] ln q/(q−q^{−1}))^{−1}
        let p = params(1.3, 2.0, 1.0);
        let a = p.alpha() * p.double_bracket(0.0) * p.ln_q() / p.q_diff();
        assert_relative_eq!(pole_weight(&p), 1.0 / a, max_relative = 1e-13);
    }

    #[test]
    fn gamma_residues() {
        let p = params(1.3, 2.0, 1.0);
        assert_relative_eq!(gamma_residue(0, &p), pole_weight(&p), max_relative = 1e-14);
        assert_relative_eq!(
            gamma_residue(1, &p),
            pole_weight(&p) / box_number(1, &p.flipped()),
            max_relative = 1e-13
        );
        // classical residues of Gamma: (−1)^n/n!
        let c = classical();
        let mut fact = 1.0;
        for n in 0..=6u32 {
            if n > 0 {
                fact *= n as f64;
            }
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_relative_eq!(gamma_residue(n, &c), sign / fact, max_relative = 1e-5);
        }
    }
}
