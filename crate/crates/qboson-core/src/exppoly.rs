//! Exponential polynomials `Σ c · t^ℓ · e^{λt}` in one commuting variable.
//!
//! This ring is the coefficient system of both normal-ordering engines: it
//! holds every function of `Ñ` (such as `q^{±αÑ/2}`, `(−1)^{±Ñ} = e^{±iπÑ}`
//! and `[αÑ]_q`) and every function of `z` (such as `exp(z)`). It is closed
//! under multiplication and under the argument shifts `t → t + s` generated
//! by the ladder commutators.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::params::DeformationParams;

/// Exponents closer than this merge into one term. Rates arise from small
/// integer combinations of `α ln q/2` and `iπ`, so collisions are either
/// exact or far apart.
pub const RATE_MERGE_TOL: f64 = 1e-12;

/// Hard cap on polynomial powers.
pub const POWER_CAP: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Term {
    power: u32,
    rate: Complex64,
    coeff: Complex64,
}

/// A finite sum `Σ c · t^ℓ · e^{λt}` in canonical form: terms sorted by
/// `(ℓ, λ)`, rates merged within [`RATE_MERGE_TOL`], zero coefficients
/// removed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExpPoly {
    terms: Vec<Term>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::term(0, Complex64::new(0.0, 0.0), c)
    }

    /// The variable `t` itself.
    pub fn var() -> Self {
        Self::term(1, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    /// `c · t^power`.
    pub fn monomial(power: u32, c: Complex64) -> Self {
        Self::term(power, Complex64::new(0.0, 0.0), c)
    }

    /// `e^{λt}`.
    pub fn exp_rate(rate: Complex64) -> Self {
        Self::term(0, rate, Complex64::new(1.0, 0.0))
    }

    /// A single term `c · t^power · e^{rate·t}`.
    pub fn term(power: u32, rate: Complex64, coeff: Complex64) -> Self {
        let mut p = Self {
            terms: alloc::vec![Term { power, rate, coeff }],
        };
        p.canonicalize();
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of canonical terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates `(power, rate, coeff)` triples in canonical order.
    pub fn iter_terms(&self) -> impl Iterator<Item = (u32, Complex64, Complex64)> + '_ {
        self.terms.iter().map(|t| (t.power, t.rate, t.coeff))
    }

    fn canonicalize(&mut self) {
        self.terms.sort_by(|a, b| {
            a.power
                .cmp(&b.power)
                .then(a.rate.re.partial_cmp(&b.rate.re).unwrap())
                .then(a.rate.im.partial_cmp(&b.rate.im).unwrap())
        });
        // Neumaier-compensated merge: the shift round-trips feeding this
        // path cancel coefficients of size |s|^ℓ down to O(1), and the
        // compensation keeps that cancellation at working precision.
        let mut out: Vec<Term> = Vec::with_capacity(self.terms.len());
        let mut comp = Complex64::new(0.0, 0.0);
        for t in self.terms.drain(..) {
            match out.last_mut() {
                Some(last)
                    if last.power == t.power && (last.rate - t.rate).norm() <= RATE_MERGE_TOL =>
                {
                    let sum_re = last.coeff.re + t.coeff.re;
                    comp.re += if last.coeff.re.abs() >= t.coeff.re.abs() {
                        (last.coeff.re - sum_re) + t.coeff.re
                    } else {
                        (t.coeff.re - sum_re) + last.coeff.re
                    };
                    let sum_im = last.coeff.im + t.coeff.im;
                    comp.im += if last.coeff.im.abs() >= t.coeff.im.abs() {
                        (last.coeff.im - sum_im) + t.coeff.im
                    } else {
                        (t.coeff.im - sum_im) + last.coeff.im
                    };
                    last.coeff = Complex64::new(sum_re, sum_im);
                }
                _ => {
                    if let Some(last) = out.last_mut() {
                        last.coeff += comp;
                    }
                    comp = Complex64::new(0.0, 0.0);
                    out.push(t);
                }
            }
        }
        if let Some(last) = out.last_mut() {
            last.coeff += comp;
        }
        out.retain(|t| t.coeff.norm() != 0.0);
        self.terms = out;
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        let mut p = Self { terms };
        p.canonicalize();
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut p = self.clone();
        for t in &mut p.terms {
            t.coeff *= c;
        }
        p.canonicalize();
        p
    }

    /// Ring product: powers add, rates add.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let power = a.power as u64 + b.power as u64;
                if power > POWER_CAP as u64 {
                    return Err(Error::PowerOverflow { power });
                }
                terms.push(Term {
                    power: power as u32,
                    rate: a.rate + b.rate,
                    coeff: a.coeff * b.coeff,
                });
            }
        }
        let mut p = Self { terms };
        p.canonicalize();
        Ok(p)
    }

    pub fn powi(&self, n: u32) -> Result<Self> {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Argument shift `t → t + s`, exact: `t^ℓ e^{λt} → e^{λs} (t+s)^ℓ e^{λt}`
    /// expanded binomially.
    pub fn shift(&self, s: Complex64) -> Self {
        let mut terms = Vec::new();
        for t in &self.terms {
            let front = (t.rate * s).exp() * t.coeff;
            // binomial expansion of (t+s)^ℓ
            let mut binom = 1.0;
            let mut s_pow = Complex64::new(1.0, 0.0);
            for j in (0..=t.power).rev() {
                // coefficient of t^j: C(ℓ, j) s^{ℓ-j}
                terms.push(Term {
                    power: j,
                    rate: t.rate,
                    coeff: front * binom * s_pow,
                });
                if j > 0 {
                    binom = binom * j as f64 / (t.power - j + 1) as f64;
                    s_pow *= s;
                }
            }
        }
        let mut p = Self { terms };
        p.canonicalize();
        p
    }

    /// Argument reflection `t → −t`.
    pub fn reflect(&self) -> Self {
        let mut p = self.clone();
        for t in &mut p.terms {
            t.rate = -t.rate;
            if t.power % 2 == 1 {
                t.coeff = -t.coeff;
            }
        }
        p.canonicalize();
        p
    }

    /// Exact evaluation at `t`.
    pub fn eval(&self, t: Complex64) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for term in &self.terms {
            sum += term.coeff * t.powu(term.power) * (term.rate * t).exp();
        }
        sum
    }

    /// Taylor coefficients of `t^0..t^{up_to}` of the entire function:
    /// a term `c t^ℓ e^{λt}` contributes `c λ^{j−ℓ}/(j−ℓ)!` at order `j ≥ ℓ`.
    pub fn taylor(&self, up_to: u32) -> Vec<Complex64> {
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); up_to as usize + 1];
        for t in &self.terms {
            let mut factor = t.coeff;
            for j in t.power..=up_to {
                out[j as usize] += factor;
                factor = factor * t.rate / (j - t.power + 1) as f64;
            }
        }
        out
    }

    /// Largest coefficient magnitude; zero for the zero polynomial.
    pub fn max_coeff_abs(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff.norm())
            .fold(0.0, f64::max)
    }

    /// Max coefficient magnitude of `self − other`; the canonical-form
    /// distance used by tests.
    pub fn diff_norm(&self, other: &Self) -> f64 {
        self.sub(other).max_coeff_abs()
    }

    /// `[α t]_q` as an exponential polynomial (the right side of the defining
    /// relation `a a† + a† a = [αÑ]_q`).
    pub fn q_bracket(params: &DeformationParams) -> Self {
        let rate = Complex64::new(params.alpha() * params.ln_q(), 0.0);
        let c = Complex64::new(1.0 / params.q_diff(), 0.0);
        Self::term(0, rate, c).add(&Self::term(0, -rate, -c))
    }
}
