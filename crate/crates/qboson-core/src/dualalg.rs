//! The dual function algebra in the noncommuting coordinates `(x, z, y)`.
//!
//! Elements are normal-ordered as `Σ x^k p_{k,m}(z) y^m` with
//! exponential-polynomial coefficients in `z`, subject to
//!
//! ```text
//! [x, y] = 0,   [z, x] = −(α ln q + iπ) x,   [z, y] = −(α ln q − iπ) y
//! ```
//!
//! so that a `z`-function moving right past `x^k` shifts by `−k c₊` and one
//! moving left past `y^m` shifts by `+m c₋`. Series objects (coproducts,
//! antipodes) are graded by total degree in `(x, y)` jointly and truncated at
//! a per-element `order`; truncated operations record how much they dropped.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Result;
use crate::exppoly::ExpPoly;
use crate::matrix::CMatrix;
use crate::params::DeformationParams;
use crate::special::{curly_factorial, curly_number, q_number, sigma};

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Count and worst magnitude of terms dropped by truncated operations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DropStats {
    pub count: usize,
    pub max_abs: f64,
}

impl DropStats {
    fn absorb(&mut self, other: DropStats) {
        self.count += other.count;
        self.max_abs = self.max_abs.max(other.max_abs);
    }

    fn record(&mut self, magnitude: f64) {
        self.count += 1;
        self.max_abs = self.max_abs.max(magnitude);
    }
}

/// Normal-ordered element `Σ x^k p_{k,m}(z) y^m` with an optional truncation
/// order in the joint `(x, y)` degree.
#[derive(Debug, Clone, Default)]
pub struct FElement {
    terms: BTreeMap<(u32, u32), ExpPoly>,
    order: Option<u32>,
    dropped: DropStats,
}

impl FElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_term(0, 0, ExpPoly::one())
    }

    pub fn gen_x() -> Self {
        Self::from_term(1, 0, ExpPoly::one())
    }

    pub fn gen_y() -> Self {
        Self::from_term(0, 1, ExpPoly::one())
    }

    pub fn gen_z() -> Self {
        Self::from_term(0, 0, ExpPoly::var())
    }

    /// `e^{cz}` as an element.
    pub fn exp_z(c: Complex64) -> Self {
        Self::from_term(0, 0, ExpPoly::exp_rate(c))
    }

    pub fn from_term(k: u32, m: u32, p: ExpPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert((k, m), p);
        }
        Self {
            terms,
            order: None,
            dropped: DropStats::default(),
        }
    }

    /// Imposes a truncation order, dropping any terms already beyond it.
    pub fn with_order(mut self, order: u32) -> Self {
        self.order = Some(order);
        let mut dropped = DropStats::default();
        self.terms.retain(|(k, m), p| {
            if k + m > order {
                dropped.record(p.max_coeff_abs());
                false
            } else {
                true
            }
        });
        self.dropped.absorb(dropped);
        self
    }

    pub fn order(&self) -> Option<u32> {
        self.order
    }

    pub fn dropped(&self) -> DropStats {
        self.dropped
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &ExpPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: u32, m: u32) -> ExpPoly {
        self.terms.get(&(k, m)).cloned().unwrap_or_default()
    }

    fn merged_order(a: Option<u32>, b: Option<u32>) -> Option<u32> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (Some(x), None) | (None, Some(x)) => Some(x),
            (None, None) => None,
        }
    }

    fn insert_add(&mut self, k: u32, m: u32, p: ExpPoly) {
        if p.is_zero() {
            return;
        }
        if let Some(order) = self.order {
            if k + m > order {
                self.dropped.record(p.max_coeff_abs());
                return;
            }
        }
        let entry = self.terms.entry((k, m)).or_default();
        *entry = entry.add(&p);
        if entry.is_zero() {
            self.terms.remove(&(k, m));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self {
            terms: self.terms.clone(),
            order: Self::merged_order(self.order, other.order),
            dropped: self.dropped,
        };
        out.dropped.absorb(other.dropped);
        for ((k, m), p) in &other.terms {
            out.insert_add(*k, *m, p.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        let mut terms = BTreeMap::new();
        for ((k, m), p) in &out.terms {
            let s = p.scale(c);
            if !s.is_zero() {
                terms.insert((*k, *m), s);
            }
        }
        out.terms = terms;
        out
    }

    /// Normal-ordered product: the left factor's `z`-polynomial moving right
    /// past `x^{k'}` shifts by `−k' c₊`; the right factor's moving left past
    /// `y^m` shifts by `+m c₋`.
    pub fn mul(&self, other: &Self, params: &DeformationParams) -> Result<Self> {
        let c_plus = params.c_plus();
        let c_minus = params.c_minus();
        let mut out = Self {
            terms: BTreeMap::new(),
            order: Self::merged_order(self.order, other.order),
            dropped: self.dropped,
        };
        out.dropped.absorb(other.dropped);
        for ((k1, m1), p1) in &self.terms {
            for ((k2, m2), p2) in &other.terms {
                let left = p1.shift(-c_plus * *k2 as f64);
                let right = p2.shift(c_minus * *m1 as f64);
                out.insert_add(k1 + k2, m1 + m2, left.mul(&right)?);
            }
        }
        Ok(out)
    }

    pub fn powi(&self, n: u32, params: &DeformationParams) -> Result<Self> {
        let mut acc = Self::one();
        acc.order = self.order;
        for _ in 0..n {
            acc = acc.mul(self, params)?;
        }
        Ok(acc)
    }

    /// Counit: `ε(x^k p(z) y^m) = δ_{k0} δ_{m0} p(0)`.
    pub fn counit(&self) -> Complex64 {
        self.terms
            .get(&(0, 0))
            .map(|p| p.eval(Complex64::new(0.0, 0.0)))
            .unwrap_or_default()
    }

    pub fn max_coeff_abs(&self) -> f64 {
        self.terms
            .values()
            .map(ExpPoly::max_coeff_abs)
            .fold(0.0, f64::max)
    }

    pub fn diff_norm(&self, other: &Self) -> f64 {
        self.sub(other).max_coeff_abs()
    }

    /// Expansion over the dual basis: for each `(k, m)` key the
    /// `z`-polynomial is re-expanded around the basis center
    /// `s_{k,m} = (α/2)(k−m) ln q + imπ`, giving coefficients of `e^{kℓm}`
    /// up to `max_l`. The expansion is exact (finite) when every coefficient
    /// is a plain polynomial in `z`.
    pub fn dual_coefficients(
        &self,
        params: &DeformationParams,
        max_l: u32,
    ) -> BTreeMap<[u32; 3], Complex64> {
        let mut out = BTreeMap::new();
        let qa = params.q_alpha();
        for ((k, m), p) in &self.terms {
            let s = basis_center(*k, *m, params);
            let norm_km = curly_factorial(*k, qa) * curly_factorial(*m, qa);
            // a polynomial in centered normal form c·(z−s)^ℓ expands to a
            // single basis coefficient; recognizing it (bit-exactly, since
            // construction and probe share the same operations) avoids the
            // |s|^ℓ cancellation of the generic re-centering
            if let Some((l, c)) = centered_form(p, s) {
                if l <= max_l {
                    let mut l_fact = 1.0;
                    for j in 2..=l {
                        l_fact *= j as f64;
                    }
                    out.insert([*k, l, *m], c * norm_km * l_fact);
                }
                continue;
            }
            let around = p.shift(s);
            let mut l_fact = 1.0;
            for (l, a) in around.taylor(max_l).into_iter().enumerate() {
                if l > 0 {
                    l_fact *= l as f64;
                }
                let c = a * norm_km * l_fact;
                if c.norm() != 0.0 {
                    out.insert([*k, l as u32, *m], c);
                }
            }
        }
        out
    }

    /// Whether the dual-basis expansion terminates at or below `max_l`
    /// (true when all coefficients are plain polynomials of degree ≤ `max_l`).
    pub fn dual_expansion_exact(&self, max_l: u32) -> bool {
        self.terms.values().all(|p| {
            p.iter_terms()
                .all(|(pow, rate, _)| rate.norm() == 0.0 && pow <= max_l)
        })
    }
}

/// Detects `p = c·(z−s)^ℓ` by rebuilding the candidate through the same
/// deterministic expansion and comparing exactly.
fn centered_form(p: &ExpPoly, s: Complex64) -> Option<(u32, Complex64)> {
    let mut top: Option<(u32, Complex64)> = None;
    for (pow, rate, coeff) in p.iter_terms() {
        if rate.norm() != 0.0 {
            return None;
        }
        match top {
            Some((tp, _)) if pow <= tp => {}
            _ => top = Some((pow, coeff)),
        }
    }
    let (l, c) = top?;
    let candidate = ExpPoly::monomial(l, Complex64::new(1.0, 0.0))
        .shift(-s)
        .scale(c);
    if candidate == *p {
        Some((l, c))
    } else {
        None
    }
}

/// Center of the dual basis element: `(α/2)(k−m) ln q + imπ`.
fn basis_center(k: u32, m: u32, params: &DeformationParams) -> Complex64 {
    Complex64::new(
        params.alpha() / 2.0 * (k as f64 - m as f64) * params.ln_q(),
        m as f64 * PI,
    )
}

/// The dual basis element
/// `e^{kℓm} = x^k (z − (α/2)(k−m) ln q − imπ)^ℓ y^m / ({k}_{q^α}! ℓ! {m}_{q^α}!)`.
pub fn dual_basis_e(k: u32, l: u32, m: u32, params: &DeformationParams) -> FElement {
    let s = basis_center(k, m, params);
    let shifted = ExpPoly::monomial(l, one()).shift(-s);
    let mut l_fact = 1.0;
    for j in 1..=l {
        l_fact *= j as f64;
    }
    let qa = params.q_alpha();
    let norm = curly_factorial(k, qa) * l_fact * curly_factorial(m, qa);
    FElement::from_term(k, m, shifted.scale(one() / norm))
}

/// A finite sum of tensor pairs with a shared truncation order.
#[derive(Debug, Clone, Default)]
pub struct FTensorElement {
    pairs: Vec<(FElement, FElement)>,
}

impl FTensorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_pairs(alloc::vec![(FElement::one(), FElement::one())])
    }

    pub fn from_pairs(pairs: Vec<(FElement, FElement)>) -> Self {
        let mut t = Self { pairs };
        t.canonicalize();
        t
    }

    pub fn pairs(&self) -> &[(FElement, FElement)] {
        &self.pairs
    }

    pub fn with_order(mut self, order: u32) -> Self {
        for (l, r) in &mut self.pairs {
            *l = l.clone().with_order(order);
            *r = r.clone().with_order(order);
        }
        self.canonicalize();
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut pairs = self.pairs.clone();
        pairs.extend_from_slice(&other.pairs);
        let mut t = Self { pairs };
        t.canonicalize();
        t
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            pairs: self
                .pairs
                .iter()
                .map(|(l, r)| (l.clone(), r.scale(c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self, params: &DeformationParams) -> Result<Self> {
        let mut pairs = Vec::with_capacity(self.pairs.len() * other.pairs.len());
        for (l1, r1) in &self.pairs {
            for (l2, r2) in &other.pairs {
                let l = l1.mul(l2, params)?;
                let r = r1.mul(r2, params)?;
                if !l.is_zero() && !r.is_zero() {
                    pairs.push((l, r));
                }
            }
        }
        let mut t = Self { pairs };
        t.canonicalize();
        Ok(t)
    }

    pub fn powi(&self, n: u32, params: &DeformationParams) -> Result<Self> {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self, params)?;
        }
        Ok(acc)
    }

    /// Bilinear normal form: every left leg is expanded into its monomials
    /// `x^k t^ℓ e^{ρt} y^m`, and pairs with the same left monomial merge
    /// their right legs. This keeps the pair count bounded by the (finite)
    /// monomial key space instead of growing with the computation history.
    pub fn canonicalize(&mut self) {
        let mut map: BTreeMap<(u32, u32, u32, u64, u64), FElement> = BTreeMap::new();
        let mut orders: Vec<Option<u32>> = Vec::new();
        for (l, r) in self.pairs.drain(..) {
            if r.is_zero() {
                continue;
            }
            orders.push(l.order);
            for ((k, m), p) in &l.terms {
                for (pow, rate, coeff) in p.iter_terms() {
                    let key = (*k, *m, pow, rate.re.to_bits(), rate.im.to_bits());
                    let entry = map.entry(key).or_insert_with(FElement::zero);
                    *entry = entry.add(&r.scale(coeff));
                }
            }
        }
        let shared_order = orders.into_iter().flatten().min();
        let mut out = Vec::with_capacity(map.len());
        for ((k, m, pow, re, im), right) in map {
            if right.is_zero() {
                continue;
            }
            let rate = Complex64::new(f64::from_bits(re), f64::from_bits(im));
            let mut left = FElement::from_term(k, m, ExpPoly::term(pow, rate, one()));
            if let Some(o) = shared_order {
                left = left.with_order(o);
                if left.is_zero() {
                    continue;
                }
            }
            out.push((left, right));
        }
        self.pairs = out;
    }

    pub fn contract(
        &self,
        mut combine: impl FnMut(&FElement, &FElement) -> Result<FElement>,
    ) -> Result<FElement> {
        let mut acc = FElement::zero();
        for (l, r) in &self.pairs {
            acc = acc.add(&combine(l, r)?);
        }
        Ok(acc)
    }

    /// Coefficients over `e ⊗ e` with both legs expanded through `max_l`.
    pub fn table(
        &self,
        params: &DeformationParams,
        max_l: u32,
    ) -> BTreeMap<([u32; 3], [u32; 3]), Complex64> {
        let mut out = BTreeMap::new();
        for (l, r) in &self.pairs {
            let tl = l.dual_coefficients(params, max_l);
            let tr = r.dual_coefficients(params, max_l);
            for (il, cl) in &tl {
                for (ir, cr) in &tr {
                    let v: &mut Complex64 = out.entry((*il, *ir)).or_default();
                    *v += cl * cr;
                }
            }
        }
        out.retain(|_, v| v.norm() > 0.0);
        out
    }

    pub fn table_norm(&self, params: &DeformationParams, max_l: u32) -> f64 {
        self.table(params, max_l)
            .values()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn table_diff(&self, other: &Self, params: &DeformationParams, max_l: u32) -> f64 {
        self.sub(other).table_norm(params, max_l)
    }
}

/// Coefficient table over three tensor legs.
pub type TripleTable = BTreeMap<([u32; 3], [u32; 3], [u32; 3]), Complex64>;

/// A finite sum of triple tensors, compared through its coefficient table.
#[derive(Debug, Clone, Default)]
pub struct FTensor3 {
    triples: Vec<(FElement, FElement, FElement)>,
}

impl FTensor3 {
    pub fn push(&mut self, a: FElement, b: FElement, c: FElement) {
        self.triples.push((a, b, c));
    }

    pub fn table(&self, params: &DeformationParams, max_l: u32) -> TripleTable {
        let mut out = BTreeMap::new();
        for (a, b, c) in &self.triples {
            let ta = a.dual_coefficients(params, max_l);
            let tb = b.dual_coefficients(params, max_l);
            let tc = c.dual_coefficients(params, max_l);
            for (ia, ca) in &ta {
                for (ib, cb) in &tb {
                    for (ic, cc) in &tc {
                        let v: &mut Complex64 = out.entry((*ia, *ib, *ic)).or_default();
                        *v += ca * cb * cc;
                    }
                }
            }
        }
        out
    }

    pub fn table_diff(&self, other: &Self, params: &DeformationParams, max_l: u32) -> f64 {
        let ta = self.table(params, max_l);
        let tb = other.table(params, max_l);
        let mut worst = 0.0f64;
        for (k, v) in &ta {
            let w = tb.get(k).copied().unwrap_or_default();
            worst = worst.max((v - w).norm());
        }
        for (k, w) in &tb {
            if !ta.contains_key(k) {
                worst = worst.max(w.norm());
            }
        }
        worst
    }
}

/// Which of the three dual generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FGen {
    X,
    Y,
    Z,
}

/// Which of the two equivalent coproduct series to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoproductForm {
    /// σ-weighted series with curly-factorial denominators.
    Raw,
    /// Closed-coefficient series.
    Simplified,
}

/// The coproduct of a dual generator, truncated at per-leg `(x,y)`-degree
/// ≤ `order`.
pub fn coproduct_f(
    gen: FGen,
    form: CoproductForm,
    order: u32,
    params: &DeformationParams,
) -> FTensorElement {
    let qa = params.q_alpha();
    let q = params.q();
    let alpha = params.alpha();
    let mut pairs: Vec<(FElement, FElement)> = Vec::new();
    match gen {
        FGen::X => {
            pairs.push((FElement::gen_x(), FElement::one()));
            for m in 0..order {
                // legs carry degrees (m, m+1)
                let coeff = match form {
                    CoproductForm::Raw => {
                        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                        sign * q.powf(m as f64 * alpha / 2.0) * sigma(m + 1, params)
                            / (curly_factorial(m, qa) * curly_factorial(m + 1, qa))
                    }
                    CoproductForm::Simplified => {
                        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                        sign * ((qa + 1.0) / params.q_diff()).powi(m as i32)
                    }
                };
                let left = FElement::from_term(0, m, ExpPoly::exp_rate(one()).scale(one() * coeff));
                let right = FElement::from_term(m + 1, 0, ExpPoly::one());
                pairs.push((left, right));
            }
        }
        FGen::Z => {
            pairs.push((FElement::gen_z(), FElement::one()));
            pairs.push((FElement::one(), FElement::gen_z()));
            for m in 1..=order {
                let coeff = match form {
                    CoproductForm::Raw => {
                        2.0 * alpha * params.ln_q() / params.q_diff() * sigma(m, params)
                            / curly_factorial(m, qa).powi(2)
                    }
                    CoproductForm::Simplified => delta_z_coefficient(m, params),
                };
                pairs.push((
                    FElement::from_term(0, m, ExpPoly::constant(one() * coeff)),
                    FElement::from_term(m, 0, ExpPoly::one()),
                ));
            }
        }
        FGen::Y => {
            pairs.push((FElement::one(), FElement::gen_y()));
            for m in 0..order {
                let coeff = match form {
                    CoproductForm::Raw => {
                        q.powf(-(m as f64) * alpha / 2.0) * sigma(m + 1, params)
                            / (curly_factorial(m + 1, qa) * curly_factorial(m, qa))
                    }
                    CoproductForm::Simplified => {
                        ((1.0 + q.powf(-alpha)) / params.q_diff()).powi(m as i32)
                    }
                };
                let left = FElement::from_term(0, m + 1, ExpPoly::constant(one() * coeff));
                let right = FElement::from_term(m, 0, ExpPoly::exp_rate(one()));
                pairs.push((left, right));
            }
        }
    }
    FTensorElement::from_pairs(pairs).with_order(order)
}

/// Coefficient of `y^m ⊗ x^m` in the simplified coproduct of `z`.
fn delta_z_coefficient(m: u32, params: &DeformationParams) -> f64 {
    let qa = params.q_alpha();
    let v = (params.q().powf(params.alpha() / 2.0) + params.q().powf(-params.alpha() / 2.0))
        / params.q_diff();
    2.0 * params.alpha() * params.ln_q() / params.q_diff() / curly_number(m, qa)
        * v.powi(m as i32 - 1)
}

/// Exponent coefficient of the `m`-th factor in the product form of
/// `exp(Δz)`: `(−1)^m [mα]_q/(m {m}_{q^α}) ((q^{α/2}+q^{−α/2})/(q−q^{−1}))^{m−1}`.
pub fn exp_delta_z_factor_coefficient(m: u32, params: &DeformationParams) -> f64 {
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let v = (params.q().powf(params.alpha() / 2.0) + params.q().powf(-params.alpha() / 2.0))
        / params.q_diff();
    sign * q_number(m as f64 * params.alpha(), params)
        / (m as f64 * curly_number(m, params.q_alpha()))
        * v.powi(m as i32 - 1)
}

/// `exp(w · y^m ⊗ x^m)` expanded through the truncation order; the power
/// series terminates because the leg degrees grow by `m` each step.
fn exp_pair_nilpotent(
    w: Complex64,
    m: u32,
    order: u32,
    params: &DeformationParams,
) -> Result<FTensorElement> {
    let base = FTensorElement::from_pairs(alloc::vec![(
        FElement::from_term(0, m, ExpPoly::one()),
        FElement::from_term(m, 0, ExpPoly::one()),
    )])
    .with_order(order);
    let mut acc = FTensorElement::one().with_order(order);
    let mut term = FTensorElement::one().with_order(order);
    let mut j = 0u32;
    while (j + 1) * m <= order {
        j += 1;
        term = term.mul(&base, params)?.scale(w / j as f64);
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// The closed product form of `exp(Δz)`:
/// `(e^z ⊗ 1) · Π_m 𝒫_m · (1 ⊗ e^z)`.
pub fn exp_delta_z_closed(order: u32, params: &DeformationParams) -> Result<FTensorElement> {
    let mut acc =
        FTensorElement::from_pairs(alloc::vec![(FElement::exp_z(one()), FElement::one())])
            .with_order(order);
    for m in 1..=order {
        let w = one() * exp_delta_z_factor_coefficient(m, params);
        acc = acc.mul(&exp_pair_nilpotent(w, m, order, params)?, params)?;
    }
    acc = acc.mul(
        &FTensorElement::from_pairs(alloc::vec![(FElement::one(), FElement::exp_z(one()))])
            .with_order(order),
        params,
    )?;
    Ok(acc)
}

/// `exp(λ Δz)` in the solvable factorization
/// `e^{λ(z⊗1)} e^{λ(1⊗z)} Π_m exp(b_m(λ) y^m⊗x^m)` with
/// `b_m(λ) = a_m (e^{λμ_m} − 1)/μ_m`, `μ_m = 2mα ln q`, where `a_m` is the
/// series coefficient of `Δz`. The commutator
/// `[z⊗1 + 1⊗z, y^m⊗x^m] = −μ_m y^m⊗x^m` makes the tensor directions
/// eigenoperators, so the factorization is exact; it reproduces the product
/// form at λ = 1.
pub fn exp_delta_z_scaled(
    lambda: Complex64,
    order: u32,
    params: &DeformationParams,
) -> Result<FTensorElement> {
    let mut acc = FTensorElement::from_pairs(alloc::vec![(
        FElement::exp_z(lambda),
        FElement::exp_z(lambda),
    )])
    .with_order(order);
    for m in 1..=order {
        let mu = 2.0 * m as f64 * params.alpha() * params.ln_q();
        let a = delta_z_coefficient(m, params);
        let b = if mu.abs() < 1e-14 {
            lambda * a
        } else {
            ((lambda * mu).exp() - 1.0) / mu * a
        };
        acc = acc.mul(&exp_pair_nilpotent(b, m, order, params)?, params)?;
    }
    Ok(acc)
}

/// Series oracle `Σ_j (λΔz)^j/j!` through `j_max`, for validating the closed
/// forms. Keep `λ` small: the partial sums of the full-strength series lose
/// ~8 digits to cancellation in the coefficient table, while a small `λ`
/// converges geometrically from the first term.
pub fn exp_delta_z_series(
    lambda: Complex64,
    order: u32,
    j_max: u32,
    params: &DeformationParams,
) -> Result<FTensorElement> {
    let dz = coproduct_f(FGen::Z, CoproductForm::Simplified, order, params);
    let mut acc = FTensorElement::one().with_order(order);
    let mut term = FTensorElement::one().with_order(order);
    for j in 1..=j_max {
        term = term.mul(&dz, params)?.scale(lambda / j as f64);
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// The closed antipode series of a dual generator, truncated at total
/// `(x,y)`-degree ≤ `order`.
pub fn antipode_f_gen(gen: FGen, order: u32, params: &DeformationParams) -> FElement {
    let qa = params.q_alpha();
    let q = params.q();
    let alpha = params.alpha();
    let mut acc = FElement::zero().with_order(order);
    match gen {
        FGen::X => {
            let mut m = 0u32;
            while 2 * m < order {
                let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
                let coeff = sign * q.powf((m as f64 + 2.0) * alpha / 2.0) * sigma(m + 1, params)
                    / (curly_factorial(m + 1, qa) * curly_factorial(m, qa));
                let p = ExpPoly::exp_rate(-one() * (m as f64 + 1.0)).scale(one() * coeff);
                acc = acc.add(&FElement::from_term(m + 1, m, p));
                m += 1;
            }
        }
        FGen::Z => {
            acc = acc.add(&FElement::gen_z().neg());
            let front = 2.0 * alpha * params.ln_q() / params.q_diff();
            let mut m = 1u32;
            while 2 * m <= order {
                let coeff = front * sigma(m, params) / curly_factorial(m, qa).powi(2);
                let p = ExpPoly::exp_rate(-one() * m as f64).scale(one() * coeff);
                acc = acc.add(&FElement::from_term(m, m, p));
                m += 1;
            }
        }
        FGen::Y => {
            let mut m = 0u32;
            while 2 * m < order {
                let coeff = q.powf(-(m as f64 + 2.0) * alpha / 2.0) * sigma(m + 1, params)
                    / (curly_factorial(m, qa) * curly_factorial(m + 1, qa));
                let p = ExpPoly::exp_rate(-one() * (m as f64 + 1.0)).scale(one() * coeff);
                acc = acc.add(&FElement::from_term(m, m + 1, p));
                m += 1;
            }
        }
    }
    acc
}

/// `exp(λ S(z))` in the same solvable factorization as `exp(λΔz)`:
/// `e^{−λz} Π_j exp(b_j(λ) x^j e^{−jz} y^j)` with
/// `b_j(λ) = a_j (1 − e^{−λμ_j})/μ_j`, where `a_j` is the series coefficient
/// of `S(z)` and `[−z, x^j e^{−jz} y^j] = μ_j x^j e^{−jz} y^j`.
pub fn exp_s_z_scaled(
    lambda: Complex64,
    order: u32,
    params: &DeformationParams,
) -> Result<FElement> {
    let qa = params.q_alpha();
    let front = 2.0 * params.alpha() * params.ln_q() / params.q_diff();
    let mut acc = FElement::from_term(0, 0, ExpPoly::exp_rate(-lambda)).with_order(order);
    let mut j = 1u32;
    while 2 * j <= order {
        let mu = 2.0 * j as f64 * params.alpha() * params.ln_q();
        let a = front * sigma(j, params) / curly_factorial(j, qa).powi(2);
        let b = if mu.abs() < 1e-14 {
            lambda * a
        } else {
            (1.0 - (-lambda * mu).exp()) / mu * a
        };
        let base =
            FElement::from_term(j, j, ExpPoly::exp_rate(-one() * j as f64)).with_order(order);
        let mut factor = FElement::one().with_order(order);
        let mut term = FElement::one().with_order(order);
        let mut p = 0u32;
        while 2 * j * (p + 1) <= order {
            p += 1;
            term = term.mul(&base, params)?.scale(b / p as f64);
            factor = factor.add(&term);
        }
        acc = acc.mul(&factor, params)?;
        j += 1;
    }
    Ok(acc)
}

/// Series oracle `Σ_j λ^j S(z)^j/j!` for validating `exp_s_z_scaled`.
pub fn exp_s_z_series(
    lambda: Complex64,
    order: u32,
    j_max: u32,
    params: &DeformationParams,
) -> Result<FElement> {
    let sz = antipode_f_gen(FGen::Z, order, params).scale(lambda);
    let mut acc = FElement::one().with_order(order);
    let mut term = FElement::one().with_order(order);
    for j in 1..=j_max {
        term = term.mul(&sz, params)?.scale(one() / j as f64);
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// The antipode of a general element, extended as an algebra anti-morphism:
/// `S(x^k p(z) y^m) = S(y)^m S(p(z)) S(x)^k`, with `S(e^{λz}) = exp(λS(z))`
/// through the closed factorization.
pub fn antipode_f(f: &FElement, order: u32, params: &DeformationParams) -> Result<FElement> {
    let sx = antipode_f_gen(FGen::X, order, params);
    let sy = antipode_f_gen(FGen::Y, order, params);
    let sz = antipode_f_gen(FGen::Z, order, params);
    let mut acc = FElement::zero().with_order(order);
    for ((k, m), p) in &f.terms {
        let mut elem = sy.powi(*m, params)?;
        let mut sp = FElement::zero().with_order(order);
        for (pow, rate, coeff) in p.iter_terms() {
            let mut piece = sz.powi(pow, params)?;
            if rate.norm() != 0.0 {
                piece = piece.mul(&exp_s_z_scaled(rate, order, params)?, params)?;
            }
            sp = sp.add(&piece.scale(coeff));
        }
        elem = elem.mul(&sp, params)?;
        elem = elem.mul(&sx.powi(*k, params)?, params)?;
        acc = acc.add(&elem);
    }
    Ok(acc)
}

/// The coproduct of a general element, extended as an algebra map:
/// `Δ(x^k p(z) y^m) = Δ(x)^k p(Δz) Δ(y)^m` with `p(Δz)` assembled from
/// `Δ(z)` powers and `exp(λΔz)` factors.
pub fn coproduct_f_element(
    f: &FElement,
    order: u32,
    params: &DeformationParams,
) -> Result<FTensorElement> {
    let dx = coproduct_f(FGen::X, CoproductForm::Simplified, order, params);
    let dy = coproduct_f(FGen::Y, CoproductForm::Simplified, order, params);
    let dz = coproduct_f(FGen::Z, CoproductForm::Simplified, order, params);
    let mut acc = FTensorElement::zero();
    for ((k, m), p) in &f.terms {
        let mut elem = dx.powi(*k, params)?;
        let mut pd = FTensorElement::zero();
        for (pow, rate, coeff) in p.iter_terms() {
            let mut piece = dz.powi(pow, params)?;
            if rate.norm() != 0.0 {
                piece = piece.mul(&exp_delta_z_scaled(rate, order, params)?, params)?;
            }
            pd = pd.add(&piece.scale(coeff));
        }
        elem = elem.mul(&pd, params)?;
        elem = elem.mul(&dy.powi(*m, params)?, params)?;
        acc = acc.add(&elem);
    }
    Ok(acc.with_order(order))
}

/// Residuals of the three bracket relations among the coproducts:
/// `[Δx, Δy]`, `[Δz, Δx] + c₊ Δx`, `[Δz, Δy] + c₋ Δy`, measured on the
/// truncation-consistent coefficient table.
pub fn homomorphism_check(order: u32, params: &DeformationParams) -> Result<f64> {
    let dx = coproduct_f(FGen::X, CoproductForm::Simplified, order, params);
    let dy = coproduct_f(FGen::Y, CoproductForm::Simplified, order, params);
    let dz = coproduct_f(FGen::Z, CoproductForm::Simplified, order, params);
    let comm = |a: &FTensorElement, b: &FTensorElement| -> Result<FTensorElement> {
        Ok(a.mul(b, params)?.sub(&b.mul(a, params)?))
    };
    let max_l = 4;
    let r1 = comm(&dx, &dy)?.table_norm(params, max_l);
    let r2 = comm(&dz, &dx)?
        .add(&dx.scale(params.c_plus()))
        .table_norm(params, max_l);
    let r3 = comm(&dz, &dy)?
        .add(&dy.scale(params.c_minus()))
        .table_norm(params, max_l);
    Ok(r1.max(r2).max(r3))
}

/// Coassociativity residual `(id⊗Δ)Δ − (Δ⊗id)Δ` on the three generators.
///
/// Both routes are truncated at per-leg degree ≤ `order`; the comparison
/// restricts to table entries with per-leg `(x,y)`-degree ≤ `order − 1`,
/// which is exactly the window where every contribution survives the
/// truncation on both sides (products add degrees, so nothing from beyond
/// the truncation can reach it).
pub fn coassociativity_check(order: u32, params: &DeformationParams) -> Result<f64> {
    let cap = order.saturating_sub(1);
    let within = |idx: &[u32; 3]| idx[0] + idx[2] <= cap;
    let mut worst = 0.0f64;
    for gen in [FGen::X, FGen::Y, FGen::Z] {
        let d = coproduct_f(gen, CoproductForm::Simplified, order, params);
        let mut left = FTensor3::default();
        for (l, r) in d.pairs() {
            for (r1, r2) in coproduct_f_element(r, order, params)?.pairs() {
                left.push(l.clone(), r1.clone(), r2.clone());
            }
        }
        let mut right = FTensor3::default();
        for (l, r) in d.pairs() {
            for (l1, l2) in coproduct_f_element(l, order, params)?.pairs() {
                right.push(l1.clone(), l2.clone(), r.clone());
            }
        }
        let ta = left.table(params, 4);
        let tb = right.table(params, 4);
        for (k, v) in &ta {
            if !(within(&k.0) && within(&k.1) && within(&k.2)) {
                continue;
            }
            let w = tb.get(k).copied().unwrap_or_default();
            worst = worst.max((v - w).norm());
        }
        for (k, w) in &tb {
            if within(&k.0) && within(&k.1) && within(&k.2) && !ta.contains_key(k) {
                worst = worst.max(w.norm());
            }
        }
    }
    Ok(worst)
}

/// Verifies the product factorization of `exp(Δz)` termwise to truncation.
///
/// Three noise-free legs certify it:
/// 1. the product form agrees with the solvable factorization at
///    λ = 1 (both are closed expressions, compared exactly on the table);
/// 2. the solvable factorization agrees with the plain series exponential
///    at small λ, where the series converges without cancellation;
/// 3. the semigroup property `exp(λ₁Δz)·exp(λ₂Δz) = exp((λ₁+λ₂)Δz)` holds
///    at full strength. Together with 2 this pins the λ-dependence, since a
///    one-parameter family with the right germ and cocycle law is unique.
///
/// Returns the worst residual across the three comparisons.
pub fn exp_delta_z_check(order: u32, j_max: u32, params: &DeformationParams) -> Result<f64> {
    let product_form = exp_delta_z_closed(order, params)?;
    let solvable = exp_delta_z_scaled(one(), order, params)?;
    let mut worst = product_form.table_diff(&solvable, params, 4);

    let eps = Complex64::new(0.04, 0.01);
    let series = exp_delta_z_series(eps, order, j_max, params)?;
    let small = exp_delta_z_scaled(eps, order, params)?;
    worst = worst.max(small.table_diff(&series, params, 4));

    let a = exp_delta_z_scaled(Complex64::new(0.3, 0.0), order, params)?;
    let b = exp_delta_z_scaled(Complex64::new(0.7, 0.0), order, params)?;
    let ab = a.mul(&b, params)?;
    let scale = solvable.table_norm(params, 4).max(1.0);
    worst = worst.max(ab.table_diff(&solvable, params, 4) / scale);
    Ok(worst)
}

/// Residual of the antipode axiom `m∘(S⊗id)∘Δ = ε·1 = m∘(id⊗S)∘Δ` on the
/// three generators (whose counits all vanish).
pub fn antipode_axiom_check(order: u32, params: &DeformationParams) -> Result<f64> {
    let mut worst = 0.0f64;
    for gen in [FGen::X, FGen::Y, FGen::Z] {
        let d = coproduct_f(gen, CoproductForm::Simplified, order, params);
        let left = d.contract(|l, r| antipode_f(l, order, params)?.mul(r, params))?;
        let right = d.contract(|l, r| l.mul(&antipode_f(r, order, params)?, params))?;
        worst = worst.max(left.max_coeff_abs()).max(right.max_coeff_abs());
    }
    Ok(worst)
}

/// Two-mode oscillator representation of `(x, y, z)`:
/// `x = 𝔞₁`, `y = 𝔞₂`, `z = α ln q (n₁+n₂) + iπ(n₁−n₂)` on the `D ⊗ D`
/// truncated two-mode Fock space.
pub fn oscillator_rep(d: usize, params: &DeformationParams) -> (CMatrix, CMatrix, CMatrix) {
    let mut ladder = CMatrix::zeros(d, d);
    for n in 1..d {
        ladder[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    let id = CMatrix::identity(d);
    let x = ladder.kron(&id);
    let y = id.kron(&ladder);
    let mut z = CMatrix::zeros(d * d, d * d);
    for n1 in 0..d {
        for n2 in 0..d {
            let idx = n1 * d + n2;
            z[(idx, idx)] = oscillator_z_eigenvalue(n1, n2, params);
        }
    }
    (x, y, z)
}

/// Diagonal value of `z` on the two-mode state `(n₁, n₂)`.
pub fn oscillator_z_eigenvalue(n1: usize, n2: usize, params: &DeformationParams) -> Complex64 {
    Complex64::new(
        params.alpha() * params.ln_q() * (n1 + n2) as f64,
        PI * (n1 as f64 - n2 as f64),
    )
}

/// Represents a normal-ordered element on the two-mode space, with the
/// `z`-polynomials evaluated on the diagonal.
pub fn represent_f(f: &FElement, d: usize, params: &DeformationParams) -> CMatrix {
    let (x, y, _) = oscillator_rep(d, params);
    let dim = d * d;
    let mut out = CMatrix::zeros(dim, dim);
    for ((k, m), p) in &f.terms {
        let mut diag = CMatrix::zeros(dim, dim);
        for n1 in 0..d {
            for n2 in 0..d {
                let idx = n1 * d + n2;
                diag[(idx, idx)] = p.eval(oscillator_z_eigenvalue(n1, n2, params));
            }
        }
        let term = x.powi(*k).mul(&diag).mul(&y.powi(*m));
        out = out.add(&term);
    }
    out
}
