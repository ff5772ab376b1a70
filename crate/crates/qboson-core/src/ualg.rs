//! Normal-ordering engine for the generalized boson algebra.
//!
//! Elements are kept in the ordered form `Σ a†^k f_{k,m}(Ñ) a^m` with
//! exponential-polynomial coefficients in `Ñ = N + β/α`. Rewriting uses the
//! three rules
//!
//! ```text
//! a a†   = [αÑ]_q − a† a
//! a f(Ñ) = f(Ñ+1) a
//! f(Ñ) a† = a† f(Ñ+1)
//! ```
//!
//! together with the coalgebra maps on the generators. Products and
//! coproducts of the ordered monomials `E_{kℓm} = a†^k Ñ^ℓ a^m` yield the
//! structure-constant tables `f` and `g`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Result;
use crate::exppoly::ExpPoly;
use crate::params::DeformationParams;

const ONE_SHIFT: Complex64 = Complex64::new(1.0, 0.0);

/// Normal-ordered element of the deformed boson algebra:
/// a map `(k, m) → f_{k,m}(Ñ)` representing `Σ a†^k f_{k,m}(Ñ) a^m`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct UElement {
    terms: BTreeMap<(u32, u32), ExpPoly>,
}

impl UElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::from_term(0, 0, ExpPoly::one())
    }

    /// `a†^k f(Ñ) a^m` as a single ordered term.
    pub fn from_term(k: u32, m: u32, f: ExpPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert((k, m), f);
        }
        Self { terms }
    }

    /// A pure function of `Ñ`.
    pub fn from_fn_of_ntilde(f: ExpPoly) -> Self {
        Self::from_term(0, 0, f)
    }

    pub fn gen_a() -> Self {
        Self::from_term(0, 1, ExpPoly::one())
    }

    pub fn gen_adag() -> Self {
        Self::from_term(1, 0, ExpPoly::one())
    }

    pub fn gen_ntilde() -> Self {
        Self::from_term(0, 0, ExpPoly::var())
    }

    /// The grading element `𝗀 = (−1)^{Ñ} = e^{iπÑ}`.
    pub fn gen_g() -> Self {
        Self::from_term(0, 0, ExpPoly::exp_rate(Complex64::new(0.0, PI)))
    }

    /// `q^{s·αÑ/2}` for a real scale `s` (the coproduct leg factors).
    pub fn q_alpha_ntilde_pow(s: f64, params: &DeformationParams) -> ExpPoly {
        ExpPoly::exp_rate(Complex64::new(
            s * params.alpha() * params.ln_q() / 2.0,
            0.0,
        ))
    }

    /// The ordered monomial `E_{kℓm} = a†^k Ñ^ℓ a^m`.
    pub fn basis_e(k: u32, l: u32, m: u32) -> Self {
        Self::from_term(k, m, ExpPoly::monomial(l, Complex64::new(1.0, 0.0)))
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

    fn insert_add(&mut self, k: u32, m: u32, f: ExpPoly) {
        if f.is_zero() {
            return;
        }
        let entry = self.terms.entry((k, m)).or_default();
        *entry = entry.add(&f);
        if entry.is_zero() {
            self.terms.remove(&(k, m));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((k, m), f) in &other.terms {
            out.insert_add(*k, *m, f.clone());
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
        let mut out = Self::zero();
        for ((k, m), f) in &self.terms {
            out.insert_add(*k, *m, f.scale(c));
        }
        out
    }

    /// Right-multiplication by `a`: appends a lowering operator.
    fn rmul_a(&self) -> Self {
        let mut out = Self::zero();
        for ((k, m), f) in &self.terms {
            out.insert_add(*k, m + 1, f.clone());
        }
        out
    }

    /// Right-multiplication by a function of `Ñ`:
    /// `f(Ñ) a^m · g(Ñ) = f(Ñ) g(Ñ+m) a^m`.
    fn rmul_fn(&self, g: &ExpPoly) -> Result<Self> {
        let mut out = Self::zero();
        for ((k, m), f) in &self.terms {
            let shifted = g.shift(Complex64::new(*m as f64, 0.0));
            out.insert_add(*k, *m, f.mul(&shifted)?);
        }
        Ok(out)
    }

    /// Right-multiplication by `a†`, applying `a a† = [αÑ]_q − a† a`
    /// recursively through the `a`-tail of every term.
    fn rmul_adag(&self, bracket: &ExpPoly) -> Result<Self> {
        let mut out = Self::zero();
        for ((k, m), f) in &self.terms {
            let term = Self::term_rmul_adag(*k, f, *m, bracket)?;
            out = out.add(&term);
        }
        Ok(out)
    }

    fn term_rmul_adag(k: u32, f: &ExpPoly, m: u32, bracket: &ExpPoly) -> Result<Self> {
        if m == 0 {
            return Ok(Self::from_term(k + 1, 0, f.shift(ONE_SHIFT)));
        }
        // a†^k f a^m a† = a†^k f [α(Ñ+m−1)]_q a^{m−1} − (a†^k f a^{m−1} a†) a
        let head = bracket.shift(Complex64::new((m - 1) as f64, 0.0));
        let mut out = Self::from_term(k, m - 1, f.mul(&head)?);
        let tail = Self::term_rmul_adag(k, f, m - 1, bracket)?;
        out = out.sub(&tail.rmul_a());
        Ok(out)
    }

    /// Normal-ordered product, exact in the exponential-polynomial ring.
    pub fn mul(&self, other: &Self, params: &DeformationParams) -> Result<Self> {
        let bracket = ExpPoly::q_bracket(params);
        let mut acc = Self::zero();
        for ((k2, m2), f2) in &other.terms {
            let mut cur = self.clone();
            for _ in 0..*k2 {
                cur = cur.rmul_adag(&bracket)?;
            }
            cur = cur.rmul_fn(f2)?;
            for _ in 0..*m2 {
                cur = cur.rmul_a();
            }
            acc = acc.add(&cur);
        }
        Ok(acc)
    }

    pub fn powi(&self, n: u32, params: &DeformationParams) -> Result<Self> {
        let mut acc = Self::identity();
        for _ in 0..n {
            acc = acc.mul(self, params)?;
        }
        Ok(acc)
    }

    /// Coefficients over the ordered basis `E_{kℓm}` with the `Ñ`-powers
    /// Taylor-expanded through `max_l`.
    pub fn taylor_table(&self, max_l: u32) -> BTreeMap<[u32; 3], Complex64> {
        let mut out = BTreeMap::new();
        for ((k, m), f) in &self.terms {
            for (l, c) in f.taylor(max_l).into_iter().enumerate() {
                if c.norm() != 0.0 {
                    out.insert([*k, l as u32, *m], c);
                }
            }
        }
        out
    }

    /// Counit: `ε(a†^k f(Ñ) a^m) = δ_{k0} δ_{m0} f(0)`.
    pub fn counit(&self) -> Complex64 {
        self.terms
            .get(&(0, 0))
            .map(|f| f.eval(Complex64::new(0.0, 0.0)))
            .unwrap_or_default()
    }

    /// Antipode, extended from the generator values as an algebra
    /// anti-morphism: `S(a†^k f(Ñ) a^m) = S(a)^m f(−Ñ) S(a†)^k`.
    pub fn antipode(&self, params: &DeformationParams) -> Result<Self> {
        let s_a = antipode_a(params);
        let s_adag = antipode_adag(params);
        let mut acc = Self::zero();
        for ((k, m), f) in &self.terms {
            let mut cur = s_a.powi(*m, params)?;
            cur = cur.mul(&Self::from_fn_of_ntilde(f.reflect()), params)?;
            cur = cur.mul(&s_adag.powi(*k, params)?, params)?;
            acc = acc.add(&cur);
        }
        Ok(acc)
    }

    /// Coproduct, extended from the generator values as an algebra map:
    /// the legs of `Δ(a†)^k Δ(f(Ñ)) Δ(a)^m` multiply through the engine.
    pub fn coproduct(&self, params: &DeformationParams) -> Result<UTensorElement> {
        let da = coproduct_a(params);
        let dadag = coproduct_adag(params);
        let mut acc = UTensorElement::zero();
        for ((k, m), f) in &self.terms {
            let mut cur = dadag.powi(*k, params)?;
            cur = cur.mul(&coproduct_fn_of_ntilde(f)?, params)?;
            cur = cur.mul(&da.powi(*m, params)?, params)?;
            acc = acc.add(&cur);
        }
        acc.canonicalize();
        Ok(acc)
    }

    /// Largest coefficient magnitude over all ordered terms.
    pub fn max_coeff_abs(&self) -> f64 {
        self.terms
            .values()
            .map(ExpPoly::max_coeff_abs)
            .fold(0.0, f64::max)
    }

    pub fn diff_norm(&self, other: &Self) -> f64 {
        self.sub(other).max_coeff_abs()
    }

    /// Total ordering on the symbolic structure, used for tensor-pair
    /// canonicalization.
    fn cmp_structure(&self, other: &Self) -> Ordering {
        let mut a = self.terms.iter();
        let mut b = other.terms.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ka, fa)), Some((kb, fb))) => {
                    let ord = ka.cmp(kb).then_with(|| cmp_poly(fa, fb));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
            }
        }
    }
}

fn cmp_poly(a: &ExpPoly, b: &ExpPoly) -> Ordering {
    let mut ta = a.iter_terms();
    let mut tb = b.iter_terms();
    loop {
        match (ta.next(), tb.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((pa, ra, ca)), Some((pb, rb, cb))) => {
                let ord = pa
                    .cmp(&pb)
                    .then(ra.re.total_cmp(&rb.re))
                    .then(ra.im.total_cmp(&rb.im))
                    .then(ca.re.total_cmp(&cb.re))
                    .then(ca.im.total_cmp(&cb.im));
                if ord != Ordering::Equal {
                    return ord;
                }
            }
        }
    }
}

/// `S(a) = −(−1)^{−Ñ} q^{−α/2} a`.
pub fn antipode_a(params: &DeformationParams) -> UElement {
    let scale = Complex64::new(-params.q().powf(-params.alpha() / 2.0), 0.0);
    let f = ExpPoly::exp_rate(Complex64::new(0.0, -PI)).scale(scale);
    UElement::from_term(0, 1, f)
}

/// `S(a†) = a† (−1)^{Ñ} q^{α/2}`.
pub fn antipode_adag(params: &DeformationParams) -> UElement {
    let scale = Complex64::new(params.q().powf(params.alpha() / 2.0), 0.0);
    let f = ExpPoly::exp_rate(Complex64::new(0.0, PI)).scale(scale);
    UElement::from_term(1, 0, f)
}

/// `Δ(a) = a ⊗ q^{αÑ/2} + (−1)^{Ñ} q^{−αÑ/2} ⊗ a`.
pub fn coproduct_a(params: &DeformationParams) -> UTensorElement {
    let half = params.alpha() * params.ln_q() / 2.0;
    UTensorElement::from_pairs(alloc::vec![
        (
            UElement::gen_a(),
            UElement::from_fn_of_ntilde(ExpPoly::exp_rate(Complex64::new(half, 0.0))),
        ),
        (
            UElement::from_fn_of_ntilde(ExpPoly::exp_rate(Complex64::new(-half, PI))),
            UElement::gen_a(),
        ),
    ])
}

/// `Δ(a†) = a† ⊗ q^{αÑ/2} + (−1)^{−Ñ} q^{−αÑ/2} ⊗ a†`.
pub fn coproduct_adag(params: &DeformationParams) -> UTensorElement {
    let half = params.alpha() * params.ln_q() / 2.0;
    UTensorElement::from_pairs(alloc::vec![
        (
            UElement::gen_adag(),
            UElement::from_fn_of_ntilde(ExpPoly::exp_rate(Complex64::new(half, 0.0))),
        ),
        (
            UElement::from_fn_of_ntilde(ExpPoly::exp_rate(Complex64::new(-half, -PI))),
            UElement::gen_adag(),
        ),
    ])
}

/// `Δ(Ñ) = Ñ ⊗ 1 + 1 ⊗ Ñ` (the primitive form of the shifted number operator).
pub fn coproduct_ntilde() -> UTensorElement {
    UTensorElement::from_pairs(alloc::vec![
        (UElement::gen_ntilde(), UElement::identity()),
        (UElement::identity(), UElement::gen_ntilde()),
    ])
}

/// `Δ(f(Ñ))` for an exponential polynomial: every `c t^ℓ e^{λt}` becomes
/// `c (Ñ⊗1 + 1⊗Ñ)^ℓ (e^{λÑ} ⊗ e^{λÑ})`, exactly.
fn coproduct_fn_of_ntilde(f: &ExpPoly) -> Result<UTensorElement> {
    let mut acc = UTensorElement::zero();
    for (power, rate, coeff) in f.iter_terms() {
        // binomial expansion of the commuting-sum power
        let mut binom = 1.0;
        for j in 0..=power {
            let left = ExpPoly::monomial(j, Complex64::new(binom, 0.0) * coeff)
                .mul(&ExpPoly::exp_rate(rate))?;
            let right = ExpPoly::monomial(power - j, Complex64::new(1.0, 0.0))
                .mul(&ExpPoly::exp_rate(rate))?;
            acc = acc.add(&UTensorElement::from_pairs(alloc::vec![(
                UElement::from_fn_of_ntilde(left),
                UElement::from_fn_of_ntilde(right),
            )]));
            if j < power {
                binom = binom * (power - j) as f64 / (j + 1) as f64;
            }
        }
    }
    Ok(acc)
}

/// A finite sum of tensor pairs of ordered elements.
#[derive(Debug, Clone, Default)]
pub struct UTensorElement {
    pairs: Vec<(UElement, UElement)>,
}

impl UTensorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_pairs(alloc::vec![(UElement::identity(), UElement::identity())])
    }

    pub fn from_pairs(pairs: Vec<(UElement, UElement)>) -> Self {
        let mut t = Self { pairs };
        t.canonicalize();
        t
    }

    pub fn pairs(&self) -> &[(UElement, UElement)] {
        &self.pairs
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
        let pairs = self
            .pairs
            .iter()
            .map(|(l, r)| (l.clone(), r.scale(c)))
            .collect();
        Self { pairs }
    }

    /// Legwise product `(u₁⊗u₂)(v₁⊗v₂) = u₁v₁ ⊗ u₂v₂`.
    pub fn mul(&self, other: &Self, params: &DeformationParams) -> Result<Self> {
        let mut pairs = Vec::with_capacity(self.pairs.len() * other.pairs.len());
        for (l1, r1) in &self.pairs {
            for (l2, r2) in &other.pairs {
                pairs.push((l1.mul(l2, params)?, r1.mul(r2, params)?));
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

    /// Bilinear canonicalization: pairs sorted by the left leg's structure,
    /// identical left legs merged by adding their right legs.
    pub fn canonicalize(&mut self) {
        self.pairs.retain(|(l, r)| !l.is_zero() && !r.is_zero());
        self.pairs.sort_by(|(la, _), (lb, _)| la.cmp_structure(lb));
        let mut out: Vec<(UElement, UElement)> = Vec::with_capacity(self.pairs.len());
        for (l, r) in self.pairs.drain(..) {
            match out.last_mut() {
                Some((pl, pr)) if pl.cmp_structure(&l) == Ordering::Equal => {
                    *pr = pr.add(&r);
                }
                _ => out.push((l, r)),
            }
        }
        out.retain(|(_, r)| !r.is_zero());
        self.pairs = out;
    }

    /// Folds the tensor legs back into one element through `combine`
    /// (e.g. the multiplication map after an antipode on one leg).
    pub fn contract(
        &self,
        mut combine: impl FnMut(&UElement, &UElement) -> Result<UElement>,
    ) -> Result<UElement> {
        let mut acc = UElement::zero();
        for (l, r) in &self.pairs {
            acc = acc.add(&combine(l, r)?);
        }
        Ok(acc)
    }

    /// Coefficients over `E ⊗ E` with both legs Taylor-expanded through
    /// `max_l`.
    pub fn table(&self, max_l: u32) -> BTreeMap<([u32; 3], [u32; 3]), Complex64> {
        let mut out = BTreeMap::new();
        for (l, r) in &self.pairs {
            let tl = l.taylor_table(max_l);
            let tr = r.taylor_table(max_l);
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

    /// Applies the coproduct to every left leg, producing triple tensors.
    pub fn coproduct_left(&self, params: &DeformationParams) -> Result<UTensor3> {
        let mut triples = Vec::new();
        for (l, r) in &self.pairs {
            for (l1, l2) in l.coproduct(params)?.pairs {
                triples.push((l1, l2, r.clone()));
            }
        }
        Ok(UTensor3 { triples })
    }

    /// Applies the coproduct to every right leg.
    pub fn coproduct_right(&self, params: &DeformationParams) -> Result<UTensor3> {
        let mut triples = Vec::new();
        for (l, r) in &self.pairs {
            for (r1, r2) in r.coproduct(params)?.pairs {
                triples.push((l.clone(), r1, r2));
            }
        }
        Ok(UTensor3 { triples })
    }

    /// Largest entry of the windowed coefficient table; the residual measure
    /// for identities that should vanish.
    pub fn table_norm(&self, max_l: u32) -> f64 {
        self.table(max_l)
            .values()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

/// Coefficient table over three tensor legs.
pub type TripleTable = BTreeMap<([u32; 3], [u32; 3], [u32; 3]), Complex64>;

/// A finite sum of triple tensors, only ever compared through its table.
#[derive(Debug, Clone, Default)]
pub struct UTensor3 {
    triples: Vec<(UElement, UElement, UElement)>,
}

impl UTensor3 {
    pub fn table(&self, max_l: u32) -> TripleTable {
        let mut out = BTreeMap::new();
        for (a, b, c) in &self.triples {
            let ta = a.taylor_table(max_l);
            let tb = b.taylor_table(max_l);
            let tc = c.taylor_table(max_l);
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

    /// Max entry difference of two triple tables.
    pub fn table_diff(&self, other: &Self, max_l: u32) -> f64 {
        let ta = self.table(max_l);
        let tb = other.table(max_l);
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

/// Structure constants `f^{pqr}` of one ordered product
/// `E_{kℓm} E_{k'ℓ'm'} = Σ f^{pqr} E_{pqr}` inside a Taylor window.
#[derive(Debug, Clone, Default)]
pub struct ProductTable {
    pub entries: BTreeMap<[u32; 3], Complex64>,
}

impl ProductTable {
    pub fn get(&self, idx: [u32; 3]) -> Complex64 {
        self.entries.get(&idx).copied().unwrap_or_default()
    }
}

/// Structure constants `g^{pqr,p'q'r'}` of one coproduct
/// `Δ(E_{kℓm}) = Σ g E_{pqr} ⊗ E_{p'q'r'}` inside a Taylor window.
#[derive(Debug, Clone, Default)]
pub struct CoproductTable {
    pub entries: BTreeMap<([u32; 3], [u32; 3]), Complex64>,
}

impl CoproductTable {
    pub fn get(&self, idx1: [u32; 3], idx2: [u32; 3]) -> Complex64 {
        self.entries.get(&(idx1, idx2)).copied().unwrap_or_default()
    }
}

/// Expands `E_{kℓm} E_{k'ℓ'm'}` over the ordered basis through Taylor order
/// `window_l` in `Ñ`.
pub fn extract_f(
    idx1: [u32; 3],
    idx2: [u32; 3],
    window_l: u32,
    params: &DeformationParams,
) -> Result<ProductTable> {
    let prod = UElement::basis_e(idx1[0], idx1[1], idx1[2])
        .mul(&UElement::basis_e(idx2[0], idx2[1], idx2[2]), params)?;
    Ok(ProductTable {
        entries: prod.taylor_table(window_l),
    })
}

/// Expands `Δ(E_{kℓm})` over `E ⊗ E` through Taylor order `window_l` per leg.
pub fn extract_g(
    idx: [u32; 3],
    window_l: u32,
    params: &DeformationParams,
) -> Result<CoproductTable> {
    let cop = UElement::basis_e(idx[0], idx[1], idx[2]).coproduct(params)?;
    Ok(CoproductTable {
        entries: cop.table(window_l),
    })
}

/// Residuals of the two antipode axioms `m∘(S⊗id)∘Δ = ε·1 = m∘(id⊗S)∘Δ`
/// on the generators `a`, `a†`, `Ñ`, exact in the coefficient ring.
pub fn hopf_axioms(params: &DeformationParams) -> Result<Vec<(&'static str, f64)>> {
    let gens = [
        ("a", UElement::gen_a()),
        ("adag", UElement::gen_adag()),
        ("ntilde", UElement::gen_ntilde()),
    ];
    let mut out = Vec::new();
    for (name, g) in gens {
        let delta = g.coproduct(params)?;
        let eps = UElement::identity().scale(g.counit());
        let left = delta.contract(|l, r| l.antipode(params)?.mul(r, params))?;
        let right = delta.contract(|l, r| l.mul(&r.antipode(params)?, params))?;
        out.push((name, left.diff_norm(&eps).max(right.diff_norm(&eps))));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special;
    use approx::assert_relative_eq;

    fn params() -> DeformationParams {
        DeformationParams::new(1.3, 2.0, 1.0).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn defining_relation_rewrite() {
        let p = params();
        // a·a† = [αÑ]_q − a† a
        let prod = UElement::gen_a().mul(&UElement::gen_adag(), &p).unwrap();
        let expect = UElement::from_fn_of_ntilde(ExpPoly::q_bracket(&p)).add(&UElement::from_term(
            1,
            1,
            ExpPoly::constant(c(-1.0, 0.0)),
        ));
        assert!(prod.diff_norm(&expect) < 1e-14);
    }

    #[test]
    fn shift_rule() {
        let p = params();
        // a·Ñ = (Ñ+1) a
        let prod = UElement::gen_a().mul(&UElement::gen_ntilde(), &p).unwrap();
        let expect = UElement::from_term(0, 1, ExpPoly::var().add(&ExpPoly::one()));
        assert!(prod.diff_norm(&expect) < 1e-14);
    }

    #[test]
    fn a_squared_adag() {
        let p = params();
        // a² a† = ([α(Ñ+1)]_q − [αÑ]_q) a + a† a²
        let a2 = UElement::gen_a().powi(2, &p).unwrap();
        let prod = a2.mul(&UElement::gen_adag(), &p).unwrap();
        let br = ExpPoly::q_bracket(&p);
        let expect = UElement::from_term(0, 1, br.shift(c(1.0, 0.0)).sub(&br))
            .add(&UElement::from_term(1, 2, ExpPoly::one()));
        assert!(prod.diff_norm(&expect) < 1e-13);
    }

    #[test]
    fn number_commutators() {
        let p = params();
        let n = UElement::gen_ntilde();
        let adag = UElement::gen_adag();
        let a = UElement::gen_a();
        // [Ñ, a†] = a†
        let comm = n.mul(&adag, &p).unwrap().sub(&adag.mul(&n, &p).unwrap());
        assert!(comm.diff_norm(&adag) < 1e-14);
        // [Ñ, a] = −a
        let comm2 = n.mul(&a, &p).unwrap().sub(&a.mul(&n, &p).unwrap());
        assert!(comm2.diff_norm(&a.neg()) < 1e-14);
    }

    #[test]
    fn basis_elements() {
        assert!(UElement::basis_e(0, 0, 0).diff_norm(&UElement::identity()) == 0.0);
        let e101 = UElement::basis_e(1, 0, 1);
        assert!(e101.diff_norm(&UElement::from_term(1, 1, ExpPoly::one())) == 0.0);
        let e020 = UElement::basis_e(0, 2, 0);
        assert!(
            e020.diff_norm(&UElement::from_fn_of_ntilde(ExpPoly::monomial(
                2,
                c(1.0, 0.0)
            ))) == 0.0
        );
    }

    #[test]
    fn grading_element_squares_to_phase() {
        let p = params();
        // 𝗀² = e^{2iπÑ}, and ε(𝗀) = 1
        let g = UElement::gen_g();
        let g2 = g.mul(&g, &p).unwrap();
        let expect = UElement::from_fn_of_ntilde(ExpPoly::exp_rate(c(0.0, 2.0 * PI)));
        assert!(g2.diff_norm(&expect) < 1e-14);
        assert!((g.counit() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn counit_values() {
        assert_eq!(UElement::gen_a().counit(), c(0.0, 0.0));
        assert_eq!(UElement::gen_adag().counit(), c(0.0, 0.0));
        assert_eq!(UElement::gen_ntilde().counit(), c(0.0, 0.0));
        assert_eq!(UElement::identity().counit(), c(1.0, 0.0));
    }

    #[test]
    fn antipode_on_generators() {
        let p = params();
        // S(Ñ) = −Ñ
        let sn = UElement::gen_ntilde().antipode(&p).unwrap();
        assert!(sn.diff_norm(&UElement::gen_ntilde().neg()) < 1e-14);
        // S is an anti-morphism on a·a†: S(a a†) = S(a†) S(a)
        let aadag = UElement::gen_a().mul(&UElement::gen_adag(), &p).unwrap();
        let lhs = aadag.antipode(&p).unwrap();
        let rhs = antipode_adag(&p).mul(&antipode_a(&p), &p).unwrap();
        assert!(lhs.diff_norm(&rhs) < 1e-12);
    }

    #[test]
    fn coproduct_of_ntilde_is_primitive() {
        let p = params();
        let d = UElement::gen_ntilde().coproduct(&p).unwrap();
        let expect = coproduct_ntilde();
        assert!(d.sub(&expect).table_norm(3) < 1e-14);
    }

    #[test]
    fn coproduct_is_algebra_map_on_defining_relation() {
        let p = params();
        let da = coproduct_a(&p);
        let dd = coproduct_adag(&p);
        let anti = da.mul(&dd, &p).unwrap().add(&dd.mul(&da, &p).unwrap());
        let rhs = UElement::from_fn_of_ntilde(ExpPoly::q_bracket(&p))
            .coproduct(&p)
            .unwrap();
        assert!(anti.sub(&rhs).table_norm(6) < 1e-12);
    }

    #[test]
    fn coassociativity_on_generators() {
        let p = params();
        for g in [
            UElement::gen_a(),
            UElement::gen_adag(),
            UElement::gen_ntilde(),
        ] {
            let d = g.coproduct(&p).unwrap();
            let left = d.coproduct_left(&p).unwrap();
            let right = d.coproduct_right(&p).unwrap();
            assert!(left.table_diff(&right, 5) < 1e-12);
        }
    }

    #[test]
    fn hopf_axioms_hold_exactly() {
        let p = params();
        for (name, residual) in hopf_axioms(&p).unwrap() {
            assert!(residual < 1e-12, "{name} residual {residual}");
        }
    }

    #[test]
    fn tabulated_g_entries_on_generators() {
        let p = params();
        let half_log = p.alpha() / 2.0 * p.ln_q();
        // g^{100,001} in Δ(E_{101}) is 1
        let t101 = extract_g([1, 0, 1], 3, &p).unwrap();
        assert!((t101.get([1, 0, 0], [0, 0, 1]) - c(1.0, 0.0)).norm() < 1e-12);
        // g^{001,100} in Δ(E_{101}) is 1
        assert!((t101.get([0, 0, 1], [1, 0, 0]) - c(1.0, 0.0)).norm() < 1e-12);
        // Δ(a†): coefficient of Ñ⊗a† is −(α/2 ln q + iπ)
        let t100 = extract_g([1, 0, 0], 3, &p).unwrap();
        assert!((t100.get([0, 1, 0], [1, 0, 0]) - c(-half_log, -PI)).norm() < 1e-12);
        // and of a†⊗Ñ is +(α/2) ln q
        assert!((t100.get([1, 0, 0], [0, 1, 0]) - c(half_log, 0.0)).norm() < 1e-12);
        // Δ(a): coefficient of Ñ⊗a is −(α/2 ln q − iπ)
        let t001 = extract_g([0, 0, 1], 3, &p).unwrap();
        assert!((t001.get([0, 1, 0], [0, 0, 1]) - c(-half_log, PI)).norm() < 1e-12);
        // and of a⊗Ñ is +(α/2) ln q
        assert!((t001.get([0, 0, 1], [0, 1, 0]) - c(half_log, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn tabulated_g_curly_family() {
        let p = params();
        // g^{100,p00} in Δ(E_{p+1,0,0}) equals {p+1}_{q^α}
        for pk in 0..=3u32 {
            let t = extract_g([pk + 1, 0, 0], 2, &p).unwrap();
            let got = t.get([1, 0, 0], [pk, 0, 0]);
            let expect = special::curly_number(pk + 1, p.q_alpha());
            assert_relative_eq!(got.re, expect, max_relative = 1e-12);
            assert!(got.im.abs() < 1e-12);
        }
    }

    #[test]
    fn tabulated_f_sigma_family() {
        let p = params();
        // f^{100} in E_{0ℓm}·E_{m+1,0,0} equals σ_{m+1}, independent of ℓ
        for l in 0..=2u32 {
            for m in 0..=3u32 {
                let t = extract_f([0, l, m], [m + 1, 0, 0], 2, &p).unwrap();
                let got = t.get([1, 0, 0]);
                assert_relative_eq!(got.re, special::sigma(m + 1, &p), max_relative = 1e-11);
                assert!(got.im.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn commutator_structure_table() {
        let p = params();
        // E_{010}E_{100} − E_{100}E_{010} = [Ñ, a†] = a†: single entry f^{100} = 1
        let t1 = extract_f([0, 1, 0], [1, 0, 0], 3, &p).unwrap();
        let t2 = extract_f([1, 0, 0], [0, 1, 0], 3, &p).unwrap();
        let mut keys: alloc::vec::Vec<[u32; 3]> = t1.entries.keys().copied().collect();
        keys.extend(t2.entries.keys().copied());
        for k in keys {
            let d = t1.get(k) - t2.get(k);
            let expect = if k == [1, 0, 0] {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            };
            assert!((d - expect).norm() < 1e-12, "entry {k:?}: {d}");
        }
    }
}
