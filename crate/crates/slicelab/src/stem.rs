//! Polynomial stem functions D ⊆ Cⁿ → R_m ⊗ R^(2ⁿ).
//!
//! A stem assigns to every subset K of {1..n} a component polynomial F_K in
//! the variables α₁,β₁,…,α_n,β_n with Multivector coefficients. Subsets are
//! stored as bitmasks over the variable indices. The even/odd symmetry
//! F_K(z̄^h) = (−1)^{|K∩{h}|} F_K(z) becomes a parity condition on the
//! β_h-exponents: even when h ∉ K, odd when h ∈ K.
//!
//! β-exponents may be negative internally (Laurent terms arise in spherical
//! derivatives and in the closed-form iterated Laplacians); α-exponents are
//! always nonnegative.

use crate::clifford::{check_m, Multivector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Iterates the 1-based indices present in a subset mask, ascending.
pub fn mask_elements(mask: u32) -> impl Iterator<Item = u32> {
    (1..=32u32).filter(move |i| mask & (1 << (i - 1)) != 0)
}

/// Renders a subset mask as "{}" or "{1,2}".
pub fn format_subset(mask: u32) -> String {
    let items = mask_elements(mask)
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!("{{{items}}}")
}

/// Parses "{}", "{1}", "{1,2}" into a subset mask over {1..n}.
pub fn parse_subset(text: &str, n: u32) -> Result<u32> {
    let err = |msg: &str| Error::Parse {
        pos: 0,
        msg: format!("subset '{text}': {msg}"),
    };
    let inner = text
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| err("expected braces"))?;
    let mut mask = 0u32;
    if inner.trim().is_empty() {
        return Ok(0);
    }
    for part in inner.split(',') {
        let h: u32 = part.trim().parse().map_err(|_| err("bad index"))?;
        if h == 0 || h > n {
            return Err(Error::VariableOutOfRange { h, n });
        }
        let bit = 1 << (h - 1);
        if mask & bit != 0 {
            return Err(err("repeated index"));
        }
        mask |= bit;
    }
    Ok(mask)
}

/// Exponent profile of one monomial: [a₁, b₁, a₂, b₂, …] where a_h is the
/// α_h-exponent (≥ 0) and b_h the β_h-exponent (any integer). Ordered by
/// graded lexicographic comparison for deterministic serialization.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn constant(n: u32) -> Self {
        Monomial(vec![0; 2 * n as usize])
    }

    pub fn n(&self) -> u32 {
        (self.0.len() / 2) as u32
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|e| *e as i64).sum()
    }

    pub fn alpha_exp(&self, h: u32) -> i32 {
        self.0[2 * (h as usize - 1)]
    }

    pub fn beta_exp(&self, h: u32) -> i32 {
        self.0[2 * (h as usize - 1) + 1]
    }

    pub fn with_alpha(&self, h: u32, e: i32) -> Self {
        let mut v = self.0.clone();
        v[2 * (h as usize - 1)] = e;
        Monomial(v)
    }

    pub fn with_beta(&self, h: u32, e: i32) -> Self {
        let mut v = self.0.clone();
        v[2 * (h as usize - 1) + 1] = e;
        Monomial(v)
    }

    fn product(&self, other: &Self) -> Self {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(x, y)| x + y)
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial (Laurent in the β's) in 2n real variables with coefficients
/// in R_m. No zero coefficients are stored.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly<S: Scalar> {
    m: u32,
    n: u32,
    terms: BTreeMap<Monomial, Multivector<S>>,
}

impl<S: Scalar> LaurentPoly<S> {
    pub fn zero(m: u32, n: u32) -> Result<Self> {
        check_m(m)?;
        Ok(LaurentPoly {
            m,
            n,
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(m: u32, n: u32, c: Multivector<S>) -> Result<Self> {
        let mut p = Self::zero(m, n)?;
        p.add_term(Monomial::constant(n), c)?;
        Ok(p)
    }

    pub fn one(m: u32, n: u32) -> Result<Self> {
        Self::constant(m, n, Multivector::scalar(m, S::one())?)
    }

    /// Builds Σ c·Π α_h^{a_h} β_h^{b_h} from explicit exponent profiles.
    pub fn from_terms<I>(m: u32, n: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i32>, Multivector<S>)>,
    {
        let mut p = Self::zero(m, n)?;
        for (exps, c) in terms {
            p.add_term(Monomial(exps), c)?;
        }
        Ok(p)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates (monomial, coefficient) in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Multivector<S>)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, mono: Monomial, c: Multivector<S>) -> Result<()> {
        if mono.0.len() != 2 * self.n as usize {
            return Err(Error::MismatchedSignature {
                lm: self.m,
                ln: self.n,
                rm: c.m(),
                rn: mono.n(),
            });
        }
        if c.m() != self.m {
            return Err(Error::MismatchedAlgebra {
                left: self.m,
                right: c.m(),
            });
        }
        for h in 1..=self.n {
            if mono.alpha_exp(h) < 0 {
                return Err(Error::NegativeAlphaExponent { h });
            }
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&mono) {
            Some(existing) => {
                let sum = existing.add(&c)?;
                if sum.is_zero() {
                    self.terms.remove(&mono);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
        Ok(())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.m != other.m || self.n != other.n {
            return Err(Error::MismatchedSignature {
                lm: self.m,
                ln: self.n,
                rm: other.m,
                rn: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (mono, c) in other.terms() {
            out.add_term(mono.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = LaurentPoly {
            m: self.m,
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (mono, c) in self.terms() {
            out.terms.insert(mono.clone(), c.neg());
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = LaurentPoly {
            m: self.m,
            n: self.n,
            terms: BTreeMap::new(),
        };
        if s.is_zero() {
            return out;
        }
        for (mono, c) in self.terms() {
            let v = c.scale(s);
            if !v.is_zero() {
                out.terms.insert(mono.clone(), v);
            }
        }
        out
    }

    /// Left-multiplies every coefficient by c (Clifford product c·F).
    pub fn scale_left(&self, c: &Multivector<S>) -> Result<Self> {
        let mut out = Self::zero(self.m, self.n)?;
        for (mono, v) in self.terms() {
            out.add_term(mono.clone(), c.clifford_product(v)?)?;
        }
        Ok(out)
    }

    /// Product with coefficients multiplied in written order (P·Q term by
    /// term; the Clifford product does not commute).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.m, self.n)?;
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                out.add_term(ma.product(mb), ca.clifford_product(cb)?)?;
            }
        }
        Ok(out)
    }

    /// Formal ∂/∂α_h.
    pub fn partial_alpha(&self, h: u32) -> Result<Self> {
        self.check_var(h)?;
        let mut out = Self::zero(self.m, self.n)?;
        for (mono, c) in self.terms() {
            let e = mono.alpha_exp(h);
            if e != 0 {
                out.add_term(mono.with_alpha(h, e - 1), c.scale(&S::from_int(e as i64)))?;
            }
        }
        Ok(out)
    }

    /// Formal ∂/∂β_h, with the Laurent rule on negative exponents.
    pub fn partial_beta(&self, h: u32) -> Result<Self> {
        self.check_var(h)?;
        let mut out = Self::zero(self.m, self.n)?;
        for (mono, c) in self.terms() {
            let e = mono.beta_exp(h);
            if e != 0 {
                out.add_term(mono.with_beta(h, e - 1), c.scale(&S::from_int(e as i64)))?;
            }
        }
        Ok(out)
    }

    /// Shifts every β_h-exponent down by `power` (formal Laurent division;
    /// validity of the result is the caller's concern).
    pub fn divide_beta(&self, h: u32, power: i32) -> Result<Self> {
        self.check_var(h)?;
        let mut out = Self::zero(self.m, self.n)?;
        for (mono, c) in self.terms() {
            out.add_term(mono.with_beta(h, mono.beta_exp(h) - power), c.clone())?;
        }
        Ok(out)
    }

    /// Shifts every β_h-exponent up by `power`.
    pub fn mul_beta_power(&self, h: u32, power: i32) -> Result<Self> {
        self.divide_beta(h, -power)
    }

    fn check_var(&self, h: u32) -> Result<()> {
        if h == 0 || h > self.n {
            return Err(Error::VariableOutOfRange { h, n: self.n });
        }
        Ok(())
    }

    /// True when all β-exponents are ≥ 0 (no Laurent part).
    pub fn is_polynomial(&self) -> bool {
        self.terms
            .keys()
            .all(|mono| (1..=self.n).all(|h| mono.beta_exp(h) >= 0))
    }

    /// True when every β_h-exponent has the given parity (0 even, 1 odd).
    pub fn beta_parity_ok(&self, h: u32, parity: i32) -> bool {
        self.terms
            .keys()
            .all(|mono| mono.beta_exp(h).rem_euclid(2) == parity)
    }

    /// Rebuilds the polynomial term by term.
    pub fn map_terms(
        &self,
        mut f: impl FnMut(&Monomial, &Multivector<S>) -> Result<(Monomial, Multivector<S>)>,
    ) -> Result<Self> {
        let mut out = Self::zero(self.m, self.n)?;
        for (mono, c) in self.terms() {
            let (new_mono, new_c) = f(mono, c)?;
            out.add_term(new_mono, new_c)?;
        }
        Ok(out)
    }

    /// Evaluates at α = alphas, β = betas (1-based variable h uses index
    /// h−1). Negative exponents at a zero value are poles.
    pub fn evaluate(&self, alphas: &[S], betas: &[S]) -> Result<Multivector<S>> {
        if alphas.len() != self.n as usize || betas.len() != self.n as usize {
            return Err(Error::MismatchedSignature {
                lm: self.m,
                ln: self.n,
                rm: self.m,
                rn: alphas.len().min(betas.len()) as u32,
            });
        }
        let mut acc = Multivector::zero(self.m)?;
        for (mono, c) in self.terms() {
            let mut factor = S::one();
            for h in 1..=self.n {
                let idx = (h - 1) as usize;
                let ae = mono.alpha_exp(h) as i64;
                if ae != 0 {
                    factor = factor.mul(&alphas[idx].powi(ae));
                }
                let be = mono.beta_exp(h) as i64;
                if be != 0 {
                    if be < 0 && betas[idx].is_zero() {
                        return Err(Error::EvaluationAtPole { h });
                    }
                    factor = factor.mul(&betas[idx].powi(be));
                }
            }
            acc = acc.add(&c.scale(&factor))?;
        }
        Ok(acc)
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> LaurentPoly<T> {
        let mut terms = BTreeMap::new();
        for (mono, c) in self.terms() {
            let v = c.map_scalars(f);
            if !v.is_zero() {
                terms.insert(mono.clone(), v);
            }
        }
        LaurentPoly {
            m: self.m,
            n: self.n,
            terms,
        }
    }

    /// Largest |coefficient| over all terms, as f64.
    pub fn max_abs_f64(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.max_abs_f64())
            .fold(0.0, f64::max)
    }
}

impl<S: Scalar> fmt::Display for LaurentPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            for h in 1..=self.n {
                let a = mono.alpha_exp(h);
                let b = mono.beta_exp(h);
                if a == 1 {
                    factors.push(format!("α{h}"));
                } else if a != 0 {
                    factors.push(format!("α{h}^{a}"));
                }
                if b == 1 {
                    factors.push(format!("β{h}"));
                } else if b != 0 {
                    factors.push(format!("β{h}^{b}"));
                }
            }
            let coeff = format!("{c}");
            let coeff = if c.terms().count() > 1 || coeff.contains('*') {
                format!("({coeff})")
            } else {
                coeff
            };
            if factors.is_empty() {
                write!(f, "{coeff}")?;
            } else {
                write!(f, "{coeff}·{}", factors.join("·"))?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for LaurentPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly(m={}, n={}, {})", self.m, self.n, self)
    }
}

/// Stem polynomial: association K ⊆ {1..n} → F_K. Only nonzero components
/// are stored; `support` reports which K are present.
#[derive(Clone, PartialEq)]
pub struct StemPolynomial<S: Scalar> {
    m: u32,
    n: u32,
    components: BTreeMap<u32, LaurentPoly<S>>,
}

impl<S: Scalar> StemPolynomial<S> {
    pub fn zero(m: u32, n: u32) -> Result<Self> {
        check_m(m)?;
        Ok(StemPolynomial {
            m,
            n,
            components: BTreeMap::new(),
        })
    }

    pub fn constant(m: u32, n: u32, c: Multivector<S>) -> Result<Self> {
        let mut s = Self::zero(m, n)?;
        s.set_component(0, LaurentPoly::constant(m, n, c)?)?;
        Ok(s)
    }

    pub fn one(m: u32, n: u32) -> Result<Self> {
        Self::constant(m, n, Multivector::scalar(m, S::one())?)
    }

    /// The coordinate stem Z_j with components F_∅ = α_j, F_{j} = β_j.
    pub fn variable(m: u32, n: u32, j: u32) -> Result<Self> {
        let mut s = Self::zero(m, n)?;
        s.check_var(j)?;
        let one = Multivector::scalar(m, S::one())?;
        let mut alpha = Monomial::constant(n);
        alpha.0[2 * (j as usize - 1)] = 1;
        let mut beta = Monomial::constant(n);
        beta.0[2 * (j as usize - 1) + 1] = 1;
        let mut f_empty = LaurentPoly::zero(m, n)?;
        f_empty.add_term(alpha, one.clone())?;
        let mut f_j = LaurentPoly::zero(m, n)?;
        f_j.add_term(beta, one)?;
        s.set_component(0, f_empty)?;
        s.set_component(1 << (j - 1), f_j)?;
        Ok(s)
    }

    /// The conjugate coordinate stem x̄_j: F_∅ = α_j, F_{j} = −β_j.
    pub fn variable_conjugate(m: u32, n: u32, j: u32) -> Result<Self> {
        let x = Self::variable(m, n, j)?;
        let mask = 1 << (j - 1);
        let mut out = Self::zero(m, n)?;
        out.set_component(0, x.component(0))?;
        out.set_component(mask, x.component(mask).neg())?;
        Ok(out)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    fn check_var(&self, h: u32) -> Result<()> {
        if h == 0 || h > self.n {
            return Err(Error::VariableOutOfRange { h, n: self.n });
        }
        Ok(())
    }

    fn check_subset(&self, mask: u32) -> Result<()> {
        if self.n >= 32 || mask >> self.n != 0 {
            return Err(Error::VariableOutOfRange {
                h: 32 - mask.leading_zeros(),
                n: self.n,
            });
        }
        Ok(())
    }

    /// Component F_K (zero polynomial when absent).
    pub fn component(&self, k_mask: u32) -> LaurentPoly<S> {
        self.components
            .get(&k_mask)
            .cloned()
            .unwrap_or_else(|| LaurentPoly {
                m: self.m,
                n: self.n,
                terms: BTreeMap::new(),
            })
    }

    pub fn set_component(&mut self, k_mask: u32, poly: LaurentPoly<S>) -> Result<()> {
        self.check_subset(k_mask)?;
        if poly.m != self.m || poly.n != self.n {
            return Err(Error::MismatchedSignature {
                lm: self.m,
                ln: self.n,
                rm: poly.m,
                rn: poly.n,
            });
        }
        if poly.is_zero() {
            self.components.remove(&k_mask);
        } else {
            self.components.insert(k_mask, poly);
        }
        Ok(())
    }

    pub fn add_to_component(&mut self, k_mask: u32, poly: &LaurentPoly<S>) -> Result<()> {
        let sum = self.component(k_mask).add(poly)?;
        self.set_component(k_mask, sum)
    }

    /// Masks of the nonzero components, ascending.
    pub fn support(&self) -> Vec<u32> {
        self.components.keys().copied().collect()
    }

    /// Iterates (K mask, component) pairs in ascending mask order.
    pub fn components(&self) -> impl Iterator<Item = (u32, &LaurentPoly<S>)> {
        self.components.iter().map(|(k, v)| (*k, v))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.m != other.m || self.n != other.n {
            return Err(Error::MismatchedSignature {
                lm: self.m,
                ln: self.n,
                rm: other.m,
                rn: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (k, poly) in other.components() {
            out.add_to_component(k, poly)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = StemPolynomial {
            m: self.m,
            n: self.n,
            components: BTreeMap::new(),
        };
        for (k, poly) in self.components() {
            out.components.insert(k, poly.neg());
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = StemPolynomial {
            m: self.m,
            n: self.n,
            components: BTreeMap::new(),
        };
        for (k, poly) in self.components() {
            let v = poly.scale(s);
            if !v.is_zero() {
                out.components.insert(k, v);
            }
        }
        out
    }

    /// True iff every component satisfies the β-parity condition:
    /// β_h-exponents even when h ∉ K, odd when h ∈ K.
    pub fn validate(&self) -> bool {
        self.components().all(|(k, poly)| {
            (1..=self.n).all(|h| {
                let parity = if k & (1 << (h - 1)) != 0 { 1 } else { 0 };
                poly.beta_parity_ok(h, parity)
            })
        })
    }

    /// As `validate`, but reporting the first offending component.
    pub fn validate_detailed(&self) -> Result<()> {
        for (k, poly) in self.components() {
            for h in 1..=self.n {
                let parity = if k & (1 << (h - 1)) != 0 { 1 } else { 0 };
                if !poly.beta_parity_ok(h, parity) {
                    return Err(Error::ParityViolation {
                        component: format_subset(k),
                        h,
                    });
                }
            }
        }
        Ok(())
    }

    /// True when no component carries a negative β-exponent.
    pub fn is_polynomial(&self) -> bool {
        self.components().all(|(_, poly)| poly.is_polynomial())
    }

    /// Tensor product: (F⊗G)_M = Σ_{HΔK=M} (−1)^{|H∩K|} F_H·G_K with the
    /// Clifford coefficient products taken in written order.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.m, self.n)?;
        for (h, fh) in self.components() {
            for (k, gk) in other.components() {
                let product = fh.mul(gk)?;
                let signed = if (h & k).count_ones() % 2 == 1 {
                    product.neg()
                } else {
                    product
                };
                out.add_to_component(h ^ k, &signed)?;
            }
        }
        Ok(out)
    }

    pub fn partial_alpha(&self, h: u32) -> Result<Self> {
        self.check_var(h)?;
        let mut out = Self::zero(self.m, self.n)?;
        for (k, poly) in self.components() {
            out.set_component(k, poly.partial_alpha(h)?)?;
        }
        Ok(out)
    }

    pub fn partial_beta(&self, h: u32) -> Result<Self> {
        self.check_var(h)?;
        let mut out = Self::zero(self.m, self.n)?;
        for (k, poly) in self.components() {
            out.set_component(k, poly.partial_beta(h)?)?;
        }
        Ok(out)
    }

    /// Componentwise formal division by β_h^power.
    pub fn divide_beta(&self, h: u32, power: i32) -> Result<Self> {
        self.check_var(h)?;
        let mut out = Self::zero(self.m, self.n)?;
        for (k, poly) in self.components() {
            out.set_component(k, poly.divide_beta(h, power)?)?;
        }
        Ok(out)
    }

    /// The component action of the complex structure 𝒥_h:
    /// (𝒥_h G)_K = −G_{K∪{h}} if h ∉ K, and (𝒥_h G)_K = G_{K∖{h}} if h ∈ K.
    pub fn apply_j(&self, h: u32) -> Result<Self> {
        self.check_var(h)?;
        let bit = 1 << (h - 1);
        let mut out = Self::zero(self.m, self.n)?;
        for (k, poly) in self.components() {
            if k & bit != 0 {
                // e_K ↦ −e_{K∖{h}} when h ∈ K
                out.add_to_component(k & !bit, &poly.neg())?;
            } else {
                // e_K ↦ +e_{K∪{h}} when h ∉ K
                out.add_to_component(k | bit, poly)?;
            }
        }
        Ok(out)
    }

    /// Wirtinger operator ∂_h = ½(∂/∂α_h − 𝒥_h ∂/∂β_h).
    pub fn wirtinger(&self, h: u32) -> Result<Self> {
        let da = self.partial_alpha(h)?;
        let jdb = self.partial_beta(h)?.apply_j(h)?;
        Ok(da.sub(&jdb)?.scale(&S::from_ratio(1, 2)))
    }

    /// Conjugate Wirtinger operator ∂̄_h = ½(∂/∂α_h + 𝒥_h ∂/∂β_h).
    pub fn wirtinger_conj(&self, h: u32) -> Result<Self> {
        let da = self.partial_alpha(h)?;
        let jdb = self.partial_beta(h)?.apply_j(h)?;
        Ok(da.add(&jdb)?.scale(&S::from_ratio(1, 2)))
    }

    /// Cauchy–Riemann system in variable h: ∂_{α_h}F_K = ∂_{β_h}F_{K∪{h}}
    /// and ∂_{β_h}F_K = −∂_{α_h}F_{K∪{h}} for every K ∌ h. Equivalent to
    /// wirtinger_conj(·, h) = 0.
    pub fn holomorphy_check(&self, h: u32) -> Result<bool> {
        Ok(self.wirtinger_conj(h)?.is_zero())
    }

    /// Z₁^{⊗ℓ₁} ⊗ … ⊗ Z_n^{⊗ℓ_n} ⊗ c: the stem of the monomial
    /// x₁^{ℓ₁}⋯x_n^{ℓ_n}·c, holomorphic in every variable.
    pub fn monomial(m: u32, exponents: &[u32], c: Multivector<S>) -> Result<Self> {
        let n = exponents.len() as u32;
        if n == 0 || n >= 32 {
            return Err(Error::VariableOutOfRange { h: n, n });
        }
        let mut acc = Self::one(m, n)?;
        for (idx, &exp) in exponents.iter().enumerate() {
            let z = Self::variable(m, n, idx as u32 + 1)?;
            for _ in 0..exp {
                acc = acc.tensor(&z)?;
            }
        }
        acc.tensor(&Self::constant(m, n, c)?)
    }

    /// Largest |coefficient| over all components, as f64.
    pub fn max_abs_f64(&self) -> f64 {
        self.components()
            .map(|(_, poly)| poly.max_abs_f64())
            .fold(0.0, f64::max)
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> StemPolynomial<T> {
        let mut components = BTreeMap::new();
        for (k, poly) in self.components() {
            let v = poly.map_scalars(f);
            if !v.is_zero() {
                components.insert(k, v);
            }
        }
        StemPolynomial {
            m: self.m,
            n: self.n,
            components,
        }
    }
}

impl<S: Scalar> fmt::Display for StemPolynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "F = 0");
        }
        let mut first = true;
        for (k, poly) in self.components() {
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "F_{} = {poly}", format_subset(k))?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for StemPolynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StemPolynomial(m={}, n={})\n{}", self.m, self.n, self)
    }
}
