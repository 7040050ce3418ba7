//! Slice functions induced by stems.
//!
//! A stem F with components F_K determines the slice function
//! f(x) = Σ_K [J_K, F_K(z)], where x_h = α_h + J_h β_h and
//! [J_K, ·] = J_{k₁}·J_{k₂}⋯J_{k_p}·(·) multiplies the imaginary units of
//! the variables in K ascending by index, to the left of the coefficient.

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::stem::{format_subset, mask_elements, StemPolynomial};
use std::fmt;

/// A point of the product domain: n paravector coordinates in R^(m+1).
#[derive(Clone, PartialEq, Debug)]
pub struct Point<S: Scalar> {
    coords: Vec<Multivector<S>>,
}

impl<S: Scalar> Point<S> {
    pub fn new(coords: Vec<Multivector<S>>) -> Result<Self> {
        let mut m = None;
        for c in &coords {
            if !c.is_paravector() {
                return Err(Error::NotAParavector);
            }
            match m {
                None => m = Some(c.m()),
                Some(m0) if m0 != c.m() => {
                    return Err(Error::MismatchedAlgebra {
                        left: m0,
                        right: c.m(),
                    })
                }
                _ => {}
            }
        }
        Ok(Point { coords })
    }

    pub fn n(&self) -> u32 {
        self.coords.len() as u32
    }

    pub fn coordinate(&self, h: u32) -> &Multivector<S> {
        &self.coords[(h - 1) as usize]
    }

    pub fn coordinates(&self) -> &[Multivector<S>] {
        &self.coords
    }

    /// The point x̄^h: coordinate h conjugated (α_h − J_h β_h), others kept.
    pub fn conjugate_at(&self, h: u32) -> Self {
        let mut coords = self.coords.clone();
        let idx = (h - 1) as usize;
        coords[idx] = coords[idx].conjugate();
        Point { coords }
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> Point<T> {
        Point {
            coords: self.coords.iter().map(|c| c.map_scalars(f)).collect(),
        }
    }
}

/// Slice function ℐ(F). Construction validates the β-parity invariant;
/// plain construction additionally requires a polynomial stem, while
/// `new_laurent` admits negative β-exponents (spherical-derivative images
/// and the Laurent terms of closed-form Laplacians).
#[derive(Clone, PartialEq)]
pub struct SliceFunction<S: Scalar> {
    stem: StemPolynomial<S>,
    laurent: bool,
}

impl<S: Scalar> SliceFunction<S> {
    pub fn new(stem: StemPolynomial<S>) -> Result<Self> {
        stem.validate_detailed()?;
        if !stem.is_polynomial() {
            return Err(Error::LaurentStem);
        }
        Ok(SliceFunction {
            stem,
            laurent: false,
        })
    }

    pub fn new_laurent(stem: StemPolynomial<S>) -> Result<Self> {
        stem.validate_detailed()?;
        let laurent = !stem.is_polynomial();
        Ok(SliceFunction { stem, laurent })
    }

    /// The monomial x₁^{ℓ₁}⋯x_n^{ℓ_n}·c.
    pub fn monomial(m: u32, exponents: &[u32], c: Multivector<S>) -> Result<Self> {
        Self::new(StemPolynomial::monomial(m, exponents, c)?)
    }

    pub fn constant(m: u32, n: u32, c: Multivector<S>) -> Result<Self> {
        Self::new(StemPolynomial::constant(m, n, c)?)
    }

    pub fn zero(m: u32, n: u32) -> Result<Self> {
        Self::new(StemPolynomial::zero(m, n)?)
    }

    /// The coordinate function x_j.
    pub fn variable(m: u32, n: u32, j: u32) -> Result<Self> {
        Self::new(StemPolynomial::variable(m, n, j)?)
    }

    pub fn stem(&self) -> &StemPolynomial<S> {
        &self.stem
    }

    pub fn into_stem(self) -> StemPolynomial<S> {
        self.stem
    }

    pub fn is_laurent(&self) -> bool {
        self.laurent
    }

    pub fn m(&self) -> u32 {
        self.stem.m()
    }

    pub fn n(&self) -> u32 {
        self.stem.n()
    }

    pub fn is_zero(&self) -> bool {
        self.stem.is_zero()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::new_laurent(self.stem.add(&other.stem)?)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Self::new_laurent(self.stem.sub(&other.stem)?)
    }

    pub fn neg(&self) -> Self {
        SliceFunction {
            stem: self.stem.neg(),
            laurent: self.laurent,
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        SliceFunction {
            stem: self.stem.scale(s),
            laurent: self.laurent,
        }
    }

    /// Slice product f ⊙ g = ℐ(F ⊗ G).
    pub fn slice_product(&self, other: &Self) -> Result<Self> {
        Self::new_laurent(self.stem.tensor(&other.stem)?)
    }

    /// Evaluates f at a point. Exact scalars require each β_h to be
    /// rational (perfect-square β²); Laurent stems require β_h ≠ 0 for the
    /// variables with negative exponents.
    pub fn evaluate(&self, x: &Point<S>) -> Result<Multivector<S>> {
        let m = self.m();
        let n = self.n();
        if x.n() != n {
            return Err(Error::MismatchedSignature {
                lm: m,
                ln: n,
                rm: m,
                rn: x.n(),
            });
        }
        let mut alphas = Vec::with_capacity(n as usize);
        let mut betas = Vec::with_capacity(n as usize);
        let mut units: Vec<Option<Multivector<S>>> = Vec::with_capacity(n as usize);
        for h in 1..=n {
            let coord = x.coordinate(h);
            if coord.m() != m {
                return Err(Error::MismatchedAlgebra {
                    left: m,
                    right: coord.m(),
                });
            }
            let parts = coord.paravector_parts()?;
            let beta = parts.beta.ok_or_else(|| Error::IrrationalBeta {
                beta_sq: format!("{}", parts.beta_sq),
            })?;
            alphas.push(parts.alpha);
            betas.push(beta);
            units.push(parts.unit);
        }
        let mut acc = Multivector::zero(m)?;
        for (k, poly) in self.stem.components() {
            let value = poly.evaluate(&alphas, &betas)?;
            if value.is_zero() {
                continue;
            }
            let mut term = value;
            // multiply the units ascending, leftmost first: J_{k₁}(J_{k₂}(…))
            for h in mask_elements(k).collect::<Vec<_>>().into_iter().rev() {
                let unit = units[(h - 1) as usize]
                    .as_ref()
                    .ok_or(Error::EvaluationAtPole { h })?;
                term = unit.clifford_product(&term)?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Spherical x_h-value: keeps the components with h ∉ K.
    pub fn spherical_value(&self, h: u32) -> Result<Self> {
        self.check_var(h)?;
        let bit = 1 << (h - 1);
        let mut stem = StemPolynomial::zero(self.m(), self.n())?;
        for (k, poly) in self.stem.components() {
            if k & bit == 0 {
                stem.set_component(k, poly.clone())?;
            }
        }
        Ok(SliceFunction {
            stem,
            laurent: self.laurent,
        })
    }

    /// Spherical x_h-derivative: F_{K∪{h}} ↦ β_h⁻¹F_{K∪{h}} placed in slot
    /// K, components with h ∉ K dropped.
    pub fn spherical_derivative(&self, h: u32) -> Result<Self> {
        self.check_var(h)?;
        let bit = 1 << (h - 1);
        let mut stem = StemPolynomial::zero(self.m(), self.n())?;
        for (k, poly) in self.stem.components() {
            if k & bit != 0 {
                stem.set_component(k & !bit, poly.divide_beta(h, 1)?)?;
            }
        }
        SliceFunction::new_laurent(stem)
    }

    /// Iterated spherical value f^∘_{s,H} over all h ∈ H.
    pub fn spherical_value_set(&self, h_mask: u32) -> Result<Self> {
        let mut out = self.clone();
        for h in mask_elements(h_mask) {
            out = out.spherical_value(h)?;
        }
        Ok(out)
    }

    /// Iterated spherical derivative f'_{s,H}, composed ascending by index.
    pub fn spherical_derivative_set(&self, h_mask: u32) -> Result<Self> {
        let mut out = self.clone();
        for h in mask_elements(h_mask) {
            out = out.spherical_derivative(h)?;
        }
        Ok(out)
    }

    /// Truncated spherical derivative 𝒟^h_H = (f'_{s,H})^∘_{s,{1..h}∖H}
    /// for H ⊆ {1..h}.
    pub fn truncated_derivative(&self, h: u32, h_set: u32) -> Result<Self> {
        self.check_var(h)?;
        let prefix: u32 = (1 << h) - 1;
        if h_set & !prefix != 0 {
            return Err(Error::SubsetNotContained {
                sub: format_subset(h_set),
                sup: format_subset(prefix),
            });
        }
        self.spherical_derivative_set(h_set)?
            .spherical_value_set(prefix & !h_set)
    }

    /// Slice with respect to the variables in H: every nonzero component
    /// has K ∩ H = ∅, or K ∩ H = {h} with h = min K.
    pub fn is_slice_wrt(&self, h_mask: u32) -> bool {
        self.stem.support().into_iter().all(|k| {
            let meet = k & h_mask;
            if meet == 0 {
                return true;
            }
            meet.count_ones() == 1 && meet == k & k.wrapping_neg()
        })
    }

    /// Circular with respect to H: no nonzero component meets H.
    pub fn is_circular_wrt(&self, h_mask: u32) -> bool {
        self.stem.support().into_iter().all(|k| k & h_mask == 0)
    }

    /// Slice regular: the stem is holomorphic in every variable.
    pub fn is_slice_regular(&self) -> Result<bool> {
        for h in 1..=self.n() {
            if !self.stem.holomorphy_check(h)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Slice preserving: every stem coefficient is a real scalar.
    pub fn is_slice_preserving(&self) -> bool {
        self.stem
            .components()
            .all(|(_, poly)| poly.terms().all(|(_, c)| c.is_real()))
    }

    /// Representation formula in one variable: from the values of f on the
    /// slices of J and K, reconstructs f at x = α + Iβ as
    /// (I−K)(J−K)⁻¹ f(α+Jβ) − (I−J)(J−K)⁻¹ f(α+Kβ).
    pub fn representation_eval(
        &self,
        j: &Multivector<S>,
        k: &Multivector<S>,
        x: &Multivector<S>,
    ) -> Result<Multivector<S>> {
        if self.n() != 1 {
            return Err(Error::NotOneVariable { n: self.n() });
        }
        let parts = x.paravector_parts()?;
        let beta = parts.beta.ok_or_else(|| Error::IrrationalBeta {
            beta_sq: format!("{}", parts.beta_sq),
        })?;
        let m = self.m();
        if beta.is_zero() {
            return self.evaluate(&Point::new(vec![x.clone()])?);
        }
        let i_unit = parts.unit.expect("nonzero beta has a unit");
        let alpha = Multivector::scalar(m, parts.alpha)?;
        let at = |unit: &Multivector<S>| -> Result<Multivector<S>> {
            let coord = alpha.add(&unit.scale(&beta))?;
            self.evaluate(&Point::new(vec![coord])?)
        };
        let f_j = at(j)?;
        let f_k = at(k)?;
        let jk_inv = j.sub(k)?.vector_inverse()?;
        let left = i_unit.sub(k)?.clifford_product(&jk_inv)?.clifford_product(&f_j)?;
        let right = i_unit.sub(j)?.clifford_product(&jk_inv)?.clifford_product(&f_k)?;
        left.sub(&right)
    }

    /// One-variable characterization of slice regularity: f is holomorphic
    /// in the first variable and every truncated derivative 𝒟^h_K(f),
    /// K ⊆ {1..h}, is holomorphic in variable h+1.
    pub fn one_var_regularity_check(&self) -> Result<bool> {
        if !self.stem.holomorphy_check(1)? {
            return Ok(false);
        }
        for h in 1..self.n() {
            let prefix: u32 = (1 << h) - 1;
            let mut k_mask = 0u32;
            loop {
                let d = self.truncated_derivative(h, k_mask)?;
                if !d.stem.holomorphy_check(h + 1)? {
                    return Ok(false);
                }
                if k_mask == prefix {
                    break;
                }
                k_mask = k_mask.wrapping_sub(prefix) & prefix;
            }
        }
        Ok(true)
    }

    /// The slice function Im(x_h) with the single component F_{h} = β_h.
    pub fn imaginary_part_of_variable(m: u32, n: u32, h: u32) -> Result<Self> {
        let x = StemPolynomial::<S>::variable(m, n, h)?;
        let mut stem = StemPolynomial::zero(m, n)?;
        let bit = 1 << (h - 1);
        stem.set_component(bit, x.component(bit))?;
        Self::new(stem)
    }

    fn check_var(&self, h: u32) -> Result<()> {
        if h == 0 || h > self.n() {
            return Err(Error::VariableOutOfRange { h, n: self.n() });
        }
        Ok(())
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> SliceFunction<T> {
        SliceFunction {
            stem: self.stem.map_scalars(f),
            laurent: self.laurent,
        }
    }

    pub fn to_f64(&self) -> SliceFunction<f64> {
        self.map_scalars(|c| c.to_f64())
    }
}

impl<S: Scalar> fmt::Display for SliceFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.stem)
    }
}

impl<S: Scalar> fmt::Debug for SliceFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SliceFunction(m={}, n={})\n{}", self.m(), self.n(), self.stem)
    }
}
