//! Laplace and Dirac operators on slice functions.
//!
//! The Laplacian of R^(m+1) restricted to a slice function acts per
//! variable on the stem: on a component F_K it is
//! ∂²_{α_h} + ∂²_{β_h} + (m−1)β_h⁻¹∂_{β_h}, with the extra zero-order term
//! −(m−1)β_h⁻² when h ∈ K. Iterating it on spherical derivatives of
//! holomorphic stems admits closed forms built from the coefficient family
//! a_j^(k) = (2k−j−1)!/((j−1)!(k−j)!(−2)^(k−j)).

use crate::clifford::{gamma, Multivector};
use crate::error::{Error, Result};
use crate::scalar::{Rat, Scalar};
use crate::slice::SliceFunction;
use crate::stem::{LaurentPoly, StemPolynomial};
use num_bigint::BigInt;
use num_traits::One;
use std::fmt;

fn factorial(k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=k as u64 {
        acc *= i;
    }
    acc
}

/// The triangular family a_j^(k), 1 ≤ j ≤ k, of exact rationals.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    max_k: u32,
    rows: Vec<Vec<Rat>>,
}

impl CoefficientTable {
    /// Builds the table from the factorial formula
    /// a_j^(k) = (2k−j−1)!/((j−1)!(k−j)!(−2)^(k−j)).
    pub fn new(max_k: u32) -> Self {
        let mut rows = Vec::with_capacity(max_k as usize);
        for k in 1..=max_k {
            let mut row = Vec::with_capacity(k as usize);
            for j in 1..=k {
                let numer = factorial(2 * k - j - 1);
                let mut denom = factorial(j - 1) * factorial(k - j);
                denom *= BigInt::from(2).pow(k - j);
                let mut value = Rat::new(numer, denom);
                if (k - j) % 2 == 1 {
                    value = -value;
                }
                row.push(value);
            }
            rows.push(row);
        }
        CoefficientTable { max_k, rows }
    }

    pub fn max_k(&self) -> u32 {
        self.max_k
    }

    /// a_j^(k); zero outside 1 ≤ j ≤ k.
    pub fn get(&self, k: u32, j: u32) -> Rat {
        if j == 0 || k == 0 || j > k || k > self.max_k {
            return <Rat as Scalar>::zero();
        }
        self.rows[(k - 1) as usize][(j - 1) as usize].clone()
    }

    /// Summation recursion a_{j+1}^(k+1) = Σ_{l=j}^k (−1)^(l−j) (l!/j!) a_l^(k).
    pub fn verify_recursion(&self) -> bool {
        for k in 1..self.max_k {
            for j in 1..=k {
                let mut sum = <Rat as Scalar>::zero();
                for l in j..=k {
                    let ratio = Rat::from_integer(factorial(l) / factorial(j));
                    let term = ratio * self.get(k, l);
                    if (l - j) % 2 == 1 {
                        sum -= term;
                    } else {
                        sum += term;
                    }
                }
                if self.get(k + 1, j + 1) != sum {
                    return false;
                }
            }
        }
        true
    }

    /// Stepping identity a_j^(k+1) = a_{j−1}^(k) + (j−2k)a_j^(k).
    pub fn verify_stepping(&self) -> bool {
        for k in 1..self.max_k {
            for j in 1..=k + 1 {
                let prev = self.get(k, j.wrapping_sub(1));
                let step = Rat::from_integer(BigInt::from(j as i64 - 2 * k as i64));
                let expect = prev + step * self.get(k, j);
                if self.get(k + 1, j) != expect {
                    return false;
                }
            }
        }
        true
    }

    /// CSV rows `k,j,p/q`, ascending (k, j), with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,j,value\n");
        for k in 1..=self.max_k {
            for j in 1..=k {
                out.push_str(&format!("{k},{j},{}\n", crate::scalar::rat_to_str(&self.get(k, j))));
            }
        }
        out
    }
}

impl fmt::Display for CoefficientTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 1..=self.max_k {
            write!(f, "k={k}:")?;
            for j in 1..=k {
                write!(f, " a_{j}={}", self.get(k, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Π_{i=1}^k (m − 2i − 1); the empty product (k = 0) is 1. The factor at
/// i = γ_m is m − 2γ_m − 1 = 0, so the product vanishes for every k ≥ γ_m.
pub fn telescoping_prefactor(m: u32, k: u32) -> Rat {
    let mut acc = <Rat as Scalar>::one();
    for i in 1..=k as i64 {
        acc *= Rat::from_integer(BigInt::from(m as i64 - 2 * i - 1));
    }
    acc
}

/// Per-variable Laplacian Δ_{m+1,h} of any slice function, acting on the
/// stem componentwise; the β-divisions are exact under the parity
/// invariant.
pub fn laplacian<S: Scalar>(f: &SliceFunction<S>, h: u32) -> Result<SliceFunction<S>> {
    let m = f.m();
    let n = f.n();
    if h == 0 || h > n {
        return Err(Error::VariableOutOfRange { h, n });
    }
    let m_minus_1 = S::from_int(m as i64 - 1);
    let bit = 1 << (h - 1);
    let mut out = StemPolynomial::zero(m, n)?;
    for (k, poly) in f.stem().components() {
        let mut acc = poly.partial_alpha(h)?.partial_alpha(h)?;
        acc = acc.add(&poly.partial_beta(h)?.partial_beta(h)?)?;
        acc = acc.add(&poly.partial_beta(h)?.divide_beta(h, 1)?.scale(&m_minus_1))?;
        if k & bit != 0 {
            acc = acc.sub(&poly.divide_beta(h, 2)?.scale(&m_minus_1))?;
        }
        out.set_component(k, acc)?;
    }
    SliceFunction::new_laurent(out)
}

/// k-fold application of `laplacian` in the same variable.
pub fn laplacian_power<S: Scalar>(
    f: &SliceFunction<S>,
    h: u32,
    k: u32,
) -> Result<SliceFunction<S>> {
    let mut out = f.clone();
    for _ in 0..k {
        out = laplacian(&out, h)?;
    }
    Ok(out)
}

/// Slice partial derivative ∂f/∂x_h = ℐ(∂_h F).
pub fn slice_derivative<S: Scalar>(f: &SliceFunction<S>, h: u32) -> Result<SliceFunction<S>> {
    SliceFunction::new_laurent(f.stem().wirtinger(h)?)
}

/// Which closed form to evaluate for Δ^k f'_{s,h}.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClosedFormVariant {
    /// Σ_{j=1}^k a_j^(k) β_h^{j−2k} ∂^j_{β_h} applied to f'_{s,h}.
    DerivativeWeights,
    /// Σ_{j=1}^{k+1} a_j^(k+1) β_h^{j−2k−2} ∂^{j−1}_{β_h} applied to the
    /// raw odd components F_{K∪{h}} placed in slot K.
    ComponentWeights,
}

impl ClosedFormVariant {
    pub fn from_index(v: u32) -> Result<Self> {
        match v {
            1 => Ok(ClosedFormVariant::DerivativeWeights),
            2 => Ok(ClosedFormVariant::ComponentWeights),
            _ => Err(Error::Parse {
                pos: 0,
                msg: format!("closed-form variant must be 1 or 2, got {v}"),
            }),
        }
    }
}

fn beta_derivative_power<S: Scalar>(
    stem: &StemPolynomial<S>,
    h: u32,
    order: u32,
) -> Result<StemPolynomial<S>> {
    let mut out = stem.clone();
    for _ in 0..order {
        out = out.partial_beta(h)?;
    }
    Ok(out)
}

/// Closed form for Δ^k_{m+1,h} f'_{s,h} with the telescoping prefactor
/// (m−3)(m−5)…(m−2k−1). Requires the stem to be holomorphic in variable h.
pub fn iterated_laplacian_closed_form<S: Scalar>(
    f: &SliceFunction<S>,
    h: u32,
    k: u32,
    variant: ClosedFormVariant,
) -> Result<SliceFunction<S>> {
    if k < 1 {
        return Err(Error::IterationOrder { k });
    }
    if !f.stem().holomorphy_check(h)? {
        return Err(Error::HolomorphyRequired { h });
    }
    let m = f.m();
    let n = f.n();
    let table = CoefficientTable::new(k + 1);
    let prefactor = telescoping_prefactor(m, k);
    let mut sum = StemPolynomial::zero(m, n)?;
    match variant {
        ClosedFormVariant::DerivativeWeights => {
            let base = f.spherical_derivative(h)?.into_stem();
            for j in 1..=k {
                let weight = S::from_rat(&table.get(k, j));
                let term = beta_derivative_power(&base, h, j)?
                    .divide_beta(h, (2 * k - j) as i32)?
                    .scale(&weight);
                sum = sum.add(&term)?;
            }
        }
        ClosedFormVariant::ComponentWeights => {
            // slot K receives the undivided component F_{K∪{h}}
            let bit = 1 << (h - 1);
            let mut base = StemPolynomial::zero(m, n)?;
            for (mask, poly) in f.stem().components() {
                if mask & bit != 0 {
                    base.set_component(mask & !bit, poly.clone())?;
                }
            }
            for j in 1..=k + 1 {
                let weight = S::from_rat(&table.get(k + 1, j));
                let term = beta_derivative_power(&base, h, j - 1)?
                    .divide_beta(h, (2 * k + 2 - j) as i32)?
                    .scale(&weight);
                sum = sum.add(&term)?;
            }
        }
    }
    SliceFunction::new_laurent(sum.scale(&S::from_rat(&prefactor)))
}

/// Closed form for Δ^{k+1}_{m+1,h} f when f is holomorphic in variable h:
/// −2(m−1)·(m−3)…(m−2k−1)·∂/∂x_h [Σ_j a_j^(k) β_h^{j−2k} ∂^j_{β_h} f'_{s,h}],
/// where the k = 0 case reduces to Δf = −2(m−1) ∂(f'_{s,h})/∂x_h.
pub fn iterated_laplacian_sliceregular<S: Scalar>(
    f: &SliceFunction<S>,
    h: u32,
    k: u32,
) -> Result<SliceFunction<S>> {
    if !f.stem().holomorphy_check(h)? {
        return Err(Error::HolomorphyRequired { h });
    }
    let m = f.m();
    let n = f.n();
    let base = f.spherical_derivative(h)?.into_stem();
    let weighted = if k == 0 {
        base
    } else {
        let table = CoefficientTable::new(k);
        let mut sum = StemPolynomial::zero(m, n)?;
        for j in 1..=k {
            let weight = S::from_rat(&table.get(k, j));
            let term = beta_derivative_power(&base, h, j)?
                .divide_beta(h, (2 * k - j) as i32)?
                .scale(&weight);
            sum = sum.add(&term)?;
        }
        sum
    };
    let outer = weighted.wirtinger(h)?;
    let scale = Rat::from_integer(BigInt::from(-2 * (m as i64 - 1))) * telescoping_prefactor(m, k);
    SliceFunction::new_laurent(outer.scale(&S::from_rat(&scale)))
}

/// Symbolic Dirac operator ∂̄ = ½(∂_{x₀} + Σᵢ eᵢ∂_{xᵢ}) acting in the first
/// variable. On the stem pair (A, B) = (F_K, F_{K∪{1}}) it reads
/// ∂̄(A + J₁B) = ½[(∂_{α₁}A − ∂_{β₁}B − (m−1)β₁⁻¹B) + J₁(∂_{β₁}A + ∂_{α₁}B)],
/// valid for every slice function because the ordered products keep J₁
/// leftmost.
pub fn dirac_symbolic_var1<S: Scalar>(f: &SliceFunction<S>) -> Result<SliceFunction<S>> {
    dirac_var1_impl(f, false)
}

/// Conjugate Dirac operator ∂ = ½(∂_{x₀} − Σᵢ eᵢ∂_{xᵢ}) in the first
/// variable: ∂(A + J₁B) = ½[(∂_{α₁}A + ∂_{β₁}B + (m−1)β₁⁻¹B) + J₁(∂_{α₁}B − ∂_{β₁}A)].
pub fn dirac_conjugate_var1<S: Scalar>(f: &SliceFunction<S>) -> Result<SliceFunction<S>> {
    dirac_var1_impl(f, true)
}

fn dirac_var1_impl<S: Scalar>(f: &SliceFunction<S>, conjugate: bool) -> Result<SliceFunction<S>> {
    let m = f.m();
    let n = f.n();
    if n == 0 {
        return Err(Error::VariableOutOfRange { h: 1, n });
    }
    let half = S::from_ratio(1, 2);
    let m_minus_1 = S::from_int(m as i64 - 1);
    let mut bases: Vec<u32> = f.stem().support().iter().map(|k| k & !1).collect();
    bases.dedup();
    let mut out = StemPolynomial::zero(m, n)?;
    for base in bases {
        let a = f.stem().component(base);
        let b = f.stem().component(base | 1);
        let radial = b.divide_beta(1, 1)?.scale(&m_minus_1);
        let (even, odd) = if conjugate {
            (
                a.partial_alpha(1)?.add(&b.partial_beta(1)?)?.add(&radial)?,
                b.partial_alpha(1)?.sub(&a.partial_beta(1)?)?,
            )
        } else {
            (
                a.partial_alpha(1)?.sub(&b.partial_beta(1)?)?.sub(&radial)?,
                a.partial_beta(1)?.add(&b.partial_alpha(1)?)?,
            )
        };
        out.add_to_component(base, &even.scale(&half))?;
        out.add_to_component(base | 1, &odd.scale(&half))?;
    }
    SliceFunction::new_laurent(out)
}

/// Dirac derivative in variable h via the spherical identity
/// ∂̄_{x_h} f = ((1−m)/2) f'_{s,h}, valid when f is slice with respect to
/// x_h and holomorphic in variable h.
pub fn dirac_via_spherical<S: Scalar>(f: &SliceFunction<S>, h: u32) -> Result<SliceFunction<S>> {
    if !f.is_slice_wrt(1 << (h - 1)) {
        return Err(Error::SlicenessRequired { h });
    }
    if !f.stem().holomorphy_check(h)? {
        return Err(Error::SliceRegularityRequired { h });
    }
    let m = f.m();
    Ok(f
        .spherical_derivative(h)?
        .scale(&S::from_ratio(1 - m as i64, 2)))
}

/// Least k ≤ k_max with Δ^k_{m+1,h} f = 0 as an exact stem; None when the
/// bound is exhausted first.
pub fn polyharmonic_degree<S: Scalar>(
    f: &SliceFunction<S>,
    h: u32,
    k_max: u32,
) -> Result<Option<u32>> {
    if k_max < 1 {
        return Err(Error::IterationOrder { k: k_max });
    }
    let mut current = f.clone();
    for k in 1..=k_max {
        current = laplacian(&current, h)?;
        if current.is_zero() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Axially symmetric profile F(a, b) with Clifford coefficients; the slot
/// pair (a, b) plays (α₁, β₁) with no parity constraint, so non-slice axial
/// functions are representable.
#[derive(Clone, PartialEq)]
pub struct AxialProfile<S: Scalar> {
    poly: LaurentPoly<S>,
}

impl<S: Scalar> AxialProfile<S> {
    pub fn new(poly: LaurentPoly<S>) -> Result<Self> {
        if poly.n() != 1 {
            return Err(Error::NotOneVariable { n: poly.n() });
        }
        Ok(AxialProfile { poly })
    }

    pub fn from_terms<I>(m: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i32>, Multivector<S>)>,
    {
        Ok(AxialProfile {
            poly: LaurentPoly::from_terms(m, 1, terms)?,
        })
    }

    pub fn m(&self) -> u32 {
        self.poly.m()
    }

    pub fn poly(&self) -> &LaurentPoly<S> {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(AxialProfile {
            poly: self.poly.add(&other.poly)?,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(AxialProfile {
            poly: self.poly.sub(&other.poly)?,
        })
    }

    pub fn scale(&self, s: &S) -> Self {
        AxialProfile {
            poly: self.poly.scale(s),
        }
    }

    /// Planar Laplacian ∂²_a + ∂²_b.
    pub fn planar_laplacian(&self) -> Result<Self> {
        let daa = self.poly.partial_alpha(1)?.partial_alpha(1)?;
        let dbb = self.poly.partial_beta(1)?.partial_beta(1)?;
        Ok(AxialProfile {
            poly: daa.add(&dbb)?,
        })
    }

    pub fn is_planar_harmonic(&self) -> Result<bool> {
        Ok(self.planar_laplacian()?.is_zero())
    }

    /// Whether the profile could sit in the scalar slot of a stem: all
    /// b-exponents even and nonnegative.
    pub fn is_valid_stem_component(&self) -> bool {
        self.poly.beta_parity_ok(1, 0) && self.poly.is_polynomial()
    }

    /// Places the profile in the F_∅ slot of an n = 1 stem candidate.
    pub fn as_stem_candidate(&self) -> Result<StemPolynomial<S>> {
        let mut stem = StemPolynomial::zero(self.m(), 1)?;
        stem.set_component(0, self.poly.clone())?;
        Ok(stem)
    }
}

impl<S: Scalar> fmt::Display for AxialProfile<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl<S: Scalar> fmt::Debug for AxialProfile<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AxialProfile(m={}, {})", self.m(), self.poly)
    }
}

/// Laplacian of R^(m+1) on axially symmetric profiles:
/// ∂²_a + ∂²_b + (m−1)b⁻¹∂_b.
pub fn axial_laplacian<S: Scalar>(p: &AxialProfile<S>) -> Result<AxialProfile<S>> {
    let m = p.m();
    let planar = p.planar_laplacian()?;
    let radial = p
        .poly()
        .partial_beta(1)?
        .divide_beta(1, 1)?
        .scale(&S::from_int(m as i64 - 1));
    Ok(AxialProfile {
        poly: planar.poly.add(&radial)?,
    })
}

pub fn axial_laplacian_power<S: Scalar>(p: &AxialProfile<S>, k: u32) -> Result<AxialProfile<S>> {
    let mut out = p.clone();
    for _ in 0..k {
        out = axial_laplacian(&out)?;
    }
    Ok(out)
}

/// Certificate produced by `construct_polyharmonic`.
#[derive(Clone, Debug)]
pub struct PolyharmonicConstruction<S: Scalar> {
    /// b⁻¹·F, possibly a genuine Laurent profile.
    pub profile: AxialProfile<S>,
    /// Whether the b-division left negative exponents.
    pub laurent: bool,
    /// Δ^{γ_m} profile (must be zero).
    pub gamma_power: AxialProfile<S>,
    /// For each k in 1..=γ_m, whether the iterated Laplacian matches the
    /// closed form (m−3)…(m−2k−1)·Σ_{j=1}^{k+1} a_j^(k+1) b^{j−2k−2} ∂_b^{j−1} F.
    pub closed_form_match: Vec<(u32, bool)>,
}

/// Builds the polyharmonic profile b⁻¹·F from a planar-harmonic F and
/// certifies Δ^{γ_m}(b⁻¹F) = 0 together with the closed form for every
/// 1 ≤ k ≤ γ_m.
pub fn construct_polyharmonic<S: Scalar>(
    f: &AxialProfile<S>,
) -> Result<PolyharmonicConstruction<S>> {
    if !f.is_planar_harmonic()? {
        return Err(Error::NotHarmonic { h: 1 });
    }
    let m = f.m();
    let g = gamma(m);
    let profile = AxialProfile {
        poly: f.poly.divide_beta(1, 1)?,
    };
    let laurent = !profile.poly.is_polynomial();
    let mut closed_form_match = Vec::new();
    for k in 1..=g {
        let iterated = axial_laplacian_power(&profile, k)?;
        let closed = axial_closed_form(f, k)?;
        closed_form_match.push((k, iterated == closed));
    }
    let gamma_power = axial_laplacian_power(&profile, g)?;
    Ok(PolyharmonicConstruction {
        profile,
        laurent,
        gamma_power,
        closed_form_match,
    })
}

/// (m−3)…(m−2k−1)·Σ_{j=1}^{k+1} a_j^(k+1) b^{j−2k−2} ∂_b^{j−1} F, the
/// closed form for Δ^k(b⁻¹F) when F is planar harmonic.
pub fn axial_closed_form<S: Scalar>(f: &AxialProfile<S>, k: u32) -> Result<AxialProfile<S>> {
    if k < 1 {
        return Err(Error::IterationOrder { k });
    }
    let m = f.m();
    let table = CoefficientTable::new(k + 1);
    let mut sum = LaurentPoly::zero(m, 1)?;
    let mut derivative = f.poly.clone();
    for j in 1..=k + 1 {
        // derivative currently holds ∂_b^{j−1} F
        let weight = S::from_rat(&table.get(k + 1, j));
        let term = derivative
            .divide_beta(1, (2 * k + 2 - j) as i32)?
            .scale(&weight);
        sum = sum.add(&term)?;
        derivative = derivative.partial_beta(1)?;
    }
    Ok(AxialProfile {
        poly: sum.scale(&S::from_rat(&telescoping_prefactor(m, k))),
    })
}

/// Whitney-type square-root substitution: for P odd in β_h with
/// nonnegative exponents, returns G with β_h·G(…, β_h², …) = P, realized by
/// the exponent map j ↦ (j−1)/2 on the β_h slot.
pub fn whitney_factor<S: Scalar>(p: &LaurentPoly<S>, h: u32) -> Result<LaurentPoly<S>> {
    p.map_terms(|mono, c| {
        let j = mono.beta_exp(h);
        if j < 0 {
            return Err(Error::LaurentStem);
        }
        if j % 2 == 0 {
            return Err(Error::NotOddInB);
        }
        Ok((mono.with_beta(h, (j - 1) / 2), c.clone()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;
    use crate::slice::Point;

    fn rat(p: i64, q: i64) -> Rat {
        <Rat as Scalar>::from_ratio(p, q)
    }

    fn sc(m: u32, p: i64, q: i64) -> Multivector<Rat> {
        Multivector::scalar(m, rat(p, q)).unwrap()
    }

    #[test]
    fn coefficient_values_and_identities() {
        let table = CoefficientTable::new(12);
        assert_eq!(table.get(1, 1), rat(1, 1));
        assert_eq!(table.get(2, 1), rat(-1, 1));
        assert_eq!(table.get(2, 2), rat(1, 1));
        assert_eq!(table.get(3, 2), rat(-3, 1));
        assert_eq!(table.get(4, 4), rat(1, 1));
        assert!(table.verify_recursion());
        assert!(table.verify_stepping());
    }

    #[test]
    fn coefficient_csv_format() {
        let table = CoefficientTable::new(2);
        assert_eq!(table.to_csv(), "k,j,value\n1,1,1/1\n2,1,-1/1\n2,2,1/1\n");
    }

    #[test]
    fn laplacian_of_fourth_power() {
        let m = 5;
        let f = SliceFunction::<Rat>::monomial(m, &[4], sc(m, 1, 1)).unwrap();
        let lf = laplacian(&f, 1).unwrap();
        // Δ₆(x⁴) = −16(3α² − β²) − 16·2αβ in the J slot
        let expected_empty = LaurentPoly::from_terms(
            m,
            1,
            [
                (vec![2, 0], sc(m, -48, 1)),
                (vec![0, 2], sc(m, 16, 1)),
            ],
        )
        .unwrap();
        let expected_one =
            LaurentPoly::from_terms(m, 1, [(vec![1, 1], sc(m, -32, 1))]).unwrap();
        assert_eq!(lf.stem().component(0), expected_empty);
        assert_eq!(lf.stem().component(1), expected_one);
        assert!(!lf.is_laurent());

        // Δ₆²(x⁴) = 64
        let llf = laplacian(&lf, 1).unwrap();
        assert_eq!(
            llf.stem(),
            SliceFunction::constant(m, 1, sc(m, 64, 1)).unwrap().stem()
        );

        // constants are annihilated
        let c = SliceFunction::constant(m, 1, sc(m, 9, 7)).unwrap();
        assert!(laplacian(&c, 1).unwrap().is_zero());
    }

    #[test]
    fn closed_form_matches_iterated_laplacian() {
        let m = 5;
        let f = SliceFunction::<Rat>::monomial(m, &[4], sc(m, 1, 1)).unwrap();
        let fs = f.spherical_derivative(1).unwrap();

        // k = 1: Δ₆ f'_s = −16α via both variants and by direct iteration
        let direct = laplacian(&fs, 1).unwrap();
        let expected =
            LaurentPoly::from_terms(m, 1, [(vec![1, 0], sc(m, -16, 1))]).unwrap();
        assert_eq!(direct.stem().component(0), expected);
        for variant in [
            ClosedFormVariant::DerivativeWeights,
            ClosedFormVariant::ComponentWeights,
        ] {
            let closed = iterated_laplacian_closed_form(&f, 1, 1, variant).unwrap();
            assert_eq!(closed.stem(), direct.stem(), "{variant:?}");
        }

        // k = γ_m = 2: zero by the telescoping prefactor, and the iterated
        // Laplacian of f'_s indeed vanishes
        for variant in [
            ClosedFormVariant::DerivativeWeights,
            ClosedFormVariant::ComponentWeights,
        ] {
            let closed = iterated_laplacian_closed_form(&f, 1, 2, variant).unwrap();
            assert!(closed.is_zero());
        }
        assert!(laplacian_power(&fs, 1, 2).unwrap().is_zero());

        // precondition: holomorphy in the variable
        let mut stem = StemPolynomial::<Rat>::zero(m, 1).unwrap();
        stem.set_component(
            0,
            LaurentPoly::from_terms(m, 1, [(vec![1, 0], sc(m, 1, 1))]).unwrap(),
        )
        .unwrap();
        let bad = SliceFunction::new(stem).unwrap();
        assert!(matches!(
            iterated_laplacian_closed_form(&bad, 1, 1, ClosedFormVariant::DerivativeWeights),
            Err(Error::HolomorphyRequired { h: 1 })
        ));
    }

    #[test]
    fn slice_regular_closed_form() {
        let m = 5;
        let f = SliceFunction::<Rat>::monomial(m, &[4], sc(m, 1, 1)).unwrap();

        // k = 0 gives Δ₆f = −8 ∂(f'_s)/∂x
        let k0 = iterated_laplacian_sliceregular(&f, 1, 0).unwrap();
        assert_eq!(k0.stem(), laplacian(&f, 1).unwrap().stem());

        // k = 1 gives Δ₆²f = 64
        let k1 = iterated_laplacian_sliceregular(&f, 1, 1).unwrap();
        assert_eq!(
            k1.stem(),
            SliceFunction::constant(m, 1, sc(m, 64, 1)).unwrap().stem()
        );

        // k = γ_m: Δ^{γ+1} f = 0 for slice regular polynomials
        let k2 = iterated_laplacian_sliceregular(&f, 1, 2).unwrap();
        assert!(k2.is_zero());
        assert!(laplacian_power(&f, 1, 3).unwrap().is_zero());
    }

    #[test]
    fn closed_forms_in_second_variable() {
        let m = 5;
        let f = SliceFunction::<Rat>::monomial(m, &[4, 7], sc(m, 1, 1)).unwrap();
        for k in 1..=2 {
            let direct = laplacian_power(&f.spherical_derivative(2).unwrap(), 2, k).unwrap();
            for variant in [
                ClosedFormVariant::DerivativeWeights,
                ClosedFormVariant::ComponentWeights,
            ] {
                let closed = iterated_laplacian_closed_form(&f, 2, k, variant).unwrap();
                assert_eq!(closed.stem(), direct.stem());
            }
        }
        for k in 0..=2 {
            let direct = laplacian_power(&f, 2, k + 1).unwrap();
            let closed = iterated_laplacian_sliceregular(&f, 2, k).unwrap();
            assert_eq!(closed.stem(), direct.stem());
        }
    }

    #[test]
    fn slice_derivative_basics_and_commutation() {
        let m = 5;
        let f = SliceFunction::<Rat>::monomial(m, &[3], sc(m, 1, 1)).unwrap();
        let df = slice_derivative(&f, 1).unwrap();
        let expected = SliceFunction::<Rat>::monomial(m, &[2], sc(m, 3, 1)).unwrap();
        assert_eq!(df.stem(), expected.stem());

        let c = SliceFunction::constant(m, 1, sc(m, 4, 3)).unwrap();
        assert!(slice_derivative(&c, 1).unwrap().is_zero());

        // commutation Δ∘∂ = ∂∘Δ on a circular function
        let g = SliceFunction::<Rat>::monomial(m, &[6], sc(m, 1, 1))
            .unwrap()
            .spherical_value(1)
            .unwrap();
        assert!(g.is_circular_wrt(1));
        let lhs = laplacian(&slice_derivative(&g, 1).unwrap(), 1).unwrap();
        let rhs = slice_derivative(&laplacian(&g, 1).unwrap(), 1).unwrap();
        assert_eq!(lhs.stem(), rhs.stem());
    }

    #[test]
    fn dirac_on_low_powers() {
        let m = 5;
        let x = SliceFunction::<Rat>::variable(m, 1, 1).unwrap();
        let dx = dirac_symbolic_var1(&x).unwrap();
        assert_eq!(
            dx.stem(),
            SliceFunction::constant(m, 1, sc(m, -2, 1)).unwrap().stem()
        );

        let x2 = SliceFunction::<Rat>::monomial(m, &[2], sc(m, 1, 1)).unwrap();
        let dx2 = dirac_symbolic_var1(&x2).unwrap();
        // ((1−m)/2)·(x²)'_s = −2·2α = −4α
        let expected =
            LaurentPoly::from_terms(m, 1, [(vec![1, 0], sc(m, -4, 1))]).unwrap();
        assert_eq!(dx2.stem().support(), vec![0]);
        assert_eq!(dx2.stem().component(0), expected);
    }

    #[test]
    fn dirac_spherical_identity_for_regular_functions() {
        let m = 7;
        for exps in [vec![2u32], vec![5], vec![8]] {
            let f = SliceFunction::<Rat>::monomial(m, &exps, sc(m, 1, 1)).unwrap();
            let lhs = dirac_symbolic_var1(&f).unwrap();
            let rhs = f
                .spherical_derivative(1)
                .unwrap()
                .scale(&rat(1 - m as i64, 2));
            assert_eq!(lhs.stem(), rhs.stem());
            let via = dirac_via_spherical(&f, 1).unwrap();
            assert_eq!(via.stem(), rhs.stem());
        }
    }

    #[test]
    fn dirac_circular_branch() {
        let m = 5;
        // circular input: only F_∅ = α₁² − β₁²... take the spherical value
        // of x² so that B = 0
        let f = SliceFunction::<Rat>::monomial(m, &[2], sc(m, 1, 1))
            .unwrap()
            .spherical_value(1)
            .unwrap();
        let df = dirac_symbolic_var1(&f).unwrap();
        // ∂̄f = ½(∂_α F_∅ + J ∂_β F_∅)
        let a = f.stem().component(0);
        let expected_even = a.partial_alpha(1).unwrap().scale(&rat(1, 2));
        let expected_odd = a.partial_beta(1).unwrap().scale(&rat(1, 2));
        assert_eq!(df.stem().component(0), expected_even);
        assert_eq!(df.stem().component(1), expected_odd);
    }

    #[test]
    fn laplacian_factorizes_through_dirac_pair() {
        let m = 5;
        let e13 = Multivector::<Rat>::basis_blade(m, 0b101).unwrap();
        let battery = [
            SliceFunction::<Rat>::monomial(m, &[4], sc(m, 1, 1)).unwrap(),
            SliceFunction::<Rat>::monomial(m, &[3], e13).unwrap(),
            SliceFunction::<Rat>::monomial(m, &[5], sc(m, 2, 3)).unwrap(),
        ];
        for f in &battery {
            let four = rat(4, 1);
            let d1 = dirac_conjugate_var1(&dirac_symbolic_var1(f).unwrap())
                .unwrap()
                .scale(&four);
            let d2 = dirac_symbolic_var1(&dirac_conjugate_var1(f).unwrap())
                .unwrap()
                .scale(&four);
            let lap = laplacian(f, 1).unwrap();
            assert_eq!(d1.stem(), lap.stem());
            assert_eq!(d2.stem(), lap.stem());
        }
    }

    #[test]
    fn polyharmonic_degrees() {
        let m = 5;
        let f = SliceFunction::<Rat>::monomial(m, &[4], sc(m, 1, 1)).unwrap();
        assert_eq!(polyharmonic_degree(&f, 1, 5).unwrap(), Some(3));
        let fs = f.spherical_derivative(1).unwrap();
        assert_eq!(polyharmonic_degree(&fs, 1, 5).unwrap(), Some(2));
        let c = SliceFunction::constant(m, 1, sc(m, 5, 1)).unwrap();
        assert_eq!(polyharmonic_degree(&c, 1, 5).unwrap(), Some(1));
        assert_eq!(polyharmonic_degree(&f, 1, 2).unwrap(), None);
    }

    #[test]
    fn axial_constructor_produces_polyharmonic_non_slice_profile() {
        // F = a⁴ − 6a²b² + b⁴ is planar harmonic
        let build = |m: u32| {
            AxialProfile::from_terms(
                m,
                [
                    (vec![4, 0], sc(m, 1, 1)),
                    (vec![2, 2], sc(m, -6, 1)),
                    (vec![0, 4], sc(m, 1, 1)),
                ],
            )
            .unwrap()
        };

        // m = 5: b⁻¹F is biharmonic but not harmonic; the a⁴b⁻¹ term makes
        // the profile genuinely Laurent
        let f5 = build(5);
        let made = construct_polyharmonic(&f5).unwrap();
        assert!(made.laurent);
        assert!(made.gamma_power.is_zero());
        assert!(!axial_laplacian(&made.profile).unwrap().is_zero());
        assert!(made.closed_form_match.iter().all(|(_, ok)| *ok));
        // the profile is odd in b, so it cannot sit in a stem scalar slot
        assert!(!made.profile.is_valid_stem_component());
        assert!(!made.profile.as_stem_candidate().unwrap().validate());

        // m = 3: the same construction is already harmonic (γ₃ = 1)
        let f3 = build(3);
        let made3 = construct_polyharmonic(&f3).unwrap();
        assert!(made3.gamma_power.is_zero());
        assert!(axial_laplacian(&made3.profile).unwrap().is_zero());
    }

    #[test]
    fn axial_constructor_on_simple_profiles() {
        let m = 5;
        // F = a → profile a/b, Laurent
        let fa = AxialProfile::from_terms(m, [(vec![1, 0], sc(m, 1, 1))]).unwrap();
        let made = construct_polyharmonic(&fa).unwrap();
        assert!(made.laurent);
        assert!(made.gamma_power.is_zero());
        assert!(made.closed_form_match.iter().all(|(_, ok)| *ok));

        // F = 1 → profile b⁻¹ with Δ₆(b⁻¹) = −2b⁻³ = closed form at k = 1
        let f1 = AxialProfile::from_terms(m, [(vec![0, 0], sc(m, 1, 1))]).unwrap();
        let made1 = construct_polyharmonic(&f1).unwrap();
        let once = axial_laplacian(&made1.profile).unwrap();
        let expected =
            AxialProfile::from_terms(m, [(vec![0, -3], sc(m, -2, 1))]).unwrap();
        assert_eq!(once, expected);
        assert_eq!(once, axial_closed_form(&f1, 1).unwrap());
        assert!(made1.gamma_power.is_zero());

        // non-harmonic input is rejected
        let bad = AxialProfile::from_terms(m, [(vec![2, 0], sc(m, 1, 1))]).unwrap();
        assert!(matches!(
            construct_polyharmonic(&bad),
            Err(Error::NotHarmonic { .. })
        ));
    }

    #[test]
    fn whitney_substitution() {
        let m = 5;
        // P = 4a³b − 4ab³ → G = 4a³ − 4ac (c in the b slot)
        let p = LaurentPoly::from_terms(
            m,
            1,
            [
                (vec![3, 1], sc(m, 4, 1)),
                (vec![1, 3], sc(m, -4, 1)),
            ],
        )
        .unwrap();
        let g = whitney_factor(&p, 1).unwrap();
        let expected = LaurentPoly::from_terms(
            m,
            1,
            [
                (vec![3, 0], sc(m, 4, 1)),
                (vec![1, 1], sc(m, -4, 1)),
            ],
        )
        .unwrap();
        assert_eq!(g, expected);

        let b = LaurentPoly::from_terms(m, 1, [(vec![0, 1], sc(m, 1, 1))]).unwrap();
        assert_eq!(whitney_factor(&b, 1).unwrap(), LaurentPoly::one(m, 1).unwrap());

        let b5 = LaurentPoly::from_terms(m, 1, [(vec![0, 5], sc(m, 1, 1))]).unwrap();
        assert_eq!(
            whitney_factor(&b5, 1).unwrap(),
            LaurentPoly::from_terms(m, 1, [(vec![0, 2], sc(m, 1, 1))]).unwrap()
        );

        let even = LaurentPoly::from_terms(m, 1, [(vec![0, 2], sc(m, 1, 1))]).unwrap();
        assert!(matches!(whitney_factor(&even, 1), Err(Error::NotOddInB)));
    }

    #[test]
    fn whitney_cross_check_of_iterated_laplacian() {
        // Δ^k f'_{s,h} = 2^k (m−3)…(m−2k−1) Σ_K [J_K, (∂₂^k G_K)(α, β²)]
        let m = 5;
        let f = SliceFunction::<Rat>::monomial(m, &[4], sc(m, 1, 1)).unwrap();
        let fs = f.spherical_derivative(1).unwrap();
        // x = 2 + 3e₁ + 4e₂: α = 2, β = 5, so G is read at (2, 25)
        let point = Point::new(vec![Multivector::from_terms(
            m,
            [(0, rat(2, 1)), (0b001, rat(3, 1)), (0b010, rat(4, 1))],
        )
        .unwrap()])
        .unwrap();
        for k in 1..=2u32 {
            let lhs = laplacian_power(&fs, 1, k).unwrap().evaluate(&point).unwrap();
            // G from the odd components of f's stem
            let mut rhs = Multivector::zero(m).unwrap();
            for (mask, poly) in f.stem().components() {
                if mask & 1 == 0 {
                    continue;
                }
                assert_eq!(mask, 1, "n = 1 stems have only the {{1}} odd slot");
                let mut g = whitney_factor(poly, 1).unwrap();
                for _ in 0..k {
                    g = g.partial_beta(1).unwrap();
                }
                let value = g.evaluate(&[rat(2, 1)], &[rat(25, 1)]).unwrap();
                rhs = rhs.add(&value).unwrap();
            }
            let scale = rat(2, 1).powi(k as i64) * telescoping_prefactor(m, k);
            rhs = rhs.scale(&scale);
            assert_eq!(lhs, rhs, "k = {k}");
        }
    }
}
