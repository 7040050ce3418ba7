//! Decompositions of polyharmonic and slice functions.
//!
//! Three families live here, together with exact certificates for each:
//!
//! * the classical Almansi decomposition `f = h₀ + |x_g|²h₁ + … +
//!   |x_g|^{2(p−1)}h_{p−1}` of a function polyharmonic of degree `p` in one
//!   paravector variable, plus the Gauss closed form for homogeneous
//!   one-variable polynomials;
//! * the slice decomposition `f = Σ_{K⊆H} (−1)^{|H∖K|} x̄_{H∖K} ⊙ 𝒮ᴴ_K(f)`
//!   into circular spherical components, its uniqueness check, the ordered
//!   vanishing of components for functions slice in a late variable, and the
//!   simultaneous refinement that further splits every `𝒮ᴴ_K` into
//!   harmonic pieces with radial weights;
//! * the monogenic map `f ↦ Δ^{γ_m}_{m+1,h} f` on slice regular functions,
//!   certified symbolically through the polyharmonicity of the spherical
//!   derivative and numerically through finite-difference Dirac residuals,
//!   and a checker for writing spherical components as iterated Dirac
//!   derivatives.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::clifford::{gamma, Multivector};
use crate::error::{Error, Result};
use crate::harmonic::{dirac_symbolic_var1, dirac_via_spherical, laplacian, laplacian_power};
use crate::oracle::{fd_dirac, point_to_f64, sample_points, Residual, StencilConfig};
use crate::scalar::{Rat, Scalar};
use crate::slice::SliceFunction;
use crate::stem::{format_subset, mask_elements, LaurentPoly, Monomial, StemPolynomial};

/// All subsets of `mask`, ascending as integers.
pub fn submasks(mask: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut s = 0u32;
    loop {
        out.push(s);
        if s == mask {
            break;
        }
        s = s.wrapping_sub(mask) & mask;
    }
    out
}

fn check_mask<S: Scalar>(f: &SliceFunction<S>, h_mask: u32) -> Result<()> {
    if h_mask >> f.n() != 0 {
        let h = 32 - h_mask.leading_zeros();
        return Err(Error::VariableOutOfRange { h, n: f.n() });
    }
    Ok(())
}

fn require_polynomial<S: Scalar>(f: &SliceFunction<S>) -> Result<()> {
    for (_, poly) in f.stem().components() {
        for (mono, _) in poly.terms() {
            for h in 1..=f.n() {
                if mono.alpha_exp(h) < 0 || mono.beta_exp(h) < 0 {
                    return Err(Error::LaurentStem);
                }
            }
        }
    }
    Ok(())
}

/// The circular polynomial |x_g|² = α_g² + β_g² as a slice function.
pub fn norm_squared<S: Scalar>(m: u32, n: u32, g: u32) -> Result<SliceFunction<S>> {
    if g == 0 || g > n {
        return Err(Error::VariableOutOfRange { h: g, n });
    }
    let one = Multivector::scalar(m, S::one())?;
    let mut alpha2 = vec![0i32; 2 * n as usize];
    alpha2[2 * (g as usize - 1)] = 2;
    let mut beta2 = vec![0i32; 2 * n as usize];
    beta2[2 * (g as usize - 1) + 1] = 2;
    let mut poly = LaurentPoly::zero(m, n)?;
    poly.add_term(Monomial(alpha2), one.clone())?;
    poly.add_term(Monomial(beta2), one)?;
    let mut stem = StemPolynomial::zero(m, n)?;
    stem.set_component(0, poly)?;
    SliceFunction::new(stem)
}

/// |x_g|^{2j}.
pub fn norm_squared_power<S: Scalar>(m: u32, n: u32, g: u32, j: u32) -> Result<SliceFunction<S>> {
    let base = norm_squared(m, n, g)?;
    let mut out = SliceFunction::constant(m, n, Multivector::scalar(m, S::one())?)?;
    for _ in 0..j {
        out = out.slice_product(&base)?;
    }
    Ok(out)
}

/// Ordered slice product x̄_{h₁} ⊙ ⋯ ⊙ x̄_{h_r} over h ∈ mask ascending;
/// the empty product is the constant 1.
pub fn conjugate_variable_product<S: Scalar>(
    m: u32,
    n: u32,
    mask: u32,
) -> Result<SliceFunction<S>> {
    let mut out = SliceFunction::constant(m, n, Multivector::scalar(m, S::one())?)?;
    for h in mask_elements(mask) {
        let xb = SliceFunction::new(StemPolynomial::variable_conjugate(m, n, h)?)?;
        out = out.slice_product(&xb)?;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Classical Almansi decomposition in one paravector variable.
// ---------------------------------------------------------------------------

/// f = h₀ + |x_g|²h₁ + … + |x_g|^{2(p−1)}h_{p−1} with every component in
/// ker Δ_{m+1,g}.
#[derive(Clone)]
pub struct ClassicalAlmansi<S: Scalar> {
    pub variable: u32,
    pub components: Vec<SliceFunction<S>>,
}

impl<S: Scalar> ClassicalAlmansi<S> {
    pub fn depth(&self) -> u32 {
        self.components.len() as u32
    }

    pub fn reconstruct(&self) -> Result<SliceFunction<S>> {
        let (m, n) = (self.components[0].m(), self.components[0].n());
        let mut acc = SliceFunction::zero(m, n)?;
        for (j, h_j) in self.components.iter().enumerate() {
            let weight = norm_squared_power(m, n, self.variable, j as u32)?;
            acc = acc.add(&weight.slice_product(h_j)?)?;
        }
        Ok(acc)
    }
}

/// Divides each monomial by 2j(2j + m − 1 + 2d), where d is the monomial's
/// (α_g, β_g)-degree: the factor produced by one Laplacian on |x_g|^{2j}
/// times a monomial harmonic in x_g.
fn invert_radial_factor<S: Scalar>(
    f: &SliceFunction<S>,
    g: u32,
    j: u32,
) -> Result<SliceFunction<S>> {
    let m = f.m() as i64;
    let mut out = StemPolynomial::zero(f.m(), f.n())?;
    for (k, poly) in f.stem().components() {
        let scaled = poly.map_terms(|mono, coeff| {
            let d = (mono.alpha_exp(g) + mono.beta_exp(g)) as i64;
            let den = 2 * j as i64 * (2 * j as i64 + m - 1 + 2 * d);
            Ok((mono.clone(), coeff.scale(&S::from_ratio(1, den))))
        })?;
        out.set_component(k, scaled)?;
    }
    SliceFunction::new_laurent(out)
}

fn build_classical<S: Scalar>(
    f: &SliceFunction<S>,
    g: u32,
    p: u32,
) -> Result<Vec<SliceFunction<S>>> {
    if p == 1 {
        return Ok(vec![f.clone()]);
    }
    let lower = build_classical(&laplacian(f, g)?, g, p - 1)?;
    let mut comps = vec![SliceFunction::zero(f.m(), f.n())?; p as usize];
    let mut h0 = f.clone();
    for (i, low) in lower.iter().enumerate() {
        let j = (i + 1) as u32;
        let h_j = invert_radial_factor(low, g, j)?;
        let weight = norm_squared_power(f.m(), f.n(), g, j)?;
        h0 = h0.sub(&weight.slice_product(&h_j)?)?;
        comps[j as usize] = h_j;
    }
    comps[0] = h0;
    Ok(comps)
}

/// Classical Almansi decomposition of an exactly p-polyharmonic function in
/// the paravector variable x_g. The result is verified: every component is
/// harmonic and the weighted sum reproduces f.
pub fn classical_almansi<S: Scalar>(
    f: &SliceFunction<S>,
    g: u32,
    p: u32,
) -> Result<ClassicalAlmansi<S>> {
    if g == 0 || g > f.n() {
        return Err(Error::VariableOutOfRange { h: g, n: f.n() });
    }
    if p == 0 {
        return Err(Error::IterationOrder { k: 0 });
    }
    let max = gamma(f.m()) + 1;
    if p > max {
        return Err(Error::DepthExceeded { p, max });
    }
    require_polynomial(f)?;
    if !laplacian_power(f, g, p)?.is_zero() {
        return Err(Error::NotPolyharmonic { h: g, p });
    }
    let components = build_classical(f, g, p)?;
    for h_j in &components {
        if !laplacian(h_j, g)?.is_zero() {
            return Err(Error::NotHarmonic { h: g });
        }
    }
    let out = ClassicalAlmansi {
        variable: g,
        components,
    };
    if !out.reconstruct()?.sub(f)?.is_zero() {
        return Err(Error::ReconstructionFailed);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Gauss canonical form for homogeneous one-variable polynomials.
// ---------------------------------------------------------------------------

/// v!! with the convention (−1)!! = 0!! = 1; arguments below −1 are
/// rejected.
pub fn double_factorial(v: i64) -> Result<Rat> {
    if v < -1 {
        return Err(Error::DoubleFactorialRange(v));
    }
    let mut acc = BigInt::from(1);
    let mut k = v;
    while k >= 2 {
        acc *= k;
        k -= 2;
    }
    Ok(Rat::from_integer(acc))
}

/// f = Σ_k |x|^{2k} h_k for a degree-N homogeneous polynomial in one
/// paravector variable, components listed k = 0..=⌊N/2⌋.
#[derive(Clone)]
pub struct GaussCanonical<S: Scalar> {
    pub homogeneity: u32,
    pub components: Vec<SliceFunction<S>>,
}

impl<S: Scalar> GaussCanonical<S> {
    pub fn reconstruct(&self) -> Result<SliceFunction<S>> {
        let (m, n) = (self.components[0].m(), self.components[0].n());
        let mut acc = SliceFunction::zero(m, n)?;
        for (k, h_k) in self.components.iter().enumerate() {
            let weight = norm_squared_power(m, n, 1, k as u32)?;
            acc = acc.add(&weight.slice_product(h_k)?)?;
        }
        Ok(acc)
    }
}

/// Closed-form harmonic components of a homogeneous polynomial:
/// h_k = A_k Σ_j B_{k,j} |x|^{2j} Δ^{j+k} f with double-factorial
/// coefficients; verified against the same certificates as the recursive
/// decomposition.
pub fn gauss_canonical<S: Scalar>(f: &SliceFunction<S>) -> Result<GaussCanonical<S>> {
    if f.n() != 1 {
        return Err(Error::NotOneVariable { n: f.n() });
    }
    require_polynomial(f)?;
    let mut degree: Option<i64> = None;
    for (_, poly) in f.stem().components() {
        for (mono, _) in poly.terms() {
            let d = (mono.alpha_exp(1) + mono.beta_exp(1)) as i64;
            match degree {
                None => degree = Some(d),
                Some(seen) if seen == d => {}
                Some(seen) => return Err(Error::NotHomogeneous { a: seen, b: d }),
            }
        }
    }
    let nn = degree.unwrap_or(0);
    let m = f.m() as i64;
    let half_n = (nn / 2) as u32;
    let mut components = Vec::new();
    for k in 0..=half_n {
        let kk = k as i64;
        let a_k = double_factorial(m + 2 * nn - 4 * kk - 1)?
            / (double_factorial(2 * kk)? * double_factorial(m + 2 * nn - 2 * kk - 1)?);
        let mut acc = SliceFunction::zero(f.m(), 1)?;
        for j in 0..=(half_n - k) {
            let jj = j as i64;
            let mut b_kj = double_factorial(m + 2 * nn - 4 * kk - 2 * jj - 3)?
                / (double_factorial(2 * jj)? * double_factorial(m + 2 * nn - 4 * kk - 3)?);
            if j % 2 == 1 {
                b_kj = -b_kj;
            }
            let term = norm_squared_power(f.m(), 1, 1, j)?
                .slice_product(&laplacian_power(f, 1, j + k)?)?
                .scale(&S::from_rat(&b_kj));
            acc = acc.add(&term)?;
        }
        components.push(acc.scale(&S::from_rat(&a_k)));
    }
    for h_k in &components {
        if !laplacian(h_k, 1)?.is_zero() {
            return Err(Error::NotHarmonic { h: 1 });
        }
    }
    let out = GaussCanonical {
        homogeneity: nn as u32,
        components,
    };
    if !out.reconstruct()?.sub(f)?.is_zero() {
        return Err(Error::ReconstructionFailed);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Slice decomposition into spherical components.
// ---------------------------------------------------------------------------

/// Spherical component 𝒮ᴴ_K(f) = (x_{k₁} ⊙ ⋯ ⊙ x_{k_r} ⊙ f)'_{s,H} for
/// K ⊆ H, factors ascending.
pub fn slice_component<S: Scalar>(
    f: &SliceFunction<S>,
    h_mask: u32,
    k_mask: u32,
) -> Result<SliceFunction<S>> {
    check_mask(f, h_mask)?;
    if k_mask & !h_mask != 0 {
        return Err(Error::SubsetNotContained {
            sub: format_subset(k_mask),
            sup: format_subset(h_mask),
        });
    }
    let mut u = f.clone();
    for h in mask_elements(k_mask).collect::<Vec<_>>().into_iter().rev() {
        u = SliceFunction::variable(f.m(), f.n(), h)?.slice_product(&u)?;
    }
    u.spherical_derivative_set(h_mask)
}

/// Same component computed variable by variable: ascending h ∈ H, multiply
/// by x_h when h ∈ K, then take the spherical derivative in h.
pub fn slice_component_nested<S: Scalar>(
    f: &SliceFunction<S>,
    h_mask: u32,
    k_mask: u32,
) -> Result<SliceFunction<S>> {
    check_mask(f, h_mask)?;
    if k_mask & !h_mask != 0 {
        return Err(Error::SubsetNotContained {
            sub: format_subset(k_mask),
            sup: format_subset(h_mask),
        });
    }
    let mut u = f.clone();
    for h in mask_elements(h_mask) {
        if k_mask & (1 << (h - 1)) != 0 {
            u = SliceFunction::variable(f.m(), f.n(), h)?.slice_product(&u)?;
        }
        u = u.spherical_derivative(h)?;
    }
    Ok(u)
}

/// Σ_{K⊆H} (−1)^{|H∖K|} x̄_{H∖K} ⊙ components[K].
pub fn slice_reconstruct<S: Scalar>(
    m: u32,
    n: u32,
    h_mask: u32,
    components: &BTreeMap<u32, SliceFunction<S>>,
) -> Result<SliceFunction<S>> {
    let mut acc = SliceFunction::zero(m, n)?;
    for (&k, comp) in components {
        let rest = h_mask & !k;
        let term = conjugate_variable_product(m, n, rest)?.slice_product(comp)?;
        let signed = if rest.count_ones() % 2 == 1 {
            term.neg()
        } else {
            term
        };
        acc = acc.add(&signed)?;
    }
    Ok(acc)
}

/// Slice decomposition over the variable set H with its certificates.
#[derive(Clone)]
pub struct SliceAlmansi<S: Scalar> {
    pub h_set: u32,
    pub components: BTreeMap<u32, SliceFunction<S>>,
    /// For slice regular inputs: every component is in
    /// ker Δ^{γ_m}_{m+1,h} for every h ∈ H.
    pub polyharmonic: Option<bool>,
    /// When H = {1..j} with j < n and the input is slice regular: the
    /// components are holomorphic in variable j+1.
    pub next_variable_regular: Option<(u32, bool)>,
}

/// Decomposes f over H and verifies the reconstruction exactly.
pub fn slice_almansi<S: Scalar>(f: &SliceFunction<S>, h_mask: u32) -> Result<SliceAlmansi<S>> {
    check_mask(f, h_mask)?;
    let mut components = BTreeMap::new();
    for k in submasks(h_mask) {
        components.insert(k, slice_component(f, h_mask, k)?);
    }
    let rec = slice_reconstruct(f.m(), f.n(), h_mask, &components)?;
    if !rec.sub(f)?.is_zero() {
        return Err(Error::ReconstructionFailed);
    }
    let regular = f.is_slice_regular()?;
    let polyharmonic = if regular {
        let power = gamma(f.m());
        let mut all = true;
        'ph: for comp in components.values() {
            for h in mask_elements(h_mask) {
                if !laplacian_power(comp, h, power)?.is_zero() {
                    all = false;
                    break 'ph;
                }
            }
        }
        Some(all)
    } else {
        None
    };
    let j = h_mask.count_ones();
    let next_variable_regular = if regular && h_mask != 0 && h_mask == (1u32 << j) - 1 && j < f.n()
    {
        let p = j + 1;
        let mut all = true;
        for comp in components.values() {
            if !comp.stem().holomorphy_check(p)? {
                all = false;
                break;
            }
        }
        Some((p, all))
    } else {
        None
    };
    Ok(SliceAlmansi {
        h_set: h_mask,
        components,
        polyharmonic,
        next_variable_regular,
    })
}

/// What a candidate family over H satisfies; circular + reconstructs forces
/// equality with the spherical components.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UniquenessOutcome {
    pub circular: bool,
    pub reconstructs: bool,
    pub matches_canonical: bool,
}

/// Tests a candidate family g_K, K ⊆ H, against the uniqueness
/// characterization: components circular with respect to H whose signed
/// conjugate-weighted sum gives back f must be the spherical components.
pub fn slice_uniqueness_check<S: Scalar>(
    f: &SliceFunction<S>,
    h_mask: u32,
    candidates: &BTreeMap<u32, SliceFunction<S>>,
) -> Result<UniquenessOutcome> {
    check_mask(f, h_mask)?;
    let circular = candidates
        .values()
        .all(|g| g.is_circular_wrt(h_mask));
    let reconstructs = slice_reconstruct(f.m(), f.n(), h_mask, candidates)?
        .sub(f)?
        .is_zero();
    let mut matches_canonical = candidates.keys().copied().collect::<Vec<_>>() == submasks(h_mask);
    if matches_canonical {
        for (&k, cand) in candidates {
            if !slice_component(f, h_mask, k)?.sub(cand)?.is_zero() {
                matches_canonical = false;
                break;
            }
        }
    }
    Ok(UniquenessOutcome {
        circular,
        reconstructs,
        matches_canonical,
    })
}

/// For f slice with respect to x_h: every component 𝒮^{⟦h⟧}_K(f) with
/// K ⊆ {1..h−1}, K ≠ {1..h−1}, vanishes, so the reconstruction needs only
/// the subsets containing h plus K = {1..h−1}.
pub fn ordered_vanishing_check<S: Scalar>(f: &SliceFunction<S>, h: u32) -> Result<bool> {
    if h == 0 || h > f.n() {
        return Err(Error::VariableOutOfRange { h, n: f.n() });
    }
    if !f.is_slice_wrt(1 << (h - 1)) {
        return Err(Error::SlicenessRequired { h });
    }
    let full: u32 = (1 << h) - 1;
    let prefix: u32 = (1 << (h - 1)) - 1;
    for k in submasks(prefix) {
        if k == prefix {
            continue;
        }
        if !slice_component(f, full, k)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Simultaneous decomposition: spherical components refined into harmonic
// pieces with radial weights.
// ---------------------------------------------------------------------------

/// f = Σ_{K⊆H} Σ_T (−1)^{|H∖K|} x̄_{H∖K} ⊙ |x_G|^{2T} ⊙ ℰ_{K,T}, every
/// ℰ_{K,T} harmonic in each g ∈ G; T runs over {0..γ_m−1}^{|G|} with
/// |x_G|^{2T} = Π_g |x_g|^{2t_g}.
#[derive(Clone)]
pub struct SimultaneousAlmansi<S: Scalar> {
    pub m: u32,
    pub n: u32,
    pub h_set: u32,
    pub g_set: u32,
    pub depth: u32,
    pub components: BTreeMap<(u32, Vec<u32>), SliceFunction<S>>,
    /// Every ℰ_{K,T} is in ker Δ_{m+1,g} for every g ∈ G.
    pub harmonic_certified: bool,
}

impl<S: Scalar> SimultaneousAlmansi<S> {
    /// Π_g |x_g|^{2t_g} over g ∈ G ascending, paired with t.
    pub fn radial_weight(&self, t: &[u32]) -> Result<SliceFunction<S>> {
        let mut w =
            SliceFunction::constant(self.m, self.n, Multivector::scalar(self.m, S::one())?)?;
        for (g, &tg) in mask_elements(self.g_set).zip(t) {
            w = w.slice_product(&norm_squared_power(self.m, self.n, g, tg)?)?;
        }
        Ok(w)
    }

    pub fn reconstruct(&self) -> Result<SliceFunction<S>> {
        let mut acc = SliceFunction::zero(self.m, self.n)?;
        for ((k, t), e) in &self.components {
            let rest = self.h_set & !k;
            let term = conjugate_variable_product(self.m, self.n, rest)?
                .slice_product(&self.radial_weight(t)?)?
                .slice_product(e)?;
            let signed = if rest.count_ones() % 2 == 1 {
                term.neg()
            } else {
                term
            };
            acc = acc.add(&signed)?;
        }
        Ok(acc)
    }

    /// The distinct radial multi-indices, ascending.
    pub fn t_indices(&self) -> Vec<Vec<u32>> {
        let mut v: Vec<Vec<u32>> = self.components.keys().map(|(_, t)| t.clone()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// 𝒢_T = Σ_{K⊆H} (−1)^{|H∖K|} x̄_{H∖K} ⊙ ℰ_{K,T}.
    pub fn regroup(&self, t: &[u32]) -> Result<SliceFunction<S>> {
        let mut acc = SliceFunction::zero(self.m, self.n)?;
        for ((k, tt), e) in &self.components {
            if tt.as_slice() != t {
                continue;
            }
            let rest = self.h_set & !k;
            let term = conjugate_variable_product(self.m, self.n, rest)?.slice_product(e)?;
            let signed = if rest.count_ones() % 2 == 1 {
                term.neg()
            } else {
                term
            };
            acc = acc.add(&signed)?;
        }
        Ok(acc)
    }
}

/// Builds the simultaneous decomposition of a slice regular function over
/// H with classical refinement in the variables of G ⊆ H. Verified:
/// componentwise harmonicity in G and the exact reconstruction of f.
pub fn simultaneous_almansi<S: Scalar>(
    f: &SliceFunction<S>,
    h_mask: u32,
    g_mask: u32,
) -> Result<SimultaneousAlmansi<S>> {
    check_mask(f, h_mask)?;
    if g_mask & !h_mask != 0 {
        return Err(Error::SubsetNotContained {
            sub: format_subset(g_mask),
            sup: format_subset(h_mask),
        });
    }
    for h in 1..=f.n() {
        if !f.stem().holomorphy_check(h)? {
            return Err(Error::SliceRegularityRequired { h });
        }
    }
    let depth = gamma(f.m());
    let gs: Vec<u32> = mask_elements(g_mask).collect();
    let mut components = BTreeMap::new();
    for k in submasks(h_mask) {
        let s_k = slice_component(f, h_mask, k)?;
        let mut table: Vec<(Vec<u32>, SliceFunction<S>)> = vec![(Vec::new(), s_k)];
        for &g in &gs {
            let mut next = Vec::new();
            for (t, u) in table {
                for (tg, piece) in classical_almansi(&u, g, depth)?
                    .components
                    .into_iter()
                    .enumerate()
                {
                    let mut t2 = t.clone();
                    t2.push(tg as u32);
                    next.push((t2, piece));
                }
            }
            table = next;
        }
        for (t, e) in table {
            components.insert((k, t), e);
        }
    }
    let mut harmonic = true;
    'hc: for e in components.values() {
        for &g in &gs {
            if !laplacian(e, g)?.is_zero() {
                harmonic = false;
                break 'hc;
            }
        }
    }
    let out = SimultaneousAlmansi {
        m: f.m(),
        n: f.n(),
        h_set: h_mask,
        g_set: g_mask,
        depth,
        components,
        harmonic_certified: harmonic,
    };
    if !out.reconstruct()?.sub(f)?.is_zero() {
        return Err(Error::ReconstructionFailed);
    }
    Ok(out)
}

/// The regrouped family 𝒢_T with its certificates: biharmonic in every
/// g ∈ G and f = Σ_T |x_G|^{2T} ⊙ 𝒢_T exactly.
#[derive(Clone)]
pub struct Regrouped<S: Scalar> {
    pub g_set: u32,
    pub components: BTreeMap<Vec<u32>, SliceFunction<S>>,
    pub biharmonic_in_g: bool,
}

pub fn regroup_all<S: Scalar>(
    f: &SliceFunction<S>,
    sim: &SimultaneousAlmansi<S>,
) -> Result<Regrouped<S>> {
    let mut components = BTreeMap::new();
    for t in sim.t_indices() {
        let g_t = sim.regroup(&t)?;
        components.insert(t, g_t);
    }
    let mut biharmonic = true;
    'bh: for g_t in components.values() {
        for g in mask_elements(sim.g_set) {
            if !laplacian_power(g_t, g, 2)?.is_zero() {
                biharmonic = false;
                break 'bh;
            }
        }
    }
    let mut acc = SliceFunction::zero(sim.m, sim.n)?;
    for (t, g_t) in &components {
        acc = acc.add(&sim.radial_weight(t)?.slice_product(g_t)?)?;
    }
    if !acc.sub(f)?.is_zero() {
        return Err(Error::ReconstructionFailed);
    }
    Ok(Regrouped {
        g_set: sim.g_set,
        components,
        biharmonic_in_g: biharmonic,
    })
}

// ---------------------------------------------------------------------------
// The monogenic map f ↦ Δ^{γ_m}_{m+1,h} f on slice regular functions.
// ---------------------------------------------------------------------------

/// Certificates for the image g = Δ^{γ_m}_{m+1,h} f of a slice regular
/// function. Symbolically, ∂̄_{x_h} g = Δ^{γ_m}(∂̄_{x_h} f) =
/// ((1−m)/2)·Δ^{γ_m}(f'_{s,h}), so the exact content is the
/// polyharmonicity of the spherical derivative; for h = 1 the Dirac
/// derivative of the image is also computed directly. Numerically, a
/// finite-difference Dirac stencil is evaluated at random sample points.
pub struct FueterSceCertificate<S: Scalar> {
    pub variable: u32,
    pub power: u32,
    pub image: SliceFunction<S>,
    pub image_is_slice: bool,
    /// Δ^{γ_m}_{m+1,h}(f'_{s,h}) = 0 exactly.
    pub spherical_polyharmonic: bool,
    /// ∂̄_{x_1}(image) = 0 exactly; only computed for h = 1.
    pub dirac_exact_zero: Option<bool>,
    pub dirac_residuals: Vec<Residual>,
    pub tolerance: f64,
}

impl<S: Scalar> FueterSceCertificate<S> {
    pub fn symbolic_ok(&self) -> bool {
        self.image_is_slice && self.spherical_polyharmonic && self.dirac_exact_zero.unwrap_or(true)
    }

    pub fn numeric_ok(&self) -> bool {
        self.dirac_residuals.iter().all(|r| r.within(self.tolerance))
    }

    pub fn ok(&self) -> bool {
        self.symbolic_ok() && self.numeric_ok()
    }
}

/// Applies Δ^{γ_m}_{m+1,h} to a function slice and holomorphic in variable
/// h and certifies that the image is in the kernel of ∂̄_{x_h}.
pub fn fueter_sce<S: Scalar>(
    f: &SliceFunction<S>,
    h: u32,
    cfg: &StencilConfig,
) -> Result<FueterSceCertificate<S>> {
    if h == 0 || h > f.n() {
        return Err(Error::VariableOutOfRange { h, n: f.n() });
    }
    if !f.is_slice_wrt(1 << (h - 1)) {
        return Err(Error::SlicenessRequired { h });
    }
    if !f.stem().holomorphy_check(h)? {
        return Err(Error::SliceRegularityRequired { h });
    }
    let power = gamma(f.m());
    let image = laplacian_power(f, h, power)?;
    let spherical_polyharmonic =
        laplacian_power(&f.spherical_derivative(h)?, h, power)?.is_zero();
    let image_is_slice = image.is_slice_wrt(1 << (h - 1));
    let dirac_exact_zero = if h == 1 {
        Some(dirac_symbolic_var1(&image)?.is_zero())
    } else {
        None
    };
    let image64 = image.to_f64();
    let zero = Multivector::<f64>::zero(f.m())?;
    let mut dirac_residuals = Vec::new();
    for pt in sample_points(f.n(), f.m(), cfg)? {
        let stencil = fd_dirac(&image64, h, &point_to_f64(&pt), cfg)?;
        dirac_residuals.push(stencil.residual_against(&zero)?);
    }
    Ok(FueterSceCertificate {
        variable: h,
        power,
        image,
        image_is_slice,
        spherical_polyharmonic,
        dirac_exact_zero,
        dirac_residuals,
        tolerance: cfg.tolerance,
    })
}

// ---------------------------------------------------------------------------
// Spherical components as iterated Dirac derivatives.
// ---------------------------------------------------------------------------

/// Result of comparing 𝒮^{⟦n⟧}_K(f) against the iterated Dirac chain
/// D_K(f) = ∂̄_{x_n}(x_n^{χ_K(n)} ⋯ ∂̄_{x_1}(x_1^{χ_K(1)} f)⋯) under both
/// normalizations c^{±n}, c = (1−m)/2.
#[derive(Clone, Copy, Debug)]
pub struct CrfComponentCheck {
    pub k_mask: u32,
    /// 𝒮_K = c^{−n} D_K.
    pub matches_negative: bool,
    /// 𝒮_K = c^{n} D_K.
    pub matches_positive: bool,
    /// Worst finite-difference residual over all Dirac steps and sample
    /// points.
    pub max_residual: f64,
}

pub struct CrfReport {
    pub checks: Vec<CrfComponentCheck>,
    pub tolerance: f64,
}

impl CrfReport {
    pub fn negative_convention(&self) -> bool {
        self.checks.iter().all(|c| c.matches_negative)
    }

    pub fn positive_convention(&self) -> bool {
        self.checks.iter().all(|c| c.matches_positive)
    }

    pub fn numeric_ok(&self) -> bool {
        self.checks.iter().all(|c| c.max_residual <= self.tolerance)
    }
}

/// Computes every iterated Dirac chain of a slice regular function, checks
/// each symbolic Dirac step against the finite-difference oracle, and
/// reports which scaling convention matches the spherical components.
pub fn crf_component_check<S: Scalar>(
    f: &SliceFunction<S>,
    cfg: &StencilConfig,
) -> Result<CrfReport> {
    for h in 1..=f.n() {
        if !f.stem().holomorphy_check(h)? {
            return Err(Error::SliceRegularityRequired { h });
        }
    }
    let (m, n) = (f.m(), f.n());
    let full: u32 = (1 << n) - 1;
    let c = S::from_ratio(1 - m as i64, 2);
    let c_pow_n = c.powi(n as i64);
    let points: Vec<_> = sample_points(n, m, cfg)?.iter().map(point_to_f64).collect();
    let mut checks = Vec::new();
    for k_mask in submasks(full) {
        let mut u = f.clone();
        let mut max_residual = 0.0f64;
        for h in 1..=n {
            if k_mask & (1 << (h - 1)) != 0 {
                u = SliceFunction::variable(m, n, h)?.slice_product(&u)?;
            }
            let before = u.to_f64();
            u = if h == 1 {
                dirac_symbolic_var1(&u)?
            } else {
                dirac_via_spherical(&u, h)?
            };
            let exact = u.to_f64();
            for pt in &points {
                let stencil = fd_dirac(&before, h, pt, cfg)?;
                let r = stencil.residual_against(&exact.evaluate(pt)?)?;
                if r.relative > max_residual {
                    max_residual = r.relative;
                }
            }
        }
        let s_k = slice_component(f, full, k_mask)?;
        let matches_negative = u.sub(&s_k.scale(&c_pow_n))?.is_zero();
        let matches_positive = s_k.sub(&u.scale(&c_pow_n))?.is_zero();
        checks.push(CrfComponentCheck {
            k_mask,
            matches_negative,
            matches_positive,
            max_residual,
        });
    }
    Ok(CrfReport {
        checks,
        tolerance: cfg.tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::dirac_conjugate_var1;

    fn rat(num: i64, den: i64) -> Rat {
        <Rat as Scalar>::from_ratio(num, den)
    }

    fn sc(m: u32, num: i64, den: i64) -> Multivector<Rat> {
        Multivector::scalar(m, rat(num, den)).unwrap()
    }

    fn x_pow(m: u32, exps: &[u32]) -> SliceFunction<Rat> {
        SliceFunction::monomial(m, exps, sc(m, 1, 1)).unwrap()
    }

    type TermSpec = (&'static [i32], i64, i64);

    fn poly(m: u32, n: u32, terms: &[TermSpec]) -> LaurentPoly<Rat> {
        let mut p = LaurentPoly::zero(m, n).unwrap();
        for (exps, num, den) in terms {
            p.add_term(Monomial(exps.to_vec()), sc(m, *num, *den)).unwrap();
        }
        p
    }

    fn func(m: u32, n: u32, comps: &[(u32, &[TermSpec])]) -> SliceFunction<Rat> {
        let mut stem = StemPolynomial::zero(m, n).unwrap();
        for (k, terms) in comps {
            stem.set_component(*k, poly(m, n, terms)).unwrap();
        }
        SliceFunction::new_laurent(stem).unwrap()
    }

    fn assert_same(a: &SliceFunction<Rat>, b: &SliceFunction<Rat>) {
        assert!(a.sub(b).unwrap().is_zero(), "functions differ");
    }

    #[test]
    fn submask_enumeration_is_ascending_and_complete() {
        assert_eq!(submasks(0), vec![0]);
        assert_eq!(submasks(0b101), vec![0, 0b001, 0b100, 0b101]);
        assert_eq!(submasks(0b11).len(), 4);
    }

    #[test]
    fn norm_squared_power_basics() {
        let one: SliceFunction<Rat> = norm_squared_power(5, 1, 1, 0).unwrap();
        assert_same(
            &one,
            &SliceFunction::constant(5, 1, sc(5, 1, 1)).unwrap(),
        );
        let r2: SliceFunction<Rat> = norm_squared_power(5, 2, 2, 1).unwrap();
        let expected = func(5, 2, &[(0, &[(&[0, 0, 2, 0], 1, 1), (&[0, 0, 0, 2], 1, 1)])]);
        assert_same(&r2, &expected);
    }

    #[test]
    fn classical_decomposition_of_fourth_power_depth_three() {
        let f = x_pow(5, &[4]);
        let ca = classical_almansi(&f, 1, 3).unwrap();
        assert_eq!(ca.depth(), 3);
        let h2 = func(5, 1, &[(0, &[(&[0, 0], 1, 6)])]);
        let h1 = func(
            5,
            1,
            &[
                (0, &[(&[2, 0], -8, 3), (&[0, 2], 8, 15)]),
                (1, &[(&[1, 1], -8, 5)]),
            ],
        );
        let h0 = func(
            5,
            1,
            &[
                (0, &[(&[4, 0], 7, 2), (&[2, 2], -21, 5), (&[0, 4], 3, 10)]),
                (1, &[(&[3, 1], 28, 5), (&[1, 3], -12, 5)]),
            ],
        );
        assert_same(&ca.components[2], &h2);
        assert_same(&ca.components[1], &h1);
        assert_same(&ca.components[0], &h0);
        assert_same(&ca.reconstruct().unwrap(), &f);
    }

    #[test]
    fn classical_decomposition_of_first_laplacian_depth_two() {
        let f = x_pow(5, &[4]);
        let df = laplacian(&f, 1).unwrap();
        let expected_df = func(
            5,
            1,
            &[
                (0, &[(&[2, 0], -48, 1), (&[0, 2], 16, 1)]),
                (1, &[(&[1, 1], -32, 1)]),
            ],
        );
        assert_same(&df, &expected_df);
        let ca = classical_almansi(&df, 1, 2).unwrap();
        let h1 = func(5, 1, &[(0, &[(&[0, 0], 16, 3)])]);
        let h0 = func(
            5,
            1,
            &[
                (0, &[(&[2, 0], -160, 3), (&[0, 2], 32, 3)]),
                (1, &[(&[1, 1], -32, 1)]),
            ],
        );
        assert_same(&ca.components[1], &h1);
        assert_same(&ca.components[0], &h0);
    }

    #[test]
    fn classical_depth_one_returns_harmonic_input() {
        let f = x_pow(5, &[1]);
        let ca = classical_almansi(&f, 1, 1).unwrap();
        assert_eq!(ca.depth(), 1);
        assert_same(&ca.components[0], &f);
    }

    #[test]
    fn classical_rejects_bad_inputs() {
        let f = x_pow(5, &[4]);
        assert!(matches!(
            classical_almansi(&f, 1, 0),
            Err(Error::IterationOrder { k: 0 })
        ));
        assert!(matches!(
            classical_almansi(&f, 1, 4),
            Err(Error::DepthExceeded { p: 4, max: 3 })
        ));
        assert!(matches!(
            classical_almansi(&f, 1, 2),
            Err(Error::NotPolyharmonic { h: 1, p: 2 })
        ));
        assert!(matches!(
            classical_almansi(&f, 2, 3),
            Err(Error::VariableOutOfRange { h: 2, n: 1 })
        ));
    }

    #[test]
    fn gauss_form_matches_classical_on_powers() {
        for k in [2u32, 3, 4] {
            let f = x_pow(5, &[k]);
            let gc = gauss_canonical(&f).unwrap();
            let ca = classical_almansi(&f, 1, gamma(5) + 1).unwrap();
            assert_eq!(gc.homogeneity, k);
            for (i, h_k) in gc.components.iter().enumerate() {
                assert_same(h_k, &ca.components[i]);
            }
            for extra in gc.components.len()..ca.components.len() {
                assert!(ca.components[extra].is_zero());
            }
            assert_same(&gc.reconstruct().unwrap(), &f);
        }
    }

    #[test]
    fn gauss_form_of_constant_is_itself() {
        let f = SliceFunction::constant(5, 1, sc(5, 3, 2)).unwrap();
        let gc = gauss_canonical(&f).unwrap();
        assert_eq!(gc.homogeneity, 0);
        assert_eq!(gc.components.len(), 1);
        assert_same(&gc.components[0], &f);
    }

    #[test]
    fn gauss_form_rejects_inhomogeneous_input() {
        let f = x_pow(5, &[2]).add(&x_pow(5, &[1])).unwrap();
        assert!(matches!(
            gauss_canonical(&f),
            Err(Error::NotHomogeneous { .. })
        ));
    }

    #[test]
    fn double_factorial_convention() {
        assert_eq!(double_factorial(-1).unwrap(), rat(1, 1));
        assert_eq!(double_factorial(0).unwrap(), rat(1, 1));
        assert_eq!(double_factorial(1).unwrap(), rat(1, 1));
        assert_eq!(double_factorial(5).unwrap(), rat(15, 1));
        assert_eq!(double_factorial(8).unwrap(), rat(384, 1));
        assert!(matches!(
            double_factorial(-2),
            Err(Error::DoubleFactorialRange(-2))
        ));
    }

    /// (x₁⁴)'_{s,1} as an n=2 circular polynomial.
    fn deriv_x1_4() -> SliceFunction<Rat> {
        func(
            5,
            2,
            &[(0, &[(&[3, 0, 0, 0], 4, 1), (&[1, 2, 0, 0], -4, 1)])],
        )
    }

    /// (x₁⁵)'_{s,1}.
    fn deriv_x1_5() -> SliceFunction<Rat> {
        func(
            5,
            2,
            &[(
                0,
                &[
                    (&[4, 0, 0, 0], 5, 1),
                    (&[2, 2, 0, 0], -10, 1),
                    (&[0, 4, 0, 0], 1, 1),
                ],
            )],
        )
    }

    /// (x₂⁷)'_{s,2}.
    fn deriv_x2_7() -> SliceFunction<Rat> {
        func(
            5,
            2,
            &[(
                0,
                &[
                    (&[0, 0, 6, 0], 7, 1),
                    (&[0, 0, 4, 2], -35, 1),
                    (&[0, 0, 2, 4], 21, 1),
                    (&[0, 0, 0, 6], -1, 1),
                ],
            )],
        )
    }

    /// (x₂⁸)'_{s,2}.
    fn deriv_x2_8() -> SliceFunction<Rat> {
        func(
            5,
            2,
            &[(
                0,
                &[
                    (&[0, 0, 7, 0], 8, 1),
                    (&[0, 0, 5, 2], -56, 1),
                    (&[0, 0, 3, 4], 56, 1),
                    (&[0, 0, 1, 6], -8, 1),
                ],
            )],
        )
    }

    #[test]
    fn spherical_components_of_two_variable_monomial() {
        let f = x_pow(5, &[4, 7]);
        let h = 0b11;
        let s_empty = slice_component(&f, h, 0).unwrap();
        let s_1 = slice_component(&f, h, 0b01).unwrap();
        let s_2 = slice_component(&f, h, 0b10).unwrap();
        let s_12 = slice_component(&f, h, 0b11).unwrap();
        assert_same(&s_empty, &deriv_x1_4().slice_product(&deriv_x2_7()).unwrap());
        assert_same(&s_1, &deriv_x1_5().slice_product(&deriv_x2_7()).unwrap());
        assert_same(&s_2, &deriv_x1_4().slice_product(&deriv_x2_8()).unwrap());
        assert_same(&s_12, &deriv_x1_5().slice_product(&deriv_x2_8()).unwrap());
        for k in submasks(h) {
            assert_same(
                &slice_component_nested(&f, h, k).unwrap(),
                &slice_component(&f, h, k).unwrap(),
            );
        }
    }

    #[test]
    fn slice_component_rejects_subset_violations() {
        let f = x_pow(5, &[4, 7]);
        assert!(matches!(
            slice_component(&f, 0b01, 0b10),
            Err(Error::SubsetNotContained { .. })
        ));
        assert!(matches!(
            slice_component(&f, 0b111, 0),
            Err(Error::VariableOutOfRange { h: 3, n: 2 })
        ));
    }

    #[test]
    fn slice_decomposition_certificates_two_variables() {
        let f = x_pow(5, &[4, 7]);
        let dec = slice_almansi(&f, 0b11).unwrap();
        assert_eq!(dec.components.len(), 4);
        assert_eq!(dec.polyharmonic, Some(true));
        assert!(dec.next_variable_regular.is_none());
        let dec1 = slice_almansi(&f, 0b01).unwrap();
        assert_eq!(dec1.polyharmonic, Some(true));
        assert_eq!(dec1.next_variable_regular, Some((2, true)));
    }

    #[test]
    fn one_variable_reconstruction_identity() {
        for k in 1..=8u32 {
            let f = x_pow(5, &[k]);
            let dec = slice_almansi(&f, 1).unwrap();
            let expected_s1 = x_pow(5, &[k + 1]).spherical_derivative(1).unwrap();
            let expected_s0 = f.spherical_derivative(1).unwrap();
            assert_same(&dec.components[&1], &expected_s1);
            assert_same(&dec.components[&0], &expected_s0);
        }
    }

    #[test]
    fn uniqueness_check_accepts_canonical_and_rejects_perturbations() {
        let f = x_pow(5, &[4, 7]);
        let dec = slice_almansi(&f, 0b11).unwrap();
        let outcome = slice_uniqueness_check(&f, 0b11, &dec.components).unwrap();
        assert!(outcome.circular && outcome.reconstructs && outcome.matches_canonical);

        let mut shifted = dec.components.clone();
        let bump = SliceFunction::constant(5, 2, sc(5, 1, 1)).unwrap();
        shifted.insert(0, shifted[&0].add(&bump).unwrap());
        let outcome = slice_uniqueness_check(&f, 0b11, &shifted).unwrap();
        assert!(outcome.circular && !outcome.reconstructs && !outcome.matches_canonical);

        let mut noncircular = dec.components.clone();
        let alpha_beta = func(5, 2, &[(1, &[(&[1, 1, 0, 0], 1, 1)])]);
        noncircular.insert(0, noncircular[&0].add(&alpha_beta).unwrap());
        let outcome = slice_uniqueness_check(&f, 0b11, &noncircular).unwrap();
        assert!(!outcome.circular);
    }

    #[test]
    fn ordered_vanishing_for_late_slice_functions() {
        // x₂⁷ is slice with respect to x₂; all early components vanish.
        let f = x_pow(5, &[0, 7]);
        assert!(ordered_vanishing_check(&f, 2).unwrap());
        // x₁² + x₂³ is slice with respect to x₂ as well.
        let g = x_pow(5, &[2, 0]).add(&x_pow(5, &[0, 3])).unwrap();
        assert!(ordered_vanishing_check(&g, 2).unwrap());
        // x₁⁴x₂⁷ is not slice with respect to x₂: the check refuses it.
        let h = x_pow(5, &[4, 7]);
        assert!(matches!(
            ordered_vanishing_check(&h, 2),
            Err(Error::SlicenessRequired { h: 2 })
        ));
        // Variable 1 imposes no constraints.
        assert!(ordered_vanishing_check(&h, 1).unwrap());
    }

    /// The x₂ polynomials appearing in the refined components of x₁⁴x₂⁷.
    fn q0() -> SliceFunction<Rat> {
        func(
            5,
            2,
            &[(
                0,
                &[
                    (&[0, 0, 6, 0], 12, 1),
                    (&[0, 0, 4, 2], -36, 1),
                    (&[0, 0, 2, 4], 108, 7),
                    (&[0, 0, 0, 6], -4, 7),
                ],
            )],
        )
    }

    fn q1() -> SliceFunction<Rat> {
        func(
            5,
            2,
            &[(
                0,
                &[
                    (&[0, 0, 4, 0], -5, 1),
                    (&[0, 0, 2, 2], 6, 1),
                    (&[0, 0, 0, 4], -3, 7),
                ],
            )],
        )
    }

    fn p0() -> SliceFunction<Rat> {
        func(
            5,
            2,
            &[(
                0,
                &[
                    (&[0, 0, 7, 0], 15, 1),
                    (&[0, 0, 5, 2], -63, 1),
                    (&[0, 0, 3, 4], 45, 1),
                    (&[0, 0, 1, 6], -5, 1),
                ],
            )],
        )
    }

    fn p1() -> SliceFunction<Rat> {
        func(
            5,
            2,
            &[(
                0,
                &[
                    (&[0, 0, 5, 0], -7, 1),
                    (&[0, 0, 3, 2], 14, 1),
                    (&[0, 0, 1, 4], -3, 1),
                ],
            )],
        )
    }

    #[test]
    fn second_variable_laplacian_of_spherical_component() {
        let f = x_pow(5, &[4, 7]);
        let s_empty = slice_component(&f, 0b11, 0).unwrap();
        let expected = deriv_x1_4()
            .slice_product(&func(
                5,
                2,
                &[(
                    0,
                    &[
                        (&[0, 0, 4, 0], -140, 1),
                        (&[0, 0, 2, 2], 168, 1),
                        (&[0, 0, 0, 4], -12, 1),
                    ],
                )],
            ))
            .unwrap();
        assert_same(&laplacian(&s_empty, 2).unwrap(), &expected);
    }

    #[test]
    fn simultaneous_decomposition_of_two_variable_monomial() {
        let f = x_pow(5, &[4, 7]);
        let sim = simultaneous_almansi(&f, 0b11, 0b10).unwrap();
        assert_eq!(sim.depth, 2);
        assert_eq!(sim.components.len(), 8);
        assert!(sim.harmonic_certified);
        let e = |k: u32, t: u32| &sim.components[&(k, vec![t])];
        assert_same(e(0b00, 0), &deriv_x1_4().slice_product(&q0()).unwrap());
        assert_same(e(0b00, 1), &deriv_x1_4().slice_product(&q1()).unwrap());
        assert_same(e(0b01, 0), &deriv_x1_5().slice_product(&q0()).unwrap());
        assert_same(e(0b01, 1), &deriv_x1_5().slice_product(&q1()).unwrap());
        assert_same(e(0b10, 0), &deriv_x1_4().slice_product(&p0()).unwrap());
        assert_same(e(0b10, 1), &deriv_x1_4().slice_product(&p1()).unwrap());
        assert_same(e(0b11, 0), &deriv_x1_5().slice_product(&p0()).unwrap());
        assert_same(e(0b11, 1), &deriv_x1_5().slice_product(&p1()).unwrap());
        assert_same(&sim.reconstruct().unwrap(), &f);
    }

    #[test]
    fn simultaneous_with_empty_refinement_set_is_slice_decomposition() {
        let f = x_pow(5, &[4, 7]);
        let sim = simultaneous_almansi(&f, 0b11, 0).unwrap();
        let dec = slice_almansi(&f, 0b11).unwrap();
        assert_eq!(sim.components.len(), 4);
        for (k, comp) in &dec.components {
            assert_same(&sim.components[&(*k, vec![])], comp);
        }
    }

    #[test]
    fn regrouped_components_and_biharmonicity() {
        let f = x_pow(5, &[4, 7]);
        let sim = simultaneous_almansi(&f, 0b11, 0b10).unwrap();
        let reg = regroup_all(&f, &sim).unwrap();
        assert!(reg.biharmonic_in_g);
        let xbar2: SliceFunction<Rat> = conjugate_variable_product(5, 2, 0b10).unwrap();
        let x14 = x_pow(5, &[4, 0]);
        let g0_expected = x14
            .slice_product(&p0().sub(&xbar2.slice_product(&q0()).unwrap()).unwrap())
            .unwrap();
        let g1_expected = x14
            .slice_product(&p1().sub(&xbar2.slice_product(&q1()).unwrap()).unwrap())
            .unwrap();
        assert_same(&reg.components[&vec![0]], &g0_expected);
        assert_same(&reg.components[&vec![1]], &g1_expected);
        // Reconstruction f = 𝒢₀ + |x₂|²𝒢₁.
        let rebuilt = g0_expected
            .add(
                &norm_squared_power(5, 2, 2, 1)
                    .unwrap()
                    .slice_product(&g1_expected)
                    .unwrap(),
            )
            .unwrap();
        assert_same(&rebuilt, &f);
        // Biharmonicity holds in the refined variable only: in variable 1
        // the fourth power contributes Δ²_{6,1} x₁⁴ = 64, so the regrouped
        // component is not biharmonic there.
        let g0 = &reg.components[&vec![0]];
        let residual = laplacian_power(g0, 1, 2).unwrap();
        let expected_residual = p0()
            .sub(&xbar2.slice_product(&q0()).unwrap())
            .unwrap()
            .scale(&rat(64, 1));
        assert_same(&residual, &expected_residual);
        assert!(!residual.is_zero());
    }

    #[test]
    fn monogenic_map_certificate_in_three_dimensions() {
        let f = x_pow(3, &[4]);
        let cfg = StencilConfig::default();
        let cert = fueter_sce(&f, 1, &cfg).unwrap();
        assert_eq!(cert.power, 1);
        let expected_image = func(
            3,
            1,
            &[
                (0, &[(&[2, 0], -24, 1), (&[0, 2], 8, 1)]),
                (1, &[(&[1, 1], -16, 1)]),
            ],
        );
        assert_same(&cert.image, &expected_image);
        assert!(cert.symbolic_ok());
        assert_eq!(cert.dirac_exact_zero, Some(true));
        assert!(cert.numeric_ok());
        assert!(cert
            .dirac_residuals
            .iter()
            .all(|r| r.relative < 1e-6));
        // The image itself is not holomorphic: its spherical derivative is
        // −16α₁, not zero. The certificate is about the spherical
        // derivative of the input, not of the image.
        let image_sd = cert.image.spherical_derivative(1).unwrap();
        let expected_sd = func(3, 1, &[(0, &[(&[1, 0], -16, 1)])]);
        assert_same(&image_sd, &expected_sd);
        assert!(!image_sd.is_zero());
    }

    #[test]
    fn monogenic_map_in_second_variable() {
        let f = x_pow(5, &[0, 7]);
        let cfg = StencilConfig::default();
        let cert = fueter_sce(&f, 2, &cfg).unwrap();
        assert_eq!(cert.power, 2);
        assert!(cert.symbolic_ok());
        assert!(cert.dirac_exact_zero.is_none());
        assert!(cert.numeric_ok());
    }

    #[test]
    fn monogenic_map_rejects_non_slice_input() {
        let f = x_pow(5, &[4, 7]);
        let cfg = StencilConfig::default();
        assert!(matches!(
            fueter_sce(&f, 2, &cfg),
            Err(Error::SlicenessRequired { h: 2 })
        ));
    }

    #[test]
    fn laplacian_factors_through_conjugate_derivative_of_spherical() {
        // Δ_{m+1,1} f = 2(1−m) ∂_{x_1}(f'_{s,1}) on functions slice and
        // holomorphic in the first variable.
        for f in [x_pow(5, &[4]), x_pow(5, &[6])] {
            let m = f.m() as i64;
            let lhs = laplacian(&f, 1).unwrap();
            let rhs = dirac_conjugate_var1(&f.spherical_derivative(1).unwrap())
                .unwrap()
                .scale(&rat(2 * (1 - m), 1));
            assert_same(&lhs, &rhs);
        }
        let f = x_pow(5, &[4, 7]);
        let lhs = laplacian(&f, 1).unwrap();
        let rhs = dirac_conjugate_var1(&f.spherical_derivative(1).unwrap())
            .unwrap()
            .scale(&rat(-8, 1));
        assert_same(&lhs, &rhs);
    }

    #[test]
    fn iterated_dirac_chains_match_spherical_components() {
        let cfg = StencilConfig::default();
        for f in [x_pow(5, &[2]), x_pow(5, &[4])] {
            let report = crf_component_check(&f, &cfg).unwrap();
            assert!(report.negative_convention());
            assert!(!report.positive_convention());
            assert!(report.numeric_ok());
        }
        let f = x_pow(5, &[2, 3]);
        let report = crf_component_check(&f, &cfg).unwrap();
        assert_eq!(report.checks.len(), 4);
        assert!(report.negative_convention());
        assert!(report.numeric_ok());
        // In three dimensions the scaling is ±1, so both conventions agree.
        let f = x_pow(3, &[3]);
        let report = crf_component_check(&f, &cfg).unwrap();
        assert!(report.negative_convention());
    }
}
