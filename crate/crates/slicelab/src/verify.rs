//! Named verification suites: deterministic batteries of exact identities
//! and finite-difference cross-checks spanning the whole library, reported
//! as structured pass/fail check lists. The CLI `verify` subcommand and the
//! integration tests are thin wrappers around [`run_suite`] / [`run_all`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::almansi::{
    classical_almansi, crf_component_check, fueter_sce, gauss_canonical, ordered_vanishing_check,
    regroup_all, simultaneous_almansi, slice_almansi, slice_reconstruct, slice_uniqueness_check,
};
use crate::battery::{battery, random_multivector, random_regular_function, BatteryConfig};
use crate::clifford::{gamma, Multivector};
use crate::error::{Error, Result};
use crate::harmonic::{
    axial_laplacian, dirac_symbolic_var1, iterated_laplacian_closed_form,
    iterated_laplacian_sliceregular, laplacian_power, polyharmonic_degree, AxialProfile,
    ClosedFormVariant, CoefficientTable,
};
use crate::oracle::{fd_dirac, fd_laplacian, laplacian_stencil_error, point_to_f64, sample_points, StencilConfig};
use crate::scalar::{Rat, Scalar};
use crate::slice::{Point, SliceFunction};
use crate::stem::{LaurentPoly, Monomial, StemPolynomial};

/// One verified identity or bound, with a short human-readable outcome.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

/// All checks of one suite.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Products,
    Spherical,
    Polyharmonic,
    Almansi,
    FueterSce,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Products,
        Suite::Spherical,
        Suite::Polyharmonic,
        Suite::Almansi,
        Suite::FueterSce,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Products => "products",
            Suite::Spherical => "spherical",
            Suite::Polyharmonic => "polyharmonic",
            Suite::Almansi => "almansi",
            Suite::FueterSce => "fueter-sce",
        }
    }

    pub fn from_name(name: &str) -> Result<Suite> {
        Suite::ALL
            .iter()
            .copied()
            .find(|s| s.name() == name)
            .ok_or_else(|| Error::Parse {
                pos: 0,
                msg: format!(
                    "unknown suite '{name}'; expected one of products, spherical, \
                     polyharmonic, almansi, fueter-sce, all"
                ),
            })
    }
}

/// Runs one suite against the deterministic battery derived from `seed`.
pub fn run_suite(suite: Suite, seed: u64) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Products => products_checks(seed)?,
        Suite::Spherical => spherical_checks(seed)?,
        Suite::Polyharmonic => polyharmonic_checks(seed)?,
        Suite::Almansi => almansi_checks(seed)?,
        Suite::FueterSce => fueter_sce_checks(seed)?,
    };
    Ok(SuiteReport { suite, checks })
}

/// Runs every suite in declaration order.
pub fn run_all(seed: u64) -> Result<Vec<SuiteReport>> {
    Suite::ALL.iter().map(|s| run_suite(*s, seed)).collect()
}

fn push(checks: &mut Vec<CheckResult>, label: &str, passed: bool, detail: String) {
    checks.push(CheckResult {
        label: label.to_string(),
        passed,
        detail,
    });
}

fn standard_battery(seed: u64) -> Result<Vec<SliceFunction<Rat>>> {
    battery(&BatteryConfig {
        seed,
        ..BatteryConfig::default()
    })
}

fn small_config(seed: u64) -> BatteryConfig {
    BatteryConfig {
        seed,
        max_degree: 4,
        max_terms: 2,
        ..BatteryConfig::default()
    }
}

// ---------------------------------------------------------------------------
// products: Clifford algebra laws and slice-product evaluation identities.
// ---------------------------------------------------------------------------

fn products_checks(seed: u64) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);

    let mut assoc = true;
    let mut anti = true;
    let mut trials = 0u32;
    for m in [3u32, 5, 7, 9] {
        for _ in 0..12 {
            trials += 1;
            let a: Multivector<Rat> = random_multivector(&mut rng, m, 3)?;
            let b: Multivector<Rat> = random_multivector(&mut rng, m, 3)?;
            let c: Multivector<Rat> = random_multivector(&mut rng, m, 3)?;
            let left = a.clifford_product(&b)?.clifford_product(&c)?;
            let right = a.clifford_product(&b.clifford_product(&c)?)?;
            if !left.sub(&right)?.is_zero() {
                assoc = false;
            }
            let conj_prod = a.clifford_product(&b)?.conjugate();
            let prod_conj = b.conjugate().clifford_product(&a.conjugate())?;
            if !conj_prod.sub(&prod_conj)?.is_zero() {
                anti = false;
            }
        }
    }
    push(
        &mut checks,
        "clifford-associativity",
        assoc,
        format!("(ab)c = a(bc) exactly on {trials} random triples, m in {{3,5,7,9}}"),
    );
    push(
        &mut checks,
        "clifford-conjugation-antiautomorphism",
        anti,
        format!("conj(ab) = conj(b) conj(a) exactly on {trials} random triples"),
    );

    let cfg = small_config(seed);
    let mut slice_assoc = true;
    let mut pairs = 0u32;
    for m in [3u32, 5, 7] {
        for n in [1u32, 2] {
            for _ in 0..3 {
                pairs += 1;
                let f: SliceFunction<Rat> = random_regular_function(&mut rng, m, n, &cfg)?;
                let g: SliceFunction<Rat> = random_regular_function(&mut rng, m, n, &cfg)?;
                let h: SliceFunction<Rat> = random_regular_function(&mut rng, m, n, &cfg)?;
                let left = f.slice_product(&g)?.slice_product(&h)?;
                let right = f.slice_product(&g.slice_product(&h)?)?;
                if !left.sub(&right)?.is_zero() {
                    slice_assoc = false;
                }
            }
        }
    }
    push(
        &mut checks,
        "slice-product-associativity",
        slice_assoc,
        format!("(f*g)*h = f*(g*h) exactly as stems on {pairs} random triples"),
    );

    // A one-variable slice preserving left factor multiplies pointwise.
    let stencil = StencilConfig::default();
    let mut preserving = true;
    let mut points = 0u32;
    for m in [3u32, 5, 7] {
        let mut p = SliceFunction::zero(m, 1)?;
        for k in 0..=3u32 {
            let num = rng.gen_range(-3i64..=3);
            let den = rng.gen_range(1i64..=3);
            let c = Multivector::scalar(m, Rat::from_ratio(num, den))?;
            p = p.add(&SliceFunction::monomial(m, &[k], c)?)?;
        }
        if !p.is_slice_preserving() {
            preserving = false;
        }
        let g: SliceFunction<Rat> = random_regular_function(&mut rng, m, 1, &cfg)?;
        let prod = p.slice_product(&g)?;
        for x in sample_points(1, m, &stencil)?.iter().take(5) {
            points += 1;
            let lhs = prod.evaluate(x)?;
            let rhs = p.evaluate(x)?.clifford_product(&g.evaluate(x)?)?;
            if !lhs.sub(&rhs)?.is_zero() {
                preserving = false;
            }
        }
    }
    push(
        &mut checks,
        "slice-preserving-pointwise-product",
        preserving,
        format!("(p*g)(x) = p(x) g(x) exactly at {points} sample points, p slice preserving"),
    );

    // On the real axes every slice product evaluates pointwise.
    let mut real_points_ok = true;
    let mut real_points = 0u32;
    for m in [3u32, 5, 7] {
        for n in [1u32, 2] {
            let f: SliceFunction<Rat> = random_regular_function(&mut rng, m, n, &cfg)?;
            let g: SliceFunction<Rat> = random_regular_function(&mut rng, m, n, &cfg)?;
            let prod = f.slice_product(&g)?;
            for trial in 0..4 {
                real_points += 1;
                let coords = (0..n)
                    .map(|v| {
                        Multivector::scalar(
                            m,
                            Rat::from_ratio(trial as i64 - 2 + v as i64, 3),
                        )
                    })
                    .collect::<Result<Vec<_>>>()?;
                let x = Point::new(coords)?;
                let lhs = prod.evaluate(&x)?;
                let rhs = f.evaluate(&x)?.clifford_product(&g.evaluate(&x)?)?;
                if !lhs.sub(&rhs)?.is_zero() {
                    real_points_ok = false;
                }
            }
        }
    }
    push(
        &mut checks,
        "real-point-pointwise-product",
        real_points_ok,
        format!("(f*g)(x) = f(x) g(x) exactly at {real_points} real points"),
    );

    Ok(checks)
}

// ---------------------------------------------------------------------------
// spherical: value/derivative decomposition, Leibniz rule, representation
// formula, and agreement of the two regularity criteria.
// ---------------------------------------------------------------------------

fn spherical_checks(seed: u64) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();
    let funcs = standard_battery(seed)?;

    let mut decomposition = true;
    let mut circular = true;
    let mut cases = 0u32;
    for f in &funcs {
        for h in 1..=f.n() {
            cases += 1;
            let value = f.spherical_value(h)?;
            let derivative = f.spherical_derivative(h)?;
            let im = SliceFunction::imaginary_part_of_variable(f.m(), f.n(), h)?;
            let rebuilt = value.add(&im.slice_product(&derivative)?)?;
            if !rebuilt.sub(f)?.is_zero() {
                decomposition = false;
            }
            let bit = 1u32 << (h - 1);
            if !value.is_circular_wrt(bit) || !derivative.is_circular_wrt(bit) {
                circular = false;
            }
        }
    }
    push(
        &mut checks,
        "value-derivative-decomposition",
        decomposition,
        format!("f = f°_s,h + Im(x_h)*f'_s,h exactly for {cases} (f, h) pairs"),
    );
    push(
        &mut checks,
        "components-circular",
        circular,
        "f°_s,h and f'_s,h are even in β_h for every battery member".to_string(),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1357_9bdf_2468_ace0);
    let cfg = small_config(seed);
    let mut leibniz = true;
    let mut leibniz_cases = 0u32;
    for m in [3u32, 5, 7] {
        for n in [1u32, 2] {
            for _ in 0..3 {
                let f: SliceFunction<Rat> = random_regular_function(&mut rng, m, n, &cfg)?;
                let g: SliceFunction<Rat> = random_regular_function(&mut rng, m, n, &cfg)?;
                let prod = f.slice_product(&g)?;
                for h in 1..=n {
                    leibniz_cases += 1;
                    let lhs = prod.spherical_derivative(h)?;
                    let rhs = f
                        .spherical_value(h)?
                        .slice_product(&g.spherical_derivative(h)?)?
                        .add(
                            &f.spherical_derivative(h)?
                                .slice_product(&g.spherical_value(h)?)?,
                        )?;
                    if !lhs.sub(&rhs)?.is_zero() {
                        leibniz = false;
                    }
                }
            }
        }
    }
    push(
        &mut checks,
        "spherical-derivative-leibniz",
        leibniz,
        format!("(f*g)'_s,h = f°_s,h*g'_s,h + f'_s,h*g°_s,h exactly in {leibniz_cases} cases"),
    );

    let stencil = StencilConfig::default();
    let mut representation = true;
    let mut rep_points = 0u32;
    for f in funcs.iter().filter(|f| f.n() == 1) {
        let m = f.m();
        let j = Multivector::basis_vector(m, 1)?;
        let k = Multivector::basis_vector(m, 2)?;
        for x in sample_points(1, m, &stencil)?.iter().take(6) {
            rep_points += 1;
            let via_formula = f.representation_eval(&j, &k, x.coordinate(1))?;
            let direct = f.evaluate(x)?;
            if !via_formula.sub(&direct)?.is_zero() {
                representation = false;
            }
        }
    }
    push(
        &mut checks,
        "representation-formula",
        representation,
        format!("two-slice representation matches direct evaluation at {rep_points} points"),
    );

    let mut criteria_agree = true;
    for f in &funcs {
        let a = f.is_slice_regular()?;
        let b = f.one_var_regularity_check()?;
        if a != b || !a {
            criteria_agree = false;
        }
    }
    // Non-regular mutants: F_∅ = β₁² (circular) and the conjugate x̄₁.
    for m in [3u32, 5] {
        for n in [1u32, 2] {
            let circular_term = {
                let mut stem = StemPolynomial::zero(m, n)?;
                let mut poly = LaurentPoly::zero(m, n)?;
                let mut exps = vec![0i32; 2 * n as usize];
                exps[1] = 2;
                poly.add_term(Monomial(exps), Multivector::scalar(m, Rat::one())?)?;
                stem.set_component(0, poly)?;
                SliceFunction::new(stem)?
            };
            let conjugate_var = {
                let mut stem = StemPolynomial::zero(m, n)?;
                let mut alpha = LaurentPoly::zero(m, n)?;
                let mut e = vec![0i32; 2 * n as usize];
                e[0] = 1;
                alpha.add_term(Monomial(e), Multivector::scalar(m, Rat::one())?)?;
                let mut beta = LaurentPoly::zero(m, n)?;
                let mut e = vec![0i32; 2 * n as usize];
                e[1] = 1;
                beta.add_term(Monomial(e), Multivector::scalar(m, -Rat::one())?)?;
                stem.set_component(0, alpha)?;
                stem.set_component(1, beta)?;
                SliceFunction::new(stem)?
            };
            for bad in [circular_term, conjugate_var] {
                if bad.is_slice_regular()? || bad.one_var_regularity_check()? {
                    criteria_agree = false;
                }
            }
        }
    }
    push(
        &mut checks,
        "regularity-criteria-agree",
        criteria_agree,
        "componentwise holomorphy and the truncated-derivative criterion coincide".to_string(),
    );

    Ok(checks)
}

// ---------------------------------------------------------------------------
// polyharmonic: kernel orders, closed forms, coefficient identities, and the
// finite-difference Laplacian oracle.
// ---------------------------------------------------------------------------

fn polyharmonic_checks(seed: u64) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();
    let funcs = standard_battery(seed)?;

    let mut derivative_kernel = true;
    let mut function_kernel = true;
    let mut cases = 0u32;
    for f in &funcs {
        let g = gamma(f.m());
        for h in 1..=f.n() {
            cases += 1;
            if !laplacian_power(&f.spherical_derivative(h)?, h, g)?.is_zero() {
                derivative_kernel = false;
            }
            if !laplacian_power(f, h, g + 1)?.is_zero() {
                function_kernel = false;
            }
        }
    }
    push(
        &mut checks,
        "spherical-derivative-polyharmonic",
        derivative_kernel,
        format!("Δ^γ_m f'_s,h = 0 exactly for {cases} (f, h) pairs"),
    );
    push(
        &mut checks,
        "function-polyharmonic",
        function_kernel,
        format!("Δ^(γ_m+1) f = 0 exactly for {cases} (f, h) pairs"),
    );

    let mut closed_forms = true;
    let mut closed_cases = 0u32;
    for f in &funcs {
        let g = gamma(f.m());
        for h in 1..=f.n() {
            let derivative = f.spherical_derivative(h)?;
            for k in 1..=g {
                closed_cases += 1;
                let iterated = laplacian_power(&derivative, h, k)?;
                for variant in [
                    ClosedFormVariant::DerivativeWeights,
                    ClosedFormVariant::ComponentWeights,
                ] {
                    let closed = iterated_laplacian_closed_form(f, h, k, variant)?;
                    if !closed.sub(&iterated)?.is_zero() {
                        closed_forms = false;
                    }
                }
                let direct = iterated_laplacian_sliceregular(f, h, k)?;
                if !direct.sub(&laplacian_power(f, h, k + 1)?)?.is_zero() {
                    closed_forms = false;
                }
            }
        }
    }
    push(
        &mut checks,
        "closed-forms-match-iteration",
        closed_forms,
        format!(
            "both closed forms for Δ^k f'_s,h and the slice-regular form for Δ^(k+1) f \
             match iterated Laplacians in {closed_cases} cases"
        ),
    );

    let table = CoefficientTable::new(12);
    push(
        &mut checks,
        "coefficient-recursion",
        table.verify_recursion(),
        "a_(j+1)^(k+1) summation recursion holds for k ≤ 12".to_string(),
    );
    push(
        &mut checks,
        "coefficient-stepping",
        table.verify_stepping(),
        "a_j^(k+1) = a_(j−1)^(k) + (j−2k) a_j^(k) holds for k ≤ 12".to_string(),
    );

    let stencil = StencilConfig::default();
    let mut fd_ok = true;
    let mut fd_points = 0u32;
    for f in funcs.iter().step_by(8) {
        let numeric = f.to_f64();
        for h in 1..=f.n() {
            let exact = laplacian_power(f, h, 1)?.to_f64();
            for x in sample_points(f.n(), f.m(), &stencil)?.iter().take(4) {
                fd_points += 1;
                let xf = point_to_f64(x);
                let fd = fd_laplacian(&numeric, h, &xf, &stencil)?;
                let residual = fd.residual_against(&exact.evaluate(&xf)?)?;
                if !residual.within(stencil.tolerance) {
                    fd_ok = false;
                }
            }
        }
    }
    push(
        &mut checks,
        "fd-laplacian-agreement",
        fd_ok,
        format!("stencil Laplacian within {:.0e} of the symbolic one at {fd_points} points", stencil.tolerance),
    );

    let mut convergence = true;
    let mut ratio_summary = String::new();
    for m in [3u32, 5, 7] {
        let f = SliceFunction::monomial(m, &[6], Multivector::scalar(m, Rat::one())?)?;
        let numeric = f.to_f64();
        let exact = laplacian_power(&f, 1, 1)?.to_f64();
        for x in sample_points(1, m, &stencil)?.iter().take(3) {
            let xf = point_to_f64(x);
            let coarse = laplacian_stencil_error(&numeric, &exact, 1, &xf, 2e-3)?;
            let fine = laplacian_stencil_error(&numeric, &exact, 1, &xf, 1e-3)?;
            if fine <= 0.0 {
                continue;
            }
            let ratio = coarse / fine;
            if !(3.0..=5.0).contains(&ratio) {
                convergence = false;
                ratio_summary = format!("m={m}: halving the step scaled the error by {ratio:.3}");
            }
        }
    }
    if ratio_summary.is_empty() {
        ratio_summary = "halving the step divides the stencil error by ≈4 (second order)".to_string();
    }
    push(&mut checks, "fd-second-order-convergence", convergence, ratio_summary);

    // The profile α⁴β⁻¹ − 6α²β + β³ is axially harmonic exactly in the
    // quaternionic case, yet is never a valid slice stem (odd β-powers in
    // the scalar slot), so the stem constructors must reject it.
    let axial_check = {
        let m3 = 3u32;
        let coeff = |m: u32, v: i64| Multivector::scalar(m, Rat::from_ratio(v, 1));
        let profile_terms = |m: u32| -> Result<Vec<(Vec<i32>, Multivector<Rat>)>> {
            Ok(vec![
                (vec![4, -1], coeff(m, 1)?),
                (vec![2, 1], coeff(m, -6)?),
                (vec![0, 3], coeff(m, 1)?),
            ])
        };
        let u3 = AxialProfile::from_terms(m3, profile_terms(m3)?)?;
        let harmonic_at_3 = axial_laplacian(&u3)?.is_zero();
        let u5 = AxialProfile::from_terms(5, profile_terms(5)?)?;
        let not_harmonic_at_5 = !axial_laplacian(&u5)?.is_zero();
        let rejected = {
            let mut stem = StemPolynomial::zero(m3, 1)?;
            let mut poly = LaurentPoly::zero(m3, 1)?;
            for (exps, c) in profile_terms(m3)? {
                poly.add_term(Monomial(exps), c)?;
            }
            stem.set_component(0, poly)?;
            matches!(
                SliceFunction::new_laurent(stem),
                Err(Error::ParityViolation { .. })
            )
        };
        harmonic_at_3 && not_harmonic_at_5 && rejected
    };
    push(
        &mut checks,
        "axial-harmonic-parity-rejection",
        axial_check,
        "axially harmonic profile (m=3 only) is rejected as a slice stem".to_string(),
    );

    Ok(checks)
}

// ---------------------------------------------------------------------------
// almansi: classical, canonical, slice, and simultaneous decompositions.
// ---------------------------------------------------------------------------

fn almansi_checks(seed: u64) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();
    let funcs = standard_battery(seed)?;

    let mut classical = true;
    let mut classical_cases = 0u32;
    for f in &funcs {
        let g = gamma(f.m());
        let Some(p) = polyharmonic_degree(f, 1, g + 1)? else {
            classical = false;
            continue;
        };
        classical_cases += 1;
        let decomposition = classical_almansi(f, 1, p)?;
        if decomposition.depth() != p || !decomposition.reconstruct()?.sub(f)?.is_zero() {
            classical = false;
        }
    }
    push(
        &mut checks,
        "classical-reconstruction",
        classical,
        format!(
            "f = Σ |x|^(2j) h_j with harmonic h_j, rebuilt exactly for {classical_cases} functions"
        ),
    );

    let mut gauss = true;
    let mut gauss_cases = 0u32;
    for m in [3u32, 5, 7] {
        let g = gamma(m);
        for k in 0..=6u32 {
            gauss_cases += 1;
            let f = SliceFunction::monomial(m, &[k], Multivector::scalar(m, Rat::one())?)?;
            let canonical = gauss_canonical(&f)?;
            let p = polyharmonic_degree(&f, 1, g + 1)?.unwrap_or(g + 1);
            let recursive = classical_almansi(&f, 1, p)?;
            if !canonical.reconstruct()?.sub(&f)?.is_zero() {
                gauss = false;
            }
            for (j, comp) in canonical.components.iter().enumerate() {
                let other = recursive
                    .components
                    .get(j)
                    .cloned()
                    .map(Ok)
                    .unwrap_or_else(|| SliceFunction::zero(m, 1))?;
                if !comp.sub(&other)?.is_zero() {
                    gauss = false;
                }
            }
        }
    }
    push(
        &mut checks,
        "canonical-matches-recursive",
        gauss,
        format!("double-factorial canonical components equal the recursive ones in {gauss_cases} cases"),
    );

    let mut slice_ok = true;
    let mut unique_ok = true;
    for f in &funcs {
        let h_mask = (1u32 << f.n()) - 1;
        let decomposition = slice_almansi(f, h_mask)?;
        if decomposition.polyharmonic != Some(true) {
            slice_ok = false;
        }
        let rebuilt = slice_reconstruct(f.m(), f.n(), h_mask, &decomposition.components)?;
        if !rebuilt.sub(f)?.is_zero() {
            slice_ok = false;
        }
        let outcome = slice_uniqueness_check(f, h_mask, &decomposition.components)?;
        if !(outcome.circular && outcome.reconstructs && outcome.matches_canonical) {
            unique_ok = false;
        }
    }
    // Perturbing any component must break the reconstruction identity.
    for f in funcs.iter().take(6) {
        let h_mask = (1u32 << f.n()) - 1;
        let decomposition = slice_almansi(f, h_mask)?;
        let mut tampered = decomposition.components.clone();
        let bump = SliceFunction::constant(f.m(), f.n(), Multivector::scalar(f.m(), Rat::one())?)?;
        if let Some(first) = tampered.get_mut(&0) {
            *first = first.add(&bump)?;
        }
        let outcome = slice_uniqueness_check(f, h_mask, &tampered)?;
        if outcome.reconstructs {
            unique_ok = false;
        }
    }
    push(
        &mut checks,
        "slice-decomposition-reconstruction",
        slice_ok,
        "all 2^n spherical components are polyharmonic and rebuild f exactly".to_string(),
    );
    push(
        &mut checks,
        "slice-decomposition-uniqueness",
        unique_ok,
        "circular components reconstructing f equal the canonical ones; perturbations fail".to_string(),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0f0f_0f0f_1234_5678);
    let cfg = small_config(seed);
    let mut ordered = true;
    for m in [3u32, 5, 7] {
        let tail = SliceFunction::monomial(m, &[0, 5], random_multivector(&mut rng, m, 3)?)?;
        let head: SliceFunction<Rat> = random_regular_function(&mut rng, m, 1, &cfg)?;
        let head = {
            // Lift the one-variable polynomial to (x₁, x₂) with x₂ unused.
            let mut lifted = SliceFunction::zero(m, 2)?;
            for (k, poly) in head.stem().components() {
                let mut wide = LaurentPoly::zero(m, 2)?;
                for (mono, c) in poly.terms() {
                    let exps = vec![mono.alpha_exp(1), mono.beta_exp(1), 0, 0];
                    wide.add_term(Monomial(exps), c.clone())?;
                }
                let mut stem = lifted.into_stem();
                stem.set_component(k, wide)?;
                lifted = SliceFunction::new_laurent(stem)?;
            }
            lifted
        };
        let f = head.add(&tail)?;
        if !f.is_slice_wrt(0b10) || !ordered_vanishing_check(&f, 2)? {
            ordered = false;
        }
        if !ordered_vanishing_check(&f, 1)? {
            ordered = false;
        }
    }
    push(
        &mut checks,
        "ordered-vanishing",
        ordered,
        "functions slice in the last variable have vanishing non-terminal components".to_string(),
    );

    let mut simultaneous = true;
    let mut sim_cases = 0u32;
    for m in [3u32, 5, 7] {
        for _ in 0..2 {
            sim_cases += 1;
            let f: SliceFunction<Rat> = random_regular_function(&mut rng, m, 2, &cfg)?;
            let sim = simultaneous_almansi(&f, 0b11, 0b10)?;
            if !sim.harmonic_certified || !sim.reconstruct()?.sub(&f)?.is_zero() {
                simultaneous = false;
            }
            let regrouped = regroup_all(&f, &sim)?;
            if !regrouped.biharmonic_in_g {
                simultaneous = false;
            }
        }
    }
    push(
        &mut checks,
        "simultaneous-refinement",
        simultaneous,
        format!(
            "refined components are harmonic, regrouped ones biharmonic, and both rebuild f \
             ({sim_cases} two-variable functions)"
        ),
    );

    Ok(checks)
}

// ---------------------------------------------------------------------------
// fueter-sce: the monogenic map, its Dirac certificates, and the iterated
// Dirac chains recovering spherical components.
// ---------------------------------------------------------------------------

fn fueter_sce_checks(seed: u64) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();
    let funcs = standard_battery(seed)?;
    let stencil = StencilConfig::default();

    let mut dirac_identity = true;
    for f in &funcs {
        let lhs = dirac_symbolic_var1(f)?;
        let rhs = f
            .spherical_derivative(1)?
            .scale(&Rat::from_ratio(1 - f.m() as i64, 2));
        if !lhs.sub(&rhs)?.is_zero() {
            dirac_identity = false;
        }
    }
    push(
        &mut checks,
        "dirac-spherical-identity",
        dirac_identity,
        "∂̄f = ((1−m)/2) f'_s,1 exactly for every battery member".to_string(),
    );

    // Degree-8 members need a finer step than the default 1e-3 to push the
    // O(step²) truncation error of the first-derivative stencil below the
    // 1e-5 tolerance; 5e-4 leaves two orders of headroom above rounding.
    let fine = StencilConfig {
        step: 5e-4,
        ..stencil.clone()
    };
    let mut fd_ok = true;
    let mut fd_points = 0u32;
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    for (i, f) in funcs.iter().enumerate() {
        let numeric = f.to_f64();
        let exact = dirac_symbolic_var1(f)?.to_f64();
        for x in sample_points(f.n(), f.m(), &fine)? {
            fd_points += 1;
            let xf = point_to_f64(&x);
            let fd = fd_dirac(&numeric, 1, &xf, &fine)?;
            let residual = fd.residual_against(&exact.evaluate(&xf)?)?;
            if residual.relative > worst {
                worst = residual.relative;
                worst_at = format!("member {i} (m={}, n={})", f.m(), f.n());
            }
            if !residual.within(fine.tolerance) {
                fd_ok = false;
            }
        }
    }
    push(
        &mut checks,
        "fd-dirac-agreement",
        fd_ok,
        format!(
            "stencil Dirac within {:.0e} of the symbolic one at {fd_points} points; \
             worst relative residual {worst:.2e} at {worst_at}",
            fine.tolerance
        ),
    );

    let mut monogenic = true;
    let mut certificates = 0u32;
    for f in &funcs {
        for h in 1..=f.n() {
            // The map in variable h is defined on functions slice wrt h;
            // h = 1 always qualifies, higher variables only when no lower
            // variable shares a stem component with them.
            if h > 1 && !f.is_slice_wrt(1 << (h - 1)) {
                continue;
            }
            certificates += 1;
            let cert = fueter_sce(f, h, &stencil)?;
            if !cert.ok() {
                monogenic = false;
            }
        }
    }
    push(
        &mut checks,
        "monogenic-image-certificates",
        monogenic,
        format!("Δ^γ_m maps each of {certificates} (f, h) pairs into the Dirac kernel"),
    );

    // The image is monogenic and slice but in general not holomorphic: its
    // spherical derivative can be nonzero even though ∂̄ annihilates it.
    let quartic = SliceFunction::monomial(3, &[4], Multivector::scalar(3, Rat::one())?)?;
    let cert = fueter_sce(&quartic, 1, &stencil)?;
    let image_derivative_nonzero = !cert.image.spherical_derivative(1)?.is_zero();
    push(
        &mut checks,
        "image-monogenic-not-holomorphic",
        cert.ok() && image_derivative_nonzero,
        "for x⁴ at m=3 the image passes all Dirac certificates while (image)'_s ≠ 0".to_string(),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd_ef01_2345_6789);
    let cfg = small_config(seed);
    let mut chains = true;
    let mut chain_cases = 0u32;
    for m in [3u32, 5] {
        for n in [1u32, 2] {
            chain_cases += 1;
            let f: SliceFunction<Rat> = random_regular_function(&mut rng, m, n, &cfg)?;
            let report = crf_component_check(&f, &stencil)?;
            if !report.negative_convention() || !report.numeric_ok() {
                chains = false;
            }
            if m == 3 && !report.positive_convention() {
                // (1−m)/2 = −1, so the two conventions coincide there.
                chains = false;
            }
        }
    }
    push(
        &mut checks,
        "iterated-dirac-chains",
        chains,
        format!(
            "D_K chains equal ((1−m)/2)^n S_K with oracle-verified Dirac steps \
             ({chain_cases} functions)"
        ),
    );

    Ok(checks)
}
