//! Finite-difference numeric oracle.
//!
//! Provides an independent check of the symbolic operators: second-order
//! central-difference approximations of the slice Laplacian and the Dirac
//! operator on ℝ^{m+1}, evaluated in floating point at deterministically
//! sampled points with exact rational coordinates.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::scalar::{Rat, Scalar};
use crate::slice::{Point, SliceFunction};

/// Configuration of the finite-difference stencil and the point sampler.
#[derive(Debug, Clone)]
pub struct StencilConfig {
    /// Step size of the central differences.
    pub step: f64,
    /// Relative tolerance against the max blade magnitude over the stencil.
    pub tolerance: f64,
    /// Number of sample points drawn per function.
    pub samples: usize,
    /// Seed of the deterministic sampler.
    pub seed: u64,
}

impl Default for StencilConfig {
    fn default() -> Self {
        StencilConfig {
            step: 1e-3,
            tolerance: 1e-5,
            samples: 20,
            seed: 0,
        }
    }
}

/// Residual of one operator comparison at one point.
#[derive(Debug, Clone)]
pub struct Residual {
    /// Max-norm of the difference between stencil and exact value.
    pub absolute: f64,
    /// Absolute residual divided by the stencil magnitude scale.
    pub relative: f64,
}

impl Residual {
    /// Whether the relative residual is within the configured tolerance.
    pub fn within(&self, tolerance: f64) -> bool {
        self.relative <= tolerance
    }
}

/// A stencil evaluation together with the magnitude scale used for
/// relative residuals: the largest blade magnitude among the per-coordinate
/// difference quotients and the assembled value, floored at 1.
#[derive(Debug, Clone)]
pub struct StencilValue {
    /// The assembled finite-difference approximation.
    pub value: Multivector<f64>,
    /// Magnitude scale for relative residuals.
    pub scale: f64,
}

impl StencilValue {
    /// Residual of this stencil value against an exact reference.
    pub fn residual_against(&self, exact: &Multivector<f64>) -> Result<Residual> {
        let absolute = self.value.sub(exact)?.max_abs_f64();
        Ok(Residual {
            absolute,
            relative: absolute / self.scale,
        })
    }
}

/// Returns a copy of `x` with coordinate `coord` of variable `h` shifted.
///
/// Coordinate 0 is the scalar (e₀) slot; coordinate i ≥ 1 is the eᵢ slot.
fn perturb(x: &Point<f64>, h: u32, coord: u32, delta: f64) -> Result<Point<f64>> {
    let m = x.coordinate(h).m();
    let mask = if coord == 0 { 0 } else { 1u32 << (coord - 1) };
    let bump = Multivector::from_terms(m, [(mask, delta)])?;
    let mut coords: Vec<Multivector<f64>> = x.coordinates().to_vec();
    coords[(h - 1) as usize] = coords[(h - 1) as usize].add(&bump)?;
    Point::new(coords)
}

/// Second-order central-difference Laplacian of `f` in the m+1 real
/// coordinates of variable `x_h`, evaluated at `x`.
///
/// Each coordinate contributes ((f₊ − f₀) + (f₋ − f₀))/s², a form in which
/// constant functions cancel exactly in floating point.
pub fn fd_laplacian(
    f: &SliceFunction<f64>,
    h: u32,
    x: &Point<f64>,
    cfg: &StencilConfig,
) -> Result<StencilValue> {
    if h == 0 || h > f.n() {
        return Err(Error::VariableOutOfRange { h, n: f.n() });
    }
    let m = f.m();
    let s = cfg.step;
    let center = f.evaluate(x)?;
    let mut total = Multivector::zero(m)?;
    let mut scale: f64 = 1.0;
    for coord in 0..=m {
        let plus = f.evaluate(&perturb(x, h, coord, s)?)?;
        let minus = f.evaluate(&perturb(x, h, coord, -s)?)?;
        let quotient = plus
            .sub(&center)?
            .add(&minus.sub(&center)?)?
            .scale(&(1.0 / (s * s)));
        scale = scale.max(quotient.max_abs_f64());
        total = total.add(&quotient)?;
    }
    scale = scale.max(total.max_abs_f64());
    Ok(StencilValue {
        value: total,
        scale,
    })
}

/// Second-order central-difference Dirac operator ∂̄ of `f` in variable
/// `x_h` at `x`: ½(D₀f + Σᵢ eᵢ·Dᵢf) with eᵢ multiplied on the left.
pub fn fd_dirac(
    f: &SliceFunction<f64>,
    h: u32,
    x: &Point<f64>,
    cfg: &StencilConfig,
) -> Result<StencilValue> {
    if h == 0 || h > f.n() {
        return Err(Error::VariableOutOfRange { h, n: f.n() });
    }
    let m = f.m();
    let s = cfg.step;
    let mut total = Multivector::zero(m)?;
    let mut scale: f64 = 1.0;
    for coord in 0..=m {
        let plus = f.evaluate(&perturb(x, h, coord, s)?)?;
        let minus = f.evaluate(&perturb(x, h, coord, -s)?)?;
        let diff = plus.sub(&minus)?.scale(&(1.0 / (2.0 * s)));
        scale = scale.max(diff.max_abs_f64());
        let term = if coord == 0 {
            diff
        } else {
            Multivector::basis_vector(m, coord)?.clifford_product(&diff)?
        };
        total = total.add(&term)?;
    }
    let value = total.scale(&0.5);
    scale = scale.max(value.max_abs_f64());
    Ok(StencilValue { value, scale })
}

fn random_rational(rng: &mut ChaCha8Rng, lo_num: i64, hi_num: i64, den: i64) -> Rat {
    let p = rng.gen_range(lo_num..=hi_num);
    Rat::new(p.into(), den.into())
}

/// Random rational in [−2, 2].
fn sample_alpha(rng: &mut ChaCha8Rng) -> Rat {
    let q = rng.gen_range(1..=8i64);
    random_rational(rng, -2 * q, 2 * q, q)
}

/// Random rational in [1/2, 3/2].
fn sample_beta(rng: &mut ChaCha8Rng) -> Rat {
    let q = rng.gen_range(1..=8i64) * 2;
    random_rational(rng, q / 2, 3 * q / 2, q)
}

/// Random rational point of the unit sphere in ℝ^m via the stereographic
/// parametrisation (2u, |u|²−1)/(1+|u|²), followed by a random coordinate
/// permutation and sign flips. Every coordinate is exactly rational and the
/// squared norm is exactly 1.
fn sample_unit(rng: &mut ChaCha8Rng, m: u32) -> Result<Multivector<Rat>> {
    let dim = (m - 1) as usize;
    let u: Vec<Rat> = (0..dim)
        .map(|_| {
            let q = rng.gen_range(1..=6i64);
            random_rational(rng, -2 * q, 2 * q, q)
        })
        .collect();
    let norm_sq: Rat = u.iter().fold(Rat::zero(), |acc, t| {
        Scalar::add(&acc, &Scalar::mul(t, t))
    });
    let denom = Scalar::add(&Rat::one(), &norm_sq);
    let mut coords: Vec<Rat> = u
        .iter()
        .map(|t| Scalar::div(&Scalar::mul(&Rat::from_int(2), t), &denom))
        .collect();
    coords.push(Scalar::div(&Scalar::sub(&norm_sq, &Rat::one()), &denom));
    // Random permutation (Fisher-Yates) and sign flips keep the norm exact
    // while spreading the samples over the whole sphere.
    for i in (1..coords.len()).rev() {
        let j = rng.gen_range(0..=i);
        coords.swap(i, j);
    }
    for c in coords.iter_mut() {
        if rng.gen_bool(0.5) {
            *c = Scalar::neg(c);
        }
    }
    let terms: Vec<(u32, Rat)> = coords
        .into_iter()
        .enumerate()
        .map(|(i, c)| (1u32 << i, c))
        .collect();
    Multivector::from_terms(m, terms)
}

/// Deterministic pseudo-random sample points: α_h ∈ [−2,2], β_h ∈ [1/2,3/2],
/// J_h on a rational dense subset of the unit sphere. All coordinates are
/// exact rationals, so points can feed both the exact and float evaluators.
pub fn sample_points(n: u32, m: u32, cfg: &StencilConfig) -> Result<Vec<Point<Rat>>> {
    crate::clifford::check_m(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut points = Vec::with_capacity(cfg.samples);
    for _ in 0..cfg.samples {
        let mut coords = Vec::with_capacity(n as usize);
        for _ in 0..n {
            let alpha = sample_alpha(&mut rng);
            let beta = sample_beta(&mut rng);
            let unit = sample_unit(&mut rng, m)?;
            let coord = Multivector::scalar(m, alpha)?.add(&unit.scale(&beta))?;
            coords.push(coord);
        }
        points.push(Point::new(coords)?);
    }
    Ok(points)
}

/// Converts an exact sample point to floating point.
pub fn point_to_f64(x: &Point<Rat>) -> Point<f64> {
    let coords = x
        .coordinates()
        .iter()
        .map(|c| c.map_scalars(Scalar::to_f64))
        .collect();
    Point::new(coords).expect("a valid exact point stays valid in floats")
}

/// Error of the stencil Laplacian against an exact evaluator at `x`,
/// measured in the max norm. Used by the order-2 convergence check.
pub fn laplacian_stencil_error(
    f: &SliceFunction<f64>,
    exact: &SliceFunction<f64>,
    h: u32,
    x: &Point<f64>,
    step: f64,
) -> Result<f64> {
    let cfg = StencilConfig {
        step,
        ..StencilConfig::default()
    };
    let fd = fd_laplacian(f, h, x, &cfg)?;
    let reference = exact.evaluate(x)?;
    Ok(fd.value.sub(&reference)?.max_abs_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic;
    use crate::scalar::rat_from_str;
    use crate::stem::StemPolynomial;

    fn rat(p: i64, q: i64) -> Rat {
        Rat::new(p.into(), q.into())
    }

    fn x_power(m: u32, k: u32) -> SliceFunction<Rat> {
        SliceFunction::new(StemPolynomial::monomial(m, &[k], Multivector::scalar(m, Rat::one()).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn sampler_is_deterministic_and_in_range() {
        let cfg = StencilConfig::default();
        let a = sample_points(2, 5, &cfg).unwrap();
        let b = sample_points(2, 5, &cfg).unwrap();
        assert_eq!(a.len(), 20);
        for (p, q) in a.iter().zip(b.iter()) {
            for (cp, cq) in p.coordinates().iter().zip(q.coordinates().iter()) {
                assert!(cp.sub(cq).unwrap().is_zero());
            }
        }
        let half = rat_from_str("1/2").unwrap();
        for p in &a {
            for h in 1..=2u32 {
                let parts = p.coordinate(h).paravector_parts().unwrap();
                let beta = parts.beta.expect("rational construction has exact norm");
                assert!(beta >= half.clone() && beta <= rat(3, 2));
                assert!(parts.alpha >= rat(-2, 1) && parts.alpha <= rat(2, 1));
                let unit = parts.unit.expect("beta > 0");
                assert!(unit.is_imaginary_unit());
            }
        }
    }

    #[test]
    fn different_seeds_differ() {
        let a = sample_points(1, 5, &StencilConfig::default()).unwrap();
        let b = sample_points(
            1,
            5,
            &StencilConfig {
                seed: 1,
                ..StencilConfig::default()
            },
        )
        .unwrap();
        let same = a[0].coordinate(1).sub(b[0].coordinate(1)).unwrap().is_zero();
        assert!(!same);
    }

    #[test]
    fn fd_laplacian_matches_symbolic_on_x4() {
        let m = 5;
        let f = x_power(m, 4);
        let lap = harmonic::laplacian(&f, 1).unwrap();
        let ff = f.to_f64();
        let lapf = lap.to_f64();
        let cfg = StencilConfig::default();
        for x in sample_points(1, m, &cfg).unwrap().iter().take(5) {
            let xf = point_to_f64(x);
            let fd = fd_laplacian(&ff, 1, &xf, &cfg).unwrap();
            let exact = lapf.evaluate(&xf).unwrap();
            let res = fd.residual_against(&exact).unwrap();
            assert!(
                res.within(cfg.tolerance),
                "relative residual {} too large",
                res.relative
            );
        }
    }

    #[test]
    fn fd_laplacian_of_constant_vanishes() {
        let m = 5;
        let f: SliceFunction<Rat> =
            SliceFunction::constant(m, 1, Multivector::scalar(m, rat(7, 3)).unwrap()).unwrap();
        let ff = f.to_f64();
        let cfg = StencilConfig::default();
        let x = point_to_f64(&sample_points(1, m, &cfg).unwrap()[0]);
        let fd = fd_laplacian(&ff, 1, &x, &cfg).unwrap();
        assert!(fd.value.max_abs_f64() < 1e-9);
        assert!(fd.scale >= 1.0);
    }

    #[test]
    fn fd_dirac_identity_function_gives_half_one_minus_m() {
        let m = 5;
        let f = x_power(m, 1).to_f64();
        let cfg = StencilConfig::default();
        let x = point_to_f64(&sample_points(1, m, &cfg).unwrap()[0]);
        let fd = fd_dirac(&f, 1, &x, &cfg).unwrap();
        let expected = Multivector::scalar(m, (1.0 - m as f64) / 2.0).unwrap();
        assert!(fd.value.sub(&expected).unwrap().max_abs_f64() < 1e-6);
    }

    #[test]
    fn fd_dirac_matches_symbolic_on_x2() {
        let m = 5;
        let f = x_power(m, 2);
        let dbar = harmonic::dirac_symbolic_var1(&f).unwrap();
        let ff = f.to_f64();
        let dbarf = dbar.to_f64();
        let cfg = StencilConfig::default();
        for x in sample_points(1, m, &cfg).unwrap().iter().take(5) {
            let xf = point_to_f64(x);
            let fd = fd_dirac(&ff, 1, &xf, &cfg).unwrap();
            let exact = dbarf.evaluate(&xf).unwrap();
            let res = fd.residual_against(&exact).unwrap();
            assert!(res.within(cfg.tolerance), "residual {}", res.relative);
        }
    }

    #[test]
    fn stencil_converges_at_order_two() {
        let m = 5;
        let f = x_power(m, 6);
        let lap = harmonic::laplacian(&f, 1).unwrap();
        let ff = f.to_f64();
        let lapf = lap.to_f64();
        let cfg = StencilConfig::default();
        let x = point_to_f64(&sample_points(1, m, &cfg).unwrap()[1]);
        let coarse = laplacian_stencil_error(&ff, &lapf, 1, &x, 2e-3).unwrap();
        let fine = laplacian_stencil_error(&ff, &lapf, 1, &x, 1e-3).unwrap();
        let ratio = coarse / fine;
        assert!(
            (3.0..=5.0).contains(&ratio),
            "convergence ratio {ratio} outside [3,5]"
        );
    }

    #[test]
    fn second_variable_laplacian_checks_out() {
        let m = 5;
        let stem = StemPolynomial::monomial(m, &[4, 7], Multivector::scalar(m, Rat::one()).unwrap()).unwrap();
        let f = SliceFunction::new(stem).unwrap();
        let lap = harmonic::laplacian(&f, 2).unwrap();
        let ff = f.to_f64();
        let lapf = lap.to_f64();
        let cfg = StencilConfig::default();
        for x in sample_points(2, m, &cfg).unwrap().iter().take(3) {
            let xf = point_to_f64(x);
            let fd = fd_laplacian(&ff, 2, &xf, &cfg).unwrap();
            let exact = lapf.evaluate(&xf).unwrap();
            let res = fd.residual_against(&exact).unwrap();
            assert!(res.within(cfg.tolerance), "residual {}", res.relative);
        }
    }
}
