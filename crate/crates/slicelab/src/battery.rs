//! Seeded random generators for stress suites: one-sided slice regular
//! polynomials (ordered monomials with right Clifford coefficients),
//! random multivectors, and the configuration shared by the verification
//! batteries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clifford::Multivector;
use crate::error::Result;
use crate::scalar::Scalar;
use crate::slice::SliceFunction;

/// Shape of the random battery.
#[derive(Clone, Debug)]
pub struct BatteryConfig {
    pub seed: u64,
    /// Number of functions to generate.
    pub count: usize,
    /// Variables drawn from 1..=max_vars.
    pub max_vars: u32,
    /// Total degree of each monomial is at most this.
    pub max_degree: u32,
    /// Monomial summands per function, 1..=max_terms.
    pub max_terms: usize,
    /// Algebra dimensions sampled uniformly.
    pub dims: Vec<u32>,
    /// Coefficient numerators in [−coeff_range, coeff_range], denominators
    /// in 1..=4.
    pub coeff_range: i64,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        BatteryConfig {
            seed: 0,
            count: 50,
            max_vars: 3,
            max_degree: 8,
            max_terms: 4,
            dims: vec![3, 5, 7],
            coeff_range: 4,
        }
    }
}

/// Random multivector with 1..=3 blades; guaranteed nonzero.
pub fn random_multivector<S: Scalar>(
    rng: &mut ChaCha8Rng,
    m: u32,
    coeff_range: i64,
) -> Result<Multivector<S>> {
    let blades = rng.gen_range(1..=3usize);
    let mut terms = Vec::with_capacity(blades);
    for i in 0..blades {
        let mask = rng.gen_range(0..(1u32 << m));
        let mut num = rng.gen_range(-coeff_range..=coeff_range);
        if i == 0 && num == 0 {
            num = 1;
        }
        let den = rng.gen_range(1..=4i64);
        terms.push((mask, S::from_ratio(num, den)));
    }
    Multivector::from_terms(m, terms)
}

/// One-sided slice regular polynomial: a sum of ordered monomials
/// x₁^{a₁} ⊙ ⋯ ⊙ x_n^{a_n} with a random Clifford coefficient on the
/// right of each.
pub fn random_regular_function<S: Scalar>(
    rng: &mut ChaCha8Rng,
    m: u32,
    n: u32,
    cfg: &BatteryConfig,
) -> Result<SliceFunction<S>> {
    let terms = rng.gen_range(1..=cfg.max_terms);
    let mut f = SliceFunction::zero(m, n)?;
    for _ in 0..terms {
        let mut exps = vec![0u32; n as usize];
        let degree = rng.gen_range(0..=cfg.max_degree);
        for _ in 0..degree {
            let v = rng.gen_range(0..n) as usize;
            exps[v] += 1;
        }
        let c = random_multivector(rng, m, cfg.coeff_range)?;
        f = f.add(&SliceFunction::monomial(m, &exps, c)?)?;
    }
    Ok(f)
}

/// The deterministic battery: `cfg.count` random one-sided slice regular
/// polynomials over the configured dimensions and variable counts.
pub fn battery<S: Scalar>(cfg: &BatteryConfig) -> Result<Vec<SliceFunction<S>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(cfg.count);
    for _ in 0..cfg.count {
        let m = cfg.dims[rng.gen_range(0..cfg.dims.len())];
        let n = rng.gen_range(1..=cfg.max_vars);
        out.push(random_regular_function(&mut rng, m, n, cfg)?);
    }
    Ok(out)
}
