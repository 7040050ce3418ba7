//! Exact arithmetic in the Clifford algebra R_m, m odd.
//!
//! Basis blades e_A are indexed by subsets A of {1..m} stored as bitmasks
//! (bit i-1 set means e_i participates). The generators satisfy
//! e_i e_j + e_j e_i = -2 delta_ij, so e_A e_B = sigma(A,B) e_{A xor B} with
//! a sign computed from transposition counts and the squared generators.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;

/// Checks the standing assumption on the algebra dimension: odd, 3..=15.
pub fn check_m(m: u32) -> Result<()> {
    if m == 1 {
        return Err(Error::AlgebraDimensionOne);
    }
    if m.is_multiple_of(2) {
        return Err(Error::EvenAlgebraDimension(m));
    }
    if !(3..=15).contains(&m) {
        return Err(Error::AlgebraDimensionOutOfRange(m));
    }
    Ok(())
}

/// Sce exponent gamma_m = (m-1)/2.
pub fn gamma(m: u32) -> u32 {
    (m - 1) / 2
}

/// Sign of e_A * e_B: (-1)^(transpositions needed to interleave) times
/// (-1)^|A ∩ B| from the squared generators.
pub fn blade_product_sign(a: u32, b: u32) -> i32 {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        // generators of a with index strictly above j must move past e_{j+1}
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    let negatives = (a & b).count_ones();
    if (swaps + negatives).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sign of conjugation on a grade-k blade: (-1)^(k(k+1)/2).
pub fn conjugation_sign(k: u32) -> i32 {
    if (k * (k + 1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Element of R_m as a sparse association from blade masks to coefficients.
#[derive(Clone, PartialEq)]
pub struct Multivector<S: Scalar> {
    m: u32,
    terms: BTreeMap<u32, S>,
}

impl<S: Scalar> Multivector<S> {
    /// The zero element of R_m.
    pub fn zero(m: u32) -> Result<Self> {
        check_m(m)?;
        Ok(Multivector {
            m,
            terms: BTreeMap::new(),
        })
    }

    /// A real scalar viewed as a grade-0 element.
    pub fn scalar(m: u32, value: S) -> Result<Self> {
        let mut x = Self::zero(m)?;
        x.add_term(0, value);
        Ok(x)
    }

    /// The basis blade e_A for a subset mask A (0 is the scalar unit).
    pub fn basis_blade(m: u32, mask: u32) -> Result<Self> {
        check_m(m)?;
        if mask >> m != 0 {
            return Err(Error::BladeOutOfRange { mask, m });
        }
        let mut x = Multivector {
            m,
            terms: BTreeMap::new(),
        };
        x.add_term(mask, S::one());
        Ok(x)
    }

    /// The generator e_i, 1 <= i <= m.
    pub fn basis_vector(m: u32, i: u32) -> Result<Self> {
        if i == 0 || i > m {
            return Err(Error::BladeOutOfRange { mask: 1 << (i.max(1) - 1), m });
        }
        Self::basis_blade(m, 1 << (i - 1))
    }

    /// Builds from (mask, coefficient) pairs, dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (u32, S)>>(m: u32, terms: I) -> Result<Self> {
        let mut x = Self::zero(m)?;
        for (mask, c) in terms {
            if mask >> m != 0 {
                return Err(Error::BladeOutOfRange { mask, m });
            }
            x.add_term(mask, c);
        }
        Ok(x)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates (mask, coefficient) pairs in ascending mask order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &S)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn coefficient(&self, mask: u32) -> S {
        self.terms.get(&mask).cloned().unwrap_or_else(S::zero)
    }

    fn add_term(&mut self, mask: u32, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mask) {
            Some(existing) => {
                let sum = existing.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&mask);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(mask, c);
            }
        }
    }

    fn check_same_m(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::MismatchedAlgebra {
                left: self.m,
                right: other.m,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_m(other)?;
        let mut out = self.clone();
        for (mask, c) in other.terms() {
            out.add_term(mask, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Multivector {
            m: self.m,
            terms: BTreeMap::new(),
        };
        for (mask, c) in self.terms() {
            out.terms.insert(mask, c.neg());
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Multivector {
            m: self.m,
            terms: BTreeMap::new(),
        };
        if s.is_zero() {
            return out;
        }
        for (mask, c) in self.terms() {
            let v = c.mul(s);
            if !v.is_zero() {
                out.terms.insert(mask, v);
            }
        }
        out
    }

    /// The Clifford (geometric) product, bilinear over the blade rule.
    pub fn clifford_product(&self, other: &Self) -> Result<Self> {
        self.check_same_m(other)?;
        let mut out = Self::zero(self.m)?;
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let sign = blade_product_sign(a, b);
                let mut c = ca.mul(cb);
                if sign < 0 {
                    c = c.neg();
                }
                out.add_term(a ^ b, c);
            }
        }
        Ok(out)
    }

    /// Clifford conjugation: grade-k parts scale by (-1)^(k(k+1)/2).
    pub fn conjugate(&self) -> Self {
        let mut out = Multivector {
            m: self.m,
            terms: BTreeMap::new(),
        };
        for (mask, c) in self.terms() {
            let v = if conjugation_sign(mask.count_ones()) < 0 {
                c.neg()
            } else {
                c.clone()
            };
            out.terms.insert(mask, v);
        }
        out
    }

    /// Restriction to blades of grade k.
    pub fn grade_project(&self, k: u32) -> Self {
        let mut out = Multivector {
            m: self.m,
            terms: BTreeMap::new(),
        };
        for (mask, c) in self.terms() {
            if mask.count_ones() == k {
                out.terms.insert(mask, c.clone());
            }
        }
        out
    }

    pub fn max_grade(&self) -> u32 {
        self.terms
            .keys()
            .map(|mask| mask.count_ones())
            .max()
            .unwrap_or(0)
    }

    pub fn scalar_part(&self) -> S {
        self.coefficient(0)
    }

    /// True when only grades 0 and 1 are populated.
    pub fn is_paravector(&self) -> bool {
        self.terms.keys().all(|mask| mask.count_ones() <= 1)
    }

    /// True when every coefficient multiplies the scalar unit.
    pub fn is_real(&self) -> bool {
        self.terms.keys().all(|mask| *mask == 0)
    }

    /// Splits a paravector into (alpha, beta, J). beta^2 is always exact;
    /// beta itself only exists in the scalar domain (perfect squares for
    /// rationals). J is the normalized vector part, absent when beta = 0 or
    /// when beta is unrepresentable.
    pub fn paravector_parts(&self) -> Result<ParavectorParts<S>> {
        if !self.is_paravector() {
            return Err(Error::NotAParavector);
        }
        let alpha = self.scalar_part();
        let mut beta_sq = S::zero();
        for (mask, c) in self.terms() {
            if mask != 0 {
                beta_sq = beta_sq.add(&c.mul(c));
            }
        }
        let beta = beta_sq.sqrt_exact();
        let unit = match &beta {
            Some(b) if !b.is_zero() => {
                let vector = self.grade_project(1);
                Some(vector.scale(&S::one().div(b)))
            }
            _ => None,
        };
        Ok(ParavectorParts {
            alpha,
            beta_sq,
            beta,
            unit,
        })
    }

    /// Inverse of a paravector v with real nonzero v * conjugate(v):
    /// conjugate(v) / (v * conjugate(v)).
    pub fn vector_inverse(&self) -> Result<Self> {
        if !self.is_paravector() {
            return Err(Error::NotAParavector);
        }
        let conj = self.conjugate();
        let norm = self.clifford_product(&conj)?;
        if !norm.is_real() {
            return Err(Error::NotAParavector);
        }
        let nsq = norm.scalar_part();
        if nsq.is_zero() {
            return Err(Error::ZeroNorm);
        }
        Ok(conj.scale(&S::one().div(&nsq)))
    }

    /// True iff x is a grade-1 element with x^2 = -1 (an element of the
    /// sphere of imaginary units).
    pub fn is_imaginary_unit(&self) -> bool {
        if self.is_zero() || !self.terms.keys().all(|mask| mask.count_ones() == 1) {
            return false;
        }
        match self.clifford_product(self) {
            Ok(sq) => sq.is_real() && sq.scalar_part().add(&S::one()).is_zero(),
            Err(_) => false,
        }
    }

    /// Largest absolute coefficient, for relative-error denominators.
    pub fn max_abs_f64(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max)
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Multivector<T> {
        let mut terms = BTreeMap::new();
        for (mask, c) in self.terms() {
            let v = f(c);
            if !v.is_zero() {
                terms.insert(mask, v);
            }
        }
        Multivector { m: self.m, terms }
    }

    pub fn to_f64(&self) -> Multivector<f64> {
        self.map_scalars(|c| c.to_f64())
    }
}

/// Decomposition of a paravector as alpha + J beta.
#[derive(Clone, Debug)]
pub struct ParavectorParts<S: Scalar> {
    pub alpha: S,
    pub beta_sq: S,
    pub beta: Option<S>,
    pub unit: Option<Multivector<S>>,
}

/// Renders a blade mask in the text syntax: "1", "e1", "e13", or for
/// algebras with m > 9 the braced form "e{1,13}".
pub fn format_blade(mask: u32, m: u32) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    let indices: Vec<u32> = (1..=m).filter(|i| mask & (1 << (i - 1)) != 0).collect();
    if m <= 9 {
        let digits: String = indices.iter().map(|i| i.to_string()).collect();
        format!("e{digits}")
    } else {
        let list = indices
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!("e{{{list}}}")
    }
}

/// Parses the blade text syntax; accepts "1", juxtaposed single digits
/// ("e13"), and the braced list form ("e{1,13}").
pub fn parse_blade(text: &str, m: u32) -> Result<u32> {
    let err = |msg: &str| Error::Parse {
        pos: 0,
        msg: format!("blade '{text}': {msg}"),
    };
    if text == "1" {
        return Ok(0);
    }
    let rest = text
        .strip_prefix('e')
        .ok_or_else(|| err("expected '1' or an 'e' prefix"))?;
    let mut mask = 0u32;
    let mut push = |i: u32| -> Result<()> {
        if i == 0 || i > m {
            return Err(Error::BladeOutOfRange {
                mask: 1 << i.max(1).saturating_sub(1),
                m,
            });
        }
        let bit = 1 << (i - 1);
        if mask & bit != 0 {
            return Err(err("repeated index"));
        }
        mask |= bit;
        Ok(())
    };
    if let Some(inner) = rest.strip_prefix('{') {
        let inner = inner.strip_suffix('}').ok_or_else(|| err("missing '}'"))?;
        for part in inner.split(',') {
            let i: u32 = part.trim().parse().map_err(|_| err("bad index"))?;
            push(i)?;
        }
    } else {
        if rest.is_empty() {
            return Err(err("missing indices"));
        }
        for ch in rest.chars() {
            let i = ch.to_digit(10).ok_or_else(|| err("bad digit"))?;
            push(i)?;
        }
    }
    Ok(mask)
}

impl<S: Scalar> fmt::Display for Multivector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut keys: Vec<u32> = self.terms.keys().copied().collect();
        keys.sort_by_key(|mask| (mask.count_ones(), *mask));
        for (i, mask) in keys.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let c = &self.terms[mask];
            if *mask == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})*{}", format_blade(*mask, self.m))?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for Multivector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector(m={}, {})", self.m, self)
    }
}
