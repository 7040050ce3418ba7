use thiserror::Error;

/// Error type shared by the whole tower.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("algebra dimension m={0} must be odd")]
    EvenAlgebraDimension(u32),
    #[error("m=1 is not supported: the Sce exponent (m-1)/2 degenerates to 0")]
    AlgebraDimensionOne,
    #[error("algebra dimension m={0} outside the supported range 3..=15")]
    AlgebraDimensionOutOfRange(u32),
    #[error("blade index set {mask:#x} does not fit inside {{1..{m}}}")]
    BladeOutOfRange { mask: u32, m: u32 },
    #[error("operands live in different algebras: m={left} vs m={right}")]
    MismatchedAlgebra { left: u32, right: u32 },
    #[error("operands have different signatures: (m,n)=({lm},{ln}) vs ({rm},{rn})")]
    MismatchedSignature { lm: u32, ln: u32, rm: u32, rn: u32 },
    #[error("variable index {h} outside 1..={n}")]
    VariableOutOfRange { h: u32, n: u32 },
    #[error("iteration order k={k} must be at least 1")]
    IterationOrder { k: u32 },
    #[error("value has nonzero components of grade 2 or higher; not a paravector")]
    NotAParavector,
    #[error("vector has zero norm; not invertible")]
    ZeroNorm,
    #[error("exact evaluation needs a rational norm, but beta^2 = {beta_sq} is not a perfect square")]
    IrrationalBeta { beta_sq: String },
    #[error("stem violates the parity law in component {{{component}}}, variable {h}")]
    ParityViolation { component: String, h: u32 },
    #[error("negative exponent of alpha_{h} is not allowed in a stem")]
    NegativeAlphaExponent { h: u32 },
    #[error("stem carries negative beta-exponents; construct with the Laurent extension instead")]
    LaurentStem,
    #[error("evaluation hits a pole: beta_{h} = 0 with a negative beta_{h}-exponent")]
    EvaluationAtPole { h: u32 },
    #[error("subset {{{sub}}} is not contained in {{{sup}}}")]
    SubsetNotContained { sub: String, sup: String },
    #[error("function is not holomorphic in variable {h}, which this operator requires")]
    HolomorphyRequired { h: u32 },
    #[error("function is not slice regular with respect to variable {h}")]
    SliceRegularityRequired { h: u32 },
    #[error("function is not slice with respect to variable {h}")]
    SlicenessRequired { h: u32 },
    #[error("input is not polyharmonic of degree {p} in variable {h}")]
    NotPolyharmonic { h: u32, p: u32 },
    #[error("decomposition component is not harmonic in variable {h}; internal inconsistency")]
    NotHarmonic { h: u32 },
    #[error("reconstruction residual is nonzero; internal inconsistency")]
    ReconstructionFailed,
    #[error("decomposition depth {p} exceeds the supported bound {max}")]
    DepthExceeded { p: u32, max: u32 },
    #[error("input is not homogeneous: found total degrees {a} and {b}")]
    NotHomogeneous { a: i64, b: i64 },
    #[error("double factorial argument {0} falls outside the (-1)!!=1 convention")]
    DoubleFactorialRange(i64),
    #[error("polynomial is not odd in the radial variable; cannot factor")]
    NotOddInB,
    #[error("representation formula needs an invertible difference of imaginary units")]
    UnitsNotSeparated,
    #[error("operation requires a single-variable function (n=1), got n={n}")]
    NotOneVariable { n: u32 },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("malformed JSON input: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
