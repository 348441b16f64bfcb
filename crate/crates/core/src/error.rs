use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("element is not self-adjoint (residual {residual:.3e})")]
    NotSelfAdjoint { residual: f64 },
    #[error("element is not invertible (smallest singular value {sigma_min:.3e})")]
    NotInvertible { sigma_min: f64 },
    #[error("block shapes do not match: {0}")]
    ShapeMismatch(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),

    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("group of order {order} exceeds the configured bound {bound}")]
    GroupTooLarge { order: usize, bound: usize },
    #[error("no 1x1 block carries the counit character (residual {residual:.3e})")]
    NoCharacterBlock { residual: f64 },
    #[error("Haar invariance system has a {nullity}-dimensional solution space")]
    NonUniqueHaar { nullity: usize },
    #[error("antipode composed with the involution is not involutive (residual {residual:.3e})")]
    NotInvolutive { residual: f64 },
    #[error("Haar state is not tracial (residual {residual:.3e})")]
    NotTracial { residual: f64 },
    #[error("block decomposition failed: {0}")]
    Decomposition(String),

    #[error("homomorphism is not injective (rank {rank} < {dim})")]
    NotInjective { rank: usize, dim: usize },
    #[error("map is not a unital *-homomorphism: {reason}")]
    NotStarHom { reason: String },

    #[error("map does not fix the centre (residual {residual:.3e})")]
    NotBlockPreserving { residual: f64 },
    #[error("block {block} is neither multiplicative nor anti-multiplicative (residuals {auto:.3e} / {anti:.3e})")]
    NeitherAutoNorAnti { block: usize, auto: f64, anti: f64 },
    #[error("dual sandwich disagrees with the induced dual action (residual {residual:.3e})")]
    ConventionMismatch { residual: f64 },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("classification changed between perturbation sizes: {0}")]
    ClassificationUnstable(String),

    #[error("Haar state is not faithful on the GNS space")]
    HaarNotFaithful,
    #[error("pentagon equation fails (residual {residual:.3e})")]
    PentagonFailed { residual: f64 },
    #[error("leg algebras do not match (subspace distance {distance:.3e})")]
    LegMismatch { distance: f64 },
    #[error("operator is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },
    #[error("operator is not a simple tensor (singular value ratio {ratio:.3e})")]
    NotSimpleTensor { ratio: f64 },
    #[error("operator does not commute with the multiplicative unitary (residual {residual:.3e})")]
    CommutantViolation { residual: f64 },
    #[error("spectrum covers the unit circle; no branch cut available")]
    SpectrumFullCircle,
    #[error("element is not in the Lie algebra (residual {residual:.3e})")]
    NotInLieAlgebra { residual: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}
