use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("valuation of zero is undefined")]
    ZeroValuation,
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed extension tower: {0}")]
    MalformedTower(String),
    #[error("unsupported request: {0}")]
    Unsupported(String),
    #[error("degenerate quadratic space")]
    DegenerateSpace,
    #[error("degenerate quadratic lattice")]
    DegenerateLattice,
    #[error("objects live over different fields")]
    FieldMismatch,
    #[error("objects live over different rings")]
    RingMismatch,
    #[error("dimension of the represented space exceeds the ambient dimension")]
    DimensionOrder,
    #[error("lattice is not modular")]
    NotModular,
    #[error("reflection along an isotropic vector")]
    IsotropicVector,
    #[error("matrix does not preserve the quadratic form")]
    NotIsometry,
    #[error("target value is zero")]
    ZeroTarget,
    #[error("not a sublattice: {0}")]
    NotSublattice(String),
    #[error("rank gap {0} is below 3 and no explicit place list was given")]
    GapTooSmall(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
