use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("`{dividend}` is not divisible by `{divisor}` with nonnegative integer quotient")]
    NotDivisible { dividend: String, divisor: String },
    #[error("`{atom}` coefficient {part} is not a summand of {total}")]
    NotASummand { atom: String, part: String, total: String },
    #[error("atom `{0}` is not registered")]
    UnregisteredAtom(String),
    #[error("unknown `{0}` has no declared dimension")]
    UnresolvedUnknown(String),
    #[error("name `{0}` is already registered")]
    DuplicateAtom(String),
    #[error("no realization available for `{0}`")]
    MissingRealization(String),
    #[error("rank in degree {degree} is symbolic ({rank})")]
    SymbolicRankPresent { degree: usize, rank: String },
    #[error("surface `{0}` has nonzero odd cohomology")]
    OddCohomologyUnsupported(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("neither `{0}` nor `{1}` is cellular")]
    NonCellularFactor(String, String),
    #[error("invalid rank: {0}")]
    InvalidRank(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("Hodge number overflow")]
    Overflow,
    #[error("torsion status of `{0}` is unknown")]
    UnknownTorsion(String),
    #[error("scenario facts rejected: {}", .0.join("; "))]
    InvalidScenario(Vec<String>),
    #[error(transparent)]
    Parse(#[from] crate::dsl::ParseError),
}
