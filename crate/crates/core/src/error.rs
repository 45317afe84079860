use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{0} is not of Fermat type (some weight does not divide the degree)")]
    NotFermat(String),

    #[error("genus formula does not give a non-negative integer for {0}")]
    NonIntegerGenus(String),

    #[error("w0={w0}, v0={v0} and ell={ell} share a common divisor")]
    CommonDivisor { w0: u64, v0: u64, ell: u64 },

    #[error("twist input has no Fermat member: {0}")]
    NotFermatCompatible(String),

    #[error("stratum meets the hypersurface in the empty set: {0}")]
    EmptyIntersection(String),

    #[error("stratum is not isolated on the hypersurface: {0}")]
    NotIsolatedOnX(String),

    #[error("d + d1 + d2 + d3 is odd for 1/{order}{weights:?}")]
    ParityViolation { order: u64, weights: Vec<u64> },

    #[error("1/{order}{weights:?} is not a Gorenstein (Calabi-Yau) quotient type")]
    NotGorenstein { order: u64, weights: Vec<u64> },

    #[error("no catalog fiber type with exponents {0:?}")]
    UnknownFiberType(Vec<u64>),

    #[error("{0} star fibers share the residual monodromy; the split is underdetermined")]
    MultipleResiduals(usize),

    #[error("{0} unknown Euler numbers in the budget; at most one can be solved")]
    Underdetermined(usize),

    #[error("no Euler number available for the proper transform in {0}")]
    MissingThetaEuler(String),

    #[error("fiber Euler number {graph} disagrees with the budget value {budget}")]
    InconsistentBudget { graph: i64, budget: i64 },

    #[error("two computations of {what} disagree: {first} vs {second}")]
    RouteMismatch {
        what: &'static str,
        first: String,
        second: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
