use num_bigint::BigInt;
use thiserror::Error;

use crate::hyperelliptic::HypProfile;
use crate::quartic::ValuationProfile;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("p = 2 is not supported: residue characteristic must be odd")]
    EvenPrime,
    #[error("{0} is not a prime")]
    NotPrime(BigInt),
    #[error("negative valuation: cannot reduce modulo p")]
    NegativeValuation,
    #[error("every entry of the weighted tuple is zero")]
    AllInfinite,
    #[error("zero has no prime factorisation")]
    ZeroInput,
    #[error("singular curve: discriminant vanishes")]
    SingularCurve,
    #[error("internal invariant relation failed")]
    RelationViolated,
    #[error("no table row matches the valuation profile {0}")]
    UnmatchedProfile(Box<ValuationProfile>),
    #[error("no hyperelliptic table row matches {0}")]
    UnmatchedHypProfile(Box<HypProfile>),
    #[error("several table rows match: {0:?}")]
    MultiMatch(Vec<String>),
    #[error("no coordinate permutation satisfies the arrangement hypotheses")]
    ArrangementNotFound,
    #[error("inconsistent results: {0}")]
    Inconsistent(String),
    #[error("degenerate orbit element: denominator vanishes")]
    DegenerateOrbit,
    #[error("degenerate branch point")]
    DegeneratePoint,
    #[error("invalid branch data: {0}")]
    InvalidBranchData(String),
    #[error("reduced transition matrix has unexpected rank")]
    RankAnomaly,
    #[error("component adjacency is not a tree")]
    NotATree,
    #[error("stable graph matches no catalogue entry")]
    UnknownType,
    #[error("cover genus is {0}, expected 3")]
    GenusMismatch(i64),
    #[error("invalid marked tree: {0}")]
    InvalidTree(String),
}

pub type Result<T> = std::result::Result<T, Error>;
