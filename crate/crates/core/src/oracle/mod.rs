//! Exact Magnus expansions and finite p-group shadows used to check
//! statements about normal subgroups of free groups.

use thiserror::Error;

mod magnus;
mod quotient;
mod shadow;

pub use magnus::{lcs_degree, magnus_expand, LcsDegree, Monomial, TruncatedSeries};
pub use quotient::{
    build_quotient, subgroup_op, QuotientGroup, SubgroupHandle, SubgroupOp, DEFAULT_BUDGET,
};
pub use shadow::{
    shadow_congruent, shadow_of_i3, FactorReport, FactorShadow, Shadow, ShadowReport, WordReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("the degree bound must be at least 1")]
    ZeroDegree,
    #[error("enumeration budget of {bound} exceeded while {what}")]
    BudgetExceeded { what: String, bound: usize },
    #[error("word has {found} generators but the quotient was built for {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("subgroups belong to different quotient groups")]
    OwnerMismatch,
    #[error("series differ in rank, degree bound or modulus")]
    IncompatibleSeries,
    #[error("expected {expected} classes, found {found}")]
    WrongClassCount { expected: String, found: usize },
}
