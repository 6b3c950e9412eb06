use thiserror::Error;

use crate::jordan::Violation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown cuspidal label {0:?}")]
    UnknownLabel(String),

    #[error("invalid cuspidal label {id:?}: {reason}")]
    InvalidLabel { id: String, reason: String },

    #[error("duplicate Jordan block δ({rho},{m})")]
    DuplicateBlock { rho: String, m: u32 },

    #[error("invalid Jordan set: {}", format_violations(.0))]
    InvalidJordanSet(Vec<Violation>),

    #[error("δ({rho},{m}) is not a member of the Jordan set")]
    NotInJordanSet { rho: String, m: u32 },

    #[error("Jordan set has {0} blocks; at most 63 are supported")]
    TooManyBlocks(usize),

    #[error("element is not in the component group: {0}")]
    NotInComponentGroup(String),

    #[error("invalid component-group basis: {0}")]
    InvalidBasis(String),

    #[error("invalid character: {0}")]
    InvalidCharacter(String),

    #[error("segment line {segment} does not match reducibility data line {data}")]
    LineMismatch { segment: String, data: String },

    #[error("reducibility point {0} must be at least 1")]
    PointBelowOne(String),

    #[error("formulations disagree for δ({rho},{m}): direct rule {direct}, base rule {base}")]
    FormulationMismatch {
        rho: String,
        m: u32,
        direct: bool,
        base: bool,
    },

    #[error("invalid unramified parameter: {0}")]
    InvalidParam(String),

    #[error("rank {rank} is too large for explicit enumeration (limit {limit})")]
    RankTooLarge { rank: u32, limit: u32 },

    #[error("{0}")]
    OutOfRange(String),

    #[error("registry: {0}")]
    Registry(String),

    #[error("recursive construction stalled on a non-cuspidal character: {0}")]
    Stalled(String),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
