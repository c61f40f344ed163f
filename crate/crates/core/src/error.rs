use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order exceeds the configured cap of {cap} elements")]
    OrderCapExceeded { cap: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("generator {index} has degree {found}, expected {expected}")]
    DegreeMismatch {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("element is not a member of the group")]
    NotAnElement,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("residue set is not a subgroup of the units modulo {modulus}")]
    NotASubgroup { modulus: u32 },
    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(u32, u32),
    #[error("residue {residue} is not coprime to {modulus}")]
    NonCoprime { residue: i64, modulus: u32 },
    #[error("cannot combine values of modulus {0} and {1}")]
    ModulusMismatch(u32, u32),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus must be positive")]
    ZeroModulus,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("common eigenspaces did not split into lines modulo {prime}")]
    EigenspaceSplitFailure { prime: u64 },
    #[error("lifted multiplicity {value} outside [0, {degree}] modulo {prime}")]
    LiftOutOfRange { value: u64, degree: u64, prime: u64 },
    #[error("no admissible prime split the class algebra after {attempts} attempts")]
    NoAdmissiblePrime { attempts: usize },
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("no character matches row {row} under residue {residue}")]
    RowMatchFailure { row: usize, residue: u32 },
    #[error("hypotheses not met: {0}")]
    HypothesesNotMet(String),
}

#[derive(Error, Debug)]
pub enum HarnessError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("{path}: line {line}, field `{field}`: {message}")]
    Parse {
        path: String,
        line: usize,
        field: String,
        message: String,
    },
    #[error("verdict store entry for {group} ({suite}) has hash {stored} but the spec hashes to {computed}")]
    HashMismatch {
        group: String,
        suite: String,
        stored: String,
        computed: String,
    },
    #[error("expected block mismatch for {group}: {field} expected {expected}, computed {computed}")]
    ExpectedMismatch {
        group: String,
        field: String,
        expected: u64,
        computed: u64,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Analysis(#[from] Error),
}

/// Any failure raised while analysing a single group.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Action(#[from] ActionError),
}
