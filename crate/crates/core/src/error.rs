use thiserror::Error;

use crate::f2::SigVec;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("wire count {0} out of range (1..={max})", max = crate::f2::MAX_WIRES)]
    WireCount(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("bits {bits:#b} do not fit in {n} wires")]
    BitsOutOfRange { bits: u32, n: usize },

    #[error("vectors are linearly dependent (rank {rank} < {n})")]
    NotABasis { rank: usize, n: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("wire {wire} out of range for {n} wires")]
    WireOutOfRange { wire: usize, n: usize },

    #[error("CX({control}, {target}) has equal control and target")]
    SelfLoop { control: usize, target: usize },

    #[error("CX({control}, {target}) is not allowed by the {topology} topology")]
    TopologyViolation { control: usize, target: usize, topology: String },

    #[error("circuit is not SPA-complete: {missing} signatures never visited")]
    NotSpaComplete { missing: usize },

    #[error("circuit contains symbolic angles")]
    SymbolicAngle,

    #[error("no angle available for signature {0}")]
    UnknownSignature(SigVec),

    #[error("phase vector length {0} is not a power of two >= 2")]
    PhaseLength(usize),

    #[error("trinomial x^{n} + x^{l} + 1 is reducible")]
    Reducible { n: usize, l: usize },

    #[error("invalid trinomial exponent l = {l} for degree {n}")]
    TrinomialExponent { n: usize, l: usize },

    #[error("2^{n} - 1 factorization is limited to n <= {max}", max = crate::f2::poly::MAX_FACTOR_DEGREE)]
    DegreeTooLarge { n: usize },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("no zero-set with a nonsingular system was found")]
    SymmetryExhausted,

    #[error("no solution within depth budget {budget}")]
    BudgetExceeded { budget: usize },

    #[error("search stopped after {nodes} expanded states")]
    NodeLimit { nodes: u64 },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
