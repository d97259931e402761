use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {0}: every modulus must be at least 2")]
    InvalidModulus(i64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("element has {got} residues but the group has rank {expected}")]
    Arity { expected: usize, got: usize },

    #[error("residue {residue} is out of range for modulus {modulus}")]
    ResidueOutOfRange { residue: i64, modulus: u64 },

    #[error("group order {order} exceeds the feasibility cap {cap}")]
    TooLarge { order: u64, cap: u64 },

    /// The search ran out of nodes. `lower_bound` is certified by an explicit
    /// sequence and is never the exact answer.
    #[error("search budget exhausted after {nodes} nodes; certified lower bound {lower_bound}")]
    BudgetExhausted { lower_bound: u64, nodes: u64 },

    #[error("D^{s} is unbounded: s = {s} is below the exponent {exponent}")]
    Unbounded { s: u64, exponent: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invariant breach: {0}")]
    InvariantBreach(String),
}
