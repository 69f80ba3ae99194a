use thiserror::Error;

use crate::graph::EdgeId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("every edge has an empty interval")]
    AllEdgesEmptyInterval,
    #[error("time step {t} outside [1, {m}]")]
    TimeOutOfRange { t: usize, m: usize },
    #[error("unknown edge id {0}")]
    UnknownEdgeId(u32),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("edge {edge}: {reason}")]
    MalformedEdge { edge: EdgeId, reason: String },
    #[error("{count} edges available at time step {t}, at most {bound} allowed")]
    DensityViolation {
        t: usize,
        count: usize,
        bound: usize,
    },
    #[error("cost overflow")]
    CostOverflow,

    #[error("string `{0}` is shorter than the order")]
    StringTooShort(String),
    #[error("letter `{0}` is not in the alphabet")]
    LetterNotInAlphabet(char),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("order k={0} must be at least 2")]
    InvalidOrder(usize),
    #[error("size budget exceeded: {0}")]
    SizeBudgetExceeded(String),
    #[error("k-mer `{0}` is not an edge of the graph")]
    UnknownKmer(String),
    #[error("interval {lo}:{hi} outside [1, {m}]")]
    IntervalOutOfRange { lo: usize, hi: usize, m: usize },
    #[error("trail is not valid on this graph")]
    InvalidTrail,
    #[error("graph is not a de Bruijn graph: {0}")]
    NotDeBruijn(String),

    #[error("parallel copies of `{0}` disagree on cost at a shared time step")]
    UnequalParallelCosts(String),
    #[error("no unused copy available at time step {0}")]
    NoCopyAvailable(usize),
    #[error("state budget of {0} exceeded")]
    SolverBudgetExceeded(usize),
    #[error("instance has {m} edges, oracle cap is {cap}")]
    CapExceeded { m: usize, cap: usize },
    #[error("instance is infeasible")]
    Infeasible,
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("not a Hamiltonian path of the source graph")]
    NotAHamiltonianPath,
    #[error("source graph needs at least {0} nodes")]
    TooFewNodes(usize),

    #[error("no order k in range has at least {z} reconstructions")]
    NoSuchK { z: u64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("profile infeasible: {0}")]
    ProfileInfeasible(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
