use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("instance must have at least one agent")]
    ZeroAgents,
    #[error("expected {expected} rankings (one per agent), found {found}")]
    AgentCountMismatch { expected: usize, found: usize },
    #[error("ranking length k = {k} exceeds the number of goods m = {m}")]
    KTooLarge { k: usize, m: usize },
    #[error("agent {agent} ranks good {good} more than once")]
    DuplicateGoodInRanking { agent: usize, good: usize },
    #[error("agent {agent} ranks {found} goods, expected {expected}")]
    RankingLengthMismatch {
        agent: usize,
        expected: usize,
        found: usize,
    },
    #[error("agent {agent} ranks good {good}, which is outside 0..{m}")]
    GoodIdOutOfRange { agent: usize, good: usize, m: usize },
    #[error("good {good} is outside 0..{m}")]
    GoodOutOfRange { good: usize, m: usize },
    #[error("agent {agent} is outside 0..{n}")]
    AgentOutOfRange { agent: usize, n: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("agent {agent} has a negative value for good {good}")]
    NegativeValue { agent: usize, good: usize },
    #[error("values of agent {agent} sum to {sum}, not 1")]
    NotUnitSum { agent: usize, sum: String },
    #[error("valuations are not consistent with the rankings (agent {agent})")]
    InconsistentValuations { agent: usize },
    #[error("good {good} is assigned more than once")]
    GoodAssignedTwice { good: usize },
    #[error("good {good} is not assigned to any agent")]
    GoodUnassigned { good: usize },
    #[error("probabilities must be non-negative and sum to 1 (sum is {0})")]
    BadProbabilities(String),
    #[error("harmonic number requires n >= 1")]
    ZeroN,
    #[error("the market has no goods")]
    EmptyMarket,
    #[error("{what}: {found} exceeds the cap of {limit}")]
    CapExceeded {
        what: &'static str,
        limit: u64,
        found: u64,
    },
    #[error("agent {agent} has no ranked good left at pick {pick} while unranked goods remain")]
    PickWithoutRankedGood { pick: usize, agent: usize },
    #[error("picking sequence of length {len} is longer than the {m} goods")]
    SequenceTooLong { len: usize, m: usize },
    #[error("{leftovers} leftover goods cannot go one each to {n} agents")]
    TooManyLeftovers { leftovers: usize, n: usize },
    #[error("k = {k} is below the EF1 threshold {threshold}")]
    KBelowThreshold { k: usize, threshold: usize },
    #[error("rule requires m > n (n = {n}, m = {m})")]
    MNotGreaterThanN { n: usize, m: usize },
    #[error("rule requires k >= {required} (k = {k})")]
    KBelowN { k: usize, required: usize },
    #[error("rule requires k >= 1")]
    KZero,
    #[error("more than {0} deadlines fall at or before position {0}")]
    InfeasibleDeadlines(usize),
    #[error("deadline must be a position >= 1")]
    ZeroDeadline,
    #[error("schedule needs {needed} positions but only {length} were requested")]
    ScheduleTooShort { needed: usize, length: usize },
    #[error("alpha {0} is outside [0, 1]")]
    AlphaOutOfRange(String),
    #[error("agents do not agree on the set of ranked goods")]
    TopKSetsDisagree,
    #[error("construction requires n >= {min} (n = {n})")]
    NTooSmall { n: usize, min: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown rule identifier `{0}`")]
    UnknownRule(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
