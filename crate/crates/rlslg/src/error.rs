use thiserror::Error;

/// Errors reported by every layer of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("grammar is cyclic (variable {var} reaches itself)")]
    CyclicGrammar { var: u32 },
    #[error("rule of symbol {var} has adjacent runs of the same symbol")]
    NonCanonicalRun { var: u32 },
    #[error("rule of symbol {var} has an exponent other than 1 in an SLG")]
    ExponentInSLG { var: u32 },
    #[error("rule of symbol {var} has a zero exponent")]
    ZeroExponent { var: u32 },
    #[error("start symbol expands to the empty string")]
    EmptyStartExpansion,
    #[error("rule of symbol {var} is empty")]
    EmptyRule { var: u32 },
    #[error("symbol {sym} is out of range")]
    UnknownSymbol { sym: u32 },
    #[error("terminal {sym} has zero weight")]
    ZeroWeight { sym: u32 },
    #[error("arithmetic overflow: weight exceeds {bits} bits")]
    Overflow { bits: u32 },
    #[error("expansion of length {len} exceeds cap {cap}")]
    TooLarge { len: u64, cap: u64 },
    #[error("empty input")]
    EmptyInput,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("malformed binary data: {0}")]
    Format(String),
    #[error("leaf block of {bits} bits exceeds budget of {budget} bits")]
    BlockTooWide { bits: u64, budget: u64 },
    #[error("input sequence is not sorted")]
    UnsortedInput,
    #[error("rank {rank} out of range (size {size})")]
    RankOutOfRange { rank: u64, size: u64 },
    #[error("level {level} out of range for node at level {max}")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("index {index} out of bounds (length {len})")]
    OutOfBounds { index: u64, len: u64 },
    #[error("index {index} outside node [{start}, {end})")]
    IndexOutOfNode { index: u64, start: u64, end: u64 },
    #[error("index {index} out of range (weight {weight})")]
    IndexOutOfRange { index: u64, weight: u64 },
    #[error("range [{start}, {end}) out of bounds (length {len})")]
    RangeOutOfBounds { start: u64, end: u64, len: u64 },
    #[error("memory budget out of range: {0}")]
    BudgetOutOfRange(String),
    #[error("index cannot satisfy the requested budget: {0}")]
    PlannerViolation(String),
    #[error("pop called at the root")]
    PopAtRoot,
    #[error("child requested on a leaf")]
    ChildOnLeaf,
    #[error("operation requires an index built in leafy mode over an unweighted string")]
    NotLeafyIndex,
    #[error("unknown terminal {0}")]
    UnknownTerminal(u32),
    #[error("grammar alphabet is not binary")]
    NonBinaryAlphabet,
    #[error("parameter overflow: {0}")]
    ParameterOverflow(String),
    #[error("parameters outside the supported regime: {0}")]
    RegimeViolation(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
