use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("dimension must be at least 1")]
    DimensionZero,
    #[error("group order {q}^{n} exceeds the supported integer range")]
    OrderOverflow { q: u64, n: u32 },
    #[error("element has {got} digits, expected {expected}")]
    DimensionMismatch { expected: u32, got: usize },
    #[error("digit {digit} is out of range for modulus {q}")]
    DigitOutOfRange { digit: u64, q: u64 },
    #[error("index {index} is out of range for a group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("range size must be at least 2, got {0}")]
    RangeTooSmall(u64),
    #[error("value {value} is not in [0, {range_size})")]
    ValueOutOfRange { value: u64, range_size: u64 },
    #[error("table has {got} values, expected {expected}")]
    TableLength { expected: usize, got: usize },
    #[error("auxiliary bit vector has {got} entries, expected {expected}")]
    AuxLength { expected: usize, got: usize },
    #[error("operands belong to different group or range configurations")]
    SpecMismatch,
    #[error("permutation is not a bijection on [0, {0})")]
    NotBijection(usize),
    #[error("tuple must have at least one component")]
    EmptyTuple,
    #[error("tuple length {m} exceeds the group order {order}")]
    TupleTooLong { m: usize, order: usize },
    #[error("tuple components are not pairwise distinct")]
    NotDistinct,
    #[error("{range_size}^{m} does not fit the dense 64-bit tuple encoding")]
    EncodingOverflow { range_size: u64, m: u32 },
    #[error("enumeration of {size} cases exceeds the feasibility guard of {guard}")]
    Infeasible { size: u128, guard: u128 },
    #[error("operation requires a binary domain and range (q = 2, |S| = 2)")]
    BinaryOnly,
    #[error("construction requires the group Z_2^n")]
    GroupNotBinary,
    #[error("oracle document is malformed: {0}")]
    Format(String),
    #[error("period is zero")]
    ZeroPeriod,
    #[error("period has selector bit 0: the injectivized oracle is itself periodic")]
    PeriodSelectorZero,
    #[error("no nontrivial period exists (sample rank reached the full dimension after {samples} samples)")]
    NoPeriod { samples: usize },
    #[error("sample budget {budget} exhausted at rank {rank}")]
    BudgetExhausted { budget: usize, rank: usize },
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Format(err.to_string())
    }
}
