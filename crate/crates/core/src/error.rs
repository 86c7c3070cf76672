use thiserror::Error;

/// Errors across geometry validation, dictionary construction, signaling and
/// the simulation layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("antenna index {index} out of range for {m} candidate antennas")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("subarray indices must be strictly increasing")]
    UnorderedSubarray,
    #[error("no real maximal spread angle: aperture M*d = {aperture} wavelengths < 1")]
    NoMaximalSpreadAngle { aperture: f64 },
    #[error("invalid permutation")]
    InvalidPermutation,
    #[error("waveform bank needs Ns >= K, got K={k}, Ns={ns}")]
    BankTooShort { k: usize, ns: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("rotation magnitude deviates from unity by more than 1e-9")]
    NonUnitRotation,
    #[error("subarray size K={k} invalid for M={m}")]
    SubsetTooLarge { k: usize, m: usize },
    #[error("requested {requested} symbols but only {available} candidates exist")]
    DictionaryTooLarge { requested: u128, available: u128 },
    #[error("analytic extreme pair requires even M (got {m}) and K <= M/2 (got {k})")]
    NoAnalyticPair { m: usize, k: usize },
    #[error("dictionary size must be a power of two >= 2 (got {0})")]
    NotPowerOfTwo(usize),
    #[error("selection vector not boolean after {0} iterations")]
    NonBooleanSelection(usize),
    #[error("sidelobe level {eps_linear} (linear) infeasible for this configuration")]
    InfeasibleSidelobe { eps_linear: f64 },
    #[error("only {passed} of the required {requested} subarrays meet the sidelobe constraint")]
    NotEnoughFeasibleSubarrays { requested: usize, passed: usize },
    #[error("permutation enumeration refused for K={0} > 10")]
    PermutationSpaceTooLarge(usize),
    #[error("dictionary must hold at least two symbols")]
    SingletonDictionary,
    #[error("bit block length {got} does not match {expected} bits per symbol")]
    BitLengthMismatch { expected: usize, got: usize },
    #[error("bit index {index} outside dictionary of {size} symbols")]
    IndexOutsideDictionary { index: usize, size: usize },
    #[error("channel gain must be nonzero")]
    ZeroChannelGain,
    #[error("SNR must be nonnegative, got {0}")]
    NegativeSnr(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("scheme mismatch: expected {expected}, dictionary is {got}")]
    SchemeMismatch { expected: String, got: String },
    #[error("dictionary file: {0}")]
    DictionaryFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
